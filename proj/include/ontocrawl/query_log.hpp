#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ontocrawl {

// Thread-safe append-only list of JSON records, optionally mirrored line by
// line to a file (JSON Lines).
class JsonlLog {
 public:
  JsonlLog() = default;
  JsonlLog(const JsonlLog&) = delete;
  JsonlLog& operator=(const JsonlLog&) = delete;

  // Mirrors subsequent records to `path`. Existing content is kept when
  // `append` is set, otherwise the file is truncated.
  void open_sink(const std::filesystem::path& path, bool append);
  void close_sink();

  void append(nlohmann::json record);

  std::vector<nlohmann::json> records() const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::vector<nlohmann::json> records_;
  std::optional<std::ofstream> sink_;
};

// One knowledge-source interaction. For chat-completion backends this is one
// logical request (retries folded into `attempts`); for the mock it is one
// contract call.
struct QueryRecord {
  std::string template_name;
  std::string prompt;
  nlohmann::json params = nlohmann::json::object();
  std::string reply;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  double latency_ms = 0.0;
  std::string phase;
  bool cached = false;
  int attempts = 1;
  std::string error;

  nlohmann::json to_json() const;
};

class QueryLog {
 public:
  void open_sink(const std::filesystem::path& path, bool append) {
    log_.open_sink(path, append);
  }
  void close_sink() { log_.close_sink(); }

  void append(const QueryRecord& record) { log_.append(record.to_json()); }

  std::vector<nlohmann::json> records() const { return log_.records(); }
  std::size_t size() const { return log_.size(); }

 private:
  JsonlLog log_;
};

}  // namespace ontocrawl
