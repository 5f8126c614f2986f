#include "ontocrawl/query_log.hpp"

#include "ontocrawl/errors.hpp"

namespace ontocrawl {

void JsonlLog::open_sink(const std::filesystem::path& path, bool append) {
  std::lock_guard lock(mutex_);
  sink_.emplace(path, append ? std::ios::app : std::ios::trunc);
  if (!*sink_) {
    sink_.reset();
    throw InvalidInputError("cannot open log file " + path.string());
  }
}

void JsonlLog::close_sink() {
  std::lock_guard lock(mutex_);
  sink_.reset();
}

void JsonlLog::append(nlohmann::json record) {
  std::lock_guard lock(mutex_);
  if (sink_) {
    *sink_ << record.dump() << '\n';
    sink_->flush();
  }
  records_.push_back(std::move(record));
}

std::vector<nlohmann::json> JsonlLog::records() const {
  std::lock_guard lock(mutex_);
  return records_;
}

std::size_t JsonlLog::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

nlohmann::json QueryRecord::to_json() const {
  nlohmann::json doc{
      {"template_name", template_name},
      {"prompt", prompt},
      {"params", params},
      {"reply", reply},
      {"prompt_tokens", prompt_tokens},
      {"completion_tokens", completion_tokens},
      {"latency_ms", latency_ms},
  };
  if (!phase.empty()) doc["phase"] = phase;
  if (cached) doc["cached"] = true;
  if (attempts != 1) doc["attempts"] = attempts;
  if (!error.empty()) doc["error"] = error;
  return doc;
}

}  // namespace ontocrawl
