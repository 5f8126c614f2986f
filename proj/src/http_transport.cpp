#include "ontocrawl/http_transport.hpp"

#include <cstdlib>

#include <httplib.h>

#include "ontocrawl/errors.hpp"

namespace ontocrawl {

std::string api_key_from_env(const char* variable) {
  const char* value = std::getenv(variable);
  if (value == nullptr || *value == '\0') {
    throw ConfigError(std::string("environment variable ") + variable + " is not set");
  }
  return value;
}

HttpChatTransport::HttpChatTransport(HttpTransportOptions options)
    : options_(std::move(options)) {
  if (options_.base_url.empty()) throw ConfigError("API base URL must not be empty");
}

ChatResponse parse_chat_response(const std::string& body) {
  try {
    const auto doc = nlohmann::json::parse(body);
    ChatResponse r;
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    r.text = content.is_null() ? "" : content.get<std::string>();
    if (doc.contains("usage")) {
      r.prompt_tokens = doc["usage"].value("prompt_tokens", std::uint64_t{0});
      r.completion_tokens = doc["usage"].value("completion_tokens", std::uint64_t{0});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("unexpected chat-completion response: ") + e.what());
  }
}

ChatResponse HttpChatTransport::send(const ChatRequest& request) {
  httplib::Client client(options_.base_url);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  client.set_write_timeout(options_.timeout);

  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }
  auto res = client.Post(options_.path, headers, request.to_json().dump(),
                         "application/json");
  if (!res) {
    throw TransportError("request to " + options_.base_url + " failed: " +
                             httplib::to_string(res.error()),
                         true);
  }
  const int status = res->status;
  if (status == 429 || status >= 500) {
    throw TransportError("HTTP " + std::to_string(status), true);
  }
  if (status != 200) {
    throw TransportError("HTTP " + std::to_string(status) + ": " + res->body, false);
  }
  try {
    return parse_chat_response(res->body);
  } catch (const ParseError& e) {
    throw TransportError(e.what(), false);
  }
}

}  // namespace ontocrawl
