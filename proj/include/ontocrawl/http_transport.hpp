#pragma once

#include <chrono>
#include <string>

#include "ontocrawl/llm_client.hpp"

namespace ontocrawl {

inline constexpr const char* kDefaultApiKeyVariable = "OPENAI_API_KEY";

struct HttpTransportOptions {
  // Scheme, host and optional port, e.g. "https://api.openai.com".
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string api_key;
  std::chrono::seconds timeout{60};
};

// Reads the API key from the environment. Throws ConfigError when unset.
std::string api_key_from_env(const char* variable = kDefaultApiKeyVariable);

// Chat-completion transport over HTTP(S). 429, 5xx and connection failures
// are reported as retryable TransportErrors.
class HttpChatTransport final : public ChatTransport {
 public:
  explicit HttpChatTransport(HttpTransportOptions options);

  ChatResponse send(const ChatRequest& request) override;

 private:
  HttpTransportOptions options_;
};

// Extracts reply text and token usage from a chat-completion response body.
// Throws ParseError on an unexpected shape.
ChatResponse parse_chat_response(const std::string& body);

}  // namespace ontocrawl
