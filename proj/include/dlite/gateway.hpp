#pragma once

#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace dlite {

struct ModelConfig {
  std::string endpoint;     // chat-completion URL
  std::string model;
  std::string api_key_env;  // env var holding the key; the key itself is never stored
  double temperature = 0.0;
  int max_tokens = 1024;
  int timeout_seconds = 60;
  int max_retries = 3;

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
};

struct Exchange {
  std::string prompt_hash;
  std::string prompt;
  std::string response;
  std::string model;
  std::string timestamp;  // UTC, ISO 8601
  long latency_ms = 0;
  std::optional<long> prompt_tokens;
  std::optional<long> completion_tokens;
  bool from_cache = false;

  nlohmann::json to_json() const;
  static Exchange from_json(const nlohmann::json& j);
};

struct Transport : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AuthMissing : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProviderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CacheOnlyMiss : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Stable digest of (model, prompt, temperature): the cache key.
std::string prompt_digest(const ModelConfig& config, const std::string& prompt);

class Backend {
 public:
  virtual ~Backend() = default;
  /// Returns the raw response text; may set token counts.
  virtual std::string complete(const std::string& prompt, const ModelConfig& config,
                               std::optional<long>* prompt_tokens,
                               std::optional<long>* completion_tokens) = 0;
};

/// HTTP chat-completion backend ({messages:[{role,content}]} wire shape)
/// with exponential backoff on retryable statuses.
class HttpBackend : public Backend {
 public:
  std::string complete(const std::string& prompt, const ModelConfig& config,
                       std::optional<long>* prompt_tokens,
                       std::optional<long>* completion_tokens) override;
};

/// Deterministic fixture-map backend for tests. Unmatched prompts get the
/// default response; in-flight accounting backs the rate-limiter test.
class MockBackend : public Backend {
 public:
  std::map<std::string, std::string> fixtures;  // prompt -> response
  std::string default_response = "Unknown.";

  std::string complete(const std::string& prompt, const ModelConfig& config,
                       std::optional<long>* prompt_tokens,
                       std::optional<long>* completion_tokens) override;

  int calls() const { return calls_; }
  int max_in_flight_seen() const { return max_seen_; }

 private:
  std::mutex mu_;
  int calls_ = 0;
  int in_flight_ = 0;
  int max_seen_ = 0;
};

/// Cache-first completion client. Cache layout: <dir>/<model>/<hash>.json.
class Gateway {
 public:
  explicit Gateway(std::string cache_dir, bool offline = false,
                   std::shared_ptr<Backend> backend = nullptr, int max_in_flight = 4);

  Exchange complete(const std::string& prompt, const ModelConfig& config);

  bool offline() const { return offline_; }

 private:
  std::string cache_path(const ModelConfig& config, const std::string& hash) const;
  std::optional<Exchange> cache_get(const ModelConfig& config, const std::string& hash) const;
  void cache_put(const ModelConfig& config, const Exchange& ex) const;

  std::string cache_dir_;
  bool offline_;
  std::shared_ptr<Backend> backend_;
  int max_in_flight_;
  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
};

}  // namespace dlite
