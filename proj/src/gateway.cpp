#include "dlite/gateway.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "dlite/digest.hpp"

namespace dlite {

namespace fs = std::filesystem;
using nlohmann::json;

json ModelConfig::to_json() const {
  return {{"endpoint", endpoint},       {"model", model},
          {"api_key_env", api_key_env}, {"temperature", temperature},
          {"max_tokens", max_tokens},   {"timeout_seconds", timeout_seconds},
          {"max_retries", max_retries}};
}

ModelConfig ModelConfig::from_json(const json& j) {
  ModelConfig c;
  c.endpoint = j.value("endpoint", std::string{});
  c.model = j.value("model", std::string{});
  c.api_key_env = j.value("api_key_env", std::string{});
  c.temperature = j.value("temperature", 0.0);
  c.max_tokens = j.value("max_tokens", 1024);
  c.timeout_seconds = j.value("timeout_seconds", 60);
  c.max_retries = j.value("max_retries", 3);
  return c;
}

json Exchange::to_json() const {
  json j = {{"prompt_hash", prompt_hash}, {"prompt", prompt},
            {"response", response},       {"model", model},
            {"timestamp", timestamp},     {"latency_ms", latency_ms}};
  if (prompt_tokens) j["prompt_tokens"] = *prompt_tokens;
  if (completion_tokens) j["completion_tokens"] = *completion_tokens;
  return j;
}

Exchange Exchange::from_json(const json& j) {
  Exchange e;
  e.prompt_hash = j.value("prompt_hash", std::string{});
  e.prompt = j.value("prompt", std::string{});
  e.response = j.value("response", std::string{});
  e.model = j.value("model", std::string{});
  e.timestamp = j.value("timestamp", std::string{});
  e.latency_ms = j.value("latency_ms", 0L);
  if (j.contains("prompt_tokens")) e.prompt_tokens = j["prompt_tokens"].get<long>();
  if (j.contains("completion_tokens"))
    e.completion_tokens = j["completion_tokens"].get<long>();
  return e;
}

std::string prompt_digest(const ModelConfig& config, const std::string& prompt) {
  std::ostringstream key;
  key << config.model << "\x1f" << config.temperature << "\x1f" << prompt;
  return hex_digest(key.str());
}

namespace {

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

std::string HttpBackend::complete(const std::string& prompt, const ModelConfig& config,
                                  std::optional<long>* prompt_tokens,
                                  std::optional<long>* completion_tokens) {
  std::string key;
  if (!config.api_key_env.empty()) {
    const char* v = std::getenv(config.api_key_env.c_str());
    if (!v || !*v) throw AuthMissing("environment variable " + config.api_key_env + " is unset");
    key = v;
  }

  // split the endpoint into origin + path
  std::string origin = config.endpoint, path = "/";
  std::size_t scheme = origin.find("://");
  std::size_t slash = origin.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (slash != std::string::npos) {
    path = origin.substr(slash);
    origin = origin.substr(0, slash);
  }

  json body = {{"model", config.model},
               {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
               {"temperature", config.temperature},
               {"max_tokens", config.max_tokens}};

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(100L << (attempt - 1)));
    httplib::Client cli(origin);
    cli.set_connection_timeout(config.timeout_seconds);
    cli.set_read_timeout(config.timeout_seconds);
    httplib::Headers headers;
    if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);
    auto res = cli.Post(path, headers, body.dump(), "application/json");
    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "retryable status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw ProviderError("status " + std::to_string(res->status) + ": " + res->body);
    json reply = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty())
      throw ProviderError("malformed completion payload");
    if (reply.contains("usage")) {
      const json& u = reply["usage"];
      if (u.contains("prompt_tokens")) *prompt_tokens = u["prompt_tokens"].get<long>();
      if (u.contains("completion_tokens"))
        *completion_tokens = u["completion_tokens"].get<long>();
    }
    return reply["choices"][0]["message"]["content"].get<std::string>();
  }
  throw Transport(last_error + " after " + std::to_string(config.max_retries + 1) + " attempts");
}

std::string MockBackend::complete(const std::string& prompt, const ModelConfig&,
                                  std::optional<long>*, std::optional<long>*) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++calls_;
    ++in_flight_;
    max_seen_ = std::max(max_seen_, in_flight_);
  }
  std::this_thread::sleep_for(std::chrono::milliseconds(1));
  auto it = fixtures.find(prompt);
  std::string out = (it != fixtures.end()) ? it->second : default_response;
  {
    std::lock_guard<std::mutex> lock(mu_);
    --in_flight_;
  }
  return out;
}

Gateway::Gateway(std::string cache_dir, bool offline, std::shared_ptr<Backend> backend,
                 int max_in_flight)
    : cache_dir_(std::move(cache_dir)),
      offline_(offline),
      backend_(backend ? std::move(backend) : std::make_shared<HttpBackend>()),
      max_in_flight_(max_in_flight < 1 ? 1 : max_in_flight) {}

std::string Gateway::cache_path(const ModelConfig& config, const std::string& hash) const {
  return (fs::path(cache_dir_) / config.model / (hash + ".json")).string();
}

std::optional<Exchange> Gateway::cache_get(const ModelConfig& config,
                                           const std::string& hash) const {
  std::ifstream in(cache_path(config, hash), std::ios::binary);
  if (!in) return std::nullopt;
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return std::nullopt;
  Exchange ex = Exchange::from_json(j);
  ex.from_cache = true;
  return ex;
}

void Gateway::cache_put(const ModelConfig& config, const Exchange& ex) const {
  fs::path path = cache_path(config, ex.prompt_hash);
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << ex.to_json().dump(2) << "\n";
  }
  fs::rename(tmp, path);  // atomic per key: concurrent writers race benignly
}

Exchange Gateway::complete(const std::string& prompt, const ModelConfig& config) {
  std::string hash = prompt_digest(config, prompt);
  if (auto hit = cache_get(config, hash)) return *hit;
  if (offline_) throw CacheOnlyMiss("offline and no cache entry for " + hash);

  {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < max_in_flight_; });
    ++in_flight_;
  }
  Exchange ex;
  try {
    auto t0 = std::chrono::steady_clock::now();
    ex.response = backend_->complete(prompt, config, &ex.prompt_tokens, &ex.completion_tokens);
    auto t1 = std::chrono::steady_clock::now();
    ex.latency_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  } catch (...) {
    std::lock_guard<std::mutex> lock(mu_);
    --in_flight_;
    cv_.notify_one();
    throw;
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    --in_flight_;
    cv_.notify_one();
  }
  ex.prompt_hash = hash;
  ex.prompt = prompt;
  ex.model = config.model;
  ex.timestamp = utc_now();
  cache_put(config, ex);
  return ex;
}

}  // namespace dlite
