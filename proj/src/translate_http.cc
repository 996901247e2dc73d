// Copyright 2026 The TLA-Net Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Kept apart from augmentation.cc so only this unit compiles cpp-httplib.
#include <httplib.h>

#include <cstdlib>
#include <thread>

#include "tla/augmentation.h"
#include "tla/errors.h"

namespace tla {

std::optional<HttpTranslatorConfig> HttpTranslatorConfig::from_env() {
  const char* url = std::getenv("TLA_TRANSLATE_URL");
  if (url == nullptr || *url == '\0') return std::nullopt;
  HttpTranslatorConfig c;
  c.url = url;
  if (const char* key = std::getenv("TLA_TRANSLATE_KEY")) c.api_key = key;
  return c;
}

HttpTranslator::HttpTranslator(HttpTranslatorConfig config)
    : config_(std::move(config)),
      slots_(static_cast<std::ptrdiff_t>(config_.max_in_flight)) {
  if (config_.max_in_flight == 0 || config_.max_in_flight > 1024)
    throw ConfigError("translate.max_in_flight must lie in [1, 1024]");
  const auto scheme_end = config_.url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("translate.url '" + config_.url + "' has no scheme");
  const std::string scheme = config_.url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https")
    throw ConfigError("translate.url scheme must be http or https");
  const auto path_start = config_.url.find('/', scheme_end + 3);
  origin_ = config_.url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : config_.url.substr(path_start);
}

HttpTranslator::~HttpTranslator() = default;

std::string HttpTranslator::translate(const std::string& text, Language source,
                                      Language target) const {
  nlohmann::json body = {{"q", text},
                         {"source", std::string(language_code(source))},
                         {"target", std::string(language_code(target))}};
  if (!config_.api_key.empty()) body["api_key"] = config_.api_key;
  const std::string payload = body.dump();

  slots_.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{slots_};

  httplib::Client client(origin_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);

  std::string last_error;
  auto backoff = config_.initial_backoff;
  for (std::size_t attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    auto res = client.Post(path_, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw AugmentationError("translation endpoint returned HTTP " +
                              std::to_string(res->status));
    try {
      auto j = nlohmann::json::parse(res->body);
      return j.at("translatedText").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw AugmentationError(std::string("malformed translation response: ") + e.what());
    }
  }
  throw AugmentationError(last_error + " after " +
                          std::to_string(config_.max_retries + 1) + " attempts");
}

}  // namespace tla
