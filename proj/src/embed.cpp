#include "imgplag/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "http_util.hpp"
#include "imgplag/errors.hpp"
#include "imgplag/hash.hpp"

namespace imgplag {

std::string_view to_string(EmbedProviderKind kind) {
  return kind == EmbedProviderKind::Http ? "http" : "fallback";
}

EmbedProviderKind parse_embed_provider_kind(std::string_view name) {
  if (name == "http") return EmbedProviderKind::Http;
  if (name == "fallback") return EmbedProviderKind::Fallback;
  throw ConfigError("unknown embedding provider '" + std::string(name) + "'");
}

void EmbeddingProviderConfig::validate() const {
  if (kind == EmbedProviderKind::Http) {
    http::Endpoint ep;
    if (endpoint.empty() || !http::split_url(endpoint, ep)) {
      throw ConfigError("http embedding provider needs an http(s) endpoint URL");
    }
    if (dim < 1) throw ConfigError("embedding dim must be positive");
  } else if (dim < 8) {
    throw ConfigError("fallback embedding dim must be at least 8");
  }
}

bool DocEmbedding::is_zero() const {
  return std::all_of(vector.begin(), vector.end(), [](double x) { return x == 0.0; });
}

// --- fallback ----------------------------------------------------------------

FallbackEmbedder::FallbackEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  EmbeddingProviderConfig{EmbedProviderKind::Fallback, {}, {}, dim, seed}.validate();
}

std::vector<double> FallbackEmbedder::lemma_vector(std::string_view lemma) const {
  SplitMix64 stream(fnv1a64(lemma) ^ splitmix64_mix(seed_));
  std::vector<double> v(dim_);
  double sum = 0.0;
  for (double& x : v) {
    x = 2.0 * stream.next_unit() - 1.0;
    sum += x * x;
  }
  const double n = std::sqrt(sum);
  for (double& x : v) x /= n;
  return v;
}

DocEmbedding FallbackEmbedder::embed(std::span<const std::string> lemmas) {
  // Sorted counts keep the summation order independent of token order.
  std::map<std::string_view, std::size_t> tf;
  for (const auto& l : lemmas) ++tf[l];
  DocEmbedding out{std::vector<double>(dim_, 0.0), EmbedProviderKind::Fallback};
  for (const auto& [lemma, count] : tf) {
    const auto v = lemma_vector(lemma);
    for (std::size_t i = 0; i < dim_; ++i) out.vector[i] += static_cast<double>(count) * v[i];
  }
  double sum = 0.0;
  for (double x : out.vector) sum += x * x;
  if (sum > 0.0) {
    const double n = std::sqrt(sum);
    for (double& x : out.vector) x /= n;
  }
  return out;
}

std::string FallbackEmbedder::label() const {
  return fmt::format("fallback(dim={},seed={})", dim_, seed_);
}

// --- http --------------------------------------------------------------------

HttpEmbedder::HttpEmbedder(EmbeddingProviderConfig config) : config_(std::move(config)) {
  config_.kind = EmbedProviderKind::Http;
  config_.validate();
}

std::string HttpEmbedder::label() const { return fmt::format("http({})", config_.endpoint); }

std::size_t HttpEmbedder::requests_sent() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

DocEmbedding HttpEmbedder::embed(std::span<const std::string> lemmas) {
  std::string text;
  for (const auto& l : lemmas) {
    if (!text.empty()) text.push_back(' ');
    text += l;
  }
  const std::uint64_t key = fnv1a64(text);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return {it->second, EmbedProviderKind::Http};
  }

  httplib::Headers headers;
  if (!config_.credential_env.empty()) {
    const char* key_value = std::getenv(config_.credential_env.c_str());
    if (key_value == nullptr || *key_value == '\0') {
      throw EmbedHttpError("credential environment variable " + config_.credential_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key_value);
  }
  http::Endpoint ep;
  http::split_url(config_.endpoint, ep);

  in_flight_.acquire();
  httplib::Result res;
  {
    httplib::Client client(ep.base);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    res = client.Post(ep.path, headers, nlohmann::json{{"text", text}}.dump(), "application/json");
  }
  in_flight_.release();
  {
    std::lock_guard lock(mutex_);
    ++requests_;
  }

  if (!res) throw EmbedHttpError("embedding request failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    throw EmbedHttpError(fmt::format("embedding service returned HTTP {}", res->status));
  }
  std::vector<double> vec;
  try {
    const auto body = nlohmann::json::parse(res->body);
    vec = body.at("vector").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw EmbedHttpError(std::string("malformed embedding response: ") + e.what());
  }
  if (vec.size() != config_.dim) {
    throw DimensionMismatch(fmt::format("embedding has {} entries, expected {}", vec.size(), config_.dim));
  }
  if (!std::all_of(vec.begin(), vec.end(), [](double x) { return std::isfinite(x); })) {
    throw EmbedHttpError("embedding contains non-finite values");
  }
  std::lock_guard lock(mutex_);
  cache_.emplace(key, vec);
  return {std::move(vec), EmbedProviderKind::Http};
}

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const EmbeddingProviderConfig& config) {
  config.validate();
  if (config.kind == EmbedProviderKind::Http) return std::make_unique<HttpEmbedder>(config);
  return std::make_unique<FallbackEmbedder>(config.dim, config.seed);
}

EmbedScore embed_similarity(const DocEmbedding& a, const DocEmbedding& b) {
  if (a.vector.size() != b.vector.size()) {
    throw DimensionMismatch(fmt::format("cannot compare embeddings of dim {} and {}",
                                        a.vector.size(), b.vector.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.vector.size(); ++i) {
    dot += a.vector[i] * b.vector[i];
    na += a.vector[i] * a.vector[i];
    nb += b.vector[i] * b.vector[i];
  }
  if (na == 0.0 || nb == 0.0) return {0.0, true};
  const double cos = dot / (std::sqrt(na) * std::sqrt(nb));
  return {std::clamp(cos, 0.0, 1.0), false};
}

}  // namespace imgplag
