#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imgplag/preprocess.hpp"

namespace imgplag {

enum class EmbedProviderKind { Http, Fallback };

std::string_view to_string(EmbedProviderKind kind);
EmbedProviderKind parse_embed_provider_kind(std::string_view name);

struct EmbeddingProviderConfig {
  EmbedProviderKind kind = EmbedProviderKind::Fallback;
  std::string endpoint;                        // http only
  std::string credential_env = "EMBED_API_KEY";  // empty: send no credential
  std::size_t dim = 256;
  std::uint64_t seed = 42;

  // Throws ConfigError when http lacks an endpoint or fallback dim < 8.
  void validate() const;
};

struct DocEmbedding {
  std::vector<double> vector;
  EmbedProviderKind source = EmbedProviderKind::Fallback;

  bool is_zero() const;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual DocEmbedding embed(std::span<const std::string> lemmas) = 0;
  virtual std::size_t dim() const = 0;
  // Human readable provenance for reports, e.g. "fallback(dim=256,seed=42)".
  virtual std::string label() const = 0;

  DocEmbedding embed(const PreprocessedDoc& doc) { return embed(doc.lemmas()); }
};

// Offline stand-in: each lemma maps to a unit pseudo-random vector drawn from
// a SplitMix64 stream keyed by fnv1a64(lemma) ^ splitmix64_mix(seed). A
// document is the normalised tf-weighted sum of its lemma vectors; an empty
// document is the zero vector.
class FallbackEmbedder final : public EmbeddingProvider {
 public:
  FallbackEmbedder(std::size_t dim = 256, std::uint64_t seed = 42);

  DocEmbedding embed(std::span<const std::string> lemmas) override;
  using EmbeddingProvider::embed;
  std::size_t dim() const override { return dim_; }
  std::string label() const override;

  std::vector<double> lemma_vector(std::string_view lemma) const;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// POSTs {"text": "<lemmas joined by space>"} and expects {"vector": [...]}.
// At most four requests are in flight; responses are cached per text for the
// lifetime of the object.
class HttpEmbedder final : public EmbeddingProvider {
 public:
  explicit HttpEmbedder(EmbeddingProviderConfig config);

  DocEmbedding embed(std::span<const std::string> lemmas) override;
  using EmbeddingProvider::embed;
  std::size_t dim() const override { return config_.dim; }
  std::string label() const override;

  std::size_t requests_sent() const;

 private:
  EmbeddingProviderConfig config_;
  std::counting_semaphore<4> in_flight_{4};
  mutable std::mutex mutex_;
  std::map<std::uint64_t, std::vector<double>> cache_;
  std::size_t requests_ = 0;
};

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const EmbeddingProviderConfig& config);

// max(0, cosine(a, b)); 0 when either vector is zero. Throws DimensionMismatch.
struct EmbedScore {
  double value = 0.0;
  bool empty_comparison = false;
};
EmbedScore embed_similarity(const DocEmbedding& a, const DocEmbedding& b);

}  // namespace imgplag
