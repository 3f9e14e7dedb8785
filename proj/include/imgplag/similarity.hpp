#pragma once

#include <array>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imgplag/embed.hpp"
#include "imgplag/index.hpp"
#include "imgplag/vectorspace.hpp"
#include "imgplag/wordnet.hpp"

namespace imgplag {

// Report columns follow this order.
enum class AlgorithmId { Jaccard, Cosine, Tfidf, Lsa, Embed, Wordnet };

inline constexpr std::array<AlgorithmId, 6> kAllAlgorithms = {
    AlgorithmId::Jaccard, AlgorithmId::Cosine, AlgorithmId::Tfidf,
    AlgorithmId::Lsa,     AlgorithmId::Embed,  AlgorithmId::Wordnet};

std::string_view to_string(AlgorithmId algo);
// Accepts the identifiers above ("jaccard", "tfidf", ...) plus "bert" for embed.
std::optional<AlgorithmId> parse_algorithm(std::string_view name);

enum class ScoreWarning { EmptyComparison };

struct SimilarityScore {
  double value = 0.0;  // [0, 1]
  AlgorithmId algorithm = AlgorithmId::Jaccard;
  std::optional<ScoreWarning> warning;
};

// |A n B| / |A u B|; both empty gives 0 with EmptyComparison.
SimilarityScore jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

// (u.v) / (|u||v|); a zero vector gives 0 with EmptyComparison.
SimilarityScore cosine(const TermVector& u, const TermVector& v);

// A query (or any document) projected into one ModeIndex.
struct QueryArtifacts {
  std::string id;
  LemmaSeq lemmas;
  TermVector tfidf;
  std::vector<double> latent;
  std::optional<DocEmbedding> embedding;
};

// Throws OptionsMismatch unless doc.options and `fingerprint` match the index.
QueryArtifacts prepare_query(const PreprocessedDoc& doc, std::string_view fingerprint,
                             const ModeIndex& index);

// The concatenation of every corpus token stream, projected like a query.
QueryArtifacts pooled_corpus(const ModeIndex& index);

QueryArtifacts as_artifacts(const IndexedDoc& doc);

struct ScoringEnv {
  const ModeIndex* index = nullptr;
  const Lexicon* lexicon = nullptr;
  WordnetMeasure measure = WordnetMeasure::WuPalmer;
  EmbeddingProvider* embedder = nullptr;
};

// Dispatches one algorithm over two documents projected into env.index.
// Either side empty gives 0 with EmptyComparison for every algorithm.
SimilarityScore score(AlgorithmId algo, QueryArtifacts& query, QueryArtifacts& target,
                      const ScoringEnv& env);

}  // namespace imgplag
