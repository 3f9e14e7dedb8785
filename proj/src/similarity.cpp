#include "imgplag/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "imgplag/errors.hpp"

namespace imgplag {

std::string_view to_string(AlgorithmId algo) {
  switch (algo) {
    case AlgorithmId::Jaccard: return "jaccard";
    case AlgorithmId::Cosine: return "cosine";
    case AlgorithmId::Tfidf: return "tfidf";
    case AlgorithmId::Lsa: return "lsa";
    case AlgorithmId::Embed: return "embed";
    case AlgorithmId::Wordnet: return "wordnet";
  }
  return "jaccard";
}

std::optional<AlgorithmId> parse_algorithm(std::string_view name) {
  for (auto a : kAllAlgorithms) {
    if (to_string(a) == name) return a;
  }
  if (name == "bert") return AlgorithmId::Embed;
  return std::nullopt;
}

SimilarityScore jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return {0.0, AlgorithmId::Jaccard, ScoreWarning::EmptyComparison};
  std::size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  const std::size_t uni = a.size() + b.size() - common;
  return {static_cast<double>(common) / static_cast<double>(uni), AlgorithmId::Jaccard, std::nullopt};
}

SimilarityScore cosine(const TermVector& u, const TermVector& v) {
  if (u.norm() == 0.0 || v.norm() == 0.0) {
    return {0.0, AlgorithmId::Cosine, ScoreWarning::EmptyComparison};
  }
  const double c = u.dot(v) / (u.norm() * v.norm());
  return {std::clamp(c, 0.0, 1.0), AlgorithmId::Cosine, std::nullopt};
}

QueryArtifacts prepare_query(const PreprocessedDoc& doc, std::string_view fingerprint,
                             const ModeIndex& index) {
  if (!(doc.options == index.options) || fingerprint != index.fingerprint) {
    throw OptionsMismatch("query preprocessing (" + std::string(fingerprint) +
                          ") does not match the index (" + index.fingerprint + ")");
  }
  QueryArtifacts q;
  q.id = doc.doc_id;
  q.lemmas = doc.lemmas();
  q.tfidf = tfidf_vector(q.lemmas, index.vocabulary);
  if (index.lsa) q.latent = project_query(q.tfidf, *index.lsa);
  return q;
}

QueryArtifacts pooled_corpus(const ModeIndex& index) {
  QueryArtifacts pooled;
  pooled.id = "<pooled>";
  for (const auto& d : index.docs) {
    pooled.lemmas.insert(pooled.lemmas.end(), d.lemmas.begin(), d.lemmas.end());
  }
  pooled.tfidf = tfidf_vector(pooled.lemmas, index.vocabulary);
  if (index.lsa) pooled.latent = project_query(pooled.tfidf, *index.lsa);
  return pooled;
}

QueryArtifacts as_artifacts(const IndexedDoc& doc) {
  return QueryArtifacts{doc.id, doc.lemmas, doc.tfidf, doc.latent, std::nullopt};
}

namespace {

SimilarityScore dense_cosine(std::span<const double> a, std::span<const double> b, AlgorithmId algo) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return {0.0, algo, ScoreWarning::EmptyComparison};
  return {std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0), algo, std::nullopt};
}

const DocEmbedding& embedding_of(QueryArtifacts& doc, EmbeddingProvider& embedder) {
  if (!doc.embedding) doc.embedding = embedder.embed(doc.lemmas);
  return *doc.embedding;
}

}  // namespace

SimilarityScore score(AlgorithmId algo, QueryArtifacts& query, QueryArtifacts& target,
                      const ScoringEnv& env) {
  if (query.lemmas.empty() || target.lemmas.empty()) {
    return {0.0, algo, ScoreWarning::EmptyComparison};
  }
  SimilarityScore s;
  switch (algo) {
    case AlgorithmId::Jaccard:
      s = jaccard({query.lemmas.begin(), query.lemmas.end()},
                  {target.lemmas.begin(), target.lemmas.end()});
      break;
    case AlgorithmId::Cosine: {
      // Raw term frequencies over the pair's own vocabulary, so the score does
      // not depend on the rest of the corpus.
      const std::vector<LemmaSeq> pair{query.lemmas, target.lemmas};
      const Vocabulary vocab = build_vocabulary(pair);
      s = cosine(tf_vector(query.lemmas, vocab), tf_vector(target.lemmas, vocab));
      break;
    }
    case AlgorithmId::Tfidf:
      s = cosine(query.tfidf, target.tfidf);
      break;
    case AlgorithmId::Lsa:
      if (env.index == nullptr || !env.index->lsa) {
        s = {0.0, algo, ScoreWarning::EmptyComparison};
      } else {
        s = dense_cosine(query.latent, target.latent, algo);
      }
      break;
    case AlgorithmId::Embed: {
      if (env.embedder == nullptr) throw ConfigError("embed scoring needs an embedding provider");
      const auto r = embed_similarity(embedding_of(query, *env.embedder),
                                      embedding_of(target, *env.embedder));
      s.value = r.value;
      if (r.empty_comparison) s.warning = ScoreWarning::EmptyComparison;
      break;
    }
    case AlgorithmId::Wordnet: {
      if (env.lexicon == nullptr) throw ConfigError("wordnet scoring needs a lexicon");
      const auto r = doc_similarity(query.lemmas, target.lemmas, *env.lexicon, env.measure);
      s.value = r.value;
      if (r.empty_comparison) s.warning = ScoreWarning::EmptyComparison;
      break;
    }
  }
  s.algorithm = algo;
  s.value = std::clamp(s.value, 0.0, 1.0);
  return s;
}

}  // namespace imgplag
