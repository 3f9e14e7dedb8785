#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "imgplag/preprocess.hpp"

namespace imgplag {

// Lemma stream of one document, in token order.
using LemmaSeq = std::vector<std::string>;

// Term <-> dense index map with document frequencies. Indices follow first
// appearance (document order, then token position).
class Vocabulary {
 public:
  Vocabulary() = default;
  // Rebuilds from persisted state; throws IndexFormatError on inconsistency.
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> df, std::size_t n_docs);

  std::size_t size() const { return terms_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::size_t>& df() const { return df_; }
  std::optional<std::size_t> index_of(const std::string& term) const;

  // ln(n_docs / df); zero for terms present in every document.
  double idf(std::size_t index) const;

  bool operator==(const Vocabulary& other) const {
    return terms_ == other.terms_ && df_ == other.df_ && n_docs_ == other.n_docs_;
  }

 private:
  friend Vocabulary build_vocabulary(std::span<const LemmaSeq> docs);
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::size_t n_docs_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

// Sparse non-negative vector keyed by vocabulary index. Entries are sorted by
// index, never zero, and the Euclidean norm is cached.
class TermVector {
 public:
  using Entry = std::pair<std::size_t, double>;

  TermVector() = default;
  // Sorts, merges duplicate indices by summation and drops zeros.
  explicit TermVector(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  double norm() const { return norm_; }
  bool empty() const { return entries_.empty(); }
  double weight(std::size_t index) const;
  double dot(const TermVector& other) const;
  TermVector scaled(double factor) const;
  TermVector plus(const TermVector& other) const;

  bool operator==(const TermVector& other) const { return entries_ == other.entries_; }

 private:
  std::vector<Entry> entries_;
  double norm_ = 0.0;
};

// Throws EmptyCorpus when `docs` is empty or every document is empty.
Vocabulary build_vocabulary(std::span<const LemmaSeq> docs);
Vocabulary build_vocabulary(std::span<const PreprocessedDoc> docs);

// Raw counts; out-of-vocabulary lemmas are ignored.
TermVector tf_vector(std::span<const std::string> lemmas, const Vocabulary& vocab);

// tf * ln(n_docs / df) for one document against a built vocabulary.
TermVector tfidf_vector(std::span<const std::string> lemmas, const Vocabulary& vocab);
std::vector<TermVector> tfidf_vectors(std::span<const LemmaSeq> docs, const Vocabulary& vocab);

// Default LSA rank: min(50, n_docs - 1, n_terms), at least 1.
std::size_t default_lsa_rank(std::size_t n_docs, std::size_t n_terms);

}  // namespace imgplag
