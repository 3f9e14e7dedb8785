#include "imgplag/vectorspace.hpp"

#include <algorithm>
#include <cmath>

#include "imgplag/errors.hpp"

namespace imgplag {

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> df,
                       std::size_t n_docs)
    : terms_(std::move(terms)), df_(std::move(df)), n_docs_(n_docs) {
  if (terms_.size() != df_.size()) throw IndexFormatError("vocabulary terms/df length mismatch");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (df_[i] < 1 || df_[i] > n_docs_) throw IndexFormatError("document frequency out of range");
    if (!index_.emplace(terms_[i], i).second) {
      throw IndexFormatError("duplicate vocabulary term '" + terms_[i] + "'");
    }
  }
}

std::optional<std::size_t> Vocabulary::index_of(const std::string& term) const {
  const auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::idf(std::size_t index) const {
  return std::log(static_cast<double>(n_docs_) / static_cast<double>(df_.at(index)));
}

TermVector::TermVector(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (const auto& [index, w] : entries) {
    if (!entries_.empty() && entries_.back().first == index) {
      entries_.back().second += w;
    } else {
      entries_.emplace_back(index, w);
    }
  }
  std::erase_if(entries_, [](const Entry& e) { return e.second == 0.0; });
  double sum = 0.0;
  for (const auto& e : entries_) sum += e.second * e.second;
  norm_ = std::sqrt(sum);
}

double TermVector::weight(std::size_t index) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                                   [](const Entry& e, std::size_t i) { return e.first < i; });
  return it != entries_.end() && it->first == index ? it->second : 0.0;
}

double TermVector::dot(const TermVector& other) const {
  double sum = 0.0;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      sum += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return sum;
}

TermVector TermVector::scaled(double factor) const {
  std::vector<Entry> out = entries_;
  for (auto& e : out) e.second *= factor;
  return TermVector(std::move(out));
}

TermVector TermVector::plus(const TermVector& other) const {
  std::vector<Entry> out = entries_;
  out.insert(out.end(), other.entries_.begin(), other.entries_.end());
  return TermVector(std::move(out));
}

Vocabulary build_vocabulary(std::span<const LemmaSeq> docs) {
  Vocabulary vocab;
  vocab.n_docs_ = docs.size();
  std::vector<std::size_t> last_seen;  // last doc counted per term
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& lemma : docs[d]) {
      auto [it, inserted] = vocab.index_.emplace(lemma, vocab.terms_.size());
      if (inserted) {
        vocab.terms_.push_back(lemma);
        vocab.df_.push_back(1);
        last_seen.push_back(d);
      } else if (last_seen[it->second] != d) {
        ++vocab.df_[it->second];
        last_seen[it->second] = d;
      }
    }
  }
  if (vocab.terms_.empty()) throw EmptyCorpus("no terms in any corpus document");
  return vocab;
}

Vocabulary build_vocabulary(std::span<const PreprocessedDoc> docs) {
  std::vector<LemmaSeq> lemmas;
  lemmas.reserve(docs.size());
  for (const auto& d : docs) lemmas.push_back(d.lemmas());
  return build_vocabulary(lemmas);
}

TermVector tf_vector(std::span<const std::string> lemmas, const Vocabulary& vocab) {
  std::vector<TermVector::Entry> entries;
  for (const auto& lemma : lemmas) {
    if (auto index = vocab.index_of(lemma)) entries.emplace_back(*index, 1.0);
  }
  return TermVector(std::move(entries));
}

TermVector tfidf_vector(std::span<const std::string> lemmas, const Vocabulary& vocab) {
  const TermVector tf = tf_vector(lemmas, vocab);
  std::vector<TermVector::Entry> entries;
  entries.reserve(tf.entries().size());
  for (const auto& [index, count] : tf.entries()) {
    entries.emplace_back(index, count * vocab.idf(index));
  }
  return TermVector(std::move(entries));
}

std::vector<TermVector> tfidf_vectors(std::span<const LemmaSeq> docs, const Vocabulary& vocab) {
  std::vector<TermVector> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(tfidf_vector(d, vocab));
  return out;
}

std::size_t default_lsa_rank(std::size_t n_docs, std::size_t n_terms) {
  std::size_t k = std::min<std::size_t>(50, n_terms);
  if (n_docs >= 1) k = std::min(k, n_docs - 1);
  return std::max<std::size_t>(k, 1);
}

}  // namespace imgplag
