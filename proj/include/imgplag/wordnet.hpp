#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imgplag/preprocess.hpp"

namespace imgplag {

enum class PartOfSpeech { Noun, Verb, Adjective, Adverb };

enum class WordnetMeasure { WuPalmer, Path };

std::string_view to_string(WordnetMeasure measure);
WordnetMeasure parse_wordnet_measure(std::string_view name);

struct Synset {
  std::string id;
  PartOfSpeech pos = PartOfSpeech::Noun;
  std::vector<std::string> lemmas;
  std::vector<std::string> parents;
};

// Hypernym taxonomy parsed from `synset_id|pos|lemma1,lemma2|parent1,parent2`
// lines. Synsets without parents are roots; when there is more than one root
// they all hang off a virtual root. Depths and ancestor sets are precomputed
// at load, after which the lexicon is immutable.
class Lexicon {
 public:
  // Throws ParseError, CyclicTaxonomy or DanglingParent.
  static Lexicon parse(std::string_view text);
  static Lexicon load(const std::string& path);

  std::size_t size() const { return synsets_.size(); }
  bool contains(std::string_view id) const;
  const Synset& synset(std::string_view id) const;
  std::vector<std::string> roots() const;
  bool has_virtual_root() const { return roots_.size() > 1; }

  // Noun synsets containing `lemma`, sorted by id.
  const std::vector<std::size_t>& noun_senses(const std::string& lemma) const;

  // Depth counted in nodes from the top of the taxonomy: a single real root
  // has depth 1; with several roots the virtual root has depth 1.
  std::size_t depth(std::string_view id) const;

  // Undirected hypernym-edge distance, via the virtual root if needed.
  std::size_t path_length(std::string_view a, std::string_view b) const;

  // 1 / (1 + path_length)
  double path_similarity(std::string_view a, std::string_view b) const;
  // 2 depth(lcs) / (depth(a) + depth(b)); lcs is the deepest common ancestor,
  // ties broken by the smallest synset id.
  double wu_palmer(std::string_view a, std::string_view b) const;
  // Deepest common ancestor; empty string means the virtual root.
  std::string lowest_common_subsumer(std::string_view a, std::string_view b) const;

  double synset_similarity(std::size_t a, std::size_t b, WordnetMeasure measure) const;

 private:
  std::size_t index_of(std::string_view id) const;
  std::size_t path_length(std::size_t a, std::size_t b) const;
  double wu_palmer(std::size_t a, std::size_t b) const;
  std::optional<std::size_t> lcs(std::size_t a, std::size_t b) const;

  std::vector<Synset> synsets_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> noun_index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> roots_;
  std::vector<std::size_t> depth_;
  // ancestors_[s]: every ancestor of s including itself, sorted.
  std::vector<std::vector<std::size_t>> ancestors_;
};

// Max of `measure` over noun sense pairs. A word with no noun sense falls back
// to exact match: 1 when w1 == w2, else 0.
double word_similarity(const std::string& w1, const std::string& w2, const Lexicon& lexicon,
                       WordnetMeasure measure);

struct DocSimilarity {
  double value = 0.0;
  bool empty_comparison = false;
};

// Symmetric best-match average over the unique lemma sets of the two docs.
DocSimilarity doc_similarity(std::span<const std::string> a, std::span<const std::string> b,
                             const Lexicon& lexicon, WordnetMeasure measure);
DocSimilarity doc_similarity(const PreprocessedDoc& a, const PreprocessedDoc& b,
                             const Lexicon& lexicon, WordnetMeasure measure);

}  // namespace imgplag
