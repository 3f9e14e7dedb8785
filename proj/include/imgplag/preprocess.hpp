#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "imgplag/documents.hpp"

namespace imgplag {

enum class EntityLabel { Person, Org, Loc, Date, Misc };

std::string_view to_string(EntityLabel label);
std::optional<EntityLabel> parse_entity_label(std::string_view name);

enum class NerMode { Include, Exclude };

std::string_view to_string(NerMode mode);
NerMode parse_ner_mode(std::string_view name);

struct Token {
  std::string surface;
  std::string lower;
  std::string lemma;
  std::size_t position = 0;
  bool is_stopword = false;
  std::optional<EntityLabel> entity_label;

  bool operator==(const Token&) const = default;
};

// Which pipeline steps ran. Two documents are comparable only when their
// options are equal.
struct PreprocessOptions {
  bool strip_refs = true;
  bool stopwords = true;
  bool lemmatize = true;
  NerMode ner_mode = NerMode::Include;

  bool operator==(const PreprocessOptions&) const = default;
};

struct PreprocessedDoc {
  std::string doc_id;
  std::vector<Token> tokens;
  PreprocessOptions options;

  std::vector<std::string> lemmas() const;
  bool operator==(const PreprocessedDoc&) const = default;
};

class StopwordList {
 public:
  // The embedded classic English list.
  static const StopwordList& builtin();
  // One word per line; '#' starts a comment line.
  static StopwordList parse(std::string_view text);

  bool contains(std::string_view lower) const;
  std::size_t size() const { return words_.size(); }
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::unordered_set<std::string> words_;
  std::uint64_t fingerprint_ = 0;
};

class Lemmatizer {
 public:
  static const Lemmatizer& builtin();
  // `surface<TAB>lemma` lines; '#' starts a comment line.
  static Lemmatizer parse(std::string_view text);

  std::string lemma(std::string_view lower) const;
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::unordered_map<std::string, std::string> exceptions_;
  std::uint64_t fingerprint_ = 0;
};

// Removes bracketed numeric citations ("[12]", "[3,4]", "[5-7]") and
// parenthesised author-year citations ("(Smith et al., 2019)"). Applied to a
// fixpoint, so the result is idempotent.
std::string strip_references(std::string_view text);

// Maximal runs of letters or digits. Everything else separates tokens.
std::vector<Token> tokenize(std::string_view text);

std::vector<Token> remove_stopwords(std::vector<Token> tokens,
                                    const StopwordList& stopwords);

std::vector<Token> lemmatize(std::vector<Token> tokens, const Lemmatizer& lemmatizer);

}  // namespace imgplag
