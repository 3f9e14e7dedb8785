#include "imgplag/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "imgplag/errors.hpp"
#include "imgplag/hash.hpp"
#include "imgplag/resources.hpp"
#include "utf8.hpp"

namespace imgplag {

std::string_view to_string(EntityLabel label) {
  switch (label) {
    case EntityLabel::Person: return "PERSON";
    case EntityLabel::Org: return "ORG";
    case EntityLabel::Loc: return "LOC";
    case EntityLabel::Date: return "DATE";
    case EntityLabel::Misc: return "MISC";
  }
  return "MISC";
}

std::optional<EntityLabel> parse_entity_label(std::string_view name) {
  for (auto label : {EntityLabel::Person, EntityLabel::Org, EntityLabel::Loc,
                     EntityLabel::Date, EntityLabel::Misc}) {
    if (to_string(label) == name) return label;
  }
  return std::nullopt;
}

std::string_view to_string(NerMode mode) {
  return mode == NerMode::Include ? "include" : "exclude";
}

NerMode parse_ner_mode(std::string_view name) {
  if (name == "include") return NerMode::Include;
  if (name == "exclude") return NerMode::Exclude;
  throw ConfigError("unknown ner mode '" + std::string(name) + "'");
}

std::vector<std::string> PreprocessedDoc::lemmas() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.lemma);
  return out;
}

namespace {

// Iterates non-empty, non-comment lines.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    fn(line, line_no);
  }
}

std::size_t codepoint_count(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_ascii_consonant(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) &&
         std::string_view("aeiou").find(c) == std::string_view::npos;
}

// "runn" -> "run"; l, s and z doubles are kept ("fall", "pass", "buzz").
std::string undouble(std::string stem) {
  const auto n = stem.size();
  if (codepoint_count(stem) >= 4 && stem[n - 1] == stem[n - 2] && is_ascii_consonant(stem[n - 1]) &&
      std::string_view("lsz").find(stem[n - 1]) == std::string_view::npos) {
    stem.pop_back();
  }
  return stem;
}

}  // namespace

// --- stopwords ---------------------------------------------------------------

StopwordList StopwordList::parse(std::string_view text) {
  StopwordList list;
  list.fingerprint_ = fnv1a64(text);
  for_each_line(text, [&](std::string_view line, std::size_t) {
    list.words_.insert(utf8::lower(line));
  });
  return list;
}

const StopwordList& StopwordList::builtin() {
  static const StopwordList list = parse(resources::stopwords());
  return list;
}

bool StopwordList::contains(std::string_view lower) const {
  return words_.find(std::string(lower)) != words_.end();
}

// --- lemmatizer --------------------------------------------------------------

Lemmatizer Lemmatizer::parse(std::string_view text) {
  Lemmatizer lem;
  lem.fingerprint_ = fnv1a64(text);
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size()) {
      throw ParseError("lemma exception needs 'surface<TAB>lemma'", line_no);
    }
    lem.exceptions_.emplace(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  });
  return lem;
}

const Lemmatizer& Lemmatizer::builtin() {
  static const Lemmatizer lem = parse(resources::lemma_exceptions());
  return lem;
}

std::string Lemmatizer::lemma(std::string_view lower) const {
  if (auto it = exceptions_.find(std::string(lower)); it != exceptions_.end()) {
    return it->second;
  }
  std::string w(lower);
  if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
  if (ends_with(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "ches") || ends_with(w, "shes")) return w.substr(0, w.size() - 2);
  if (ends_with(w, "s")) {
    if (codepoint_count(w) > 3 && !ends_with(w, "ss")) w.pop_back();
    return w;
  }
  for (std::string_view suffix : {"ing", "ed"}) {
    if (ends_with(w, suffix)) {
      std::string stem = w.substr(0, w.size() - suffix.size());
      if (codepoint_count(stem) >= 3) return undouble(std::move(stem));
      return w;
    }
  }
  return w;
}

// --- pipeline steps ----------------------------------------------------------

namespace {

// "[12]", "[3,4]", "[5-7]", "[1, 2 – 4]" starting at text[pos] == '['.
// Returns the length of the citation or 0.
std::size_t match_bracket_citation(std::string_view text, std::size_t pos) {
  std::size_t i = pos + 1;
  const auto skip_spaces = [&] {
    while (i < text.size() && text[i] == ' ') ++i;
  };
  const auto digits = [&] {
    const std::size_t begin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    return i > begin;
  };
  skip_spaces();
  if (!digits()) return 0;
  for (;;) {
    skip_spaces();
    if (i >= text.size()) return 0;
    if (text[i] == ']') return i + 1 - pos;
    if (text[i] == ',' || text[i] == '-') {
      ++i;
    } else if (text.substr(i, 3) == "–") {  // en dash
      i += 3;
    } else {
      return 0;
    }
    skip_spaces();
    if (!digits()) return 0;
  }
}

// "(... 2019 ...)" with no nested parentheses and a standalone four digit
// year in [1500, 2099].
std::size_t match_year_citation(std::string_view text, std::size_t pos) {
  const auto close = text.find_first_of("()", pos + 1);
  if (close == std::string_view::npos || text[close] != ')') return 0;
  const std::string_view inner = text.substr(pos + 1, close - pos - 1);
  std::size_t i = 0;
  while (i < inner.size()) {
    if (!std::isdigit(static_cast<unsigned char>(inner[i]))) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    while (i < inner.size() && std::isdigit(static_cast<unsigned char>(inner[i]))) ++i;
    if (i - begin == 4) {
      const int year = std::stoi(std::string(inner.substr(begin, 4)));
      if (year >= 1500 && year <= 2099) return close + 1 - pos;
    }
  }
  return 0;
}

std::string strip_once(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = 0;
    if (text[i] == '[') len = match_bracket_citation(text, i);
    else if (text[i] == '(') len = match_year_citation(text, i);
    if (len > 0) {
      i += len;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

}  // namespace

std::string strip_references(std::string_view text) {
  std::string current(text);
  for (;;) {
    std::string next = strip_once(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  const auto flush = [&](std::size_t end) {
    if (start == std::string_view::npos) return;
    Token t;
    t.surface = std::string(text.substr(start, end - start));
    t.lower = utf8::lower(t.surface);
    t.lemma = t.lower;
    t.position = tokens.size();
    tokens.push_back(std::move(t));
    start = std::string_view::npos;
  };
  while (pos < text.size()) {
    const std::size_t begin = pos;
    const char32_t cp = utf8::decode(text, pos);
    if (cp != utf8::kInvalid && utf8::is_word_char(cp)) {
      if (start == std::string_view::npos) start = begin;
    } else {
      flush(begin);
    }
  }
  flush(text.size());
  return tokens;
}

std::vector<Token> remove_stopwords(std::vector<Token> tokens, const StopwordList& stopwords) {
  std::erase_if(tokens, [&](const Token& t) { return stopwords.contains(t.lower); });
  for (auto& t : tokens) t.is_stopword = false;
  return tokens;
}

std::vector<Token> lemmatize(std::vector<Token> tokens, const Lemmatizer& lemmatizer) {
  for (auto& t : tokens) t.lemma = lemmatizer.lemma(t.lower);
  return tokens;
}

}  // namespace imgplag
