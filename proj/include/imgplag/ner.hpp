#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imgplag/preprocess.hpp"

namespace imgplag {

enum class EntitySource { Gazetteer, YearPattern, CapitalRun };

std::string_view to_string(EntitySource source);

// Token positions, end inclusive.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  EntityLabel label = EntityLabel::Misc;
  EntitySource source = EntitySource::Gazetteer;

  std::size_t length() const { return end - start + 1; }
  bool operator==(const EntitySpan&) const = default;
};

// Case-sensitive multi-word surface forms for PERSON, ORG and LOC. Forms are
// split with the tokenizer so they line up with document tokens.
class Gazetteer {
 public:
  struct Entry {
    EntityLabel label;
    std::vector<std::string> words;
  };

  // `LABEL<TAB>surface form` lines; blank lines and '#' comments ignored.
  static Gazetteer parse(std::string_view text);
  static Gazetteer load(const std::string& path);

  void add(EntityLabel label, std::string_view surface_form);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::uint64_t fingerprint() const;

 private:
  std::vector<Entry> entries_;
  // first word -> entry indices
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_first_;
  friend std::vector<EntitySpan> tag_entities(std::span<const Token>, const Gazetteer&,
                                              const StopwordList&);
};

// Gazetteer longest match, then DATE for standalone years 1500-2099, then
// MISC for runs of two or more capitalised non-stopwords. Returned spans are
// disjoint and sorted by start.
std::vector<EntitySpan> tag_entities(std::span<const Token> tokens, const Gazetteer& gazetteer,
                                     const StopwordList& stopwords);

// Copy of `doc` without the tokens covered by `spans`; records ner_mode=exclude.
PreprocessedDoc exclude_entities(const PreprocessedDoc& doc, std::span<const EntitySpan> spans);

}  // namespace imgplag
