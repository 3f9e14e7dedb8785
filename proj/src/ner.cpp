#include "imgplag/ner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "imgplag/errors.hpp"
#include "imgplag/hash.hpp"
#include "utf8.hpp"

namespace imgplag {

std::string_view to_string(EntitySource source) {
  switch (source) {
    case EntitySource::Gazetteer: return "gazetteer";
    case EntitySource::YearPattern: return "year_pattern";
    case EntitySource::CapitalRun: return "capital_run";
  }
  return "gazetteer";
}

void Gazetteer::add(EntityLabel label, std::string_view surface_form) {
  if (label != EntityLabel::Person && label != EntityLabel::Org && label != EntityLabel::Loc) {
    throw ConfigError("gazetteer labels are PERSON, ORG or LOC");
  }
  Entry entry{label, {}};
  for (auto& t : tokenize(surface_form)) entry.words.push_back(std::move(t.surface));
  if (entry.words.empty()) throw ConfigError("empty gazetteer surface form");
  by_first_[entry.words.front()].push_back(entries_.size());
  entries_.push_back(std::move(entry));
}

Gazetteer Gazetteer::parse(std::string_view text) {
  Gazetteer gaz;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("gazetteer line needs 'LABEL<TAB>form'", line_no);
    const auto label = parse_entity_label(std::string_view(line).substr(0, tab));
    if (!label || *label == EntityLabel::Date || *label == EntityLabel::Misc) {
      throw ParseError("gazetteer label must be PERSON, ORG or LOC", line_no);
    }
    try {
      gaz.add(*label, std::string_view(line).substr(tab + 1));
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return gaz;
}

Gazetteer Gazetteer::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read gazetteer '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::uint64_t Gazetteer::fingerprint() const {
  std::uint64_t h = kFnvOffset;
  for (const auto& e : entries_) {
    h = fnv1a64(to_string(e.label), h);
    for (const auto& w : e.words) {
      h = fnv1a64("\t", h);
      h = fnv1a64(w, h);
    }
    h = fnv1a64("\n", h);
  }
  return h;
}

namespace {

bool is_year(const std::string& s) {
  if (s.size() != 4 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  const int value = std::stoi(s);
  return value >= 1500 && value <= 2099;
}

bool is_capitalized(const std::string& surface) {
  std::size_t pos = 0;
  return !surface.empty() && utf8::is_upper(utf8::decode(surface, pos));
}

}  // namespace

std::vector<EntitySpan> tag_entities(std::span<const Token> tokens, const Gazetteer& gazetteer,
                                     const StopwordList& stopwords) {
  const std::size_t n = tokens.size();
  std::vector<bool> covered(n, false);
  std::vector<EntitySpan> spans;

  const auto accept = [&](std::size_t first, std::size_t last, EntityLabel label,
                          EntitySource source) {
    std::fill(covered.begin() + first, covered.begin() + last + 1, true);
    spans.push_back({tokens[first].position, tokens[last].position, label, source});
  };

  // Gazetteer candidates, resolved longest first then leftmost. Indices here
  // are offsets into `tokens`.
  struct Candidate {
    std::size_t first, last;
    EntityLabel label;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = gazetteer.by_first_.find(tokens[i].surface);
    if (it == gazetteer.by_first_.end()) continue;
    for (std::size_t idx : it->second) {
      const auto& words = gazetteer.entries_[idx].words;
      if (i + words.size() > n) continue;
      bool match = true;
      for (std::size_t k = 1; k < words.size() && match; ++k) {
        match = tokens[i + k].surface == words[k];
      }
      if (match) candidates.push_back({i, i + words.size() - 1, gazetteer.entries_[idx].label});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    const auto la = a.last - a.first, lb = b.last - b.first;
    return la != lb ? la > lb : a.first < b.first;
  });
  for (const auto& c : candidates) {
    if (std::none_of(covered.begin() + c.first, covered.begin() + c.last + 1,
                     [](bool b) { return b; })) {
      accept(c.first, c.last, c.label, EntitySource::Gazetteer);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!covered[i] && is_year(tokens[i].surface)) {
      accept(i, i, EntityLabel::Date, EntitySource::YearPattern);
    }
  }

  std::size_t i = 0;
  while (i < n) {
    const auto capital = [&](std::size_t k) {
      return !covered[k] && is_capitalized(tokens[k].surface) && !stopwords.contains(tokens[k].lower);
    };
    if (!capital(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && capital(j + 1)) ++j;
    if (j > i) accept(i, j, EntityLabel::Misc, EntitySource::CapitalRun);
    i = j + 1;
  }

  std::sort(spans.begin(), spans.end(),
            [](const EntitySpan& a, const EntitySpan& b) { return a.start < b.start; });
  return spans;
}

PreprocessedDoc exclude_entities(const PreprocessedDoc& doc, std::span<const EntitySpan> spans) {
  PreprocessedDoc out;
  out.doc_id = doc.doc_id;
  out.options = doc.options;
  out.options.ner_mode = NerMode::Exclude;
  for (const auto& t : doc.tokens) {
    const bool inside = std::any_of(spans.begin(), spans.end(), [&](const EntitySpan& s) {
      return t.position >= s.start && t.position <= s.end;
    });
    if (!inside) out.tokens.push_back(t);
  }
  return out;
}

}  // namespace imgplag
