#include "imgplag/wordnet.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "imgplag/errors.hpp"

namespace imgplag {

std::string_view to_string(WordnetMeasure measure) {
  return measure == WordnetMeasure::WuPalmer ? "wu_palmer" : "path";
}

WordnetMeasure parse_wordnet_measure(std::string_view name) {
  if (name == "wu_palmer" || name == "wup") return WordnetMeasure::WuPalmer;
  if (name == "path") return WordnetMeasure::Path;
  throw ConfigError("unknown wordnet measure '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_list(std::string_view field, std::size_t line_no, const char* what) {
  std::vector<std::string> out;
  field = trim(field);
  if (field.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = field.find(',', start);
    const auto item = trim(field.substr(start, comma - start));
    if (item.empty()) throw ParseError(std::string("empty entry in ") + what + " list", line_no);
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Lexicon Lexicon::parse(std::string_view text) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      const auto bar = line.find('|', start);
      fields.push_back(line.substr(start, bar - start));
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
    if (fields.size() != 4) throw ParseError("expected 'id|pos|lemmas|parents'", line_no);

    Synset s;
    s.id = std::string(trim(fields[0]));
    if (s.id.empty()) throw ParseError("empty synset id", line_no);
    const auto pos = trim(fields[1]);
    if (pos == "n") s.pos = PartOfSpeech::Noun;
    else if (pos == "v") s.pos = PartOfSpeech::Verb;
    else if (pos == "a") s.pos = PartOfSpeech::Adjective;
    else if (pos == "r") s.pos = PartOfSpeech::Adverb;
    else throw ParseError("part of speech must be one of n, v, a, r", line_no);
    s.lemmas = split_list(fields[2], line_no, "lemma");
    if (s.lemmas.empty()) throw ParseError("synset has no lemmas", line_no);
    s.parents = split_list(fields[3], line_no, "parent");

    if (!lex.by_id_.emplace(s.id, lex.synsets_.size()).second) {
      throw ParseError("duplicate synset id '" + s.id + "'", line_no);
    }
    lex.synsets_.push_back(std::move(s));
  }

  const std::size_t n = lex.synsets_.size();
  lex.parents_.resize(n);
  lex.children_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& p : lex.synsets_[i].parents) {
      const auto it = lex.by_id_.find(p);
      if (it == lex.by_id_.end()) {
        throw DanglingParent("synset '" + lex.synsets_[i].id + "' names undefined parent '" + p + "'");
      }
      lex.parents_[i].push_back(it->second);
      lex.children_[it->second].push_back(i);
    }
    if (lex.parents_[i].empty()) lex.roots_.push_back(i);
    if (lex.synsets_[i].pos == PartOfSpeech::Noun) {
      for (const auto& l : lex.synsets_[i].lemmas) lex.noun_index_[l].push_back(i);
    }
  }
  for (auto& [lemma, senses] : lex.noun_index_) {
    std::sort(senses.begin(), senses.end(), [&](std::size_t a, std::size_t b) {
      return lex.synsets_[a].id < lex.synsets_[b].id;
    });
    senses.erase(std::unique(senses.begin(), senses.end()), senses.end());
  }

  // Topological order (parents first); leftovers mean a cycle.
  std::vector<std::size_t> pending(n);
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = lex.parents_[i].size();
    if (pending[i] == 0) ready.push_back(i);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const auto s = ready.front();
    ready.pop_front();
    order.push_back(s);
    for (auto c : lex.children_[s]) {
      if (--pending[c] == 0) ready.push_back(c);
    }
  }
  if (order.size() != n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (pending[i] > 0) throw CyclicTaxonomy("hypernym cycle through synset '" + lex.synsets_[i].id + "'");
    }
  }

  const std::size_t root_depth = lex.roots_.size() > 1 ? 2 : 1;
  lex.depth_.assign(n, 0);
  lex.ancestors_.resize(n);
  for (auto s : order) {
    std::set<std::size_t> anc{s};
    std::size_t depth = std::numeric_limits<std::size_t>::max();
    for (auto p : lex.parents_[s]) {
      anc.insert(lex.ancestors_[p].begin(), lex.ancestors_[p].end());
      depth = std::min(depth, lex.depth_[p] + 1);
    }
    lex.depth_[s] = lex.parents_[s].empty() ? root_depth : depth;
    lex.ancestors_[s].assign(anc.begin(), anc.end());
  }
  return lex;
}

Lexicon Lexicon::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read lexicon '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool Lexicon::contains(std::string_view id) const { return by_id_.find(id) != by_id_.end(); }

std::size_t Lexicon::index_of(std::string_view id) const {
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) throw std::out_of_range("unknown synset '" + std::string(id) + "'");
  return it->second;
}

const Synset& Lexicon::synset(std::string_view id) const { return synsets_[index_of(id)]; }

std::vector<std::string> Lexicon::roots() const {
  std::vector<std::string> out;
  for (auto r : roots_) out.push_back(synsets_[r].id);
  return out;
}

const std::vector<std::size_t>& Lexicon::noun_senses(const std::string& lemma) const {
  static const std::vector<std::size_t> none;
  const auto it = noun_index_.find(lemma);
  return it == noun_index_.end() ? none : it->second;
}

std::size_t Lexicon::depth(std::string_view id) const { return depth_[index_of(id)]; }

std::size_t Lexicon::path_length(std::size_t a, std::size_t b) const {
  if (a == b) return 0;
  const std::size_t n = synsets_.size();
  const std::size_t virtual_root = n;
  const bool use_virtual = has_virtual_root();
  constexpr auto kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n + 1, kUnseen);
  std::deque<std::size_t> queue{a};
  dist[a] = 0;
  const auto visit = [&](std::size_t from, std::size_t to) {
    if (dist[to] == kUnseen) {
      dist[to] = dist[from] + 1;
      queue.push_back(to);
    }
  };
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    if (s == b) return dist[s];
    if (s == virtual_root) {
      for (auto r : roots_) visit(s, r);
      continue;
    }
    for (auto p : parents_[s]) visit(s, p);
    for (auto c : children_[s]) visit(s, c);
    if (use_virtual && parents_[s].empty()) visit(s, virtual_root);
  }
  // Unreachable only if the taxonomy is disconnected, which the virtual root
  // rules out.
  return dist[b];
}

std::size_t Lexicon::path_length(std::string_view a, std::string_view b) const {
  return path_length(index_of(a), index_of(b));
}

double Lexicon::path_similarity(std::string_view a, std::string_view b) const {
  return 1.0 / (1.0 + static_cast<double>(path_length(a, b)));
}

std::optional<std::size_t> Lexicon::lcs(std::size_t a, std::size_t b) const {
  std::vector<std::size_t> common;
  std::set_intersection(ancestors_[a].begin(), ancestors_[a].end(), ancestors_[b].begin(),
                        ancestors_[b].end(), std::back_inserter(common));
  std::optional<std::size_t> best;
  for (auto c : common) {
    if (!best || depth_[c] > depth_[*best] ||
        (depth_[c] == depth_[*best] && synsets_[c].id < synsets_[*best].id)) {
      best = c;
    }
  }
  return best;
}

std::string Lexicon::lowest_common_subsumer(std::string_view a, std::string_view b) const {
  const auto c = lcs(index_of(a), index_of(b));
  return c ? synsets_[*c].id : std::string{};
}

double Lexicon::wu_palmer(std::size_t a, std::size_t b) const {
  const auto c = lcs(a, b);
  const double lcs_depth = c ? static_cast<double>(depth_[*c]) : 1.0;
  return 2.0 * lcs_depth / static_cast<double>(depth_[a] + depth_[b]);
}

double Lexicon::wu_palmer(std::string_view a, std::string_view b) const {
  return wu_palmer(index_of(a), index_of(b));
}

double Lexicon::synset_similarity(std::size_t a, std::size_t b, WordnetMeasure measure) const {
  if (measure == WordnetMeasure::WuPalmer) return wu_palmer(a, b);
  return 1.0 / (1.0 + static_cast<double>(path_length(a, b)));
}

double word_similarity(const std::string& w1, const std::string& w2, const Lexicon& lexicon,
                       WordnetMeasure measure) {
  const auto& s1 = lexicon.noun_senses(w1);
  const auto& s2 = lexicon.noun_senses(w2);
  if (s1.empty() || s2.empty()) return w1 == w2 ? 1.0 : 0.0;
  double best = 0.0;
  for (auto a : s1) {
    for (auto b : s2) best = std::max(best, lexicon.synset_similarity(a, b, measure));
  }
  return best;
}

DocSimilarity doc_similarity(std::span<const std::string> a, std::span<const std::string> b,
                             const Lexicon& lexicon, WordnetMeasure measure) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() || sb.empty()) return {0.0, true};

  std::vector<double> row_best(sa.size(), 0.0);
  std::vector<double> col_best(sb.size(), 0.0);
  std::size_t i = 0;
  for (const auto& wa : sa) {
    std::size_t j = 0;
    for (const auto& wb : sb) {
      const double s = word_similarity(wa, wb, lexicon, measure);
      row_best[i] = std::max(row_best[i], s);
      col_best[j] = std::max(col_best[j], s);
      ++j;
    }
    ++i;
  }
  const auto mean = [](const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
  };
  return {0.5 * (mean(row_best) + mean(col_best)), false};
}

DocSimilarity doc_similarity(const PreprocessedDoc& a, const PreprocessedDoc& b,
                             const Lexicon& lexicon, WordnetMeasure measure) {
  const auto la = a.lemmas();
  const auto lb = b.lemmas();
  return doc_similarity(la, lb, lexicon, measure);
}

}  // namespace imgplag
