#include "imgplag/index.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "imgplag/errors.hpp"

namespace imgplag {

using nlohmann::json;

const IndexedDoc* ModeIndex::find(const std::string& id) const {
  const auto it = std::lower_bound(docs.begin(), docs.end(), id,
                                   [](const IndexedDoc& d, const std::string& k) { return d.id < k; });
  return it != docs.end() && it->id == id ? &*it : nullptr;
}

ModeIndex build_mode_index(std::vector<PreprocessedDoc> docs, std::string fingerprint,
                           const BuildOptions& options) {
  if (docs.empty()) throw EmptyCorpus("corpus has no documents");
  std::sort(docs.begin(), docs.end(),
            [](const PreprocessedDoc& a, const PreprocessedDoc& b) { return a.doc_id < b.doc_id; });

  ModeIndex index;
  index.options = docs.front().options;
  index.fingerprint = std::move(fingerprint);
  std::vector<LemmaSeq> lemmas;
  lemmas.reserve(docs.size());
  for (const auto& d : docs) {
    if (!(d.options == index.options)) {
      throw OptionsMismatch("corpus documents were preprocessed with different options");
    }
    lemmas.push_back(d.lemmas());
  }
  index.vocabulary = build_vocabulary(lemmas);
  auto tfidf = tfidf_vectors(lemmas, index.vocabulary);

  const std::size_t k = options.lsa_rank > 0
                            ? options.lsa_rank
                            : default_lsa_rank(docs.size(), index.vocabulary.size());
  try {
    index.lsa = truncated_svd(tfidf, index.vocabulary.size(), k, options.svd);
  } catch (const ZeroMatrix&) {
    index.lsa.reset();
  }

  for (std::size_t i = 0; i < docs.size(); ++i) {
    IndexedDoc d;
    d.id = docs[i].doc_id;
    d.lemmas = std::move(lemmas[i]);
    d.tfidf = std::move(tfidf[i]);
    if (index.lsa) {
      const auto row = index.lsa->doc_latent.row(i);
      d.latent.assign(row.begin(), row.end());
    }
    index.docs.push_back(std::move(d));
  }
  return index;
}

const ModeIndex& CorpusIndex::mode(NerMode m) const {
  const auto it = modes.find(m);
  if (it == modes.end()) {
    throw IndexFormatError("index has no artifacts for ner mode '" + std::string(to_string(m)) + "'");
  }
  return it->second;
}

namespace {

json options_to_json(const PreprocessOptions& o) {
  return json{{"strip_refs", o.strip_refs},
              {"stopwords", o.stopwords},
              {"lemmatize", o.lemmatize},
              {"ner_mode", to_string(o.ner_mode)}};
}

PreprocessOptions options_from_json(const json& j) {
  PreprocessOptions o;
  o.strip_refs = j.at("strip_refs").get<bool>();
  o.stopwords = j.at("stopwords").get<bool>();
  o.lemmatize = j.at("lemmatize").get<bool>();
  o.ner_mode = parse_ner_mode(j.at("ner_mode").get<std::string>());
  return o;
}

json mode_to_json(const ModeIndex& m) {
  json docs = json::array();
  for (const auto& d : m.docs) {
    std::vector<std::size_t> indices;
    std::vector<double> weights;
    for (const auto& [i, w] : d.tfidf.entries()) {
      indices.push_back(i);
      weights.push_back(w);
    }
    docs.push_back(json{{"id", d.id},
                        {"lemmas", d.lemmas},
                        {"tfidf", json{{"indices", indices}, {"weights", weights}}}});
  }
  json lsa = nullptr;
  if (m.lsa) {
    lsa = json{{"rank", m.lsa->rank()},
               {"n_terms", m.lsa->term_factors.rows()},
               {"n_docs", m.lsa->doc_latent.rows()},
               {"singular_values", m.lsa->singular_values},
               {"term_factors", m.lsa->term_factors.data()},
               {"doc_latent", m.lsa->doc_latent.data()}};
  }
  return json{{"options", options_to_json(m.options)},
              {"fingerprint", m.fingerprint},
              {"vocabulary", json{{"terms", m.vocabulary.terms()},
                                  {"df", m.vocabulary.df()},
                                  {"n_docs", m.vocabulary.n_docs()}}},
              {"docs", std::move(docs)},
              {"lsa", std::move(lsa)}};
}

ModeIndex mode_from_json(const json& j) {
  ModeIndex m;
  m.options = options_from_json(j.at("options"));
  m.fingerprint = j.at("fingerprint").get<std::string>();
  const auto& v = j.at("vocabulary");
  m.vocabulary = Vocabulary(v.at("terms").get<std::vector<std::string>>(),
                            v.at("df").get<std::vector<std::size_t>>(),
                            v.at("n_docs").get<std::size_t>());
  const auto& lsa = j.at("lsa");
  if (!lsa.is_null()) {
    const auto rank = lsa.at("rank").get<std::size_t>();
    LatentIndex li;
    li.singular_values = lsa.at("singular_values").get<std::vector<double>>();
    li.term_factors = DenseMatrix(lsa.at("n_terms").get<std::size_t>(), rank,
                                  lsa.at("term_factors").get<std::vector<double>>());
    li.doc_latent = DenseMatrix(lsa.at("n_docs").get<std::size_t>(), rank,
                                lsa.at("doc_latent").get<std::vector<double>>());
    if (li.singular_values.size() != rank || li.term_factors.rows() != m.vocabulary.size()) {
      throw IndexFormatError("latent factors do not match the vocabulary");
    }
    m.lsa = std::move(li);
  }
  std::size_t row = 0;
  for (const auto& jd : j.at("docs")) {
    IndexedDoc d;
    d.id = jd.at("id").get<std::string>();
    d.lemmas = jd.at("lemmas").get<LemmaSeq>();
    const auto indices = jd.at("tfidf").at("indices").get<std::vector<std::size_t>>();
    const auto weights = jd.at("tfidf").at("weights").get<std::vector<double>>();
    if (indices.size() != weights.size()) throw IndexFormatError("tfidf indices/weights mismatch");
    std::vector<TermVector::Entry> entries;
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] >= m.vocabulary.size()) throw IndexFormatError("tfidf index out of range");
      entries.emplace_back(indices[i], weights[i]);
    }
    d.tfidf = TermVector(std::move(entries));
    if (m.lsa) {
      if (row >= m.lsa->doc_latent.rows()) throw IndexFormatError("missing latent row");
      const auto r = m.lsa->doc_latent.row(row);
      d.latent.assign(r.begin(), r.end());
    }
    ++row;
    m.docs.push_back(std::move(d));
  }
  if (m.docs.size() != m.vocabulary.n_docs()) throw IndexFormatError("document count mismatch");
  return m;
}

}  // namespace

json to_json(const CorpusIndex& index) {
  json corpus = json::array();
  for (const auto& e : index.corpus) corpus.push_back(json{{"id", e.id}, {"content_hash", e.content_hash}});
  json modes = json::object();
  for (const auto& [mode, m] : index.modes) modes[std::string(to_string(mode))] = mode_to_json(m);
  return json{{"format", "imgplag-index"},
              {"version", CorpusIndex::kVersion},
              {"ocr_backend", to_string(index.ocr_backend)},
              {"corpus", std::move(corpus)},
              {"modes", std::move(modes)}};
}

CorpusIndex corpus_index_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "imgplag-index") throw IndexFormatError("not an imgplag index");
    if (j.at("version").get<int>() != CorpusIndex::kVersion) throw IndexFormatError("unsupported index version");
    CorpusIndex index;
    index.ocr_backend = parse_ocr_backend_kind(j.at("ocr_backend").get<std::string>());
    for (const auto& e : j.at("corpus")) {
      index.corpus.push_back({e.at("id").get<std::string>(), e.at("content_hash").get<std::string>()});
    }
    for (const auto& [name, m] : j.at("modes").items()) {
      index.modes.emplace(parse_ner_mode(name), mode_from_json(m));
    }
    return index;
  } catch (const json::exception& e) {
    throw IndexFormatError(std::string("malformed index: ") + e.what());
  } catch (const ConfigError& e) {
    throw IndexFormatError(std::string("malformed index: ") + e.what());
  }
}

void save_index(const CorpusIndex& index, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / "index.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(index).dump(1) << '\n';
}

CorpusIndex load_index(const std::string& dir) {
  const auto path = std::filesystem::path(dir) / "index.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IndexFormatError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw IndexFormatError(std::string("malformed index: ") + e.what());
  }
  return corpus_index_from_json(j);
}

}  // namespace imgplag
