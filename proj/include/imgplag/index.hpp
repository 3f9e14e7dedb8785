#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "imgplag/documents.hpp"
#include "imgplag/preprocess.hpp"
#include "imgplag/svd.hpp"
#include "imgplag/vectorspace.hpp"

namespace imgplag {

// One corpus document inside a ModeIndex.
struct IndexedDoc {
  std::string id;
  LemmaSeq lemmas;
  TermVector tfidf;
  std::vector<double> latent;  // empty when the mode has no LSA factors

  bool operator==(const IndexedDoc&) const = default;
};

// Artifacts for one preprocessing configuration (one NER mode).
struct ModeIndex {
  PreprocessOptions options;
  std::string fingerprint;
  std::vector<IndexedDoc> docs;  // sorted by id
  Vocabulary vocabulary;
  // Absent when every TF-IDF vector is zero (e.g. a one-document corpus).
  std::optional<LatentIndex> lsa;

  const IndexedDoc* find(const std::string& id) const;
  bool operator==(const ModeIndex&) const = default;
};

struct BuildOptions {
  std::size_t lsa_rank = 0;  // 0: min(50, n_docs - 1, n_terms)
  SvdOptions svd;
};

// Docs are re-sorted by id. Throws EmptyCorpus when no document has terms.
ModeIndex build_mode_index(std::vector<PreprocessedDoc> docs, std::string fingerprint,
                           const BuildOptions& options = {});

struct CorpusEntry {
  std::string id;
  std::string content_hash;  // hex
  bool operator==(const CorpusEntry&) const = default;
};

struct CorpusIndex {
  static constexpr int kVersion = 1;

  OcrBackendKind ocr_backend = OcrBackendKind::Sidecar;
  std::vector<CorpusEntry> corpus;
  std::map<NerMode, ModeIndex> modes;

  const ModeIndex& mode(NerMode mode) const;
  bool operator==(const CorpusIndex&) const = default;
};

nlohmann::json to_json(const CorpusIndex& index);
// Throws IndexFormatError.
CorpusIndex corpus_index_from_json(const nlohmann::json& j);

// index.json inside `dir`.
void save_index(const CorpusIndex& index, const std::string& dir);
CorpusIndex load_index(const std::string& dir);

}  // namespace imgplag
