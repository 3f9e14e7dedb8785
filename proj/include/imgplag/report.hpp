#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "imgplag/index.hpp"
#include "imgplag/ingest.hpp"
#include "imgplag/pipeline.hpp"
#include "imgplag/similarity.hpp"

namespace imgplag {

// pairwise: max over individual corpus documents. pooled: one comparison
// against the concatenation of every corpus document.
enum class AggregationMode { Pairwise, Pooled };

std::string_view to_string(AggregationMode mode);
AggregationMode parse_aggregation_mode(std::string_view name);

struct MatchResult {
  AlgorithmId algorithm = AlgorithmId::Jaccard;
  AggregationMode mode = AggregationMode::Pairwise;
  NerMode ner_mode = NerMode::Include;
  std::optional<std::string> best_doc;  // pairwise only
  double percent = 0.0;                 // 100 * score
  std::optional<ScoreWarning> warning;

  bool operator==(const MatchResult&) const = default;
};

struct ReportLabels {
  std::string ocr_backend;
  std::string embed_provider;
  std::string wordnet_measure;

  bool operator==(const ReportLabels&) const = default;
};

struct PlagiarismReport {
  std::string query_id;
  std::size_t corpus_size = 0;
  std::vector<MatchResult> results;
  ReportLabels labels;
  std::map<NerMode, std::string> fingerprints;

  bool operator==(const PlagiarismReport&) const = default;
};

// Scores `query` against the corpus. Pairwise ties go to the smallest doc id.
// `pooled` may be passed to reuse a pooled_corpus(index) across algorithms.
// Throws EmptyCorpus.
MatchResult score_against_corpus(QueryArtifacts& query, const ModeIndex& index, AlgorithmId algo,
                                 AggregationMode mode, const ScoringEnv& env,
                                 QueryArtifacts* pooled = nullptr);

struct ReportRequest {
  std::vector<AlgorithmId> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
  std::vector<NerMode> ner_modes{NerMode::Include, NerMode::Exclude};
  AggregationMode mode = AggregationMode::Pairwise;
  PreprocessOptions base_options;  // ner_mode is overridden per run
};

struct ReportContext {
  const CorpusIndex* index = nullptr;
  const Pipeline* pipeline = nullptr;
  const Lexicon* lexicon = nullptr;
  WordnetMeasure measure = WordnetMeasure::WuPalmer;
  EmbeddingProvider* embedder = nullptr;
  ReportLabels labels;
};

// Preprocesses the query once per NER mode and scores every requested
// algorithm. Results are ordered by NER mode, then algorithm.
PlagiarismReport build_report(const ExtractedText& query, const ReportRequest& request,
                              const ReportContext& context);
// OCR first, then as above.
PlagiarismReport build_report(const ImageDoc& query_image, OcrBackend& backend,
                              const ReportRequest& request, const ReportContext& context);

enum class ReportFormat { Table, Csv, Json };

std::string_view to_string(ReportFormat format);
ReportFormat parse_report_format(std::string_view name);

// Column header used for an algorithm in table output.
std::string_view column_label(AlgorithmId algo);

std::string render(const PlagiarismReport& report, ReportFormat format);

nlohmann::json to_json(const PlagiarismReport& report);
// Throws Error on malformed input.
PlagiarismReport report_from_json(const nlohmann::json& j);

}  // namespace imgplag
