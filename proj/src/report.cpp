#include "imgplag/report.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "imgplag/errors.hpp"

namespace imgplag {

using nlohmann::json;

std::string_view to_string(AggregationMode mode) {
  return mode == AggregationMode::Pairwise ? "pairwise" : "pooled";
}

AggregationMode parse_aggregation_mode(std::string_view name) {
  if (name == "pairwise") return AggregationMode::Pairwise;
  if (name == "pooled") return AggregationMode::Pooled;
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(ReportFormat format) {
  switch (format) {
    case ReportFormat::Table: return "table";
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Json: return "json";
  }
  return "table";
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw ConfigError("unknown format '" + std::string(name) + "'");
}

std::string_view column_label(AlgorithmId algo) {
  switch (algo) {
    case AlgorithmId::Jaccard: return "Jaccard";
    case AlgorithmId::Cosine: return "Cosine";
    case AlgorithmId::Tfidf: return "TF-IDF";
    case AlgorithmId::Lsa: return "LSA";
    case AlgorithmId::Embed: return "BERT";
    case AlgorithmId::Wordnet: return "WordNet";
  }
  return "";
}

MatchResult score_against_corpus(QueryArtifacts& query, const ModeIndex& index, AlgorithmId algo,
                                 AggregationMode mode, const ScoringEnv& env,
                                 QueryArtifacts* pooled) {
  if (index.docs.empty()) throw EmptyCorpus("index has no documents");
  ScoringEnv local = env;
  local.index = &index;

  MatchResult result;
  result.algorithm = algo;
  result.mode = mode;
  result.ner_mode = index.options.ner_mode;

  if (mode == AggregationMode::Pooled) {
    std::optional<QueryArtifacts> own;
    if (pooled == nullptr) {
      own = pooled_corpus(index);
      pooled = &*own;
    }
    const auto s = score(algo, query, *pooled, local);
    result.percent = 100.0 * s.value;
    result.warning = s.warning;
    return result;
  }

  // docs are sorted by id, so keeping the first maximum breaks ties towards
  // the smallest id.
  std::optional<SimilarityScore> best;
  for (const auto& doc : index.docs) {
    auto target = as_artifacts(doc);
    const auto s = score(algo, query, target, local);
    if (!best || s.value > best->value) {
      best = s;
      result.best_doc = doc.id;
    }
  }
  result.percent = 100.0 * best->value;
  result.warning = best->warning;
  return result;
}

PlagiarismReport build_report(const ExtractedText& query, const ReportRequest& request,
                              const ReportContext& context) {
  if (context.index == nullptr || context.pipeline == nullptr) {
    throw ConfigError("build_report needs an index and a pipeline");
  }
  PlagiarismReport report;
  report.query_id = query.doc_id;
  report.corpus_size = context.index->corpus.size();
  report.labels = context.labels;

  std::set<NerMode> ner_modes(request.ner_modes.begin(), request.ner_modes.end());
  std::set<AlgorithmId> algorithms(request.algorithms.begin(), request.algorithms.end());

  for (const NerMode ner : ner_modes) {
    const ModeIndex& index = context.index->mode(ner);
    PreprocessOptions options = request.base_options;
    options.ner_mode = ner;
    const auto fingerprint = context.pipeline->fingerprint(options);
    report.fingerprints[ner] = fingerprint;

    const PreprocessedDoc doc = context.pipeline->run(query, options);
    QueryArtifacts q = prepare_query(doc, fingerprint, index);
    std::optional<QueryArtifacts> pooled;
    if (request.mode == AggregationMode::Pooled) pooled = pooled_corpus(index);

    const ScoringEnv env{&index, context.lexicon, context.measure, context.embedder};
    for (const AlgorithmId algo : algorithms) {
      report.results.push_back(score_against_corpus(q, index, algo, request.mode, env,
                                                    pooled ? &*pooled : nullptr));
    }
  }
  return report;
}

PlagiarismReport build_report(const ImageDoc& query_image, OcrBackend& backend,
                              const ReportRequest& request, const ReportContext& context) {
  return build_report(extract_text(query_image, backend), request, context);
}

// --- rendering ---------------------------------------------------------------

namespace {

std::string render_table(const PlagiarismReport& report) {
  std::set<AlgorithmId> algos;
  std::set<NerMode> modes;
  for (const auto& r : report.results) {
    algos.insert(r.algorithm);
    modes.insert(r.ner_mode);
  }

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Input"};
  for (auto a : algos) header.emplace_back(column_label(a));
  header.emplace_back("Entities");
  rows.push_back(header);
  for (auto m : modes) {
    std::vector<std::string> row{report.query_id};
    for (auto a : algos) {
      const auto it = std::find_if(report.results.begin(), report.results.end(),
                                   [&](const MatchResult& r) { return r.algorithm == a && r.ner_mode == m; });
      row.push_back(it == report.results.end() ? "-" : fmt::format("{:.2f}", it->percent));
    }
    row.emplace_back(m == NerMode::Include ? "included" : "excluded");
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      const bool numeric = c > 0 && c + 1 < row.size();
      line += numeric ? fmt::format("{:>{}}", row[c], width[c]) : fmt::format("{:<{}}", row[c], width[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_csv(const PlagiarismReport& report) {
  std::string out = "input,algorithm,ner_mode,mode,best_doc,percent\n";
  for (const auto& r : report.results) {
    out += fmt::format("{},{},{},{},{},{}\n", csv_field(report.query_id), to_string(r.algorithm),
                       to_string(r.ner_mode), to_string(r.mode), csv_field(r.best_doc.value_or("")),
                       r.percent);
  }
  return out;
}

}  // namespace

json to_json(const PlagiarismReport& report) {
  json results = json::array();
  for (const auto& r : report.results) {
    results.push_back(json{{"algorithm", to_string(r.algorithm)},
                           {"mode", to_string(r.mode)},
                           {"ner_mode", to_string(r.ner_mode)},
                           {"best_doc", r.best_doc ? json(*r.best_doc) : json(nullptr)},
                           {"percent", r.percent},
                           {"warning", r.warning ? json("EmptyComparison") : json(nullptr)}});
  }
  json fingerprints = json::object();
  for (const auto& [m, f] : report.fingerprints) fingerprints[std::string(to_string(m))] = f;
  return json{{"query_id", report.query_id},
              {"corpus_size", report.corpus_size},
              {"labels", json{{"ocr_backend", report.labels.ocr_backend},
                              {"embed_provider", report.labels.embed_provider},
                              {"wordnet_measure", report.labels.wordnet_measure}}},
              {"fingerprints", std::move(fingerprints)},
              {"results", std::move(results)}};
}

PlagiarismReport report_from_json(const json& j) {
  try {
    PlagiarismReport report;
    report.query_id = j.at("query_id").get<std::string>();
    report.corpus_size = j.at("corpus_size").get<std::size_t>();
    const auto& labels = j.at("labels");
    report.labels = {labels.at("ocr_backend").get<std::string>(),
                     labels.at("embed_provider").get<std::string>(),
                     labels.at("wordnet_measure").get<std::string>()};
    for (const auto& [name, f] : j.at("fingerprints").items()) {
      report.fingerprints[parse_ner_mode(name)] = f.get<std::string>();
    }
    for (const auto& jr : j.at("results")) {
      MatchResult r;
      const auto algo = parse_algorithm(jr.at("algorithm").get<std::string>());
      if (!algo) throw Error("unknown algorithm in report");
      r.algorithm = *algo;
      r.mode = parse_aggregation_mode(jr.at("mode").get<std::string>());
      r.ner_mode = parse_ner_mode(jr.at("ner_mode").get<std::string>());
      if (!jr.at("best_doc").is_null()) r.best_doc = jr.at("best_doc").get<std::string>();
      r.percent = jr.at("percent").get<double>();
      if (!jr.at("warning").is_null()) r.warning = ScoreWarning::EmptyComparison;
      report.results.push_back(std::move(r));
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

std::string render(const PlagiarismReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Table: return render_table(report);
    case ReportFormat::Csv: return render_csv(report);
    case ReportFormat::Json: return to_json(report).dump(2) + "\n";
  }
  return {};
}

}  // namespace imgplag
