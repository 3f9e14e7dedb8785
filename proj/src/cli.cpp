#include "imgplag/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "imgplag/embed.hpp"
#include "imgplag/errors.hpp"
#include "imgplag/hash.hpp"
#include "imgplag/index.hpp"
#include "imgplag/ingest.hpp"
#include "imgplag/pipeline.hpp"
#include "imgplag/report.hpp"
#include "imgplag/resources.hpp"
#include "imgplag/selftest.hpp"
#include "imgplag/wordnet.hpp"

namespace fs = std::filesystem;

namespace imgplag::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, v));
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const auto n = std::stoull(v, &used);
    if (used == v.size() && v.find('-') == std::string::npos) return n;
  } catch (const std::exception&) {
  }
  throw ConfigError(fmt::format("{}: expected a non-negative integer, got '{}'", key, v));
}

std::string flag_name(const std::string& key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', '-');
  return "--" + s;
}

std::string env_name(const std::string& key) {
  std::string s = "IMGPLAG_" + key;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

OcrBackendConfig ocr_config(const Settings& s) {
  OcrBackendConfig c;
  c.kind = parse_ocr_backend_kind(s.get("ocr"));
  c.endpoint = s.get("ocr_endpoint");
  c.credential_env = s.get("ocr_credential_env");
  c.max_in_flight = parse_count("ocr_max_in_flight", s.get("ocr_max_in_flight"));
  if (!s.get("ocr_monthly_quota").empty()) c.monthly_quota = parse_count("ocr_monthly_quota", s.get("ocr_monthly_quota"));
  c.validate();
  return c;
}

EmbeddingProviderConfig embed_config(const Settings& s) {
  EmbeddingProviderConfig c;
  c.kind = parse_embed_provider_kind(s.get("embed"));
  c.endpoint = s.get("embed_endpoint");
  c.credential_env = s.get("embed_credential_env");
  c.dim = parse_count("embed_dim", s.get("embed_dim"));
  c.seed = parse_count("embed_seed", s.get("embed_seed"));
  c.validate();
  return c;
}

PreprocessOptions base_options(const Settings& s) {
  PreprocessOptions o;
  o.strip_refs = parse_bool("strip_refs", s.get("strip_refs"));
  o.stopwords = parse_bool("stopwords", s.get("stopwords"));
  o.lemmatize = parse_bool("lemmatize", s.get("lemmatize"));
  return o;
}

Pipeline make_pipeline(const Settings& s) {
  Gazetteer gazetteer;
  if (!s.get("gazetteer").empty()) gazetteer = Gazetteer::load(s.get("gazetteer"));
  return Pipeline(StopwordList::builtin(), Lemmatizer::builtin(), std::move(gazetteer));
}

std::vector<NerMode> ner_modes(const std::string& v) {
  if (v == "both") return {NerMode::Include, NerMode::Exclude};
  return {parse_ner_mode(v)};
}

std::vector<AlgorithmId> algorithms(const std::string& v) {
  if (v == "all") return {kAllAlgorithms.begin(), kAllAlgorithms.end()};
  std::vector<AlgorithmId> out;
  for (const auto& name : split_list(v)) {
    const auto a = parse_algorithm(name);
    if (!a) throw ConfigError(fmt::format("unknown algorithm '{}'", name));
    out.push_back(*a);
  }
  if (out.empty()) throw ConfigError("no algorithms requested");
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw Error("cannot write " + path.string());
}

// Maps library errors onto exit codes for one command.
template <class Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const OptionsMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kOptionsMismatch;
  } catch (const MissingSidecar& e) {
    err << "error: " << e.what() << '\n';
    return kProvider;
  } catch (const OcrHttpError& e) {
    err << "error: " << e.what() << '\n';
    return kProvider;
  } catch (const QuotaExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kProvider;
  } catch (const EmbedHttpError& e) {
    err << "error: " << e.what() << '\n';
    return kProvider;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kProvider;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int run_index(const Settings& s, const std::string& corpus, const std::string& out_dir,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!fs::is_directory(corpus)) {
      err << "error: corpus directory not found: " << corpus << '\n';
      return int{kUsage};
    }
    const auto ocr = ocr_config(s);
    const auto pipeline = make_pipeline(s);
    const auto base = base_options(s);
    BuildOptions build;
    build.lsa_rank = parse_count("lsa_rank", s.get("lsa_rank"));

    fs::create_directories(out_dir);
    auto backend = make_ocr_backend(ocr);
    IngestResult ingested = ingest_corpus(corpus, *backend, ocr, fs::path(out_dir) / "ocr_cache.json");
    for (const auto& skipped : ingested.skipped) err << "skipped " << skipped.filename().string() << '\n';
    if (!ingested.failures.empty()) {
      for (const auto& f : ingested.failures) err << "error: " << f.doc_id << ": " << f.message << '\n';
      return int{kProvider};
    }

    CorpusIndex index;
    index.ocr_backend = ocr.kind;
    for (const auto& img : ingested.images) index.corpus.push_back({img.id, to_hex(img.content_hash)});
    for (const NerMode mode : {NerMode::Include, NerMode::Exclude}) {
      PreprocessOptions options = base;
      options.ner_mode = mode;
      std::vector<PreprocessedDoc> docs;
      for (const auto& text : ingested.texts) docs.push_back(pipeline.run(text, options));
      index.modes.emplace(mode, build_mode_index(std::move(docs), pipeline.fingerprint(options), build));
    }
    save_index(index, out_dir);
    out << fmt::format("indexed {} documents ({} OCR calls) into {}\n", index.corpus.size(),
                       ingested.backend_calls, (fs::path(out_dir) / "index.json").string());
    return int{kOk};
  });
}

int run_check(const Settings& s, const std::string& index_dir, const std::string& input,
              const std::optional<std::string>& report_dir, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!fs::is_regular_file(fs::path(index_dir) / "index.json")) {
      err << "error: no index.json in " << index_dir << '\n';
      return int{kUsage};
    }
    if (!fs::is_regular_file(input)) {
      err << "error: input not found: " << input << '\n';
      return int{kUsage};
    }
    ReportRequest request;
    request.algorithms = algorithms(s.get("algorithms"));
    request.ner_modes = ner_modes(s.get("ner"));
    request.mode = parse_aggregation_mode(s.get("mode"));
    request.base_options = base_options(s);
    const ReportFormat format = parse_report_format(s.get("format"));
    const WordnetMeasure measure = parse_wordnet_measure(s.get("wordnet_measure"));
    const auto ocr = ocr_config(s);
    const auto embed = embed_config(s);
    const auto pipeline = make_pipeline(s);
    const Lexicon lexicon = s.get("lexicon").empty() ? Lexicon::parse(resources::lexicon())
                                                     : Lexicon::load(s.get("lexicon"));

    const CorpusIndex index = load_index(index_dir);
    const ImageDoc image = ImageDoc::from_path(input);
    auto backend = make_ocr_backend(ocr);
    auto embedder = make_embedding_provider(embed);

    ReportContext context;
    context.index = &index;
    context.pipeline = &pipeline;
    context.lexicon = &lexicon;
    context.measure = measure;
    context.embedder = embedder.get();
    context.labels = {std::string(to_string(ocr.kind)), embedder->label(), std::string(to_string(measure))};

    const PlagiarismReport report = build_report(image, *backend, request, context);
    out << render(report, format);
    if (report_dir) {
      fs::create_directories(*report_dir);
      write_file(fs::path(*report_dir) / "report.txt", render(report, ReportFormat::Table));
      write_file(fs::path(*report_dir) / "report.csv", render(report, ReportFormat::Csv));
      write_file(fs::path(*report_dir) / "report.json", render(report, ReportFormat::Json));
    }
    return int{kOk};
  });
}

}  // namespace

const std::vector<std::string>& Settings::keys() {
  static const std::vector<std::string> k = {
      "ocr",        "ocr_endpoint", "ocr_credential_env", "ocr_max_in_flight", "ocr_monthly_quota",
      "embed",      "embed_endpoint", "embed_credential_env", "embed_dim",      "embed_seed",
      "lexicon",    "gazetteer",    "lsa_rank",           "wordnet_measure",   "mode",
      "format",     "algorithms",   "ner",                "strip_refs",        "stopwords",
      "lemmatize"};
  return k;
}

std::map<std::string, std::string> Settings::defaults() {
  return {{"ocr", "sidecar"},
          {"ocr_endpoint", ""},
          {"ocr_credential_env", "VISION_API_KEY"},
          {"ocr_max_in_flight", "4"},
          {"ocr_monthly_quota", ""},
          {"embed", "fallback"},
          {"embed_endpoint", ""},
          {"embed_credential_env", "EMBED_API_KEY"},
          {"embed_dim", "256"},
          {"embed_seed", "42"},
          {"lexicon", ""},
          {"gazetteer", ""},
          {"lsa_rank", "0"},
          {"wordnet_measure", "wu_palmer"},
          {"mode", "pairwise"},
          {"format", "table"},
          {"algorithms", "all"},
          {"ner", "both"},
          {"strip_refs", "true"},
          {"stopwords", "true"},
          {"lemmatize", "true"}};
}

std::map<std::string, std::string> Settings::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(f, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("{}:{}: expected key = value", path, number));
    const std::string key = trim(t.substr(0, eq));
    if (std::find(keys().begin(), keys().end(), key) == keys().end()) {
      throw ConfigError(fmt::format("{}:{}: unknown key '{}'", path, number, key));
    }
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

const std::string& Settings::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw ConfigError("unknown setting '" + key + "'");
  return it->second;
}

Settings resolve_settings(const std::map<std::string, std::string>& flags,
                          const std::optional<std::string>& config_file) {
  Settings s;
  s.values = Settings::defaults();
  for (const auto& key : Settings::keys()) {
    if (const char* v = std::getenv(env_name(key).c_str())) s.values[key] = v;
  }
  if (config_file) {
    for (auto& [k, v] : Settings::parse_file(*config_file)) s.values[k] = v;
  }
  for (const auto& [k, v] : flags) s.values[k] = v;
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Text-based plagiarism detection for images", "imgplag"};
  app.require_subcommand(1);

  std::map<std::string, std::optional<std::string>> flag_values;
  std::optional<std::string> config_file;
  const auto add_settings = [&](CLI::App* cmd) {
    for (const auto& key : Settings::keys()) {
      cmd->add_option(flag_name(key), flag_values[key], fmt::format("overrides config key '{}'", key));
    }
    cmd->add_option("--config", config_file, "key = value settings file");
  };

  std::string corpus, out_dir;
  auto* index_cmd = app.add_subcommand("index", "OCR a corpus directory and build index.json");
  index_cmd->add_option("--corpus", corpus, "directory of corpus images")->required();
  index_cmd->add_option("--out", out_dir, "index output directory")->required();
  add_settings(index_cmd);

  std::string index_dir, input;
  std::optional<std::string> report_dir;
  auto* check_cmd = app.add_subcommand("check", "score a suspicious image against an index");
  check_cmd->add_option("--index", index_dir, "directory holding index.json")->required();
  check_cmd->add_option("--input", input, "suspicious image")->required();
  check_cmd->add_option("--report-dir", report_dir, "also write report.txt, report.csv and report.json here");
  add_settings(check_cmd);

  std::string only;
  std::optional<double> svd_tol;
  auto* selftest_cmd = app.add_subcommand("selftest", "run the oracle suites");
  selftest_cmd->add_option("--only", only, "comma separated suites: jaccard,cosine,svd,wordnet");
  selftest_cmd->add_option("--svd-tol", svd_tol, "singular value tolerance for the svd suite");

  std::vector<std::string> argv_storage{"imgplag"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const auto settings = [&]() {
    std::map<std::string, std::string> flags;
    for (const auto& [k, v] : flag_values) {
      if (v) flags[k] = *v;
    }
    return resolve_settings(flags, config_file);
  };

  if (*index_cmd) {
    Settings s;
    try {
      s = settings();
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
    return run_index(s, corpus, out_dir, out, err);
  }
  if (*check_cmd) {
    Settings s;
    try {
      s = settings();
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
    return run_check(s, index_dir, input, report_dir, out, err);
  }
  selftest::Options options;
  for (const auto& name : split_list(only)) options.only.insert(name);
  options.svd_tolerance = svd_tol;
  try {
    return selftest::run_all(options, out) ? kOk : kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace imgplag::cli
