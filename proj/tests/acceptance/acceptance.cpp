// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "imgplag/cli.hpp"
#include "imgplag/index.hpp"
#include "imgplag/ingest.hpp"
#include "imgplag/report.hpp"
#include "imgplag/resources.hpp"
#include "imgplag/selftest.hpp"
#include "support.hpp"

using namespace imgplag;
namespace fs = std::filesystem;
using test_support::fixtures;
using test_support::read_file;
using test_support::TempDir;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int g_failed = 0;

void criterion(int number, const std::string& title, double limit_seconds,
               const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_seconds > 0 && secs >= limit_seconds) o.fail(fmt::format("took {:.3f}s, limit {}s", secs, limit_seconds));
  if (!o.pass) ++g_failed;
  std::cout << fmt::format("{} {:>2} {} ({:.3f}s)", o.pass ? "PASS" : "FAIL", number, title, secs);
  if (!o.detail.empty()) std::cout << ": " << o.detail;
  std::cout << std::endl;
}

std::string gazetteer_path() { return (fixtures() / "gazetteer.tsv").string(); }

int cli_run(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::cerr << e.str();
  return code;
}

int index_fixture(const fs::path& out_dir) {
  return cli_run({"index", "--corpus", (fixtures() / "corpus").string(), "--out", out_dir.string(),
                  "--gazetteer", gazetteer_path()});
}

// Library-level context matching the CLI defaults plus the fixture gazetteer.
struct Checker {
  Pipeline pipeline{StopwordList::builtin(), Lemmatizer::builtin(), Gazetteer::load(gazetteer_path())};
  Lexicon lexicon = Lexicon::parse(resources::lexicon());
  FallbackEmbedder embedder;
  CorpusIndex index;
  SidecarBackend ocr;

  explicit Checker(const fs::path& index_dir) : index(load_index(index_dir.string())) {}

  PlagiarismReport check(const fs::path& image, const ReportRequest& request = {}) {
    ReportContext ctx{&index, &pipeline, &lexicon, WordnetMeasure::WuPalmer, &embedder,
                      {"sidecar", embedder.label(), "wu_palmer"}};
    return build_report(ImageDoc::from_path(image), ocr, request, ctx);
  }
};

bool strict_subsequence(const std::vector<std::string>& sub, const std::vector<std::string>& full) {
  if (sub.size() >= full.size()) return false;
  std::size_t i = 0;
  for (const auto& w : full) {
    if (i < sub.size() && sub[i] == w) ++i;
  }
  return i == sub.size();
}

}  // namespace

int main() {
  criterion(1, "self-match scores 100 on every corpus image", 5.0, [](Outcome& o) {
    TempDir dir("acc_self");
    if (index_fixture(dir / "idx") != 0) return o.fail("index failed");
    Checker c(dir / "idx");
    std::size_t images = 0;
    for (const auto& e : fs::directory_iterator(fixtures() / "corpus")) {
      if (e.path().extension() != ".png") continue;
      ++images;
      const auto report = c.check(e.path());
      const std::string id = e.path().stem().string();
      for (const auto& r : report.results) {
        const auto* doc = c.index.mode(r.ner_mode).find(id);
        if (doc == nullptr) return o.fail(id + " missing from index");
        if (doc->lemmas.empty()) continue;
        const double tol = (r.algorithm == AlgorithmId::Lsa || r.algorithm == AlgorithmId::Tfidf) ? 1e-4 : 1e-5;
        if (std::abs(r.percent - 100.0) > tol) {
          o.fail(fmt::format("{} {} {} = {}", id, to_string(r.algorithm), to_string(r.ner_mode), r.percent));
        }
      }
    }
    if (images < 5) o.fail("fixture corpus has fewer than 5 images");
  });

  criterion(2, "disjoint query scores zero", 5.0, [](Outcome& o) {
    TempDir dir("acc_disjoint");
    if (index_fixture(dir / "idx") != 0) return o.fail("index failed");
    Checker c(dir / "idx");
    const auto query = fixtures() / "queries" / "disjoint.png";
    // The wordnet bound applies only when no query lemma is in the lexicon.
    bool all_oov = true;
    for (auto mode : {NerMode::Include, NerMode::Exclude}) {
      PreprocessOptions opts;
      opts.ner_mode = mode;
      for (const auto& l : c.pipeline.run("q", read_file(fs::path(query).replace_extension(".txt")), opts).lemmas()) {
        if (!c.lexicon.noun_senses(l).empty()) all_oov = false;
      }
    }
    for (auto agg : {AggregationMode::Pairwise, AggregationMode::Pooled}) {
      ReportRequest req;
      req.mode = agg;
      for (const auto& r : c.check(query, req).results) {
        const std::string where =
            fmt::format("{} {} {} = {:.4f}", to_string(r.algorithm), to_string(r.ner_mode), to_string(agg), r.percent);
        switch (r.algorithm) {
          case AlgorithmId::Jaccard:
          case AlgorithmId::Cosine:
          case AlgorithmId::Tfidf:
            if (r.percent != 0.0) o.fail(where);
            break;
          case AlgorithmId::Embed:
            if (r.percent > 5.0) o.fail(where + " (limit 5.0)");
            break;
          case AlgorithmId::Wordnet:
            if (all_oov && r.percent != 0.0) o.fail(where);
            break;
          case AlgorithmId::Lsa:
            break;
        }
      }
    }
  });

  criterion(3, "jaccard matches the set oracle on 1000 pairs", 1.0, [](Outcome& o) {
    const auto r = selftest::run_jaccard({1000, 50, 42});
    if (!r.passed()) o.fail(r.first_failure);
  });

  criterion(4, "cosine matches the dense oracle within 1e-12", 1.0, [](Outcome& o) {
    const auto r = selftest::run_cosine({1000, 200, 40, 1e-12, 42});
    if (!r.passed()) o.fail(r.first_failure);
  });

  criterion(5, "svd matches the jacobi oracle on 200 matrices", 10.0, [](Outcome& o) {
    const auto r = selftest::run_svd({200, 8, 1e-8, 1e-8, 1e-6, 42});
    if (!r.passed()) o.fail(r.first_failure);
  });

  criterion(6, "wordnet matches the bfs oracle and toy values", 2.0, [](Outcome& o) {
    const auto r = selftest::run_wordnet({50, 30, 42});
    if (!r.passed()) return o.fail(r.first_failure);
    const auto toy = Lexicon::parse(resources::toy_lexicon());
    // 0.66667 and 0.33333 are the rounded forms of 2/3 and 1/3.
    if (std::abs(toy.wu_palmer("dog", "cat") - 2.0 / 3.0) > 1e-9) o.fail("wu_palmer(dog,cat)");
    if (std::abs(toy.path_similarity("dog", "cat") - 1.0 / 3.0) > 1e-9) o.fail("path(dog,cat)");
  });

  criterion(7, "entity axis report matches the golden table", 0, [](Outcome& o) {
    TempDir dir("acc_golden");
    if (index_fixture(dir / "idx") != 0) return o.fail("index failed");
    const auto query = fixtures() / "queries" / "ner_mix.png";
    std::string out;
    if (cli_run({"check", "--index", (dir / "idx").string(), "--input", query.string(), "--gazetteer",
                 gazetteer_path(), "--algorithms", "jaccard,cosine,lsa,bert,wordnet", "--ner", "both"},
                &out) != 0) {
      return o.fail("check failed");
    }
    std::istringstream in(out);
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::vector<std::string> cols;
    for (std::string w; hs >> w;) cols.push_back(w);
    const std::vector<std::string> expected{"Input", "Jaccard", "Cosine", "LSA", "BERT", "WordNet", "Entities"};
    if (cols != expected) o.fail("header is '" + header + "'");
    std::size_t rows = 0;
    for (std::string l; std::getline(in, l);) ++rows;
    if (rows != 2) o.fail(fmt::format("{} rows, expected one per entity mode", rows));
    if (out != read_file(test_support::golden() / "ner_report.txt")) o.fail("output differs from golden file");

    const Pipeline pipeline(StopwordList::builtin(), Lemmatizer::builtin(), Gazetteer::load(gazetteer_path()));
    const std::string text = read_file(fixtures() / "queries" / "ner_mix.txt");
    PreprocessOptions inc, exc;
    exc.ner_mode = NerMode::Exclude;
    const auto with = pipeline.run("q", text, inc);
    const bool tagged = std::any_of(with.tokens.begin(), with.tokens.end(),
                                    [](const Token& t) { return t.entity_label.has_value(); });
    if (!tagged) o.fail("fixture query has no entities");
    if (!strict_subsequence(pipeline.run("q", text, exc).lemmas(), with.lemmas())) {
      o.fail("exclude stream is not a strict subsequence of the include stream");
    }
  });

  criterion(8, "tfidf matches the hand computation within 1e-6", 0, [](Outcome& o) {
    const auto dir = fixtures() / "tfidf3";
    const Pipeline pipeline;
    const PreprocessOptions opts;
    std::vector<PreprocessedDoc> docs;
    for (const char* id : {"d1", "d2", "d3"}) {
      docs.push_back(pipeline.run(id, read_file(dir / (std::string(id) + ".txt")), opts));
    }
    const auto index = build_mode_index(docs, pipeline.fingerprint(opts));
    auto q = prepare_query(pipeline.run("query", read_file(dir / "query.txt"), opts), pipeline.fingerprint(opts), index);
    const ScoringEnv env{&index};

    std::istringstream csv(read_file(dir / "expected.csv"));
    double best = -1.0;
    std::string best_id;
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line);) {
      if (line.empty() || line[0] == '#' || line.rfind("doc,", 0) == 0) continue;
      const auto comma = line.find(',');
      const std::string id = line.substr(0, comma);
      const double expected = std::stod(line.substr(comma + 1));
      auto target = as_artifacts(*index.find(id));
      const double got = 100.0 * score(AlgorithmId::Tfidf, q, target, env).value;
      if (std::abs(got - expected) > 1e-6) o.fail(fmt::format("{}: {} vs {}", id, got, expected));
      if (expected > best) best = expected, best_id = id;
      ++rows;
    }
    if (rows != 3) return o.fail("expected three rows");
    const auto r = score_against_corpus(q, index, AlgorithmId::Tfidf, AggregationMode::Pairwise, env);
    if (std::abs(r.percent - best) > 1e-6 || r.best_doc != best_id) o.fail("pairwise max disagrees");
  });

  criterion(9, "index and check runs are byte identical", 0, [](Outcome& o) {
    TempDir dir("acc_determinism");
    for (const char* run : {"a", "b"}) {
      if (index_fixture(dir / run / "idx") != 0) return o.fail("index failed");
      if (cli_run({"check", "--index", (dir / run / "idx").string(), "--input",
                   (fixtures() / "queries" / "partial_copy.png").string(), "--gazetteer", gazetteer_path(),
                   "--report-dir", (dir / run / "out").string()}) != 0) {
        return o.fail("check failed");
      }
    }
    for (const char* f : {"idx/index.json", "out/report.txt", "out/report.csv", "out/report.json"}) {
      if (read_file(dir / "a" / f) != read_file(dir / "b" / f)) o.fail(std::string(f) + " differs");
    }
  });

  criterion(10, "tfidf beats cosine on a rare-term partial copy", 0, [](Outcome& o) {
    TempDir dir("acc_partial");
    if (index_fixture(dir / "idx") != 0) return o.fail("index failed");
    Checker c(dir / "idx");
    ReportRequest req;
    req.algorithms = {AlgorithmId::Cosine, AlgorithmId::Tfidf};
    const auto report = c.check(fixtures() / "queries" / "partial_copy.png", req);
    for (auto mode : {NerMode::Include, NerMode::Exclude}) {
      double cos = -1.0, tfidf = -1.0;
      for (const auto& r : report.results) {
        if (r.ner_mode != mode) continue;
        (r.algorithm == AlgorithmId::Cosine ? cos : tfidf) = r.percent;
      }
      if (!(tfidf > cos)) o.fail(fmt::format("{}: tfidf {:.2f} <= cosine {:.2f}", to_string(mode), tfidf, cos));
    }
  });

  std::cout << fmt::format("{} of 10 criteria passed", 10 - g_failed) << std::endl;
  return g_failed == 0 ? 0 : 1;
}
