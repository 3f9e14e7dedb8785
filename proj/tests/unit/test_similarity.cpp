#include <doctest.h>

#include <cmath>
#include <random>

#include "imgplag/errors.hpp"
#include "imgplag/pipeline.hpp"
#include "imgplag/resources.hpp"
#include "imgplag/similarity.hpp"
#include "imgplag/wordnet.hpp"

using namespace imgplag;

namespace {

const Lexicon& lexicon() {
  static const Lexicon lex = Lexicon::parse(resources::lexicon());
  return lex;
}

TermVector tv(std::vector<TermVector::Entry> e) { return TermVector(std::move(e)); }

struct Corpus {
  Pipeline pipeline;
  PreprocessOptions options;
  ModeIndex index;

  explicit Corpus(const std::vector<std::pair<std::string, std::string>>& docs) {
    std::vector<PreprocessedDoc> pre;
    for (const auto& [id, text] : docs) pre.push_back(pipeline.run(id, text, options));
    index = build_mode_index(pre, pipeline.fingerprint(options));
  }

  QueryArtifacts query(const std::string& text) const {
    return prepare_query(pipeline.run("q", text, options), pipeline.fingerprint(options), index);
  }
};

}  // namespace

TEST_SUITE("similarity") {
  TEST_CASE("jaccard examples") {
    CHECK(jaccard({"a", "b", "c"}, {"b", "c", "d"}).value == 0.5);
    CHECK(jaccard({"a", "b"}, {"a", "b"}).value == 1.0);
    CHECK(jaccard({"a"}, {"b"}).value == 0.0);
    const auto empty = jaccard({}, {});
    CHECK(empty.value == 0.0);
    CHECK(empty.warning == ScoreWarning::EmptyComparison);
    CHECK_FALSE(jaccard({"a"}, {}).warning.has_value());
  }

  TEST_CASE("cosine examples") {
    CHECK(cosine(tv({{0, 1}, {1, 1}}), tv({{1, 1}, {2, 1}})).value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cosine(tv({{0, 3}, {4, 2}}), tv({{0, 3}, {4, 2}})).value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine(tv({{0, 1}}), tv({{1, 1}})).value == 0.0);
    const auto z = cosine(TermVector{}, tv({{0, 1}}));
    CHECK(z.value == 0.0);
    CHECK(z.warning == ScoreWarning::EmptyComparison);
  }

  TEST_CASE("cosine is symmetric and scale invariant") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> w(0.01, 5.0);
    std::uniform_int_distribution<std::size_t> idx(0, 30);
    for (int t = 0; t < 200; ++t) {
      std::vector<TermVector::Entry> a, b;
      for (int i = 0; i < 8; ++i) a.emplace_back(idx(rng), w(rng));
      for (int i = 0; i < 8; ++i) b.emplace_back(idx(rng), w(rng));
      const TermVector u(a), v(b);
      CHECK(cosine(u, v).value == cosine(v, u).value);
      const double c = w(rng);
      CHECK(std::abs(cosine(u, u.scaled(c)).value - 1.0) <= 1e-12);
      const double s = cosine(u, v).value;
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
  }

  TEST_CASE("algorithm names") {
    for (auto a : kAllAlgorithms) CHECK(parse_algorithm(to_string(a)) == a);
    CHECK(parse_algorithm("bert") == AlgorithmId::Embed);
    CHECK_FALSE(parse_algorithm("ngram").has_value());
  }

  TEST_CASE("self-similarity is 1 for every algorithm") {
    Corpus c({{"d1", "rainfall in the northern valley rose sharply during monsoon"},
              {"d2", "cotton exports fell while wheat prices climbed"},
              {"d3", "student enrollment grew across provincial colleges"}});
    FallbackEmbedder embedder;
    const ScoringEnv env{&c.index, &lexicon(), WordnetMeasure::WuPalmer, &embedder};
    for (const auto& d : c.index.docs) {
      auto q = c.query(d.id == "d1"   ? "rainfall in the northern valley rose sharply during monsoon"
                       : d.id == "d2" ? "cotton exports fell while wheat prices climbed"
                                      : "student enrollment grew across provincial colleges");
      auto target = as_artifacts(d);
      for (auto a : kAllAlgorithms) {
        const auto s = score(a, q, target, env);
        CHECK_MESSAGE(std::abs(s.value - 1.0) <= 1e-9, to_string(a), " ", d.id);
        CHECK(s.algorithm == a);
      }
    }
  }

  TEST_CASE("empty query warns for every algorithm") {
    Corpus c({{"d1", "cotton exports fell"}, {"d2", "wheat prices climbed"}});
    FallbackEmbedder embedder;
    const ScoringEnv env{&c.index, &lexicon(), WordnetMeasure::WuPalmer, &embedder};
    auto q = c.query("the and of");
    REQUIRE(q.lemmas.empty());
    auto target = as_artifacts(c.index.docs[0]);
    for (auto a : kAllAlgorithms) {
      const auto s = score(a, q, target, env);
      CHECK(s.value == 0.0);
      CHECK(s.warning == ScoreWarning::EmptyComparison);
    }
  }

  TEST_CASE("scores are symmetric for two-document form") {
    Corpus c({{"d1", "cotton exports fell while wheat prices climbed sharply"},
              {"d2", "wheat harvest rose and cotton prices fell"},
              {"d3", "rainfall in the valley rose during monsoon season"}});
    FallbackEmbedder embedder;
    const ScoringEnv env{&c.index, &lexicon(), WordnetMeasure::WuPalmer, &embedder};
    for (std::size_t i = 0; i < c.index.docs.size(); ++i) {
      for (std::size_t j = 0; j < c.index.docs.size(); ++j) {
        auto a = as_artifacts(c.index.docs[i]);
        auto b = as_artifacts(c.index.docs[j]);
        for (auto algo : kAllAlgorithms) {
          const double ab = score(algo, a, b, env).value;
          const double ba = score(algo, b, a, env).value;
          CHECK(std::abs(ab - ba) <= 1e-12);
          CHECK(ab >= 0.0);
          CHECK(ab <= 1.0);
        }
      }
    }
  }

  TEST_CASE("tfidf score equals a hand computed cosine") {
    // d1 = apple apple banana, d2 = banana cherry cherry date, d3 = apple date elder.
    // idf: apple ln(3/2), banana ln(3/2), cherry ln 3, date ln(3/2), elder ln 3.
    Corpus c({{"d1", "apple apple banana"}, {"d2", "banana cherry cherry date"}, {"d3", "apple date elder"}});
    const ScoringEnv env{&c.index};
    auto q = c.query("apple banana banana cherry");
    const double l15 = std::log(1.5), l3 = std::log(3.0);
    // query weights: apple l15, banana 2 l15, cherry l3
    const double qn = std::sqrt(l15 * l15 + 4 * l15 * l15 + l3 * l3);
    const double d1n = std::sqrt(4 * l15 * l15 + l15 * l15);
    const double expected = (2 * l15 * l15 + 2 * l15 * l15) / (qn * d1n);
    auto d1 = as_artifacts(*c.index.find("d1"));
    CHECK(std::abs(score(AlgorithmId::Tfidf, q, d1, env).value - expected) <= 1e-12);
  }

  TEST_CASE("cosine uses raw term frequencies") {
    Corpus c({{"d1", "apple apple banana"}, {"d2", "banana cherry"}});
    const ScoringEnv env{&c.index};
    auto q = c.query("apple banana banana");
    auto d1 = as_artifacts(*c.index.find("d1"));
    // (2,1).(1,2) / 5
    CHECK(score(AlgorithmId::Cosine, q, d1, env).value == doctest::Approx(0.8).epsilon(1e-15));
  }

  TEST_CASE("jaccard and cosine do not depend on the rest of the corpus") {
    const std::vector<std::pair<std::string, std::string>> base{
        {"d1", "cotton exports fell while wheat prices climbed"},
        {"d2", "wheat harvest rose and cotton prices fell"}};
    auto grown = base;
    grown.emplace_back("d3", "cotton cotton rainfall valley monsoon wheat");
    Corpus small(base), big(grown);
    for (auto algo : {AlgorithmId::Jaccard, AlgorithmId::Cosine}) {
      auto a1 = as_artifacts(*small.index.find("d1"));
      auto b1 = as_artifacts(*small.index.find("d2"));
      auto a2 = as_artifacts(*big.index.find("d1"));
      auto b2 = as_artifacts(*big.index.find("d2"));
      CHECK(score(algo, a1, b1, {&small.index}).value == score(algo, a2, b2, {&big.index}).value);
    }
  }

  TEST_CASE("prepare_query rejects mismatched options") {
    Corpus c({{"d1", "cotton exports fell"}, {"d2", "wheat prices climbed"}});
    PreprocessOptions other = c.options;
    other.lemmatize = false;
    const auto doc = c.pipeline.run("q", "cotton prices", other);
    CHECK_THROWS_AS(prepare_query(doc, c.pipeline.fingerprint(other), c.index), OptionsMismatch);
    const auto same = c.pipeline.run("q", "cotton prices", c.options);
    CHECK_THROWS_AS(prepare_query(same, "something else", c.index), OptionsMismatch);
    CHECK_NOTHROW(prepare_query(same, c.pipeline.fingerprint(c.options), c.index));
  }

  TEST_CASE("dispatch needs its resources") {
    Corpus c({{"d1", "cotton exports fell"}, {"d2", "wheat prices climbed"}});
    auto q = c.query("cotton prices");
    auto d = as_artifacts(c.index.docs[0]);
    CHECK_THROWS_AS(score(AlgorithmId::Embed, q, d, {&c.index}), ConfigError);
    CHECK_THROWS_AS(score(AlgorithmId::Wordnet, q, d, {&c.index}), ConfigError);
  }

  TEST_CASE("pooled corpus concatenates every document") {
    Corpus c({{"d1", "cotton exports"}, {"d2", "wheat prices"}});
    const auto pooled = pooled_corpus(c.index);
    CHECK(pooled.lemmas.size() == 4);
    CHECK(pooled.tfidf.empty() == false);
  }
}
