#include <doctest.h>

#include <json.hpp>

#include "imgplag/errors.hpp"
#include "imgplag/index.hpp"
#include "imgplag/pipeline.hpp"
#include "support.hpp"

using namespace imgplag;
using test_support::TempDir;

namespace {

CorpusIndex sample_index() {
  const Pipeline pipeline;
  const std::vector<std::pair<std::string, std::string>> texts{
      {"b", "cotton exports from Karachi fell in 2019"},
      {"a", "wheat prices climbed while cotton stayed flat"},
      {"c", "rainfall in the valley rose during the monsoon"}};
  CorpusIndex index;
  index.corpus = {{"a", "0000000000000001"}, {"b", "0000000000000002"}, {"c", "0000000000000003"}};
  for (auto mode : {NerMode::Include, NerMode::Exclude}) {
    PreprocessOptions o;
    o.ner_mode = mode;
    std::vector<PreprocessedDoc> docs;
    for (const auto& [id, t] : texts) docs.push_back(pipeline.run(id, t, o));
    index.modes.emplace(mode, build_mode_index(docs, pipeline.fingerprint(o)));
  }
  return index;
}

}  // namespace

TEST_SUITE("index") {
  TEST_CASE("documents are sorted by id") {
    const auto index = sample_index();
    const auto& m = index.mode(NerMode::Include);
    REQUIRE(m.docs.size() == 3);
    CHECK(m.docs[0].id == "a");
    CHECK(m.docs[2].id == "c");
    CHECK(m.find("b") != nullptr);
    CHECK(m.find("zz") == nullptr);
    REQUIRE(m.lsa.has_value());
    CHECK(m.lsa->rank() == 2);
    CHECK(m.docs[0].latent.size() == 2);
  }

  TEST_CASE("json round trip is exact") {
    const auto index = sample_index();
    const auto j = to_json(index);
    const auto back = corpus_index_from_json(j);
    CHECK(back == index);
    CHECK(to_json(back).dump() == j.dump());
  }

  TEST_CASE("save and load") {
    TempDir dir("index");
    const auto index = sample_index();
    save_index(index, dir.path().string());
    CHECK(std::filesystem::exists(dir / "index.json"));
    CHECK(load_index(dir.path().string()) == index);
    const auto first = test_support::read_file(dir / "index.json");
    save_index(load_index(dir.path().string()), dir.path().string());
    CHECK(test_support::read_file(dir / "index.json") == first);
  }

  TEST_CASE("format errors") {
    TempDir dir("index_bad");
    CHECK_THROWS_AS(load_index(dir.path().string()), IndexFormatError);
    test_support::write_file(dir / "index.json", "{ not json");
    CHECK_THROWS_AS(load_index(dir.path().string()), IndexFormatError);

    auto j = to_json(sample_index());
    auto wrong_version = j;
    wrong_version["version"] = 99;
    CHECK_THROWS_AS(corpus_index_from_json(wrong_version), IndexFormatError);
    auto wrong_format = j;
    wrong_format["format"] = "other";
    CHECK_THROWS_AS(corpus_index_from_json(wrong_format), IndexFormatError);
    auto missing = j;
    missing.erase("modes");
    CHECK_THROWS_AS(corpus_index_from_json(missing), IndexFormatError);
    CHECK_THROWS_AS(corpus_index_from_json(nlohmann::json::array()), IndexFormatError);
  }

  TEST_CASE("missing mode") {
    CorpusIndex index;
    CHECK_THROWS_AS(index.mode(NerMode::Exclude), IndexFormatError);
  }

  TEST_CASE("single document corpus has no latent factors") {
    const Pipeline pipeline;
    std::vector<PreprocessedDoc> docs{pipeline.run("only", "cotton exports fell", {})};
    const auto m = build_mode_index(docs, pipeline.fingerprint({}));
    CHECK_FALSE(m.lsa.has_value());
    CHECK(m.docs[0].latent.empty());
  }

  TEST_CASE("empty corpus and mixed options") {
    const Pipeline pipeline;
    CHECK_THROWS_AS(build_mode_index({}, "x"), EmptyCorpus);
    PreprocessOptions other;
    other.stopwords = false;
    std::vector<PreprocessedDoc> docs{pipeline.run("a", "cotton", {}), pipeline.run("b", "wheat", other)};
    CHECK_THROWS_AS(build_mode_index(docs, "x"), OptionsMismatch);
  }

  TEST_CASE("explicit lsa rank") {
    const Pipeline pipeline;
    std::vector<PreprocessedDoc> docs{pipeline.run("a", "cotton exports fell", {}),
                                      pipeline.run("b", "wheat prices rose", {}),
                                      pipeline.run("c", "cotton prices rose", {})};
    BuildOptions o;
    o.lsa_rank = 1;
    const auto m = build_mode_index(docs, pipeline.fingerprint({}), o);
    REQUIRE(m.lsa.has_value());
    CHECK(m.lsa->rank() == 1);
  }
}
