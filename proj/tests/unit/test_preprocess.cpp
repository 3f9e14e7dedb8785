#include <doctest.h>

#include <algorithm>
#include <map>

#include "imgplag/hash.hpp"
#include "imgplag/pipeline.hpp"
#include "imgplag/preprocess.hpp"
#include "utf8.hpp"

using namespace imgplag;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::vector<Token> tokens_of(std::initializer_list<const char*> words) {
  std::string text;
  for (const char* w : words) text += std::string(w) + " ";
  return tokenize(text);
}

std::map<std::string, int> bag(const std::vector<std::string>& lemmas) {
  std::map<std::string, int> out;
  for (const auto& l : lemmas) ++out[l];
  return out;
}

}  // namespace

TEST_SUITE("preprocess") {
  TEST_CASE("strip_references examples") {
    CHECK(strip_references("as shown in [12] and [3,4]") == "as shown in  and ");
    CHECK(strip_references("method (Kulkarni et al., 2021) works") == "method  works");
    CHECK(strip_references("no citations here") == "no citations here");
  }

  TEST_CASE("strip_references keeps non-citation brackets") {
    CHECK(strip_references("see [a] and (this part)") == "see [a] and (this part)");
    CHECK(strip_references("range [5-7] ok") == "range  ok");
    CHECK(strip_references("year (1499) stays") == "year (1499) stays");
    CHECK(strip_references("year (2099) goes") == "year  goes");
  }

  TEST_CASE("strip_references is idempotent on random citation soup") {
    const std::vector<std::string> parts = {"[", "]", "12", ",", "-", "(", ")", "Smith", "2019",
                                            " ", "et al.", "1500", "x", "[3", "4]", "(("};
    SplitMix64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
      std::string text;
      const int n = static_cast<int>(rng.next() % 20);
      for (int i = 0; i < n; ++i) text += parts[rng.next() % parts.size()];
      const std::string once = strip_references(text);
      REQUIRE(strip_references(once) == once);
    }
  }

  TEST_CASE("tokenize examples") {
    CHECK(surfaces(tokenize("TF-IDF scores")) == std::vector<std::string>{"TF", "IDF", "scores"});
    CHECK(tokenize("").empty());
    CHECK(surfaces(tokenize("Start Process End")) == std::vector<std::string>{"Start", "Process", "End"});
  }

  TEST_CASE("tokenize lowercases and keeps numbers") {
    const auto tokens = tokenize("Rainfall 2019: 45.5mm, Ωmega");
    CHECK(surfaces(tokens) == std::vector<std::string>{"Rainfall", "2019", "45", "5mm", "Ωmega"});
    CHECK(tokens[0].lower == "rainfall");
    CHECK(tokens[4].lower == "ωmega");
    CHECK(tokens[0].lemma == "rainfall");
  }

  TEST_CASE("tokenize invariants on random text") {
    const std::vector<std::string> parts = {"a", "B", "7", " ", "-", "é", "Ж", ".", "\n", "ab", "\xff", "—"};
    SplitMix64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
      std::string text;
      const int n = static_cast<int>(rng.next() % 30);
      for (int i = 0; i < n; ++i) text += parts[rng.next() % parts.size()];
      const auto tokens = tokenize(text);
      std::string content;
      std::size_t pos = 0;
      while (pos < text.size()) {
        const char32_t cp = utf8::decode(text, pos);
        if (utf8::is_word_char(cp)) utf8::append(content, cp);
      }
      std::string joined;
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        REQUIRE_FALSE(tokens[i].surface.empty());
        REQUIRE(tokens[i].lower == utf8::lower(tokens[i].surface));
        if (i > 0) REQUIRE(tokens[i].position > tokens[i - 1].position);
        joined += tokens[i].surface;
      }
      REQUIRE(joined == content);
    }
  }

  TEST_CASE("remove_stopwords examples") {
    const auto& list = StopwordList::builtin();
    CHECK(surfaces(remove_stopwords(tokens_of({"the", "cat", "sat", "on", "the", "mat"}), list)) ==
          std::vector<std::string>{"cat", "sat", "mat"});
    CHECK(remove_stopwords({}, list).empty());
    const auto plain = tokens_of({"rainfall", "karachi"});
    CHECK(remove_stopwords(plain, list) == plain);
  }

  TEST_CASE("builtin stopword list") {
    const auto& list = StopwordList::builtin();
    CHECK(list.size() >= 170);
    CHECK(list.size() <= 190);
    CHECK(list.contains("the"));
    CHECK(list.contains("of"));
    CHECK_FALSE(list.contains("table"));
    CHECK_FALSE(list.contains("#"));
  }

  TEST_CASE("custom stopword list parsing") {
    const auto list = StopwordList::parse("# comment\nfoo\n\n  bar  \n");
    CHECK(list.size() == 2);
    CHECK(list.contains("foo"));
    CHECK(list.contains("bar"));
    CHECK(list.fingerprint() != StopwordList::builtin().fingerprint());
  }

  TEST_CASE("lemmatize examples") {
    const auto& lem = Lemmatizer::builtin();
    CHECK(lem.lemma("studies") == "study");
    CHECK(lem.lemma("tables") == "table");
    CHECK(lem.lemma("running") == "run");
  }

  TEST_CASE("lemma rules in order") {
    const auto& lem = Lemmatizer::builtin();
    CHECK(lem.lemma("classes") == "class");     // sses
    CHECK(lem.lemma("churches") == "church");   // ches
    CHECK(lem.lemma("wishes") == "wish");       // shes
    CHECK(lem.lemma("glass") == "glass");       // ss kept
    CHECK(lem.lemma("gas") == "gas");           // too short for s-drop
    CHECK(lem.lemma("stopped") == "stop");      // ed + undouble
    CHECK(lem.lemma("falling") == "fall");      // ll is not undoubled
    CHECK(lem.lemma("missed") == "miss");
    CHECK(lem.lemma("red") == "red");           // remainder too short
    CHECK(lem.lemma("sing") == "sing");
    CHECK(lem.lemma("children") == "child");    // exception table
    CHECK(lem.lemma("was") == "be");
    CHECK(lem.lemma("analysis") == "analysis");
    CHECK(lem.lemma("2019") == "2019");
  }

  TEST_CASE("lemmatize assigns non-empty lemmas") {
    auto tokens = lemmatize(tokenize("The studies were running s ss"), Lemmatizer::builtin());
    for (const auto& t : tokens) CHECK_FALSE(t.lemma.empty());
  }

  TEST_CASE("pipeline example with gazetteer and exclusion") {
    Gazetteer gaz;
    gaz.add(EntityLabel::Org, "Pillai College");
    const Pipeline pipeline(StopwordList::builtin(), Lemmatizer::builtin(), gaz);
    PreprocessOptions options;
    options.ner_mode = NerMode::Exclude;
    const auto doc = pipeline.run("d", "The results [3] of Pillai College", options);
    CHECK(doc.lemmas() == std::vector<std::string>{"result"});
    CHECK(doc.options == options);

    options.ner_mode = NerMode::Include;
    const auto incl = pipeline.run("d", "The results [3] of Pillai College", options);
    CHECK(incl.lemmas() == std::vector<std::string>{"result", "pillai", "college"});
    CHECK(incl.tokens[1].entity_label == EntityLabel::Org);
  }

  TEST_CASE("pipeline on empty text records options") {
    const Pipeline pipeline;
    PreprocessOptions options;
    options.lemmatize = false;
    const auto doc = pipeline.run("empty", "", options);
    CHECK(doc.tokens.empty());
    CHECK(doc.options == options);
    CHECK(doc.doc_id == "empty");
  }

  TEST_CASE("pipeline is deterministic") {
    const Pipeline pipeline;
    const std::string text = "Enrollment grew in 2019 at Lahore University [4].";
    CHECK(pipeline.run("a", text, {}) == pipeline.run("a", text, {}));
  }

  TEST_CASE("disabled steps") {
    const Pipeline pipeline;
    PreprocessOptions options;
    options.strip_refs = false;
    options.stopwords = false;
    options.lemmatize = false;
    const auto doc = pipeline.run("d", "the tables [1]", options);
    CHECK(doc.lemmas() == std::vector<std::string>{"the", "tables", "1"});
    CHECK(doc.tokens[0].is_stopword);
    CHECK_FALSE(doc.tokens[1].is_stopword);
  }

  TEST_CASE("bag of lemmas commutes with concatenation") {
    const std::vector<std::string> words = {"the", "tables", "studies", "running", "of", "rainfall",
                                            "and", "cotton", "prices", "were", "2019", "x"};
    const Pipeline pipeline;
    SplitMix64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
      std::string a, b;
      for (std::uint64_t i = rng.next() % 12; i > 0; --i) a += words[rng.next() % words.size()] + " ";
      for (std::uint64_t i = rng.next() % 12; i > 0; --i) b += words[rng.next() % words.size()] + " ";
      auto left = bag(pipeline.run("a", a, {}).lemmas());
      for (const auto& [l, c] : bag(pipeline.run("b", b, {}).lemmas())) left[l] += c;
      REQUIRE(bag(pipeline.run("ab", a + "\n" + b, {}).lemmas()) == left);
    }
  }

  TEST_CASE("fingerprint reflects options and resources") {
    const Pipeline plain;
    PreprocessOptions include, exclude;
    exclude.ner_mode = NerMode::Exclude;
    CHECK(plain.fingerprint(include) != plain.fingerprint(exclude));
    CHECK(plain.fingerprint(include).find("ner=include") != std::string::npos);
    Gazetteer gaz;
    gaz.add(EntityLabel::Loc, "Karachi");
    const Pipeline with_gaz(StopwordList::builtin(), Lemmatizer::builtin(), gaz);
    CHECK(plain.fingerprint(include) != with_gaz.fingerprint(include));
  }
}
