#include <doctest.h>

#include "imgplag/hash.hpp"
#include "utf8.hpp"

using namespace imgplag;

TEST_SUITE("hash") {
  TEST_CASE("fnv1a64 reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    static_assert(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  }

  TEST_CASE("fnv1a64 chains through the seed argument") {
    CHECK(fnv1a64("bar", fnv1a64("foo")) == fnv1a64("foobar"));
  }

  TEST_CASE("splitmix64 stream from seed 0") {
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xe220a8397b1dcdafULL);
    CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(rng.next() == 0x06c45d188009454fULL);
  }

  TEST_CASE("next_unit stays in [0, 1)") {
    SplitMix64 rng(42);
    for (int i = 0; i < 10000; ++i) {
      const double u = rng.next_unit();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
    }
  }

  TEST_CASE("to_hex pads to 16 digits") {
    CHECK(to_hex(0) == "0000000000000000");
    CHECK(to_hex(0xabcULL) == "0000000000000abc");
    CHECK(to_hex(~0ULL) == "ffffffffffffffff");
  }

  TEST_CASE("utf8 decoding and case mapping") {
    const std::string s = "Ärger Ωmega";
    std::size_t pos = 0;
    CHECK(utf8::decode(s, pos) == U'Ä');
    CHECK(pos == 2);
    CHECK(utf8::lower("ÄRGER ΩMEGA Жук") == "ärger ωmega жук");
    CHECK(utf8::is_upper(U'Ж'));
    CHECK_FALSE(utf8::is_upper(U'ж'));
    CHECK(utf8::is_word_char(U'7'));
    CHECK_FALSE(utf8::is_word_char(U'-'));
  }

  TEST_CASE("malformed utf8 consumes one byte") {
    const std::string s = "\xff" "a";
    std::size_t pos = 0;
    CHECK(utf8::decode(s, pos) == utf8::kInvalid);
    CHECK(pos == 1);
    CHECK(utf8::decode(s, pos) == U'a');
  }
}
