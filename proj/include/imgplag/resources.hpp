#pragma once

#include <string_view>

// Text resources compiled into the library from resources/.
namespace imgplag::resources {

std::string_view stopwords();
std::string_view lemma_exceptions();
// Default noun taxonomy used when no lexicon path is configured.
std::string_view lexicon();
// entity <- animal <- {dog, cat}
std::string_view toy_lexicon();

}  // namespace imgplag::resources
