#pragma once

#include <stdexcept>
#include <string>

namespace imgplag {

// Base of every error raised by the library. Subclasses map one-to-one onto
// the failure kinds callers are expected to distinguish.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ingest
class MissingSidecar : public Error { using Error::Error; };
class OcrHttpError : public Error { using Error::Error; };
class QuotaExceeded : public Error { using Error::Error; };
class EmptyCorpus : public Error { using Error::Error; };
class DuplicateDocId : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

// vectorspace
class ZeroMatrix : public Error { using Error::Error; };

// wordnet
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};
class CyclicTaxonomy : public Error { using Error::Error; };
class DanglingParent : public Error { using Error::Error; };

// embed
class EmbedHttpError : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };

// similarity / report
class OptionsMismatch : public Error { using Error::Error; };
class IndexFormatError : public Error { using Error::Error; };

}  // namespace imgplag
