#pragma once

#include <string>
#include <string_view>

#include "imgplag/documents.hpp"
#include "imgplag/ner.hpp"
#include "imgplag/preprocess.hpp"

namespace imgplag {

// Immutable resources for the preprocessing pipeline.
class Pipeline {
 public:
  Pipeline();
  Pipeline(StopwordList stopwords, Lemmatizer lemmatizer, Gazetteer gazetteer);

  // strip_references -> tokenize -> NER tagging -> stopword removal ->
  // lemmatization. Entity tokens are dropped when options.ner_mode is Exclude.
  PreprocessedDoc run(std::string doc_id, std::string_view text,
                      const PreprocessOptions& options) const;
  PreprocessedDoc run(const ExtractedText& text, const PreprocessOptions& options) const;

  // Options plus the resources they were applied with. Indexes and queries
  // must agree on it.
  std::string fingerprint(const PreprocessOptions& options) const;

  const StopwordList& stopwords() const { return stopwords_; }
  const Lemmatizer& lemmatizer() const { return lemmatizer_; }
  const Gazetteer& gazetteer() const { return gazetteer_; }

 private:
  StopwordList stopwords_;
  Lemmatizer lemmatizer_;
  Gazetteer gazetteer_;
};

}  // namespace imgplag
