#include "imgplag/pipeline.hpp"

#include <fmt/format.h>

#include "imgplag/hash.hpp"

namespace imgplag {

Pipeline::Pipeline() : Pipeline(StopwordList::builtin(), Lemmatizer::builtin(), Gazetteer{}) {}

Pipeline::Pipeline(StopwordList stopwords, Lemmatizer lemmatizer, Gazetteer gazetteer)
    : stopwords_(std::move(stopwords)),
      lemmatizer_(std::move(lemmatizer)),
      gazetteer_(std::move(gazetteer)) {}

PreprocessedDoc Pipeline::run(std::string doc_id, std::string_view text,
                              const PreprocessOptions& options) const {
  PreprocessedDoc doc;
  doc.doc_id = std::move(doc_id);
  doc.options = options;

  const std::string stripped = options.strip_refs ? strip_references(text) : std::string(text);
  std::vector<Token> tokens = tokenize(stripped);

  // Entity spans are computed on the full token stream so that stopwords
  // inside a name ("College of Engineering") still join the span.
  const auto spans = tag_entities(tokens, gazetteer_, stopwords_);
  for (const auto& span : spans) {
    for (std::size_t p = span.start; p <= span.end; ++p) tokens[p].entity_label = span.label;
  }

  if (options.stopwords) {
    tokens = remove_stopwords(std::move(tokens), stopwords_);
  } else {
    for (auto& t : tokens) t.is_stopword = stopwords_.contains(t.lower);
  }
  if (options.lemmatize) tokens = lemmatize(std::move(tokens), lemmatizer_);

  doc.tokens = std::move(tokens);
  if (options.ner_mode == NerMode::Exclude) doc = exclude_entities(doc, spans);
  return doc;
}

PreprocessedDoc Pipeline::run(const ExtractedText& text, const PreprocessOptions& options) const {
  return run(text.doc_id, text.raw_text, options);
}

std::string Pipeline::fingerprint(const PreprocessOptions& options) const {
  return fmt::format("strip_refs={};stopwords={};lemmatize={};ner={};stoplist={};lemmas={};gazetteer={}",
                     options.strip_refs ? 1 : 0, options.stopwords ? 1 : 0,
                     options.lemmatize ? 1 : 0, to_string(options.ner_mode),
                     to_hex(stopwords_.fingerprint()), to_hex(lemmatizer_.fingerprint()),
                     to_hex(gazetteer_.fingerprint()));
}

}  // namespace imgplag
