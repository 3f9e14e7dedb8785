#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imgplag/documents.hpp"

namespace imgplag {

enum class ImageFormat { Jpg, Jpeg, Png, Bmp };

std::string_view to_string(ImageFormat format);
// Case-insensitive extension with or without the dot; nullopt if unsupported.
std::optional<ImageFormat> image_format_from_extension(std::string_view ext);

struct ImageDoc {
  std::string id;  // file stem
  std::filesystem::path path;
  ImageFormat format = ImageFormat::Png;
  std::uint64_t content_hash = 0;  // fnv1a64 of the file bytes

  // Reads and hashes the file. Throws Error if it is missing or unsupported.
  static ImageDoc from_path(const std::filesystem::path& path);
};

struct OcrBackendConfig {
  OcrBackendKind kind = OcrBackendKind::Sidecar;
  std::string endpoint;                          // http_vision only
  std::string credential_env = "VISION_API_KEY";  // http_vision only
  std::size_t max_in_flight = 4;
  std::optional<std::uint64_t> monthly_quota;

  // Throws ConfigError.
  void validate() const;
};

class OcrBackend {
 public:
  virtual ~OcrBackend() = default;
  virtual OcrBackendKind kind() const = 0;
  // Text lines joined with '\n'. Thread-safe.
  virtual std::string recognize(const ImageDoc& image) = 0;
  // Extra bytes that identify the result besides the image itself (the
  // sidecar text for the sidecar backend). Part of the cache key.
  virtual std::string cache_salt(const ImageDoc& image) const;

  std::size_t calls() const { return calls_.load(); }

 protected:
  void count_call() { ++calls_; }

 private:
  std::atomic<std::size_t> calls_{0};
};

// Reads `<path minus extension>.txt` verbatim. Throws MissingSidecar.
class SidecarBackend final : public OcrBackend {
 public:
  OcrBackendKind kind() const override { return OcrBackendKind::Sidecar; }
  std::string recognize(const ImageDoc& image) override;
  std::string cache_salt(const ImageDoc& image) const override;

  static std::filesystem::path sidecar_path(const ImageDoc& image);
};

// POSTs the raw image bytes with the key in an Ocp-Apim-Subscription-Key
// header. Accepts {"lines": [...]}, the v3.2 "regions/lines/words" shape and
// the 4.0 "readResult/blocks/lines" shape; lines keep the service's reading
// order. Throws OcrHttpError.
class HttpVisionBackend final : public OcrBackend {
 public:
  explicit HttpVisionBackend(OcrBackendConfig config);
  OcrBackendKind kind() const override { return OcrBackendKind::HttpVision; }
  std::string recognize(const ImageDoc& image) override;

  // Exposed for tests.
  static std::string lines_from_response(const std::string& body);

 private:
  OcrBackendConfig config_;
  std::string api_key_;
};

std::unique_ptr<OcrBackend> make_ocr_backend(const OcrBackendConfig& config);

ExtractedText extract_text(const ImageDoc& image, OcrBackend& backend);
ExtractedText extract_text(const ImageDoc& image, const OcrBackendConfig& config);

// Monthly call counter persisted as JSON ({"month": "YYYY-MM", "calls": n}).
// The counter resets when the calendar month changes.
class QuotaCounter {
 public:
  QuotaCounter(std::filesystem::path path, std::optional<std::uint64_t> limit);

  // Throws QuotaExceeded when the limit is reached.
  void charge();
  std::uint64_t used() const;
  void save() const;

 private:
  std::filesystem::path path_;
  std::optional<std::uint64_t> limit_;
  std::string month_;
  std::uint64_t calls_ = 0;
};

struct IngestFailure {
  std::string doc_id;
  std::string message;
};

struct IngestResult {
  std::vector<ExtractedText> texts;  // sorted by doc_id
  std::vector<ImageDoc> images;      // same order as texts
  std::vector<std::filesystem::path> skipped;
  std::vector<IngestFailure> failures;
  std::size_t backend_calls = 0;
};

// Supported images directly inside `dir`, sorted by id. Other files are
// returned in `skipped` (sidecar .txt files excepted). Throws DuplicateDocId.
std::vector<ImageDoc> discover_images(const std::filesystem::path& dir,
                                      std::vector<std::filesystem::path>* skipped = nullptr);

// Extracts every image, reusing `cache_file` entries whose key still matches.
// The quota counter lives next to the cache as ocr_quota.json. Throws
// EmptyCorpus when no supported image exists; per-file OCR errors are
// collected in IngestResult::failures.
IngestResult ingest_corpus(const std::filesystem::path& dir, OcrBackend& backend,
                           const OcrBackendConfig& config, const std::filesystem::path& cache_file);
IngestResult ingest_corpus(const std::filesystem::path& dir, const OcrBackendConfig& config,
                           const std::filesystem::path& cache_file);

}  // namespace imgplag
