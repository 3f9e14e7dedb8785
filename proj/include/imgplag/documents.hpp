#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace imgplag {

enum class OcrBackendKind { HttpVision, Sidecar };

std::string_view to_string(OcrBackendKind kind);
OcrBackendKind parse_ocr_backend_kind(std::string_view name);

// OCR output for one image. raw_text may be empty for a blank image.
struct ExtractedText {
  std::string doc_id;
  std::string raw_text;
  OcrBackendKind backend_id = OcrBackendKind::Sidecar;
  std::int64_t extracted_at = 0;  // unix seconds

  bool operator==(const ExtractedText&) const = default;
};

}  // namespace imgplag
