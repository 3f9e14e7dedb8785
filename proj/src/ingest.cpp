#include "imgplag/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "http_util.hpp"
#include "imgplag/errors.hpp"
#include "imgplag/hash.hpp"

namespace imgplag {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(OcrBackendKind kind) {
  return kind == OcrBackendKind::HttpVision ? "http_vision" : "sidecar";
}

OcrBackendKind parse_ocr_backend_kind(std::string_view name) {
  if (name == "http_vision" || name == "http") return OcrBackendKind::HttpVision;
  if (name == "sidecar") return OcrBackendKind::Sidecar;
  throw ConfigError("unknown OCR backend '" + std::string(name) + "'");
}

std::string_view to_string(ImageFormat format) {
  switch (format) {
    case ImageFormat::Jpg: return "jpg";
    case ImageFormat::Jpeg: return "jpeg";
    case ImageFormat::Png: return "png";
    case ImageFormat::Bmp: return "bmp";
  }
  return "png";
}

std::optional<ImageFormat> image_format_from_extension(std::string_view ext) {
  if (!ext.empty() && ext.front() == '.') ext.remove_prefix(1);
  std::string lower(ext);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto f : {ImageFormat::Jpg, ImageFormat::Jpeg, ImageFormat::Png, ImageFormat::Bmp}) {
    if (to_string(f) == lower) return f;
  }
  return std::nullopt;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::int64_t now_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string current_month() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  return fmt::format("{:04}-{:02}", tm.tm_year + 1900, tm.tm_mon + 1);
}

}  // namespace

ImageDoc ImageDoc::from_path(const fs::path& path) {
  const auto format = image_format_from_extension(path.extension().string());
  if (!format) throw Error("unsupported image format: " + path.string());
  ImageDoc doc;
  doc.id = path.stem().string();
  doc.path = path;
  doc.format = *format;
  doc.content_hash = fnv1a64(read_file(path));
  return doc;
}

void OcrBackendConfig::validate() const {
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be positive");
  if (monthly_quota && *monthly_quota < 1) throw ConfigError("monthly_quota must be positive");
  if (kind == OcrBackendKind::HttpVision) {
    http::Endpoint ep;
    if (endpoint.empty() || !http::split_url(endpoint, ep)) {
      throw ConfigError("http_vision backend needs an http(s) endpoint URL");
    }
    if (credential_env.empty()) throw ConfigError("http_vision backend needs credential_env");
  }
}

std::string OcrBackend::cache_salt(const ImageDoc&) const { return {}; }

// --- sidecar -----------------------------------------------------------------

fs::path SidecarBackend::sidecar_path(const ImageDoc& image) {
  fs::path p = image.path;
  p.replace_extension(".txt");
  return p;
}

std::string SidecarBackend::recognize(const ImageDoc& image) {
  count_call();
  return cache_salt(image);
}

std::string SidecarBackend::cache_salt(const ImageDoc& image) const {
  const auto p = sidecar_path(image);
  if (!fs::is_regular_file(p)) throw MissingSidecar("no sidecar text " + p.string());
  return read_file(p);
}

// --- http vision -------------------------------------------------------------

HttpVisionBackend::HttpVisionBackend(OcrBackendConfig config) : config_(std::move(config)) {
  config_.kind = OcrBackendKind::HttpVision;
  config_.validate();
  const char* key = std::getenv(config_.credential_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw OcrHttpError("credential environment variable " + config_.credential_env + " is not set");
  }
  api_key_ = key;
}

std::string HttpVisionBackend::lines_from_response(const std::string& body) {
  std::vector<std::string> lines;
  try {
    const auto j = json::parse(body);
    if (j.contains("lines")) {
      for (const auto& l : j.at("lines")) lines.push_back(l.get<std::string>());
    } else if (j.contains("regions")) {
      for (const auto& region : j.at("regions")) {
        for (const auto& line : region.at("lines")) {
          std::string text;
          for (const auto& word : line.at("words")) {
            if (!text.empty()) text.push_back(' ');
            text += word.at("text").get<std::string>();
          }
          lines.push_back(std::move(text));
        }
      }
    } else if (j.contains("readResult")) {
      for (const auto& block : j.at("readResult").at("blocks")) {
        for (const auto& line : block.at("lines")) lines.push_back(line.at("text").get<std::string>());
      }
    } else {
      throw OcrHttpError("OCR response has no recognised text structure");
    }
  } catch (const json::exception& e) {
    throw OcrHttpError(std::string("malformed OCR response: ") + e.what());
  }
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

std::string HttpVisionBackend::recognize(const ImageDoc& image) {
  count_call();
  http::Endpoint ep;
  http::split_url(config_.endpoint, ep);
  httplib::Client client(ep.base);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);
  const httplib::Headers headers{{"Ocp-Apim-Subscription-Key", api_key_}};
  const auto res = client.Post(ep.path, headers, read_file(image.path), "application/octet-stream");
  if (!res) throw OcrHttpError("OCR request failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    throw OcrHttpError(fmt::format("OCR service returned HTTP {} for {}", res->status, image.id));
  }
  return lines_from_response(res->body);
}

std::unique_ptr<OcrBackend> make_ocr_backend(const OcrBackendConfig& config) {
  config.validate();
  if (config.kind == OcrBackendKind::HttpVision) return std::make_unique<HttpVisionBackend>(config);
  return std::make_unique<SidecarBackend>();
}

ExtractedText extract_text(const ImageDoc& image, OcrBackend& backend) {
  ExtractedText out;
  out.doc_id = image.id;
  out.raw_text = backend.recognize(image);
  out.backend_id = backend.kind();
  out.extracted_at = now_seconds();
  return out;
}

ExtractedText extract_text(const ImageDoc& image, const OcrBackendConfig& config) {
  auto backend = make_ocr_backend(config);
  return extract_text(image, *backend);
}

// --- quota -------------------------------------------------------------------

QuotaCounter::QuotaCounter(fs::path path, std::optional<std::uint64_t> limit)
    : path_(std::move(path)), limit_(limit), month_(current_month()) {
  if (!fs::is_regular_file(path_)) return;
  try {
    const auto j = json::parse(read_file(path_));
    if (j.at("month").get<std::string>() == month_) calls_ = j.at("calls").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error("corrupt quota file " + path_.string() + ": " + e.what());
  }
}

void QuotaCounter::charge() {
  if (limit_ && calls_ >= *limit_) {
    throw QuotaExceeded(fmt::format("monthly OCR quota of {} calls reached", *limit_));
  }
  ++calls_;
}

std::uint64_t QuotaCounter::used() const { return calls_; }

void QuotaCounter::save() const {
  write_file(path_, json{{"month", month_}, {"calls", calls_}}.dump(1) + "\n");
}

// --- corpus ------------------------------------------------------------------

std::vector<ImageDoc> discover_images(const fs::path& dir, std::vector<fs::path>* skipped) {
  if (!fs::is_directory(dir)) throw Error("corpus directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<ImageDoc> images;
  std::map<std::string, fs::path> seen;
  for (const auto& f : files) {
    if (!image_format_from_extension(f.extension().string())) {
      if (skipped != nullptr && f.extension() != ".txt") skipped->push_back(f);
      continue;
    }
    auto doc = ImageDoc::from_path(f);
    if (auto [it, inserted] = seen.emplace(doc.id, f); !inserted) {
      throw DuplicateDocId("images " + it->second.filename().string() + " and " +
                           f.filename().string() + " share the id '" + doc.id + "'");
    }
    images.push_back(std::move(doc));
  }
  std::sort(images.begin(), images.end(),
            [](const ImageDoc& a, const ImageDoc& b) { return a.id < b.id; });
  return images;
}

namespace {

std::string cache_key(const OcrBackend& backend, const ImageDoc& image) {
  const std::string salt = backend.cache_salt(image);
  const std::uint64_t h = salt.empty() ? image.content_hash : fnv1a64(salt, image.content_hash);
  return std::string(to_string(backend.kind())) + ":" + to_hex(h);
}

json cache_entry(const ExtractedText& t) {
  return json{{"doc_id", t.doc_id},
              {"raw_text", t.raw_text},
              {"backend_id", to_string(t.backend_id)},
              {"extracted_at", t.extracted_at}};
}

}  // namespace

IngestResult ingest_corpus(const fs::path& dir, OcrBackend& backend, const OcrBackendConfig& config,
                           const fs::path& cache_file) {
  IngestResult result;
  const auto images = discover_images(dir, &result.skipped);
  if (images.empty()) throw EmptyCorpus("no jpg/jpeg/png/bmp images in " + dir.string());

  json cache = json::object();
  if (fs::is_regular_file(cache_file)) {
    try {
      cache = json::parse(read_file(cache_file));
    } catch (const json::exception&) {
      cache = json::object();  // unreadable cache is rebuilt
    }
  }
  QuotaCounter quota(cache_file.parent_path() / "ocr_quota.json", config.monthly_quota);

  std::vector<std::optional<ExtractedText>> texts(images.size());
  std::vector<std::optional<std::string>> errors(images.size());
  std::mutex mutex;  // cache, quota, texts/errors slots
  std::atomic<std::size_t> next{0};
  const std::size_t calls_before = backend.calls();

  const auto worker = [&] {
    for (std::size_t i = next++; i < images.size(); i = next++) {
      const auto& image = images[i];
      try {
        const std::string key = cache_key(backend, image);
        {
          std::lock_guard lock(mutex);
          if (cache.contains(key)) {
            const auto& e = cache.at(key);
            ExtractedText t;
            t.doc_id = image.id;
            t.raw_text = e.at("raw_text").get<std::string>();
            t.backend_id = parse_ocr_backend_kind(e.at("backend_id").get<std::string>());
            t.extracted_at = e.at("extracted_at").get<std::int64_t>();
            texts[i] = std::move(t);
            continue;
          }
          quota.charge();
        }
        ExtractedText t = extract_text(image, backend);
        std::lock_guard lock(mutex);
        // Drop stale entries for this document before recording the new one.
        for (auto it = cache.begin(); it != cache.end();) {
          if (it.value().value("doc_id", "") == image.id) it = cache.erase(it);
          else ++it;
        }
        cache[key] = cache_entry(t);
        texts[i] = std::move(t);
      } catch (const std::exception& e) {
        std::lock_guard lock(mutex);
        errors[i] = e.what();
      }
    }
  };
  const std::size_t n_threads = std::min(std::max<std::size_t>(config.max_in_flight, 1), images.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  result.backend_calls = backend.calls() - calls_before;
  write_file(cache_file, cache.dump(1) + "\n");
  quota.save();

  for (std::size_t i = 0; i < images.size(); ++i) {
    if (texts[i]) {
      result.texts.push_back(std::move(*texts[i]));
      result.images.push_back(images[i]);
    } else {
      result.failures.push_back({images[i].id, errors[i].value_or("unknown error")});
    }
  }
  return result;
}

IngestResult ingest_corpus(const fs::path& dir, const OcrBackendConfig& config,
                           const fs::path& cache_file) {
  auto backend = make_ocr_backend(config);
  return ingest_corpus(dir, *backend, config, cache_file);
}

}  // namespace imgplag
