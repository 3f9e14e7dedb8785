#include "http_util.hpp"

namespace imgplag::http {

bool split_url(std::string_view url, Endpoint& out) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) return false;
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") return false;
  const auto host_start = scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  if (path_start == host_start) return false;
  out.base = std::string(url.substr(0, path_start));
  out.path = path_start == std::string_view::npos ? "/" : std::string(url.substr(path_start));
  return out.base.size() > host_start;
}

}  // namespace imgplag::http
