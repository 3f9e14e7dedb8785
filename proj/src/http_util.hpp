#pragma once

#include <string>
#include <string_view>

namespace imgplag::http {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // begins with '/'
};

// Splits an absolute http(s) URL. Returns false when it is not one.
bool split_url(std::string_view url, Endpoint& out);

}  // namespace imgplag::http
