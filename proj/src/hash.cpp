#include "imgplag/hash.hpp"

#include <fmt/format.h>

namespace imgplag {

std::string to_hex(std::uint64_t value) { return fmt::format("{:016x}", value); }

}  // namespace imgplag
