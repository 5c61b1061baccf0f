#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>
#include <string_view>

#include "acforge/error.hpp"

namespace acforge {

// Bounds for the exponential procedures; exceeding one is an error, never a
// silent truncation.
struct Limits {
  std::size_t max_vars = 20;
  std::size_t subcircuits = 1'000'000;

  // Parses "max_vars=<n>,subcircuits=<n>" (either key may be omitted).
  static Limits parse(std::string_view text, Limits base) {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t comma = text.find(',', pos);
      if (comma == std::string_view::npos) comma = text.size();
      std::string_view item = text.substr(pos, comma - pos);
      pos = comma + 1;
      if (item.empty()) continue;
      std::size_t eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw InputError("malformed limit '" + std::string(item) + "'");
      }
      std::string_view key = item.substr(0, eq);
      std::string value(item.substr(eq + 1));
      std::size_t n = 0;
      try {
        std::size_t used = 0;
        n = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw InputError("malformed limit value '" + value + "'");
      }
      if (key == "max_vars") {
        base.max_vars = n;
      } else if (key == "subcircuits") {
        base.subcircuits = n;
      } else {
        throw InputError("unknown limit '" + std::string(key) + "'");
      }
    }
    return base;
  }

  static Limits parse(std::string_view text) { return parse(text, Limits{}); }

  static Limits from_environment() {
    const char* env = std::getenv("ACFORGE_LIMITS");
    return env ? parse(env) : Limits{};
  }
};

}  // namespace acforge
