#ifndef QWALK_FORMAT_HPP
#define QWALK_FORMAT_HPP

#include <cstdio>
#include <string>

namespace qwalk {

/// printf-style %.<digits>g; locale independent for the "C" locale the
/// tools run under.
inline std::string format_g(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return buf;
}

/// Round-trip precision used for machine-readable output.
inline std::string json_number(double value) { return format_g(value, 17); }

/// Precision used for human-oriented tables.
inline std::string table_number(double value) { return format_g(value, 12); }

}  // namespace qwalk

#endif  // QWALK_FORMAT_HPP
