#pragma once

#include <cstdio>
#include <string>

namespace nomarch {

// Shortest representation at 6 significant digits; integers print bare.
inline std::string format_number(double v, int digits = 6) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// RFC 4180 style: quote when the field contains a delimiter, quote or newline.
inline std::string csv_escape(const std::string& s, char delimiter = ',') {
  bool needs_quote = false;
  for (char c : s)
    if (c == delimiter || c == '"' || c == '\n' || c == '\r') {
      needs_quote = true;
      break;
    }
  if (!needs_quote) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace nomarch
