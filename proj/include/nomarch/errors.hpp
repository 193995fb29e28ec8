#pragma once

#include <stdexcept>
#include <string>

namespace nomarch {

// Base class for all library failures.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape mismatches, empty dimensions, out-of-range indices.
struct dimension_error : error {
  using error::error;
};

// Non-finite values where finite numbers are required.
struct numeric_error : error {
  using error::error;
};

// Value-domain violations (non-binary entries, off-simplex rows, ...).
struct domain_error : error {
  using error::error;
};

// Index-set cardinality problems (k > n, duplicate indices).
struct cardinality_error : error {
  using error::error;
};

// Malformed input text. Carries a 1-based line number when one is known.
struct parse_error : error {
  explicit parse_error(const std::string& msg, long line_no = 0)
      : error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
        line(line_no) {}
  long line;
};

// A column that cannot form a nominal schema (fewer than 2 categories).
struct schema_error : parse_error {
  using parse_error::parse_error;
};

// Unknown attribute code in a coded dataset.
struct code_error : parse_error {
  using parse_error::parse_error;
};

// Invalid run configuration.
struct config_error : error {
  using error::error;
};

// Filesystem or stream failure.
struct io_error : error {
  using error::error;
};

// A persisted model does not match the data it is being applied to.
struct stale_model_error : error {
  using error::error;
};

}  // namespace nomarch
