#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nomarch/errors.hpp"
#include "nomarch/types.hpp"

namespace nomarch {

// One nominal variable: its name and the fixed, ordered category list that
// determines the dummy-column layout.
struct VariableSchema {
  std::string name;
  std::vector<std::string> categories;

  int index_of(const std::string& label) const {
    for (std::size_t i = 0; i < categories.size(); ++i)
      if (categories[i] == label) return static_cast<int>(i);
    return -1;
  }
};

inline void validate_schema(const VariableSchema& s) {
  if (s.categories.size() < 2)
    throw schema_error("variable '" + s.name + "' has fewer than 2 categories");
  std::set<std::string> seen;
  for (const auto& c : s.categories) {
    if (c.empty())
      throw schema_error("variable '" + s.name + "' has an empty category label");
    if (!seen.insert(c).second)
      throw schema_error("variable '" + s.name + "' has duplicate category '" + c + "'");
  }
}

// Raw nominal observations: one label per variable per row.
struct NominalTable {
  std::vector<VariableSchema> schemas;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> row_ids;  // 1-based original row numbers

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_vars() const { return schemas.size(); }
};

inline void validate_table(const NominalTable& t) {
  for (const auto& s : t.schemas) validate_schema(s);
  if (t.row_ids.size() != t.rows.size())
    throw dimension_error("row_ids length does not match row count");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i].size() != t.schemas.size())
      throw dimension_error("row " + std::to_string(i + 1) +
                            " has wrong number of cells");
    for (std::size_t v = 0; v < t.schemas.size(); ++v) {
      if (t.schemas[v].index_of(t.rows[i][v]) < 0)
        throw domain_error("row " + std::to_string(i + 1) + ": label '" +
                           t.rows[i][v] + "' is not in the schema of variable '" +
                           t.schemas[v].name + "'");
    }
  }
}

// Contiguous column block of one variable inside the dummy matrix.
struct DummyGroup {
  std::string name;
  int start = 0;
  int count = 0;
  std::vector<std::string> categories;  // column c encodes categories[c]
};

// n x m binary design matrix plus the per-variable column grouping.
struct DummyMatrix {
  Matrix values;
  std::vector<DummyGroup> groups;
  std::vector<int> row_ids;

  int n() const { return static_cast<int>(values.rows()); }
  int m() const { return static_cast<int>(values.cols()); }
};

// Parse a delimited text table of nominal labels. Column schemas are
// inferred as the lexicographically sorted set of distinct labels seen.
inline NominalTable parse_delimited(std::istream& in, char delimiter,
                                    bool has_header) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> header;
  std::string line;
  long line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && records.empty() && header.empty()) {
      // allow leading blank lines only before any content
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, delimiter)) fields.push_back(field);
    if (!line.empty() && line.back() == delimiter) fields.emplace_back();
    if (fields.empty()) fields.emplace_back();  // a blank line is one empty field
    if (has_header && header.empty()) {
      header = fields;
      width = fields.size();
      continue;
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw parse_error("expected " + std::to_string(width) + " fields, got " +
                            std::to_string(fields.size()),
                        line_no);
    for (const auto& f : fields)
      if (f.empty()) throw parse_error("empty label", line_no);
    records.push_back(std::move(fields));
  }
  if (records.empty()) throw parse_error("empty input: no data rows");

  NominalTable t;
  const std::size_t cols = width;
  for (std::size_t c = 0; c < cols; ++c) {
    std::set<std::string> distinct;
    for (const auto& r : records) distinct.insert(r[c]);
    VariableSchema s;
    s.name = (has_header && c < header.size() && !header[c].empty())
                 ? header[c]
                 : "v" + std::to_string(c + 1);
    s.categories.assign(distinct.begin(), distinct.end());
    if (s.categories.size() < 2)
      throw schema_error("column '" + s.name +
                         "' has a single distinct label; a nominal variable "
                         "needs at least 2 categories");
    t.schemas.push_back(std::move(s));
  }
  t.rows = std::move(records);
  t.row_ids.resize(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    t.row_ids[i] = static_cast<int>(i + 1);
  validate_table(t);
  return t;
}

// One-hot encode every variable; column order follows schema order.
inline DummyMatrix encode_dummy(const NominalTable& t) {
  validate_table(t);
  if (t.rows.empty()) throw dimension_error("encode_dummy: empty table");
  int m = 0;
  DummyMatrix d;
  for (const auto& s : t.schemas) {
    d.groups.push_back(
        {s.name, m, static_cast<int>(s.categories.size()), s.categories});
    m += static_cast<int>(s.categories.size());
  }
  const int n = static_cast<int>(t.rows.size());
  d.values = Matrix::Zero(n, m);
  for (int i = 0; i < n; ++i) {
    for (std::size_t v = 0; v < t.schemas.size(); ++v) {
      const int p = t.schemas[v].index_of(t.rows[static_cast<std::size_t>(i)][v]);
      d.values(i, d.groups[v].start + p) = 1.0;
    }
  }
  d.row_ids = t.row_ids;
  return d;
}

enum class Coverage { ONE, NONE, MULTIPLE };

inline const char* coverage_name(Coverage c) {
  switch (c) {
    case Coverage::ONE: return "ONE";
    case Coverage::NONE: return "NONE";
    default: return "MULTIPLE";
  }
}

// Decoded outcome of one variable of one binary profile.
struct DecodedCell {
  Coverage coverage = Coverage::NONE;
  std::vector<std::string> labels;  // 1 for ONE, >= 2 for MULTIPLE, none for NONE

  // Single text rendering used in CSV artifacts.
  std::string display() const {
    if (coverage == Coverage::ONE) return labels.front();
    if (coverage == Coverage::NONE) return "NONE";
    std::string s = "MULTIPLE{";
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i > 0) s += '|';
      s += labels[i];
    }
    s += '}';
    return s;
  }
};

// Inverse of encode_dummy for a single binary profile. Profiles that are not
// one-hot (binarized continuous archetypes) yield NONE/MULTIPLE outcomes.
inline std::vector<DecodedCell> decode_dummy(
    const Vector& profile, const std::vector<DummyGroup>& groups,
    const std::vector<VariableSchema>& schemas) {
  if (groups.size() != schemas.size())
    throw dimension_error("decode_dummy: groups/schemas size mismatch");
  int m = 0;
  for (const auto& g : groups) m += g.count;
  if (profile.size() != m)
    throw dimension_error("decode_dummy: profile length " +
                          std::to_string(profile.size()) + " != " +
                          std::to_string(m));
  std::vector<DecodedCell> out;
  out.reserve(groups.size());
  for (std::size_t v = 0; v < groups.size(); ++v) {
    DecodedCell cell;
    for (int j = 0; j < groups[v].count; ++j) {
      const double x = profile(groups[v].start + j);
      if (x != 0.0 && x != 1.0)
        throw domain_error("decode_dummy: entry " +
                           std::to_string(groups[v].start + j) +
                           " is not binary");
      if (x == 1.0)
        cell.labels.push_back(schemas[v].categories[static_cast<std::size_t>(j)]);
    }
    cell.coverage = cell.labels.empty()
                        ? Coverage::NONE
                        : (cell.labels.size() == 1 ? Coverage::ONE
                                                   : Coverage::MULTIPLE);
    out.push_back(std::move(cell));
  }
  return out;
}

}  // namespace nomarch
