#pragma once

#include <array>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nomarch/errors.hpp"
#include "nomarch/nominal.hpp"

namespace nomarch {
namespace german {

struct coded_variable {
  const char* name;
  int field;  // 1-based position in the 21-field record
  std::vector<std::pair<const char*, const char*>> codes;  // code -> label
};

// The five nominal attributes used from the raw UCI file, with codebook
// labels. Category order follows code order.
inline const std::vector<coded_variable>& variables() {
  static const std::vector<coded_variable> v = {
      {"credit_purpose",
       4,
       {{"A40", "car (new)"},
        {"A41", "car (used)"},
        {"A42", "furniture/equipment"},
        {"A43", "radio/television"},
        {"A44", "domestic appliances"},
        {"A45", "repairs"},
        {"A46", "education"},
        {"A48", "retraining"},
        {"A49", "business"},
        {"A410", "others"}}},
      {"employment_period",
       7,
       {{"A71", "unemployed"},
        {"A72", "< 1 year"},
        {"A73", "1 <= ... < 4 years"},
        {"A74", "4 <= ... < 7 years"},
        {"A75", "≥ 7 years"}}},
      {"personal_status_sex",
       9,
       {{"A91", "male: divorced/separated"},
        {"A92", "female: divorced/separated/married"},
        {"A93", "male: single"},
        {"A94", "male: married/widowed"}}},
      {"job_situation",
       17,
       {{"A171", "unemployed/unskilled - non-resident"},
        {"A172", "unskilled - resident"},
        {"A173", "skilled employee/official"},
        {"A174", "self-employed/highly qualified staff"}}},
      {"credit_risk", 21, {{"1", "Good"}, {"2", "Bad"}}}};
  return v;
}

constexpr int kFieldCount = 21;

}  // namespace german

// Parse the raw 21-field UCI credit-application records, keeping the five
// nominal variables (credit purpose, employment period, personal status and
// sex, job situation, credit risk) and translating attribute codes to
// human-readable labels.
inline NominalTable parse_german_credit(std::istream& in) {
  NominalTable t;
  for (const auto& var : german::variables()) {
    VariableSchema s;
    s.name = var.name;
    for (const auto& [code, label] : var.codes) {
      (void)code;
      s.categories.emplace_back(label);
    }
    t.schemas.push_back(std::move(s));
  }

  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::vector<std::string> fields;
    std::string tok;
    while (ls >> tok) fields.push_back(tok);
    if (fields.empty()) continue;  // ignore blank lines
    if (fields.size() != german::kFieldCount)
      throw parse_error("expected " + std::to_string(german::kFieldCount) +
                            " fields, got " + std::to_string(fields.size()),
                        line_no);
    std::vector<std::string> row;
    row.reserve(german::variables().size());
    for (const auto& var : german::variables()) {
      const std::string& code = fields[static_cast<std::size_t>(var.field - 1)];
      const char* label = nullptr;
      for (const auto& [c, l] : var.codes)
        if (code == c) {
          label = l;
          break;
        }
      if (label == nullptr)
        throw code_error("unknown " + std::string(var.name) + " code '" + code +
                             "'",
                         line_no);
      row.emplace_back(label);
    }
    t.rows.push_back(std::move(row));
    t.row_ids.push_back(static_cast<int>(t.rows.size()));
  }
  if (t.rows.empty()) throw parse_error("empty input: no data rows");
  validate_table(t);
  return t;
}

}  // namespace nomarch
