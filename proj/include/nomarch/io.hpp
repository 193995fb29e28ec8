#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "nomarch/ada.hpp"
#include "nomarch/errors.hpp"
#include "nomarch/evaluation.hpp"
#include "nomarch/nominal.hpp"
#include "nomarch/simplex_viz.hpp"
#include "nomarch/text.hpp"

namespace nomarch {

using ordered_json = nlohmann::ordered_json;

// 64-bit FNV-1a over raw bytes, rendered as fixed-width hex.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw io_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw io_error("failed reading " + p.string());
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw io_error("cannot open " + p.string() + " for writing");
  out << s;
  out.flush();
  if (!out) throw io_error("failed writing " + p.string());
}

// ---- CSV artifacts ---------------------------------------------------------

// Decoded profile table: one row per archetypal profile, one column per
// nominal variable; the case column holds the selected data row id (1-based)
// when the profile is an actual observation.
inline std::string profiles_csv(const std::vector<std::string>& var_names,
                                const std::vector<std::string>& case_ids,
                                const std::vector<std::vector<std::string>>& cells) {
  std::string out = "profile,case";
  for (const auto& v : var_names) out += ',' + csv_escape(v);
  out += '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out += std::to_string(i + 1) + ',';
    out += csv_escape(i < case_ids.size() ? case_ids[i] : "");
    for (const auto& cell : cells[i]) out += ',' + csv_escape(cell);
    out += '\n';
  }
  return out;
}

inline std::string encoded_csv(const DummyMatrix& X) {
  std::string out;
  bool first = true;
  std::vector<std::string> names(static_cast<std::size_t>(X.m()));
  for (const auto& g : X.groups)
    for (int c = 0; c < g.count; ++c)
      names[static_cast<std::size_t>(g.start + c)] =
          g.name + "=" + g.categories[static_cast<std::size_t>(c)];
  for (const auto& nm : names) {
    if (!first) out += ',';
    out += csv_escape(nm);
    first = false;
  }
  out += '\n';
  for (int i = 0; i < X.n(); ++i) {
    for (int j = 0; j < X.m(); ++j) {
      if (j) out += ',';
      out += (X.values(i, j) == 1.0) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

inline std::string hamming_csv(const IMatrix& D) {
  std::string out = "profile";
  for (Eigen::Index j = 0; j < D.cols(); ++j)
    out += ',' + std::to_string(j + 1);
  out += '\n';
  for (Eigen::Index i = 0; i < D.rows(); ++i) {
    out += std::to_string(i + 1);
    for (Eigen::Index j = 0; j < D.cols(); ++j)
      out += ',' + std::to_string(D(i, j));
    out += '\n';
  }
  return out;
}

// Mirrors the distance table layout: one column per observed distance plus
// the Total of all entries.
inline std::string summary_csv(const std::string& method,
                               const DistanceSummary& s) {
  std::string out = "method";
  for (int d : s.distances) out += ",d" + std::to_string(d);
  out += ",Total\n" + csv_escape(method);
  for (int c : s.counts) out += ',' + std::to_string(c);
  out += ',' + std::to_string(s.total) + '\n';
  return out;
}

inline std::string coverage_csv(const std::vector<std::string>& var_names,
                                const CoverageReport& rep) {
  std::string out = "profile,variable,coverage\n";
  for (std::size_t i = 0; i < rep.cells.size(); ++i)
    for (std::size_t v = 0; v < rep.cells[i].size(); ++v)
      out += std::to_string(i + 1) + ',' + csv_escape(var_names[v]) + ',' +
             coverage_name(rep.cells[i][v]) + '\n';
  return out;
}

inline std::string points_csv(const SimplexLayout& lay,
                              const std::vector<std::string>& row_ids) {
  std::string out = "row,x,y,label\n";
  for (Eigen::Index i = 0; i < lay.points.rows(); ++i) {
    out += csv_escape(static_cast<std::size_t>(i) < row_ids.size()
                          ? row_ids[static_cast<std::size_t>(i)]
                          : std::to_string(i + 1));
    out += ',' + format_number(lay.points(i, 0));
    out += ',' + format_number(lay.points(i, 1));
    out += ',';
    if (!lay.color_labels.empty())
      out += csv_escape(lay.color_labels[static_cast<std::size_t>(i)]);
    out += '\n';
  }
  return out;
}

// ---- JSON artifacts --------------------------------------------------------

namespace detail {

inline ordered_json matrix_json(const Matrix& M) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ordered_json alpha_summary_json(const Matrix& alpha) {
  ordered_json s;
  s["rows"] = alpha.rows();
  s["min"] = alpha.size() ? alpha.minCoeff() : 0.0;
  s["max"] = alpha.size() ? alpha.maxCoeff() : 0.0;
  // average dominant weight: how concentrated the mixtures are
  double dom = 0.0;
  for (Eigen::Index i = 0; i < alpha.rows(); ++i)
    dom += alpha.row(i).maxCoeff();
  s["mean_row_max"] = alpha.rows() ? dom / static_cast<double>(alpha.rows()) : 0.0;
  return s;
}

}  // namespace detail

inline ordered_json ada_model_json(const ADAModel& m, double fit_seconds) {
  ordered_json j;
  j["method"] = "ada";
  j["k"] = m.k;
  j["rss"] = m.rss;
  ordered_json idx = ordered_json::array();
  for (int i : m.indices) idx.push_back(i + 1);  // 1-based row ids
  j["case_ids"] = std::move(idx);
  j["init"] = ada_init_name(m.init_kind);
  j["swap_steps"] = m.swap_steps;
  j["alpha_summary"] = detail::alpha_summary_json(m.alpha);
  ordered_json starts = ordered_json::array();
  for (const auto& s : m.diagnostics.starts) {
    ordered_json e;
    e["init"] = ada_init_name(s.kind);
    ordered_json ini = ordered_json::array();
    for (int i : s.initial) ini.push_back(i + 1);
    e["initial_case_ids"] = std::move(ini);
    e["initial_rss"] = s.initial_rss;
    e["final_rss"] = s.final_rss;
    e["swaps"] = s.swaps;
    starts.push_back(std::move(e));
  }
  j["diagnostics"]["starts"] = std::move(starts);
  j["diagnostics"]["aa_rss"] = m.diagnostics.aa_rss;
  j["diagnostics"]["data_degenerate"] = m.diagnostics.data_degenerate;
  j["diagnostics"]["duplicate_patterns"] = m.diagnostics.duplicate_patterns;
  j["timings"]["fit_seconds"] = fit_seconds;
  return j;
}

inline ordered_json aa_model_json(const AAModel& m, double fit_seconds) {
  ordered_json j;
  j["method"] = "aa";
  j["k"] = m.k;
  j["rss"] = m.rss;
  j["Z"] = detail::matrix_json(m.Z);
  j["iterations"] = m.iterations;
  j["converged"] = m.converged;
  j["alpha_summary"] = detail::alpha_summary_json(m.alpha);
  ordered_json restarts = ordered_json::array();
  for (const auto& r : m.diagnostics.restarts) {
    ordered_json e;
    e["restart"] = r.restart;
    e["rss"] = r.rss;
    e["iterations"] = r.iterations;
    e["converged"] = r.converged;
    restarts.push_back(std::move(e));
  }
  j["diagnostics"]["restarts"] = std::move(restarts);
  j["diagnostics"]["all_rows_identical"] = m.diagnostics.all_rows_identical;
  j["timings"]["fit_seconds"] = fit_seconds;
  return j;
}

}  // namespace nomarch
