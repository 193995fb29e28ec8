#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "nomarch/ada.hpp"
#include "nomarch/errors.hpp"
#include "nomarch/evaluation.hpp"
#include "nomarch/german_credit.hpp"
#include "nomarch/io.hpp"
#include "nomarch/nominal.hpp"
#include "nomarch/simplex_viz.hpp"
#include "nomarch/version.hpp"

namespace nomarch {

struct RunConfig {
  std::string input_path;
  std::string format = "csv";  // csv | german-credit
  std::string method = "ada";  // ada | aa
  int k = 10;
  int restarts = 20;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  int max_iter = 200;
  double threshold = 0.5;
  std::string out_dir = ".";
  std::string color_by;  // empty: last variable
  int threads = 0;
  char delimiter = ',';
  bool has_header = true;
  bool write_encoded = false;
  std::string model_path;  // empty: <out_dir>/model.json
};

inline void validate_config(const RunConfig& c) {
  if (c.input_path.empty()) throw config_error("input path is required");
  if (c.format != "csv" && c.format != "german-credit")
    throw config_error("format must be 'csv' or 'german-credit'");
  if (c.method != "ada" && c.method != "aa")
    throw config_error("method must be 'ada' or 'aa'");
  if (c.k < 1) throw config_error("k must be >= 1");
  if (c.restarts < 1) throw config_error("restarts must be >= 1");
  if (!(c.threshold >= 0.0 && c.threshold < 1.0))
    throw config_error("threshold must be in [0, 1)");
  if (!(c.tol > 0.0)) throw config_error("tol must be > 0");
  if (c.max_iter < 1) throw config_error("max_iter must be >= 1");
  if (c.out_dir.empty()) throw config_error("output directory is required");
}

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const config_error*>(&e)) return 2;
  if (dynamic_cast<const parse_error*>(&e)) return 3;
  if (dynamic_cast<const cardinality_error*>(&e)) return 4;
  if (dynamic_cast<const stale_model_error*>(&e)) return 5;
  return 1;
}

struct LoadedData {
  NominalTable table;
  DummyMatrix X;
  std::string data_hash;
};

inline LoadedData load_input(const RunConfig& c) {
  LoadedData d;
  const std::string bytes = read_file(c.input_path);
  d.data_hash = fnv1a_hex(bytes);
  std::istringstream in(bytes);
  d.table = (c.format == "german-credit")
                ? parse_german_credit(in)
                : parse_delimited(in, c.delimiter, c.has_header);
  d.X = encode_dummy(d.table);
  return d;
}

namespace detail {

inline std::vector<std::string> variable_names(const NominalTable& t) {
  std::vector<std::string> names;
  for (const auto& s : t.schemas) names.push_back(s.name);
  return names;
}

// decoded label cells for each binary profile row
inline std::vector<std::vector<std::string>> decode_profiles(
    const Matrix& P, const LoadedData& d) {
  std::vector<std::vector<std::string>> cells;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    const auto decoded =
        decode_dummy(P.row(i).transpose(), d.X.groups, d.table.schemas);
    std::vector<std::string> row;
    for (const auto& cell : decoded) row.push_back(cell.display());
    cells.push_back(std::move(row));
  }
  return cells;
}

inline ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["input"] = c.input_path;
  j["format"] = c.format;
  j["method"] = c.method;
  j["k"] = c.k;
  j["restarts"] = c.restarts;
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["threshold"] = c.threshold;
  j["out_dir"] = c.out_dir;
  j["color_by"] = c.color_by;
  j["delimiter"] = std::string(1, c.delimiter);
  j["has_header"] = c.has_header;
  return j;
}

inline void write_manifest(const RunConfig& c, const std::string& command,
                           const std::string& data_hash,
                           const std::string& filename) {
  ordered_json j;
  j["tool"] = "nomarch";
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = config_json(c);
  j["data_hash"] = data_hash;
  write_file(std::filesystem::path(c.out_dir) / filename, j.dump(2) + "\n");
}

inline std::filesystem::path model_file(const RunConfig& c) {
  return c.model_path.empty()
             ? std::filesystem::path(c.out_dir) / "model.json"
             : std::filesystem::path(c.model_path);
}

// mixture weights of every observation against a fixed archetype matrix
inline Matrix alpha_against(const Matrix& X, const Matrix& Z, int threads) {
  const int n = static_cast<int>(X.rows());
  const Matrix G = Z * Z.transpose();
  const Matrix C = Z * X.transpose();
  const Vector diag = X.rowwise().squaredNorm();
  Matrix alpha(n, Z.rows());
  parallel_for(n, resolve_threads(threads), [&](int i) {
    alpha.row(i) = solve_simplex_gram(G, C.col(i), diag(i)).weights.w.transpose();
  });
  return alpha;
}

inline std::string color_variable(const RunConfig& c, const NominalTable& t) {
  if (c.color_by.empty()) return t.schemas.back().name;
  for (const auto& s : t.schemas)
    if (s.name == c.color_by) return s.name;
  throw config_error("color variable '" + c.color_by + "' not in the data");
}

inline std::vector<std::string> labels_for(const NominalTable& t,
                                           const std::string& var) {
  std::size_t idx = 0;
  for (; idx < t.schemas.size(); ++idx)
    if (t.schemas[idx].name == var) break;
  std::vector<std::string> out;
  for (const auto& r : t.rows) out.push_back(r[idx]);
  return out;
}

}  // namespace detail

struct FitArtifacts {
  std::string method;
  double rss = 0.0;
  std::vector<int> case_ids;  // 1-based, ADA only
  double fit_seconds = 0.0;
};

// Fit a model and persist model.json, manifest.json, profiles.csv and
// (optionally) encoded.csv into the output directory.
inline FitArtifacts run_fit(const RunConfig& c) {
  validate_config(c);
  const LoadedData d = load_input(c);
  if (c.k > d.X.n())
    throw cardinality_error("k = " + std::to_string(c.k) + " exceeds n = " +
                            std::to_string(d.X.n()));
  std::filesystem::create_directories(c.out_dir);

  FitArtifacts art;
  art.method = c.method;
  const auto t0 = std::chrono::steady_clock::now();
  ordered_json model;
  Matrix profiles;                // binary k x m
  std::vector<std::string> case_ids;
  if (c.method == "ada") {
    ADAOptions o;
    o.restarts = c.restarts;
    o.seed = c.seed;
    o.tol = c.tol;
    o.max_iter = c.max_iter;
    o.threads = c.threads;
    const ADAModel m = fit_ada(d.X.values, c.k, o);
    art.fit_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    art.rss = m.rss;
    profiles = Matrix(m.k, d.X.m());
    for (int j = 0; j < m.k; ++j) {
      const int row = m.indices[static_cast<std::size_t>(j)];
      profiles.row(j) = d.X.values.row(row);
      const int id = d.X.row_ids[static_cast<std::size_t>(row)];
      art.case_ids.push_back(id);
      case_ids.push_back(std::to_string(id));
    }
    model = ada_model_json(m, art.fit_seconds);
  } else {
    AAOptions o;
    o.restarts = c.restarts;
    o.seed = c.seed;
    o.tol = c.tol;
    o.max_iter = c.max_iter;
    o.threads = c.threads;
    const AAModel m = fit_aa(d.X.values, c.k, o);
    art.fit_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    art.rss = m.rss;
    profiles = binarize(m.Z, c.threshold);
    case_ids.assign(static_cast<std::size_t>(m.k), "");
    model = aa_model_json(m, art.fit_seconds);
  }
  model["seed"] = c.seed;
  model["restarts"] = c.restarts;
  model["tol"] = c.tol;
  model["max_iter"] = c.max_iter;
  model["data_hash"] = d.data_hash;
  write_file(detail::model_file(c), model.dump(2) + "\n");
  detail::write_manifest(c, "fit", d.data_hash, "manifest.json");

  const auto cells = detail::decode_profiles(profiles, d);
  write_file(std::filesystem::path(c.out_dir) / "profiles.csv",
             profiles_csv(detail::variable_names(d.table), case_ids, cells));
  if (c.write_encoded)
    write_file(std::filesystem::path(c.out_dir) / "encoded.csv",
               encoded_csv(d.X));
  return art;
}

namespace detail {

struct ModelState {
  std::string method;
  Matrix profiles;  // binary k x m
  Matrix alpha;     // n x k
  std::vector<std::string> case_ids;
};

// Load model.json, verify it still matches the input, and rebuild the
// profile matrix and mixture weights it describes.
inline ModelState restore_model(const RunConfig& c, const LoadedData& d) {
  const auto path = model_file(c);
  ordered_json model;
  try {
    model = ordered_json::parse(read_file(path.string()));
  } catch (const ordered_json::parse_error& e) {
    throw io_error("cannot parse " + path.string() + ": " + e.what());
  }
  if (!model.contains("data_hash") ||
      model["data_hash"].get<std::string>() != d.data_hash)
    throw stale_model_error("model " + path.string() +
                            " was fitted on different data");

  ModelState st;
  st.method = model.at("method").get<std::string>();
  if (st.method == "ada") {
    std::vector<int> idx;
    for (const auto& id : model.at("case_ids")) {
      const int one_based = id.get<int>();
      if (one_based < 1 || one_based > d.X.n())
        throw stale_model_error("model case id " + std::to_string(one_based) +
                                " is outside the data");
      idx.push_back(one_based - 1);
    }
    auto [alpha, rss] = evaluate_indices(d.X.values, idx, c.threads);
    (void)rss;
    st.alpha = std::move(alpha);
    st.profiles = Matrix(static_cast<int>(idx.size()), d.X.m());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      st.profiles.row(static_cast<Eigen::Index>(j)) = d.X.values.row(idx[j]);
      st.case_ids.push_back(std::to_string(idx[j] + 1));
    }
  } else if (st.method == "aa") {
    const auto& zj = model.at("Z");
    const int k = static_cast<int>(zj.size());
    if (k < 1) throw io_error("model Z is empty");
    const int m = static_cast<int>(zj.at(0).size());
    if (m != d.X.m())
      throw stale_model_error("model Z width does not match the data");
    Matrix Z(k, m);
    for (int j = 0; j < k; ++j)
      for (int col = 0; col < m; ++col)
        Z(j, col) = zj.at(static_cast<std::size_t>(j))
                        .at(static_cast<std::size_t>(col))
                        .get<double>();
    st.alpha = alpha_against(d.X.values, Z, c.threads);
    st.profiles = binarize(Z, c.threshold);
    st.case_ids.assign(static_cast<std::size_t>(k), "");
  } else {
    throw io_error("unknown model method '" + st.method + "'");
  }
  return st;
}

inline void write_viz(const RunConfig& c, const LoadedData& d,
                      const ModelState& st) {
  const std::string var = color_variable(c, d.table);
  const SimplexLayout lay =
      project_simplex(st.alpha, labels_for(d.table, var));
  write_file(std::filesystem::path(c.out_dir) / "simplex.svg",
             render_svg(lay));
  std::vector<std::string> row_ids;
  for (int id : d.X.row_ids) row_ids.push_back(std::to_string(id));
  write_file(std::filesystem::path(c.out_dir) / "points.csv",
             points_csv(lay, row_ids));
}

}  // namespace detail

struct ReportArtifacts {
  std::string method;
  long long total = 0;
  bool coverage_clean = false;
};

// Evaluate a persisted model against its data: Hamming artifacts, coverage,
// and the simplex figure.
inline ReportArtifacts run_report(const RunConfig& c) {
  validate_config(c);
  const LoadedData d = load_input(c);
  std::filesystem::create_directories(c.out_dir);
  const detail::ModelState st = detail::restore_model(c, d);

  const EvaluationReport rep =
      evaluate_profiles(st.profiles, d.X.groups, c.threshold);
  write_file(std::filesystem::path(c.out_dir) / "hamming.csv",
             hamming_csv(rep.hamming));
  write_file(std::filesystem::path(c.out_dir) / "summary.csv",
             summary_csv(st.method, rep.summary));
  write_file(std::filesystem::path(c.out_dir) / "coverage.csv",
             coverage_csv(detail::variable_names(d.table), rep.coverage));
  detail::write_viz(c, d, st);
  detail::write_manifest(c, "report", d.data_hash, "report_manifest.json");

  ReportArtifacts art;
  art.method = st.method;
  art.total = rep.summary.total;
  art.coverage_clean = rep.coverage.clean();
  return art;
}

// Regenerate only the figure (and projected points) from a persisted model.
inline void run_plot(const RunConfig& c) {
  validate_config(c);
  const LoadedData d = load_input(c);
  std::filesystem::create_directories(c.out_dir);
  const detail::ModelState st = detail::restore_model(c, d);
  detail::write_viz(c, d, st);
  detail::write_manifest(c, "plot", d.data_hash, "plot_manifest.json");
}

}  // namespace nomarch
