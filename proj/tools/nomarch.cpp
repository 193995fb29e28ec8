#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "nomarch/nomarch.hpp"

namespace {

struct CliState {
  nomarch::RunConfig cfg;
  std::string delimiter = ",";
  bool no_header = false;
};

void add_common(CLI::App* cmd, CliState& s) {
  cmd->add_option("-i,--input", s.cfg.input_path, "Input data file");
  cmd->add_option("-f,--format", s.cfg.format,
                  "Input format: csv or german-credit")
      ->capture_default_str();
  cmd->add_option("-m,--method", s.cfg.method, "Fit method: ada or aa")
      ->capture_default_str();
  cmd->add_option("-k,--k", s.cfg.k, "Number of archetypal profiles")
      ->capture_default_str();
  cmd->add_option("-r,--restarts", s.cfg.restarts,
                  "Random restarts of the continuous fit")
      ->capture_default_str();
  cmd->add_option("-s,--seed", s.cfg.seed, "Random seed")
      ->capture_default_str();
  cmd->add_option("--tol", s.cfg.tol, "Relative convergence tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iter", s.cfg.max_iter,
                  "Iteration cap per restart")
      ->capture_default_str();
  cmd->add_option("-t,--threshold", s.cfg.threshold,
                  "Binarization threshold for continuous profiles")
      ->capture_default_str();
  cmd->add_option("-o,--out", s.cfg.out_dir, "Output directory")
      ->capture_default_str();
  cmd->add_option("--color-by", s.cfg.color_by,
                  "Variable used to color the figure (default: last)");
  cmd->add_option("--threads", s.cfg.threads,
                  "Worker threads (0 = auto)")
      ->envname("NOMARCH_THREADS")
      ->capture_default_str();
  cmd->add_option("--delimiter", s.delimiter, "CSV field delimiter")
      ->capture_default_str();
  cmd->add_flag("--no-header", s.no_header,
                "Treat the first CSV line as data, not column names");
  cmd->add_option("--model", s.cfg.model_path,
                  "Model file (default: <out>/model.json)");
  cmd->set_config("-c,--config", "", "TOML file with the same keys as the flags");
}

void finalize(CliState& s) {
  if (s.delimiter.size() != 1)
    throw nomarch::config_error("delimiter must be a single character");
  s.cfg.delimiter = s.delimiter[0];
  s.cfg.has_header = !s.no_header;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Archetypoid analysis for nominal questionnaire data"};
  app.require_subcommand(1);

  CliState fit_s, report_s, plot_s;
  CLI::App* fit = app.add_subcommand(
      "fit", "Fit a model and write model.json + decoded profiles");
  add_common(fit, fit_s);
  fit->add_flag("--write-encoded", fit_s.cfg.write_encoded,
                "Also write the one-hot encoded matrix");
  fit->callback([&] {
    finalize(fit_s);
    const auto art = nomarch::run_fit(fit_s.cfg);
    std::cout << "fit " << art.method << ": rss = "
              << nomarch::format_number(art.rss) << " ("
              << nomarch::format_number(art.fit_seconds) << " s)\n";
    if (!art.case_ids.empty()) {
      std::cout << "cases:";
      for (int id : art.case_ids) std::cout << ' ' << id;
      std::cout << '\n';
    }
  });

  CLI::App* report = app.add_subcommand(
      "report", "Evaluate a fitted model: distances, coverage, figure");
  add_common(report, report_s);
  report->callback([&] {
    finalize(report_s);
    const auto art = nomarch::run_report(report_s.cfg);
    std::cout << "report " << art.method << ": total = " << art.total
              << (art.coverage_clean ? "" : " (coverage issues, see coverage.csv)")
              << '\n';
  });

  CLI::App* plot = app.add_subcommand(
      "plot", "Re-render the simplex figure from a fitted model");
  add_common(plot, plot_s);
  plot->callback([&] {
    finalize(plot_s);
    nomarch::run_plot(plot_s.cfg);
    std::cout << "plot: wrote simplex.svg and points.csv\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return nomarch::exit_code_for(e);
  }
  return 0;
}
