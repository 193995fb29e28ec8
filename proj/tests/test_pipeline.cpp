#include <fstream>

#include "catch2/catch_amalgamated.hpp"

#include "helpers.hpp"
#include "nomarch/pipeline.hpp"

using namespace nomarch;
using test_helpers::TempDir;

namespace {

// small three-variable dataset with clear extremes
std::string toy_csv() {
  std::string s = "color,shape,risk\n";
  const char* rows[] = {
      "red,circle,hi",  "red,circle,hi",  "red,square,hi",
      "blue,square,lo", "blue,square,lo", "blue,circle,lo",
      "green,circle,hi", "green,square,lo", "red,square,lo",
      "blue,circle,hi", "green,circle,lo", "red,circle,lo",
  };
  for (const char* r : rows) s += std::string(r) + "\n";
  return s;
}

RunConfig base_config(const TempDir& tmp, const std::string& input) {
  RunConfig c;
  c.input_path = input;
  c.format = "csv";
  c.method = "ada";
  c.k = 3;
  c.restarts = 3;
  c.seed = 5;
  c.out_dir = tmp.file("out");
  c.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("config invariants are enforced") {
  TempDir tmp("cfg");
  std::ofstream(tmp.file("d.csv")) << toy_csv();
  RunConfig c = base_config(tmp, tmp.file("d.csv"));
  CHECK_NOTHROW(validate_config(c));
  auto expect_bad = [&](auto mutate) {
    RunConfig bad = c;
    mutate(bad);
    CHECK_THROWS_AS(validate_config(bad), config_error);
  };
  expect_bad([](RunConfig& b) { b.k = 0; });
  expect_bad([](RunConfig& b) { b.restarts = 0; });
  expect_bad([](RunConfig& b) { b.threshold = 1.0; });
  expect_bad([](RunConfig& b) { b.threshold = -0.01; });
  expect_bad([](RunConfig& b) { b.tol = 0.0; });
  expect_bad([](RunConfig& b) { b.max_iter = 0; });
  expect_bad([](RunConfig& b) { b.method = "paa"; });
  expect_bad([](RunConfig& b) { b.format = "tsv"; });
  expect_bad([](RunConfig& b) { b.input_path.clear(); });
  expect_bad([](RunConfig& b) { b.out_dir.clear(); });
}

TEST_CASE("error kinds map to distinct exit codes") {
  CHECK(exit_code_for(config_error("x")) == 2);
  CHECK(exit_code_for(parse_error("x", 3)) == 3);
  CHECK(exit_code_for(schema_error("x")) == 3);
  CHECK(exit_code_for(code_error("x", 1)) == 3);
  CHECK(exit_code_for(cardinality_error("x")) == 4);
  CHECK(exit_code_for(stale_model_error("x")) == 5);
  CHECK(exit_code_for(io_error("x")) == 1);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("fitting writes the model, manifest and decoded profiles") {
  TempDir tmp("fit");
  std::ofstream(tmp.file("d.csv")) << toy_csv();
  RunConfig c = base_config(tmp, tmp.file("d.csv"));
  c.write_encoded = true;
  const auto art = run_fit(c);
  CHECK(art.method == "ada");
  CHECK(art.rss >= 0.0);
  REQUIRE(art.case_ids.size() == 3);

  const auto model = ordered_json::parse(read_file(c.out_dir + "/model.json"));
  CHECK(model["method"] == "ada");
  CHECK(model["k"] == 3);
  CHECK(model["case_ids"].size() == 3);
  CHECK(model["data_hash"] == fnv1a_hex(toy_csv()));
  CHECK(model["seed"] == 5);

  const auto manifest =
      ordered_json::parse(read_file(c.out_dir + "/manifest.json"));
  CHECK(manifest["command"] == "fit");
  CHECK(manifest["config"]["k"] == 3);
  CHECK(manifest["data_hash"] == model["data_hash"]);

  const std::string profiles = read_file(c.out_dir + "/profiles.csv");
  CHECK(profiles.rfind("profile,case,color,shape,risk\n", 0) == 0);
  CHECK(std::count(profiles.begin(), profiles.end(), '\n') == 4);

  const std::string encoded = read_file(c.out_dir + "/encoded.csv");
  CHECK(encoded.rfind("color=blue,color=green,color=red,"
                      "shape=circle,shape=square,risk=hi,risk=lo\n",
                      0) == 0);
  CHECK(std::count(encoded.begin(), encoded.end(), '\n') == 13);
}

TEST_CASE("reporting writes distances, coverage and the figure") {
  TempDir tmp("rep");
  std::ofstream(tmp.file("d.csv")) << toy_csv();
  RunConfig c = base_config(tmp, tmp.file("d.csv"));
  run_fit(c);
  const auto art = run_report(c);
  CHECK(art.method == "ada");
  CHECK(art.coverage_clean);  // archetypoid profiles are one-hot
  CHECK(art.total > 0);

  const std::string summary = read_file(c.out_dir + "/summary.csv");
  CHECK(summary.rfind("method,", 0) == 0);
  CHECK(summary.find("ada,") != std::string::npos);
  const std::string hamming = read_file(c.out_dir + "/hamming.csv");
  CHECK(std::count(hamming.begin(), hamming.end(), '\n') == 4);
  const std::string coverage = read_file(c.out_dir + "/coverage.csv");
  CHECK(std::count(coverage.begin(), coverage.end(), '\n') == 10);
  const std::string svg = read_file(c.out_dir + "/simplex.svg");
  CHECK(test_helpers::well_formed_xml(svg));
  const std::string points = read_file(c.out_dir + "/points.csv");
  CHECK(std::count(points.begin(), points.end(), '\n') == 13);
  // default coloring uses the last variable's labels
  CHECK(points.find(",hi\n") != std::string::npos);
  CHECK(points.find(",lo\n") != std::string::npos);
}

TEST_CASE("a changed input makes the model stale") {
  TempDir tmp("stale");
  std::ofstream(tmp.file("d.csv")) << toy_csv();
  RunConfig c = base_config(tmp, tmp.file("d.csv"));
  run_fit(c);
  std::ofstream(tmp.file("d.csv")) << toy_csv() << "red,circle,hi\n";
  CHECK_THROWS_AS(run_report(c), stale_model_error);
  CHECK_THROWS_AS(run_plot(c), stale_model_error);
}

TEST_CASE("reports honor an explicit model path") {
  TempDir tmp("mp");
  std::ofstream(tmp.file("d.csv")) << toy_csv();
  RunConfig c = base_config(tmp, tmp.file("d.csv"));
  c.model_path = tmp.file("elsewhere.json");
  run_fit(c);
  CHECK_NOTHROW(run_report(c));
  RunConfig miss = c;
  miss.model_path = tmp.file("nope.json");
  CHECK_THROWS_AS(run_report(miss), io_error);
}

TEST_CASE("continuous fits report through the same pipeline") {
  TempDir tmp("aa");
  std::ofstream(tmp.file("d.csv")) << toy_csv();
  RunConfig c = base_config(tmp, tmp.file("d.csv"));
  c.method = "aa";
  const auto fit = run_fit(c);
  CHECK(fit.method == "aa");
  CHECK(fit.case_ids.empty());
  const auto art = run_report(c);
  CHECK(art.method == "aa");
  const std::string profiles = read_file(c.out_dir + "/profiles.csv");
  // continuous profiles have no case ids
  CHECK(profiles.find("\n1,,") != std::string::npos);
}

TEST_CASE("excess archetypes fail before fitting") {
  TempDir tmp("card");
  std::ofstream(tmp.file("d.csv")) << toy_csv();
  RunConfig c = base_config(tmp, tmp.file("d.csv"));
  c.k = 13;
  CHECK_THROWS_AS(run_fit(c), cardinality_error);
}

TEST_CASE("unknown color variables are a configuration error") {
  TempDir tmp("color");
  std::ofstream(tmp.file("d.csv")) << toy_csv();
  RunConfig c = base_config(tmp, tmp.file("d.csv"));
  run_fit(c);
  c.color_by = "nope";
  CHECK_THROWS_AS(run_report(c), config_error);
  c.color_by = "color";
  CHECK_NOTHROW(run_report(c));
  const std::string points = read_file(c.out_dir + "/points.csv");
  CHECK(points.find(",red\n") != std::string::npos);
}

TEST_CASE("identical configs produce identical artifacts") {
  TempDir tmp("det");
  std::ofstream(tmp.file("d.csv")) << toy_csv();
  RunConfig a = base_config(tmp, tmp.file("d.csv"));
  a.out_dir = tmp.file("a");
  RunConfig b = base_config(tmp, tmp.file("d.csv"));
  b.out_dir = tmp.file("b");
  b.threads = 3;
  run_fit(a);
  run_fit(b);
  run_report(a);
  run_report(b);
  for (const char* f : {"profiles.csv", "summary.csv", "hamming.csv",
                        "coverage.csv", "simplex.svg", "points.csv"})
    CHECK(read_file(a.out_dir + "/" + f) == read_file(b.out_dir + "/" + f));
}

TEST_CASE("the credit file loads through the pipeline format switch") {
  TempDir tmp("ger");
  RunConfig c;
  c.input_path = NOMARCH_TEST_DATA_DIR "/german.data";
  c.format = "german-credit";
  c.method = "ada";
  c.k = 2;
  c.restarts = 1;
  c.seed = 1;
  c.threads = 1;
  c.out_dir = tmp.file("out");
  const auto art = run_fit(c);
  CHECK(art.case_ids.size() == 2);
  const std::string profiles = read_file(c.out_dir + "/profiles.csv");
  CHECK(profiles.rfind("profile,case,credit_purpose,employment_period,"
                       "personal_status_sex,job_situation,credit_risk\n",
                       0) == 0);
}
