#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <doctest.h>

#include "io/config.hpp"
#include "io/csv.hpp"
#include "io/svg.hpp"

using namespace algdiff;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("algdiff_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_CASE("csv round-trips doubles bit-exactly") {
  SimTrace tr;
  tr.set_time({0.0, 1e-3, 2e-3});
  tr.add_channel("a") = {1.0 / 3.0, -2.718281828459045e-17, 6.02214076e23};
  tr.add_channel("b") = {-0.0, 1.0000000000000002, 9.869604401089358};

  const std::string text = to_csv(tr);
  const SimTrace back = parse_csv(text);
  REQUIRE(back.names() == tr.names());
  CHECK(back.time() == tr.time());
  CHECK(back.channel("a") == tr.channel("a"));
  CHECK(back.channel("b") == tr.channel("b"));
  // second round trip is byte-identical
  CHECK(to_csv(back) == text);
}

TEST_CASE("csv file write and read") {
  const fs::path dir = temp_dir("csv");
  SimTrace tr;
  tr.set_time({0.0, 0.5});
  tr.add_channel("x") = {std::sqrt(2.0), std::acos(-1.0)};
  const fs::path file = dir / "t.csv";
  write_csv(tr, file.string());
  const SimTrace back = read_csv(file.string());
  CHECK(back.channel("x") == tr.channel("x"));
  CHECK_THROWS_AS((void)read_csv((dir / "absent.csv").string()), std::runtime_error);
}

TEST_CASE("csv parser rejects malformed input") {
  CHECK_THROWS_AS((void)parse_csv(""), std::runtime_error);
  CHECK_THROWS_AS((void)parse_csv("t,x\n0.0,abc\n"), std::runtime_error);
  CHECK_THROWS_AS((void)parse_csv("t,x\n0.0\n"), std::runtime_error);
}

TEST_CASE("svg emission is deterministic and plots every series") {
  SimTrace tr;
  tr.set_time({0.0, 1.0, 2.0, 3.0});
  tr.add_channel("ref") = {0.0, 1.0, 0.5, 0.25};
  tr.add_channel("out") = {0.1, 0.9, 0.55, 0.2};
  const std::vector<SvgSeries> series{{"ref", "reference", true, "#000000"},
                                      {"out", "output", false, "#2355a4"}};
  const SvgStyle style{860, 480, "tracking"};
  const std::string a = emit_svg(tr, series, style);
  const std::string b = emit_svg(tr, series, style);
  CHECK(a == b);
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("reference") != std::string::npos);
  CHECK(a.find("output") != std::string::npos);
  CHECK(a.find("tracking") != std::string::npos);
  // one polyline per series
  std::size_t count = 0;
  for (std::size_t pos = a.find("<polyline"); pos != std::string::npos;
       pos = a.find("<polyline", pos + 1))
    ++count;
  CHECK(count == 2);
}

TEST_CASE("svg skips rows with non-finite values") {
  SimTrace tr;
  tr.set_time({0.0, 1.0, 2.0});
  tr.add_channel("x") = {1.0, std::nan(""), 2.0};
  const std::string s = emit_svg(tr, {{"x", "x", false, "#000000"}}, {400, 300, ""});
  CHECK(s.find("nan") == std::string::npos);
  CHECK(s.find("<polyline") != std::string::npos);
}

TEST_CASE("scenario runner writes its artifacts with resolved config") {
  const fs::path dir = temp_dir("simdir");
  const std::string metrics = simulate_to_dir(
      "twotank", R"({"horizon": 1.0, "sigma": 0.0, "seed": 5})", {}, dir.string());
  CHECK(fs::exists(dir / "trace.csv"));
  CHECK(fs::exists(dir / "metrics.json"));
  CHECK(fs::exists(dir / "output_vs_reference.svg"));
  CHECK(slurp(dir / "metrics.json") == metrics);
  // resolved config materializes defaults alongside the overrides
  CHECK(metrics.find("\"seed\": 5") != std::string::npos);
  CHECK(metrics.find("\"fault_time\"") != std::string::npos);
  CHECK(metrics.find("\"monitor\"") != std::string::npos);
}

TEST_CASE("config validation rejects unknown scenarios keys and types") {
  const fs::path dir = temp_dir("cfgerr");
  CHECK_THROWS_AS((void)simulate_to_dir("warp", "", {}, dir.string()),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)simulate_to_dir("twotank", R"({"horizon": 1.0, "typo": 3})", {}, dir.string()),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)simulate_to_dir("twotank", R"({"horizon": "long"})", {}, dir.string()),
      std::invalid_argument);
  CHECK_THROWS_AS((void)simulate_to_dir("twotank", "{not json", {}, dir.string()),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)simulate_to_dir("twotank", R"({"estimator": {"order": 2, "typo": 1}})", {},
                            dir.string()),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)simulate_to_dir("rigidbody", R"({"primary": "imagined"})", {}, dir.string()),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)simulate_to_dir("twotank", R"({"x0": [1.0]})", {}, dir.string()),
      std::invalid_argument);
}

TEST_CASE("seed override takes precedence over the config document") {
  const fs::path da = temp_dir("ovr_a"), db = temp_dir("ovr_b");
  SimulateOverrides ovr;
  ovr.seed = 9;
  const std::string ma = simulate_to_dir(
      "twotank", R"({"horizon": 1.0, "seed": 5})", ovr, da.string());
  CHECK(ma.find("\"seed\": 9") != std::string::npos);
  ovr.accommodation = false;
  const std::string mb = simulate_to_dir(
      "twotank", R"({"horizon": 1.0, "seed": 5})", ovr, db.string());
  CHECK(mb.find("\"accommodation\": false") != std::string::npos);
}

TEST_CASE("streaming differentiation of a csv column") {
  const fs::path dir = temp_dir("diff");
  SimTrace in;
  std::vector<double> t;
  for (int i = 0; i <= 2000; ++i) t.push_back(i * 1e-3);
  in.set_time(t);
  auto& x = in.add_channel("x");
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::sin(t[i]);
  const fs::path src = dir / "in.csv", dst = dir / "out.csv";
  write_csv(in, src.string());

  diff_csv(src.string(), "x", 2, 0, 0.2, true, true, dst.string());
  const SimTrace out = read_csv(dst.string());
  REQUIRE(out.has("d0"));
  REQUIRE(out.has("d1"));
  REQUIRE(out.has("d2"));
  REQUIRE(out.has("fd_d1"));
  const auto& at = out.time();
  const auto& d1 = out.channel("d1");
  double worst = 0.0;
  for (std::size_t i = 0; i < at.size(); ++i)
    worst = std::max(worst, std::abs(d1[i] - std::cos(at[i])));
  CHECK(worst < 1e-2);  // N = 2 window truncation

  CHECK_THROWS_AS(diff_csv(src.string(), "absent", 2, 0, 0.2, true, false, dst.string()),
                  std::invalid_argument);
}
