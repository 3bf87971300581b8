#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "algdiff/algdiff.h"

namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("algdiff_capi_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("kernel handle estimates a cubic exactly") {
  ad_kernel* k = nullptr;
  REQUIRE(ad_kernel_create(3, 0, 0.5, 1e-3, &k) == AD_OK);
  REQUIRE(k != nullptr);
  const int m = ad_kernel_sample_count(k);
  CHECK(m == 501);

  // x(t) = 1 + 2t - t^2 + 0.5 t^3 on the window
  std::vector<double> samples(m);
  for (int i = 0; i < m; ++i) {
    const double t = i * 1e-3;
    samples[i] = 1.0 + 2.0 * t - t * t + 0.5 * t * t * t;
  }
  double d[4] = {};
  REQUIRE(ad_kernel_estimate(k, samples.data(), samples.size(), d) == AD_OK);
  CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(d[2] == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(d[3] == doctest::Approx(3.0).epsilon(1e-7));

  // wrong sample count is an input error with a message
  CHECK(ad_kernel_estimate(k, samples.data(), 7, d) == AD_EINVAL);
  CHECK(std::strlen(ad_last_error()) > 0);
  ad_kernel_destroy(k);
}

TEST_CASE("kernel creation rejects invalid configuration") {
  ad_kernel* k = reinterpret_cast<ad_kernel*>(0x1);
  CHECK(ad_kernel_create(-1, 0, 0.5, 1e-3, &k) == AD_EINVAL);
  CHECK(k == nullptr);
  CHECK(ad_kernel_create(2, 0, -0.5, 1e-3, &k) == AD_EINVAL);
  CHECK(ad_kernel_create(2, 2, 0.5, 1e-3, &k) == AD_EINVAL);  // integral order too low
  CHECK(ad_kernel_create(2, 0, 0.5, 1e-3, nullptr) == AD_EINVAL);
  ad_kernel_destroy(nullptr);  // must be a no-op
  CHECK(ad_kernel_sample_count(nullptr) == 0);
}

TEST_CASE("stream handle warms up then reports anchored derivatives") {
  ad_kernel* k = nullptr;
  REQUIRE(ad_kernel_create(2, 0, 0.2, 1e-3, &k) == AD_OK);
  ad_stream* s = nullptr;
  REQUIRE(ad_stream_create(k, 1, &s) == AD_OK);

  const int m = ad_kernel_sample_count(k);
  double d[3] = {};
  double anchor = -1.0;
  int ready = -1;
  int warmup = 0;
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double t = i * 1e-3;
    REQUIRE(ad_stream_push(s, t, std::sin(t), d, &anchor, &ready) == AD_OK);
    if (!ready) {
      ++warmup;
      continue;
    }
    CHECK(anchor == t);  // time-reversed estimates refer to the newest sample
    if (t > 0.5) worst = std::max(worst, std::abs(d[1] - std::cos(t)));
  }
  CHECK(warmup == m - 1);
  CHECK(worst < 1e-2);  // N = 2 window truncation

  CHECK(ad_stream_push(s, 1.0, 0.0, d, &anchor, &ready) == AD_EINVAL);  // time reuse
  CHECK(ad_stream_push(nullptr, 0.0, 0.0, d, &anchor, &ready) == AD_EINVAL);
  ad_stream_destroy(s);
  CHECK(ad_stream_create(nullptr, 0, &s) == AD_EINVAL);
  ad_kernel_destroy(k);
}

TEST_CASE("csv differentiation through the c api") {
  const fs::path dir = temp_dir("diff");
  const fs::path src = dir / "in.csv", dst = dir / "out.csv";
  {
    std::ofstream f(src);
    f << "t,x\n";
    for (int i = 0; i <= 1500; ++i) {
      const double t = i * 1e-3;
      f << t << "," << (t * t) << "\n";
    }
  }
  REQUIRE(ad_diff_csv(src.string().c_str(), "x", 2, 0, 0.3, 1, 1,
                      dst.string().c_str()) == AD_OK);
  std::ifstream f(dst);
  std::string header;
  REQUIRE(std::getline(f, header));
  CHECK(header.find("d1") != std::string::npos);
  CHECK(header.find("fd_d1") != std::string::npos);

  CHECK(ad_diff_csv(src.string().c_str(), "absent", 2, 0, 0.3, 1, 0,
                    dst.string().c_str()) == AD_EINVAL);
  CHECK(ad_diff_csv((dir / "nothere.csv").string().c_str(), "x", 2, 0, 0.3, 1, 0,
                    dst.string().c_str()) == AD_ERUNTIME);
  CHECK(ad_diff_csv(nullptr, "x", 2, 0, 0.3, 1, 0, dst.string().c_str()) == AD_EINVAL);
}

TEST_CASE("scenario simulation through the c api") {
  const fs::path dir = temp_dir("sim");
  char* metrics = nullptr;
  REQUIRE(ad_simulate("twotank", R"({"horizon": 1.0, "sigma": 0.0})", 7, -1, -1,
                      dir.string().c_str(), &metrics) == AD_OK);
  REQUIRE(metrics != nullptr);
  const std::string m(metrics);
  ad_string_free(metrics);
  CHECK(m.find("\"seed\": 7") != std::string::npos);
  CHECK(m.find("\"metrics\"") != std::string::npos);
  CHECK(fs::exists(dir / "trace.csv"));
  CHECK(fs::exists(dir / "metrics.json"));

  // metrics output is optional
  const fs::path dir2 = temp_dir("sim2");
  CHECK(ad_simulate("twotank", R"({"horizon": 1.0})", -1, 0, -1,
                    dir2.string().c_str(), nullptr) == AD_OK);

  CHECK(ad_simulate("warp", nullptr, -1, -1, -1, dir.string().c_str(), nullptr) ==
        AD_EINVAL);
  CHECK(std::strlen(ad_last_error()) > 0);
  CHECK(ad_simulate("twotank", R"({"typo": 1})", -1, -1, -1, dir.string().c_str(),
                    nullptr) == AD_EINVAL);
  CHECK(ad_simulate(nullptr, nullptr, -1, -1, -1, dir.string().c_str(), nullptr) ==
        AD_EINVAL);
}
