#include "pcfqfc/io.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PCFQFC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string cfg(const char* name) {
  return std::string(PCFQFC_TEST_CONFIG_DIR) + "/" + name;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const char* tag) : path(fs::temp_directory_path() / tag) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* f) const { return (path / f).string(); }
};

} // namespace

TEST_SUITE("cli") {
  TEST_CASE("zdw at the nominal geometry") {
    const auto r = run("zdw -c " + cfg("nominal.json") + " --json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["lambda0_nm"].get<double>() - 1044.7) <= 15.0);
  }

  TEST_CASE("geometry override is echoed") {
    const auto r = run("zdw -c " + cfg("nominal.json") + " --geometry 2.2,0.36 --json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["geometry"]["pitch_um"] == 2.2);
    CHECK(j["geometry"]["hole_ratio"] == 0.36);
  }

  TEST_CASE("exit codes") {
    TempDir d("pcfqfc_cli_codes");
    {
      std::FILE* f = std::fopen((d / "bad.json").c_str(), "w");
      std::fputs("{\"schema_version\": 1, \"geometry\": {\"pitch_um\": }", f);
      std::fclose(f);
    }
    CHECK(run("zdw -c " + (d / "bad.json")).code == 2);
    CHECK(run("zdw -c " + cfg("nominal.json") + " --geometry 1.9,0.29").code == 4);
    CHECK(run("zdw -c " + cfg("nominal.json") + " --geometry 2.0,0.95").code == 3);
    CHECK(run("tune -c " + cfg("nominal.json") + " --q-range 910,810").code == 2);
    CHECK(run("tune -c " + cfg("nominal.json") + " -o /proc/forbidden/x.csv").code == 5);
    CHECK(run("simulate -c " + cfg("noise_only.json")).code == 2);
    CHECK(run("synth -c " + cfg("fitted.json")).code == 2);
    CHECK(run("no-such-command").code == 2);
  }

  TEST_CASE("tune at the operating settings") {
    TempDir d("pcfqfc_cli_tune");
    const auto r = run("tune -c " + cfg("fitted.json") + " --json -o " + (d / "t.csv"));
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["lambda_t_min_nm"].get<double>() <= 1226.0);
    CHECK(j["lambda_t_max_nm"].get<double>() >= 1408.0);
    CHECK(j["independent_bins"].get<long>() >= 150);
    const auto text = pcfqfc::io::read_text_file(d / "t.csv");
    CHECK(text.rfind("lambda_q_nm,lambda_t_nm,delta_beta_per_m,eta\n", 0) == 0);
    CHECK(text.back() == '\n');

    const auto one = run("tune -c " + cfg("fitted.json") + " --q-range 787,787 -o " + (d / "one.csv"));
    REQUIRE(one.code == 0);
    const auto row = pcfqfc::io::read_text_file(d / "one.csv");
    CHECK(row.substr(row.find('\n') + 1).rfind("787,1551,", 0) == 0);
    CHECK(row.substr(row.rfind(',') + 1) == "1\n");
  }

  TEST_CASE("synth then fit recovers the generator") {
    TempDir d("pcfqfc_cli_fit");
    const auto s = run("synth -c " + cfg("fitted.json") + " --truth 2.1044,0.3389,0.6 --seed 3 -o " +
                       (d / "obs.csv"));
    REQUIRE(s.code == 0);
    const auto f1 = run("fit -c " + cfg("fitted.json") + " " + (d / "obs.csv") + " -o " + (d / "a.json"));
    REQUIRE(f1.code == 0);
    const auto j = nlohmann::json::parse(pcfqfc::io::read_text_file(d / "a.json"));
    CHECK(j["pitch_um"].get<double>() == doctest::Approx(2.1044).epsilon(1e-3));
    CHECK(j["hole_ratio"].get<double>() == doctest::Approx(0.3389).epsilon(1e-3));
    CHECK(j["converged"] == true);
    const auto f2 = run("fit -c " + cfg("fitted.json") + " " + (d / "obs.csv") + " -o " + (d / "b.json"));
    REQUIRE(f2.code == 0);
    CHECK(pcfqfc::io::read_text_file(d / "a.json") == pcfqfc::io::read_text_file(d / "b.json"));

    {
      std::FILE* f = std::fopen((d / "few.csv").c_str(), "w");
      std::fputs("lambda_q_nm,depletion,sigma\n810,0.1,0.01\n820,0.1,0.01\n", f);
      std::fclose(f);
    }
    CHECK(run("fit -c " + cfg("fitted.json") + " " + (d / "few.csv")).code == 2);
  }

  TEST_CASE("simulate is reproducible and flags agreement") {
    TempDir d("pcfqfc_cli_sim");
    const std::string base = "simulate -c " + cfg("noise_only.json") + " --seed 11 --pulses 1e7 --out-dir ";
    const auto a = run(base + (d / "a"));
    const auto b = run(base + (d / "b"));
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(pcfqfc::io::read_text_file(d / "a/tallies.csv") ==
          pcfqfc::io::read_text_file(d / "b/tallies.csv"));
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["oracle_agreement"] == true);
    CHECK(std::abs(j["g2_unheralded"]["mc"].get<double>() - 1.0) <= 0.02);

    const auto ind = run("simulate -c " + cfg("independent.json") + " --seed 5 --pulses 1e7 --out-dir " +
                         (d / "c"));
    REQUIRE(ind.code == 0);
    const auto k = nlohmann::json::parse(ind.out);
    CHECK(std::abs(k["R_CA"]["mc"].get<double>() - 1.0) <= 0.05);
  }

  TEST_CASE("noise histogram and chain") {
    TempDir d("pcfqfc_cli_hist");
    const auto h = run("noise-hist -c " + cfg("noise_only.json") + " --seed 2 --pulses 1e6 -o " + (d / "h.csv"));
    REQUIRE(h.code == 0);
    const auto j = nlohmann::json::parse(h.out);
    CHECK(j["lifetime_ns"].get<double>() == doctest::Approx(10.0).epsilon(0.05));
    const auto c = run("chain");
    REQUIRE(c.code == 0);
    CHECK(nlohmann::json::parse(c.out)["total"].get<double>() == doctest::Approx(0.014784));
  }

  TEST_CASE("power scan writes the declared header") {
    TempDir d("pcfqfc_cli_power");
    const auto r = run("power-scan -c " + cfg("fitted.json") + " --points 11 -o " + (d / "p.csv"));
    REQUIRE(r.code == 0);
    const auto text = pcfqfc::io::read_text_file(d / "p.csv");
    CHECK(text.rfind("P_p_W,eta\n0,0\n", 0) == 0);
  }
}
