#include "nng/config.hpp"
#include "nng/format.hpp"
#include "nng/runs.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace nng;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

size_t line_count(const std::string& s) { return static_cast<size_t>(std::count(s.begin(), s.end(), '\n')); }

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("nng_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

RunConfig free_config() {
  RunConfig cfg;
  cfg.params.G = 0.0;
  cfg.n_steps = 5;
  return cfg;
}

}  // namespace

TEST_CASE("format_double") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(4e12) == "4000000000000");
  CHECK(csv_row(std::vector<std::string>{"a", "b"}) == "a,b\n");
}

TEST_CASE("config defaults") {
  const RunConfig cfg = parse("");
  CHECK(cfg.state_selector == 2);
  CHECK(cfg.t_max == 4e12);
  CHECK(cfg.n_steps == 2000);
  CHECK(cfg.seed == 12345);
  CHECK(cfg.params.G == constants::default_G);
  CHECK(cfg.time_at(0) == 0.0);
  CHECK(cfg.time_at(1999) == 4e12);
}

TEST_CASE("config keys and g_scale") {
  const RunConfig a = parse("# comment\ng_scale = 1e5\nstate = 4  # trailing\nliteral_cross_term = true\n");
  CHECK(a.params.G == doctest::Approx(constants::G_newton * 1e5).epsilon(1e-15));
  CHECK(a.state_selector == 4);
  CHECK(a.literal_cross_term);
  const RunConfig b = parse("G = 2\ng_scale = 3\n");
  CHECK(b.params.G == 6.0);
}

TEST_CASE("config errors carry the line number") {
  const auto message = [](const std::string& text) {
    try {
      parse(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("t_max = 1\nn_steps = 1\n").find("test.cfg:2") != std::string::npos);
  CHECK(message("bogus = 1\n").find("test.cfg:1: unknown key") != std::string::npos);
  CHECK(message("mu = 1\nmu = 2\n").find("duplicate") != std::string::npos);
  CHECK(message("omega = fast\n").find("test.cfg:1") != std::string::npos);
  CHECK(message("state = 17\n").find("state") != std::string::npos);
  CHECK(message("no equals sign\n").find("key = value") != std::string::npos);
  CHECK(message("seed =\n").find("no value") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.cfg"), ConfigError);
}

TEST_CASE("config echo round trips") {
  RunConfig cfg;
  cfg.state_selector = 5;
  cfg.t_max = 1.25e12;
  cfg.lambda = 10.0;
  cfg.literal_cross_term = true;
  const RunConfig back = parse(cfg.echo());
  CHECK(back.echo() == cfg.echo());
}

TEST_CASE("levels at zero coupling and determinism") {
  RunConfig cfg = free_config();
  cfg.params.l_s = 0.0;
  const std::string csv = levels_csv(prepare(cfg));
  CHECK(first_line(csv) == "index,energy_J,energy_hbar_omega,degeneracy_tag");
  CHECK(line_count(csv) == 17);
  CHECK(csv.find(",3,L1:1/1\n") != std::string::npos);
  CHECK(csv.find(",5,L3:9/9\n") != std::string::npos);

  const RunConfig defaults;
  CHECK(levels_csv(prepare(defaults)) == levels_csv(prepare(defaults)));
}

TEST_CASE("run_levels writes identical bytes on repeat") {
  RunConfig cfg;
  cfg.output_dir = scratch_dir("levels").string();
  const auto paths = run_levels(cfg);
  REQUIRE(paths.size() == 1);
  const std::string first = slurp(paths[0]);
  run_levels(cfg);
  CHECK(slurp(paths[0]) == first);
  std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("evolve outputs") {
  RunConfig cfg = free_config();
  cfg.output_dir = scratch_dir("evolve").string();
  const auto paths = run_evolve(cfg);
  REQUIRE(paths.size() == 3);
  const std::string entropy = slurp(std::filesystem::path(cfg.output_dir) / "entropy.csv");
  const std::string pops = slurp(std::filesystem::path(cfg.output_dir) / "populations.csv");
  const std::string meta = slurp(std::filesystem::path(cfg.output_dir) / "meta.txt");
  CHECK(first_line(entropy) == "t_s,S_PH_kB,S_m_kB,E_exp_J,meta_norm");
  CHECK(line_count(entropy) == 6);
  CHECK(first_line(pops).rfind("t_s,p_1,", 0) == 0);
  CHECK(first_line(pops).find(",p_16") != std::string::npos);
  CHECK(meta.find("meta_dim = 256") != std::string::npos);
  CHECK(meta.find("exchange_symmetric_dim = 136") != std::string::npos);
  CHECK(meta.find("tie_break = ") != std::string::npos);

  const EvolveSeries s = simulate(prepare(cfg));
  for (double x : s.s_ph) CHECK(x < 1e-10);
  for (double n : s.meta_norm) CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
  std::filesystem::remove_all(cfg.output_dir);
}

TEST_CASE("scale check at lambda = 1 is exactly zero") {
  RunConfig cfg;
  cfg.n_steps = 20;
  const auto rows = scale_check(cfg, {1.0});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].max_dev_s_ph == 0.0);
  CHECK(rows[0].max_dev_s_m == 0.0);
  CHECK(first_line(scalecheck_csv(rows)) == "lambda,max_dev_S_PH,max_dev_S_m");
}

TEST_CASE("verify passes and a planted fault is caught") {
  const RunConfig cfg;
  const VerifyReport good = verify(cfg);
  CHECK(good.all_pass());
  CHECK(good.text().find("# overall PASS") != std::string::npos);

  const VerifyReport bad = verify(cfg, true);
  CHECK_FALSE(bad.all_pass());
  CHECK(bad.text().find("assembly_rejected") != std::string::npos);
}
