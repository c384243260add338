// nng_sim: energy levels, meta-state evolution, scaling check and oracle
// verification for two trapped particles with Newtonian coupling to hidden copies.

#include "nng/config.hpp"
#include "nng/evolve.hpp"
#include "nng/oracle.hpp"
#include "nng/quadrature.hpp"
#include "nng/runs.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerify = 4;

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<double> t_max;
  std::optional<size_t> steps;
  std::optional<size_t> state;
  std::optional<double> lambda;
  std::optional<uint64_t> seed;
  bool literal_cross_term = false;
  bool inject_fault = false;
};

nng::RunConfig resolve(const Overrides& o) {
  nng::RunConfig cfg = o.config_path.empty() ? nng::RunConfig{} : nng::load_config(o.config_path);
  if (o.out) cfg.output_dir = *o.out;
  if (o.t_max) cfg.t_max = *o.t_max;
  if (o.steps) cfg.n_steps = *o.steps;
  if (o.state) cfg.state_selector = *o.state;
  if (o.lambda) cfg.lambda = *o.lambda;
  if (o.seed) cfg.seed = *o.seed;
  if (o.literal_cross_term) cfg.literal_cross_term = true;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "key = value configuration file");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--t-max", o.t_max, "end of the time grid (s)");
  cmd->add_option("--steps", o.steps, "number of time samples");
  cmd->add_option("--state", o.state, "initial eigenstate, counted from the top (1..16)");
  cmd->add_option("--lambda", o.lambda, "scaling-family parameter");
  cmd->add_option("--seed", o.seed, "Monte-Carlo master seed");
  cmd->add_flag("--literal-cross-term", o.literal_cross_term,
                "couple physical a only to hidden b > a");
}

void print_paths(const std::vector<std::string>& paths) {
  for (const auto& p : paths) std::cout << "wrote " << p << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two trapped particles coupled to hidden copies by Newtonian gravity"};
  app.require_subcommand(1);
  Overrides o;

  auto* levels = app.add_subcommand("levels", "physical energy levels -> levels.csv");
  auto* evolve = app.add_subcommand("evolve", "entropy.csv, populations.csv, meta.txt");
  auto* scale = app.add_subcommand("scale-check", "scaling-family deviations -> scalecheck.csv");
  auto* verify = app.add_subcommand("verify", "oracle suite -> verify.txt");
  for (auto* cmd : {levels, evolve, scale, verify}) add_common(cmd, o);
  verify->add_flag("--inject-fault", o.inject_fault, "perturb one Coulomb element (negative test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const nng::RunConfig cfg = resolve(o);
    if (levels->parsed()) {
      print_paths(nng::run_levels(cfg));
    } else if (evolve->parsed()) {
      print_paths(nng::run_evolve(cfg));
    } else if (scale->parsed()) {
      print_paths(nng::run_scale_check(cfg));
    } else if (verify->parsed()) {
      const nng::VerifyReport report = nng::run_verify(cfg, o.inject_fault);
      std::cout << report.text();
      return report.all_pass() ? kExitOk : kExitVerify;
    }
  } catch (const nng::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nng::NumericalAssertionError& e) {
    std::cerr << "numerical assertion failed: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const nng::AssemblyError& e) {
    std::cerr << "numerical assertion failed: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const nng::DiagonalizationError& e) {
    std::cerr << "numerical assertion failed: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const nng::InvalidStateError& e) {
    std::cerr << "numerical assertion failed: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const nng::QuadratureError& e) {
    std::cerr << "numerical assertion failed: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const nng::oracle::ExpmError& e) {
    std::cerr << "numerical assertion failed: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
