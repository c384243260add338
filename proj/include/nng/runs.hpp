#pragma once

#include "nng/basis.hpp"
#include "nng/config.hpp"
#include "nng/evolve.hpp"
#include "nng/hamiltonian.hpp"
#include "nng/integrals.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace nng {

/// A structural invariant failed during a run (exit status 3).
class NumericalAssertionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything fixed before time stepping: operators, spectra, initial state.
struct Simulation {
  RunConfig config;
  PhysicalParams params;  // effective, after lambda
  SingleParticleBasis basis;
  MetaIndexer indexer{2, 4};
  ElementTables tables;
  Hamiltonians hamiltonians;
  EigenSystem physical;
  EigenSystem total;
  InitialState initial;
  int initial_m = 0;  // total magnetic number of the initial meta-state
};

Simulation prepare(const RunConfig& config);
/// Reuses element tables (they do not depend on the physical parameters).
Simulation prepare(const RunConfig& config, const ElementTables& tables);

struct EvolveSeries {
  std::vector<double> t;
  std::vector<double> s_ph, s_hidden, s_m;  // k_B
  std::vector<double> e_exp, e_exp_imag, e_hidden;  // J
  std::vector<double> meta_norm;
  std::vector<Eigen::VectorXd> populations;
  // worst values over the run
  double max_rho_hermiticity = 0.0;
  double max_rho_trace_defect = 0.0;
  double min_rho_eigenvalue = 0.0;
  double max_m_leakage = 0.0;
  size_t active_modes = 0;
};

/// Samples the configured time grid in order. Throws NumericalAssertionError
/// if the meta-norm drifts by more than 1e-10.
EvolveSeries simulate(const Simulation& sim);

std::string levels_csv(const Simulation& sim);
std::string entropy_csv(const EvolveSeries& series);
std::string populations_csv(const EvolveSeries& series);
std::string meta_text(const Simulation& sim, const EvolveSeries& series);

struct ScaleCheckRow {
  double lambda;
  double max_dev_s_ph;
  double max_dev_s_m;
};

std::vector<ScaleCheckRow> scale_check(const RunConfig& config, const std::vector<double>& lambdas);
std::string scalecheck_csv(const std::vector<ScaleCheckRow>& rows);

struct VerifyCheck {
  std::string name;
  double computed;
  double oracle;
  double tolerance;  // sigma-scaled or absolute, as the check states
  bool pass;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
  std::string text() const;
};

/// Runs the oracle suite. With inject_fault, one Coulomb element is perturbed
/// so that the hermiticity checks must fail.
VerifyReport verify(const RunConfig& config, bool inject_fault = false);

/// File-writing front ends; each returns the paths written.
std::vector<std::string> run_levels(const RunConfig& config);
std::vector<std::string> run_evolve(const RunConfig& config);
std::vector<std::string> run_scale_check(const RunConfig& config,
                                         const std::vector<double>& lambdas = {0.1, 1.0, 10.0});
/// Writes verify.txt and returns the report.
VerifyReport run_verify(const RunConfig& config, bool inject_fault = false);

}  // namespace nng
