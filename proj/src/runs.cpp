#include "nng/runs.hpp"

#include "nng/format.hpp"
#include "nng/oracle.hpp"
#include "nng/quadrature.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace nng {

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string output_path(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.output_dir);
  return (std::filesystem::path(config.output_dir) / name).string();
}

std::string level_tag(const EigenSystem& eig, size_t k, size_t group) {
  const auto [first, last] = eig.level_range(k);
  return "L" + std::to_string(group) + ":" + std::to_string(k - first + 1) + "/" +
         std::to_string(last - first);
}

}  // namespace

Simulation prepare(const RunConfig& config) {
  return prepare(config, ElementTables::build(SingleParticleBasis()));
}

Simulation prepare(const RunConfig& config, const ElementTables& tables) {
  config.validate();
  Simulation sim;
  sim.config = config;
  sim.params = config.effective_params();
  sim.tables = tables;
  if (sim.tables.dim() != sim.basis.size())
    throw std::invalid_argument("prepare: element tables do not match the basis");
  HamiltonianOptions opts;
  opts.literal_cross_term = config.literal_cross_term;
  sim.hamiltonians = build_hamiltonians(sim.params, sim.basis, sim.tables, opts);
  sim.physical = diagonalize(sim.hamiltonians.h_ph);
  sim.total = diagonalize(sim.hamiltonians.h_tot);
  sim.initial = initial_metastate(sim.physical, config.state_selector);

  Real best = -1;
  for (size_t a = 0; a < sim.initial.state.dim(); ++a) {
    const Real w = abs(sim.initial.state.amplitudes(a));
    if (w > best) {
      best = w;
      sim.initial_m = meta_total_m(a, sim.basis, sim.indexer);
    }
  }
  return sim;
}

EvolveSeries simulate(const Simulation& sim) {
  const RunConfig& cfg = sim.config;
  const Propagator prop(sim.total, sim.initial.state, sim.params.hbar);
  const Eigen::MatrixXcd h_ph = sim.hamiltonians.h_ph.to_double();

  EvolveSeries s;
  s.active_modes = prop.active_modes();
  const size_t n = cfg.n_steps;
  for (auto* v : {&s.t, &s.s_ph, &s.s_hidden, &s.s_m, &s.e_exp, &s.e_exp_imag, &s.e_hidden,
                  &s.meta_norm})
    v->reserve(n);
  s.populations.reserve(n);

  for (size_t i = 0; i < n; ++i) {
    const double t = cfg.time_at(i);
    const MetaState psi = prop.at(t);
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-10)
      throw NumericalAssertionError("meta-norm drifted to " + format_double(norm) + " at t = " +
                                    format_double(t) + " s");
    const DensityMatrix rho = reduce_physical(psi, sim.indexer);
    const DensityMatrix rho_hidden = reduce_hidden(psi, sim.indexer);
    const DensityMatrix rho_m = reduce_single(psi, sim.indexer);

    s.t.push_back(t);
    s.meta_norm.push_back(norm);
    s.s_ph.push_back(von_neumann_entropy(rho));
    s.s_hidden.push_back(von_neumann_entropy(rho_hidden));
    s.s_m.push_back(von_neumann_entropy(rho_m));
    const std::complex<double> e = (rho.entries() * h_ph).trace();
    s.e_exp.push_back(e.real());
    s.e_exp_imag.push_back(e.imag());
    s.e_hidden.push_back((rho_hidden.entries() * h_ph).trace().real());
    s.populations.push_back(eigenstate_populations(rho, sim.physical));

    for (const DensityMatrix* r : {&rho, &rho_m}) {
      s.max_rho_hermiticity = std::max(s.max_rho_hermiticity, r->hermiticity_defect());
      s.max_rho_trace_defect = std::max(s.max_rho_trace_defect, r->trace_defect());
      s.min_rho_eigenvalue = std::min(s.min_rho_eigenvalue, r->eigenvalues().minCoeff());
    }
    s.max_m_leakage =
        std::max(s.max_m_leakage, weight_outside_m(psi, sim.initial_m, sim.basis, sim.indexer));
  }
  return s;
}

std::string levels_csv(const Simulation& sim) {
  std::string out = "index,energy_J,energy_hbar_omega,degeneracy_tag\n";
  const Real hw = Real(sim.params.hbar) * Real(sim.params.omega);
  size_t group = 0;
  for (size_t k = 0; k < sim.physical.dim(); ++k) {
    if (k == 0 || sim.physical.level_range(k).first == k) ++group;
    out += csv_row(std::vector<std::string>{
        std::to_string(k + 1), format_double(sim.physical.eigenvalue(k)),
        format_double(static_cast<double>(sim.physical.values(k) / hw)),
        level_tag(sim.physical, k, group)});
  }
  return out;
}

std::string entropy_csv(const EvolveSeries& s) {
  std::string out = "t_s,S_PH_kB,S_m_kB,E_exp_J,meta_norm\n";
  for (size_t i = 0; i < s.t.size(); ++i)
    out += csv_row(std::vector<double>{s.t[i], s.s_ph[i], s.s_m[i], s.e_exp[i], s.meta_norm[i]});
  return out;
}

std::string populations_csv(const EvolveSeries& s) {
  std::string out = "t_s";
  const size_t d = s.populations.empty() ? 0 : static_cast<size_t>(s.populations[0].size());
  for (size_t k = 1; k <= d; ++k) out += ",p_" + std::to_string(k);
  out += '\n';
  for (size_t i = 0; i < s.t.size(); ++i) {
    std::vector<double> row{s.t[i]};
    for (size_t k = 0; k < d; ++k) row.push_back(s.populations[i](k));
    out += csv_row(row);
  }
  return out;
}

std::string meta_text(const Simulation& sim, const EvolveSeries& s) {
  std::ostringstream out;
  out << "# configuration\n" << sim.config.echo();
  out << "# effective parameters after lambda\n"
      << "mu_eff = " << format_double(sim.params.mu) << '\n'
      << "l_s_eff = " << format_double(sim.params.l_s) << '\n'
      << "G_eff = " << format_double(sim.params.G) << '\n';
  out << "# spaces\n"
      << "physical_dim = " << sim.indexer.physical_dim() << '\n'
      << "meta_dim = " << sim.indexer.meta_dim() << '\n'
      << "exchange_symmetric_dim = " << exchange_symmetric_dim(sim.indexer) << '\n';
  out << "# initial state\n"
      << "selected_eigenvalue_J = " << format_double(sim.initial.energy) << '\n'
      << "selected_eigenvalue_hbar_omega = "
      << format_double(sim.initial.energy / sim.params.hbar_omega()) << '\n'
      << "selected_ascending_index = " << sim.initial.level_index + 1 << '\n'
      << "level_multiplicity = " << sim.initial.multiplicity << '\n'
      << "initial_total_m = " << sim.initial_m << '\n'
      << "active_eigenmodes = " << s.active_modes << '\n'
      << "tie_break = " << sim.initial.note << '\n';
  out << "# diagnostics\n"
      << "onset_estimate_s = " << format_double(sim.params.onset_time_estimate()) << '\n'
      << "max_S_PH_kB = "
      << format_double(s.s_ph.empty() ? 0.0 : *std::max_element(s.s_ph.begin(), s.s_ph.end()))
      << '\n';
  return out.str();
}

std::vector<ScaleCheckRow> scale_check(const RunConfig& config, const std::vector<double>& lambdas) {
  const ElementTables tables = ElementTables::build(SingleParticleBasis());
  const EvolveSeries reference = simulate(prepare(config, tables));
  std::vector<ScaleCheckRow> rows;
  for (double lambda : lambdas) {
    RunConfig scaled = config;
    scaled.lambda = config.lambda * lambda;
    const EvolveSeries s = lambda == 1.0 ? reference : simulate(prepare(scaled, tables));
    ScaleCheckRow row{lambda, 0.0, 0.0};
    for (size_t i = 0; i < s.t.size(); ++i) {
      row.max_dev_s_ph = std::max(row.max_dev_s_ph, std::abs(s.s_ph[i] - reference.s_ph[i]));
      row.max_dev_s_m = std::max(row.max_dev_s_m, std::abs(s.s_m[i] - reference.s_m[i]));
    }
    rows.push_back(row);
  }
  return rows;
}

std::string scalecheck_csv(const std::vector<ScaleCheckRow>& rows) {
  std::string out = "lambda,max_dev_S_PH,max_dev_S_m\n";
  for (const auto& r : rows) out += csv_row(std::vector<double>{r.lambda, r.max_dev_s_ph, r.max_dev_s_m});
  return out;
}

bool VerifyReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

std::string VerifyReport::text() const {
  std::string out = "# check computed oracle tolerance result detail\n";
  for (const auto& c : checks)
    out += c.name + ' ' + format_double(c.computed) + ' ' + format_double(c.oracle) + ' ' +
           format_double(c.tolerance) + ' ' + (c.pass ? "PASS" : "FAIL") +
           (c.detail.empty() ? "" : " " + c.detail) + '\n';
  out += std::string("# overall ") + (all_pass() ? "PASS" : "FAIL") + '\n';
  return out;
}

VerifyReport verify(const RunConfig& config, bool inject_fault) {
  config.validate();
  VerifyReport report;
  auto add = [&](std::string name, double computed, double oracle_value, double tol, bool pass,
                 std::string detail = "") {
    report.checks.push_back({std::move(name), computed, oracle_value, tol, pass, std::move(detail)});
  };

  // 3j symbols against the exact-rational oracle, all j <= 2.
  double worst_3j = 0.0;
  for (int j1 = 0; j1 <= 2; ++j1)
    for (int j2 = 0; j2 <= 2; ++j2)
      for (int j3 = 0; j3 <= 2; ++j3)
        for (int m1 = -j1; m1 <= j1; ++m1)
          for (int m2 = -j2; m2 <= j2; ++m2)
            for (int m3 = -j3; m3 <= j3; ++m3)
              worst_3j = std::max(worst_3j, std::abs(wigner_3j(j1, j2, j3, m1, m2, m3) -
                                                     oracle::racah_3j(j1, j2, j3, m1, m2, m3)));
  add("wigner_3j_vs_racah_max_abs_diff", worst_3j, 0.0, 1e-12, worst_3j <= 1e-12);

  // Angular factors and contact angular integrals against direct quadrature.
  const SingleParticleBasis basis;
  double worst_ang = 0.0, worst_quartic = 0.0;
  for (const auto& a : basis.states())
    for (const auto& b : basis.states())
      for (const auto& c : basis.states())
        for (const auto& d : basis.states()) {
          for (int l = 0; l <= 3; ++l)
            worst_ang = std::max(worst_ang, std::abs(angular_coulomb_factor(l, a, b, c, d) -
                                                     oracle::angular_quadrature(l, a, b, c, d)));
          double completeness = 0.0;
          for (int L = std::abs(a.l - c.l); L <= a.l + c.l; ++L)
            completeness += (2.0 * L + 1.0) / (4.0 * std::numbers::pi) *
                            angular_coulomb_factor(L, a, b, c, d);
          worst_quartic = std::max(
              worst_quartic, std::abs(completeness - oracle::quartic_angular_quadrature(a, b, c, d)));
        }
  add("angular_factor_vs_quadrature_max_abs_diff", worst_ang, 0.0, 1e-12, worst_ang <= 1e-12);
  add("contact_angular_vs_quadrature_max_abs_diff", worst_quartic, 0.0, 1e-12,
      worst_quartic <= 1e-12);

  // Radial normalization against the closed form for n = 0.
  double worst_norm = 0.0;
  for (int l = 0; l <= 1; ++l) {
    double double_factorial = 1.0;
    for (int k = 2 * l + 1; k > 1; k -= 2) double_factorial *= k;
    const double closed = std::sqrt(std::pow(2.0, l + 2) / (std::sqrt(std::numbers::pi) * double_factorial));
    worst_norm = std::max(worst_norm, std::abs(normalize_radial({0, l, 0}) / closed - 1.0));
  }
  add("radial_norm_vs_closed_form_max_rel_diff", worst_norm, 0.0, 1e-12, worst_norm <= 1e-12);

  // Element tables: Monte-Carlo 6-D integrals and the analytic ground value.
  ElementTables tables = ElementTables::build(basis);
  if (inject_fault) inject_asymmetry(tables);
  oracle::McOptions mc_opts;
  mc_opts.samples = config.mc_samples;
  mc_opts.seed = config.seed;
  const auto mc = oracle::mc_coulomb_table(basis, mc_opts);
  const double max_element = tables.coulomb.max_abs();
  double worst_z = 0.0, worst_sigma = 0.0;
  size_t outside = 0;
  const size_t d = basis.size();
  for (size_t e = 0; e < mc.size(); ++e) {
    const size_t i1 = e / (d * d * d), i2 = e / (d * d) % d, j1 = e / d % d, j2 = e % d;
    const double z = std::abs(tables.coulomb.value(i1, i2, j1, j2) - mc[e].value) / mc[e].std_error;
    worst_z = std::max(worst_z, z);
    worst_sigma = std::max(worst_sigma, mc[e].std_error);
    if (z > 3.0) ++outside;
  }
  add("coulomb_vs_montecarlo_max_z", worst_z, 0.0, 3.0, outside == 0,
      std::to_string(outside) + "_of_" + std::to_string(mc.size()) + "_outside_3sigma");
  add("montecarlo_sigma_over_max_element", worst_sigma / max_element, 0.0, 0.01,
      worst_sigma <= 0.01 * max_element);
  const double ground = tables.coulomb.value(0, 0, 0, 0);
  const double analytic = std::sqrt(2.0 / std::numbers::pi);
  add("ground_coulomb_vs_analytic_rel_diff", ground, analytic, 1e-3,
      std::abs(ground / analytic - 1.0) <= 1e-3);

  // Hermiticity of the tables and of the assembled meta-Hamiltonian.
  const double table_defect = tables.coulomb.hermiticity_defect();
  add("coulomb_table_hermiticity_defect", table_defect, 0.0, 1e-12 * max_element,
      table_defect <= 1e-12 * max_element);
  const PhysicalParams params = config.effective_params();
  HamiltonianOptions opts;
  opts.literal_cross_term = config.literal_cross_term;
  bool assembled = true;
  std::string assembly_note;
  Hamiltonians hams;
  try {
    hams = build_hamiltonians(params, basis, tables, opts);
  } catch (const AssemblyError& e) {
    assembled = false;
    assembly_note = "assembly_rejected";
  }
  add("h_tot_hermiticity_guard", assembled ? 0.0 : 1.0, 0.0, 0.0, assembled, assembly_note);

  // eta via the closed-form contact estimate.
  const double eta = params.eta();
  add("eta_contact_over_ground_energy", eta, 0.98, 0.01, std::abs(eta - 0.98) <= 0.01);

  if (assembled) {
    const MetaIndexer indexer(2, basis.size());
    const Real swap = swap_commutator_defect(hams.h_tot, indexer);
    const Real scale = hams.h_tot.max_abs();
    add("h_tot_swap_commutator_rel", static_cast<double>(swap / scale), 0.0, 1e-12,
        swap <= Real(1e-12) * scale);
    const Real leak = m_block_leakage(hams.h_tot, basis, indexer);
    add("h_tot_m_block_leakage_rel", static_cast<double>(leak / scale), 0.0, 1e-12,
        leak <= Real(1e-12) * scale);

    // Eigenbasis evolution against the matrix-exponential oracle.
    const EigenSystem physical = diagonalize(hams.h_ph);
    const EigenSystem total = diagonalize(hams.h_tot);
    const InitialState init = initial_metastate(physical, config.state_selector);
    const Propagator prop(total, init.state, params.hbar);
    double worst = 0.0;
    for (double frac : {0.025, 0.25, 0.5, 0.75, 1.0}) {
      const double t = frac * config.t_max;
      const MetaState a = prop.at(t);
      const MetaState b = oracle::expm_evolve(hams.h_tot.entries(), init.state, t, params.hbar);
      worst = std::max(worst, (a.to_double() - b.to_double()).norm());
    }
    add("evolution_vs_expm_max_norm_diff", worst, 0.0, 1e-8, worst <= 1e-8);
  }
  return report;
}

std::vector<std::string> run_levels(const RunConfig& config) {
  const Simulation sim = prepare(config);
  const std::string path = output_path(config, "levels.csv");
  write_file(path, levels_csv(sim));
  return {path};
}

std::vector<std::string> run_evolve(const RunConfig& config) {
  const Simulation sim = prepare(config);
  const EvolveSeries series = simulate(sim);
  const std::string entropy = output_path(config, "entropy.csv");
  const std::string pops = output_path(config, "populations.csv");
  const std::string meta = output_path(config, "meta.txt");
  write_file(entropy, entropy_csv(series));
  write_file(pops, populations_csv(series));
  write_file(meta, meta_text(sim, series));
  return {entropy, pops, meta};
}

std::vector<std::string> run_scale_check(const RunConfig& config, const std::vector<double>& lambdas) {
  const std::string path = output_path(config, "scalecheck.csv");
  write_file(path, scalecheck_csv(scale_check(config, lambdas)));
  return {path};
}

VerifyReport run_verify(const RunConfig& config, bool inject_fault) {
  VerifyReport report = verify(config, inject_fault);
  write_file(output_path(config, "verify.txt"), report.text());
  return report;
}

}  // namespace nng
