#pragma once

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "entscale/experiments/config.hpp"
#include "entscale/experiments/properties.hpp"
#include "entscale/experiments/report.hpp"
#include "entscale/fermion.hpp"
#include "entscale/spin.hpp"

namespace entscale::experiments {

enum ExitCode : int { kSuccess = 0, kConfigFailure = 1, kNumericalFailure = 2 };

namespace detail {

inline spin::LocalHamiltonian load_hamiltonian(const ExperimentConfig& c) {
  if (is_spin_preset(c.model)) return spin::build_hamiltonian(c.model, c.n);
  return parse_model_text(read_file(c.model)).hamiltonian();
}

inline PiecewiseSymbol load_symbol(const ExperimentConfig& c) {
  if (is_symbol_preset(c.symbol)) return fermion::symbol_preset(c.symbol);
  return parse_symbol_text(read_file(c.symbol));
}

inline std::vector<int> to_int(const std::vector<long>& v) { return {v.begin(), v.end()}; }

/// JSON has no inf/nan; those become null.
inline nlohmann::ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace detail

inline Report run_quench(const ExperimentConfig& c) {
  const spin::LocalHamiltonian h = detail::load_hamiltonian(c);
  const spin::EntropyCurve curve = spin::entropy_profile(h, c.t_grid, detail::to_int(c.m_list));
  Report r{c.experiment, {}, {}};
  double s_max = 0.0;
  for (const auto& row : curve.rows) {
    r.add(CsvRow() << row.t << row.m << row.entropy << row.s_max << row.eff_rank);
    s_max = std::max(s_max, row.entropy);
  }
  r.summary["max_entropy"] = s_max;
  r.summary["h_norm"] = h.h_norm();
  const int mid = c.n / 2;
  try {
    const spin::EnvelopeFit f = spin::entropy_envelope_fit(curve, mid, h.h_norm());
    r.summary["envelope"] = {{"m", mid}, {"c0", f.c0}, {"c1", f.c1}, {"r_squared", f.r_squared},
                             {"max_excess", f.max_excess}, {"points", f.points}};
  } catch (const PreconditionError& e) {
    r.summary["envelope"] = {{"m", mid}, {"skipped", e.what()}};
  }
  if (c.n <= spin::kMaxDenseSites && mid >= 3) {
    std::vector<std::pair<double, spin::SchmidtSpectrum>> spectra;
    const spin::QuenchEvolver ev(h);
    for (double t : c.t_grid) spectra.emplace_back(t, spin::schmidt_spectrum(ev.evolve(t), spin::CutPartition(c.n, mid)));
    try {
      const spin::TailFitReport tf = spin::schmidt_tail_fit(spectra);
      r.summary["schmidt_tail"] = {{"m", mid}, {"valid", tf.pooled_valid}, {"kappa", detail::num(tf.kappa)},
                                   {"v", tf.v}, {"r_squared", tf.r_squared}};
    } catch (const PreconditionError& e) {
      r.summary["schmidt_tail"] = {{"m", mid}, {"skipped", e.what()}};
    }
  }
  return r;
}

inline Report run_w_hierarchy(const ExperimentConfig& c) {
  const spin::LocalHamiltonian h = detail::load_hamiltonian(c);
  const spin::CutPartition cut(c.n, static_cast<int>(c.m_list.front()));
  const spin::PatchLadder ladder(h, cut, c.t_grid.front(), c.l_max);
  const spin::HierarchyReport rep = spin::w_hierarchy(h, cut, ladder);
  Report r{c.experiment, {}, {}};
  for (const auto& row : rep.rows) r.add(CsvRow() << row.l << row.w_deviation << row.lr_bound);
  r.summary["t"] = rep.t;
  r.summary["cut"] = rep.cut;
  r.summary["h_norm"] = rep.h_norm;
  r.summary["commutator_norm"] = rep.commutator_norm;
  r.summary["commutator_norm_k2"] = rep.commutator_norm_k2;
  r.summary["clipping_changes_m"] = rep.clipping_changes_m;
  r.summary["reassembly_error"] = rep.reassembly_error;
  r.summary["reassembled_full_patch"] = rep.reassembled_full_patch;
  r.summary["bound_violations"] = rep.violations();
  r.summary["bound_holds"] = rep.violations() == 0;
  int weyl_fail = 0;
  double weyl_worst = 0.0;
  for (const auto& s : spin::weyl_chain(h, cut, ladder)) {
    weyl_fail += s.weyl.holds ? 0 : 1;
    weyl_worst = std::max(weyl_worst, s.weyl.max_shift - s.weyl.bound);
  }
  r.summary["weyl_chain_violations"] = weyl_fail;
  r.summary["weyl_chain_worst_margin"] = weyl_worst;
  return r;
}

inline Report run_lightcone(const ExperimentConfig& c) {
  const spin::LocalHamiltonian h = detail::load_hamiltonian(c);
  const auto rows = spin::lightcone_probe(h, c.site, c.t_grid);
  Report r{c.experiment, {}, {}};
  double zero_time = 0.0;
  std::map<int, double> arrival;  // first t with commNorm > 0.1, per distance
  for (const auto& row : rows) {
    r.add(CsvRow() << row.t << row.d << row.comm_norm);
    if (row.t == 0.0 && row.d >= 1) zero_time = std::max(zero_time, row.comm_norm);
    if (row.comm_norm > 0.1 && !arrival.contains(row.d)) arrival[row.d] = std::abs(row.t);
  }
  r.summary["site"] = c.site;
  r.summary["max_offsite_at_t0"] = zero_time;
  nlohmann::ordered_json a = nlohmann::ordered_json::object();
  for (const auto& [d, t] : arrival) a[std::to_string(d)] = t;
  r.summary["arrival_time_threshold_0.1"] = a;
  return r;
}

inline Report run_kcheck(const ExperimentConfig& c) {
  const spin::LocalHamiltonian h = detail::load_hamiltonian(c);
  Report r{c.experiment, {}, {}};
  double max_diff = 0.0, min_fid = 1.0, min_gap = std::numeric_limits<double>::infinity();
  int degenerate = 0;
  nlohmann::ordered_json cluster = nlohmann::ordered_json::array();
  const bool xx = c.model == "xx";
  const CVector cs = xx ? spin::cluster_state(c.n) : CVector();
  for (double t : c.t_grid) {
    const spin::KCheckReport k = spin::k_hamiltonian_check(h, t);
    r.add(CsvRow() << t << k.spectrum_max_diff << k.ground_fidelity << k.first_order_residual);
    max_diff = std::max(max_diff, k.spectrum_max_diff);
    min_fid = std::min(min_fid, k.ground_fidelity);
    min_gap = std::min(min_gap, k.ground_gap);
    degenerate += k.degenerate_ground ? 1 : 0;
    if (xx) cluster.push_back({{"t", t}, {"fidelity", std::norm(cs.dot(k.ground_state))}});
  }
  r.summary["max_spectrum_diff"] = max_diff;
  r.summary["min_ground_fidelity"] = min_fid;
  r.summary["min_ground_gap"] = detail::num(min_gap);
  r.summary["degenerate_ground_rows"] = degenerate;
  if (xx) r.summary["cluster_state_fidelity"] = cluster;
  return r;
}

inline Report run_quasilocal(const ExperimentConfig& c) {
  const spin::LocalHamiltonian h = detail::load_hamiltonian(c);
  const spin::QuasilocalReport q = spin::quasilocality_decay(h, c.site, c.t_grid, detail::to_int(c.k_list));
  Report r{c.experiment, {}, {}};
  for (const auto& row : q.rows) r.add(CsvRow() << row.t << row.k << row.trunc_norm);
  r.summary["site"] = c.site;
  r.summary["c"] = q.c;
  r.summary["kappa"] = detail::num(q.kappa);
  r.summary["v"] = q.v;
  r.summary["r_squared"] = q.r_squared;
  r.summary["fitted_points"] = q.fitted_points;
  return r;
}

inline Report run_fermion_scaling(const ExperimentConfig& c) {
  const PiecewiseSymbol phi = detail::load_symbol(c);
  const fermion::ScalingReport s = fermion::fh_scaling_fit(phi, c.m_list);
  Report r{c.experiment, {}, {}};
  int monotone = 0;
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const auto& row = s.rows[i];
    r.add(CsvRow() << row.m << row.s_exact << row.d_det << row.log_abs_det);
    if (i > 0 && row.s_exact < s.rows[i - 1].s_exact - 1e-9) ++monotone;
  }
  r.summary["a"] = s.a;
  r.summary["b"] = s.b;
  r.summary["r_squared_entropy"] = s.r_squared_entropy;
  r.summary["d"] = s.d;
  r.summary["e"] = s.e;
  r.summary["r_squared_det"] = s.r_squared_det;
  r.summary["nonsingular_rows"] = s.nonsingular_rows;
  r.summary["bound_violations"] = s.bound_violations;
  r.summary["monotonicity_violations"] = monotone;
  r.summary["entropy_gain"] = s.rows.back().s_exact - s.rows.front().s_exact;
  return r;
}

inline Report run_ring_check(const ExperimentConfig& c) {
  const PiecewiseSymbol phi = detail::load_symbol(c);
  Report r{c.experiment, {}, {}};
  nlohmann::ordered_json zero = nlohmann::ordered_json::object();
  std::map<long, std::vector<double>> by_m;
  for (long n : c.n_list)
    for (long m : c.m_list) {
      const fermion::RingCheck rc = fermion::finite_ring_crosscheck(phi, n, m);
      r.add(CsvRow() << rc.n << rc.m << rc.max_deviation);
      zero[std::to_string(n)] = rc.zero_modes;
      by_m[m].push_back(rc.max_deviation);
    }
  bool decreasing = true;
  for (const auto& [m, devs] : by_m)
    for (std::size_t i = 1; i < devs.size(); ++i) decreasing = decreasing && devs[i] < devs[i - 1];
  r.summary["zero_modes"] = zero;
  r.summary["strictly_decreasing_in_listed_n_order"] = decreasing;
  return r;
}

inline Report run_property_suite(const ExperimentConfig& c) {
  Report r{c.experiment, {}, {}};
  long total = 0;
  for (const auto& p : property_suite(c.seed, c.trials)) {
    r.add(CsvRow() << p.property << p.trials << p.violations << p.worst);
    total += p.violations;
  }
  r.summary["total_violations"] = total;
  return r;
}

inline Report run_experiment(const ExperimentConfig& c) {
  if (c.experiment == "quench") return run_quench(c);
  if (c.experiment == "w-hierarchy") return run_w_hierarchy(c);
  if (c.experiment == "lightcone") return run_lightcone(c);
  if (c.experiment == "kcheck") return run_kcheck(c);
  if (c.experiment == "quasilocal") return run_quasilocal(c);
  if (c.experiment == "fermion-scaling") return run_fermion_scaling(c);
  if (c.experiment == "ring-check") return run_ring_check(c);
  if (c.experiment == "property-suite") return run_property_suite(c);
  throw ConfigError("unknown experiment '" + c.experiment + "'");
}

/// Resolves, runs and writes one experiment. Errors are reported on `err` and
/// mapped to exit codes: 1 for configuration problems, 2 for numerical failures.
inline int run(const std::string& experiment, const std::vector<Setting>& settings, std::ostream& err = std::cerr) {
  try {
    const ExperimentConfig c = resolve_config(experiment, settings);
    const auto start = std::chrono::steady_clock::now();
    const Report r = run_experiment(c);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_report(c, r, wall);
    return kSuccess;
  } catch (const ConfigError& e) {
    err << "entscale: config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const PreconditionError& e) {
    err << "entscale: invalid input: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const std::exception& e) {
    err << "entscale: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace entscale::experiments
