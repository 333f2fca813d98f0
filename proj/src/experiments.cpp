#include "savwave/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace savwave {

Field restrict_spectral(const Field& fine, const Grid& coarse) {
  const Grid& fg = fine.grid();
  if (fg.xmin() != coarse.xmin() || fg.xmax() != coarse.xmax() || fg.ymin() != coarse.ymin() ||
      fg.ymax() != coarse.ymax())
    throw StudyError("spectral restriction needs grids on the same domain");
  if (coarse.n() > fg.n()) throw StudyError("spectral restriction needs a finer source grid");
  if (coarse == fg) return fine;

  const Spectrum fs = forward(fine);
  Spectrum cs(coarse);
  const int half = coarse.n() / 2;
  for (int s = -half; s < half; ++s)
    for (int l = -half; l < half; ++l) cs.at_mode(s, l) = fs.at_mode(s, l);
  // The coarse Nyquist modes carry only one of +-n/2, so the inverse has an
  // imaginary part; its real part is the projection onto real fields.
  return inverse(cs);
}

ErrorRow compute_errors(const SavState& sol, double sol_time, const SavState& ref,
                        double ref_time, const Problem& p) {
  if (std::abs(sol_time - ref_time) > 1e-12 * std::max(1.0, std::abs(ref_time)))
    throw StudyError("cannot compare states at t = " + std::to_string(sol_time) + " and t = " +
                     std::to_string(ref_time));
  const Grid& g = sol.u.grid();
  const Field eu = sol.u - restrict_spectral(ref.u, g);
  const Field ev = sol.v - restrict_spectral(ref.v, g);

  ErrorRow row;
  row.e_u_inf = linf_norm(eu);
  row.e_v_inf = linf_norm(ev);
  row.e_r = std::abs(sol.R - ref.R);
  row.e_u_seminorm = seminorm(eu, 0.5 * p.alpha);
  row.e_u_l2 = l2_norm(eu);
  row.e_v_l2 = l2_norm(ev);
  return row;
}

double observed_rate(double e_coarse, double e_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0))
    throw StudyError("convergence rate needs two positive errors");
  return std::log2(e_coarse / e_fine);
}

namespace {

std::optional<double> maybe_rate(double coarse, double fine) {
  if (coarse > 0.0 && fine > 0.0) return observed_rate(coarse, fine);
  return std::nullopt;
}

int steps_for(const Problem& p, double tau) { return step_count(p.T, tau); }

}  // namespace

void fill_rates(std::vector<ErrorRow>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const ErrorRow& a = rows[k - 1];
    ErrorRow& b = rows[k];
    b.rate_u = maybe_rate(a.e_u_inf, b.e_u_inf);
    b.rate_v = maybe_rate(a.e_v_inf, b.e_v_inf);
    b.rate_r = maybe_rate(a.e_r, b.e_r);
    b.rate_semi = maybe_rate(a.e_u_seminorm, b.e_u_seminorm);
    b.rate_u_l2 = maybe_rate(a.e_u_l2, b.e_u_l2);
    b.rate_v_l2 = maybe_rate(a.e_v_l2, b.e_v_l2);
  }
}

std::vector<ErrorRow> temporal_study(const StudyConfig& cfg) {
  const Problem& p = cfg.problem;
  p.validate();
  if (cfg.tau_list.empty()) throw StudyError("temporal study needs at least one tau");
  if (cfg.k_ref < 1) throw StudyError("k_ref must be positive");
  const double tau_ref = p.T / cfg.k_ref;
  for (double tau : cfg.tau_list) {
    if (!(tau >= tau_ref)) throw StudyError("reference time step must not exceed any tested tau");
    steps_for(p, tau);
  }

  const RunResult ref = run(p, cfg.example, tau_ref);
  const double ref_time = ref.final_state.n * tau_ref;

  std::vector<ErrorRow> rows;
  for (double tau : cfg.tau_list) {
    const RunResult sol = run(p, cfg.example, tau);
    ErrorRow row = compute_errors(sol.final_state, sol.final_state.n * tau, ref.final_state,
                                  ref_time, p);
    row.param = tau;
    rows.push_back(row);
  }
  fill_rates(rows);
  return rows;
}

std::vector<ErrorRow> spatial_study(const StudyConfig& cfg) {
  const Problem& base = cfg.problem;
  base.validate();
  if (cfg.n_list.empty()) throw StudyError("spatial study needs at least one N");
  if (cfg.k_ref < 1) throw StudyError("k_ref must be positive");
  for (int n : cfg.n_list)
    if (n > cfg.n_ref) throw StudyError("reference grid must be at least as fine as every N");

  auto on_grid = [&](int n) {
    Problem p = base;
    p.grid = Grid(n, base.grid.xmin(), base.grid.xmax(), base.grid.ymin(), base.grid.ymax());
    return p;
  };
  const double tau = base.T / cfg.k_ref;

  const Problem ref_problem = on_grid(cfg.n_ref);
  const RunResult ref = run(ref_problem, cfg.example, tau);
  const double t_end = ref.final_state.n * tau;

  std::vector<ErrorRow> rows;
  for (int n : cfg.n_list) {
    const Problem p = on_grid(n);
    const RunResult sol = run(p, cfg.example, tau);
    ErrorRow row = compute_errors(sol.final_state, sol.final_state.n * tau, ref.final_state,
                                  t_end, p);
    row.param = n;
    rows.push_back(row);
  }
  fill_rates(rows);
  return rows;
}

EnergyLedger summarize_ledger(double gamma1, double gamma2, std::vector<EnergyRecord> records) {
  EnergyLedger ledger;
  ledger.gamma1 = gamma1;
  ledger.gamma2 = gamma2;
  if (!records.empty()) {
    const double h0 = records.front().H;
    const double scale = h0 != 0.0 ? std::abs(h0) : 1.0;
    for (std::size_t k = 0; k < records.size(); ++k) {
      ledger.max_relative_drift =
          std::max(ledger.max_relative_drift, std::abs(records[k].H - h0) / scale);
      if (k == 0) continue;
      const double increase = records[k].H - records[k - 1].H;
      ledger.max_relative_increase = std::max(ledger.max_relative_increase, increase / scale);
      if (increase > 1e-12 * scale) ledger.monotone = false;
      const double defect = std::abs(-increase - records[k].dissipation_rhs);
      ledger.max_identity_defect = std::max(ledger.max_identity_defect, defect / scale);
    }
  }
  ledger.records = std::move(records);
  return ledger;
}

std::vector<EnergyLedger> energy_study(const Problem& p, Example which, double tau,
                                       const std::vector<std::pair<double, double>>& gammas) {
  if (gammas.empty()) throw StudyError("energy study needs at least one (gamma1, gamma2) pair");
  std::vector<EnergyLedger> out;
  for (const auto& [g1, g2] : gammas) {
    Problem q = p;
    q.gamma1 = g1;
    q.gamma2 = g2;
    RunResult r = run(q, which, tau);
    out.push_back(summarize_ledger(g1, g2, std::move(r.ledger)));
  }
  return out;
}

}  // namespace savwave
