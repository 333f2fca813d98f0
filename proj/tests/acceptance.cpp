// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "savwave/experiments.hpp"
#include "savwave/sav_stepper.hpp"

using namespace savwave;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED(" << what << ")";
    }
  }
};

double g_max_residual = 0.0;
int g_checked_runs = 0;

RunResult tracked_run(const Problem& p, Example which, double tau) {
  RunResult r = run(p, which, tau);
  g_max_residual = std::max(g_max_residual, r.max_residual);
  ++g_checked_runs;
  return r;
}

void identity_and_conservation(Verdict& v, double alpha, bool identity, bool conservation) {
  if (identity) {
    const Problem p = example_problem(Example::Example1, 64, alpha, 1.0, 1.0);
    const RunResult r = tracked_run(p, Example::Example1, 0.01);
    const EnergyLedger l = summarize_ledger(1.0, 1.0, r.ledger);
    v.detail << " alpha=" << alpha << " identity defect/H0=" << l.max_identity_defect;
    v.require(l.max_identity_defect <= 1e-10, "identity");
    v.require(r.ledger.size() == 101, "step count");
  }
  if (conservation) {
    Problem p = example_problem(Example::Example1, 64, alpha, 0.0, 0.0);
    p.T = 10.0;
    const RunResult r = tracked_run(p, Example::Example1, 0.01);
    const EnergyLedger l = summarize_ledger(0.0, 0.0, r.ledger);
    v.detail << " alpha=" << alpha << " drift/H0=" << l.max_relative_drift;
    v.require(l.max_relative_drift <= 1e-10, "drift");
    v.require(r.ledger.size() == 1001, "step count");
  }
}

void criterion1(Verdict& v) {
  for (double alpha : {1.2, 1.8}) identity_and_conservation(v, alpha, true, false);
}

void criterion2(Verdict& v) {
  for (double alpha : {1.2, 1.8}) identity_and_conservation(v, alpha, false, true);
}

bool within_factor(double x, double target, double factor) {
  return x > 0.0 && x <= factor * target && x >= target / factor;
}

void criterion3(Verdict& v) {
  struct Reference {
    double alpha;
    std::array<double, 3> e_u, e_v, e_r;
  };
  // tau = 1/10, 1/20, 1/40
  const std::array<Reference, 2> refs{{
      {1.2, {1.1203e-04, 2.7924e-05, 6.9647e-06}, {1.2852e-04, 3.2131e-05, 8.0258e-06},
       {1.6015e-04, 3.9645e-05, 9.8517e-06}},
      {2.0, {5.5967e-05, 1.3813e-05, 3.4273e-06}, {7.1465e-05, 1.7920e-05, 4.4825e-06},
       {9.0572e-05, 2.2004e-05, 5.4268e-06}},
  }};
  for (const Reference& ref : refs) {
    StudyConfig cfg;
    cfg.problem = example_problem(Example::Example1, 64, ref.alpha, 1.0, 1.0);
    cfg.example = Example::Example1;
    cfg.k_ref = 1000;
    cfg.tau_list = {0.1, 0.05, 0.025};
    const std::vector<ErrorRow> rows = temporal_study(cfg);
    v.require(rows.size() == 3, "row count");
    if (rows.size() != 3) return;
    v.detail << " alpha=" << ref.alpha << " rates u/v/r:";
    for (std::size_t k = 1; k < 3; ++k) {
      const ErrorRow& r = rows[k];
      const bool have = r.rate_u && r.rate_v && r.rate_r;
      v.require(have, "rates present");
      if (!have) continue;
      v.detail << ' ' << *r.rate_u << '/' << *r.rate_v << '/' << *r.rate_r;
      for (double rate : {*r.rate_u, *r.rate_v, *r.rate_r})
        v.require(rate >= 1.75 && rate <= 2.25, "rate in [1.75,2.25]");
    }
    for (std::size_t k = 0; k < 3; ++k) {
      v.require(within_factor(rows[k].e_u_inf, ref.e_u[k], 10.0), "e_u within 10x at tau=1/" + std::to_string(10 << k));
      v.require(within_factor(rows[k].e_v_inf, ref.e_v[k], 10.0), "e_v within 10x at tau=1/" + std::to_string(10 << k));
      v.require(within_factor(rows[k].e_r, ref.e_r[k], 10.0), "e_r within 10x at tau=1/" + std::to_string(10 << k));
    }
    v.detail << " tau=1/10 e_u/e_v/e_r=" << rows[0].e_u_inf << '/' << rows[0].e_v_inf << '/'
             << rows[0].e_r << " (table " << ref.e_u[0] << '/' << ref.e_v[0] << '/' << ref.e_r[0]
             << ")";
  }
}

void criterion4(Verdict& v) {
  StudyConfig cfg;
  cfg.problem = example_problem(Example::Example1, 64, 1.2, 0.0, 0.0);
  cfg.example = Example::Example1;
  cfg.k_ref = 1000;
  cfg.n_ref = 64;
  cfg.n_list = {4, 8, 16, 32};
  const std::vector<ErrorRow> rows = spatial_study(cfg);
  v.require(rows.size() == 4, "row count");
  if (rows.size() != 4) return;
  v.detail << " seminorm:";
  for (const ErrorRow& r : rows) v.detail << ' ' << r.e_u_seminorm;
  v.require(rows[2].e_u_seminorm <= 1e-6, "N=16 seminorm <= 1e-6");
  v.require(rows[3].e_u_seminorm <= 1e-7, "N=32 seminorm <= 1e-7");

  // Rates rise up to their peak; rows past the peak must sit at the floor.
  std::vector<double> rates;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    v.require(bool(rows[k].rate_semi), "rate present");
    if (!rows[k].rate_semi) return;
    rates.push_back(*rows[k].rate_semi);
  }
  v.detail << " rates:";
  for (double r : rates) v.detail << ' ' << r;
  const std::size_t peak = std::max_element(rates.begin(), rates.end()) - rates.begin();
  v.require(peak >= 1, "rate grows at least once");
  for (std::size_t k = 1; k <= peak; ++k) v.require(rates[k] > rates[k - 1], "strictly increasing");
  for (std::size_t k = peak + 1; k < rates.size(); ++k)
    v.require(rows[k + 1].e_u_seminorm <= 1e-7, "post-peak rows at floor");
}

void criterion5(Verdict& v) {
  std::mt19937 rng(2024);
  double worst = 0.0;
  for (auto [g1, g2] : {std::pair{0.0, 0.0}, std::pair{1.0, 1.0}}) {
    Problem p = example_problem(Example::Example1, 8, 1.5, g1, g2);
    const double tau = 0.05;
    const Field u0 = oracle::random_smooth(p.grid, rng, 2, 0.5);
    const Field v0 = oracle::random_smooth(p.grid, rng, 2, 0.5);

    Stepper st(p, tau, make_initial_state(u0, v0, p));
    Field du = u0, dv = v0;
    std::optional<Field> du_prev;
    double dR = st.state().R;

    auto compare = [&](const Field& a, const Field& b) {
      for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, std::abs(a[k] - b[k]) / std::max(1.0, std::abs(b[k])));
    };

    for (int n = 0; n < 20; ++n) {
      st.advance();
      g_max_residual = std::max(g_max_residual, st.last_residuals().max());

      Field ut(p.grid);
      if (n == 0) {
        const auto pred =
            oracle::dense_step(du, dv, dR, oracle::b_vector(du, p), 0.5 * tau, p, false);
        compare(st.predictor()->u_half, pred.u);
        compare(st.predictor()->v_half, pred.v);
        worst = std::max(worst, std::abs(st.predictor()->R_half - pred.R) /
                                    std::max(1.0, std::abs(pred.R)));
        ut = pred.u;
      } else {
        for (std::size_t k = 0; k < ut.size(); ++k) ut[k] = 1.5 * du[k] - 0.5 * (*du_prev)[k];
      }
      const auto next = oracle::dense_step(du, dv, dR, oracle::b_vector(ut, p), tau, p, true);
      du_prev = du;
      du = next.u;
      dv = next.v;
      dR = next.R;
      compare(st.state().u, du);
      compare(st.state().v, dv);
      worst = std::max(worst, std::abs(st.state().R - dR) / std::max(1.0, std::abs(dR)));
    }
  }
  ++g_checked_runs;
  v.detail << " max componentwise deviation=" << worst;
  v.require(worst <= 1e-11, "dense agreement");
}

void criterion6(Verdict& v) {
  std::size_t checked = 0;
  for (const Grid& g : {make_grid(16, 0, 2 * M_PI, 0, 2 * M_PI), make_grid(64, -16, 16, -16, 16),
                        make_grid(32, -10, 10, -5, 3)}) {
    DiagonalOperator lap(g, [](double k2) { return frac_symbol(k2, 1.0); });
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) {
        const double k2 = g.kx(i) * g.kx(i) + g.ky(j) * g.ky(j);
        v.require(frac_symbol(k2, 1.0) == k2, "symbol exact");
        v.require(lap.multiplier(i, j) == k2, "operator exact");
        ++checked;
      }
  }
  v.detail << " symbol exact on " << checked << " modes;";
  identity_and_conservation(v, 2.0, true, true);
}

void criterion7(Verdict& v) {
  v.detail << " max residual=" << g_max_residual << " over " << g_checked_runs
           << " verified runs (each step checked against " << kResidualTolerance << ")";
  v.require(g_checked_runs > 0, "runs checked");
  v.require(g_max_residual <= kResidualTolerance, "residual");
}

void criterion8(Verdict& v) {
  const Problem p = example_problem(Example::Example2, 128, 1.2, 0.0, 0.0);
  const double tau = p.T / 1000;
  const std::vector<std::pair<double, double>> gammas{{0, 0}, {0, 0.5}, {0.5, 0}, {0.5, 0.5}};
  const std::vector<EnergyLedger> l = energy_study(p, Example::Example2, tau, gammas);
  g_checked_runs += static_cast<int>(l.size());
  v.require(l.size() == 4, "ledger count");
  if (l.size() != 4) return;
  const double h0 = l[0].records.front().H;
  v.detail << " flat drift=" << l[0].max_relative_drift;
  v.require(l[0].max_relative_drift <= 1e-10, "(0,0) flat");
  for (std::size_t k = 1; k < 4; ++k) v.require(l[k].monotone, "damped monotone");

  // more damping in either coefficient never raises H
  const std::array<std::pair<int, int>, 4> below{{{1, 0}, {2, 0}, {3, 1}, {3, 2}}};
  for (auto [lo, hi] : below) {
    int first = -1, last = -1;
    double excess = 0.0;
    for (std::size_t n = 1; n < l[lo].records.size(); ++n) {
      const double d = l[lo].records[n].H - l[hi].records[n].H;
      if (d > 1e-12 * h0) {
        if (first < 0) first = static_cast<int>(n);
        last = static_cast<int>(n);
        excess = std::max(excess, d);
      }
    }
    if (first >= 0) {
      std::ostringstream what;
      what << "H(" << l[lo].gamma1 << "," << l[lo].gamma2 << ") > H(" << l[hi].gamma1 << ","
           << l[hi].gamma2 << ") for t in [" << l[lo].records[first].t << ", "
           << l[lo].records[last].t << "], max excess " << excess;
      v.require(false, what.str());
    }
  }
  v.detail << " H(T):";
  for (const EnergyLedger& e : l) v.detail << " (" << e.gamma1 << "," << e.gamma2 << ")=" << e.records.back().H;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"1 discrete energy identity", criterion1},
      {"2 conservation without damping", criterion2},
      {"3 temporal order 2", criterion3},
      {"4 spectral spatial accuracy", criterion4},
      {"5 dense-oracle equivalence", criterion5},
      {"6 alpha=2 classical limit", criterion6},
      {"8 damping ordering", criterion8},
      {"7 residual contracts", criterion7},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      check(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " exception: " << e.what();
    }
    if (!v.pass) ++failures;
    std::printf("[%s] %s:%s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
