#include "savwave/sav_stepper.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace savwave {

namespace {

double ratio(double residual, std::initializer_list<double> terms) {
  double scale = 0.0;
  for (double t : terms) scale = std::max(scale, std::abs(t));
  return scale > 0.0 ? residual / scale : residual;
}

struct Nonlinear {
  Field b;      // F'(u~) / sqrt(E(u~))
  double energy;
};

Nonlinear nonlinear_at(const Field& u_tilde, const Problem& p) {
  const double e = energy_E(u_tilde, p);
  Field b = potential_derivative(u_tilde, p);
  b *= 1.0 / std::sqrt(e);
  return {std::move(b), e};
}

void check_tau(double tau) {
  if (!(tau != 0.0) || !std::isfinite(tau)) throw ProblemError("time step must be finite and nonzero");
}

}  // namespace

double StepResiduals::max() const noexcept { return std::max({displacement, velocity, auxiliary}); }

// ---------------------------------------------------------------------------
// SchemeOperators

SchemeOperators::SchemeOperators(const Problem& p, double tau)
    : problem_(p),
      tau_(tau),
      frac_(p.grid, [a = p.alpha](double k2) { return frac_symbol(k2, 0.5 * a); }),
      a_(p.grid, [&](double k2) { return a_symbol(k2, tau, p); }),
      a_inv_(p.grid, [&](double k2) { return 1.0 / a_symbol(k2, tau, p); }),
      main_explicit_(p.grid,
                     [&](double k2) {
                       return a_symbol(k2, tau, p) -
                              tau * tau * p.kappa * frac_symbol(k2, 0.5 * p.alpha);
                     }),
      predictor_explicit_(p.grid, [&](double k2) {
        return (2.0 + tau * p.gamma2) + tau * p.gamma1 * frac_symbol(k2, 0.5 * p.alpha);
      }) {
  check_tau(tau);
  const int n = p.grid.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(a_.multiplier(i, j) > 0.0))
        throw ProblemError("implicit operator is not positive definite for this time step");
}

Field SchemeOperators::rank1_solve(const Field& b, const Field& g) const {
  const double c = 0.25 * tau_ * tau_;
  const Field ainv_g = a_inverse(g);
  const Field ainv_b = a_inverse(b);
  const double theta = inner_l2(b, ainv_g) / (1.0 + c * inner_l2(b, ainv_b));
  Field u = ainv_g;
  u.axpy(-c * theta, ainv_b);
  return u;
}

// ---------------------------------------------------------------------------
// Free functions

Field extrapolate(const Field& u_n, const Field& u_prev) {
  require_same_grid(u_n.grid(), u_prev.grid(), "extrapolate");
  Field out(u_n.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = 0.5 * (3.0 * u_n[k] - u_prev[k]);
  return out;
}

Field rank1_solve(const Field& b, const Field& g, double tau, const Problem& p) {
  return SchemeOperators(p, tau).rank1_solve(b, g);
}

PredictorResult predictor_first_step(const SavState& state0, double tau, const Problem& p) {
  return predictor_first_step(state0, SchemeOperators(p, tau));
}

PredictorResult predictor_first_step(const SavState& state0, const SchemeOperators& ops) {
  if (state0.n != 0) throw std::logic_error("predictor applies to the initial state only");
  const Problem& p = ops.problem();
  const double tau = ops.tau();
  const double half = 0.5 * tau;
  const auto [b, energy] = nonlinear_at(state0.u, p);

  // Eliminating v~ = (w - u0)/(tau/2) and R~ = R0 + (b, w - u0)/2 and scaling
  // by 2 leaves A w + (tau^2/4)(b, w) b = g with
  //   g = ((2 + tau g2) + tau g1 L) u0 + tau v0 + (tau^2/4)(b, u0) b - (tau^2/2) R0 b.
  Field g = ops.predictor_explicit(state0.u);
  g.axpy(tau, state0.v);
  g.axpy(0.25 * tau * tau * inner_l2(b, state0.u) - 0.5 * tau * tau * state0.R, b);

  Field w = ops.rank1_solve(b, g);
  Field dw = w - state0.u;
  const double r_half = state0.R + 0.5 * inner_l2(b, dw);
  dw *= 1.0 / half;
  return {std::move(w), std::move(dw), r_half};
}

SavState sav_step(const SavState& state, const Field& u_tilde, double tau, const Problem& p) {
  return sav_step(state, u_tilde, SchemeOperators(p, tau));
}

SavState sav_step(const SavState& state, const Field& u_tilde, const SchemeOperators& ops) {
  const Problem& p = ops.problem();
  const double tau = ops.tau();
  const auto [b, energy] = nonlinear_at(u_tilde, p);

  // g = (A - tau^2 kappa L) U^n + 2 tau V^n + (tau^2/4)(b, U^n) b - tau^2 R^n b
  Field g = ops.main_explicit(state.u);
  g.axpy(2.0 * tau, state.v);
  g.axpy(0.25 * tau * tau * inner_l2(b, state.u) - tau * tau * state.R, b);

  Field u_next = ops.rank1_solve(b, g);
  Field du = u_next - state.u;
  const double r_next = state.R + 0.5 * inner_l2(b, du);
  du *= 2.0 / tau;
  Field v_next = du - state.v;
  return SavState{.n = state.n + 1,
                  .u = std::move(u_next),
                  .u_prev = state.u,
                  .v = std::move(v_next),
                  .R = r_next,
                  .u_half_pred = std::nullopt};
}

StepResiduals step_residuals(const SavState& before, const SavState& after, const Field& u_tilde,
                             const SchemeOperators& ops) {
  const Problem& p = ops.problem();
  const double tau = ops.tau();
  const auto [b, energy] = nonlinear_at(u_tilde, p);
  const Field u_bar = 0.5 * (after.u + before.u);
  const Field v_bar = 0.5 * (after.v + before.v);
  const double r_bar = 0.5 * (after.R + before.R);
  const double nu1 = linf_norm(after.u), nu0 = linf_norm(before.u);

  StepResiduals res;

  // tau * [delta_t u - vbar]
  {
    const Field du = after.u - before.u;
    const Field r = du - tau * v_bar;
    res.displacement = ratio(linf_norm(r), {nu1, nu0, tau * linf_norm(v_bar)});
  }
  // tau^2 * [delta_t v + kappa L ubar + g1 L vbar + g2 vbar + Rbar b]
  {
    const Field t_dv = tau * (after.v - before.v);
    const Field t_kappa = (tau * tau * p.kappa) * ops.frac(u_bar);
    const Field t_g1 = (tau * tau * p.gamma1) * ops.frac(v_bar);
    const Field t_g2 = (tau * tau * p.gamma2) * v_bar;
    const Field t_r = (tau * tau * r_bar) * b;
    const Field r = t_dv + t_kappa + t_g1 + t_g2 + t_r;
    res.velocity = ratio(linf_norm(r), {nu1, nu0, tau * linf_norm(after.v),
                                        tau * linf_norm(before.v), linf_norm(t_kappa),
                                        linf_norm(t_g1), linf_norm(t_g2), linf_norm(t_r)});
  }
  // tau * [delta_t R - (F'(u~), delta_t u) / (2 sqrt(E))]
  {
    const double rhs1 = 0.5 * inner_l2(b, after.u);
    const double rhs0 = 0.5 * inner_l2(b, before.u);
    const double r = (after.R - before.R) - (rhs1 - rhs0);
    res.auxiliary = ratio(std::abs(r), {after.R, before.R, rhs1, rhs0});
  }
  return res;
}

StepResiduals predictor_residuals(const SavState& state0, const PredictorResult& pred,
                                  const SchemeOperators& ops) {
  const Problem& p = ops.problem();
  const double h = 0.5 * ops.tau();
  const auto [b, energy] = nonlinear_at(state0.u, p);
  const double nw = linf_norm(pred.u_half), nu0 = linf_norm(state0.u);

  StepResiduals res;
  {
    const Field r = (pred.u_half - state0.u) - h * pred.v_half;
    res.displacement = ratio(linf_norm(r), {nw, nu0, h * linf_norm(pred.v_half)});
  }
  {
    const Field t_dv = h * (pred.v_half - state0.v);
    const Field t_kappa = (h * h * p.kappa) * ops.frac(pred.u_half);
    const Field t_g1 = (h * h * p.gamma1) * ops.frac(pred.v_half);
    const Field t_g2 = (h * h * p.gamma2) * pred.v_half;
    const Field t_r = (h * h * pred.R_half) * b;
    const Field r = t_dv + t_kappa + t_g1 + t_g2 + t_r;
    res.velocity = ratio(linf_norm(r), {nw, nu0, h * linf_norm(pred.v_half),
                                        h * linf_norm(state0.v), linf_norm(t_kappa),
                                        linf_norm(t_g1), linf_norm(t_g2), linf_norm(t_r)});
  }
  {
    const double rhs1 = 0.5 * inner_l2(b, pred.u_half);
    const double rhs0 = 0.5 * inner_l2(b, state0.u);
    const double r = (pred.R_half - state0.R) - (rhs1 - rhs0);
    res.auxiliary = ratio(std::abs(r), {pred.R_half, state0.R, rhs1, rhs0});
  }
  return res;
}

EnergyRecord discrete_energy(const SavState& state, const Problem& p, double tau) {
  EnergyRecord rec;
  rec.n = state.n;
  rec.t = state.n * tau;
  rec.kinetic = 0.5 * inner_l2(state.v, state.v);
  const double semi = seminorm(state.u, 0.5 * p.alpha);
  rec.fractional = 0.5 * p.kappa * semi * semi;
  rec.sav = state.R * state.R;
  rec.H = rec.kinetic + rec.fractional + rec.sav;
  return rec;
}

double dissipation_identity_rhs(const Field& v_n, const Field& v_np1, double tau,
                                const Problem& p) {
  const Field v_bar = 0.5 * (v_n + v_np1);
  double out = 0.0;
  if (p.gamma1 != 0.0) {
    const double s = seminorm(v_bar, 0.5 * p.alpha);
    out += tau * p.gamma1 * s * s;
  }
  if (p.gamma2 != 0.0) out += tau * p.gamma2 * inner_l2(v_bar, v_bar);
  return out;
}

SavState make_initial_state(const Field& u0, const Field& v0, const Problem& p) {
  require_same_grid(u0.grid(), p.grid, "initial displacement");
  require_same_grid(v0.grid(), p.grid, "initial velocity");
  if (!u0.all_finite() || !v0.all_finite()) throw ProblemError("initial data must be finite");
  return SavState{.n = 0,
                  .u = u0,
                  .u_prev = std::nullopt,
                  .v = v0,
                  .R = std::sqrt(energy_E(u0, p)),
                  .u_half_pred = std::nullopt};
}

// ---------------------------------------------------------------------------
// Stepper

Stepper::Stepper(const Problem& p, double tau, SavState initial, bool verify_residuals)
    : ops_(p, tau), state_(std::move(initial)), verify_(verify_residuals) {
  require_same_grid(state_.u.grid(), p.grid, "Stepper");
}

EnergyRecord Stepper::energy() const { return discrete_energy(state_, ops_.problem(), ops_.tau()); }

EnergyRecord Stepper::advance() {
  const Problem& p = ops_.problem();
  const int step = state_.n;
  try {
    Field u_tilde = [&] {
      if (state_.n == 0) {
        if (!predictor_) {
          predictor_ = predictor_first_step(state_, ops_);
          if (verify_) {
            last_residuals_ = predictor_residuals(state_, *predictor_, ops_);
            if (last_residuals_.max() > kResidualTolerance) {
              std::ostringstream msg;
              msg << "predictor residual " << last_residuals_.max() << " exceeds tolerance";
              throw ResidualError(msg.str());
            }
          }
        }
        state_.u_half_pred = predictor_->u_half;
        return predictor_->u_half;
      }
      if (!state_.u_prev) throw std::logic_error("state past step 0 lacks u^{n-1}");
      return extrapolate(state_.u, *state_.u_prev);
    }();

    SavState next = sav_step(state_, u_tilde, ops_);
    if (verify_) {
      const StepResiduals r = step_residuals(state_, next, u_tilde, ops_);
      if (r.max() > kResidualTolerance) {
        std::ostringstream msg;
        msg << "step " << step << ": residual " << r.max() << " exceeds tolerance";
        throw ResidualError(msg.str());
      }
      last_residuals_.displacement = std::max(last_residuals_.displacement, r.displacement);
      last_residuals_.velocity = std::max(last_residuals_.velocity, r.velocity);
      last_residuals_.auxiliary = std::max(last_residuals_.auxiliary, r.auxiliary);
    }

    EnergyRecord rec = discrete_energy(next, p, ops_.tau());
    rec.dissipation_rhs = dissipation_identity_rhs(state_.v, next.v, ops_.tau(), p);
    state_ = std::move(next);
    return rec;
  } catch (const NonpositiveEnergy& e) {
    throw NonpositiveEnergy(e.energy(), step);
  }
}

// ---------------------------------------------------------------------------
// Driver

int step_count(double T, double tau) {
  if (!(tau > 0.0) || !(T > 0.0)) throw NonIntegerStepCount("T and tau must be positive");
  const double k = T / tau;
  const double rounded = std::round(k);
  if (rounded < 1.0 || std::abs(k - rounded) > 1e-12 * std::max(1.0, rounded)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "T/tau = " << k << " is not an integer step count";
    throw NonIntegerStepCount(msg.str());
  }
  return static_cast<int>(rounded);
}

RunResult run(const Problem& p, const Field& u0, const Field& v0, double tau,
              const RunOptions& options) {
  p.validate();
  const int steps = step_count(p.T, tau);
  Stepper stepper(p, tau, make_initial_state(u0, v0, p), options.verify_residuals);

  std::vector<EnergyRecord> ledger;
  ledger.reserve(static_cast<std::size_t>(steps) + 1);
  ledger.push_back(stepper.energy());
  for (int k = 0; k < steps; ++k) ledger.push_back(stepper.advance());
  return RunResult{stepper.state(), std::move(ledger), stepper.last_residuals().max()};
}

RunResult run(const Problem& p, Example which, double tau, const RunOptions& options) {
  const InitialData init = initial_state(which, p);
  return run(p, init.u0, init.v0, tau, options);
}

}  // namespace savwave
