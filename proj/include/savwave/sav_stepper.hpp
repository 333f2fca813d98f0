#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "savwave/model.hpp"
#include "savwave/spectral.hpp"

namespace savwave {

/// Residual of a step exceeded the accepted tolerance.
class ResidualError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// T / tau is not an integer.
class NonIntegerStepCount : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Largest accepted relative residual of the step equations.
inline constexpr double kResidualTolerance = 1e-11;

/// Discrete state (u^n, v^n, R^n) plus u^{n-1} for the extrapolation.
struct SavState {
  int n = 0;
  Field u;
  std::optional<Field> u_prev;
  Field v;
  double R = 0.0;
  /// Predictor output u~^{1/2}; set only between the predictor and step 0.
  std::optional<Field> u_half_pred;
};

struct EnergyRecord {
  int n = 0;
  double t = 0.0;
  double H = 0.0;
  double kinetic = 0.0;     // ||v||^2 / 2
  double fractional = 0.0;  // kappa/2 |u|^2_{alpha/2}
  double sav = 0.0;         // R^2
  double dissipation_rhs = 0.0;
};

struct PredictorResult {
  Field u_half;
  Field v_half;
  double R_half;
};

/// Relative residuals of the three step equations after clearing the
/// time-step denominators; each is normalized by its largest term.
struct StepResiduals {
  double displacement = 0.0;
  double velocity = 0.0;
  double auxiliary = 0.0;

  double max() const noexcept;
};

/// Mode-wise operators of the scheme for a fixed (problem, tau):
///   L         = (-Delta)^{alpha/2}
///   A         = (2 + tau g2) + (tau^2 kappa/2 + tau g1) L
///   explicit  = A - tau^2 kappa L            (main step right-hand side)
///   predictor = (2 + tau g2) + tau g1 L      (first-step right-hand side)
class SchemeOperators {
public:
  SchemeOperators(const Problem& p, double tau);

  const Problem& problem() const noexcept { return problem_; }
  double tau() const noexcept { return tau_; }

  Field frac(const Field& f) const { return frac_.apply(f); }
  Field a(const Field& f) const { return a_.apply(f); }
  Field a_inverse(const Field& f) const { return a_inv_.apply(f); }
  Field main_explicit(const Field& f) const { return main_explicit_.apply(f); }
  Field predictor_explicit(const Field& f) const { return predictor_explicit_.apply(f); }

  /// Solves A U + (tau^2/4)(b, U) b = g by Sherman-Morrison.
  Field rank1_solve(const Field& b, const Field& g) const;

private:
  Problem problem_;
  double tau_;
  DiagonalOperator frac_;
  DiagonalOperator a_;
  DiagonalOperator a_inv_;
  DiagonalOperator main_explicit_;
  DiagonalOperator predictor_explicit_;
};

/// (3 u^n - u^{n-1}) / 2.
Field extrapolate(const Field& u_n, const Field& u_prev);

Field rank1_solve(const Field& b, const Field& g, double tau, const Problem& p);

/// Half-step predictor for u~^{1/2}, v~^{1/2}, R~^{1/2}.
PredictorResult predictor_first_step(const SavState& state0, double tau, const Problem& p);
PredictorResult predictor_first_step(const SavState& state0, const SchemeOperators& ops);

/// One step of the two-level scheme with the nonlinear coefficient frozen at u_tilde.
SavState sav_step(const SavState& state, const Field& u_tilde, double tau, const Problem& p);
SavState sav_step(const SavState& state, const Field& u_tilde, const SchemeOperators& ops);

StepResiduals step_residuals(const SavState& before, const SavState& after, const Field& u_tilde,
                             const SchemeOperators& ops);
StepResiduals predictor_residuals(const SavState& state0, const PredictorResult& pred,
                                  const SchemeOperators& ops);

/// H = ||v||^2/2 + kappa/2 |u|^2_{alpha/2} + R^2.
EnergyRecord discrete_energy(const SavState& state, const Problem& p, double tau = 0.0);

/// tau g1 |vbar|^2_{alpha/2} + tau g2 ||vbar||^2 with vbar = (v^n + v^{n+1})/2.
double dissipation_identity_rhs(const Field& v_n, const Field& v_np1, double tau,
                                const Problem& p);

/// Initial state with R^0 recomputed as sqrt(E(u^0)).
SavState make_initial_state(const Field& u0, const Field& v0, const Problem& p);

/// Owns a simulation: runs the predictor on first use, then steps the
/// two-level recurrence.
class Stepper {
public:
  Stepper(const Problem& p, double tau, SavState initial, bool verify_residuals = true);

  const SavState& state() const noexcept { return state_; }
  const SchemeOperators& operators() const noexcept { return ops_; }
  double tau() const noexcept { return ops_.tau(); }
  double time() const noexcept { return state_.n * ops_.tau(); }
  /// Predictor output, available once the first step has been taken.
  const std::optional<PredictorResult>& predictor() const noexcept { return predictor_; }
  const StepResiduals& last_residuals() const noexcept { return last_residuals_; }

  EnergyRecord energy() const;

  /// Advances one step and returns the energy record of the new state.
  EnergyRecord advance();

private:
  SchemeOperators ops_;
  SavState state_;
  bool verify_;
  std::optional<PredictorResult> predictor_;
  StepResiduals last_residuals_;
};

struct RunOptions {
  bool verify_residuals = true;
};

struct RunResult {
  SavState final_state;
  std::vector<EnergyRecord> ledger;
  /// Largest step residual seen over the run (predictor included).
  double max_residual = 0.0;
};

/// Number of steps K = T / tau; throws NonIntegerStepCount unless integral.
int step_count(double T, double tau);

RunResult run(const Problem& p, const Field& u0, const Field& v0, double tau,
              const RunOptions& options = {});
RunResult run(const Problem& p, Example which, double tau, const RunOptions& options = {});

}  // namespace savwave
