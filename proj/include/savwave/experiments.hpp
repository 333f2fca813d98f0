#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "savwave/model.hpp"
#include "savwave/sav_stepper.hpp"
#include "savwave/spectral.hpp"

namespace savwave {

class StudyError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// One row of a convergence table. `param` is tau for temporal studies and N
/// for spatial ones. Rates compare against the previous row and are empty on
/// the first row or when either error is zero.
struct ErrorRow {
  double param = 0.0;
  double e_u_inf = 0.0;
  double e_v_inf = 0.0;
  double e_r = 0.0;
  double e_u_seminorm = 0.0;  // |e_u|_{alpha/2}
  double e_u_l2 = 0.0;
  double e_v_l2 = 0.0;
  std::optional<double> rate_u;
  std::optional<double> rate_v;
  std::optional<double> rate_r;
  std::optional<double> rate_semi;
  std::optional<double> rate_u_l2;
  std::optional<double> rate_v_l2;
};

/// Orthogonal projection of `fine` onto the trigonometric space of `coarse`:
/// keeps modes -n/2..n/2-1 of the coarse grid. Both grids must share bounds.
Field restrict_spectral(const Field& fine, const Grid& coarse);

/// Errors of `sol` against `ref` on sol's grid. A finer reference is first
/// restricted by spectral truncation. Throws StudyError if the times differ.
ErrorRow compute_errors(const SavState& sol, double sol_time, const SavState& ref,
                        double ref_time, const Problem& p);

/// log2(e_coarse / e_fine); both errors must be positive.
double observed_rate(double e_coarse, double e_fine);

/// Fills the rate fields of rows[1..] from consecutive pairs.
void fill_rates(std::vector<ErrorRow>& rows);

struct StudyConfig {
  Problem problem;          // grid fixes N for temporal studies
  Example example = Example::Example1;
  int n_ref = 64;           // reference grid for spatial studies
  int k_ref = 1000;         // reference step count, tau_ref = T / k_ref
  std::vector<double> tau_list;
  std::vector<int> n_list;
};

/// Runs the reference (tau = T/k_ref) once, then each tau in tau_list on the
/// same grid, comparing at t = T.
std::vector<ErrorRow> temporal_study(const StudyConfig& cfg);

/// Runs the reference on n_ref points per axis, then each N in n_list, all
/// with tau = T/k_ref, comparing on the coarse grid at t = T.
std::vector<ErrorRow> spatial_study(const StudyConfig& cfg);

struct EnergyLedger {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  std::vector<EnergyRecord> records;
  /// max_n (H^{n+1} - H^n) / H^0.
  double max_relative_increase = 0.0;
  /// max_n |H^n - H^0| / H^0.
  double max_relative_drift = 0.0;
  /// max_n |(H^n - H^{n+1}) - rhs^{n+1}| / H^0.
  double max_identity_defect = 0.0;
  /// H^{n+1} <= H^n + 1e-12 H^0 for every n.
  bool monotone = true;
};

/// Summary statistics of an energy ledger.
EnergyLedger summarize_ledger(double gamma1, double gamma2, std::vector<EnergyRecord> records);

/// One run per (gamma1, gamma2) pair, each from the same initial data.
std::vector<EnergyLedger> energy_study(const Problem& p, Example which, double tau,
                                       const std::vector<std::pair<double, double>>& gammas);

}  // namespace savwave
