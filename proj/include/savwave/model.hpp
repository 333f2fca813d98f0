#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "savwave/spectral.hpp"

namespace savwave {

/// E(u) = int F(u) + c0 came out non-positive; c0 is too small for the state.
class NonpositiveEnergy : public std::runtime_error {
public:
  NonpositiveEnergy(double energy, std::optional<int> step = std::nullopt);
  double energy() const noexcept { return energy_; }
  std::optional<int> step() const noexcept { return step_; }

private:
  double energy_;
  std::optional<int> step_;
};

class ProblemError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Potential { SineGordon, DoubleWell };

/// F(u): 1 - cos u, or u^2 (u^2/4 - 1/2).
double potential_value(Potential kind, double u);
/// F'(u): sin u, or u^3 - u.
double potential_derivative(Potential kind, double u);

std::string_view to_string(Potential kind);
Potential parse_potential(std::string_view name);

enum class Example { Example1, Example2 };

std::string_view to_string(Example which);
Example parse_example(std::string_view name);

/// Coefficients of u_tt + kappa L u + gamma1 L u_t + gamma2 u_t + F'(u) = 0
/// with L = (-Delta)^{alpha/2} on a periodic grid, plus the SAV shift c0.
struct Problem {
  double alpha = 2.0;
  double kappa = 1.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  Potential potential = Potential::SineGordon;
  double c0 = 1.0;
  Grid grid{4, 0.0, 1.0, 0.0, 1.0};
  double T = 1.0;

  /// Throws ProblemError when a coefficient is outside its admissible range.
  void validate() const;
};

/// Smallest shift that keeps E(u) > 0 for every u: 1 for sine-Gordon,
/// 1 + |Omega|/4 for the double well (F >= -1/4).
double default_c0(Potential kind, const Grid& grid);

/// The two reference setups: sine-Gordon on (-16,16)^2 with T = 1, and the
/// double well on (-10,10)^2 with T = 8. Both use kappa = 1.
Problem example_problem(Example which, int n, double alpha, double gamma1, double gamma2);

/// int F(u) dx + c0. Throws NonpositiveEnergy when the result is <= 0.
double energy_E(const Field& u, const Problem& p);

/// F'(u) pointwise.
Field potential_derivative(const Field& u, const Problem& p);

/// F'(u) / sqrt(E(u)).
Field b_field(const Field& u, const Problem& p);

struct InitialData {
  Field u0;
  Field v0;
  double R0;
  /// Non-empty when the example is used off its reference domain.
  std::string warning;
};

InitialData initial_state(Example which, const Problem& p);

/// Pointwise initial displacement of each example.
double example_displacement(Example which, double x, double y);

}  // namespace savwave
