#include "savwave/model.hpp"

#include <cmath>
#include <numbers>

namespace savwave {

NonpositiveEnergy::NonpositiveEnergy(double energy, std::optional<int> step)
    : std::runtime_error(
          (step ? "step " + std::to_string(*step) + ": " : std::string()) +
          "shifted energy E(u) = " + std::to_string(energy) +
          " is not positive; increase c0"),
      energy_(energy),
      step_(step) {}

double potential_value(Potential kind, double u) {
  switch (kind) {
    case Potential::SineGordon:
      return 1.0 - std::cos(u);
    case Potential::DoubleWell:
      return u * u * (0.25 * u * u - 0.5);
  }
  return 0.0;
}

double potential_derivative(Potential kind, double u) {
  switch (kind) {
    case Potential::SineGordon:
      return std::sin(u);
    case Potential::DoubleWell:
      return u * u * u - u;
  }
  return 0.0;
}

std::string_view to_string(Potential kind) {
  return kind == Potential::SineGordon ? "sine_gordon" : "double_well";
}

Potential parse_potential(std::string_view name) {
  if (name == "sine_gordon" || name == "sinegordon") return Potential::SineGordon;
  if (name == "double_well" || name == "doublewell") return Potential::DoubleWell;
  throw ProblemError("unknown potential '" + std::string(name) +
                     "' (expected sine_gordon or double_well)");
}

std::string_view to_string(Example which) {
  return which == Example::Example1 ? "example1" : "example2";
}

Example parse_example(std::string_view name) {
  if (name == "example1") return Example::Example1;
  if (name == "example2") return Example::Example2;
  throw ProblemError("unknown example '" + std::string(name) +
                     "' (expected example1 or example2)");
}

void Problem::validate() const {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw ProblemError("alpha must lie in (1,2]");
  if (!(kappa > 0.0)) throw ProblemError("kappa must be positive");
  if (!(gamma1 >= 0.0)) throw ProblemError("gamma1 must be non-negative");
  if (!(gamma2 >= 0.0)) throw ProblemError("gamma2 must be non-negative");
  if (!(c0 > 0.0)) throw ProblemError("c0 must be positive");
  if (!(T > 0.0)) throw ProblemError("T must be positive");
}

double default_c0(Potential kind, const Grid& grid) {
  return kind == Potential::SineGordon ? 1.0 : 1.0 + 0.25 * grid.area();
}

Problem example_problem(Example which, int n, double alpha, double gamma1, double gamma2) {
  Problem p;
  p.alpha = alpha;
  p.kappa = 1.0;
  p.gamma1 = gamma1;
  p.gamma2 = gamma2;
  if (which == Example::Example1) {
    p.potential = Potential::SineGordon;
    p.grid = Grid(n, -16.0, 16.0, -16.0, 16.0);
    p.T = 1.0;
  } else {
    p.potential = Potential::DoubleWell;
    p.grid = Grid(n, -10.0, 10.0, -10.0, 10.0);
    p.T = 8.0;
  }
  p.c0 = default_c0(p.potential, p.grid);
  p.validate();
  return p;
}

double energy_E(const Field& u, const Problem& p) {
  double sum = 0.0;
  for (double v : u.values()) sum += potential_value(p.potential, v);
  const double e = sum * u.grid().hx() * u.grid().hy() + p.c0;
  if (!(e > 0.0)) throw NonpositiveEnergy(e);
  return e;
}

Field potential_derivative(const Field& u, const Problem& p) {
  Field out(u.grid());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = potential_derivative(p.potential, u[k]);
  return out;
}

Field b_field(const Field& u, const Problem& p) {
  const double scale = 1.0 / std::sqrt(energy_E(u, p));
  Field out = potential_derivative(u, p);
  out *= scale;
  return out;
}

double example_displacement(Example which, double x, double y) {
  using std::numbers::pi;
  if (which == Example::Example1) return std::sin(pi * x / 16.0) * std::cos(pi * y / 16.0);
  return 0.5 * std::atan(std::exp(-std::hypot(x, y)));
}

InitialData initial_state(Example which, const Problem& p) {
  const Grid& g = p.grid;
  const double half = which == Example::Example1 ? 16.0 : 10.0;
  std::string warning;
  if (g.xmin() != -half || g.xmax() != half || g.ymin() != -half || g.ymax() != half) {
    warning = std::string(to_string(which)) + " is defined on (-" + std::to_string(half) + "," +
              std::to_string(half) + ")^2; sampling it on a different domain";
  }
  Field u0 = Field::sample(g, [which](double x, double y) {
    return example_displacement(which, x, y);
  });
  Field v0(g);
  const double R0 = std::sqrt(energy_E(u0, p));
  return {std::move(u0), std::move(v0), R0, std::move(warning)};
}

}  // namespace savwave
