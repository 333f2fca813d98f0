#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "savwave/model.hpp"
#include "savwave/spectral.hpp"

using namespace savwave;
using Catch::Approx;
using std::numbers::pi;

namespace {

Grid two_pi(int n) { return make_grid(n, 0.0, 2 * pi, 0.0, 2 * pi); }

Problem problem_on(const Grid& g, double alpha, double kappa, double g1, double g2) {
  Problem p;
  p.alpha = alpha;
  p.kappa = kappa;
  p.gamma1 = g1;
  p.gamma2 = g2;
  p.grid = g;
  return p;
}

double rel_diff(const Field& a, const Field& b) {
  return oracle::max_abs_diff(a, b) / std::max(1e-300, linf_norm(b));
}

}  // namespace

TEST_CASE("make_grid wavenumbers", "[spectral][grid]") {
  SECTION("2pi box gives integer modes in FFT order") {
    const Grid g = make_grid(4, 0, 2 * pi, 0, 2 * pi);
    const auto k = g.kx_values();
    REQUIRE(k.size() == 4);
    CHECK(k[0] == Approx(0.0).margin(1e-15));
    CHECK(k[1] == Approx(1.0));
    CHECK(k[2] == Approx(-2.0));
    CHECK(k[3] == Approx(-1.0));
  }
  SECTION("scaled box") {
    const Grid g = make_grid(4, -16, 16, -16, 16);
    const auto k = g.ky_values();
    CHECK(k[0] == 0.0);
    CHECK(k[1] == Approx(pi / 16));
    CHECK(k[2] == Approx(-pi / 8));
    CHECK(k[3] == Approx(-pi / 16));
    CHECK(g.area() == 1024.0);
    CHECK(g.hx() == 8.0);
  }
  SECTION("zero mode appears exactly once") {
    const Grid g = make_grid(16, -1, 3, 0, 1);
    int zeros = 0;
    for (double k : g.kx_values()) zeros += k == 0.0;
    CHECK(zeros == 1);
  }
  SECTION("invalid arguments") {
    CHECK_THROWS_AS(make_grid(3, 0, 1, 0, 1), SpectralError);
    CHECK_THROWS_AS(make_grid(0, 0, 1, 0, 1), SpectralError);
    CHECK_THROWS_AS(make_grid(-4, 0, 1, 0, 1), SpectralError);
    CHECK_THROWS_AS(make_grid(4, 1, 1, 0, 1), SpectralError);
    CHECK_THROWS_AS(make_grid(4, 0, 1, 2, 1), SpectralError);
  }
}

TEST_CASE("Field shape checks", "[spectral][field]") {
  const Grid g = two_pi(4);
  CHECK_THROWS_AS(Field(g, std::vector<double>(15)), SpectralError);
  const Field a(g), b(two_pi(8));
  CHECK_THROWS_AS(inner_l2(a, b), SpectralError);
}

TEST_CASE("forward and inverse transforms", "[spectral][fft]") {
  SECTION("constant field") {
    const Grid g = make_grid(8, -16, 16, -16, 16);
    const Spectrum s = forward(Field::constant(g, 3.5));
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const double expected = (i == 0 && j == 0) ? 3.5 : 0.0;
        CHECK(std::abs(s(i, j) - expected) < 1e-14);
      }
  }
  SECTION("cosine of the first mode, on shifted and unshifted domains") {
    for (const Grid& g : {two_pi(8), make_grid(8, -16, 16, -16, 16)}) {
      const double k1 = g.kx(1);
      const Spectrum s = forward(Field::sample(g, [k1](double x, double) { return std::cos(k1 * x); }));
      CHECK(std::abs(s.at_mode(1, 0) - 0.5) < 1e-14);
      CHECK(std::abs(s.at_mode(-1, 0) - 0.5) < 1e-14);
      CHECK(std::abs(s.at_mode(0, 0)) < 1e-14);
      CHECK(std::abs(s.at_mode(2, 0)) < 1e-14);
    }
  }
  SECTION("agrees with the direct-sum DFT") {
    std::mt19937 rng(7);
    const Grid g = make_grid(6, -1.0, 2.0, 0.5, 3.0);
    const Field f = oracle::random_field(g, rng);
    const Spectrum s = forward(f);
    for (int sx = -3; sx < 3; ++sx)
      for (int l = -3; l < 3; ++l) CHECK(std::abs(s.at_mode(sx, l) - oracle::dft_coeff(f, sx, l)) < 1e-14);
  }
  SECTION("round trip, Hermitian symmetry and Parseval on random fields") {
    std::mt19937 rng(42);
    for (int n : {4, 8, 16, 32, 64}) {
      const Grid g = make_grid(n, -16, 16, -10, 10);
      for (int trial = 0; trial < 3; ++trial) {
        const Field f = oracle::random_field(g, rng, 2.0);
        const Spectrum s = forward(f);
        double residue = 1.0;
        const Field back = inverse(s, &residue);
        CHECK(oracle::max_abs_diff(back, f) <= 1e-13 * linf_norm(f));
        CHECK(residue <= 1e-13 * linf_norm(f));

        double scale = 0.0, power = 0.0;
        for (auto c : s.coeffs()) {
          scale = std::max(scale, std::abs(c));
          power += std::norm(c);
        }
        for (int sx = -n / 2; sx < n / 2; ++sx)
          for (int l = -n / 2; l < n / 2; ++l)
            CHECK(std::abs(s.at_mode(-sx, -l) - std::conj(s.at_mode(sx, l))) <= 1e-13 * scale);

        CHECK(inner_l2(f, f) == Approx(g.area() * power).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("frac_laplacian", "[spectral][frac]") {
  const Grid g = two_pi(16);
  SECTION("unit wavenumber is a fixed point") {
    const Field f = Field::sample(g, [](double x, double) { return std::cos(x); });
    CHECK(rel_diff(frac_laplacian(f, 0.6), f) < 1e-13);
  }
  SECTION("cos(2x) with beta = 0.75") {
    const Field f = Field::sample(g, [](double x, double) { return std::cos(2 * x); });
    const Field out = frac_laplacian(f, 0.75);
    const Field expected = 2.8284271247461903 * f;
    CHECK(oracle::max_abs_diff(out, expected) < 1e-13);
  }
  SECTION("constants are annihilated for every positive power, kept for power zero") {
    const Field c = Field::constant(g, 4.2);
    for (double beta : {0.3, 0.6, 1.0, 2.0}) CHECK(linf_norm(frac_laplacian(c, beta)) < 1e-14);
    CHECK(rel_diff(frac_laplacian(c, 0.0), c) < 1e-15);
  }
  SECTION("negative power rejected") {
    CHECK_THROWS_AS(frac_laplacian(Field(g), -0.1), SpectralError);
  }
  SECTION("beta = 1 is the classical spectral Laplacian") {
    // analytic: -Lap(sin 2x cos 3y) = 13 sin 2x cos 3y
    const Field f = Field::sample(g, [](double x, double y) { return std::sin(2 * x) * std::cos(3 * y); });
    CHECK(oracle::max_abs_diff(frac_laplacian(f, 1.0), 13.0 * f) < 1e-12);

    // against an independently coded second-derivative path on random data
    std::mt19937 rng(3);
    const Grid h = make_grid(8, -16, 16, -16, 16);
    const Field r = oracle::random_field(h, rng);
    const Field dxx = oracle::apply_multiplier(r, [](double a, double) { return a * a; });
    const Field dyy = oracle::apply_multiplier(r, [](double, double b) { return b * b; });
    CHECK(rel_diff(frac_laplacian(r, 1.0), dxx + dyy) < 1e-12);
  }
  SECTION("semigroup and self-adjointness") {
    std::mt19937 rng(11);
    const Grid h = make_grid(32, -16, 16, -16, 16);
    const Field u = oracle::random_smooth(h, rng, 5, 1.0);
    const Field v = oracle::random_smooth(h, rng, 5, 1.0);
    for (auto [b1, b2] : {std::pair{0.3, 0.6}, std::pair{0.5, 0.5}, std::pair{0.25, 0.9}}) {
      CHECK(rel_diff(frac_laplacian(frac_laplacian(u, b1), b2), frac_laplacian(u, b1 + b2)) < 1e-12);
      const double lhs = inner_l2(frac_laplacian(u, b1 + b2), v);
      const double rhs = inner_l2(frac_laplacian(u, b1), frac_laplacian(v, b2));
      CHECK(lhs == Approx(rhs).epsilon(1e-11));
    }
  }
}

TEST_CASE("inner products and norms", "[spectral][norms]") {
  SECTION("inner_l2") {
    const Grid big = make_grid(8, -16, 16, -16, 16);
    CHECK(inner_l2(Field::constant(big, 1.0), Field::constant(big, 1.0)) == Approx(1024.0));

    const Grid g = two_pi(16);
    const Field c = Field::sample(g, [](double x, double) { return std::cos(x); });
    const Field s = Field::sample(g, [](double x, double) { return std::sin(x); });
    CHECK(std::abs(inner_l2(c, s)) < 1e-13);
    CHECK(inner_l2(c, c) == Approx(2 * pi * pi).epsilon(1e-14));
    CHECK(inner_l2(c, s) == Approx(inner_l2(s, c)).margin(1e-15));
  }
  SECTION("seminorm") {
    const Grid g = two_pi(16);
    CHECK(seminorm(Field::constant(g, 5.0), 1.0) < 1e-13);
    const Field c = Field::sample(g, [](double x, double) { return std::cos(x); });
    CHECK(seminorm(c, 1.0) == Approx(pi * std::sqrt(2.0)).epsilon(1e-13));
    CHECK(seminorm(c, 0.0) == Approx(std::sqrt(2 * pi * pi)).epsilon(1e-13));

    // direct-summation oracle on a random field with a non-trivial weight
    std::mt19937 rng(5);
    const Grid h = make_grid(8, -16, 16, -10, 10);
    const Field f = oracle::random_field(h, rng);
    for (double r : {0.0, 0.6, 1.0}) {
      double sum = 0.0;
      for (int sx = -4; sx < 4; ++sx)
        for (int l = -4; l < 4; ++l) {
          const double k2 = std::pow(oracle::kx(h, sx), 2) + std::pow(oracle::ky(h, l), 2);
          const double w = k2 == 0.0 ? (r == 0.0 ? 1.0 : 0.0) : std::pow(k2, r);
          sum += std::norm(oracle::dft_coeff(f, sx, l)) * w;
        }
      CHECK(seminorm(f, r) == Approx(std::sqrt(h.area() * sum)).epsilon(1e-12));
    }
    CHECK(seminorm(f, 0.0) == Approx(l2_norm(f)).epsilon(1e-12));
    CHECK_THROWS_AS(seminorm(f, -1.0), SpectralError);
  }
  SECTION("linf_norm") {
    const Grid g = two_pi(8);
    CHECK(linf_norm(Field(g)) == 0.0);
    Field f(g);
    f(3, 5) = -7.0;
    CHECK(linf_norm(f) == 7.0);
    const Field c = Field::sample(g, [](double x, double) { return std::cos(x); });
    CHECK(linf_norm(c) == 1.0);
  }
}

TEST_CASE("apply_A_inverse", "[spectral][A]") {
  SECTION("zero mode multiplier") {
    const Grid g = make_grid(8, -16, 16, -16, 16);
    const Problem p = problem_on(g, 1.5, 1.0, 0.0, 1.0);
    const Field out = apply_A_inverse(Field::constant(g, 3.0), 0.1, p);
    CHECK(linf_norm(out - Field::constant(g, 3.0 / 2.1)) < 1e-14);
  }
  SECTION("unit mode, alpha = 2") {
    const Grid g = two_pi(8);
    const Problem p = problem_on(g, 2.0, 1.0, 1.0, 1.0);
    const Field f = Field::sample(g, [](double x, double) { return std::cos(x); });
    CHECK(oracle::max_abs_diff(apply_A_inverse(f, 0.1, p), (1.0 / 2.205) * f) < 1e-14);
  }
  SECTION("A composed with its inverse is the identity") {
    std::mt19937 rng(9);
    const Grid g = make_grid(16, -16, 16, -16, 16);
    for (auto [g1, g2] : {std::pair{0.0, 0.0}, std::pair{1.0, 1.0}, std::pair{0.5, 0.0}}) {
      const Problem p = problem_on(g, 1.3, 2.0, g1, g2);
      const double tau = 0.37;
      const Field f = oracle::random_field(g, rng);
      const DiagonalOperator a(g, [&](double k2) { return a_symbol(k2, tau, p); });
      CHECK(rel_diff(a.apply(apply_A_inverse(f, tau, p)), f) < 1e-12);
      // every multiplier of the inverse is at most 1/2
      const DiagonalOperator ainv(g, [&](double k2) { return 1.0 / a_symbol(k2, tau, p); });
      for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) CHECK(ainv.multiplier(i, j) <= 0.5);
      if (g1 == 0.0 && g2 == 0.0) {
        for (int i = 0; i < 16; ++i)
          CHECK(ainv.multiplier(i, 3) ==
                Approx(1.0 / (2.0 + 0.5 * tau * tau * p.kappa * std::pow(g.k2(i, 3), 0.65))));
      }
    }
  }
}
