#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace savwave {

struct Problem;

/// Thrown for shape, grid or parameter violations in the spectral layer.
class SpectralError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform periodic grid on [xmin,xmax) x [ymin,ymax) with n points per axis.
///
/// Nodes sit at x_i = xmin + i*hx, i = 0..n-1 (likewise for y). Fourier modes
/// are stored in FFT order: storage index i maps to the signed integer mode
/// s = i for i < n/2 and s = i - n otherwise, so s ranges over -n/2..n/2-1.
/// Angular wavenumbers are 2*pi*s/(xmax-xmin); on a 2*pi box they coincide
/// with the integer modes.
class Grid {
public:
  Grid(int n, double xmin, double xmax, double ymin, double ymax);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }
  double xmin() const noexcept { return xmin_; }
  double xmax() const noexcept { return xmax_; }
  double ymin() const noexcept { return ymin_; }
  double ymax() const noexcept { return ymax_; }
  double lx() const noexcept { return xmax_ - xmin_; }
  double ly() const noexcept { return ymax_ - ymin_; }
  double hx() const noexcept { return lx() / n_; }
  double hy() const noexcept { return ly() / n_; }
  double area() const noexcept { return lx() * ly(); }

  double x(int i) const noexcept { return xmin_ + i * hx(); }
  double y(int j) const noexcept { return ymin_ + j * hy(); }

  /// Signed mode index for storage index i.
  int mode(int i) const noexcept { return i < n_ / 2 ? i : i - n_; }
  /// Storage index of signed mode s (any integer, reduced modulo n).
  int index(int s) const noexcept { return ((s % n_) + n_) % n_; }

  double kx(int i) const noexcept;
  double ky(int j) const noexcept;
  /// kx(i)^2 + ky(j)^2.
  double k2(int i, int j) const noexcept;

  /// Angular wavenumbers along x in FFT storage order.
  std::vector<double> kx_values() const;
  std::vector<double> ky_values() const;

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  int n_;
  double xmin_, xmax_, ymin_, ymax_;
};

Grid make_grid(int n, double xmin, double xmax, double ymin, double ymax);

/// Real nodal values on a Grid. Storage is x-major: value(i, j) = values[i*n + j].
class Field {
public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<double> values);

  /// Samples f(x, y) at every node.
  static Field sample(Grid grid, const std::function<double(double, double)>& f);
  static Field constant(Grid grid, double c);

  const Grid& grid() const noexcept { return grid_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * grid_.n() + j]; }
  double operator()(int i, int j) const {
    return values_[static_cast<std::size_t>(i) * grid_.n() + j];
  }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  bool all_finite() const noexcept;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double a);

  /// this += a * x
  Field& axpy(double a, const Field& x);

private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);

/// Full n x n complex Fourier coefficients, indexed like Field (storage order).
/// Normalized so that a constant field c has coefficient c at mode (0,0).
class Spectrum {
public:
  explicit Spectrum(Grid grid);
  Spectrum(Grid grid, std::vector<std::complex<double>> coeffs);

  const Grid& grid() const noexcept { return grid_; }
  std::span<std::complex<double>> coeffs() noexcept { return coeffs_; }
  std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }

  std::complex<double>& operator()(int i, int j) {
    return coeffs_[static_cast<std::size_t>(i) * grid_.n() + j];
  }
  std::complex<double> operator()(int i, int j) const {
    return coeffs_[static_cast<std::size_t>(i) * grid_.n() + j];
  }
  /// Coefficient of signed mode (s, l).
  std::complex<double> at_mode(int s, int l) const {
    return (*this)(grid_.index(s), grid_.index(l));
  }
  std::complex<double>& at_mode(int s, int l) { return (*this)(grid_.index(s), grid_.index(l)); }

private:
  Grid grid_;
  std::vector<std::complex<double>> coeffs_;
};

Spectrum forward(const Field& f);

/// Inverse transform. Returns the real part; if `imag_residue` is non-null it
/// receives max |Im| over the nodes.
Field inverse(const Spectrum& s, double* imag_residue = nullptr);

/// Mode-wise multiplier m(|k|^2) applied through real-to-complex transforms.
/// The multiplier is tabulated once over the half spectrum; apply() is safe
/// to call concurrently.
class DiagonalOperator {
public:
  DiagonalOperator(Grid grid, const std::function<double(double k2)>& symbol);

  const Grid& grid() const noexcept { return grid_; }
  Field apply(const Field& f) const;
  /// Multiplier at storage index (i, j) of the full spectrum.
  double multiplier(int i, int j) const;

private:
  Grid grid_;
  std::vector<double> half_;  // n x (n/2+1)
};

/// (k^2)^beta with the zero mode mapped to 1 when beta == 0 and 0 otherwise.
double frac_symbol(double k2, double beta);

/// (-Delta)^beta applied spectrally.
Field frac_laplacian(const Field& f, double beta);

/// Quadrature hx*hy*sum f*g.
double inner_l2(const Field& f, const Field& g);

/// sqrt(|Omega| * sum |u_hat|^2 (k^2)^r).
double seminorm(const Field& f, double r);

double l2_norm(const Field& f);
double linf_norm(const Field& f);

/// Symbol of the implicit operator A = (2 + tau*g2) I + (tau^2 kappa/2 + tau*g1)(-Delta)^{alpha/2}.
double a_symbol(double k2, double tau, const Problem& p);

/// A^{-1} f, A as above.
Field apply_A_inverse(const Field& f, double tau, const Problem& p);

/// Throws SpectralError unless a and b live on the same grid.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace savwave
