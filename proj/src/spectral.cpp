#include "savwave/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "savwave/model.hpp"

namespace savwave {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans are made once per size with FFTW_UNALIGNED so they can run on any
// std::vector storage.
struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan c2c_backward = nullptr;

  explicit Plans(int n) {
    const std::size_t nh = static_cast<std::size_t>(n / 2 + 1);
    std::vector<double> real(static_cast<std::size_t>(n) * n);
    std::vector<std::complex<double>> half(static_cast<std::size_t>(n) * nh);
    std::vector<std::complex<double>> full(static_cast<std::size_t>(n) * n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c = fftw_plan_dft_r2c_2d(n, n, real.data(), as_fftw(half.data()), flags);
    c2r = fftw_plan_dft_c2r_2d(n, n, as_fftw(half.data()), real.data(), flags);
    c2c_backward = fftw_plan_dft_2d(n, n, as_fftw(full.data()), as_fftw(full.data()),
                                    FFTW_BACKWARD, flags);
  }
  ~Plans() {
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
    fftw_destroy_plan(c2c_backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;

  static fftw_complex* as_fftw(std::complex<double>* p) {
    return reinterpret_cast<fftw_complex*>(p);
  }
};

const Plans& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Plans>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Plans>(n);
  return *slot;
}

std::size_t half_width(const Grid& g) { return static_cast<std::size_t>(g.n() / 2 + 1); }

// Unnormalized r2c transform, n x (n/2+1) output.
std::vector<std::complex<double>> r2c(const Field& f) {
  const Grid& g = f.grid();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(g.n()) * half_width(g));
  std::vector<double> in(f.values().begin(), f.values().end());
  fftw_execute_dft_r2c(plans_for(g.n()).r2c, in.data(), Plans::as_fftw(out.data()));
  return out;
}

// Unnormalized c2r transform; consumes `half`.
Field c2r(const Grid& g, std::vector<std::complex<double>>& half) {
  Field out(g);
  fftw_execute_dft_c2r(plans_for(g.n()).c2r, Plans::as_fftw(half.data()), out.values().data());
  return out;
}

// Phase of the grid origin: forward coefficients are taken relative to x = 0.
std::complex<double> origin_phase(const Grid& g, int i, int j) {
  const double angle = g.kx(i) * g.xmin() + g.ky(j) * g.ymin();
  return {std::cos(angle), -std::sin(angle)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(int n, double xmin, double xmax, double ymin, double ymax)
    : n_(n), xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax) {
  if (n < 2 || n % 2 != 0)
    throw SpectralError("grid size must be an even integer >= 2, got " + std::to_string(n));
  if (!(xmax > xmin) || !(ymax > ymin) || !std::isfinite(xmax - xmin) ||
      !std::isfinite(ymax - ymin))
    throw SpectralError("grid bounds must satisfy xmax > xmin and ymax > ymin");
}

double Grid::kx(int i) const noexcept { return 2.0 * std::numbers::pi * mode(i) / lx(); }
double Grid::ky(int j) const noexcept { return 2.0 * std::numbers::pi * mode(j) / ly(); }

double Grid::k2(int i, int j) const noexcept {
  const double a = kx(i), b = ky(j);
  return a * a + b * b;
}

std::vector<double> Grid::kx_values() const {
  std::vector<double> k(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) k[i] = kx(i);
  return k;
}

std::vector<double> Grid::ky_values() const {
  std::vector<double> k(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) k[j] = ky(j);
  return k;
}

Grid make_grid(int n, double xmin, double xmax, double ymin, double ymax) {
  return Grid(n, xmin, xmax, ymin, ymax);
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw SpectralError(std::string(what) + ": fields live on different grids");
}

// ---------------------------------------------------------------------------
// Field

Field::Field(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw SpectralError("field has " + std::to_string(values_.size()) + " values, grid needs " +
                        std::to_string(grid_.size()));
}

Field Field::sample(Grid grid, const std::function<double(double, double)>& f) {
  Field out(grid);
  for (int i = 0; i < grid.n(); ++i)
    for (int j = 0; j < grid.n(); ++j) out(i, j) = f(grid.x(i), grid.y(j));
  return out;
}

Field Field::constant(Grid grid, double c) {
  return Field(grid, std::vector<double>(grid.size(), c));
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) { return axpy(1.0, other); }
Field& Field::operator-=(const Field& other) { return axpy(-1.0, other); }

Field& Field::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

Field& Field::axpy(double a, const Field& x) {
  require_same_grid(grid_, x.grid_, "axpy");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += a * x.values_[k];
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }

// ---------------------------------------------------------------------------
// Spectrum and transforms

Spectrum::Spectrum(Grid grid) : grid_(grid), coeffs_(grid.size()) {}

Spectrum::Spectrum(Grid grid, std::vector<std::complex<double>> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) throw SpectralError("spectrum size does not match grid");
}

Spectrum forward(const Field& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const std::size_t nh = half_width(g);
  const auto half = r2c(f);
  const double scale = 1.0 / static_cast<double>(g.size());

  Spectrum s(g);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::complex<double> c;
      if (static_cast<std::size_t>(j) < nh)
        c = half[static_cast<std::size_t>(i) * nh + j];
      else
        c = std::conj(half[static_cast<std::size_t>((n - i) % n) * nh + (n - j)]);
      s(i, j) = c * scale * origin_phase(g, i, j);
    }
  }
  return s;
}

Field inverse(const Spectrum& s, double* imag_residue) {
  const Grid& g = s.grid();
  const int n = g.n();
  std::vector<std::complex<double>> buf(g.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      buf[static_cast<std::size_t>(i) * n + j] = s(i, j) * std::conj(origin_phase(g, i, j));
  fftw_execute_dft(plans_for(n).c2c_backward, Plans::as_fftw(buf.data()),
                   Plans::as_fftw(buf.data()));

  Field out(g);
  double residue = 0.0;
  for (std::size_t k = 0; k < buf.size(); ++k) {
    out[k] = buf[k].real();
    residue = std::max(residue, std::abs(buf[k].imag()));
  }
  if (imag_residue) *imag_residue = residue;
  return out;
}

// ---------------------------------------------------------------------------
// Diagonal operators

DiagonalOperator::DiagonalOperator(Grid grid, const std::function<double(double)>& symbol)
    : grid_(grid), half_(static_cast<std::size_t>(grid.n()) * half_width(grid)) {
  const std::size_t nh = half_width(grid);
  for (int i = 0; i < grid.n(); ++i)
    for (std::size_t j = 0; j < nh; ++j)
      half_[static_cast<std::size_t>(i) * nh + j] = symbol(grid.k2(i, static_cast<int>(j)));
}

double DiagonalOperator::multiplier(int i, int j) const {
  const int n = grid_.n();
  const std::size_t nh = half_width(grid_);
  // The symbol depends on k^2 only, so (i, j) and (-i, -j) share a value.
  if (static_cast<std::size_t>(j) >= nh) {
    i = (n - i) % n;
    j = n - j;
  }
  return half_[static_cast<std::size_t>(i) * nh + j];
}

Field DiagonalOperator::apply(const Field& f) const {
  require_same_grid(grid_, f.grid(), "DiagonalOperator::apply");
  auto half = r2c(f);
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (std::size_t k = 0; k < half.size(); ++k) half[k] *= half_[k] * scale;
  return c2r(grid_, half);
}

double frac_symbol(double k2, double beta) {
  if (k2 == 0.0) return beta == 0.0 ? 1.0 : 0.0;
  return std::pow(k2, beta);
}

Field frac_laplacian(const Field& f, double beta) {
  if (!(beta >= 0.0)) throw SpectralError("fractional power must be non-negative");
  DiagonalOperator op(f.grid(), [beta](double k2) { return frac_symbol(k2, beta); });
  return op.apply(f);
}

// ---------------------------------------------------------------------------
// Inner products and norms

double inner_l2(const Field& f, const Field& g) {
  require_same_grid(f.grid(), g.grid(), "inner_l2");
  double sum = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) sum += f[k] * g[k];
  return sum * f.grid().hx() * f.grid().hy();
}

double seminorm(const Field& f, double r) {
  if (!(r >= 0.0)) throw SpectralError("seminorm order must be non-negative");
  const Grid& g = f.grid();
  const int n = g.n();
  const std::size_t nh = half_width(g);
  const auto half = r2c(f);
  // Columns 1..n/2-1 of the half spectrum stand for two conjugate modes each.
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nh; ++j) {
      const double weight = (j == 0 || j == nh - 1) ? 1.0 : 2.0;
      sum += weight * std::norm(half[static_cast<std::size_t>(i) * nh + j]) *
             frac_symbol(g.k2(i, static_cast<int>(j)), r);
    }
  }
  const double n2 = static_cast<double>(g.size());
  return std::sqrt(g.area() * sum / (n2 * n2));
}

double l2_norm(const Field& f) { return std::sqrt(inner_l2(f, f)); }

double linf_norm(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double a_symbol(double k2, double tau, const Problem& p) {
  return (2.0 + tau * p.gamma2) +
         (0.5 * tau * tau * p.kappa + tau * p.gamma1) * frac_symbol(k2, 0.5 * p.alpha);
}

Field apply_A_inverse(const Field& f, double tau, const Problem& p) {
  DiagonalOperator op(f.grid(), [&](double k2) { return 1.0 / a_symbol(k2, tau, p); });
  return op.apply(f);
}

}  // namespace savwave
