#pragma once

// Matrix-valued Laurent polynomial symbols on the unit circle and their
// harmonic (Poisson) extensions into the open disk.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <utility>

namespace btl {

template <class Real>
using MatrixC = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <class Real>
using VectorC = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

// A point z with |z| < 1. Construction fails on or outside the circle.
template <class Real = double>
class DiskPoint {
 public:
  using Complex = std::complex<Real>;

  explicit DiskPoint(Complex z) : z_(z) {
    if (!(std::abs(z) < Real(1)))
      throw std::domain_error("DiskPoint: |z| must be < 1");
  }
  DiskPoint(Real re, Real im) : DiskPoint(Complex(re, im)) {}

  Complex value() const { return z_; }
  Real abs() const { return std::abs(z_); }

 private:
  Complex z_;
};

// Finite-support map k -> A_k representing F(w) = sum_k A_k w^k with n x n
// complex coefficient blocks. Coefficients whose max-abs entry falls below
// the drop tolerance are not stored, so the zero symbol has an empty map.
template <class Real = double>
class MatrixSymbol {
 public:
  using Complex = std::complex<Real>;
  using Matrix = MatrixC<Real>;
  using CoeffMap = std::map<int, Matrix>;

  static constexpr Real coeff_drop_tol() { return Real(1e-15); }

  explicit MatrixSymbol(Eigen::Index n) : n_(n) { check_n(); }

  MatrixSymbol(Eigen::Index n, CoeffMap coeffs) : n_(n) {
    check_n();
    for (auto& [k, a] : coeffs) {
      if (a.rows() != n_ || a.cols() != n_)
        throw std::invalid_argument("MatrixSymbol: coefficient block size mismatch");
      if (max_abs_entry(a) >= coeff_drop_tol()) coeffs_.emplace(k, std::move(a));
    }
  }

  Eigen::Index block_size() const { return n_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  // Largest k with a stored coefficient, clamped at 0.
  int deg_plus() const {
    return coeffs_.empty() ? 0 : std::max(0, coeffs_.rbegin()->first);
  }
  // Largest |k| over stored negative k, 0 when none.
  int deg_minus() const {
    return coeffs_.empty() ? 0 : std::max(0, -coeffs_.begin()->first);
  }
  bool is_analytic() const { return deg_minus() == 0; }

  Matrix coeff(int k) const {
    auto it = coeffs_.find(k);
    if (it != coeffs_.end()) return it->second;
    return Matrix::Zero(n_, n_);
  }

  static Real max_abs_entry(const Matrix& a) {
    return a.size() == 0 ? Real(0) : a.cwiseAbs().maxCoeff();
  }

 private:
  void check_n() const {
    if (n_ < 1) throw std::invalid_argument("MatrixSymbol: block size must be >= 1");
  }

  Eigen::Index n_;
  CoeffMap coeffs_;
};

template <class Real>
MatrixSymbol<Real> constant_symbol(const MatrixC<Real>& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("constant_symbol: square block required");
  typename MatrixSymbol<Real>::CoeffMap m;
  m.emplace(0, a);
  return MatrixSymbol<Real>(a.rows(), std::move(m));
}

template <class Real>
MatrixSymbol<Real> monomial_symbol(int k, const MatrixC<Real>& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("monomial_symbol: square block required");
  typename MatrixSymbol<Real>::CoeffMap m;
  m.emplace(k, a);
  return MatrixSymbol<Real>(a.rows(), std::move(m));
}

// n = 1 convenience: map of k -> scalar coefficient.
template <class Real = double>
MatrixSymbol<Real> scalar_symbol(const std::map<int, std::complex<Real>>& coeffs) {
  typename MatrixSymbol<Real>::CoeffMap m;
  for (const auto& [k, c] : coeffs) {
    MatrixC<Real> a(1, 1);
    a(0, 0) = c;
    m.emplace(k, std::move(a));
  }
  return MatrixSymbol<Real>(1, std::move(m));
}

template <class Real>
void check_same_size(const MatrixSymbol<Real>& f, const MatrixSymbol<Real>& g,
                     const char* who) {
  if (f.block_size() != g.block_size())
    throw std::invalid_argument(std::string(who) + ": block size mismatch");
}

template <class Real>
Real max_abs(const MatrixSymbol<Real>& f) {
  Real m = 0;
  for (const auto& [k, a] : f.coeffs()) m = std::max(m, MatrixSymbol<Real>::max_abs_entry(a));
  return m;
}

// F(e^{i theta}) = sum_k A_k e^{i k theta}.
template <class Real>
MatrixC<Real> eval(const MatrixSymbol<Real>& f, Real theta) {
  using Complex = std::complex<Real>;
  MatrixC<Real> out = MatrixC<Real>::Zero(f.block_size(), f.block_size());
  for (const auto& [k, a] : f.coeffs())
    out += std::exp(Complex(0, theta * Real(k))) * a;
  return out;
}

// (F*)_k = (A_{-k})^H, the pointwise conjugate transpose on the circle.
template <class Real>
MatrixSymbol<Real> adjoint(const MatrixSymbol<Real>& f) {
  typename MatrixSymbol<Real>::CoeffMap m;
  for (const auto& [k, a] : f.coeffs()) m.emplace(-k, a.adjoint().eval());
  return MatrixSymbol<Real>(f.block_size(), std::move(m));
}

template <class Real>
MatrixSymbol<Real> operator+(const MatrixSymbol<Real>& f, const MatrixSymbol<Real>& g) {
  check_same_size(f, g, "operator+");
  typename MatrixSymbol<Real>::CoeffMap m = f.coeffs();
  for (const auto& [k, b] : g.coeffs()) {
    auto it = m.find(k);
    if (it == m.end())
      m.emplace(k, b);
    else
      it->second += b;
  }
  return MatrixSymbol<Real>(f.block_size(), std::move(m));
}

template <class Real>
MatrixSymbol<Real> operator*(const std::complex<Real>& c, const MatrixSymbol<Real>& f) {
  typename MatrixSymbol<Real>::CoeffMap m;
  for (const auto& [k, a] : f.coeffs()) m.emplace(k, (c * a).eval());
  return MatrixSymbol<Real>(f.block_size(), std::move(m));
}

template <class Real>
MatrixSymbol<Real> operator-(const MatrixSymbol<Real>& f) {
  return std::complex<Real>(-1) * f;
}

template <class Real>
MatrixSymbol<Real> operator-(const MatrixSymbol<Real>& f, const MatrixSymbol<Real>& g) {
  return f + (-g);
}

// Coefficient convolution (FG)_m = sum_p A_p B_{m-p}.
template <class Real>
MatrixSymbol<Real> multiply(const MatrixSymbol<Real>& f, const MatrixSymbol<Real>& g) {
  check_same_size(f, g, "multiply");
  typename MatrixSymbol<Real>::CoeffMap m;
  for (const auto& [p, a] : f.coeffs())
    for (const auto& [q, b] : g.coeffs()) {
      auto it = m.find(p + q);
      if (it == m.end())
        m.emplace(p + q, (a * b).eval());
      else
        it->second += a * b;
    }
  return MatrixSymbol<Real>(f.block_size(), std::move(m));
}

template <class Real>
MatrixSymbol<Real> operator*(const MatrixSymbol<Real>& f, const MatrixSymbol<Real>& g) {
  return multiply(f, g);
}

// F = F_+ + F_- with the constant block assigned to the analytic half.
template <class Real = double>
struct SplitSymbol {
  MatrixSymbol<Real> plus;
  MatrixSymbol<Real> minus;
};

template <class Real>
SplitSymbol<Real> split(const MatrixSymbol<Real>& f) {
  typename MatrixSymbol<Real>::CoeffMap p, m;
  for (const auto& [k, a] : f.coeffs()) (k >= 0 ? p : m).emplace(k, a);
  return SplitSymbol<Real>{MatrixSymbol<Real>(f.block_size(), std::move(p)),
                           MatrixSymbol<Real>(f.block_size(), std::move(m))};
}

// z^e for integer e >= 0 without the complex pow corner cases at z = 0.
template <class Real>
std::complex<Real> ipow(std::complex<Real> base, int e) {
  std::complex<Real> acc(Real(1), Real(0));
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

// Harmonic extension: h(z) = sum_{k>=0} A_k z^k + sum_{k<0} A_k conj(z)^{|k|}.
template <class Real>
MatrixC<Real> poisson_ext(const MatrixSymbol<Real>& f, const DiskPoint<Real>& z) {
  using Complex = std::complex<Real>;
  const Complex zv = z.value();
  const Complex zc = std::conj(zv);
  MatrixC<Real> out = MatrixC<Real>::Zero(f.block_size(), f.block_size());
  for (const auto& [k, a] : f.coeffs()) {
    Complex w = k >= 0 ? ipow(zv, k) : ipow(zc, -k);
    out += w * a;
  }
  return out;
}

// Extension at z of (M1 - M1(z)) (M2 - M2(z))^*, exact in coefficient space.
template <class Real>
MatrixC<Real> cross_ext(const MatrixSymbol<Real>& m1, const MatrixSymbol<Real>& m2,
                        const DiskPoint<Real>& z) {
  check_same_size(m1, m2, "cross_ext");
  MatrixSymbol<Real> d1 = m1 - constant_symbol<Real>(poisson_ext(m1, z));
  MatrixSymbol<Real> d2 = m2 - constant_symbol<Real>(poisson_ext(m2, z));
  return poisson_ext(multiply(d1, adjoint(d2)), z);
}

// |M - M(z)|^2(z) with |A|^2 = A A^*; Hermitian and positive semidefinite.
template <class Real>
MatrixC<Real> mod_sq_ext(const MatrixSymbol<Real>& m, const DiskPoint<Real>& z) {
  MatrixC<Real> p = cross_ext(m, m, z);
  return ((p + p.adjoint()) / Real(2)).eval();
}

// Scalar symbol sitting at entry (i, j).
template <class Real>
MatrixSymbol<Real> entry(const MatrixSymbol<Real>& f, Eigen::Index i, Eigen::Index j) {
  if (i < 0 || j < 0 || i >= f.block_size() || j >= f.block_size())
    throw std::invalid_argument("entry: index out of range");
  typename MatrixSymbol<Real>::CoeffMap m;
  for (const auto& [k, a] : f.coeffs()) {
    MatrixC<Real> c(1, 1);
    c(0, 0) = a(i, j);
    m.emplace(k, std::move(c));
  }
  return MatrixSymbol<Real>(1, std::move(m));
}

// [[f11 f12],[f21 f22]] as a 2n x 2n symbol.
template <class Real>
MatrixSymbol<Real> block2x2(const MatrixSymbol<Real>& f11, const MatrixSymbol<Real>& f12,
                            const MatrixSymbol<Real>& f21, const MatrixSymbol<Real>& f22) {
  check_same_size(f11, f12, "block2x2");
  check_same_size(f11, f21, "block2x2");
  check_same_size(f11, f22, "block2x2");
  const Eigen::Index n = f11.block_size();
  typename MatrixSymbol<Real>::CoeffMap m;
  auto place = [&](const MatrixSymbol<Real>& f, Eigen::Index r, Eigen::Index c) {
    for (const auto& [k, a] : f.coeffs()) {
      auto it = m.find(k);
      if (it == m.end()) it = m.emplace(k, MatrixC<Real>::Zero(2 * n, 2 * n)).first;
      it->second.block(r * n, c * n, n, n) += a;
    }
  };
  place(f11, 0, 0);
  place(f12, 0, 1);
  place(f21, 1, 0);
  place(f22, 1, 1);
  return MatrixSymbol<Real>(2 * n, std::move(m));
}

using SymbolXd = MatrixSymbol<double>;
using DiskPointXd = DiskPoint<double>;

}  // namespace btl
