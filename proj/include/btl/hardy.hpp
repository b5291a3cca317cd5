#pragma once

// Hardy-space operator data for trigonometric polynomial symbols: block
// Toeplitz finite sections, the finite Hankel matrices their commutation
// defects live on, and closed-form images of reproducing kernels under
// Hankel operators.

#include "btl/symbol.hpp"

#include <vector>

namespace btl {

// Leading N x N block section of the Toeplitz operator, block (i, j) = A_{i-j}.
template <class Real = double>
struct ToeplitzSection {
  Eigen::Index block_size = 0;
  int sections = 0;
  MatrixC<Real> data;
};

template <class Real>
ToeplitzSection<Real> toeplitz_section(const MatrixSymbol<Real>& f, int sections) {
  if (sections < 1) throw std::invalid_argument("toeplitz_section: need N >= 1");
  const Eigen::Index n = f.block_size();
  ToeplitzSection<Real> t{n, sections, MatrixC<Real>::Zero(sections * n, sections * n)};
  for (int i = 0; i < sections; ++i)
    for (int j = 0; j < sections; ++j)
      t.data.block(i * n, j * n, n, n) = f.coeff(i - j);
  return t;
}

// Finite Hankel matrix, block (j, k) = \hat f(-(j+k+1)) for 0 <= j, k < dim.
// With dim = deg_minus(f) this carries the whole (finite rank) operator.
template <class Real = double>
struct FiniteHankel {
  Eigen::Index block_size = 0;
  int dim = 0;
  MatrixC<Real> data;
};

template <class Real>
FiniteHankel<Real> hankel_matrix(const MatrixSymbol<Real>& f, int dim) {
  if (dim < 0) throw std::invalid_argument("hankel_matrix: need dim >= 0");
  const Eigen::Index n = f.block_size();
  FiniteHankel<Real> h{n, dim, MatrixC<Real>::Zero(dim * n, dim * n)};
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k)
      h.data.block(j * n, k * n, n, n) = f.coeff(-(j + k + 1));
  return h;
}

template <class Real>
FiniteHankel<Real> hankel_matrix(const MatrixSymbol<Real>& f) {
  return hankel_matrix(f, f.deg_minus());
}

// Exact matrix of T_{FG} - T_F T_G = H_{F^*}^* H_G on the leading
// D = max(deg_plus F, deg_minus G) block coordinates.
template <class Real>
MatrixC<Real> semicommutator(const MatrixSymbol<Real>& f, const MatrixSymbol<Real>& g) {
  check_same_size(f, g, "semicommutator");
  const int d = std::max(f.deg_plus(), g.deg_minus());
  FiniteHankel<Real> hfs = hankel_matrix(adjoint(f), d);
  FiniteHankel<Real> hg = hankel_matrix(g, d);
  return hfs.data.adjoint() * hg.data;
}

// Normalized reproducing kernel k_z truncated to its first `length` Taylor
// coefficients: sqrt(1 - |z|^2) conj(z)^k on w^k.
template <class Real = double>
struct KernelVec {
  std::complex<Real> z;
  VectorC<Real> coeffs;
};

template <class Real>
KernelVec<Real> kernel_vec(const DiskPoint<Real>& z, int length) {
  if (length < 1) throw std::invalid_argument("kernel_vec: need length >= 1");
  const std::complex<Real> zc = std::conj(z.value());
  const Real amp = std::sqrt(Real(1) - std::norm(z.value()));
  KernelVec<Real> k{z.value(), VectorC<Real>(length)};
  std::complex<Real> p(Real(1), Real(0));
  for (int t = 0; t < length; ++t) {
    k.coeffs[t] = amp * p;
    p *= zc;
  }
  return k;
}

// H_f k_z = (f_- - f_-(z)) k_z for a scalar symbol f. The multiplier is kept
// as an exact symbol so inner products close via the harmonic extension; the
// same function is also a polynomial in conj(w) of degree deg_minus(f), whose
// coefficients on conj(w)^1..conj(w)^d are stored in `anti`.
template <class Real = double>
struct HankelOnKernel {
  std::complex<Real> z;
  MatrixSymbol<Real> multiplier;  // f_- - f_-(z), scalar
  VectorC<Real> anti;             // exact coefficients, basis conj(w)^{t+1}
};

template <class Real>
HankelOnKernel<Real> hankel_on_kernel(const MatrixSymbol<Real>& f, const DiskPoint<Real>& z) {
  if (f.block_size() != 1)
    throw std::invalid_argument("hankel_on_kernel: scalar symbol required");
  using Complex = std::complex<Real>;
  const MatrixSymbol<Real> fm = split(f).minus;
  const Complex fmz = poisson_ext(fm, z)(0, 0);
  MatrixSymbol<Real> mult = fm - scalar_symbol<Real>({{0, fmz}});

  const int d = fm.deg_minus();
  const Complex zc = std::conj(z.value());
  const Real amp = std::sqrt(Real(1) - std::norm(z.value()));
  VectorC<Real> anti = VectorC<Real>::Zero(d);
  // (conj(w)^q - conj(z)^q) k_z = sqrt(1-|z|^2) sum_{t=1}^{q} conj(z)^{q-t} conj(w)^t
  for (int t = 1; t <= d; ++t) {
    Complex acc(0, 0);
    for (int q = t; q <= d; ++q) acc += fm.coeff(-q)(0, 0) * ipow(zc, q - t);
    anti[t - 1] = amp * acc;
  }
  return HankelOnKernel<Real>{z.value(), std::move(mult), std::move(anti)};
}

// <u k_z, v k_z> = (u v^*)(z), exact for polynomial multipliers.
template <class Real>
std::complex<Real> inner(const HankelOnKernel<Real>& a, const HankelOnKernel<Real>& b) {
  if (a.z != b.z) throw std::invalid_argument("inner: kernel points differ");
  return poisson_ext(multiply(a.multiplier, adjoint(b.multiplier)),
                     DiskPoint<Real>(a.z))(0, 0);
}

template <class Real>
Real norm(const HankelOnKernel<Real>& a) {
  return std::sqrt(std::max(Real(0), std::real(inner(a, a))));
}

// sum_i u_i (x) v_i acting by h -> sum_i <h, v_i> u_i on coefficient vectors.
template <class Real = double>
struct RankOneSum {
  std::vector<VectorC<Real>> left;
  std::vector<VectorC<Real>> right;

  VectorC<Real> apply(const VectorC<Real>& h) const {
    if (left.empty()) return VectorC<Real>::Zero(h.size());
    VectorC<Real> out = VectorC<Real>::Zero(left.front().size());
    for (std::size_t i = 0; i < left.size(); ++i) out += right[i].dot(h) * left[i];
    return out;
  }
};

// The n x n grid of rank-one sums from the kernel identity for
// H_F^* H_G - T_{phi_z}^* H_F^* H_G T_{phi_z}: block (i, k) collects
// sum_j (H_{f_ji} k_z) (x) (H_{g_jk} k_z). Vectors are the exact
// anti-analytic coefficient columns padded to a common dimension.
template <class Real = double>
struct RankOneDefect {
  Eigen::Index n = 0;
  int dim = 0;
  std::vector<RankOneSum<Real>> blocks;  // row-major (i, k)

  const RankOneSum<Real>& block(Eigen::Index i, Eigen::Index k) const {
    return blocks[static_cast<std::size_t>(i * n + k)];
  }
};

template <class Real>
RankOneDefect<Real> rank_one_defect(const MatrixSymbol<Real>& f, const MatrixSymbol<Real>& g,
                                    const DiskPoint<Real>& z) {
  check_same_size(f, g, "rank_one_defect");
  const Eigen::Index n = f.block_size();
  const int dim = std::max(f.deg_minus(), g.deg_minus());

  auto padded = [&](const MatrixSymbol<Real>& m, Eigen::Index r, Eigen::Index c) {
    HankelOnKernel<Real> h = hankel_on_kernel(entry(m, r, c), z);
    VectorC<Real> v = VectorC<Real>::Zero(dim);
    v.head(h.anti.size()) = h.anti;
    return v;
  };

  RankOneDefect<Real> out{n, dim, {}};
  out.blocks.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) {
      RankOneSum<Real> s;
      s.left.reserve(n);
      s.right.reserve(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        s.left.push_back(padded(f, j, i));
        s.right.push_back(padded(g, j, k));
      }
      out.blocks.push_back(std::move(s));
    }
  return out;
}

// Taylor coefficients of the disk automorphism phi_z(w) = (z - w)/(1 - conj(z) w)
// through degree N: phi_z = z - (1 - |z|^2) sum_{k>=1} conj(z)^{k-1} w^k.
template <class Real>
MatrixSymbol<Real> mobius_coeffs(const DiskPoint<Real>& z, int degree) {
  if (degree < 1) throw std::invalid_argument("mobius_coeffs: need degree >= 1");
  using Complex = std::complex<Real>;
  const Complex zv = z.value();
  const Complex zc = std::conj(zv);
  const Real w = Real(1) - std::norm(zv);
  std::map<int, Complex> m;
  m.emplace(0, zv);
  Complex p(Real(1), Real(0));
  for (int k = 1; k <= degree; ++k) {
    m.emplace(k, -w * p);
    p *= zc;
  }
  return scalar_symbol<Real>(m);
}

}  // namespace btl
