#pragma once

// Disk-parameter criteria for vanishing (semi)commutators of block Toeplitz
// operators, with the two-sided trace identity as a built-in cross check.

#include "btl/hardy.hpp"

#include <thread>
#include <vector>

namespace btl {

// Hermitian square root with eigenvalue clamping at zero. Eigenvalues below
// -tol * scale signal a fault in the caller's PSD construction.
template <class Real>
MatrixC<Real> psd_sqrt(const MatrixC<Real>& m, Real tol = Real(1e-12)) {
  Eigen::SelfAdjointEigenSolver<MatrixC<Real>> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("psd_sqrt: eigensolver failed");
  const Real scale = std::max(Real(1), m.cwiseAbs().maxCoeff());
  Eigen::Matrix<Real, Eigen::Dynamic, 1> ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol * scale)
      throw std::runtime_error("psd_sqrt: matrix is not positive semidefinite");
    ev[i] = std::max(Real(0), ev[i]);
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

template <class Real>
Real spectral_norm(const MatrixC<Real>& m) {
  if (m.size() == 0) return Real(0);
  Eigen::JacobiSVD<MatrixC<Real>> svd(m);
  return svd.singularValues().size() ? svd.singularValues()[0] : Real(0);
}

template <class Real = double>
struct CriterionReport {
  std::complex<Real> z;
  MatrixC<Real> left_factor;   // |(F_+)^* - (F_+)^*(z)|^2(z)
  MatrixC<Real> right_factor;  // |G_- - G_-(z)|^2(z)
  MatrixC<Real> criterion;     // left^{1/2} right^{1/2}
  Real norm = 0;               // spectral norm of criterion
  Real trace_value = 0;        // squared Frobenius norm = tr(left right)
};

// Pointwise witness for the semicommutator T_{FG} - T_F T_G: the criterion
// matrix vanishes for every z exactly when the defect operator is zero.
template <class Real>
CriterionReport<Real> criterion(const MatrixSymbol<Real>& f, const MatrixSymbol<Real>& g,
                                const DiskPoint<Real>& z) {
  check_same_size(f, g, "criterion");
  CriterionReport<Real> rep;
  rep.z = z.value();
  rep.left_factor = mod_sq_ext(adjoint(split(f).plus), z);
  rep.right_factor = mod_sq_ext(split(g).minus, z);
  rep.criterion = psd_sqrt(rep.left_factor) * psd_sqrt(rep.right_factor);
  rep.norm = spectral_norm(rep.criterion);
  rep.trace_value = rep.criterion.squaredNorm();
  return rep;
}

template <class Real = double>
struct TraceDefect {
  Real poisson = 0;  // tr[ |(F^*)_- - .|^2(z) |G_- - .|^2(z) ]
  Real gram = 0;     // same number through kernel-image Gram sums
  Real rel_gap = 0;
};

template <class Real>
TraceDefect<Real> trace_defect_paths(const MatrixSymbol<Real>& f, const MatrixSymbol<Real>& g,
                                     const DiskPoint<Real>& z) {
  check_same_size(f, g, "trace_defect");
  TraceDefect<Real> out;
  const MatrixSymbol<Real> fs = adjoint(f);
  out.poisson = std::real(
      (mod_sq_ext(split(fs).minus, z) * mod_sq_ext(split(g).minus, z)).trace());

  RankOneDefect<Real> d = rank_one_defect(fs, g, z);
  Real acc = 0;
  for (Eigen::Index i = 0; i < d.n; ++i)
    for (Eigen::Index k = 0; k < d.n; ++k) {
      const RankOneSum<Real>& blk = d.block(i, k);
      for (std::size_t p = 0; p < blk.left.size(); ++p)
        for (std::size_t q = 0; q < blk.left.size(); ++q)
          acc += std::real(blk.left[q].dot(blk.left[p]) *
                           std::conj(blk.right[q].dot(blk.right[p])));
    }
  out.gram = acc;
  out.rel_gap = std::abs(out.poisson - out.gram) / std::max(Real(1), std::abs(out.poisson));
  return out;
}

// Trace of the squared defect at z, computed two independent ways; a gap
// beyond 1e-9 relative indicates an internal fault and throws.
template <class Real>
Real trace_defect(const MatrixSymbol<Real>& f, const MatrixSymbol<Real>& g,
                  const DiskPoint<Real>& z, Real rel_tol = Real(1e-9)) {
  TraceDefect<Real> paths = trace_defect_paths(f, g, z);
  if (paths.rel_gap > rel_tol)
    throw std::runtime_error("trace_defect: extension and Gram paths disagree");
  return paths.poisson;
}

template <class Real = double>
struct CommutatorReport {
  CriterionReport<Real> report;
  Real commutation_residual = 0;  // max coefficient of FG - GF
};

// Commutator criterion through the stacked symbols B = [F -G; 0 0] and
// C = [G 0; F 0]; the 2n x 2n criterion vanishes for all z exactly when
// T_F T_G - T_G T_F = 0, provided FG = GF.
template <class Real>
CommutatorReport<Real> commutator_criterion(const MatrixSymbol<Real>& f,
                                            const MatrixSymbol<Real>& g,
                                            const DiskPoint<Real>& z) {
  check_same_size(f, g, "commutator_criterion");
  CommutatorReport<Real> out;
  out.commutation_residual = max_abs(multiply(f, g) - multiply(g, f));
  const MatrixSymbol<Real> zero(f.block_size());
  const MatrixSymbol<Real> b = block2x2(f, -g, zero, zero);
  const MatrixSymbol<Real> c = block2x2(g, zero, f, zero);
  out.report = criterion(b, c, z);
  return out;
}

// Self-commutator of T_F: the commutator criterion against F^*.
template <class Real>
CommutatorReport<Real> normality_criterion(const MatrixSymbol<Real>& f,
                                           const DiskPoint<Real>& z) {
  return commutator_criterion(f, adjoint(f), z);
}

template <class Real = double>
struct ZeroCheck {
  bool zero = false;
  Real max_abs_defect = 0;    // exact semicommutator route
  Real criterion_norm_z0 = 0; // criterion route at z = 0
};

// Exact coefficient route and criterion-at-zero route; the two must agree on
// the verdict or the check throws (they witness the same operator identity).
template <class Real>
ZeroCheck<Real> zero_semicommutator_check(const MatrixSymbol<Real>& f,
                                          const MatrixSymbol<Real>& g,
                                          Real exact_tol = Real(1e-12),
                                          Real criterion_tol = Real(1e-10)) {
  ZeroCheck<Real> out;
  MatrixC<Real> s = semicommutator(f, g);
  out.max_abs_defect = s.size() == 0 ? Real(0) : s.cwiseAbs().maxCoeff();
  out.criterion_norm_z0 = criterion(f, g, DiskPoint<Real>(Real(0), Real(0))).norm;
  out.zero = out.max_abs_defect <= exact_tol;
  const bool crit_zero = out.criterion_norm_z0 <= criterion_tol;
  if (out.zero != crit_zero)
    throw std::runtime_error("zero_semicommutator_check: routes disagree");
  return out;
}

template <class Real = double>
struct CommutatorZeroCheck {
  bool zero = false;
  Real max_abs_defect = 0;        // exact route on the stacked symbols
  Real criterion_norm_z0 = 0;     // criterion route at z = 0
  Real commutation_residual = 0;  // max abs of FG - GF
};

// Exact route: the commutator of the Toeplitz operators equals the
// semicommutator defect of the stacked symbols B = [[F,-G],[0,0]],
// C = [[G,0],[F,0]]. The criterion zero test is held to a looser tolerance:
// the product of matrix square roots carries a sqrt(eps) noise floor when
// the exact product vanishes with full-rank factors.
template <class Real>
CommutatorZeroCheck<Real> zero_commutator_check(const MatrixSymbol<Real>& f,
                                                const MatrixSymbol<Real>& g,
                                                Real exact_tol = Real(1e-12),
                                                Real criterion_tol = Real(1e-6)) {
  check_same_size(f, g, "zero_commutator_check");
  CommutatorZeroCheck<Real> out;
  out.commutation_residual = max_abs(f * g - g * f);
  const MatrixSymbol<Real> zero(f.block_size());
  const MatrixSymbol<Real> b = block2x2(f, -g, zero, zero);
  const MatrixSymbol<Real> c = block2x2(g, zero, f, zero);
  MatrixC<Real> s = semicommutator(b, c);
  out.max_abs_defect = s.size() == 0 ? Real(0) : s.cwiseAbs().maxCoeff();
  out.criterion_norm_z0 = criterion(b, c, DiskPoint<Real>(Real(0), Real(0))).norm;
  out.zero = out.max_abs_defect <= exact_tol;
  const bool crit_zero = out.criterion_norm_z0 <= criterion_tol;
  if (out.zero != crit_zero)
    throw std::runtime_error("zero_commutator_check: routes disagree");
  return out;
}

// Normality of T_F: the commutator check against F^*; the commutation
// residual reports how far the symbol itself is from normal.
template <class Real>
CommutatorZeroCheck<Real> normality_check(const MatrixSymbol<Real>& f,
                                          Real exact_tol = Real(1e-12),
                                          Real criterion_tol = Real(1e-6)) {
  return zero_commutator_check(f, adjoint(f), exact_tol, criterion_tol);
}

enum class ScanMode { Semicommutator, Commutator, Normality };

template <class Real = double>
struct ScanRow {
  Real r = 0;
  Real theta = 0;
  Real norm = 0;
  Real trace = 0;
};

template <class Real = double>
struct ScanTable {
  std::vector<ScanRow<Real>> rows;
};

// Criterion norm and trace over the polar grid radii x {2 pi j / angles}.
// Rows are ordered radius-major regardless of the worker count.
template <class Real>
ScanTable<Real> radial_scan(const MatrixSymbol<Real>& f, const MatrixSymbol<Real>& g,
                            const std::vector<Real>& radii, int angles, ScanMode mode,
                            int threads = 1) {
  if (angles < 1) throw std::invalid_argument("radial_scan: need angles >= 1");
  for (Real r : radii)
    if (!(r >= Real(0) && r < Real(1)))
      throw std::invalid_argument("radial_scan: radii must lie in [0, 1)");

  const Real pi = Real(3.14159265358979323846L);
  ScanTable<Real> table;
  table.rows.resize(radii.size() * static_cast<std::size_t>(angles));

  auto work = [&](std::size_t idx) {
    const std::size_t ir = idx / static_cast<std::size_t>(angles);
    const int ia = static_cast<int>(idx % static_cast<std::size_t>(angles));
    const Real r = radii[ir];
    const Real theta = Real(2) * pi * Real(ia) / Real(angles);
    const DiskPoint<Real> z(r * std::cos(theta), r * std::sin(theta));
    CriterionReport<Real> rep;
    switch (mode) {
      case ScanMode::Semicommutator: rep = criterion(f, g, z); break;
      case ScanMode::Commutator: rep = commutator_criterion(f, g, z).report; break;
      case ScanMode::Normality: rep = normality_criterion(f, z).report; break;
    }
    table.rows[idx] = ScanRow<Real>{r, theta, rep.norm, rep.trace_value};
  };

  const std::size_t total = table.rows.size();
  const int nthreads = std::max(1, threads);
  if (nthreads == 1 || total < 2) {
    for (std::size_t i = 0; i < total; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = static_cast<std::size_t>(t); i < total;
             i += static_cast<std::size_t>(nthreads))
          work(i);
      });
    for (auto& th : pool) th.join();
  }
  return table;
}

}  // namespace btl
