#pragma once

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "btl/hardy.hpp"
#include "btl/symbol.hpp"

namespace btl {

// Witness for a vanishing rank-one sum: A in the entrywise unit ball and a
// permutation R (stored as an index array, (R f)_i = f[perm[i]]) such that
// (R - A) f_k and A^* g vanish, with the achieved residual norms.
template <class Real = double>
struct Certificate {
  MatrixC<Real> A;
  std::vector<Eigen::Index> perm;
  std::vector<Real> residual_f;
  Real residual_g = 0;
};

template <class Real>
MatrixC<Real> perm_matrix(const std::vector<Eigen::Index>& perm) {
  const Eigen::Index n = static_cast<Eigen::Index>(perm.size());
  MatrixC<Real> r = MatrixC<Real>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) r(i, perm[static_cast<std::size_t>(i)]) = Real(1);
  return r;
}

class premise_violation : public std::runtime_error {
 public:
  premise_violation(int index, double norm)
      : std::runtime_error("rank-one sums do not vanish: k = " + std::to_string(index) +
                           ", norm = " + std::to_string(norm)),
        index_(index),
        norm_(norm) {}
  int index() const { return index_; }
  double norm() const { return norm_; }

 private:
  int index_;
  double norm_;
};

class not_zero_instance : public std::runtime_error {
 public:
  not_zero_instance(int index, double norm)
      : std::runtime_error("Hankel product sum is not zero: k = " + std::to_string(index) +
                           ", norm = " + std::to_string(norm)),
        index_(index),
        norm_(norm) {}
  int index() const { return index_; }
  double norm() const { return norm_; }

 private:
  int index_;
  double norm_;
};

namespace detail {

// Residuals of a candidate (A, R = I): per-k stacked norm of (I - A) f_k and
// the stacked norm of A^* g.
template <class Real>
std::pair<std::vector<Real>, Real> certificate_residuals(
    const MatrixC<Real>& a, const std::vector<std::vector<VectorC<Real>>>& fs,
    const std::vector<VectorC<Real>>& gs) {
  const std::size_t n = gs.size();
  std::vector<Real> res_f;
  res_f.reserve(fs.size());
  for (const auto& fk : fs) {
    Real acc = 0;
    for (std::size_t r = 0; r < n; ++r) {
      VectorC<Real> row = fk[r];
      for (std::size_t c = 0; c < n; ++c)
        row -= a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * fk[c];
      acc += row.squaredNorm();
    }
    res_f.push_back(std::sqrt(acc));
  }
  Real acc_g = 0;
  for (std::size_t c = 0; c < n; ++c) {
    VectorC<Real> col = VectorC<Real>::Zero(gs[0].size());
    for (std::size_t r = 0; r < n; ++r)
      col += std::conj(a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))) * gs[r];
    acc_g += col.squaredNorm();
  }
  return {std::move(res_f), std::sqrt(acc_g)};
}

// The inductive construction: peel off the g of largest norm, orthogonalize
// the rest against it, recurse. Returns the matrix and the visit order; the
// invariants are (I - A0) f_sigma = 0 and A0^* g_sigma = 0 when they hold
// (degenerate inputs can break the second one, so the caller verifies).
template <class Real>
std::pair<MatrixC<Real>, std::vector<Eigen::Index>> inductive_certificate(
    const std::vector<std::vector<VectorC<Real>>>& fs, const std::vector<VectorC<Real>>& gs) {
  using Complex = std::complex<Real>;
  const Eigen::Index n = static_cast<Eigen::Index>(gs.size());
  if (n == 1) {
    Real fnorm = 0;
    for (const auto& fk : fs) fnorm = std::max(fnorm, fk[0].norm());
    MatrixC<Real> a(1, 1);
    // A = 0 leaves f untouched and kills g; A = 1 does the reverse. Pick the
    // smaller residual.
    a(0, 0) = gs[0].norm() <= fnorm ? Complex(1) : Complex(0);
    return {a, {0}};
  }

  Eigen::Index j = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (gs[static_cast<std::size_t>(i)].norm() > gs[static_cast<std::size_t>(j)].norm()) j = i;
  const Real gj2 = gs[static_cast<std::size_t>(j)].squaredNorm();
  if (gj2 == Real(0)) {
    std::vector<Eigen::Index> id(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
    return {MatrixC<Real>::Identity(n, n), std::move(id)};
  }

  std::vector<Eigen::Index> rest;
  std::vector<Complex> coeff(static_cast<std::size_t>(n));
  std::vector<VectorC<Real>> gs_next;
  std::vector<std::vector<VectorC<Real>>> fs_next(fs.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == j) continue;
    // abar makes g_i - abar g_j orthogonal to g_j; |a| <= 1 by maximality.
    Complex abar = gs[static_cast<std::size_t>(j)].dot(gs[static_cast<std::size_t>(i)]) / gj2;
    if (std::abs(abar) > Real(1)) abar /= std::abs(abar);
    coeff[static_cast<std::size_t>(i)] = std::conj(abar);
    rest.push_back(i);
    gs_next.push_back(gs[static_cast<std::size_t>(i)] - abar * gs[static_cast<std::size_t>(j)]);
    for (std::size_t k = 0; k < fs.size(); ++k)
      fs_next[k].push_back(fs[k][static_cast<std::size_t>(i)]);
  }

  auto [a1, sub] = inductive_certificate<Real>(fs_next, gs_next);

  MatrixC<Real> a0 = MatrixC<Real>::Zero(n, n);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  order[0] = j;
  for (Eigen::Index t = 0; t + 1 < n; ++t) {
    const Eigen::Index orig = rest[static_cast<std::size_t>(sub[static_cast<std::size_t>(t)])];
    order[static_cast<std::size_t>(t) + 1] = orig;
    a0(0, t + 1) = -coeff[static_cast<std::size_t>(orig)];
    for (Eigen::Index s = 0; s + 1 < n; ++s) a0(s + 1, t + 1) = a1(s, t);
  }
  return {std::move(a0), std::move(order)};
}

}  // namespace detail

// Constructive witness that the rank-one sums S_k = sum_i f_ki (x) g_i all
// vanish: produces A in the entrywise unit ball with (I - A) f_k = 0 and
// A^* g = 0 (R = identity always suffices). The inductive construction is
// tried first; if a degenerate input breaks its assembly the certificate
// falls back to the transpose of the orthogonal projector onto the null
// space of (c -> sum_i c_i g_i), which is valid whenever the premise holds.
template <class Real>
Certificate<Real> prop4_solve(const std::vector<std::vector<VectorC<Real>>>& f_list,
                              const std::vector<VectorC<Real>>& g,
                              Real premise_tol = Real(1e-8), Real residual_tol = Real(1e-9)) {
  const std::size_t n = g.size();
  if (n == 0) throw std::invalid_argument("prop4_solve: empty g");
  const Eigen::Index dim = g[0].size();
  for (const auto& gi : g)
    if (gi.size() != dim) throw std::invalid_argument("prop4_solve: mixed vector dimensions");
  for (const auto& fk : f_list) {
    if (fk.size() != n) throw std::invalid_argument("prop4_solve: f/g length mismatch");
    for (const auto& fki : fk)
      if (fki.size() != dim) throw std::invalid_argument("prop4_solve: mixed vector dimensions");
  }

  Real fmax = 0, gmax = 0;
  for (const auto& fk : f_list)
    for (const auto& fki : fk) fmax = std::max(fmax, fki.norm());
  for (const auto& gi : g) gmax = std::max(gmax, gi.norm());
  const Real scale = std::max(std::max(fmax, gmax), Real(1));

  for (std::size_t k = 0; k < f_list.size(); ++k) {
    MatrixC<Real> s = MatrixC<Real>::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) s += f_list[k][i] * g[i].adjoint();
    const Real norm = s.norm();
    if (norm > premise_tol * std::max(fmax * gmax, Real(1)))
      throw premise_violation(static_cast<int>(k), static_cast<double>(norm));
  }

  const Eigen::Index ni = static_cast<Eigen::Index>(n);
  std::vector<Eigen::Index> identity(n);
  for (std::size_t i = 0; i < n; ++i) identity[i] = static_cast<Eigen::Index>(i);

  auto finish = [&](MatrixC<Real> a) {
    auto [rf, rg] = detail::certificate_residuals<Real>(a, f_list, g);
    Certificate<Real> cert;
    cert.A = std::move(a);
    cert.perm = identity;
    cert.residual_f = std::move(rf);
    cert.residual_g = rg;
    return cert;
  };
  auto worst = [](const Certificate<Real>& c) {
    Real w = c.residual_g;
    for (Real r : c.residual_f) w = std::max(w, r);
    return w;
  };

  // Paper-order construction, conjugated back to the original ordering.
  auto [a0, order] = detail::inductive_certificate<Real>(f_list, g);
  MatrixC<Real> p = MatrixC<Real>::Zero(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i) p(i, order[static_cast<std::size_t>(i)]) = Real(1);
  Certificate<Real> best = finish(p.transpose() * a0 * p);
  if (worst(best) <= residual_tol * scale) return best;

  // Fallback: A = transpose of the projector onto K = null(c -> sum c_i g_i),
  // trying every singular-value cut and keeping the best residual.
  MatrixC<Real> gmat(dim, ni);
  for (Eigen::Index i = 0; i < ni; ++i) gmat.col(i) = g[static_cast<std::size_t>(i)];
  Eigen::JacobiSVD<MatrixC<Real>> svd(gmat, Eigen::ComputeFullV);
  const Eigen::Index rmax = std::min(dim, ni);
  for (Eigen::Index keep = 0; keep <= rmax; ++keep) {
    const MatrixC<Real> vk = svd.matrixV().rightCols(ni - keep);
    Certificate<Real> cand = finish((vk * vk.adjoint()).transpose());
    if (worst(cand) < worst(best)) best = std::move(cand);
  }
  if (worst(best) > residual_tol * scale)
    throw std::runtime_error("prop4_solve: no certificate met the residual bound (worst = " +
                             std::to_string(static_cast<double>(worst(best))) + ")");
  return best;
}

template <class Real = double>
struct ZeroSumCheck {
  Certificate<Real> cert;
  bool membership = false;   // negative-frequency parts of (R - A) f_k, A^* g vanish
  Real hankel_sum_norm = 0;  // largest Frobenius norm among the exact sums
};

namespace detail {

template <class Real>
VectorC<Real> minus_coeff_vector(const MatrixSymbol<Real>& s, Eigen::Index dim) {
  VectorC<Real> v = VectorC<Real>::Zero(dim);
  for (Eigen::Index t = 0; t < dim; ++t) v(t) = s.coeff(-static_cast<int>(t) - 1)(0, 0);
  return v;
}

template <class Real>
Real minus_part_max(const MatrixSymbol<Real>& s) {
  Real m = 0;
  for (const auto& [k, a] : s.coeffs())
    if (k < 0) m = std::max(m, a.cwiseAbs().maxCoeff());
  return m;
}

}  // namespace detail

// Decides whether the finite sums sum_i H_{f_ki}^* H_{g_i} of scalar Hankel
// products vanish, and if so returns a certificate built from the
// anti-analytic coefficient vectors, plus an independent symbol-level check
// that (R - A) f_k and A^* g have no negative-frequency coefficients.
template <class Real>
ZeroSumCheck<Real> theorem5_check(const std::vector<std::vector<MatrixSymbol<Real>>>& f_list,
                                  const std::vector<MatrixSymbol<Real>>& g,
                                  Real zero_tol = Real(1e-12), Real member_tol = Real(1e-12)) {
  const std::size_t n = g.size();
  if (n == 0) throw std::invalid_argument("theorem5_check: empty g");
  auto check_scalar = [](const MatrixSymbol<Real>& s) {
    if (s.block_size() != 1)
      throw std::invalid_argument("theorem5_check: entries must be scalar symbols");
  };
  int deg = 1;
  Real fmax = 0, gmax = 0;
  for (const auto& gi : g) {
    check_scalar(gi);
    deg = std::max(deg, gi.deg_minus());
    gmax = std::max(gmax, max_abs(gi));
  }
  for (const auto& fk : f_list) {
    if (fk.size() != n) throw std::invalid_argument("theorem5_check: f/g length mismatch");
    for (const auto& fki : fk) {
      check_scalar(fki);
      deg = std::max(deg, fki.deg_minus());
      fmax = std::max(fmax, max_abs(fki));
    }
  }

  ZeroSumCheck<Real> out;
  const Real sum_scale = std::max(fmax * gmax, Real(1));
  for (std::size_t k = 0; k < f_list.size(); ++k) {
    MatrixC<Real> sum = MatrixC<Real>::Zero(deg, deg);
    for (std::size_t i = 0; i < n; ++i)
      sum += hankel_matrix(f_list[k][i], deg).data.adjoint() * hankel_matrix(g[i], deg).data;
    const Real norm = sum.norm();
    out.hankel_sum_norm = std::max(out.hankel_sum_norm, norm);
    if (norm > zero_tol * sum_scale)
      throw not_zero_instance(static_cast<int>(k), static_cast<double>(norm));
  }

  std::vector<std::vector<VectorC<Real>>> fvecs(f_list.size());
  for (std::size_t k = 0; k < f_list.size(); ++k)
    for (const auto& fki : f_list[k])
      fvecs[k].push_back(detail::minus_coeff_vector(fki, deg));
  std::vector<VectorC<Real>> gvecs;
  for (const auto& gi : g) gvecs.push_back(detail::minus_coeff_vector(gi, deg));

  out.cert = prop4_solve<Real>(fvecs, gvecs);

  const MatrixC<Real> rmat = perm_matrix<Real>(out.cert.perm);
  const Real member_scale = std::max(std::max(fmax, gmax), Real(1));
  bool ok = true;
  for (const auto& fk : f_list) {
    for (std::size_t r = 0; r < n && ok; ++r) {
      MatrixSymbol<Real> comb(1);
      for (std::size_t c = 0; c < n; ++c)
        comb = comb + (rmat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) -
                       out.cert.A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))) *
                          fk[c];
      if (detail::minus_part_max(comb) > member_tol * member_scale) ok = false;
    }
    if (!ok) break;
  }
  for (std::size_t c = 0; c < n && ok; ++c) {
    MatrixSymbol<Real> comb(1);
    for (std::size_t r = 0; r < n; ++r)
      comb = comb + std::conj(out.cert.A(static_cast<Eigen::Index>(r),
                                         static_cast<Eigen::Index>(c))) *
                        g[r];
    if (detail::minus_part_max(comb) > member_tol * member_scale) ok = false;
  }
  out.membership = ok;
  return out;
}

// Objective data for the distance minimization at a fixed disk point: column
// i of phi (resp. gamma) is the anti-analytic expansion of H_{f_i} k_z
// (resp. H_{g_i} k_z), zero-padded to a common length.
template <class Real = double>
struct XiObjective {
  MatrixC<Real> phi;
  MatrixC<Real> gamma;
};

template <class Real>
XiObjective<Real> xi_objective(const std::vector<MatrixSymbol<Real>>& f,
                               const std::vector<MatrixSymbol<Real>>& g,
                               const DiskPoint<Real>& z) {
  const std::size_t n = f.size();
  if (g.size() != n || n == 0) throw std::invalid_argument("xi_objective: size mismatch");
  int len = 1;
  for (const auto& s : f) {
    if (s.block_size() != 1) throw std::invalid_argument("xi_objective: need scalar symbols");
    len = std::max(len, s.deg_minus());
  }
  for (const auto& s : g) {
    if (s.block_size() != 1) throw std::invalid_argument("xi_objective: need scalar symbols");
    len = std::max(len, s.deg_minus());
  }
  XiObjective<Real> data;
  data.phi = MatrixC<Real>::Zero(len, static_cast<Eigen::Index>(n));
  data.gamma = MatrixC<Real>::Zero(len, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const VectorC<Real> a = hankel_on_kernel(f[i], z).anti;
    const VectorC<Real> b = hankel_on_kernel(g[i], z).anti;
    data.phi.col(static_cast<Eigen::Index>(i)).head(a.size()) = a;
    data.gamma.col(static_cast<Eigen::Index>(i)).head(b.size()) = b;
  }
  return data;
}

// sum_i ||phi (r_i - a_i)|| + sum_c ||gamma conj(A e_c)|| with r_i, a_i the
// i-th rows of R and A.
template <class Real>
Real xi_objective_value(const XiObjective<Real>& data, const MatrixC<Real>& rmat,
                        const MatrixC<Real>& a) {
  const Eigen::Index n = a.rows();
  Real total = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    total += (data.phi * (rmat.row(i) - a.row(i)).transpose()).norm();
  for (Eigen::Index c = 0; c < n; ++c) total += (data.gamma * a.col(c).conjugate()).norm();
  return total;
}

template <class Real = double>
struct SubproblemResult {
  MatrixC<Real> a;
  Real value = 0;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

template <class Real>
MatrixC<Real> clamp_disc(MatrixC<Real> a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const Real m = std::abs(a(i, j));
      if (m > Real(1)) a(i, j) /= m;
    }
  return a;
}

// Projected subgradient on the sum-of-norms objective: step 1/sqrt(t),
// entrywise modulus clamp, zero subgradient where a norm vanishes.
template <class Real>
MatrixC<Real> subgradient_descent(const XiObjective<Real>& data, const MatrixC<Real>& rmat,
                                  MatrixC<Real> a, int iters, Real* best_value) {
  const Eigen::Index n = a.rows();
  MatrixC<Real> best = a;
  *best_value = xi_objective_value(data, rmat, a);
  for (int t = 1; t <= iters; ++t) {
    MatrixC<Real> grad = MatrixC<Real>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const VectorC<Real> v = data.phi * (rmat.row(i) - a.row(i)).transpose();
      const Real norm = v.norm();
      if (norm > Real(1e-14))
        grad.row(i) -= (data.phi.adjoint() * (v / norm)).transpose();
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const VectorC<Real> u = data.gamma * a.col(c).conjugate();
      const Real norm = u.norm();
      if (norm > Real(1e-14))
        grad.col(c) += (data.gamma.adjoint() * (u / norm)).conjugate();
    }
    a = clamp_disc<Real>(a - (Real(1) / std::sqrt(Real(t))) * grad);
    const Real val = xi_objective_value(data, rmat, a);
    if (val < *best_value) {
      *best_value = val;
      best = a;
    }
  }
  return best;
}

// Real vectorization X = [vec(Re A); vec(Im A)]; each objective term is
// ||b_s - M_s X|| over R^{2L}.
template <class Real>
void xi_real_terms(const XiObjective<Real>& data, const MatrixC<Real>& rmat,
                   std::vector<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>>* ms,
                   std::vector<Eigen::Matrix<Real, Eigen::Dynamic, 1>>* bs) {
  const Eigen::Index n = rmat.rows();
  const Eigen::Index l = data.phi.rows();
  const Eigen::Index nn = n * n;
  auto re_idx = [&](Eigen::Index r, Eigen::Index c) { return c * n + r; };
  auto im_idx = [&](Eigen::Index r, Eigen::Index c) { return nn + c * n + r; };

  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * l, 2 * nn);
    Eigen::Matrix<Real, Eigen::Dynamic, 1> b(2 * l);
    const VectorC<Real> target = data.phi * rmat.row(i).transpose();
    b << target.real(), target.imag();
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < l; ++r) {
        const std::complex<Real> p = data.phi(r, c);
        m(r, re_idx(i, c)) = p.real();
        m(r, im_idx(i, c)) = -p.imag();
        m(l + r, re_idx(i, c)) = p.imag();
        m(l + r, im_idx(i, c)) = p.real();
      }
    ms->push_back(std::move(m));
    bs->push_back(std::move(b));
  }
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * l, 2 * nn);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index s = 0; s < l; ++s) {
        const std::complex<Real> p = data.gamma(s, r);
        m(s, re_idx(r, c)) = p.real();
        m(s, im_idx(r, c)) = p.imag();
        m(l + s, re_idx(r, c)) = p.imag();
        m(l + s, im_idx(r, c)) = -p.real();
      }
    ms->push_back(std::move(m));
    bs->push_back(Eigen::Matrix<Real, Eigen::Dynamic, 1>::Zero(2 * l));
  }
}

// Splitting refinement of the subproblem: alternate block shrinkage on the
// norm terms with a disc projection, solving the coupling step against a
// prefactored normal matrix. Polishes the subgradient iterate to ~1e-9.
template <class Real>
SubproblemResult<Real> splitting_polish(const XiObjective<Real>& data, const MatrixC<Real>& rmat,
                                        const MatrixC<Real>& a_init, int iters) {
  using RealMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using RealVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const Eigen::Index n = rmat.rows();
  const Eigen::Index nn = n * n;

  std::vector<RealMat> ms;
  std::vector<RealVec> bs;
  xi_real_terms(data, rmat, &ms, &bs);
  const std::size_t terms = ms.size();

  RealMat q = RealMat::Identity(2 * nn, 2 * nn);
  for (const auto& m : ms) q += m.transpose() * m;
  Eigen::LLT<RealMat> llt(q);

  auto to_vec = [&](const MatrixC<Real>& a) {
    RealVec x(2 * nn);
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r) {
        x(c * n + r) = a(r, c).real();
        x(nn + c * n + r) = a(r, c).imag();
      }
    return x;
  };
  auto to_mat = [&](const RealVec& x) {
    MatrixC<Real> a(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r)
        a(r, c) = std::complex<Real>(x(c * n + r), x(nn + c * n + r));
    return a;
  };

  RealVec x = to_vec(a_init);
  RealVec u = x;
  RealVec mu = RealVec::Zero(2 * nn);
  std::vector<RealVec> zs(terms), lams(terms);
  for (std::size_t s = 0; s < terms; ++s) {
    zs[s] = bs[s] - ms[s] * x;
    lams[s] = RealVec::Zero(bs[s].size());
  }

  SubproblemResult<Real> out;
  out.converged = false;
  int used = iters;
  for (int t = 0; t < iters; ++t) {
    RealVec rhs = u - mu;
    for (std::size_t s = 0; s < terms; ++s) rhs += ms[s].transpose() * (bs[s] - zs[s] + lams[s]);
    x = llt.solve(rhs);

    Real primal = 0, dual = 0;
    for (std::size_t s = 0; s < terms; ++s) {
      const RealVec v = bs[s] - ms[s] * x + lams[s];
      const Real norm = v.norm();
      RealVec znew = RealVec::Zero(v.size());
      if (norm > Real(1)) znew = (Real(1) - Real(1) / norm) * v;
      dual = std::max(dual, (znew - zs[s]).norm());
      zs[s] = znew;
      lams[s] = v - znew;
      primal = std::max(primal, (bs[s] - ms[s] * x - znew).norm());
    }
    const RealVec unew = to_vec(clamp_disc<Real>(to_mat(x + mu)));
    dual = std::max(dual, (unew - u).norm());
    u = unew;
    mu += x - u;
    primal = std::max(primal, (x - u).norm());
    if (primal < Real(2e-11) && dual < Real(2e-11)) {
      used = t + 1;
      out.converged = true;
      break;
    }
  }
  out.a = to_mat(u);
  out.value = xi_objective_value(data, rmat, out.a);
  out.iterations = used;
  return out;
}

}  // namespace detail

// Minimizes the sum-of-norms objective over A in the entrywise unit ball for
// a fixed permutation. Projected subgradient from each warm start, then a
// splitting refinement of the best iterate; returns the best point seen.
template <class Real>
SubproblemResult<Real> convex_subproblem(const XiObjective<Real>& data,
                                         const MatrixC<Real>& rmat,
                                         const std::vector<MatrixC<Real>>& warm_starts = {},
                                         int max_iters = 500) {
  const Eigen::Index n = rmat.rows();
  std::vector<MatrixC<Real>> starts = warm_starts;
  starts.push_back(MatrixC<Real>::Zero(n, n));
  starts.push_back(rmat);

  MatrixC<Real> best_a = starts.front();
  Real best_val = xi_objective_value(data, rmat, best_a);
  for (const auto& s0 : starts) {
    Real val = 0;
    MatrixC<Real> a = detail::subgradient_descent(data, rmat, detail::clamp_disc<Real>(s0),
                                                  max_iters, &val);
    if (val < best_val) {
      best_val = val;
      best_a = a;
    }
  }

  SubproblemResult<Real> polished = detail::splitting_polish(data, rmat, best_a, 2000);
  SubproblemResult<Real> out;
  out.iterations = max_iters + polished.iterations;
  out.converged = polished.converged;
  if (polished.value < best_val) {
    out.a = polished.a;
    out.value = polished.value;
  } else {
    out.a = best_a;
    out.value = best_val;
  }
  return out;
}

template <class Real = double>
struct XiResult {
  DiskPoint<Real> z;
  Real value = 0;
  Certificate<Real> cert;
  int iterations = 0;
  bool converged = false;
};

// Distance-style minimization over certificates at a disk point: exhaustive
// over permutations (n <= 8, or a sampled budget beyond), convex subproblem
// in A per permutation. A vanishing-sum certificate, when one exists, is fed
// in as a warm start and makes the objective exactly zero.
template <class Real>
XiResult<Real> xi2(const std::vector<MatrixSymbol<Real>>& f,
                   const std::vector<MatrixSymbol<Real>>& g, const DiskPoint<Real>& z,
                   int max_iters = 500, int perm_budget = 0) {
  const Eigen::Index n = static_cast<Eigen::Index>(f.size());
  const XiObjective<Real> data = xi_objective(f, g, z);

  std::vector<MatrixC<Real>> warm;
  {
    MatrixC<Real> s = data.phi * data.gamma.adjoint();
    const Real scale = std::max(data.phi.norm() * data.gamma.norm(), Real(1));
    if (s.norm() <= Real(1e-8) * scale) {
      std::vector<std::vector<VectorC<Real>>> fv(1);
      std::vector<VectorC<Real>> gv;
      for (Eigen::Index i = 0; i < n; ++i) {
        fv[0].push_back(data.phi.col(i));
        gv.push_back(data.gamma.col(i));
      }
      try {
        warm.push_back(prop4_solve<Real>(fv, gv).A);
      } catch (const std::exception&) {
      }
    }
  }

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;

  std::vector<std::vector<Eigen::Index>> perms;
  if (n <= 8) {
    std::vector<Eigen::Index> p = perm;
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  } else {
    if (perm_budget <= 0)
      throw std::invalid_argument("xi2: n > 8 requires an explicit permutation budget");
    perms.push_back(perm);
    std::mt19937_64 eng(0x9e3779b97f4a7c15ULL);
    for (int t = 1; t < perm_budget; ++t) {
      std::vector<Eigen::Index> p = perm;
      for (std::size_t i = p.size(); i > 1; --i)
        std::swap(p[i - 1], p[static_cast<std::size_t>(eng() % i)]);
      perms.push_back(std::move(p));
    }
  }

  XiResult<Real> out{z, Real(0), Certificate<Real>{}, 0, false};
  bool first = true;
  for (const auto& p : perms) {
    const MatrixC<Real> rmat = perm_matrix<Real>(p);
    SubproblemResult<Real> sub = convex_subproblem(data, rmat, warm, max_iters);
    if (first || sub.value < out.value) {
      first = false;
      out.value = sub.value;
      out.iterations = sub.iterations;
      out.converged = sub.converged;
      out.cert.A = sub.a;
      out.cert.perm = p;
    }
  }

  Real ub_f = 0, ub_g = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    ub_f += data.phi.col(i).norm();
    ub_g += data.gamma.col(i).norm();
  }
  if (out.value > std::min(ub_f, ub_g) + Real(1e-9))
    throw std::logic_error("xi2: minimizer exceeds an endpoint upper bound");

  const MatrixC<Real> rmat = perm_matrix<Real>(out.cert.perm);
  Real rf = 0, rg = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    rf += (data.phi * (rmat.row(i) - out.cert.A.row(i)).transpose()).squaredNorm();
    rg += (data.gamma * out.cert.A.col(i).conjugate()).squaredNorm();
  }
  out.cert.residual_f = {std::sqrt(rf)};
  out.cert.residual_g = std::sqrt(rg);
  return out;
}

}  // namespace btl
