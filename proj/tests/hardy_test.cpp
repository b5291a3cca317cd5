#include "btl/hardy.hpp"

#include <complex>
#include <map>

#include "btl/generate.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace btl;
using C = std::complex<double>;

namespace {

SymbolXd shift_symbol(int k, Eigen::Index n = 1) {
  return monomial_symbol<double>(k, MatrixC<double>::Identity(n, n));
}

double mat_dist(const MatrixC<double>& a, const MatrixC<double>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

SymbolXd fixture_f() {
  SymbolXd::CoeffMap m;
  MatrixC<double> a(2, 2);
  a << C(1, 0), C(1, 0), C(0, 0), C(0, 0);
  m.emplace(1, a);
  return SymbolXd(2, std::move(m));
}

SymbolXd fixture_g() {
  SymbolXd::CoeffMap m;
  MatrixC<double> a(2, 2);
  a << C(1, 0), C(0, 0), C(-1, 0), C(0, 0);
  m.emplace(-1, a);
  return SymbolXd(2, std::move(m));
}

// Norm^2 of (f_- - f_-(z)) k_z computed from raw coefficients with k_z
// truncated after `length` Taylor terms.
double truncated_image_norm_sq(const SymbolXd& f, const DiskPointXd& z, int length) {
  SymbolXd fm = split(f).minus;
  std::map<int, C> mult;
  for (const auto& [k, a] : fm.coeffs()) mult[k] += a(0, 0);
  mult[0] -= poisson_ext(fm, z)(0, 0);
  KernelVec<double> kz = kernel_vec(z, length);
  std::map<int, C> out;
  for (const auto& [k, c] : mult)
    for (int t = 0; t < length; ++t) out[k + t] += c * kz.coeffs[t];
  double s = 0;
  for (const auto& [k, c] : out) s += std::norm(c);
  return s;
}

}  // namespace

TEST_CASE("toeplitz_section layout") {
  ToeplitzSection<double> t = toeplitz_section(shift_symbol(-1, 2), 3);
  CHECK(t.data.rows() == 6);
  CHECK(mat_dist(t.data.block(0, 2, 2, 2), MatrixC<double>::Identity(2, 2)) == 0.0);
  CHECK(mat_dist(t.data.block(2, 4, 2, 2), MatrixC<double>::Identity(2, 2)) == 0.0);
  CHECK(t.data.block(2, 0, 2, 2).cwiseAbs().maxCoeff() == 0.0);

  MatrixC<double> a = MatrixC<double>::Random(2, 2);
  ToeplitzSection<double> tc = toeplitz_section(constant_symbol<double>(a), 2);
  CHECK(mat_dist(tc.data.block(0, 0, 2, 2), a) == 0.0);
  CHECK(tc.data.block(0, 2, 2, 2).cwiseAbs().maxCoeff() == 0.0);

  SymbolXd cosine = shift_symbol(1) + shift_symbol(-1);
  ToeplitzSection<double> th = toeplitz_section(cosine, 4);
  CHECK(mat_dist(th.data, th.data.adjoint().eval()) == 0.0);
  CHECK(std::abs(th.data(1, 0) - C(1, 0)) == 0.0);
  CHECK(std::abs(th.data(0, 3)) == 0.0);
}

TEST_CASE("hankel_matrix examples") {
  FiniteHankel<double> h1 = hankel_matrix(shift_symbol(-1));
  CHECK(h1.dim == 1);
  CHECK(std::abs(h1.data(0, 0) - C(1, 0)) == 0.0);

  FiniteHankel<double> h2 = hankel_matrix(shift_symbol(-2));
  CHECK(h2.dim == 2);
  CHECK(std::abs(h2.data(0, 1) - C(1, 0)) == 0.0);
  CHECK(std::abs(h2.data(1, 0) - C(1, 0)) == 0.0);
  CHECK(std::abs(h2.data(0, 0)) == 0.0);
  CHECK(std::abs(h2.data(1, 1)) == 0.0);

  CHECK(hankel_matrix(random_symbol(2, 3, 7, /*analytic=*/true)).dim == 0);
}

TEST_CASE("semicommutator closed forms") {
  MatrixC<double> s = semicommutator(shift_symbol(1), shift_symbol(-1));
  CHECK(s.rows() == 1);
  CHECK(std::abs(s(0, 0) - C(1, 0)) == 0.0);

  // analytic G or co-analytic F give the zero defect
  CHECK(semicommutator(random_symbol(2, 3, 91), random_symbol(2, 3, 92, true))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK(semicommutator(adjoint(random_symbol(2, 3, 93, true)), random_symbol(2, 3, 94))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  CHECK(semicommutator(fixture_f(), fixture_g()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("semicommutator equals the finite-section defect on leading blocks") {
  for (std::uint64_t seed : {101u, 102u, 103u}) {
    SymbolXd f = random_symbol(2, 3, seed);
    SymbolXd g = random_symbol(2, 2, seed + 50);
    const int d = std::max({f.deg_plus(), f.deg_minus(), g.deg_plus(), g.deg_minus()});
    const int N = 4 * d;
    MatrixC<double> defect =
        oracle::toeplitz_dense(multiply(f, g), N) -
        oracle::toeplitz_dense(f, N) * oracle::toeplitz_dense(g, N);
    const Eigen::Index lead = (N - 2 * d) * f.block_size();
    MatrixC<double> s = semicommutator(f, g);
    MatrixC<double> padded = MatrixC<double>::Zero(lead, lead);
    padded.topLeftCorner(s.rows(), s.cols()) = s;
    CHECK(mat_dist(defect.topLeftCorner(lead, lead), padded) < 1e-12);
  }
}

TEST_CASE("semicommutator adjoint symmetry") {
  SymbolXd f = random_symbol(2, 3, 111);
  SymbolXd g = random_symbol(2, 3, 112);
  MatrixC<double> a = semicommutator(f, g);
  MatrixC<double> b = semicommutator(adjoint(g), adjoint(f));
  const Eigen::Index m = std::max(a.rows(), b.rows());
  MatrixC<double> pa = MatrixC<double>::Zero(m, m), pb = MatrixC<double>::Zero(m, m);
  pa.topLeftCorner(a.rows(), a.cols()) = a;
  pb.topLeftCorner(b.rows(), b.cols()) = b;
  CHECK(mat_dist(pa.adjoint().eval(), pb) < 1e-13);
}

TEST_CASE("kernel_vec") {
  KernelVec<double> k0 = kernel_vec(DiskPointXd(0.0, 0.0), 4);
  CHECK(std::abs(k0.coeffs[0] - C(1, 0)) == 0.0);
  CHECK(k0.coeffs.tail(3).cwiseAbs().maxCoeff() == 0.0);

  KernelVec<double> k = kernel_vec(DiskPointXd(0.5, 0.0), 10);
  CHECK(std::abs(k.coeffs[0] - std::sqrt(0.75)) < 1e-15);
  const double tail = std::pow(0.5, 20);
  CHECK(std::abs(k.coeffs.squaredNorm() - (1.0 - tail)) < 1e-15);
}

TEST_CASE("hankel_on_kernel closed forms") {
  SymbolXd wbar = shift_symbol(-1);
  HankelOnKernel<double> h0 = hankel_on_kernel(wbar, DiskPointXd(0.0, 0.0));
  CHECK(std::abs(norm(h0) - 1.0) < 1e-15);
  CHECK(h0.anti.size() == 1);
  CHECK(std::abs(h0.anti[0] - C(1, 0)) < 1e-15);

  HankelOnKernel<double> h6 = hankel_on_kernel(wbar, DiskPointXd(0.6, 0.0));
  CHECK(std::abs(norm(h6) * norm(h6) - 0.64) < 1e-14);

  HankelOnKernel<double> ha =
      hankel_on_kernel(random_symbol(1, 4, 121, true), DiskPointXd(0.3, 0.3));
  CHECK(norm(ha) == 0.0);
  CHECK(ha.anti.size() == 0);
}

TEST_CASE("hankel_on_kernel matches the truncated coefficient oracle") {
  for (std::uint64_t seed : {131u, 132u}) {
    SymbolXd f = random_symbol(1, 4, seed);
    for (auto zv : {C(0.0, 0.0), C(0.45, -0.3), C(-0.7, 0.2)}) {
      DiskPointXd z(zv);
      HankelOnKernel<double> h = hankel_on_kernel(f, z);
      const double exact = norm(h) * norm(h);
      const double trunc = truncated_image_norm_sq(f, z, 200);
      CHECK(std::abs(exact - trunc) < std::pow(std::abs(zv), 400) + 1e-12);
      // exact anti-analytic coefficients reproduce the same norm
      CHECK(std::abs(exact - h.anti.squaredNorm()) < 1e-13);
    }
  }
}

TEST_CASE("inner products agree between the extension and coefficient routes") {
  DiskPointXd z(0.52, 0.31);
  SymbolXd f = random_symbol(1, 5, 141);
  SymbolXd g = random_symbol(1, 3, 142);
  HankelOnKernel<double> a = hankel_on_kernel(f, z);
  HankelOnKernel<double> b = hankel_on_kernel(g, z);
  VectorC<double> bp = VectorC<double>::Zero(a.anti.size());
  bp.head(b.anti.size()) = b.anti;
  CHECK(std::abs(inner(a, b) - bp.dot(a.anti)) < 1e-13);
  CHECK_THROWS_AS(inner(a, hankel_on_kernel(g, DiskPointXd(0.1, 0.0))),
                  std::invalid_argument);
}

TEST_CASE("gram identity: kernel images reproduce mod_sq_ext of the minus part") {
  for (std::uint64_t seed : {151u, 152u, 153u}) {
    SymbolXd f = random_symbol(3, 4, seed);
    DiskPointXd z(0.41, -0.62);
    const Eigen::Index n = f.block_size();
    MatrixC<double> gram(n, n);
    for (Eigen::Index mu = 0; mu < n; ++mu)
      for (Eigen::Index nu = 0; nu < n; ++nu) {
        C acc(0, 0);
        for (Eigen::Index j = 0; j < n; ++j)
          acc += inner(hankel_on_kernel(entry(f, mu, j), z),
                       hankel_on_kernel(entry(f, nu, j), z));
        gram(mu, nu) = acc;
      }
    CHECK(mat_dist(gram, mod_sq_ext(split(f).minus, z)) < 1e-10);
  }
}

TEST_CASE("rank_one_defect") {
  RankOneDefect<double> triv =
      rank_one_defect(shift_symbol(-1), shift_symbol(-1), DiskPointXd(0.0, 0.0));
  CHECK(triv.n == 1);
  CHECK(triv.dim == 1);
  VectorC<double> e1(1);
  e1 << C(1, 0);
  CHECK(std::abs(triv.block(0, 0).apply(e1)[0] - C(1, 0)) < 1e-15);

  RankOneDefect<double> empty = rank_one_defect(
      random_symbol(2, 2, 161, true), random_symbol(2, 2, 162, true), DiskPointXd(0.2, 0.2));
  CHECK(empty.dim == 0);

  // cancellation fixture: the defect of H_{F^*}^* H_G vanishes blockwise
  RankOneDefect<double> d =
      rank_one_defect(adjoint(fixture_f()), fixture_g(), DiskPointXd(0.37, 0.21));
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index k = 0; k < 2; ++k) {
      const RankOneSum<double>& blk = d.block(i, k);
      double fro = 0;
      for (std::size_t p = 0; p < blk.left.size(); ++p)
        for (std::size_t q = 0; q < blk.left.size(); ++q)
          fro += std::real(blk.left[q].dot(blk.left[p]) *
                           std::conj(blk.right[q].dot(blk.right[p])));
      CHECK(std::abs(fro) < 1e-14);
    }
}

TEST_CASE("mobius_coeffs") {
  SymbolXd m0 = mobius_coeffs(DiskPointXd(0.0, 0.0), 8);
  CHECK(m0.coeffs().size() == 1);
  CHECK(std::abs(m0.coeff(1)(0, 0) - C(-1, 0)) == 0.0);

  SymbolXd mh = mobius_coeffs(DiskPointXd(0.5, 0.0), 8);
  CHECK(std::abs(mh.coeff(1)(0, 0) - C(-0.75, 0)) < 1e-15);

  for (auto zv : {C(0.5, 0.2), C(-0.35, 0.6), C(0.8, 0.0)}) {
    DiskPointXd z(zv);
    SymbolXd m = mobius_coeffs(z, 150);
    for (int t = 0; t < 8; ++t) {
      const double theta = 2.0 * oracle::kPi * t / 8;
      const C w = std::exp(C(0, theta));
      const C target = (zv - w) / (1.0 - std::conj(zv) * w);
      CHECK(std::abs(eval(m, theta)(0, 0) - target) < 1e-12);
    }
  }
}
