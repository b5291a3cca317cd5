#include "btl/criteria.hpp"

#include <complex>

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

SymbolXd diag_pair(int k1, int k2) {
  SymbolXd::CoeffMap m;
  MatrixC<double> a = MatrixC<double>::Zero(2, 2);
  a(0, 0) = C(1, 0);
  MatrixC<double> b = MatrixC<double>::Zero(2, 2);
  b(1, 1) = C(1, 0);
  m[k1] = a;
  auto it = m.find(k2);
  if (it != m.end())
    it->second += b;
  else
    m[k2] = b;
  return SymbolXd(2, std::move(m));
}

}  // namespace

TEST_CASE("psd_sqrt clamps and faults") {
  MatrixC<double> p(2, 2);
  p << C(2, 0), C(0, 0), C(0, 0), C(0, 0);
  MatrixC<double> r = psd_sqrt(p);
  CHECK(mat_dist(r * r, p) < 1e-14);

  MatrixC<double> neg(1, 1);
  neg << C(-1, 0);
  CHECK_THROWS_AS(psd_sqrt(neg), std::runtime_error);
}

TEST_CASE("criterion closed forms") {
  SymbolXd w = shift_symbol(1), wbar = shift_symbol(-1);
  for (auto zv : {C(0, 0), C(0.6, 0.0), C(0.3, -0.5)}) {
    DiskPointXd z(zv);
    CriterionReport<double> rep = criterion(w, wbar, z);
    const double expect = 1.0 - std::norm(zv);
    CHECK(std::abs(rep.norm - expect) < 1e-14);
    CHECK(std::abs(rep.trace_value - expect * expect) < 1e-13);
    CHECK(std::abs(rep.left_factor(0, 0) - C(expect, 0)) < 1e-14);
    CHECK(std::abs(rep.right_factor(0, 0) - C(expect, 0)) < 1e-14);
  }

  CHECK(criterion(wbar, wbar, DiskPointXd(0.4, 0.1)).norm == 0.0);

  for (auto zv : {C(0, 0), C(0.52, 0.13), C(-0.2, 0.77)}) {
    CHECK(criterion(fixture_f(), fixture_g(), DiskPointXd(zv)).norm < 1e-12);
  }
}

TEST_CASE("criterion norm and trace sandwich") {
  for (std::uint64_t seed : {201u, 202u, 203u}) {
    SymbolXd f = random_symbol(3, 3, seed);
    SymbolXd g = random_symbol(3, 3, seed + 10);
    CriterionReport<double> rep = criterion(f, g, DiskPointXd(0.45, -0.33));
    const double n2 = rep.norm * rep.norm;
    CHECK(rep.trace_value >= n2 - 1e-10 * std::max(1.0, n2));
    CHECK(rep.trace_value <= 3 * n2 + 1e-10 * std::max(1.0, n2));
  }
}

TEST_CASE("trace_defect closed forms and dual-path agreement") {
  SymbolXd w = shift_symbol(1), wbar = shift_symbol(-1);
  CHECK(std::abs(trace_defect(w, wbar, DiskPointXd(0.6, 0.0)) - 0.4096) < 1e-13);
  CHECK(std::abs(trace_defect(w, wbar, DiskPointXd(0.0, 0.0)) - 1.0) < 1e-15);
  CHECK(trace_defect(random_symbol(2, 3, 211), random_symbol(2, 3, 212, true),
                     DiskPointXd(0.5, 0.2)) == 0.0);

  for (std::uint64_t seed : {221u, 222u, 223u}) {
    SymbolXd f = random_symbol(2, 3, seed);
    SymbolXd g = random_symbol(2, 3, seed + 10);
    for (auto zv : {C(0, 0), C(0.41, 0.52), C(-0.8, 0.1)}) {
      DiskPointXd z(zv);
      TraceDefect<double> paths = trace_defect_paths(f, g, z);
      CHECK(paths.rel_gap < 1e-9);
      // the criterion's Frobenius weight is the same trace
      CHECK(std::abs(criterion(f, g, z).trace_value - paths.poisson) <
            1e-9 * std::max(1.0, std::abs(paths.poisson)));
    }
  }
}

TEST_CASE("stacked-symbol factors match the blockwise assembly") {
  for (std::uint64_t seed : {231u, 232u}) {
    SymbolXd f = random_symbol(2, 3, seed);
    SymbolXd g = random_symbol(2, 3, seed + 10);
    DiskPointXd z(0.37, 0.44);
    const SymbolXd zero(2);
    const SymbolXd b = block2x2(f, -g, zero, zero);
    const SymbolXd c = block2x2(g, zero, f, zero);

    MatrixC<double> ldirect = mod_sq_ext(adjoint(split(b).plus), z);
    MatrixC<double> rdirect = mod_sq_ext(split(c).minus, z);

    SymbolXd fps = adjoint(split(f).plus);
    SymbolXd gps = adjoint(split(g).plus);
    SymbolXd fm = split(f).minus;
    SymbolXd gm = split(g).minus;

    MatrixC<double> lass(4, 4), rass(4, 4);
    lass.block(0, 0, 2, 2) = mod_sq_ext(fps, z);
    lass.block(0, 2, 2, 2) = -cross_ext(fps, gps, z);
    lass.block(2, 0, 2, 2) = -cross_ext(gps, fps, z);
    lass.block(2, 2, 2, 2) = mod_sq_ext(gps, z);
    rass.block(0, 0, 2, 2) = mod_sq_ext(gm, z);
    rass.block(0, 2, 2, 2) = cross_ext(gm, fm, z);
    rass.block(2, 0, 2, 2) = cross_ext(fm, gm, z);
    rass.block(2, 2, 2, 2) = mod_sq_ext(fm, z);

    CHECK(mat_dist(ldirect, lass) < 1e-12);
    CHECK(mat_dist(rdirect, rass) < 1e-12);
  }
}

TEST_CASE("commutator_criterion") {
  // Equal symbols commute and give a vanishing criterion at every z. The
  // norm of a product of matrix square roots has a sqrt(eps) noise floor when
  // the exact product is zero but both factors are full rank, so the norm is
  // held to 5e-7 while the trace (no square roots) is held much tighter.
  SymbolXd f = random_symbol(2, 2, 241);
  for (auto zv : {C(0, 0), C(0.5, -0.4)}) {
    CommutatorReport<double> rep = commutator_criterion(f, f, DiskPointXd(zv));
    CHECK(rep.commutation_residual < 1e-15);
    CHECK(rep.report.norm < 5e-7);
    CHECK(rep.report.trace_value < 1e-9);
  }

  // analytic commuting pair
  CommutatorReport<double> an =
      commutator_criterion(shift_symbol(1, 2), shift_symbol(2, 2), DiskPointXd(0.3, 0.3));
  CHECK(an.commutation_residual == 0.0);
  CHECK(an.report.norm == 0.0);

  // diag(w, wbar) and diag(wbar, w): symbols commute, operators do not
  SymbolXd d1 = diag_pair(1, -1);
  SymbolXd d2 = diag_pair(-1, 1);
  CommutatorReport<double> rep = commutator_criterion(d1, d2, DiskPointXd(0.0, 0.0));
  CHECK(rep.commutation_residual < 1e-15);
  CHECK(rep.report.norm > 0.1);

  const int N = 8;
  MatrixC<double> t1 = oracle::toeplitz_dense(d1, N);
  MatrixC<double> t2 = oracle::toeplitz_dense(d2, N);
  CHECK((t1 * t2 - t2 * t1).cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("normality_criterion") {
  MatrixC<double> h(2, 2);
  h << C(2, 0), C(0, 1), C(0, -1), C(-1, 0);
  CommutatorReport<double> ch = normality_criterion(constant_symbol<double>(h),
                                                    DiskPointXd(0.4, 0.2));
  CHECK(ch.commutation_residual < 1e-15);
  CHECK(ch.report.norm < 1e-12);

  CommutatorReport<double> cw = normality_criterion(shift_symbol(1), DiskPointXd(0.0, 0.0));
  CHECK(std::abs(cw.report.norm - 1.0) < 1e-12);
  // finite-section oracle: leading entry of S^*S - SS^* for the shift
  MatrixC<double> s = oracle::toeplitz_dense(shift_symbol(1), 6);
  MatrixC<double> self_comm = s.adjoint() * s - s * s.adjoint();
  CHECK(std::abs(self_comm(0, 0) - C(1, 0)) < 1e-15);

  SymbolXd cosine = shift_symbol(1) + shift_symbol(-1);
  for (auto zv : {C(0, 0), C(0.6, 0.2), C(-0.1, 0.8), C(0.33, -0.47)}) {
    CommutatorReport<double> rep = normality_criterion(cosine, DiskPointXd(zv));
    CHECK(rep.commutation_residual < 1e-15);
    CHECK(rep.report.norm < 1e-10);
  }
}

TEST_CASE("zero_semicommutator_check") {
  ZeroCheck<double> zc =
      zero_semicommutator_check(random_symbol(2, 3, 251), random_symbol(2, 3, 252, true));
  CHECK(zc.zero);
  CHECK(zc.max_abs_defect == 0.0);

  CHECK(zero_semicommutator_check(fixture_f(), fixture_g()).zero);

  SymbolXd cosine = shift_symbol(1) + shift_symbol(-1);
  ZeroCheck<double> nz = zero_semicommutator_check(cosine, cosine);
  CHECK(!nz.zero);
  CHECK(nz.max_abs_defect > 0.5);
  CHECK(nz.criterion_norm_z0 > 0.5);

  CHECK_THROWS_AS(zero_semicommutator_check(cosine, random_symbol(2, 1, 253)),
                  std::invalid_argument);
}

TEST_CASE("criterion-at-zero and the exact defect agree on nonvanishing") {
  for (std::uint64_t seed : {261u, 262u, 263u, 264u}) {
    SymbolXd f = random_symbol(2, 2, seed);
    SymbolXd g = random_symbol(2, 2, seed + 30);
    const double nrm = criterion(f, g, DiskPointXd(0.0, 0.0)).norm;
    MatrixC<double> s = semicommutator(f, g);
    const double defect = s.size() ? s.cwiseAbs().maxCoeff() : 0.0;
    if (nrm > 1e-3) CHECK(defect > 1e-8);
    if (defect > 1e-3) CHECK(nrm > 1e-8);
  }
}

TEST_CASE("zero_commutator_check and normality_check") {
  SymbolXd f = random_symbol(2, 2, 281);
  CommutatorZeroCheck<double> same = zero_commutator_check(f, f);
  CHECK(same.zero);
  CHECK(same.commutation_residual < 1e-15);

  CommutatorZeroCheck<double> diff = zero_commutator_check(diag_pair(1, -1), diag_pair(-1, 1));
  CHECK(!diff.zero);
  CHECK(diff.commutation_residual < 1e-15);
  CHECK(diff.max_abs_defect > 0.5);
  CHECK(diff.criterion_norm_z0 > 0.5);

  SymbolXd cosine = shift_symbol(1) + shift_symbol(-1);
  CHECK(normality_check(cosine).zero);
  CommutatorZeroCheck<double> shift = normality_check(shift_symbol(1));
  CHECK(!shift.zero);
  CHECK(std::abs(shift.criterion_norm_z0 - 1.0) < 1e-12);
}

TEST_CASE("radial_scan closed form and thread determinism") {
  SymbolXd w = shift_symbol(1), wbar = shift_symbol(-1);
  std::vector<double> radii;
  for (int i = 0; i < 8; ++i) radii.push_back(i / 8.0);
  ScanTable<double> t = radial_scan(w, wbar, radii, 8, ScanMode::Semicommutator);
  REQUIRE(t.rows.size() == 64);
  for (const auto& row : t.rows) {
    const double expect = 1.0 - row.r * row.r;
    CHECK(std::abs(row.norm - expect) < 1e-12);
    CHECK(std::abs(row.trace - expect * expect) < 1e-12);
  }

  SymbolXd f = random_symbol(2, 2, 271);
  SymbolXd g = random_symbol(2, 2, 272);
  ScanTable<double> one = radial_scan(f, g, radii, 4, ScanMode::Semicommutator, 1);
  ScanTable<double> many = radial_scan(f, g, radii, 4, ScanMode::Semicommutator, 3);
  REQUIRE(one.rows.size() == many.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(one.rows[i].r == many.rows[i].r);
    CHECK(one.rows[i].theta == many.rows[i].theta);
    CHECK(one.rows[i].norm == many.rows[i].norm);
    CHECK(one.rows[i].trace == many.rows[i].trace);
  }

  ScanTable<double> nt =
      radial_scan(shift_symbol(1) + shift_symbol(-1), SymbolXd(1), radii, 4,
                  ScanMode::Normality, 2);
  for (const auto& row : nt.rows) CHECK(row.norm < 1e-10);

  CHECK_THROWS_AS(radial_scan(w, wbar, {1.0}, 4, ScanMode::Semicommutator),
                  std::invalid_argument);
}
