#pragma once

// Deterministic symbol generators shared by the CLI and the test suite.

#include "btl/symbol.hpp"

#include <cstdint>
#include <random>

namespace btl {

// [0, 1) from the top 53 bits; avoids distribution objects so that output
// depends only on the engine sequence fixed by the standard.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform_pm1(std::mt19937_64& eng) { return 2.0 * uniform01(eng) - 1.0; }

// Dense random symbol with support [-degree, degree] ([0, degree] when
// analytic); entries have real and imaginary parts uniform in [-1, 1].
// Draw order: k ascending, blocks row-major, real part before imaginary.
inline SymbolXd random_symbol(Eigen::Index n, int degree, std::uint64_t seed,
                              bool analytic = false) {
  if (degree < 0) throw std::invalid_argument("random_symbol: degree must be >= 0");
  std::mt19937_64 eng(seed);
  SymbolXd::CoeffMap m;
  const int lo = analytic ? 0 : -degree;
  for (int k = lo; k <= degree; ++k) {
    MatrixC<double> a(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) {
        const double re = uniform_pm1(eng);
        const double im = uniform_pm1(eng);
        a(r, c) = std::complex<double>(re, im);
      }
    m.emplace(k, std::move(a));
  }
  return SymbolXd(n, std::move(m));
}

// Degree-d Fourier truncation of the unit square wave
//   s(theta) = (4/pi) sum_{odd k > 0} sin(k theta) / k,
// in exponential form c_k = -2i/(pi k) and c_{-k} = 2i/(pi k) for odd k,
// placed on the diagonal of an n x n block.
inline SymbolXd squarewave_symbol(Eigen::Index n, int degree) {
  if (degree < 1) throw std::invalid_argument("squarewave_symbol: degree must be >= 1");
  const double pi = 3.14159265358979323846;
  SymbolXd::CoeffMap m;
  for (int k = 1; k <= degree; k += 2) {
    const std::complex<double> c(0.0, -2.0 / (pi * k));
    m.emplace(k, (c * MatrixC<double>::Identity(n, n)).eval());
    m.emplace(-k, (std::conj(c) * MatrixC<double>::Identity(n, n)).eval());
  }
  return SymbolXd(n, std::move(m));
}

}  // namespace btl
