#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "btl/criteria.hpp"
#include "btl/decompose.hpp"
#include "btl/symbol.hpp"
#include "json.hpp"

namespace btl {

class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class dimension_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All emitted floats use 17 significant digits (lossless double round-trip).
inline std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Symbol interchange schema:
// { "n": int, "coeffs": [ { "k": int, "re": [[...]], "im": [[...]] } ] }
// with row-major n x n real and imaginary parts.
inline MatrixSymbol<double> symbol_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("n") || !j.contains("coeffs"))
    throw parse_error(where + ": expected an object with \"n\" and \"coeffs\"");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1)
    throw parse_error(where + ": \"n\" must be a positive integer");
  const Eigen::Index n = j["n"].get<Eigen::Index>();
  if (!j["coeffs"].is_array()) throw parse_error(where + ": \"coeffs\" must be an array");

  SymbolXd::CoeffMap coeffs;
  for (const auto& item : j["coeffs"]) {
    if (!item.is_object() || !item.contains("k") || !item.contains("re") || !item.contains("im"))
      throw parse_error(where + ": each coefficient needs \"k\", \"re\", \"im\"");
    if (!item["k"].is_number_integer()) throw parse_error(where + ": \"k\" must be an integer");
    const int k = item["k"].get<int>();
    auto read_part = [&](const char* key) {
      const auto& rows = item[key];
      if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
        throw parse_error(where + ": \"" + key + "\" must be an " + std::to_string(n) + "x" +
                          std::to_string(n) + " array");
      Eigen::MatrixXd part(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
          throw parse_error(where + ": \"" + key + "\" must be an " + std::to_string(n) + "x" +
                            std::to_string(n) + " array");
        for (Eigen::Index c = 0; c < n; ++c) {
          const auto& cell = row[static_cast<std::size_t>(c)];
          if (!cell.is_number()) throw parse_error(where + ": matrix entries must be numbers");
          part(r, c) = cell.get<double>();
        }
      }
      return part;
    };
    const Eigen::MatrixXd re = read_part("re");
    const Eigen::MatrixXd im = read_part("im");
    MatrixC<double> a = re.cast<std::complex<double>>() +
                        std::complex<double>(0, 1) * im.cast<std::complex<double>>();
    auto [it, fresh] = coeffs.emplace(k, std::move(a));
    if (!fresh) throw parse_error(where + ": duplicate coefficient k = " + std::to_string(k));
  }
  return MatrixSymbol<double>(n, std::move(coeffs));
}

inline MatrixSymbol<double> read_symbol_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path + ": cannot open");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
  return symbol_from_json(j, path);
}

inline std::string symbol_to_json(const MatrixSymbol<double>& f) {
  const Eigen::Index n = f.block_size();
  std::ostringstream out;
  out << "{\n  \"n\": " << n << ",\n  \"coeffs\": [";
  bool first_coeff = true;
  for (const auto& [k, a] : f.coeffs()) {
    out << (first_coeff ? "\n" : ",\n");
    first_coeff = false;
    out << "    {\"k\": " << k << ", \"re\": [";
    for (Eigen::Index r = 0; r < n; ++r) {
      out << (r ? ", [" : "[");
      for (Eigen::Index c = 0; c < n; ++c)
        out << (c ? ", " : "") << format_float(a(r, c).real());
      out << "]";
    }
    out << "], \"im\": [";
    for (Eigen::Index r = 0; r < n; ++r) {
      out << (r ? ", [" : "[");
      for (Eigen::Index c = 0; c < n; ++c)
        out << (c ? ", " : "") << format_float(a(r, c).imag());
      out << "]";
    }
    out << "]}";
  }
  out << "\n  ]\n}\n";
  return out.str();
}

// Nested array of [re, im] pairs, row-major.
inline std::string complex_matrix_to_json(const MatrixC<double>& m) {
  std::ostringstream out;
  out << "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << (r ? ", [" : "[");
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out << (c ? ", [" : "[") << format_float(m(r, c).real()) << ", "
          << format_float(m(r, c).imag()) << "]";
    out << "]";
  }
  out << "]";
  return out.str();
}

inline std::string criterion_report_to_json(const CriterionReport<double>& rep) {
  std::ostringstream out;
  out << "{\"z\": [" << format_float(rep.z.real()) << ", " << format_float(rep.z.imag())
      << "], \"norm\": " << format_float(rep.norm)
      << ", \"trace\": " << format_float(rep.trace_value)
      << ", \"left_factor\": " << complex_matrix_to_json(rep.left_factor)
      << ", \"right_factor\": " << complex_matrix_to_json(rep.right_factor) << "}";
  return out.str();
}

// { "A": [[re,im]...] row-major, "R": index array with (Rf)_i = f[R[i]],
//   "residual_f": [...], "residual_g": ... }
inline std::string certificate_to_json(const Certificate<double>& cert) {
  std::ostringstream out;
  out << "{\"A\": [";
  bool first = true;
  for (Eigen::Index r = 0; r < cert.A.rows(); ++r)
    for (Eigen::Index c = 0; c < cert.A.cols(); ++c) {
      out << (first ? "[" : ", [") << format_float(cert.A(r, c).real()) << ", "
          << format_float(cert.A(r, c).imag()) << "]";
      first = false;
    }
  out << "], \"R\": [";
  for (std::size_t i = 0; i < cert.perm.size(); ++i)
    out << (i ? ", " : "") << cert.perm[i];
  out << "], \"residual_f\": [";
  for (std::size_t i = 0; i < cert.residual_f.size(); ++i)
    out << (i ? ", " : "") << format_float(cert.residual_f[i]);
  out << "], \"residual_g\": " << format_float(cert.residual_g) << "}";
  return out.str();
}

inline std::string scan_to_csv(const ScanTable<double>& table) {
  std::ostringstream out;
  out << "r,theta,norm,trace\n";
  for (const auto& row : table.rows)
    out << format_float(row.r) << ',' << format_float(row.theta) << ',' << format_float(row.norm)
        << ',' << format_float(row.trace) << '\n';
  return out.str();
}

}  // namespace btl
