// Batch front-end: symbol file I/O, built-in generators, operator-product
// checks as subcommands, and CSV/JSON report emission. Every subcommand is
// deterministic given files + flags + seed; repeated runs are byte-identical.
//
// Exit codes: 0 = requested computation completed (verdict lives in the
// output, not the code); 2 = unreadable input or bad usage; 3 = dimension
// mismatch between inputs; 1 = any other failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "btl/criteria.hpp"
#include "btl/decompose.hpp"
#include "btl/generate.hpp"
#include "btl/serialize.hpp"
#include "btl/symbol.hpp"

namespace {

using btl::DiskPoint;
using btl::SymbolXd;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << content;
}

const char* json_bool(bool b) { return b ? "true" : "false"; }

void check_same_block_size(const SymbolXd& f, const SymbolXd& g) {
  if (f.block_size() != g.block_size())
    throw btl::dimension_error("inputs have block sizes " + std::to_string(f.block_size()) +
                               " and " + std::to_string(g.block_size()));
}

// Vector symbols travel in the same n x n file format with the data in the
// first column; every other column must be exactly zero.
std::vector<SymbolXd> to_vector_symbol(const SymbolXd& f, const std::string& where) {
  const Eigen::Index n = f.block_size();
  for (const auto& [k, a] : f.coeffs())
    for (Eigen::Index c = 1; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r)
        if (a(r, c) != std::complex<double>(0, 0))
          throw std::runtime_error(where + ": vector symbol must have zeros outside column 0 " +
                                   "(nonzero at k = " + std::to_string(k) + ", row " +
                                   std::to_string(r) + ", column " + std::to_string(c) + ")");
  std::vector<SymbolXd> entries;
  entries.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) entries.push_back(btl::entry(f, r, 0));
  return entries;
}

DiskPoint<double> parse_z(const std::vector<double>& zflag) {
  return DiskPoint<double>(zflag[0], zflag[1]);
}

std::string xi_result_to_json(const btl::XiResult<double>& res) {
  std::ostringstream out;
  out << "{\"z\": [" << btl::format_float(res.z.value().real()) << ", "
      << btl::format_float(res.z.value().imag())
      << "], \"value\": " << btl::format_float(res.value) << ", \"iterations\": " << res.iterations
      << ", \"converged\": " << json_bool(res.converged)
      << ", \"certificate\": " << btl::certificate_to_json(res.cert) << "}";
  return out.str();
}

int resolve_threads(int flag_threads) {
  if (const char* env = std::getenv("BTL_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || v < 1)
      throw btl::parse_error(std::string("BTL_THREADS: expected a positive integer, got \"") +
                             env + "\"");
    return static_cast<int>(v);
  }
  if (flag_threads > 0) return flag_threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void validate_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw btl::parse_error("--radii: need at least one radius");
  for (double r : radii)
    if (!(r > 0.0 && r < 1.0))
      throw btl::parse_error("--radii: radii must lie strictly inside (0, 1)");
}

int run(int argc, char** argv) {
  CLI::App app{"Block Toeplitz operator product checks on trigonometric matrix symbols"};
  app.require_subcommand(1);

  std::string f_path, g_path, out_path, mode_name = "semicommutator", kind;
  std::vector<double> radii, zflag;
  int angles = 8, threads = 0, max_iters = 500, perm_budget = 0, degree = 1;
  Eigen::Index block_n = 1;
  std::uint64_t seed = 0;

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out_path, "Output path (default stdout)"); };
  auto add_pair = [&](CLI::App* sub) {
    sub->add_option("F", f_path, "Left symbol JSON file")->required();
    sub->add_option("G", g_path, "Right symbol JSON file")->required();
    add_out(sub);
  };

  CLI::App* semi = app.add_subcommand("check-zero-semicommutator",
                                      "Is T_F T_G - T_FG zero? Exact route, criterion at z = 0, "
                                      "and per-column certificates when zero");
  add_pair(semi);

  CLI::App* comm = app.add_subcommand("check-zero-commutator",
                                      "Is T_F T_G - T_G T_F zero? Adds the FG - GF residual");
  add_pair(comm);

  CLI::App* normal = app.add_subcommand("check-normal", "Is T_F normal?");
  normal->add_option("F", f_path, "Symbol JSON file")->required();
  add_out(normal);

  CLI::App* scan = app.add_subcommand("scan", "Criterion norm/trace over a polar grid, CSV out");
  scan->add_option("F", f_path, "Left symbol JSON file")->required();
  scan->add_option("G", g_path, "Right symbol JSON file")->required();
  scan->add_option("--mode", mode_name, "semicommutator | commutator | normality")
      ->check(CLI::IsMember({"semicommutator", "commutator", "normality"}));
  scan->add_option("--radii", radii, "Comma-separated radii in (0, 1)")
      ->required()
      ->delimiter(',');
  scan->add_option("--angles", angles, "Equally spaced angles per radius (>= 1)");
  scan->add_option("--threads", threads, "Worker count (default: available parallelism)");
  add_out(scan);

  CLI::App* cert = app.add_subcommand(
      "certificate", "Zero-sum certificate for vector symbols f, g; with --z the distance-style "
                     "minimization at that disk point");
  cert->add_option("f", f_path, "Vector symbol JSON file (data in column 0)")->required();
  cert->add_option("g", g_path, "Vector symbol JSON file (data in column 0)")->required();
  cert->add_option("--z", zflag, "Disk point re im")->expected(2);
  cert->add_option("--max-iters", max_iters, "Subgradient iteration cap per permutation");
  cert->add_option("--perm-budget", perm_budget, "Sampled permutations when n > 8");
  add_out(cert);

  CLI::App* xi = app.add_subcommand("xi2", "Distance-style minimization at a disk point");
  xi->add_option("f", f_path, "Vector symbol JSON file (data in column 0)")->required();
  xi->add_option("g", g_path, "Vector symbol JSON file (data in column 0)")->required();
  xi->add_option("--z", zflag, "Disk point re im")->expected(2)->required();
  xi->add_option("--max-iters", max_iters, "Subgradient iteration cap per permutation");
  xi->add_option("--perm-budget", perm_budget, "Sampled permutations when n > 8");
  add_out(xi);

  CLI::App* trace = app.add_subcommand(
      "trace-identity", "Max disagreement between the two trace-defect paths over a polar grid");
  trace->add_option("F", f_path, "Left symbol JSON file")->required();
  trace->add_option("G", g_path, "Right symbol JSON file")->required();
  trace->add_option("--radii", radii, "Comma-separated radii in (0, 1)")->delimiter(',');
  trace->add_option("--angles", angles, "Equally spaced angles per radius (>= 1)");
  add_out(trace);

  CLI::App* gen = app.add_subcommand("generate", "Built-in symbol generators");
  gen->add_option("--kind", kind, "squarewave | random | analytic")
      ->required()
      ->check(CLI::IsMember({"squarewave", "random", "analytic"}));
  gen->add_option("--n", block_n, "Block size (>= 1)");
  gen->add_option("--degree", degree, "Top frequency (>= 0; squarewave needs >= 1)");
  gen->add_option("--seed", seed, "RNG seed for the random kinds");
  add_out(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? 0 : 2;
  }

  if (semi->parsed()) {
    const SymbolXd f = btl::read_symbol_file(f_path);
    const SymbolXd g = btl::read_symbol_file(g_path);
    check_same_block_size(f, g);
    const btl::ZeroCheck<double> check = btl::zero_semicommutator_check(f, g);
    const btl::CriterionReport<double> rep = btl::criterion(f, g, DiskPoint<double>(0, 0));
    std::ostringstream out;
    out << "{\"zero\": " << json_bool(check.zero)
        << ", \"max_abs_defect\": " << btl::format_float(check.max_abs_defect)
        << ", \"criterion\": " << btl::criterion_report_to_json(rep);
    if (check.zero) {
      // One certificate per column of G: the rank-one sums pair row r of F^*
      // (as a vector symbol) against that column.
      const Eigen::Index n = f.block_size();
      const SymbolXd fstar = btl::adjoint(f);
      out << ", \"certificates\": [";
      for (Eigen::Index j = 0; j < n; ++j) {
        std::vector<std::vector<SymbolXd>> f_rows;
        std::vector<SymbolXd> g_col;
        for (Eigen::Index r = 0; r < n; ++r) {
          std::vector<SymbolXd> row;
          for (Eigen::Index i = 0; i < n; ++i) row.push_back(btl::entry(fstar, i, r));
          f_rows.push_back(std::move(row));
          g_col.push_back(btl::entry(g, r, j));
        }
        out << (j ? ", " : "");
        try {
          const btl::ZeroSumCheck<double> zs = btl::theorem5_check(f_rows, g_col);
          out << "{\"column\": " << j << ", \"membership\": " << json_bool(zs.membership)
              << ", \"certificate\": " << btl::certificate_to_json(zs.cert) << "}";
        } catch (const std::exception& e) {
          out << "{\"column\": " << j << ", \"error\": \"" << e.what() << "\"}";
        }
      }
      out << "]";
    }
    out << "}\n";
    write_output(out_path, out.str());
    return 0;
  }

  if (comm->parsed() || normal->parsed()) {
    const SymbolXd f = btl::read_symbol_file(f_path);
    btl::CommutatorZeroCheck<double> check;
    const char* verdict_key = "zero";
    if (comm->parsed()) {
      const SymbolXd g = btl::read_symbol_file(g_path);
      check_same_block_size(f, g);
      check = btl::zero_commutator_check(f, g);
    } else {
      check = btl::normality_check(f);
      verdict_key = "normal";
    }
    std::ostringstream out;
    out << "{\"" << verdict_key << "\": " << json_bool(check.zero)
        << ", \"max_abs_defect\": " << btl::format_float(check.max_abs_defect)
        << ", \"criterion_norm_z0\": " << btl::format_float(check.criterion_norm_z0)
        << ", \"commutation_residual\": " << btl::format_float(check.commutation_residual)
        << "}\n";
    write_output(out_path, out.str());
    return 0;
  }

  if (scan->parsed()) {
    const SymbolXd f = btl::read_symbol_file(f_path);
    const SymbolXd g = btl::read_symbol_file(g_path);
    check_same_block_size(f, g);
    validate_radii(radii);
    if (angles < 1) throw btl::parse_error("--angles: need at least 1");
    btl::ScanMode mode = btl::ScanMode::Semicommutator;
    if (mode_name == "commutator") mode = btl::ScanMode::Commutator;
    if (mode_name == "normality") mode = btl::ScanMode::Normality;
    const btl::ScanTable<double> table =
        btl::radial_scan(f, g, radii, angles, mode, resolve_threads(threads));
    write_output(out_path, btl::scan_to_csv(table));
    return 0;
  }

  if (cert->parsed() || xi->parsed()) {
    const SymbolXd fmat = btl::read_symbol_file(f_path);
    const SymbolXd gmat = btl::read_symbol_file(g_path);
    check_same_block_size(fmat, gmat);
    const std::vector<SymbolXd> f = to_vector_symbol(fmat, f_path);
    const std::vector<SymbolXd> g = to_vector_symbol(gmat, g_path);
    std::ostringstream out;
    if (!zflag.empty()) {
      const btl::XiResult<double> res = btl::xi2(f, g, parse_z(zflag), max_iters, perm_budget);
      out << xi_result_to_json(res) << "\n";
    } else {
      try {
        const btl::ZeroSumCheck<double> zs = btl::theorem5_check({f}, g);
        out << "{\"zero_sum\": true, \"hankel_sum_norm\": "
            << btl::format_float(zs.hankel_sum_norm)
            << ", \"membership\": " << json_bool(zs.membership)
            << ", \"certificate\": " << btl::certificate_to_json(zs.cert) << "}\n";
      } catch (const btl::not_zero_instance& e) {
        out << "{\"zero_sum\": false, \"k\": " << e.index()
            << ", \"norm\": " << btl::format_float(e.norm()) << "}\n";
      }
    }
    write_output(out_path, out.str());
    return 0;
  }

  if (trace->parsed()) {
    const SymbolXd f = btl::read_symbol_file(f_path);
    const SymbolXd g = btl::read_symbol_file(g_path);
    check_same_block_size(f, g);
    if (radii.empty()) radii = {0.2, 0.5, 0.8};
    validate_radii(radii);
    if (angles < 1) throw btl::parse_error("--angles: need at least 1");
    const double pi = 3.14159265358979323846;
    double max_gap = 0;
    btl::TraceDefect<double> worst;
    std::complex<double> worst_z(0, 0);
    for (double r : radii)
      for (int a = 0; a < angles; ++a) {
        const double theta = 2 * pi * a / angles;
        const DiskPoint<double> z(r * std::cos(theta), r * std::sin(theta));
        const btl::TraceDefect<double> paths = btl::trace_defect_paths(f, g, z);
        if (paths.rel_gap >= max_gap) {
          max_gap = paths.rel_gap;
          worst = paths;
          worst_z = z.value();
        }
      }
    std::ostringstream out;
    out << "{\"max_rel_gap\": " << btl::format_float(max_gap)
        << ", \"points\": " << radii.size() * static_cast<std::size_t>(angles)
        << ", \"worst\": {\"z\": [" << btl::format_float(worst_z.real()) << ", "
        << btl::format_float(worst_z.imag())
        << "], \"poisson\": " << btl::format_float(worst.poisson)
        << ", \"gram\": " << btl::format_float(worst.gram) << "}}\n";
    write_output(out_path, out.str());
    return 0;
  }

  if (gen->parsed()) {
    SymbolXd sym(1);
    if (kind == "squarewave") {
      sym = btl::squarewave_symbol(block_n, degree);
    } else {
      sym = btl::random_symbol(block_n, degree, seed, kind == "analytic");
    }
    write_output(out_path, btl::symbol_to_json(sym));
    return 0;
  }

  return 1;  // unreachable: require_subcommand(1)
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const btl::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const btl::dimension_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
