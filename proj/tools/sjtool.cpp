#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <string>

#include <CLI11.hpp>

#include "sj/cayley.hpp"
#include "sj/checks.hpp"
#include "sj/diffops.hpp"
#include "sj/geodesics.hpp"
#include "sj/metrics.hpp"
#include "sj/reduction.hpp"
#include "sj/theta.hpp"

namespace {

using sj::cplx;
using sj::json;

constexpr int kOk = 0;
constexpr int kNumeric = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Quote bare complex literals such as i, 2i or 0.5-1.5i so that {"omega":2i} parses.
std::string quote_bare_scalars(const std::string& s) {
  static const std::regex bare(R"(([:\[,]\s*)([-+]?(?:\d+\.?\d*(?:[eE][-+]?\d+)?)?(?:[-+](?:\d+\.?\d*(?:[eE][-+]?\d+)?)?)?i)(?=\s*[,}\]]))");
  return std::regex_replace(s, bare, "$1\"$2\"");
}

json parse_json_arg(const std::string& flag, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
  }
  try {
    return json::parse(quote_bare_scalars(text));
  } catch (const json::exception& e) {
    throw UsageError("malformed JSON for " + flag + ": " + e.what());
  }
}

// A matrix flag: matrix JSON, a number, or a scalar literal such as 0,1 or 2i.
sj::CMatrix parse_matrix_arg(const std::string& flag, const std::string& text) {
  try {
    return sj::matrix_from_json(json::parse(text));
  } catch (const json::exception&) {
  }
  try {
    return sj::matrix_from_json(json(text));
  } catch (const sj::ParameterError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_check(const std::string& suite, const std::string& out, const sj::CheckOptions& opts) {
  const auto& suites = sj::check_suites();
  if (std::find(suites.begin(), suites.end(), suite) == suites.end())
    throw UsageError("unknown suite '" + suite + "'");
  const std::vector<sj::CheckRow> rows = sj::run_check_suite(suite, opts);
  const std::string csv = sj::rows_to_csv(rows);
  if (out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(out);
    if (!f) throw UsageError("cannot write " + out);
    f << csv;
  }
  int failed = 0;
  for (const auto& r : rows) failed += r.pass ? 0 : 1;
  std::cerr << suite << ": " << rows.size() << " cases, " << failed << " failed\n";
  return failed == 0 ? kOk : kNumeric;
}

int cmd_reduce(const std::string& space, const std::string& point, const std::string& cert_path, double tol_scale) {
  const json p = parse_json_arg("--point", point);
  json out, cert;
  double residual = 0.0, scale = 1.0;
  bool flags = true;
  if (space == "hn") {
    const sj::SiegelPoint in = sj::siegel_from_json(p);
    const sj::SiegelReduction r = sj::siegel_reduce(in);
    cert = sj::to_json(r.cert);
    out["point"] = sj::to_json(r.point);
    residual = sj::verify_certificate(in, r);
    scale = std::max(1.0, sj::max_abs(r.point.omega));
    flags = r.cert.m1 && r.cert.m2 && r.cert.s1 && r.cert.s3;
  } else if (space == "hnm") {
    const sj::JacobiPoint in = sj::jacobi_from_json(p);
    const sj::JacobiReduction r = sj::jacobi_reduce(in);
    cert = sj::to_json(r.cert);
    out["point"] = sj::to_json(r.point);
    out["lambda"] = sj::matrix_to_json(r.lambda.cast<cplx>());
    out["mu"] = sj::matrix_to_json(r.mu.cast<cplx>());
    residual = sj::verify_certificate(in, r);
    scale = std::max(1.0, sj::max_abs(r.point.z));
    flags = r.cert.m1 && r.cert.m2 && r.cert.s1 && r.cert.s3 && r.cert.lambda_mu_in_unit_box;
  } else {
    throw UsageError("--space must be hn or hnm");
  }
  cert["verify_residual"] = residual;
  out["certificate"] = cert;
  if (!cert_path.empty()) {
    std::ofstream f(cert_path);
    if (!f) throw UsageError("cannot write " + cert_path);
    f << cert.dump(2) << "\n";
  }
  print_json(out);
  return flags && residual <= 1e-9 * tol_scale * scale ? kOk : kNumeric;
}

int cmd_distance(const std::string& p0, const std::string& p1, bool emit_eigs) {
  const sj::SiegelPoint a = sj::siegel_from_json(parse_json_arg("--p0", p0));
  const sj::SiegelPoint b = sj::siegel_from_json(parse_json_arg("--p1", p1));
  std::printf("%.17g\n", sj::siegel_distance(a, b));
  if (emit_eigs) {
    std::printf("k,r_k\n");
    const std::vector<double> r = sj::cross_ratio_eigenvalues(a, b);
    for (std::size_t k = 0; k < r.size(); ++k) std::printf("%zu,%.17g\n", k, r[k]);
  }
  return kOk;
}

int cmd_metric(const std::string& space, double a, double b, const std::string& point, const std::string& t1s,
               const std::string& t2s) {
  const json p = parse_json_arg("--point", point);
  const sj::TangentVector t1 = sj::tangent_from_json(parse_json_arg("--t1", t1s));
  const sj::TangentVector t2 = sj::tangent_from_json(parse_json_arg("--t2", t2s.empty() ? t1s : t2s));
  cplx v;
  if (space == "hn")
    v = sj::siegel_metric(sj::siegel_from_json(p), t1, t2, a);
  else if (space == "hnm")
    v = sj::jacobi_metric(sj::jacobi_from_json(p), t1, t2, {a, b});
  else if (space == "dn")
    v = sj::disk_metric(sj::disk_from_json(p), t1, t2, a);
  else if (space == "dnm")
    v = sj::jacobi_disk_metric(sj::jacobi_disk_from_json(p), t1, t2, {a, b});
  else
    throw UsageError("--space must be hn, hnm, dn or dnm");
  print_json({{"value", complex_json(v)}});
  return kOk;
}

int cmd_laplacian(const std::string& space, double a, double b, const std::string& field, const std::string& point) {
  if (space != "hnm") throw UsageError("--space must be hnm");
  const sj::BuiltinField bf = sj::builtin_field(field);
  const sj::JacobiPoint p = sj::jacobi_from_json(parse_json_arg("--point", point));
  const cplx lap = sj::laplacian_jacobi(bf.f, p, {a, b});
  const cplx fv = bf.f(p);
  json out{{"field", bf.id}, {"value", complex_json(lap)}, {"f", complex_json(fv)}};
  // the tabulated eigenvalue belongs to A = B = 1
  if (a == 1.0 && b == 1.0) {
    out["eigenvalue"] = complex_json(bf.eigenvalue);
    out["relative_residual"] = std::abs(lap - bf.eigenvalue * fv) / std::max(std::abs(fv), 1e-300);
  }
  print_json(out);
  return kOk;
}

struct ThetaArgs {
  std::string m_mat, tau = "0,1", lam, mu, kappa, check;
  double phi = 0.0;
  int n_cut = 0;
};

int cmd_theta(const ThetaArgs& t, double tol_scale) {
  const sj::CMatrix mc = parse_matrix_arg("--M", t.m_mat);
  if (!sj::is_real(mc)) throw UsageError("--M must be real");
  const sj::RMatrix mm = mc.real();
  const int m = static_cast<int>(mm.rows());
  const sj::CMatrix tau = parse_matrix_arg("--tau", t.tau);
  if (tau.size() != 1) throw UsageError("--tau must be a scalar");
  auto block = [&](const std::string& flag, const std::string& text, int r, int c) {
    if (text.empty()) return sj::CMatrix(sj::CMatrix::Zero(r, c));
    sj::CMatrix a = parse_matrix_arg(flag, text);
    if (!sj::is_real(a)) throw UsageError(flag + " must be real");
    return sj::CMatrix(a.real().cast<cplx>());
  };
  const int n = t.lam.empty() ? 1 : static_cast<int>(parse_matrix_arg("--lam", t.lam).cols());
  const sj::HeisenbergElement h(block("--lam", t.lam, m, n), block("--mu", t.mu, m, n), block("--kappa", t.kappa, m, m));
  const sj::ThetaContext ctx(mm, n, t.n_cut);
  const sj::GridFunction f = sj::GridFunction::gaussian(mm, n);
  const sj::SL2Coord c{tau(0, 0), t.phi};
  const sj::ThetaResult r = sj::theta_sum(f, ctx, c, h);
  // residual column holds the truncation bound of the lattice sum
  std::cout << "case,lhs,rhs,residual,tol,pass\n";
  std::cout << "value," << sj::format_complex(r.value) << ",," << sj::format_number(r.tail_bound) << ",,true\n";
  if (t.check.empty()) return kOk;
  const sj::CheckRow row = sj::theta_law(t.check, f, ctx, c, h, tol_scale);
  std::cout << sj::rows_to_csv({row}).substr(std::string("case,lhs,rhs,residual,tol,pass\n").size());
  return row.pass ? kOk : kNumeric;
}

int cmd_cayley(const std::string& dir, const std::string& point) {
  const json p = parse_json_arg("--point", point);
  if (dir == "fwd") {
    if (p.contains("eta"))
      print_json(sj::to_json(sj::partial_cayley(sj::jacobi_disk_from_json(p))));
    else
      print_json(sj::to_json(sj::cayley(sj::disk_from_json(p))));
  } else if (dir == "inv") {
    if (p.contains("z"))
      print_json(sj::to_json(sj::partial_cayley_inverse(sj::jacobi_from_json(p))));
    else
      print_json(sj::to_json(sj::cayley_inverse(sj::siegel_from_json(p))));
  } else {
    throw UsageError("--dir must be fwd or inv");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Siegel-Jacobi space toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 1;
  double tol_scale = 1.0;
  app.add_option("--seed", seed, "Seed for randomized checks");
  app.add_option("--tol-scale", tol_scale, "Multiplier on default tolerances (values below 1 act as 1)");

  std::string suite, out;
  auto* check = app.add_subcommand("check", "Run an invariant battery and write per-case CSV");
  check->add_option("--suite", suite, "actions|cayley|metrics|laplacians|distance|reduction|jacobiforms|theta")
      ->required();
  check->add_option("--out", out, "CSV path (default: standard output)");

  std::string space, point, cert;
  auto* reduce = app.add_subcommand("reduce", "Reduce a point into the fundamental domain");
  reduce->add_option("--space", space, "hn|hnm")->required();
  reduce->add_option("--point", point, "Point JSON")->required();
  reduce->add_option("--cert", cert, "Write the certificate JSON here");

  std::string p0, p1;
  bool emit_eigs = false;
  auto* distance = app.add_subcommand("distance", "Symplectic distance on H_n");
  distance->add_option("--p0", p0, "Point JSON")->required();
  distance->add_option("--p1", p1, "Point JSON")->required();
  distance->add_flag("--emit-eigs", emit_eigs, "Also print the cross-ratio eigenvalues as CSV");

  std::string mspace, mpoint, t1, t2;
  double ma = 1.0, mb = 1.0;
  auto* metric = app.add_subcommand("metric", "Evaluate an invariant metric on two tangent vectors");
  metric->add_option("--space", mspace, "hn|hnm|dn|dnm")->required();
  metric->add_option("--A", ma, "Metric parameter A");
  metric->add_option("--B", mb, "Metric parameter B");
  metric->add_option("--point", mpoint, "Point JSON")->required();
  metric->add_option("--t1", t1, "Tangent JSON {\"dOmega\",\"dZ\"}")->required();
  metric->add_option("--t2", t2, "Tangent JSON (default: t1)");

  std::string lspace = "hnm", field, lpoint;
  double la = 1.0, lb = 1.0;
  auto* laplacian = app.add_subcommand("laplacian", "Apply the invariant Laplacian to a built-in field");
  laplacian->add_option("--space", lspace, "hnm");
  laplacian->add_option("--A", la, "Metric parameter A");
  laplacian->add_option("--B", lb, "Metric parameter B");
  laplacian->add_option("--field", field, "Built-in field id, e.g. ys:1.7 or bessel:1.7:1")->required();
  laplacian->add_option("--point", lpoint, "Point JSON")->required();

  ThetaArgs ta;
  auto* theta = app.add_subcommand("theta", "Theta sum of the Gaussian test function");
  theta->add_option("--M", ta.m_mat, "Index matrix (integral, positive definite)")->required();
  theta->add_option("--tau", ta.tau, "re,im");
  theta->add_option("--phi", ta.phi, "Rotation angle");
  theta->add_option("--lam", ta.lam, "lambda (m x n)");
  theta->add_option("--mu", ta.mu, "mu (m x n)");
  theta->add_option("--kappa", ta.kappa, "kappa (m x m)");
  theta->add_option("--n-cut", ta.n_cut, "Lattice box radius (0: automatic)");
  theta->add_option("--check", ta.check, "jacobi1|jacobi2|jacobi3|gamma2");

  std::string dir, cpoint;
  auto* cay = app.add_subcommand("cayley", "Cayley transform between disk and half-space models");
  cay->add_option("--dir", dir, "fwd|inv")->required();
  cay->add_option("--point", cpoint, "Point JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  const sj::CheckOptions opts{seed, std::max(1.0, tol_scale)};
  try {
    if (*check) return cmd_check(suite, out, opts);
    if (*reduce) return cmd_reduce(space, point, cert, opts.tol_scale);
    if (*distance) return cmd_distance(p0, p1, emit_eigs);
    if (*metric) return cmd_metric(mspace, ma, mb, mpoint, t1, t2);
    if (*laplacian) return cmd_laplacian(lspace, la, lb, field, lpoint);
    if (*theta) return cmd_theta(ta, opts.tol_scale);
    if (*cay) return cmd_cayley(dir, cpoint);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sj::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sj::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sj::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sj::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}
