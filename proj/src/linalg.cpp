#include "sj/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sj {

bool Tolerance::close(double a, double b) const {
  return std::abs(a - b) <= abs + rel * std::max(std::abs(a), std::abs(b));
}

bool Tolerance::close(cplx a, cplx b) const {
  return std::abs(a - b) <= abs + rel * std::max(std::abs(a), std::abs(b));
}

bool Tolerance::close(const CMatrix& a, const CMatrix& b) const {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= abs + rel * std::max(max_abs(a), max_abs(b));
}

double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double norm_inf(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
}

CMatrix identity(int n) { return CMatrix::Identity(n, n); }
CMatrix zeros(int r, int c) { return CMatrix::Zero(r, c); }
CMatrix to_complex(const RMatrix& a) { return a.cast<cplx>(); }

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

void require_shape(const CMatrix& a, int r, int c, const char* what) {
  if (a.rows() != r || a.cols() != c)
    throw DimensionError(std::string(what) + ": expected " + std::to_string(r) + "x" +
                         std::to_string(c) + ", got " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
}

bool is_symmetric(const CMatrix& a, Tolerance tol) {
  require_square(a, "is_symmetric");
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.cols(); ++j)
      if (!tol.close(a(i, j), a(j, i))) return false;
  return true;
}

bool is_hermitian(const CMatrix& a, Tolerance tol) {
  require_square(a, "is_hermitian");
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i; j < a.cols(); ++j)
      if (!tol.close(a(i, j), std::conj(a(j, i)))) return false;
  return true;
}

bool is_real(const CMatrix& a, Tolerance tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (std::abs(a(i).imag()) > tol.abs + tol.rel * std::abs(a(i))) return false;
  return true;
}

bool is_positive_definite(const CMatrix& s, Tolerance tol) {
  require_square(s, "is_positive_definite");
  if (!is_hermitian(s, tol)) throw DomainError("is_positive_definite: matrix is not Hermitian");
  return hermitian_eig(s).values(0) > tol.abs;
}

CMatrix symmetrize(const CMatrix& a) {
  return (a + a.transpose()) * 0.5;
}

HermitianEig hermitian_eig(const CMatrix& s) {
  require_square(s, "hermitian_eig");
  CMatrix h = (s + s.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericError("hermitian_eig: solver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

CMatrix cholesky(const CMatrix& s) {
  require_square(s, "cholesky");
  Eigen::LLT<CMatrix> llt(s);
  if (llt.info() != Eigen::Success) throw DomainError("cholesky: matrix is not positive definite");
  return llt.matrixL();
}

double condition_number(const CMatrix& a) {
  require_square(a, "condition_number");
  Eigen::PartialPivLU<CMatrix> lu(a);
  CMatrix inv = lu.inverse();
  double n1 = a.cwiseAbs().colwise().sum().maxCoeff();
  double n2 = inv.cwiseAbs().colwise().sum().maxCoeff();
  double c = n1 * n2;
  return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

CMatrix inverse(const CMatrix& a) {
  require_square(a, "inverse");
  Eigen::PartialPivLU<CMatrix> lu(a);
  CMatrix inv = lu.inverse();
  double c = a.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(c) || c > 1e12)
    throw NumericError("inverse: matrix is singular or ill-conditioned (cond ~ " +
                       std::to_string(c) + ")");
  return inv;
}

CMatrix right_divide(const CMatrix& b, const CMatrix& a) {
  if (b.cols() != a.rows()) throw DimensionError("right_divide: shape mismatch");
  return b * inverse(a);
}

SqrtLog principal_sqrt_log(const CMatrix& s) {
  require_square(s, "principal_sqrt_log");
  Tolerance tol;
  if (!is_real(s, tol) || !is_symmetric(s, tol))
    throw DomainError("principal_sqrt_log: matrix must be real symmetric");
  HermitianEig e = hermitian_eig(s);
  const Eigen::Index n = s.rows();
  SqrtLog out;
  out.roots.resize(n);
  out.logs.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double v = e.values(k);
    if (v < -1e-12 || v >= 1.0)
      throw DomainError("principal_sqrt_log: eigenvalue " + std::to_string(v) +
                        " outside [0,1)");
    double r = std::sqrt(std::max(v, 0.0));
    out.roots(k) = r;
    out.logs(k) = std::log1p(r) - std::log1p(-r);
  }
  out.sqrt = e.vectors * out.roots.cast<cplx>().asDiagonal() * e.vectors.adjoint();
  out.sqrt = symmetrize(CMatrix(out.sqrt.real().cast<cplx>()));
  return out;
}

CMatrix sqrt_pd(const CMatrix& s) {
  HermitianEig e = hermitian_eig(s);
  if (e.values(0) <= 0) throw DomainError("sqrt_pd: matrix is not positive definite");
  RVector r = e.values.cwiseSqrt();
  return e.vectors * r.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

json matrix_to_json(const CMatrix& a) {
  json data = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      data.push_back({a(i, j).real(), a(i, j).imag()});
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"data", data}};
}

namespace {

// "i", "2i", "-0.5i", "1.5+2.5i", "3", "a,b"
cplx parse_scalar(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  if (s.empty()) throw ParameterError("empty scalar literal");
  auto comma = s.find(',');
  try {
    if (comma != std::string::npos)
      return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    if (s.back() != 'i') return {std::stod(s), 0.0};
    std::string body = s.substr(0, s.size() - 1);
    // split at the last sign that is not an exponent sign or leading
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    auto imag_of = [](const std::string& t) {
      if (t.empty() || t == "+") return 1.0;
      if (t == "-") return -1.0;
      return std::stod(t);
    };
    if (split == std::string::npos) return {0.0, imag_of(body)};
    return {std::stod(body.substr(0, split)), imag_of(body.substr(split))};
  } catch (const std::logic_error&) {
    throw ParameterError("malformed scalar literal '" + s + "'");
  }
}

}  // namespace

CMatrix matrix_from_json(const json& j) {
  if (j.is_number()) {
    CMatrix a(1, 1);
    a(0, 0) = j.get<double>();
    return a;
  }
  if (j.is_string()) {
    CMatrix a(1, 1);
    a(0, 0) = parse_scalar(j.get<std::string>());
    return a;
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw ParameterError("matrix JSON must have rows, cols and data");
  const auto rows = j.at("rows").get<long>();
  const auto cols = j.at("cols").get<long>();
  const json& data = j.at("data");
  if (rows < 1 || cols < 1) throw DimensionError("matrix JSON: rows and cols must be >= 1");
  if (!data.is_array() || static_cast<long>(data.size()) != rows * cols)
    throw DimensionError("matrix JSON: data length does not match rows*cols");
  CMatrix a(rows, cols);
  for (long k = 0; k < rows * cols; ++k) {
    const json& e = data[k];
    cplx v;
    if (e.is_array() && e.size() == 2)
      v = {e[0].get<double>(), e[1].get<double>()};
    else if (e.is_number())
      v = e.get<double>();
    else
      throw ParameterError("matrix JSON: each entry must be [re, im]");
    a(k / cols, k % cols) = v;
  }
  return a;
}

}  // namespace sj
