#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace sj {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using json = nlohmann::json;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Error kinds shared by every module. The CLI maps them onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NumericError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct AccuracyError : Error { using Error::Error; };
struct EvaluationError : Error { using Error::Error; };

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-10;

  bool close(double a, double b) const;
  bool close(cplx a, cplx b) const;
  bool close(const CMatrix& a, const CMatrix& b) const;
};

// max_ij |A_ij|
double max_abs(const CMatrix& a);
// infinity norm (max row sum)
double norm_inf(const CMatrix& a);

CMatrix identity(int n);
CMatrix zeros(int r, int c);
CMatrix to_complex(const RMatrix& a);

void require_square(const CMatrix& a, const char* what);
void require_shape(const CMatrix& a, int r, int c, const char* what);

bool is_symmetric(const CMatrix& a, Tolerance tol = {});
bool is_hermitian(const CMatrix& a, Tolerance tol = {});
bool is_real(const CMatrix& a, Tolerance tol = {});
bool is_positive_definite(const CMatrix& s, Tolerance tol = {});

CMatrix symmetrize(const CMatrix& a);

struct HermitianEig {
  RVector values;  // ascending
  CMatrix vectors; // columns
};
HermitianEig hermitian_eig(const CMatrix& s);

// Lower-triangular L with L L^H = S.
CMatrix cholesky(const CMatrix& s);

// Inverse through partial-pivot LU; throws NumericError when the
// 1-norm condition number exceeds 1e12.
CMatrix inverse(const CMatrix& a);
// Solves X * A = B (right division), same conditioning guard.
CMatrix right_divide(const CMatrix& b, const CMatrix& a);
double condition_number(const CMatrix& a);

struct SqrtLog {
  CMatrix sqrt;    // principal square root
  RVector roots;   // sqrt of the eigenvalues, ascending
  RVector logs;    // log((1+r)/(1-r)) per root
};
// S real symmetric with spectrum in [0,1).
SqrtLog principal_sqrt_log(const CMatrix& s);

// Real symmetric square root of a positive definite matrix.
CMatrix sqrt_pd(const CMatrix& s);

json matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const json& j);

}  // namespace sj
