#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "sj/spaces.hpp"

namespace sj {

// Real 2n x 2n matrix with tM J M = J, J = [[0, I],[-I, 0]]. Stored complex
// so it composes with the rest of the matrix code.
struct SymplecticElement {
  CMatrix mat;

  SymplecticElement() = default;
  explicit SymplecticElement(const CMatrix& m, Tolerance tol = {});

  int n() const { return static_cast<int>(mat.rows() / 2); }
  CMatrix a() const { return mat.topLeftCorner(n(), n()); }
  CMatrix b() const { return mat.topRightCorner(n(), n()); }
  CMatrix c() const { return mat.bottomLeftCorner(n(), n()); }
  CMatrix d() const { return mat.bottomRightCorner(n(), n()); }

  static SymplecticElement identity(int n);
  static SymplecticElement j(int n);                   // [[0, I],[-I, 0]]
  static SymplecticElement sigma(int n);               // [[0, -I],[I, 0]]
  static SymplecticElement t(const CMatrix& b);        // [[I, b],[0, I]], b symmetric
  static SymplecticElement g(const CMatrix& alpha);    // [[t(alpha), 0],[0, alpha^-1]]
  static SymplecticElement from_blocks(const CMatrix& a, const CMatrix& b, const CMatrix& c,
                                       const CMatrix& d, Tolerance tol = {});
};

// (lambda, mu; kappa) with lambda, mu in R^{(m,n)}, kappa in R^{(m,m)},
// kappa + mu t(lambda) symmetric.
struct HeisenbergElement {
  CMatrix lambda;
  CMatrix mu;
  CMatrix kappa;

  HeisenbergElement() = default;
  HeisenbergElement(const CMatrix& lambda, const CMatrix& mu, const CMatrix& kappa,
                    Tolerance tol = {});

  int m() const { return static_cast<int>(lambda.rows()); }
  int n() const { return static_cast<int>(lambda.cols()); }
  static HeisenbergElement identity(int m, int n);
};

struct JacobiGroupElement {
  SymplecticElement sp;
  HeisenbergElement h;

  int n() const { return sp.n(); }
  int m() const { return h.m(); }
  static JacobiGroupElement identity(int n, int m);
};

// Element of G_*^J: (P, Q) with tP conj(P) - t(conj Q) Q = I, tP conj(Q) = t(conj Q) P,
// and Heisenberg part (xi, conj(xi); -i kappa / 2).
struct StarGroupElement {
  CMatrix p;
  CMatrix q;
  CMatrix xi;     // m x n
  CMatrix kappa;  // m x m, real

  StarGroupElement() = default;
  StarGroupElement(const CMatrix& p, const CMatrix& q, const CMatrix& xi, const CMatrix& kappa,
                   Tolerance tol = {});

  int n() const { return static_cast<int>(p.rows()); }
  int m() const { return static_cast<int>(xi.rows()); }
  static StarGroupElement identity(int n, int m);
};

bool validate(const SymplecticElement& g, Tolerance tol = {});
bool validate(const HeisenbergElement& h, Tolerance tol = {});
bool validate(const JacobiGroupElement& g, Tolerance tol = {});
bool validate(const StarGroupElement& g, Tolerance tol = {});

SymplecticElement multiply(const SymplecticElement& a, const SymplecticElement& b);
HeisenbergElement heisenberg_multiply(const HeisenbergElement& a, const HeisenbergElement& b);
JacobiGroupElement jacobi_multiply(const JacobiGroupElement& a, const JacobiGroupElement& b);
StarGroupElement star_multiply(const StarGroupElement& a, const StarGroupElement& b);

SymplecticElement inverse(const SymplecticElement& g);
HeisenbergElement inverse(const HeisenbergElement& h);
JacobiGroupElement inverse(const JacobiGroupElement& g);

SiegelPoint act_siegel(const SymplecticElement& g, const SiegelPoint& p);
JacobiPoint act_jacobi(const JacobiGroupElement& g, const JacobiPoint& p);
DiskPoint act_disk(const StarGroupElement& g, const DiskPoint& w);
JacobiDiskPoint act_jacobi_disk(const StarGroupElement& g, const JacobiDiskPoint& p);

StarGroupElement embed_star(const JacobiGroupElement& g);
// Symplectic part only; the Heisenberg part is zero of size m x n.
StarGroupElement embed_star(const SymplecticElement& g, int m = 1);

enum class GroupKind { symplectic, heisenberg, jacobi, star };

struct RandomElement {
  GroupKind kind;
  JacobiGroupElement jacobi;  // symplectic/heisenberg kinds fill only their part
  StarGroupElement star;
};

// Random word of `length` generators t(b), g(alpha), sigma_n (length < 0 picks 1..6)
// followed by a Heisenberg translation with entries in [-1,1].
RandomElement random_element(std::uint64_t seed, GroupKind kind, int n, int m, int length = -1);
SymplecticElement random_symplectic(std::mt19937_64& rng, int n, int length = -1);
HeisenbergElement random_heisenberg(std::mt19937_64& rng, int m, int n);
JacobiGroupElement random_jacobi(std::mt19937_64& rng, int n, int m, int length = -1);

GroupKind parse_group_kind(const std::string& s);

// "t(b);g(a);s" -- b and a are scalar literals (times I_n) or matrix JSON.
SymplecticElement parse_word(const std::string& word, int n);

json to_json(const SymplecticElement& g);
json to_json(const HeisenbergElement& h);
json to_json(const JacobiGroupElement& g);
json to_json(const StarGroupElement& g);
JacobiGroupElement jacobi_element_from_json(const json& j);

}  // namespace sj
