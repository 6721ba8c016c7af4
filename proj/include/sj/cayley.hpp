#pragma once

#include "sj/spaces.hpp"

namespace sj {

// Phi(W) = i(I+W)(I-W)^-1
SiegelPoint cayley(const DiskPoint& w);
// Phi^-1(Omega) = (Omega - iI)(Omega + iI)^-1
DiskPoint cayley_inverse(const SiegelPoint& p);

// Psi(W, eta) = (Phi(W), 2i eta (I-W)^-1)
JacobiPoint partial_cayley(const JacobiDiskPoint& p);
// Psi^-1(Omega, Z) = ((Omega - iI)(Omega + iI)^-1, Z (Omega + iI)^-1)
JacobiDiskPoint partial_cayley_inverse(const JacobiPoint& p);

// Holomorphic differential of Psi at p applied to (dW, deta).
TangentVector partial_cayley_differential(const JacobiDiskPoint& p, const TangentVector& t);

}  // namespace sj
