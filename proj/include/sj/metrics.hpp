#pragma once

#include "sj/groups.hpp"

namespace sj {

struct MetricParams {
  double A = 1.0;
  double B = 1.0;

  MetricParams() = default;
  MetricParams(double a, double b);
};

// Each metric is the sesquilinear form obtained by substituting
// d(.) -> t1 and d(.)bar -> conj(t2), Hermitian-symmetrized.
cplx siegel_metric(const SiegelPoint& p, const TangentVector& t1, const TangentVector& t2, double A = 1.0);
cplx jacobi_metric(const JacobiPoint& p, const TangentVector& t1, const TangentVector& t2,
                   const MetricParams& params = {});
cplx disk_metric(const DiskPoint& p, const TangentVector& t1, const TangentVector& t2, double A = 1.0);
cplx jacobi_disk_metric(const JacobiDiskPoint& p, const TangentVector& t1, const TangentVector& t2,
                        const MetricParams& params = {});

double volume_density(const SiegelPoint& p);

// Gram matrix of Re h on the real coordinate basis of H_{n,m}:
// x_ij, y_ij (i <= j), then u_kl, v_kl (row-major over Z).
RMatrix jacobi_metric_real_gram(const JacobiPoint& p, const MetricParams& params = {});

enum class PushMode { exact, fd };

double fd_step(double point_norm);

TangentVector pushforward(const SymplecticElement& g, const SiegelPoint& p, const TangentVector& t,
                          PushMode mode = PushMode::exact);
TangentVector pushforward(const JacobiGroupElement& g, const JacobiPoint& p, const TangentVector& t,
                          PushMode mode = PushMode::fd);
TangentVector pushforward(const StarGroupElement& g, const DiskPoint& p, const TangentVector& t,
                          PushMode mode = PushMode::fd);
TangentVector pushforward(const StarGroupElement& g, const JacobiDiskPoint& p, const TangentVector& t,
                          PushMode mode = PushMode::fd);

}  // namespace sj
