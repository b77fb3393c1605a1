#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "fracsum/specfun.hpp"

namespace fracsum {

/// F(w) = C J_m(w) / (alpha + beta w) on w > 0, extended by F(-w) = conj F(w).
/// Every appended-function transform has this form.
struct BesselMultiplier {
  cplx C;
  int m;
  cplx alpha;
  cplx beta;

  cplx operator()(double w) const;
};

BesselMultiplier multiplier_v(int n, double lambda, double mu, double eta);
/// n >= 0 via the shifted form; n = -1 via the J_0 sgn form.
BesselMultiplier multiplier_u(int n, double lambda, double mu, double eta);

/// f(x) = (1/2pi) int F(w) e^{iwx} dw = (1/pi) Re int_0^inf F(w) e^{iwx} dw.
///
/// [0, Omega] uses composite 24-point Gauss-Legendre panels whose F values are
/// cached (they do not depend on x); [Omega, inf) is integrated in closed form
/// from the Hankel asymptotic series of J_m and the geometric series of
/// 1/(alpha + beta w).  Throws DenominatorNearZero if alpha + beta w vanishes
/// for some w >= 0.
class InverseFourierIntegral {
 public:
  explicit InverseFourierIntegral(BesselMultiplier F);
  ~InverseFourierIntegral();

  double operator()(double x) const;
  /// (1/pi) Re int_start^inf F(w) e^{iwx} dw from the asymptotic series; start
  /// must be at least min_tail_start().
  double tail_beyond(double x, double start) const;
  double cutoff() const noexcept { return omega_; }
  double min_tail_start() const noexcept { return min_start_; }
  const BesselMultiplier& multiplier() const noexcept { return F_; }

 private:
  struct Level;
  const Level& level_for(double x) const;
  cplx bulk(const Level& L, double x) const;
  cplx tail(double x, double start, std::size_t Q) const;
  void tail_integrals(double a, double start, std::size_t Q, std::vector<cplx>& T) const;
  std::size_t terms_needed(double start) const;

  BesselMultiplier F_;
  double omega_;
  double theta0_;
  double min_start_;
  std::size_t nq_omega_ = 0;
  std::vector<cplx> dplus_, dminus_;  // tail series coefficients per power
  mutable std::mutex mtx_;
  mutable std::vector<std::unique_ptr<Level>> levels_;
};

}  // namespace fracsum
