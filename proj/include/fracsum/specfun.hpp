#pragma once

#include <complex>
#include <vector>

namespace fracsum {

using cplx = std::complex<double>;

/// Bessel J_n(x) for integer n >= 0 and any real x.
double bessel_j(int n, double x);

/// F[V_n](w) = (-i)^n pi J_n(w), with F[f](w) = int f(x) e^{-iwx} dx.
cplx fourier_V(int n, double w);
/// F[Ut_{-1}](w) = i pi sgn(w) J_0(w); the value at w = 0 is the symmetric limit 0.
cplx fourier_Ut_m1(double w);
/// F[Ut_0](w) = pi J_1(|w|) + 2 sin(w)/w - 2 sin|w|/|w|; the sinc terms cancel identically
/// but are evaluated (with the series near 0) to keep the closed form visible.
cplx fourier_Ut_0(double w);

enum class AppendedKind { v, u };

/// Fourier transform of the appended function v_n or u_n, the solutions of
///   (lambda + mu H + eta d/dx + (-Delta)^{1/2}) v_n = V_n,  ... u_n = Ut_n.
/// u with n = -1 uses  i pi sgn(w) J_0 / (lambda - i mu sgn + i eta w + |w|);
/// u with n >= 0 uses  (-i)^{n+1} pi J_{n+1} / (-i lambda sgn - mu + eta |w| - i w).
/// At w = 0 the value is the average of the two one-sided limits.
/// Throws DenominatorNearZero when a denominator falls below 1e-13 in magnitude.
cplx hat_appended(AppendedKind kind, int n, double w, double lambda, double mu, double eta);

/// The shifted-Hilbert form for u_n, valid for n >= -1 (n = -1 gives a second route
/// to u_{-1}).
cplx hat_appended_u_shifted(int n, double w, double lambda, double mu, double eta);

enum class Provenance { FFT, Quadrature };

/// Uniform grid x_j = (-N/2 + j) pi / W, j = 0..N-1, with complex samples.
struct GridFun {
  double W = 0;
  long N = 0;
  std::vector<cplx> values;
  Provenance provenance = Provenance::FFT;

  double dx() const { return M_PI / W; }
  double x(long j) const { return (static_cast<double>(j) - N / 2) * M_PI / W; }
  double x_min() const { return x(0); }
  double x_max() const { return x(N - 1); }

  /// Local 4-point (cubic) Lagrange interpolation.  Throws ValidationError when x
  /// lies outside [x_min, x_max].
  cplx interpolate(double x) const;
  /// True with the node index when x coincides with a grid node to 1e-12 relative.
  bool node_hit(double x, long& j) const;
};

/// Inverse Fourier transform (1/2pi) int u(w) e^{iwx} dw from samples at
/// w_n = n delta - W, delta = 2W/N, n = 0..N-1, returned on the grid x_j.
/// N must be even.
GridFun ifft_uniform(const std::vector<cplx>& samples, double W);

}  // namespace fracsum
