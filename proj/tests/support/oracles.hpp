// Independent numerical oracles for the unit and acceptance tests.
// Nothing here uses the library's operator matrices.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

using Fn = std::function<double(double)>;

inline double central_diff(const Fn& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

namespace detail {

// Integral over [0, d] of an even integrand g(t) = c0 + c1 t^2 + c2 t^4 + ...
// fitted from samples at d, d/2, d/4 (avoids evaluating g near t = 0).
inline double small_t(const Fn& g, double d) {
  const double t[3] = {d, d / 2, d / 4};
  double gv[3];
  for (int i = 0; i < 3; ++i) gv[i] = g(t[i]);
  // Solve [1 t^2 t^4] c = g for the three samples.
  double A[3][4];
  for (int i = 0; i < 3; ++i) {
    A[i][0] = 1;
    A[i][1] = t[i] * t[i];
    A[i][2] = A[i][1] * A[i][1];
    A[i][3] = gv[i];
  }
  for (int c = 0; c < 3; ++c) {
    for (int r = c + 1; r < 3; ++r) {
      const double m = A[r][c] / A[c][c];
      for (int k = c; k < 4; ++k) A[r][k] -= m * A[c][k];
    }
  }
  double c[3];
  for (int r = 2; r >= 0; --r) {
    double s = A[r][3];
    for (int k = r + 1; k < 3; ++k) s -= A[r][k] * c[k];
    c[r] = s / A[r][r];
  }
  return c[0] * d + c[1] * d * d * d / 3 + c[2] * std::pow(d, 5) / 5;
}

// Integral of g over [0, inf) with break points where g is not smooth.
inline double half_line(const Fn& g, std::vector<double> breaks, double tol) {
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [](double b) { return b <= 0; }),
               breaks.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double p, double q) { return std::abs(p - q) < 1e-14; }),
               breaks.end());
  double d = 1e-2;
  if (!breaks.empty()) d = std::min(d, 0.25 * breaks.front());
  double total = small_t(g, d);

  boost::math::quadrature::tanh_sinh<double> ts(15);
  double lo = d;
  for (double b : breaks) {
    total += ts.integrate(g, lo, b, tol);
    lo = b;
  }
  boost::math::quadrature::exp_sinh<double> es(12);
  total += es.integrate(g, lo, std::numeric_limits<double>::infinity(), tol);
  return total;
}

}  // namespace detail

/// Hilbert transform (1/pi) PV int u(y)/(x-y) dy, written as
/// (1/pi) int_0^inf (u(x-t) - u(x+t))/t dt.  `kinks` are the points where u
/// is not smooth.
inline double hilbert(const Fn& u, double x, const std::vector<double>& kinks,
                      double tol = 1e-11) {
  std::vector<double> br;
  for (double k : kinks) br.push_back(std::abs(x - k));
  Fn g = [&](double t) { return (u(x - t) - u(x + t)) / t; };
  return detail::half_line(g, br, tol) / M_PI;
}

/// (-Delta)^{1/2} u(x) = (1/pi) int_0^inf (2u(x) - u(x+t) - u(x-t))/t^2 dt.
inline double sqrt_laplacian(const Fn& u, double x, const std::vector<double>& kinks,
                             double tol = 1e-11) {
  std::vector<double> br;
  for (double k : kinks) br.push_back(std::abs(x - k));
  const double ux = u(x);
  Fn g = [&](double t) { return (2 * ux - u(x + t) - u(x - t)) / (t * t); };
  return detail::half_line(g, br, tol) / M_PI;
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
}

/// Bessel J_n(x) from its power series; fine for moderate x.
inline double bessel_series(int n, double x) {
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= 0.5 * x / k;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -0.25 * x * x / (k * (k + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// (1/pi) Re int_0^inf F(w) e^{iwx} dw for a multiplier that behaves like
/// amp w^{-3/2} cos(s w - theta) for large w.  Composite Gauss-Legendre up to L,
/// then the first three terms of the integration-by-parts series for the tail.
template <class CFn>
double inverse_fourier_oscillatory(const CFn& F, double x, std::complex<double> amp, double s,
                                   double theta, double L = 2000.0, double h = 0.25) {
  using cplx = std::complex<double>;
  static thread_local std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre(20, gx, gw);
  cplx total = 0;
  for (double lo = 0; lo < L - 1e-12; lo += h) {
    const double c = lo + 0.5 * h, r = 0.5 * h;
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double w = c + r * gx[i];
      total += r * gw[i] * F(w) * std::exp(cplx(0, w * x));
    }
  }
  auto T = [&](double a) {
    const cplx ia(0, a * L);
    const cplx series = 1.0 + 1.5 / ia + 1.5 * 2.5 / (ia * ia);
    return -std::exp(cplx(0, a * L)) * std::pow(L, -1.5) / cplx(0, a) * series;
  };
  total += 0.5 * amp * (std::exp(cplx(0, -theta)) * T(x + s) + std::exp(cplx(0, theta)) * T(x - s));
  return total.real() / M_PI;
}

}  // namespace oracle
