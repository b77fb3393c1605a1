#include "fracsum/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <boost/math/special_functions/bessel.hpp>
#include <fftw3.h>

#include "fftw_lock.hpp"
#include "fracsum/error.hpp"

namespace fracsum {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr double kDenTol = 1e-13;

double sgn(double x) { return (x > 0) - (x < 0); }

cplx minus_i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return -I;
    case 2: return -1.0;
    default: return I;
  }
}

double sinc(double w) {
  if (std::abs(w) < 1e-4) {
    const double w2 = w * w;
    return 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
  }
  return std::sin(w) / w;
}

cplx checked_inverse(cplx den) {
  if (std::abs(den) < kDenTol) {
    throw DenominatorNearZero("Fourier-side denominator vanishes (|den| = " +
                              std::to_string(std::abs(den)) +
                              "); the requested solution is not in H^{1/2}");
  }
  return 1.0 / den;
}

// 1/(lambda - i mu s + i eta w + |w|) with s = sgn(w)
cplx inv_den_v(double w, double s, double lambda, double mu, double eta) {
  return checked_inverse(cplx(lambda + std::abs(w), -mu * s + eta * w));
}

// 1/(-i lambda s - mu + eta |w| - i w)
cplx inv_den_u(double w, double s, double lambda, double mu, double eta) {
  return checked_inverse(cplx(-mu + eta * std::abs(w), -lambda * s - w));
}

}  // namespace

double bessel_j(int n, double x) {
  if (n < 0) throw ValidationError("bessel_j: order must be >= 0");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const double v = boost::math::cyl_bessel_j(n, std::abs(x));
  return (x < 0 && (n % 2 == 1)) ? -v : v;
}

cplx fourier_V(int n, double w) {
  if (n < 0) throw ValidationError("fourier_V: n must be >= 0");
  return minus_i_pow(n) * M_PI * bessel_j(n, w);
}

cplx fourier_Ut_m1(double w) { return I * M_PI * sgn(w) * bessel_j(0, w); }

cplx fourier_Ut_0(double w) {
  const double aw = std::abs(w);
  return M_PI * bessel_j(1, aw) + (2.0 * sinc(w) - 2.0 * sinc(aw));
}

cplx hat_appended(AppendedKind kind, int n, double w, double lambda, double mu, double eta) {
  if (kind == AppendedKind::v) {
    if (n < 0) throw ValidationError("hat_appended: v_n needs n >= 0");
    const cplx num = minus_i_pow(n) * M_PI * bessel_j(n, w);
    if (w != 0.0) return num * inv_den_v(w, sgn(w), lambda, mu, eta);
    return num * 0.5 * (inv_den_v(0.0, 1.0, lambda, mu, eta) + inv_den_v(0.0, -1.0, lambda, mu, eta));
  }
  if (n < -1) throw ValidationError("hat_appended: u_n needs n >= -1");
  if (n >= 0) return hat_appended_u_shifted(n, w, lambda, mu, eta);
  const cplx num = I * M_PI * bessel_j(0, w);
  if (w != 0.0) return num * sgn(w) * inv_den_v(w, sgn(w), lambda, mu, eta);
  return num * 0.5 * (inv_den_v(0.0, 1.0, lambda, mu, eta) - inv_den_v(0.0, -1.0, lambda, mu, eta));
}

cplx hat_appended_u_shifted(int n, double w, double lambda, double mu, double eta) {
  if (n < -1) throw ValidationError("hat_appended_u_shifted: n must be >= -1");
  const cplx num = minus_i_pow(n + 1) * M_PI * bessel_j(n + 1, w);
  if (w != 0.0) return num * inv_den_u(w, sgn(w), lambda, mu, eta);
  return num * 0.5 * (inv_den_u(0.0, 1.0, lambda, mu, eta) + inv_den_u(0.0, -1.0, lambda, mu, eta));
}

// ---------------------------------------------------------------------------

bool GridFun::node_hit(double xq, long& j) const {
  const double t = (xq - x_min()) / dx();
  const double r = std::round(t);
  if (std::abs(t - r) <= 1e-12 * std::max(1.0, std::abs(t)) && r >= 0 && r < N) {
    j = static_cast<long>(r);
    return true;
  }
  return false;
}

cplx GridFun::interpolate(double xq) const {
  if (N < 4) throw ValidationError("GridFun: need at least 4 samples to interpolate");
  const double lo = x_min(), hi = x_max();
  if (!(xq >= lo && xq <= hi)) {
    throw ValidationError("GridFun: query x = " + std::to_string(xq) +
                          " lies outside the stored grid [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "] (extrapolation)");
  }
  long j;
  if (node_hit(xq, j)) return values[j];
  const double t = (xq - lo) / dx();
  long i0 = static_cast<long>(std::floor(t)) - 1;
  i0 = std::clamp(i0, 0L, N - 4);
  const double s = t - static_cast<double>(i0);  // position relative to node i0, in [0,3]
  // Lagrange weights on nodes 0,1,2,3.
  const double w0 = -(s - 1) * (s - 2) * (s - 3) / 6.0;
  const double w1 = s * (s - 2) * (s - 3) / 2.0;
  const double w2 = -s * (s - 1) * (s - 3) / 2.0;
  const double w3 = s * (s - 1) * (s - 2) / 6.0;
  return w0 * values[i0] + w1 * values[i0 + 1] + w2 * values[i0 + 2] + w3 * values[i0 + 3];
}

GridFun ifft_uniform(const std::vector<cplx>& samples, double W) {
  const long N = static_cast<long>(samples.size());
  if (N == 0 || N % 2 != 0) throw ValidationError("ifft_uniform: N must be even and positive");
  if (!(W > 0)) throw ValidationError("ifft_uniform: W must be positive");

  std::vector<cplx> buf(samples);
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(N), data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  GridFun g;
  g.W = W;
  g.N = N;
  g.provenance = Provenance::FFT;
  g.values.resize(N);
  const double delta = 2.0 * W / N;
  const double scale = delta / (2.0 * M_PI);
  for (long j = 0; j < N; ++j) {
    // W x_j = (j - N/2) pi, so e^{-i W x_j} = (-1)^{j - N/2}.
    const double phase = ((j - N / 2) % 2 == 0) ? 1.0 : -1.0;
    g.values[j] = scale * phase * buf[(j + N / 2) % N];
  }
  return g;
}

}  // namespace fracsum
