#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>

#include <gsl/gsl_sf_dawson.h>

#include "fracsum/apps.hpp"
#include "fracsum/chebx.hpp"
#include "fracsum/error.hpp"
#include "fracsum/fourier_quad.hpp"
#include "fracsum/specfun.hpp"

namespace fracsum {

LayoutPtr five_interval_layout(int n) {
  std::vector<Interval> I;
  for (int k = 0; k < 5; ++k) I.emplace_back(-5.0 + 2 * k, -3.0 + 2 * k);
  return std::make_shared<const SumSpaceLayout>(std::move(I), std::vector<int>(5, n));
}

std::vector<double> uniform_points(double a, double b, double h) {
  if (!(h > 0) || !(b >= a)) throw ValidationError("uniform_points: need h > 0 and b >= a");
  const long m = std::lround((b - a) / h);
  std::vector<double> x(m + 1);
  for (long i = 0; i <= m; ++i) x[i] = m == 0 ? a : a + (b - a) * static_cast<double>(i) / m;
  return x;
}

double heat_exact(double x, double t) {
  const double s = 1 + t;
  return s / (x * x + s * s);
}

double heat_ic_rational(double x) { return 1 / (x * x + 1); }

std::vector<std::vector<double>> heat_w0_reference(std::span<const double> xs, double lambda,
                                                   const std::vector<int>& ks, double W, long N) {
  if (!(lambda > 0)) throw ValidationError("heat reference: lambda must be positive");
  if (N < 4 || N % 2 != 0) throw ValidationError("heat reference: N must be even");
  int kmax = 0;
  for (int k : ks) {
    if (k < 0) throw ValidationError("heat reference: k must be >= 0");
    kmax = std::max(kmax, k);
  }
  // With q = 1 + |w|/lambda, 1/(|w| q^k) = 1/|w| - (1/lambda) sum_{i=1..k} q^{-i}.
  // The 1/|w| term is W0.  The i = 1 term and the leading |w|^{-2} part of the rest,
  // lambda^2 / ((lambda+w)(2 lambda+w)), are single-pole Bessel ratios handled by the
  // quadrature engine; what is left decays like |w|^{-7/2} and goes through an FFT.
  // Everything is even in x, so only |x| is integrated.
  const InverseFourierIntegral p1(BesselMultiplier{M_PI, 1, lambda, 1.0});
  const InverseFourierIntegral p2(BesselMultiplier{M_PI, 1, 2 * lambda, 1.0});
  std::map<double, std::array<double, 2>> quad;
  if (kmax >= 1)
    for (double x : xs) {
      const double a = std::abs(x);
      if (!quad.count(a)) quad[a] = {p1(a), kmax >= 2 ? p2(a) : 0.0};
    }

  std::vector<std::vector<double>> out;
  const double delta = 2 * W / N;
  for (int k : ks) {
    std::vector<double> u(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      u[i] = eval_W(0, xs[i]);
      if (k >= 1) u[i] -= quad[std::abs(xs[i])][0];
      if (k >= 2) u[i] -= quad[std::abs(xs[i])][0] - quad[std::abs(xs[i])][1];
    }
    if (k >= 2) {
      auto F = [&](double w) {
        const double q = 1 / (1 + w / lambda);
        double sum = 0, p = q;
        for (int i = 2; i <= k; ++i) {
          p *= q;
          sum += p;
        }
        sum -= lambda * lambda / ((lambda + w) * (2 * lambda + w));
        return -M_PI * bessel_j(1, w) * sum / lambda;
      };
      std::vector<cplx> samples(N);
      // F is even: w_{N/2 +- m} = +-m delta.
      for (long m = 0; m <= N / 2; ++m) {
        const double v = F(m * delta);
        if (m < N / 2) samples[N / 2 + m] = v;
        if (m > 0) samples[N / 2 - m] = v;
      }
      const GridFun g = ifft_uniform(samples, W);
      for (std::size_t i = 0; i < xs.size(); ++i) u[i] += g.interpolate(xs[i]).real();
    }
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<double> heat_w0_reference(std::span<const double> xs, double lambda, int k, double W, long N) {
  return heat_w0_reference(xs, lambda, std::vector<int>{k}, W, N).front();
}

double hyp1f1_one_half_series(double x) {
  const double z = x * x;
  if (std::abs(x) <= 4) {
    // sum (-z)^k / (1/2)_k
    double term = 1, sum = 1;
    for (int k = 0; k < 400; ++k) {
      term *= -z / (k + 0.5);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  // -1/(2z) sum (3/2)_k z^{-k}, stopped at the smallest term
  double term = 1, sum = 1, prev = INFINITY;
  for (int k = 0; k < 200; ++k) {
    const double next = term * (k + 1.5) / z;
    if (std::abs(next) >= prev) break;
    prev = std::abs(next);
    term = next;
    sum += term;
  }
  return -sum / (2 * z);
}

double hyp1f1_one_half(double x) { return 1 - 2 * x * gsl_sf_dawson(x); }

double gaussian_hilbert(double x) { return 2 / std::sqrt(M_PI) * gsl_sf_dawson(x); }

double gaussian_sqrt_laplacian(double x) { return 2 / std::sqrt(M_PI) * hyp1f1_one_half(x); }

const char* to_string(ManufacturedCase c) noexcept {
  return c == ManufacturedCase::Helmholtz ? "helmholtz" : "full";
}

ManufacturedCase parse_manufactured_case(const std::string& s) {
  if (s == "helmholtz") return ManufacturedCase::Helmholtz;
  if (s == "full") return ManufacturedCase::Full;
  throw ValidationError("unknown manufactured case '" + s + "' (expected helmholtz or full)");
}

double manufactured_rhs(ManufacturedCase c, double x) {
  const double g = std::exp(-x * x);
  double f = g + gaussian_sqrt_laplacian(x);
  if (c == ManufacturedCase::Full) f += gaussian_hilbert(x) - 2 * x * g;
  return f;
}

std::array<double, 3> manufactured_params(ManufacturedCase c) {
  if (c == ManufacturedCase::Helmholtz) return {1, 0, 0};
  return {1, 1, 1};
}

double indicator_pm1(double x) { return std::abs(x) <= 1 ? 1.0 : 0.0; }

double arcsine_rhs(double x) {
  if (std::abs(x) <= 1) return std::asin(x);
  return std::copysign(M_PI / 2, x) * std::exp(1 - std::abs(x));
}

}  // namespace fracsum
