#include "fracsum/fourier_quad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "fracsum/error.hpp"

namespace fracsum {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr int kGaussPoints = 24;
constexpr double kBaseWidth = 0.2;   // panel width on [0, Omega] at level 0
constexpr double kMaxPhase = 20.0;   // (|x|+1) * width allowed per panel

cplx minus_i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return -I;
    case 2: return -1.0;
    default: return I;
  }
}

// Nodes/weights of the 24-point rule mapped to [lo, hi], appended to the output.
void gauss_panel(double lo, double hi, std::vector<double>& x, std::vector<double>& w) {
  using GL = boost::math::quadrature::gauss<double, kGaussPoints>;
  const auto& ab = GL::abscissa();
  const auto& wt = GL::weights();
  const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < ab.size(); ++i) {
    x.push_back(c - r * ab[i]);
    w.push_back(r * wt[i]);
    x.push_back(c + r * ab[i]);
    w.push_back(r * wt[i]);
  }
}

}  // namespace

cplx BesselMultiplier::operator()(double w) const {
  return C * bessel_j(m, w) / (alpha + beta * w);
}

BesselMultiplier multiplier_v(int n, double lambda, double mu, double eta) {
  if (n < 0) throw ValidationError("multiplier_v: n must be >= 0");
  return {minus_i_pow(n) * M_PI, n, cplx(lambda, -mu), cplx(1.0, eta)};
}

BesselMultiplier multiplier_u(int n, double lambda, double mu, double eta) {
  if (n < -1) throw ValidationError("multiplier_u: n must be >= -1");
  if (n == -1) return {I * M_PI, 0, cplx(lambda, -mu), cplx(1.0, eta)};
  return {minus_i_pow(n + 1) * M_PI, n + 1, cplx(-mu, -lambda), cplx(eta, -1.0)};
}

struct InverseFourierIntegral::Level {
  std::vector<double> nodes;
  std::vector<cplx> fw;  // weight * F(node)
};

InverseFourierIntegral::InverseFourierIntegral(BesselMultiplier F) : F_(F) {
  // Closest approach of the denominator to zero on [0, inf).
  const double b2 = std::norm(F_.beta);
  const double wmin = std::max(0.0, -std::real(F_.alpha * std::conj(F_.beta)) / b2);
  const double dmin = std::abs(F_.alpha + F_.beta * wmin);
  // A zero at w = 0 is removable when J_m vanishes there too.
  const bool removable = wmin == 0.0 && F_.m >= 1;
  if (dmin < 1e-13 && !removable) {
    throw DenominatorNearZero("appended-function transform has a real pole at w = " +
                              std::to_string(wmin));
  }
  const double ratio = std::abs(F_.alpha) / std::sqrt(b2);
  omega_ = std::max({500.0, 2.0 * F_.m * F_.m, 20.0 * ratio});
  theta0_ = F_.m * M_PI / 2 + M_PI / 4;

  // Hankel coefficients a_k(m) and the 1/(alpha + beta w) series, merged per power
  // w^{-(q + 3/2)}.
  const int qmax = 60;
  std::vector<double> a(qmax + 1);
  a[0] = 1.0;
  const double mu4 = 4.0 * F_.m * F_.m;
  for (int k = 1; k <= qmax; ++k) {
    a[k] = a[k - 1] * (mu4 - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k);
  }
  std::vector<cplx> g(qmax + 1);  // (-alpha)^l beta^{-l-1}
  g[0] = 1.0 / F_.beta;
  for (int l = 1; l <= qmax; ++l) g[l] = g[l - 1] * (-F_.alpha / F_.beta);
  min_start_ = std::max({50.0, 2.0 * F_.m * F_.m, 2.0 * ratio});
  int small_run = 0;
  for (int q = 0; q <= qmax; ++q) {
    cplx dp = 0, dm = 0;
    cplx ip = 1.0, im = 1.0;  // i^k, (-i)^k
    for (int k = 0; k <= q; ++k) {
      dp += ip * a[k] * g[q - k];
      dm += im * a[k] * g[q - k];
      ip *= I;
      im *= -I;
    }
    dplus_.push_back(dp);
    dminus_.push_back(dm);
    const double size = std::max(std::abs(dp), std::abs(dm)) * std::pow(min_start_, -q);
    const double ref = std::max(std::abs(dplus_[0]), std::abs(dminus_[0]));
    small_run = (size < 1e-18 * ref) ? small_run + 1 : 0;
    if (small_run >= 2) break;
  }
  nq_omega_ = terms_needed(omega_);
}

std::size_t InverseFourierIntegral::terms_needed(double start) const {
  const double ref = std::max(std::abs(dplus_[0]), std::abs(dminus_[0]));
  int small_run = 0;
  for (std::size_t q = 0; q < dplus_.size(); ++q) {
    const double size = std::max(std::abs(dplus_[q]), std::abs(dminus_[q])) * std::pow(start, -double(q));
    small_run = (size < 1e-18 * ref) ? small_run + 1 : 0;
    if (small_run >= 2) return q + 1;
  }
  return dplus_.size();
}

InverseFourierIntegral::~InverseFourierIntegral() = default;

const InverseFourierIntegral::Level& InverseFourierIntegral::level_for(double x) const {
  std::size_t lev = 0;
  double h = kBaseWidth;
  while ((std::abs(x) + 1.0) * h > kMaxPhase) {
    h *= 0.5;
    ++lev;
  }
  std::lock_guard<std::mutex> lock(mtx_);
  if (levels_.size() <= lev) levels_.resize(lev + 1);
  if (levels_[lev]) return *levels_[lev];

  std::vector<double> br;
  const long npan = static_cast<long>(std::ceil(omega_ / h));
  for (long k = 0; k <= npan; ++k) br.push_back(std::min(omega_, k * h));
  // Geometric refinement toward a pole close to the positive axis.
  const cplx pole = -F_.alpha / F_.beta;
  const double wstar = std::max(0.0, pole.real());
  const double d = std::abs(pole - wstar);
  if (d < 2 * h) {
    for (double off = d; off < 2 * h; off *= 1.5) {
      if (wstar + off < omega_) br.push_back(wstar + off);
      if (wstar - off > 0) br.push_back(wstar - off);
    }
    br.push_back(wstar);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end(),
                       [](double p, double q) { return std::abs(p - q) < 1e-15; }),
           br.end());

  auto L = std::make_unique<Level>();
  std::vector<double> w;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) gauss_panel(br[i], br[i + 1], L->nodes, w);
  L->fw.resize(L->nodes.size());
  for (std::size_t i = 0; i < L->nodes.size(); ++i) L->fw[i] = w[i] * F_(L->nodes[i]);
  levels_[lev] = std::move(L);
  return *levels_[lev];
}

cplx InverseFourierIntegral::bulk(const Level& L, double x) const {
  cplx s = 0;
  for (std::size_t i = 0; i < L.nodes.size(); ++i) {
    const double ph = L.nodes[i] * x;
    s += L.fw[i] * cplx(std::cos(ph), std::sin(ph));
  }
  return s;
}

void InverseFourierIntegral::tail_integrals(double a, double start, std::size_t Q, std::vector<cplx>& T) const {
  // T_q = int_start^inf w^{-p} e^{iaw} dw with p = q + 3/2.
  T.assign(Q, 0.0);
  if (a == 0.0) {
    for (std::size_t q = 0; q < Q; ++q) {
      const double p = q + 1.5;
      T[q] = std::pow(start, 1 - p) / (p - 1);
    }
    return;
  }
  const double s = std::abs(a);
  const double pmax = Q - 1 + 1.5;
  const double z_need = 4.0 * (pmax + 20.0);
  const double omega1 = std::max(start, z_need / s);

  std::vector<double> xs, ws;
  double lo = start;
  while (lo < omega1) {
    const double hi = (0.5 * s * lo < 8.0) ? std::min(1.5 * lo, omega1) : std::min(lo + 16.0 / s, omega1);
    xs.clear();
    ws.clear();
    gauss_panel(lo, hi, xs, ws);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double w = xs[i];
      const cplx e = ws[i] * cplx(std::cos(a * w), std::sin(a * w));
      double pw = std::pow(w, -1.5);
      for (std::size_t q = 0; q < Q; ++q) {
        T[q] += e * pw;
        pw /= w;
      }
    }
    lo = hi;
  }

  // Integration by parts beyond omega1: -e^{ia W} W^{-p}/(ia) sum_k (p)_k/(iaW)^k.
  const cplx iz = I * (a * omega1);
  const cplx e1 = cplx(std::cos(a * omega1), std::sin(a * omega1));
  for (std::size_t q = 0; q < Q; ++q) {
    const double p = q + 1.5;
    cplx term = 1.0, sum = 1.0;
    for (int k = 1; k < 1000; ++k) {
      term *= (p + k - 1) / iz;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    T[q] += -e1 * std::pow(omega1, -p) / (I * a) * sum;
  }
}

cplx InverseFourierIntegral::tail(double x, double start, std::size_t Q) const {
  std::vector<cplx> Tp, Tm;
  tail_integrals(x + 1.0, start, Q, Tp);
  tail_integrals(x - 1.0, start, Q, Tm);
  cplx sp = 0, sm = 0;
  for (std::size_t q = 0; q < Q; ++q) {
    sp += dplus_[q] * Tp[q];
    sm += dminus_[q] * Tm[q];
  }
  const cplx pre = F_.C * std::sqrt(2.0 / M_PI) / 2.0;
  return pre * (std::polar(1.0, -theta0_) * sp + std::polar(1.0, theta0_) * sm);
}

double InverseFourierIntegral::tail_beyond(double x, double start) const {
  if (!std::isfinite(x)) throw ValidationError("InverseFourierIntegral: non-finite x");
  if (!(start >= min_start_))
    throw ValidationError("InverseFourierIntegral: tail start " + std::to_string(start) +
                          " is below the asymptotic range (" + std::to_string(min_start_) + ")");
  return std::real(tail(x, start, terms_needed(start))) / M_PI;
}

double InverseFourierIntegral::operator()(double x) const {
  if (!std::isfinite(x)) throw ValidationError("InverseFourierIntegral: non-finite x");
  const Level& L = level_for(x);
  return std::real(bulk(L, x) + tail(x, omega_, nq_omega_)) / M_PI;
}

}  // namespace fracsum
