#include <algorithm>

#include "fracsum/apps.hpp"
#include "fracsum/chebx.hpp"
#include "fracsum/error.hpp"
#include "fracsum/specfun.hpp"

namespace fracsum {

namespace {

int unit_interval_index(const SumSpaceLayout& L) {
  for (int k = 0; k < L.num_intervals(); ++k)
    if (L.interval(k).a() == -1 && L.interval(k).b() == 1) return k;
  throw ValidationError("wave: the default forcing needs [-1, 1] as one of the layout intervals");
}

}  // namespace

double wave_forcing_value(double x, double omega) {
  return std::sqrt(M_PI) * eval_W(4, x) * std::exp(-omega * omega / 4);
}

CoeffVec wave_forcing(LayoutPtr layout, double omega) {
  const int k = unit_interval_index(*layout);
  if (layout->degree(k) < 4) throw ValidationError("wave: the default forcing needs degree >= 4 on [-1, 1]");
  const double a = std::sqrt(M_PI) * std::exp(-omega * omega / 4);
  CoeffVec f(Space::Dual, layout);
  // W4 = (V4 - V6) / 2
  f.values[layout->dual_V(k, 4)] = 0.5 * a;
  f.values[layout->dual_V(k, 6)] = -0.5 * a;
  return f;
}

CoeffVec wave_solve_frequency(LayoutPtr layout, double omega, const CoeffVec& fhat, AppendedChoice choice) {
  return solve(std::move(layout), -omega * omega, 1, 0, fhat, choice);
}

WaveResult wave_solve(WaveConfig cfg) {
  if (!cfg.layout)
    cfg.layout = std::make_shared<const SumSpaceLayout>(std::vector<Interval>{Interval(-1, 1)}, std::vector<int>{7});
  if (!(cfg.d_omega > 0) || !(cfg.omega_max > 0)) throw ValidationError("wave: need d_omega > 0 and omega_max > 0");
  const double steps = cfg.omega_max / cfg.d_omega;
  const long M = std::lround(steps);
  if (std::abs(steps - M) > 1e-9 * steps) throw ValidationError("wave: omega_max must be a multiple of d_omega");
  if (cfg.xs.empty()) cfg.xs = uniform_points(-5, 5, 0.05);
  if (!cfg.forcing) cfg.forcing = wave_forcing;

  WaveResult r;
  r.xs = cfg.xs;
  const auto nx = static_cast<Eigen::Index>(cfg.xs.size());
  r.uhat.resize(M + 1, nx);
  std::vector<bool> ok(M + 1, true);
  for (long i = 0; i <= M; ++i) {
    const double w = cfg.omega_max * static_cast<double>(i) / M;
    r.omegas.push_back(w);
    try {
      const CoeffVec u = wave_solve_frequency(cfg.layout, w, cfg.forcing(cfg.layout, w), cfg.choice);
      AppendedSpec spec = cfg.appended;
      spec.lambda = -w * w;
      spec.mu = 1;
      spec.eta = 0;
      spec.choice = cfg.choice;
      const auto fam = AppendedFamily::build(cfg.layout, spec, cfg.cache_dir);
      for (const auto& b : fam->distinct())
        if (b->tail_flag())
          r.warnings.push_back("omega = " + std::to_string(w) + ": appended FFT truncation estimate " +
                               std::to_string(b->tail_estimate()));
      r.uhat.row(i) = evaluate(u, cfg.xs, fam.get()).transpose();
    } catch (const SingularBlock& e) {
      ok[i] = false;
      r.interpolated.push_back(static_cast<int>(i));
      r.warnings.push_back("omega = " + std::to_string(w) + ": " + e.what() + "; value interpolated");
    }
  }
  // Linear interpolation across singular frequencies.
  for (int i : r.interpolated) {
    long lo = i - 1, hi = i + 1;
    while (lo >= 0 && !ok[lo]) --lo;
    while (hi <= M && !ok[hi]) ++hi;
    if (lo < 0 && hi > M) throw SingularBlock(-1, "wave: every frequency is singular");
    if (lo < 0) r.uhat.row(i) = r.uhat.row(hi);
    else if (hi > M) r.uhat.row(i) = r.uhat.row(lo);
    else {
      const double t = static_cast<double>(i - lo) / static_cast<double>(hi - lo);
      r.uhat.row(i) = (1 - t) * r.uhat.row(lo) + t * r.uhat.row(hi);
    }
  }

  // Mirror to [-omega_max, omega_max) and invert in time.
  const long N = 2 * M;
  r.u.resize(N, nx);
  double umax = 0, imax = 0;
  std::vector<cplx> s(N);
  for (Eigen::Index c = 0; c < nx; ++c) {
    for (long m = 0; m <= M; ++m) {
      if (m < M) s[M + m] = r.uhat(m, c);
      if (m > 0) s[M - m] = r.uhat(m, c);
    }
    const GridFun g = ifft_uniform(s, cfg.omega_max);
    if (c == 0)
      for (long j = 0; j < N; ++j) r.times.push_back(g.x(j));
    for (long j = 0; j < N; ++j) {
      r.u(j, c) = g.values[j].real();
      umax = std::max(umax, std::abs(g.values[j]));
      imax = std::max(imax, std::abs(g.values[j].imag()));
    }
  }
  r.max_imag_rel = umax > 0 ? imax / umax : 0;
  return r;
}

}  // namespace fracsum
