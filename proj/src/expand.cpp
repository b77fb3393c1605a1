#include "fracsum/expand.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "fftw_lock.hpp"
#include "fracsum/error.hpp"

namespace fracsum {

namespace {

// In-place real-to-real transform of the given FFTW kind.
void r2r(std::vector<double>& v, fftw_r2r_kind kind) {
  fftw_plan p;
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    p = fftw_plan_r2r_1d(static_cast<int>(v.size()), v.data(), v.data(), kind, FFTW_ESTIMATE);
  }
  fftw_execute(p);
  std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
  fftw_destroy_plan(p);
}

// Coefficients from M samples: DST-I for W-series, DCT-II for V-series.
std::vector<double> cheb_from_samples(const RealFn& f, const Interval& I, CompactTarget t, int M) {
  std::vector<double> v(M);
  if (t == CompactTarget::WSeries) {
    // W_j(cos th) = sin((j+1) th); nodes th_k = k pi/(M+1), k = 1..M.
    for (int k = 0; k < M; ++k) {
      const double th = (k + 1) * M_PI / (M + 1);
      v[k] = f(I.from_reference(std::cos(th)));
    }
    r2r(v, FFTW_RODFT00);
    for (auto& c : v) c /= (M + 1);
  } else {
    // V_j(cos th) sin th = cos(j th); nodes th_k = (k + 1/2) pi / M.
    for (int k = 0; k < M; ++k) {
      const double th = (k + 0.5) * M_PI / M;
      v[k] = f(I.from_reference(std::cos(th))) * std::sin(th);
    }
    r2r(v, FFTW_REDFT10);
    for (auto& c : v) c /= M;
    v[0] *= 0.5;
  }
  return v;
}

double max_abs(const std::vector<double>& v, std::size_t from = 0) {
  double m = 0;
  for (std::size_t i = from; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

}  // namespace

CollocationGrid CollocationGrid::from_segments(const std::vector<Segment>& segs, double eps,
                                               RowWeighting w) {
  if (!(eps >= 0)) throw ValidationError("collocation grid: eps must be >= 0");
  CollocationGrid g;
  g.weighting = w;
  g.eps = eps;
  for (const auto& s : segs) {
    const double a = s.a + eps, b = s.b - eps;
    if (s.count < 1 || !(a <= b)) throw ValidationError("collocation grid: empty segment");
    if (s.count == 1) {
      g.points.push_back(0.5 * (a + b));
      continue;
    }
    for (int i = 0; i < s.count; ++i) g.points.push_back(a + (b - a) * i / (s.count - 1));
  }
  std::sort(g.points.begin(), g.points.end());
  g.points.erase(std::unique(g.points.begin(), g.points.end(),
                             [](double p, double q) { return std::abs(p - q) < 1e-12; }),
                 g.points.end());
  return g;
}

CollocationGrid CollocationGrid::for_layout(const SumSpaceLayout& L, int per_interval, int per_flank,
                                            double eps, double lo, double hi, RowWeighting w) {
  double ha = L.interval(0).a(), hb = L.interval(0).b();
  for (const auto& I : L.intervals()) {
    ha = std::min(ha, I.a());
    hb = std::max(hb, I.b());
  }
  const double hw = hb - ha;
  if (std::isnan(lo)) lo = ha - 2 * hw;
  if (std::isnan(hi)) hi = hb + 2 * hw;
  if (!(lo < ha && hi > hb)) throw ValidationError("collocation grid: flanks must extend past the intervals");
  std::vector<Segment> segs;
  for (const auto& I : L.intervals()) segs.push_back({I.a(), I.b(), per_interval});
  if (per_flank > 0) {
    segs.push_back({lo, ha, per_flank});
    segs.push_back({hb, hi, per_flank});
  }
  return from_segments(segs, eps, w);
}

Eigen::VectorXd CollocationGrid::row_weights() const {
  const auto M = static_cast<Eigen::Index>(points.size());
  Eigen::VectorXd w = Eigen::VectorXd::Ones(M);
  if (weighting == RowWeighting::Identity || M < 2) return w;
  for (Eigen::Index i = 0; i < M; ++i) {
    const double l = points[std::max<Eigen::Index>(i - 1, 0)];
    const double r = points[std::min<Eigen::Index>(i + 1, M - 1)];
    w[i] = r - l;
  }
  return w;
}

Eigen::MatrixXd build_lsq_matrix(const SumSpaceLayout& layout, const CollocationGrid& grid, Space space,
                                 const AppendedEvaluator* appended) {
  Eigen::MatrixXd G = eval_space_matrix(layout, space, grid.points, appended);
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    if (!G.row(i).allFinite()) {
      throw ValidationError("lsq matrix: basis is singular at collocation point x = " +
                            std::to_string(grid.points[i]) + " (use an endpoint offset eps > 0)");
    }
  }
  if (grid.weighting == RowWeighting::RiemannSum) G = grid.row_weights().asDiagonal() * G;
  return G;
}

LsqFactor::LsqFactor(const Eigen::MatrixXd& G, double svd_tol)
    : qr_(G), rows_(static_cast<int>(G.rows())), cols_(static_cast<int>(G.cols())) {
  if (G.rows() < G.cols()) throw ValidationError("lsq: need at least as many rows as columns");
  const Eigen::MatrixXd R = qr_.matrixQR().topRows(cols_).triangularView<Eigen::Upper>();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = s.size() ? svd_tol * s[0] : 0.0;
  rank_ = 0;
  while (rank_ < s.size() && s[rank_] > cut) ++rank_;
  Ut_ = svd.matrixU().leftCols(rank_).transpose();
  V_ = svd.matrixV().leftCols(rank_);
  sinv_ = s.head(rank_).cwiseInverse();
}

LsqResult LsqFactor::solve(const Eigen::VectorXd& b) const {
  if (b.size() != rows_) throw ValidationError("lsq: right-hand side length mismatch");
  const Eigen::VectorXd qb = qr_.householderQ().adjoint() * b;
  const Eigen::VectorXd top = qb.head(cols_);
  const Eigen::VectorXd proj = Ut_ * top;
  LsqResult r;
  r.coeffs = V_ * sinv_.cwiseProduct(proj);
  // Residual = bottom part of Q^T b plus the part of the top dropped by truncation.
  const double bottom = qb.tail(rows_ - cols_).squaredNorm();
  const double dropped = (top - Ut_.transpose() * proj).squaredNorm();
  r.residual = std::sqrt(bottom + dropped);
  const double bn = b.norm();
  r.rel_residual = bn > 0 ? r.residual / bn : 0.0;
  r.rank = rank_;
  r.coeff_norm_inf = r.coeffs.size() ? r.coeffs.cwiseAbs().maxCoeff() : 0.0;
  return r;
}

LsqResult lsq_solve(const Eigen::MatrixXd& G, const Eigen::VectorXd& b, double svd_tol) {
  return LsqFactor(G, svd_tol).solve(b);
}

Expansion lsq_expand_samples(const Eigen::VectorXd& samples, LayoutPtr layout, const CollocationGrid& grid,
                             Space space, const AppendedEvaluator* appended, double svd_tol) {
  if (static_cast<std::size_t>(samples.size()) != grid.size())
    throw ValidationError("lsq_expand: one sample per grid point required");
  if (!samples.allFinite()) throw ValidationError("lsq_expand: non-finite sample");
  const Eigen::MatrixXd G = build_lsq_matrix(*layout, grid, space, appended);
  Eigen::VectorXd b = samples;
  if (grid.weighting == RowWeighting::RiemannSum) b = grid.row_weights().cwiseProduct(b);
  LsqResult r = lsq_solve(G, b, svd_tol);
  return {CoeffVec(space, layout, std::move(r.coeffs)), r.residual, r.rel_residual, r.rank,
          r.coeff_norm_inf};
}

Expansion lsq_expand(const RealFn& f, LayoutPtr layout, const CollocationGrid& grid, Space space,
                     const AppendedEvaluator* appended, double svd_tol) {
  Eigen::VectorXd s(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) s[static_cast<Eigen::Index>(i)] = f(grid.points[i]);
  return lsq_expand_samples(s, std::move(layout), grid, space, appended, svd_tol);
}

std::vector<double> chebyshev_coefficients(const RealFn& f, const Interval& I, CompactTarget target,
                                           double tol, int max_samples) {
  if (!(tol > 0)) throw ValidationError("expand_compact: tol must be positive");
  double tail = INFINITY;
  for (int M = 16; M <= max_samples; M *= 2) {
    std::vector<double> c = cheb_from_samples(f, I, target, M);
    const double scale = std::max(1.0, max_abs(c));
    const std::size_t ntail = std::max<std::size_t>(4, c.size() / 8);
    tail = max_abs(c, c.size() - ntail);
    if (tail < tol * scale) {
      std::size_t last = c.size();
      while (last > 1 && std::abs(c[last - 1]) < tol * scale) --last;
      c.resize(last);
      return c;
    }
  }
  throw NonConvergence(tail, "expand_compact: Chebyshev coefficients did not decay below " +
                                 std::to_string(tol) + " with " + std::to_string(max_samples) +
                                 " samples (trailing size " + std::to_string(tail) +
                                 "); check the endpoint behaviour of f");
}

CoeffVec expand_compact(const RealFn& f, LayoutPtr layout, CompactTarget target, double tol, int max_samples) {
  const Space space = target == CompactTarget::WSeries ? Space::Primal : Space::Dual;
  CoeffVec out(space, layout);
  for (int k = 0; k < layout->num_intervals(); ++k) {
    const auto& I = layout->interval(k);
    const auto c = chebyshev_coefficients(f, I, target, tol, max_samples);
    const int n = layout->degree(k);
    const int cap = target == CompactTarget::WSeries ? n + 1 : n + 3;
    const double dropped = c.size() > static_cast<std::size_t>(cap) ? max_abs(c, cap) : 0.0;
    if (dropped > 0) {
      throw NonConvergence(dropped, "expand_compact: interval " + std::to_string(k) + " needs degree " +
                                        std::to_string(c.size()) + " but the layout holds " +
                                        std::to_string(cap) + " terms");
    }
    for (std::size_t j = 0; j < c.size(); ++j) {
      const int idx = target == CompactTarget::WSeries ? layout->primal_W(k, static_cast<int>(j))
                                                       : layout->dual_V(k, static_cast<int>(j));
      out.values[idx] = c[j];
    }
  }
  return out;
}

}  // namespace fracsum
