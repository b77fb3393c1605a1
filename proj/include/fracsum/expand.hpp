#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fracsum/sumspace.hpp"

namespace fracsum {

using RealFn = std::function<double(double)>;

enum class RowWeighting { Identity, RiemannSum };

/// Sorted collocation points for least-squares expansions.
struct CollocationGrid {
  std::vector<double> points;
  RowWeighting weighting = RowWeighting::Identity;
  double eps = 0.0;  // endpoint exclusion radius the grid was built with

  /// Equispaced segments [a+eps, b-eps] with the given counts, merged and
  /// deduplicated (points closer than 1e-12 collapse).
  struct Segment {
    double a, b;
    int count;
  };
  static CollocationGrid from_segments(const std::vector<Segment>& segs, double eps = 0.0,
                                       RowWeighting w = RowWeighting::Identity);

  /// `per_interval` points on each interval and `per_flank` points on each of
  /// [lo, hull_a] and [hull_b, hi].  The flank extent defaults to twice the hull
  /// width on each side.  Dual grids should pass eps > 0 (1e-2 by default in the
  /// drivers) to keep away from the endpoint singularities.
  static CollocationGrid for_layout(const SumSpaceLayout& layout, int per_interval = 6001,
                                    int per_flank = 6001, double eps = 0.0, double lo = NAN,
                                    double hi = NAN, RowWeighting w = RowWeighting::Identity);

  std::size_t size() const noexcept { return points.size(); }
  /// Row weights (all ones, or x_{i+1} - x_{i-1} with one-sided ends).
  Eigen::VectorXd row_weights() const;
};

/// M x dim(space) matrix of basis values at the grid points, row-weighted as the
/// grid asks.  Throws ValidationError if a point hits a singular endpoint.
Eigen::MatrixXd build_lsq_matrix(const SumSpaceLayout& layout, const CollocationGrid& grid,
                                 Space space, const AppendedEvaluator* appended = nullptr);

struct LsqResult {
  Eigen::VectorXd coeffs;
  double residual = 0;      // ||G c - b||_2
  double rel_residual = 0;  // residual / ||b||_2
  int rank = 0;
  double coeff_norm_inf = 0;
};

/// Truncated-SVD least squares: Householder QR of G, then an SVD of R with
/// singular values below svd_tol * sigma_max dropped.
LsqResult lsq_solve(const Eigen::MatrixXd& G, const Eigen::VectorXd& b, double svd_tol = 1e-14);

/// Reusable factorisation of a least-squares matrix, for expanding many
/// right-hand sides on one grid.
class LsqFactor {
 public:
  explicit LsqFactor(const Eigen::MatrixXd& G, double svd_tol = 1e-14);
  LsqResult solve(const Eigen::VectorXd& b) const;
  int rank() const noexcept { return rank_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

 private:
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
  Eigen::MatrixXd Ut_;  // kept left singular vectors of R, transposed
  Eigen::VectorXd sinv_;
  Eigen::MatrixXd V_;   // kept right singular vectors of R
  int rank_ = 0, rows_ = 0, cols_ = 0;
};

struct Expansion {
  CoeffVec coeffs;
  double residual;
  double rel_residual;
  int rank;
  double coeff_norm_inf;
};

/// Samples f on the grid (with the grid's row weighting) and solves the
/// least-squares problem in `space`.
Expansion lsq_expand(const RealFn& f, LayoutPtr layout, const CollocationGrid& grid, Space space,
                     const AppendedEvaluator* appended = nullptr, double svd_tol = 1e-14);
/// Same with the samples supplied (one per grid point, unweighted).
Expansion lsq_expand_samples(const Eigen::VectorXd& samples, LayoutPtr layout,
                             const CollocationGrid& grid, Space space,
                             const AppendedEvaluator* appended = nullptr, double svd_tol = 1e-14);

enum class CompactTarget { WSeries, VSeries };

/// Chebyshev coefficients on one interval: for WSeries f = sum c_j W_j (f must
/// vanish at the endpoints), for VSeries f = sum c_j V_j (f must blow up like an
/// inverse square root).  Doubling from 16 samples until the trailing
/// coefficients fall below tol; throws NonConvergence past max_samples.
std::vector<double> chebyshev_coefficients(const RealFn& f, const Interval& I, CompactTarget target,
                                           double tol = 1e-14, int max_samples = 1 << 16);

/// Per-interval compact expansion into the primal (WSeries) or dual (VSeries)
/// space of `layout`.  Throws NonConvergence if the series needs more terms than
/// the layout holds, reporting the largest dropped coefficient.
CoeffVec expand_compact(const RealFn& f, LayoutPtr layout, CompactTarget target, double tol = 1e-14,
                        int max_samples = 1 << 16);

}  // namespace fracsum
