#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fracsum/chebx.hpp"
#include "fracsum/interval.hpp"

namespace fracsum {

enum class Space { Primal, Dual, Appended };
enum class LayoutVariant { Full, ReducedNoAppend };
// LowEnd appends (v0, u_-1, v1, u0); HighEnd appends (v0, u_-1, v_{n+2}, u_{n+1}).
enum class AppendedChoice { LowEnd, HighEnd };

const char* to_string(Space s) noexcept;
const char* to_string(AppendedChoice c) noexcept;

/// Global coefficient indexing for the primal, dual and appended sum spaces
/// over K intervals.
///
/// Primal:   [Tt0 | W0, Tt1 | W1, Tt2 | ... | Wn, Tt_{n+1}]  per interval, Tt0 only once.
/// Dual:     [Ut_-2 | V0, Ut_-1 | V1, Ut0 | ... | V_{n+2}, Ut_{n+1}]
/// Appended: [Tt0 | a0 a1 a2 a3 | W0, Tt1 | ...]   (a* are the four appended slots)
///
/// The global entry (index 0) belongs to interval 0 in every space.
class SumSpaceLayout {
 public:
  SumSpaceLayout(std::vector<Interval> intervals, std::vector<int> degrees,
                 LayoutVariant variant = LayoutVariant::Full);

  int num_intervals() const noexcept { return static_cast<int>(intervals_.size()); }
  const Interval& interval(int k) const { return intervals_.at(k); }
  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  int degree(int k) const { return degrees_.at(k); }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  int total_degree() const noexcept;
  LayoutVariant variant() const noexcept { return variant_; }
  bool has_appended_slots() const noexcept { return variant_ == LayoutVariant::Full; }

  SumSpaceLayout with_variant(LayoutVariant v) const;

  int dim(Space s) const;

  // Per-interval block, excluding the global entry 0.
  int block_offset(Space s, int k) const;
  int block_size(Space s, int k) const;

  // Index helpers (global positions).
  static constexpr int global_index() { return 0; }
  int primal_W(int k, int j) const;
  int primal_Tt(int k, int j) const;  // j >= 1
  int dual_V(int k, int j) const;
  int dual_Ut(int k, int j) const;    // j >= -1
  int appended_slot(int k, int slot) const;  // slot in 0..3
  int appended_W(int k, int j) const;
  int appended_Tt(int k, int j) const;

  /// Interval index containing x (first match, closed intervals), or -1.
  int locate(double x) const;

  friend bool operator==(const SumSpaceLayout& l, const SumSpaceLayout& r) noexcept;

 private:
  std::vector<Interval> intervals_;
  std::vector<int> degrees_;
  LayoutVariant variant_;
  std::vector<int> primal_off_, dual_off_;
  void check_k(int k) const;
};

using LayoutPtr = std::shared_ptr<const SumSpaceLayout>;

/// Real coefficient vector tagged with its space and layout.
struct CoeffVec {
  Space space;
  LayoutPtr layout;
  Eigen::VectorXd values;

  CoeffVec(Space s, LayoutPtr l);
  CoeffVec(Space s, LayoutPtr l, Eigen::VectorXd v);
};

enum class OpTag { E, H, D, A, J, L, Lplus, R, B };
const char* to_string(OpTag t) noexcept;

struct OpBlock {
  int row0;
  int col0;
  Eigen::SparseMatrix<double> mat;
};

/// Sparse rectangular operator stored as a list of non-overlapping blocks.
class BandedOp {
 public:
  BandedOp(int rows, int cols, OpTag tag) : rows_(rows), cols_(cols), tag_(tag) {}
  void add_block(int row0, int col0, Eigen::SparseMatrix<double> m);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  OpTag tag() const noexcept { return tag_; }
  std::size_t num_blocks() const noexcept { return blocks_.size(); }
  const OpBlock& block(std::size_t i) const { return blocks_.at(i); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd to_dense() const;
  Eigen::SparseMatrix<double> to_sparse() const;
  long nnz() const;

 private:
  int rows_, cols_;
  OpTag tag_;
  std::vector<OpBlock> blocks_;
};

// Single-interval builders on the local ordering (first row/column global).
BandedOp build_E(int n);
BandedOp build_H(int n);
BandedOp build_D(int n, const Interval& I);
BandedOp build_A(int n, const Interval& I);
/// Multiplication by y: y * [W0, Tt1, ..., Wn, Tt_{n+1}] = S_{n+1} * J,
/// shape (2n+5) x (2n+2).
BandedOp build_J(int n);

BandedOp build_E(const SumSpaceLayout& layout);
BandedOp build_H(const SumSpaceLayout& layout);
BandedOp build_D(const SumSpaceLayout& layout);
BandedOp build_A(const SumSpaceLayout& layout);

/// lambda E + mu H + eta D + A, block diagonal over intervals.
BandedOp assemble_L(const SumSpaceLayout& layout, double lambda, double mu, double eta);

/// Source of appended-slot function values for eval_space.
class AppendedEvaluator {
 public:
  virtual ~AppendedEvaluator() = default;
  virtual double value(int interval, int slot, double x) const = 0;
};

Eigen::RowVectorXd eval_space(const SumSpaceLayout& layout, Space space, double x,
                              const AppendedEvaluator* appended = nullptr);

/// Rows of eval_space for every point in xs.
Eigen::MatrixXd eval_space_matrix(const SumSpaceLayout& layout, Space space,
                                  std::span<const double> xs,
                                  const AppendedEvaluator* appended = nullptr);

/// S(x) c evaluated at each point.
Eigen::VectorXd evaluate(const CoeffVec& c, std::span<const double> xs,
                         const AppendedEvaluator* appended = nullptr);

}  // namespace fracsum
