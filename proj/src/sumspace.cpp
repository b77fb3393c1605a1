#include "fracsum/sumspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fracsum {

const char* to_string(Space s) noexcept {
  switch (s) {
    case Space::Primal: return "primal";
    case Space::Dual: return "dual";
    case Space::Appended: return "appended";
  }
  return "?";
}

const char* to_string(AppendedChoice c) noexcept {
  return c == AppendedChoice::LowEnd ? "low" : "high";
}

const char* to_string(OpTag t) noexcept {
  switch (t) {
    case OpTag::E: return "E";
    case OpTag::H: return "H";
    case OpTag::D: return "D";
    case OpTag::A: return "A";
    case OpTag::J: return "J";
    case OpTag::L: return "L";
    case OpTag::Lplus: return "Lplus";
    case OpTag::R: return "R";
    case OpTag::B: return "B";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Layout

SumSpaceLayout::SumSpaceLayout(std::vector<Interval> intervals, std::vector<int> degrees,
                               LayoutVariant variant)
    : intervals_(std::move(intervals)), degrees_(std::move(degrees)), variant_(variant) {
  if (intervals_.empty()) throw ValidationError("layout needs at least one interval");
  if (intervals_.size() != degrees_.size()) {
    throw ValidationError("layout: " + std::to_string(intervals_.size()) + " intervals but " +
                          std::to_string(degrees_.size()) + " degrees");
  }
  for (int n : degrees_) {
    if (n < 0) throw ValidationError("layout: degrees must be >= 0");
  }
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    for (std::size_t j = i + 1; j < intervals_.size(); ++j) {
      const double lo = std::max(intervals_[i].a(), intervals_[j].a());
      const double hi = std::min(intervals_[i].b(), intervals_[j].b());
      if (hi > lo) {
        throw ValidationError("layout: intervals " + std::to_string(i) + " and " +
                              std::to_string(j) + " overlap");
      }
    }
  }
  primal_off_.resize(degrees_.size());
  dual_off_.resize(degrees_.size());
  int p = 1, d = 1;
  for (std::size_t k = 0; k < degrees_.size(); ++k) {
    primal_off_[k] = p;
    dual_off_[k] = d;
    p += 2 * degrees_[k] + 2;
    d += 2 * degrees_[k] + 6;
  }
}

SumSpaceLayout SumSpaceLayout::with_variant(LayoutVariant v) const {
  return SumSpaceLayout(intervals_, degrees_, v);
}

int SumSpaceLayout::total_degree() const noexcept {
  return std::accumulate(degrees_.begin(), degrees_.end(), 0);
}

void SumSpaceLayout::check_k(int k) const {
  if (k < 0 || k >= num_intervals()) {
    throw ValidationError("interval index " + std::to_string(k) + " out of range");
  }
}

int SumSpaceLayout::dim(Space s) const {
  const int N = total_degree();
  const int K = num_intervals();
  switch (s) {
    case Space::Primal: return 1 + 2 * N + 2 * K;
    case Space::Dual: return 1 + 2 * N + 6 * K;
    case Space::Appended:
      return has_appended_slots() ? 1 + 2 * N + 6 * K : 1 + 2 * N + 2 * K;
  }
  return 0;
}

int SumSpaceLayout::block_offset(Space s, int k) const {
  check_k(k);
  switch (s) {
    case Space::Primal: return primal_off_[k];
    case Space::Dual: return dual_off_[k];
    case Space::Appended: return has_appended_slots() ? dual_off_[k] : primal_off_[k];
  }
  return 0;
}

int SumSpaceLayout::block_size(Space s, int k) const {
  check_k(k);
  const int n = degrees_[k];
  switch (s) {
    case Space::Primal: return 2 * n + 2;
    case Space::Dual: return 2 * n + 6;
    case Space::Appended: return has_appended_slots() ? 2 * n + 6 : 2 * n + 2;
  }
  return 0;
}

int SumSpaceLayout::primal_W(int k, int j) const {
  check_k(k);
  if (j < 0 || j > degrees_[k]) throw ValidationError("primal_W: degree out of range");
  return primal_off_[k] + 2 * j;
}

int SumSpaceLayout::primal_Tt(int k, int j) const {
  check_k(k);
  if (j < 1 || j > degrees_[k] + 1) throw ValidationError("primal_Tt: degree out of range");
  return primal_off_[k] + 2 * (j - 1) + 1;
}

int SumSpaceLayout::dual_V(int k, int j) const {
  check_k(k);
  if (j < 0 || j > degrees_[k] + 2) throw ValidationError("dual_V: degree out of range");
  return dual_off_[k] + 2 * j;
}

int SumSpaceLayout::dual_Ut(int k, int j) const {
  check_k(k);
  if (j < -1 || j > degrees_[k] + 1) throw ValidationError("dual_Ut: degree out of range");
  return dual_off_[k] + 2 * (j + 1) + 1;
}

int SumSpaceLayout::appended_slot(int k, int slot) const {
  check_k(k);
  if (!has_appended_slots()) throw ValidationError("layout variant has no appended slots");
  if (slot < 0 || slot > 3) throw ValidationError("appended slot must be 0..3");
  return dual_off_[k] + slot;
}

int SumSpaceLayout::appended_W(int k, int j) const {
  const int shift = has_appended_slots() ? dual_off_[k] + 4 - primal_off_[k] : 0;
  return primal_W(k, j) + shift;
}

int SumSpaceLayout::appended_Tt(int k, int j) const {
  const int shift = has_appended_slots() ? dual_off_[k] + 4 - primal_off_[k] : 0;
  return primal_Tt(k, j) + shift;
}

int SumSpaceLayout::locate(double x) const {
  for (int k = 0; k < num_intervals(); ++k) {
    if (intervals_[k].contains(x)) return k;
  }
  return -1;
}

bool operator==(const SumSpaceLayout& l, const SumSpaceLayout& r) noexcept {
  return l.intervals_ == r.intervals_ && l.degrees_ == r.degrees_ && l.variant_ == r.variant_;
}

CoeffVec::CoeffVec(Space s, LayoutPtr l) : space(s), layout(std::move(l)) {
  if (!layout) throw ValidationError("CoeffVec needs a layout");
  values = Eigen::VectorXd::Zero(layout->dim(space));
}

CoeffVec::CoeffVec(Space s, LayoutPtr l, Eigen::VectorXd v)
    : space(s), layout(std::move(l)), values(std::move(v)) {
  if (!layout) throw ValidationError("CoeffVec needs a layout");
  if (values.size() != layout->dim(space)) {
    throw ValidationError(std::string("CoeffVec length ") + std::to_string(values.size()) +
                          " does not match " + to_string(space) + " dimension " +
                          std::to_string(layout->dim(space)));
  }
}

// ---------------------------------------------------------------------------
// BandedOp

void BandedOp::add_block(int row0, int col0, Eigen::SparseMatrix<double> m) {
  if (row0 < 0 || col0 < 0 || row0 + m.rows() > rows_ || col0 + m.cols() > cols_) {
    throw ValidationError("BandedOp: block does not fit");
  }
  m.makeCompressed();
  blocks_.push_back({row0, col0, std::move(m)});
}

Eigen::VectorXd BandedOp::apply(const Eigen::VectorXd& x) const {
  if (x.size() != cols_) {
    throw ValidationError(std::string("BandedOp ") + to_string(tag_) + ": expected " +
                          std::to_string(cols_) + " coefficients, got " +
                          std::to_string(x.size()));
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
  for (const auto& b : blocks_) {
    y.segment(b.row0, b.mat.rows()) += b.mat * x.segment(b.col0, b.mat.cols());
  }
  return y;
}

Eigen::MatrixXd BandedOp::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows_, cols_);
  for (const auto& b : blocks_) {
    m.block(b.row0, b.col0, b.mat.rows(), b.mat.cols()) += Eigen::MatrixXd(b.mat);
  }
  return m;
}

Eigen::SparseMatrix<double> BandedOp::to_sparse() const {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nnz()));
  for (const auto& b : blocks_) {
    for (int c = 0; c < b.mat.outerSize(); ++c) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(b.mat, c); it; ++it) {
        trip.emplace_back(b.row0 + it.row(), b.col0 + it.col(), it.value());
      }
    }
  }
  Eigen::SparseMatrix<double> s(rows_, cols_);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

long BandedOp::nnz() const {
  long total = 0;
  for (const auto& b : blocks_) total += b.mat.nonZeros();
  return total;
}

// ---------------------------------------------------------------------------
// Single-interval operators.  Local ordering:
//   primal col 0 = Tt0, 1+2j = W_j, 2+2j = Tt_{j+1}
//   dual   row 0 = Ut_-2, 1+2j = V_j, 2+2j = Ut_{j-1}

namespace {

using Trip = Eigen::Triplet<double>;

Eigen::SparseMatrix<double> from_triplets(int rows, int cols, const std::vector<Trip>& t) {
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

BandedOp single(OpTag tag, int rows, int cols, const std::vector<Trip>& t) {
  BandedOp op(rows, cols, tag);
  op.add_block(0, 0, from_triplets(rows, cols, t));
  return op;
}

void check_degree(int n) {
  if (n < 0) throw ValidationError("degree must be >= 0");
}

std::vector<Trip> E_triplets(int n) {
  std::vector<Trip> t;
  // Tt0 = Ut0 - Ut_-2
  t.emplace_back(0, 0, -1.0);
  t.emplace_back(4, 0, 1.0);
  for (int j = 0; j <= n; ++j) {
    // W_j = (V_j - V_{j+2}) / 2
    t.emplace_back(1 + 2 * j, 1 + 2 * j, 0.5);
    t.emplace_back(1 + 2 * (j + 2), 1 + 2 * j, -0.5);
    // Tt_{j+1} = (Ut_{j+1} - Ut_{j-1}) / 2
    t.emplace_back(2 + 2 * j, 2 + 2 * j, -0.5);
    t.emplace_back(2 + 2 * (j + 2), 2 + 2 * j, 0.5);
  }
  return t;
}

std::vector<Trip> H_triplets(int n) {
  std::vector<Trip> t;
  for (int j = 0; j <= n; ++j) {
    // H W_j = Tt_{j+1}
    t.emplace_back(2 + 2 * j, 1 + 2 * j, -0.5);
    t.emplace_back(2 + 2 * (j + 2), 1 + 2 * j, 0.5);
    // H Tt_{j+1} = -W_j
    t.emplace_back(1 + 2 * j, 2 + 2 * j, -0.5);
    t.emplace_back(1 + 2 * (j + 2), 2 + 2 * j, 0.5);
  }
  return t;
}

std::vector<Trip> D_triplets(int n, double scale) {
  std::vector<Trip> t;
  for (int j = 0; j <= n; ++j) {
    const double s = scale * (j + 1);
    t.emplace_back(1 + 2 * (j + 1), 1 + 2 * j, -s);  // W_j'  = -(j+1) V_{j+1}
    t.emplace_back(2 + 2 * (j + 1), 2 + 2 * j, s);   // Tt_{j+1}' = (j+1) Ut_j
  }
  return t;
}

std::vector<Trip> A_triplets(int n, double scale) {
  std::vector<Trip> t;
  for (int j = 0; j <= n; ++j) {
    const double s = scale * (j + 1);
    t.emplace_back(2 + 2 * (j + 1), 1 + 2 * j, s);  // |D| W_j = (j+1) Ut_j
    t.emplace_back(1 + 2 * (j + 1), 2 + 2 * j, s);  // |D| Tt_{j+1} = (j+1) V_{j+1}
  }
  return t;
}

// Drop row 0 and column 0 (the dagger form used for intervals after the first).
std::vector<Trip> dagger(const std::vector<Trip>& t) {
  std::vector<Trip> out;
  for (const auto& e : t) {
    if (e.row() > 0 && e.col() > 0) out.emplace_back(e.row() - 1, e.col() - 1, e.value());
  }
  return out;
}

template <class F>
BandedOp multi(const SumSpaceLayout& L, OpTag tag, F&& local) {
  BandedOp op(L.dim(Space::Dual), L.dim(Space::Primal), tag);
  for (int k = 0; k < L.num_intervals(); ++k) {
    const int n = L.degree(k);
    std::vector<Trip> t = local(n, L.interval(k));
    if (k == 0) {
      op.add_block(0, 0, from_triplets(2 * n + 7, 2 * n + 3, t));
    } else {
      op.add_block(L.block_offset(Space::Dual, k), L.block_offset(Space::Primal, k),
                   from_triplets(2 * n + 6, 2 * n + 2, dagger(t)));
    }
  }
  return op;
}

}  // namespace

BandedOp build_E(int n) {
  check_degree(n);
  return single(OpTag::E, 2 * n + 7, 2 * n + 3, E_triplets(n));
}

BandedOp build_H(int n) {
  check_degree(n);
  return single(OpTag::H, 2 * n + 7, 2 * n + 3, H_triplets(n));
}

BandedOp build_D(int n, const Interval& I) {
  check_degree(n);
  return single(OpTag::D, 2 * n + 7, 2 * n + 3, D_triplets(n, 2.0 / I.width()));
}

BandedOp build_A(int n, const Interval& I) {
  check_degree(n);
  return single(OpTag::A, 2 * n + 7, 2 * n + 3, A_triplets(n, 2.0 / I.width()));
}

BandedOp build_J(int n) {
  check_degree(n);
  // rows: S_{n+1} local primal ordering; cols: 2j = W_j, 2j+1 = Tt_{j+1}
  std::vector<Trip> t;
  for (int j = 0; j <= n; ++j) {
    if (j >= 1) t.emplace_back(1 + 2 * (j - 1), 2 * j, 0.5);
    t.emplace_back(1 + 2 * (j + 1), 2 * j, 0.5);
    t.emplace_back(j == 0 ? 0 : 2 * j, 2 * j + 1, 0.5);
    t.emplace_back(2 * j + 4, 2 * j + 1, 0.5);
  }
  return single(OpTag::J, 2 * n + 5, 2 * n + 2, t);
}

BandedOp build_E(const SumSpaceLayout& L) {
  return multi(L, OpTag::E, [](int n, const Interval&) { return E_triplets(n); });
}

BandedOp build_H(const SumSpaceLayout& L) {
  return multi(L, OpTag::H, [](int n, const Interval&) { return H_triplets(n); });
}

BandedOp build_D(const SumSpaceLayout& L) {
  return multi(L, OpTag::D,
               [](int n, const Interval& I) { return D_triplets(n, 2.0 / I.width()); });
}

BandedOp build_A(const SumSpaceLayout& L) {
  return multi(L, OpTag::A,
               [](int n, const Interval& I) { return A_triplets(n, 2.0 / I.width()); });
}

BandedOp assemble_L(const SumSpaceLayout& L, double lambda, double mu, double eta) {
  return multi(L, OpTag::L, [&](int n, const Interval& I) {
    std::vector<Trip> t;
    const double s = 2.0 / I.width();
    auto add = [&](const std::vector<Trip>& src, double c) {
      if (c == 0.0) return;
      for (const auto& e : src) t.emplace_back(e.row(), e.col(), c * e.value());
    };
    add(E_triplets(n), lambda);
    add(H_triplets(n), mu);
    add(D_triplets(n, s), eta);
    add(A_triplets(n, s), 1.0);
    return t;
  });
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

void fill_row(const SumSpaceLayout& L, Space space, double x, const AppendedEvaluator* app,
              double* row) {
  const int K = L.num_intervals();
  if (space == Space::Dual) {
    row[0] = eval_Ut(-2, L.interval(0).to_reference(x));
  } else {
    row[0] = 1.0;
  }
  std::vector<double> a, b;
  for (int k = 0; k < K; ++k) {
    const int n = L.degree(k);
    const double y = L.interval(k).to_reference(x);
    if (space == Space::Dual) {
      a.resize(n + 3);
      b.resize(n + 3);
      eval_range(BasisKind::V, 0, y, a);
      eval_range(BasisKind::Ut, -1, y, b);
      double* r = row + L.block_offset(Space::Dual, k);
      for (int j = 0; j <= n + 2; ++j) {
        r[2 * j] = a[j];
        r[2 * j + 1] = b[j];
      }
      continue;
    }
    a.resize(n + 1);
    b.resize(n + 1);
    eval_range(BasisKind::W, 0, y, a);
    eval_range(BasisKind::Tt, 1, y, b);
    double* r = row + L.block_offset(space, k);
    if (space == Space::Appended && L.has_appended_slots()) {
      for (int s = 0; s < 4; ++s) r[s] = app->value(k, s, x);
      r += 4;
    }
    for (int j = 0; j <= n; ++j) {
      r[2 * j] = a[j];
      r[2 * j + 1] = b[j];
    }
  }
}

void check_appended(const SumSpaceLayout& L, Space space, const AppendedEvaluator* app) {
  if (space == Space::Appended && L.has_appended_slots() && app == nullptr) {
    throw ValidationError("appended-space evaluation needs appended functions");
  }
}

}  // namespace

Eigen::RowVectorXd eval_space(const SumSpaceLayout& L, Space space, double x,
                              const AppendedEvaluator* app) {
  check_appended(L, space, app);
  Eigen::RowVectorXd row(L.dim(space));
  fill_row(L, space, x, app, row.data());
  return row;
}

Eigen::MatrixXd eval_space_matrix(const SumSpaceLayout& L, Space space,
                                  std::span<const double> xs, const AppendedEvaluator* app) {
  check_appended(L, space, app);
  const int d = L.dim(space);
  // Row-major scratch so each point writes one contiguous row.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m(
      static_cast<Eigen::Index>(xs.size()), d);
  for (std::size_t i = 0; i < xs.size(); ++i) fill_row(L, space, xs[i], app, m.row(i).data());
  return m;
}

Eigen::VectorXd evaluate(const CoeffVec& c, std::span<const double> xs,
                         const AppendedEvaluator* app) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(xs.size()));
  Eigen::RowVectorXd row(c.values.size());
  check_appended(*c.layout, c.space, app);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fill_row(*c.layout, c.space, xs[i], app, row.data());
    out[static_cast<Eigen::Index>(i)] = row.dot(c.values);
  }
  return out;
}

}  // namespace fracsum
