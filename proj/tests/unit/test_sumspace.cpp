#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracsum/sumspace.hpp"
#include "oracles.hpp"

using namespace fracsum;
using doctest::Approx;

namespace {

std::vector<double> sample_points(double a, double b, int n) {
  // Offset grid that never lands on +-1 or on integer endpoints.
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * (i + 0.5 + 0.1234567) / (n + 1);
  return x;
}

LayoutPtr single_layout(int n, Interval I = Interval(-1, 1)) {
  return std::make_shared<SumSpaceLayout>(std::vector<Interval>{I}, std::vector<int>{n});
}

}  // namespace

TEST_CASE("layout dimensions and index maps") {
  SumSpaceLayout L({Interval(-3, -1), Interval(-1, 1), Interval(1, 3)}, {2, 4, 3});
  const int N = 9, K = 3;
  CHECK(L.dim(Space::Primal) == 1 + 2 * N + 2 * K);
  CHECK(L.dim(Space::Dual) == 1 + 2 * N + 6 * K);
  CHECK(L.dim(Space::Appended) == 1 + 2 * N + 6 * K);
  CHECK(L.block_offset(Space::Primal, 1) == 1 + 6);
  CHECK(L.block_offset(Space::Dual, 2) == 1 + 10 + 14);
  CHECK(L.primal_W(1, 0) == 7);
  CHECK(L.primal_Tt(1, 1) == 8);
  CHECK(L.dual_V(0, 0) == 1);
  CHECK(L.dual_Ut(0, -1) == 2);
  CHECK(L.dual_Ut(0, 0) == 4);
  CHECK(L.appended_slot(1, 0) == L.block_offset(Space::Dual, 1));
  CHECK(L.appended_W(1, 0) == L.block_offset(Space::Dual, 1) + 4);
  CHECK(L.appended_Tt(2, 4) == L.block_offset(Space::Dual, 2) + 4 + 7);

  SumSpaceLayout S({Interval(-1, 1)}, {0});
  CHECK(S.dim(Space::Primal) == 3);
  CHECK(S.dim(Space::Dual) == 7);
  CHECK(S.with_variant(LayoutVariant::ReducedNoAppend).dim(Space::Appended) == 3);

  CHECK_THROWS_AS(SumSpaceLayout({Interval(-1, 1.5), Interval(1, 3)}, {1, 1}), ValidationError);
  CHECK_THROWS_AS(SumSpaceLayout({}, {}), ValidationError);
  CHECK_THROWS_AS(SumSpaceLayout({Interval(-1, 1)}, {-1}), ValidationError);
  CHECK_NOTHROW(SumSpaceLayout({Interval(-1, 1), Interval(1, 3)}, {1, 1}));
}

TEST_CASE("E structure and identity") {
  const BandedOp E = build_E(0);
  CHECK(E.rows() == 7);
  CHECK(E.cols() == 3);
  const Eigen::MatrixXd d = E.to_dense();
  CHECK(d(0, 0) == -1.0);
  CHECK(d(4, 0) == 1.0);
  CHECK(d.col(0).cwiseAbs().sum() == 2.0);
  for (int n : {0, 1, 4, 9}) {
    const Eigen::MatrixXd m = build_E(n).to_dense();
    for (int r = 0; r < m.rows(); ++r) {
      for (int c = 1; c < m.cols(); ++c) {
        if (m(r, c) == 0.0) continue;
        // Only the diagonal block and the block two rows down are populated.
        const int rb = (r - 1) / 2, cb = (c - 1) / 2;
        CHECK((rb == cb || rb == cb + 2));
        CHECK(std::abs(m(r, c)) == 0.5);
      }
    }
  }

  // S(x) c == S*(x) E c on 1000 points.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int n : {0, 3, 8}) {
    auto L = single_layout(n);
    const BandedOp En = build_E(*L);
    Eigen::VectorXd c(L->dim(Space::Primal));
    for (auto& v : c) v = U(rng);
    const Eigen::VectorXd ec = En.apply(c);
    for (double x : sample_points(-4, 4, 1000)) {
      const double lhs = eval_space(*L, Space::Primal, x).dot(c);
      const double rhs = eval_space(*L, Space::Dual, x).dot(ec);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * c.lpNorm<1>());
    }
  }

  // E * e_{W0} reproduces (V0 - V2)/2.
  auto L = single_layout(2);
  CoeffVec w0(Space::Primal, L);
  w0.values[L->primal_W(0, 0)] = 1.0;
  const Eigen::VectorXd dual = build_E(*L).apply(w0.values);
  CHECK(dual[L->dual_V(0, 0)] == 0.5);
  CHECK(dual[L->dual_V(0, 2)] == -0.5);
  CHECK(dual.cwiseAbs().sum() == 1.0);
}

TEST_CASE("H against principal-value quadrature") {
  CHECK(build_H(0).rows() == 7);
  CHECK(build_H(0).to_dense().col(0).isZero());
  for (Interval I : {Interval(-1, 1), Interval(1, 3)}) {
    auto L = single_layout(3, I);
    const BandedOp H = build_H(*L);
    for (int col = 1; col < L->dim(Space::Primal); ++col) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(L->dim(Space::Primal));
      e[col] = 1.0;
      const Eigen::VectorXd hc = H.apply(e);
      oracle::Fn phi = [&](double s) { return eval_space(*L, Space::Primal, s).dot(e); };
      for (double x : sample_points(I.a(), I.b(), 6)) {
        const double num = oracle::hilbert(phi, x, {I.a(), I.b()});
        CHECK(eval_space(*L, Space::Dual, x).dot(hc) == Approx(num).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("Hilbert anti-involution through the E identification") {
  auto L = single_layout(5);
  const Eigen::MatrixXd E = build_E(*L).to_dense();
  const Eigen::MatrixXd H = build_H(*L).to_dense();
  const auto xs = sample_points(-3, 3, 200);
  for (int col = 1; col < L->dim(Space::Primal); ++col) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(E.cols());
    e[col] = 1.0;
    const Eigen::VectorXd h1 = H * e;
    // Primal preimage of H phi under E; E has full column rank.
    const Eigen::VectorXd p = E.colPivHouseholderQr().solve(h1);
    if ((E * p - h1).norm() > 1e-12) continue;  // H phi not in the primal span
    const Eigen::VectorXd h2 = H * p;
    for (double x : xs) {
      const double v = eval_space(*L, Space::Dual, x).dot(h2);
      const double phi = eval_space(*L, Space::Primal, x).dot(e);
      CHECK(std::abs(v + phi) < 1e-6);
    }
  }
}

TEST_CASE("D structure and finite-difference check") {
  {
    const Eigen::MatrixXd d = build_D(0, Interval(-1, 1)).to_dense();
    CHECK(d(3, 1) == -1.0);
    CHECK(d(4, 2) == 1.0);
    CHECK(d.cwiseAbs().sum() == 2.0);
  }
  {
    const Eigen::MatrixXd d = build_D(1, Interval(1, 3)).to_dense();
    CHECK(d(3, 1) == -1.0);
    CHECK(d(4, 2) == 1.0);
    CHECK(d(5, 3) == -2.0);
    CHECK(d(6, 4) == 2.0);
    CHECK(d.cwiseAbs().sum() == 6.0);
  }
  for (Interval I : {Interval(-1, 1), Interval(1, 3), Interval(-4, 0.5)}) {
    auto L = single_layout(6, I);
    const BandedOp D = build_D(*L);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    Eigen::VectorXd c(L->dim(Space::Primal));
    for (auto& v : c) v = U(rng);
    const Eigen::VectorXd dc = D.apply(c);
    oracle::Fn f = [&](double s) { return eval_space(*L, Space::Primal, s).dot(c); };
    for (double x : sample_points(I.a() - 3, I.b() + 3, 300)) {
      const double y = I.to_reference(x);
      if (std::abs(std::abs(y) - 1) < 1e-3) continue;
      const double ex = eval_space(*L, Space::Dual, x).dot(dc);
      CHECK(oracle::central_diff(f, x) == Approx(ex).epsilon(1e-5));
    }
  }
}

TEST_CASE("A maps onto the sqrt-Laplacian images") {
  const Eigen::MatrixXd a0 = build_A(0, Interval(-1, 1)).to_dense();
  CHECK(a0(4, 1) == 1.0);
  CHECK(a0(3, 2) == 1.0);
  CHECK(a0.cwiseAbs().sum() == 2.0);

  auto L = single_layout(4, Interval(1, 3));
  const BandedOp A = build_A(*L);
  CoeffVec w0(Space::Primal, L), t1(Space::Primal, L);
  w0.values[L->primal_W(0, 0)] = 1;
  t1.values[L->primal_Tt(0, 1)] = 1;
  const Eigen::VectorXd aw = A.apply(w0.values), at = A.apply(t1.values);
  CHECK(aw[L->dual_Ut(0, 0)] == 1.0);  // 2(n+1)/(b-a) = 1
  CHECK(aw.cwiseAbs().sum() == 1.0);
  CHECK(at[L->dual_V(0, 1)] == 1.0);   // 2n/(b-a) = 1
  CHECK(at.cwiseAbs().sum() == 1.0);

  auto L2 = single_layout(4, Interval(0, 0.5));
  const Eigen::VectorXd aw3 = build_A(*L2).apply([&] {
    CoeffVec c(Space::Primal, L2);
    c.values[L2->primal_W(0, 3)] = 1;
    return c.values;
  }());
  CHECK(aw3[L2->dual_Ut(0, 3)] == Approx(2.0 * 4 / 0.5));
}

TEST_CASE("J: multiplication by y") {
  for (int n : {0, 2, 7}) {
    const BandedOp J = build_J(n);
    CHECK(J.rows() == 2 * n + 5);
    CHECK(J.cols() == 2 * n + 2);
    const Eigen::MatrixXd m = J.to_dense();
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) CHECK((m(r, c) == 0.0 || m(r, c) == 0.5));
    CHECK(J.apply(Eigen::VectorXd::Zero(2 * n + 2)).isZero());

    std::mt19937 rng(n + 11);
    std::uniform_real_distribution<double> U(-1, 1);
    Eigen::VectorXd c(2 * n + 2);
    for (auto& v : c) v = U(rng);
    const Eigen::VectorXd jc = J.apply(c);
    auto big = single_layout(n + 1);
    for (double y : sample_points(-3, 3, 1000)) {
      double sc = 0;  // S°(y) c
      for (int j = 0; j <= n; ++j) sc += c[2 * j] * eval_W(j, y) + c[2 * j + 1] * eval_Tt(j + 1, y);
      const double lhs = eval_space(*big, Space::Primal, y).dot(jc);
      CHECK(std::abs(lhs - y * sc) <= 1e-12 * std::max(1.0, c.lpNorm<1>()));
    }
  }
}

TEST_CASE("assemble_L block structure") {
  {
    auto L = single_layout(0);
    const Eigen::MatrixXd l = assemble_L(*L, 1, 0, 0).to_dense();
    const Eigen::MatrixXd ref = build_E(0).to_dense() + build_A(0, Interval(-1, 1)).to_dense();
    CHECK(l.rows() == 7);
    CHECK(l.cols() == 3);
    CHECK((l - ref).norm() == 0.0);
  }
  SumSpaceLayout L({Interval(-1, 1), Interval(1, 3)}, {3, 5});
  const BandedOp Lm = assemble_L(L, 0.7, -1.3, 2.1);
  CHECK(Lm.num_blocks() == 2);
  CHECK(Lm.block(0).mat.rows() == 13);
  CHECK(Lm.block(0).mat.cols() == 9);
  CHECK(Lm.block(1).mat.rows() == 16);
  CHECK(Lm.block(1).mat.cols() == 12);
  CHECK(Lm.nnz() <= 6 * Lm.rows());

  // Block k equals the single-interval build with row/col 0 removed.
  for (int k = 0; k < 2; ++k) {
    SumSpaceLayout one({L.interval(k)}, {L.degree(k)});
    const Eigen::MatrixXd s = assemble_L(one, 0.7, -1.3, 2.1).to_dense();
    const Eigen::MatrixXd b = Eigen::MatrixXd(Lm.block(k).mat);
    if (k == 0) {
      CHECK((b - s).cwiseAbs().maxCoeff() == 0.0);
    } else {
      CHECK((b - s.bottomRightCorner(s.rows() - 1, s.cols() - 1)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("eval_space rows") {
  SumSpaceLayout L({Interval(-1, 1), Interval(1, 3)}, {1, 1});
  const Eigen::RowVectorXd d = eval_space(L, Space::Dual, 3.0);
  CHECK(std::isnan(d[L.dual_V(1, 0)]));
  CHECK(d[L.dual_V(0, 0)] == 0.0);
  const Eigen::RowVectorXd p = eval_space(L, Space::Primal, 10.0);
  CHECK(p[0] == 1.0);
  CHECK(p[L.primal_W(0, 0)] == 0.0);
  CHECK(p[L.primal_W(1, 1)] == 0.0);
  CHECK_THROWS_AS(eval_space(L, Space::Appended, 0.0), ValidationError);
}

TEST_CASE("partial orthogonality in H^{1/2}") {
  // (pi/2) l delta_{jl}: the Chebyshev normalisation int T_l^2/sqrt(1-x^2) = pi/2
  // appears on both sides.
  const int M = 2000;
  const int n = 9;
  auto L = single_layout(n);
  const BandedOp A = build_A(*L);
  for (int l = 1; l <= 8; ++l) {
    CoeffVec tl(Space::Primal, L), wl(Space::Primal, L);
    tl.values[L->primal_Tt(0, l)] = 1;
    wl.values[L->primal_W(0, l)] = 1;
    const Eigen::VectorXd at = A.apply(tl.values), aw = A.apply(wl.values);
    for (int j = 1; j <= 8; ++j) {
      double sT = 0, sW = 0;
      for (int i = 0; i < M; ++i) {
        // first kind: int g / sqrt(1-x^2) ~ pi/M sum g(x_i)
        const double th1 = M_PI * (i + 0.5) / M;
        const double x1 = std::cos(th1);
        const double lap_t = eval_space(*L, Space::Dual, x1).dot(at);
        sT += eval_Tt(j, x1) * lap_t * std::sin(th1);
        // second kind: int g sqrt(1-x^2) ~ pi/(M+1) sum sin^2 g(x_i)
        const double th2 = M_PI * (i + 1) / (M + 1);
        const double x2 = std::cos(th2);
        const double lap_w = eval_space(*L, Space::Dual, x2).dot(aw);
        sW += std::sin(th2) * std::sin(th2) * eval_W(j, x2) * lap_w / std::sin(th2);
      }
      sT *= M_PI / M;
      sW *= M_PI / (M + 1);
      const double eT = (j == l) ? M_PI / 2 * l : 0.0;
      const double eW = (j == l) ? M_PI / 2 * (l + 1) : 0.0;
      CHECK(std::abs(sT - eT) < 1e-10);
      CHECK(std::abs(sW - eW) < 1e-10);
    }
  }
}

TEST_CASE("frame Parseval on [-1,1]") {
  // f = p(x) sqrt(1-x^2) with random p; orthonormal Chebyshev normalisation.
  std::vector<double> gx, gw;
  oracle::gauss_legendre(3000, gx, gw);
  const int nmax = 2500;
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 2; ++trial) {
    std::vector<double> pc(7);
    for (auto& v : pc) v = U(rng);
    auto p = [&](double x) {
      double s = 0;
      for (int k = 6; k >= 0; --k) s = s * x + pc[k];
      return s;
    };
    std::vector<double> px(gx.size());
    for (std::size_t i = 0; i < gx.size(); ++i) px[i] = p(gx[i]);
    // <f, T_n>_beta = int p T_n dx, exact with Gauss-Legendre.
    double sum = 0;
    for (int n = 0; n <= nmax; ++n) {
      double ip = 0;
      for (std::size_t i = 0; i < gx.size(); ++i) ip += gw[i] * px[i] * eval_Tt(n, gx[i]);
      sum += (n == 0 ? 1 / M_PI : 2 / M_PI) * ip * ip;
    }
    // W part and the norm with second-kind Gauss-Chebyshev (exact for polynomials).
    const int M = 64;
    double norm2 = 0;
    for (int n = 0; n <= 20; ++n) {
      double ip = 0;
      for (int i = 1; i <= M; ++i) {
        const double th = M_PI * i / (M + 1), x = std::cos(th);
        // <f, W_n>_beta = int p U_n sqrt(1-x^2) dx
        ip += std::sin(th) * std::sin(th) * p(x) * eval_W(n, x) / std::sin(th);
      }
      ip *= M_PI / (M + 1);
      sum += 2 / M_PI * ip * ip;
    }
    for (int i = 1; i <= M; ++i) {
      const double th = M_PI * i / (M + 1), x = std::cos(th);
      norm2 += std::sin(th) * std::sin(th) * p(x) * p(x);
    }
    norm2 *= M_PI / (M + 1);
    CHECK(sum == Approx(2 * norm2).epsilon(1e-8));
  }
}
