#include <doctest.h>

#include <cmath>

#include "fracsum/apps.hpp"
#include "fracsum/chebx.hpp"
#include "fracsum/error.hpp"
#include "oracles.hpp"

using namespace fracsum;

TEST_CASE("heat_exact values") {
  CHECK(heat_exact(0, 0) == 1.0);
  CHECK(heat_exact(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(heat_exact(2, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(heat_exact(3, 0) == doctest::Approx(heat_ic_rational(3)).epsilon(1e-15));
}

TEST_CASE("1F1(1; 1/2; -x^2): series against the Dawson route") {
  // 1F1(1;1/2;-4)
  CHECK(std::abs(hyp1f1_one_half_series(2) - hyp1f1_one_half(2)) <= 1e-12);
  CHECK(hyp1f1_one_half_series(0) == 1.0);
  for (double x : {-6.0, -3.7, -1.2, -0.3, 0.1, 0.8, 2.5, 3.9, 4.5, 8.0}) {
    INFO("x = " << x);
    CHECK(std::abs(hyp1f1_one_half_series(x) - hyp1f1_one_half(x)) <= 1e-8);
  }
}

TEST_CASE("Gaussian Hilbert transform and square-root Laplacian against PV quadrature") {
  auto g = [](double t) { return std::exp(-t * t); };
  for (double x : {-4.0, -2.2, -1.0, -0.45, 0.0, 0.2, 0.7, 1.5, 3.0, 6.0}) {
    INFO("x = " << x);
    CHECK(std::abs(gaussian_hilbert(x) - oracle::hilbert(g, x, {})) <= 1e-8);
    CHECK(std::abs(gaussian_sqrt_laplacian(x) - oracle::sqrt_laplacian(g, x, {})) <= 1e-8);
  }
}

TEST_CASE("manufactured right-hand sides at the origin") {
  const double v = 1 + 2 / std::sqrt(M_PI);
  CHECK(manufactured_rhs(ManufacturedCase::Helmholtz, 0) == doctest::Approx(v).epsilon(1e-15));
  CHECK(manufactured_rhs(ManufacturedCase::Full, 0) == doctest::Approx(v).epsilon(1e-15));
  CHECK(v == doctest::Approx(2.128379).epsilon(1e-6));
  CHECK(parse_manufactured_case("full") == ManufacturedCase::Full);
  CHECK_THROWS_AS(parse_manufactured_case("heat"), ValidationError);
}

TEST_CASE("five-interval layout and uniform points") {
  auto L = five_interval_layout(5);
  REQUIRE(L->num_intervals() == 5);
  CHECK(L->interval(0).a() == -5);
  CHECK(L->interval(4).b() == 5);
  auto x = uniform_points(-5, 5, 0.01);
  CHECK(x.size() == 1001);
  CHECK(x.front() == -5);
  CHECK(x.back() == 5);
  CHECK(heat_error_grid().size() == 4001);
  CHECK_THROWS_AS(uniform_points(0, 1, 0), ValidationError);
}

TEST_CASE("heat: zero stays zero, W0 after one step, x = 0 at t = 1") {
  HeatSolver H(HeatConfig{});
  CHECK(H.lambda() == doctest::Approx(100));

  const CoeffVec z(Space::Appended, H.config().layout);
  for (const auto& u : H.run(z, 5)) CHECK(u.values.cwiseAbs().maxCoeff() == 0.0);

  // W0 on [-1, 1]
  const auto L = H.config().layout;
  CoeffVec p(Space::Primal, L);
  p.values[L->primal_W(2, 0)] = 1;
  const CoeffVec u1 = H.step(H.initial(p));
  const auto xs = uniform_points(-5, 5, 0.05);
  const auto ref = heat_w0_reference(xs, H.lambda(), 1);
  const Eigen::VectorXd v = H.evaluate(u1, xs);
  double err = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) err = std::max(err, std::abs(v[i] - ref[i]));
  MESSAGE("W0 one step, max error " << err);
  CHECK(err <= 1e-4);

  double rr = 0;
  const auto hist = H.run(H.initial(heat_ic_rational, &rr), 100);
  const double x0 = 0;
  const double u = H.evaluate(hist.back(), std::span<const double>(&x0, 1))[0];
  MESSAGE("u(0, 1) = " << u);
  CHECK(std::abs(u - 0.5) <= 5e-3);
}

TEST_CASE("heat reference with k = 0 is W0") {
  const auto xs = uniform_points(-3, 3, 0.25);
  const auto r = heat_w0_reference(xs, 50, 0);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(r[i] == eval_W(0, xs[i]));
  CHECK_THROWS_AS(heat_w0_reference(xs, 0, 1), ValidationError);
}

TEST_CASE("wave forcing at the origin") {
  CHECK(wave_forcing_value(0, 0) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-15));
  auto L = std::make_shared<const SumSpaceLayout>(std::vector<Interval>{Interval(-1, 1)}, std::vector<int>{7});
  const double x0 = 0;
  CHECK(evaluate(wave_forcing(L, 0), std::span<const double>(&x0, 1))[0] ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
  const double x1 = 0.37;
  CHECK(evaluate(wave_forcing(L, 1.5), std::span<const double>(&x1, 1))[0] ==
        doctest::Approx(wave_forcing_value(x1, 1.5)).epsilon(1e-13));
}

TEST_CASE("wave driver delegates to the single-frequency solve") {
  auto L = std::make_shared<const SumSpaceLayout>(std::vector<Interval>{Interval(-1, 1)}, std::vector<int>{7});
  WaveConfig c;
  c.layout = L;
  c.omega_max = 0.5;
  c.d_omega = 0.5;
  c.xs = {-2, -0.5, 0.25, 1.5};
  c.forcing = [](LayoutPtr l, double) {
    CoeffVec f(Space::Dual, l);
    f.values[l->dual_V(0, 2)] = 1;
    return f;
  };
  const WaveResult r = wave_solve(c);
  REQUIRE(r.omegas.size() == 2);
  for (int i = 0; i < 2; ++i) {
    const double w = r.omegas[i];
    const CoeffVec u = wave_solve_frequency(L, w, c.forcing(L, w), AppendedChoice::HighEnd);
    AppendedSpec spec;
    spec.lambda = -w * w;
    spec.mu = 1;
    spec.choice = AppendedChoice::HighEnd;
    const auto fam = AppendedFamily::build(L, spec, {});
    const Eigen::VectorXd v = evaluate(u, c.xs, fam.get());
    for (std::size_t j = 0; j < c.xs.size(); ++j) CHECK(r.uhat(i, j) == v[j]);
  }
}

TEST_CASE("wave on a short band: real, with an odd part") {
  WaveConfig c;
  c.omega_max = 2;
  c.d_omega = 0.2;
  c.xs = uniform_points(-3, 3, 0.25);
  const WaveResult r = wave_solve(c);
  CHECK(r.times.size() == 20);
  CHECK(r.max_imag_rel <= 1e-8);
  const auto nx = static_cast<Eigen::Index>(r.xs.size());
  double odd = 0;
  for (Eigen::Index j = 0; j < r.u.rows(); ++j)
    for (Eigen::Index i = 0; i < nx; ++i) odd = std::max(odd, std::abs(r.u(j, i) - r.u(j, nx - 1 - i)));
  CHECK(odd > 1e-3 * r.u.cwiseAbs().maxCoeff());
}

TEST_CASE("wave input validation") {
  WaveConfig c;
  c.omega_max = 1;
  c.d_omega = 0.3;
  CHECK_THROWS_AS(wave_solve(c), ValidationError);
  c.d_omega = 0;
  CHECK_THROWS_AS(wave_solve(c), ValidationError);
  HeatConfig h;
  h.dt = -1;
  CHECK_THROWS_AS(HeatSolver{h}, ValidationError);
}
