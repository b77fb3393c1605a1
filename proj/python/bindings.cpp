#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fracsum/apps.hpp"
#include "fracsum/chebx.hpp"
#include "fracsum/error.hpp"
#include "fracsum/expand.hpp"
#include "fracsum/solver.hpp"
#include "fracsum/specfun.hpp"

namespace py = pybind11;
using namespace fracsum;

namespace {

// Python holds layouts and families as non-const shared pointers.
using PyLayout = std::shared_ptr<SumSpaceLayout>;
using PyFamily = std::shared_ptr<AppendedFamily>;

PyLayout to_py(LayoutPtr p) { return std::const_pointer_cast<SumSpaceLayout>(p); }
LayoutPtr from_py(const PyLayout& p) {
  if (!p) throw ValidationError("layout is None");
  return p;
}

PyLayout make_layout(const std::vector<std::pair<double, double>>& intervals, const std::vector<int>& degrees) {
  std::vector<Interval> I;
  for (auto [a, b] : intervals) I.emplace_back(a, b);
  std::vector<int> n = degrees;
  if (n.size() == 1) n.assign(I.size(), n[0]);
  return std::make_shared<SumSpaceLayout>(std::move(I), std::move(n));
}

py::dict wave_to_dict(const WaveResult& r) {
  py::dict d;
  d["omegas"] = r.omegas;
  d["uhat"] = r.uhat;
  d["times"] = r.times;
  d["u"] = r.u;
  d["xs"] = r.xs;
  d["max_imag_rel"] = r.max_imag_rel;
  d["interpolated"] = r.interpolated;
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fracsum, m) {
  m.doc() = "Sum-space spectral solver for (lambda I + mu H + eta d/dx + (-Delta)^{1/2}) u = f on the real line";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<SingularBlock>(m, "SingularBlock", numerical.ptr());
  py::register_exception<DenominatorNearZero>(m, "DenominatorNearZero", numerical.ptr());
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::enum_<Space>(m, "Space")
      .value("Primal", Space::Primal)
      .value("Dual", Space::Dual)
      .value("Appended", Space::Appended);
  py::enum_<AppendedChoice>(m, "AppendedChoice")
      .value("LowEnd", AppendedChoice::LowEnd)
      .value("HighEnd", AppendedChoice::HighEnd);
  py::enum_<AppendedMethod>(m, "AppendedMethod")
      .value("FFT", AppendedMethod::FFT)
      .value("Quadrature", AppendedMethod::Quadrature);

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
      .def_property_readonly("a", &Interval::a)
      .def_property_readonly("b", &Interval::b)
      .def_property_readonly("width", &Interval::width)
      .def_property_readonly("center", &Interval::center)
      .def("__repr__", [](const Interval& I) {
        return "Interval(" + std::to_string(I.a()) + ", " + std::to_string(I.b()) + ")";
      });

  py::class_<SumSpaceLayout, PyLayout>(m, "Layout")
      .def(py::init(&make_layout), py::arg("intervals"), py::arg("degrees"),
           "intervals: list of (a, b); degrees: one per interval, or a single value for all")
      .def_property_readonly("num_intervals", &SumSpaceLayout::num_intervals)
      .def_property_readonly("intervals", &SumSpaceLayout::intervals)
      .def_property_readonly("degrees", &SumSpaceLayout::degrees)
      .def("dim", &SumSpaceLayout::dim, py::arg("space"))
      .def("primal_W", &SumSpaceLayout::primal_W)
      .def("primal_Tt", &SumSpaceLayout::primal_Tt)
      .def("dual_V", &SumSpaceLayout::dual_V)
      .def("dual_Ut", &SumSpaceLayout::dual_Ut)
      .def("appended_slot", &SumSpaceLayout::appended_slot)
      .def("appended_W", &SumSpaceLayout::appended_W)
      .def("appended_Tt", &SumSpaceLayout::appended_Tt);
  m.def("five_interval_layout", [](int n) { return to_py(five_interval_layout(n)); }, py::arg("n") = 5);

  py::class_<CoeffVec>(m, "CoeffVec")
      .def(py::init([](Space s, const PyLayout& L) { return CoeffVec(s, from_py(L)); }))
      .def(py::init([](Space s, const PyLayout& L, Eigen::VectorXd v) { return CoeffVec(s, from_py(L), std::move(v)); }))
      .def_readonly("space", &CoeffVec::space)
      .def_property_readonly("layout", [](const CoeffVec& c) { return to_py(c.layout); })
      .def_readwrite("values", &CoeffVec::values);

  m.def("eval_Tt", py::vectorize(&eval_Tt), py::arg("n"), py::arg("x"));
  m.def("eval_Ut", py::vectorize(&eval_Ut), py::arg("n"), py::arg("x"));
  m.def("eval_W", py::vectorize(&eval_W), py::arg("n"), py::arg("x"));
  m.def("eval_V", py::vectorize(&eval_V), py::arg("n"), py::arg("x"));

  py::class_<AppendedSpec>(m, "AppendedSpec")
      .def(py::init<>())
      .def_readwrite("lam", &AppendedSpec::lambda)
      .def_readwrite("mu", &AppendedSpec::mu)
      .def_readwrite("eta", &AppendedSpec::eta)
      .def_readwrite("width", &AppendedSpec::width)
      .def_readwrite("choice", &AppendedSpec::choice)
      .def_readwrite("n", &AppendedSpec::n)
      .def_readwrite("W", &AppendedSpec::W)
      .def_readwrite("N", &AppendedSpec::N)
      .def_readwrite("method", &AppendedSpec::method)
      .def("key", &AppendedSpec::key)
      .def_static("quadrature_defaults", &AppendedSpec::quadrature_defaults);

  py::class_<AppendedFamily, PyFamily>(m, "AppendedFamily")
      .def_static(
          "build",
          [](const PyLayout& L, const AppendedSpec& spec, const std::filesystem::path& cache_dir) {
            py::gil_scoped_release release;
            return std::const_pointer_cast<AppendedFamily>(AppendedFamily::build(from_py(L), spec, cache_dir));
          },
          py::arg("layout"), py::arg("spec"), py::arg("cache_dir") = std::filesystem::path{})
      .def("value", &AppendedFamily::value, py::arg("interval"), py::arg("slot"), py::arg("x"));

  m.def(
      "evaluate",
      [](const CoeffVec& c, const std::vector<double>& xs, const PyFamily& fam) {
        return evaluate(c, xs, fam.get());
      },
      py::arg("coeffs"), py::arg("xs"), py::arg("family") = PyFamily{});

  py::class_<Expansion>(m, "Expansion")
      .def_readonly("coeffs", &Expansion::coeffs)
      .def_readonly("residual", &Expansion::residual)
      .def_readonly("rel_residual", &Expansion::rel_residual)
      .def_readonly("rank", &Expansion::rank)
      .def_readonly("coeff_norm_inf", &Expansion::coeff_norm_inf);
  m.def(
      "lsq_expand",
      [](const std::function<double(double)>& f, const PyLayout& L, Space space, int per_interval, int per_flank,
         double eps, double lo, double hi, double svd_tol) {
        const auto grid = CollocationGrid::for_layout(*L, per_interval, per_flank, eps, lo, hi);
        return lsq_expand(f, from_py(L), grid, space, nullptr, svd_tol);
      },
      py::arg("f"), py::arg("layout"), py::arg("space"), py::arg("per_interval") = 6001,
      py::arg("per_flank") = 6001, py::arg("eps") = 0.0, py::arg("lo") = NAN, py::arg("hi") = NAN,
      py::arg("svd_tol") = 1e-14);

  m.def(
      "solve",
      [](const PyLayout& L, double lam, double mu, double eta, const CoeffVec& f, AppendedChoice choice) {
        return solve(from_py(L), lam, mu, eta, f, choice);
      },
      py::arg("layout"), py::arg("lam"), py::arg("mu"), py::arg("eta"), py::arg("f"),
      py::arg("choice") = AppendedChoice::LowEnd, py::call_guard<py::gil_scoped_release>());

  m.def(
      "ifft_uniform",
      [](const std::vector<cplx>& samples, double W) {
        const GridFun g = ifft_uniform(samples, W);
        std::vector<double> x(g.N);
        for (long j = 0; j < g.N; ++j) x[j] = g.x(j);
        return py::make_tuple(x, g.values);
      },
      py::arg("samples"), py::arg("W"));

  // reference functions
  m.def("heat_exact", py::vectorize(&heat_exact), py::arg("x"), py::arg("t"));
  m.def("gaussian_hilbert", py::vectorize(&gaussian_hilbert), py::arg("x"));
  m.def("hyp1f1_one_half", py::vectorize(&hyp1f1_one_half), py::arg("x"));
  m.def("hyp1f1_one_half_series", py::vectorize(&hyp1f1_one_half_series), py::arg("x"));
  m.def(
      "manufactured_rhs",
      [](const std::string& kind, const std::vector<double>& xs) {
        const auto k = parse_manufactured_case(kind);
        std::vector<double> out;
        for (double x : xs) out.push_back(manufactured_rhs(k, x));
        return out;
      },
      py::arg("kind"), py::arg("x"));
  m.def(
      "heat_w0_reference",
      [](const std::vector<double>& xs, double lam, int k) { return heat_w0_reference(xs, lam, k); },
      py::arg("xs"), py::arg("lam"), py::arg("k"), py::call_guard<py::gil_scoped_release>());

  m.def(
      "solve_manufactured",
      [](const std::string& kind, int n, AppendedChoice choice, AppendedMethod method,
         const std::filesystem::path& cache_dir) {
        ManufacturedConfig c;
        c.kind = parse_manufactured_case(kind);
        c.n = n;
        c.choice = choice;
        const auto p = manufactured_params(c.kind);
        c.appended = method == AppendedMethod::FFT ? AppendedSpec{} : AppendedSpec::quadrature_defaults(p[0], p[1], p[2]);
        c.cache_dir = cache_dir;
        ManufacturedResult r = [&] {
          py::gil_scoped_release release;
          return solve_manufactured(c);
        }();
        py::dict d;
        d["n"] = r.n;
        d["error"] = r.error;
        d["rhs_residual"] = r.rhs_residual;
        d["solution"] = r.solution;
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("kind") = "helmholtz", py::arg("n") = 5, py::arg("choice") = AppendedChoice::HighEnd,
      py::arg("method") = AppendedMethod::FFT, py::arg("cache_dir") = std::filesystem::path{});

  py::class_<HeatSolver>(m, "HeatSolver")
      .def(py::init([](const PyLayout& L, double dt, AppendedChoice choice, double W, long N,
                       const std::filesystem::path& cache_dir) {
             HeatConfig c;
             if (L) c.layout = L;
             c.dt = dt;
             c.choice = choice;
             c.appended.W = W;
             c.appended.N = N;
             c.cache_dir = cache_dir;
             py::gil_scoped_release release;
             return std::make_unique<HeatSolver>(c);
           }),
           py::arg("layout") = PyLayout{}, py::arg("dt") = 1e-2, py::arg("choice") = AppendedChoice::LowEnd,
           py::arg("W") = 1000.0, py::arg("N") = 1L << 20, py::arg("cache_dir") = std::filesystem::path{})
      .def_property_readonly("lam", &HeatSolver::lambda)
      .def_property_readonly("setup_seconds", &HeatSolver::setup_seconds)
      .def_property_readonly("layout", [](const HeatSolver& h) { return to_py(h.config().layout); })
      .def("warnings", &HeatSolver::warnings)
      .def("initial", [](const HeatSolver& h, const std::function<double(double)>& f) { return h.initial(f); })
      .def("initial_primal", [](const HeatSolver& h, const CoeffVec& p) { return h.initial(p); })
      .def("initial_rational", [](const HeatSolver& h) { return h.initial(heat_ic_rational); })
      .def("step", &HeatSolver::step)
      .def("run", &HeatSolver::run, py::arg("u0"), py::arg("steps"), py::call_guard<py::gil_scoped_release>())
      .def(
          "evaluate", [](const HeatSolver& h, const CoeffVec& u, const std::vector<double>& xs) { return h.evaluate(u, xs); },
          py::arg("u"), py::arg("xs"));

  m.def(
      "wave_solve",
      [](double omega_max, double d_omega, int n, std::vector<double> xs, double W, long N) {
        WaveConfig c;
        c.layout = std::make_shared<const SumSpaceLayout>(std::vector<Interval>{Interval(-1, 1)}, std::vector<int>{n});
        c.omega_max = omega_max;
        c.d_omega = d_omega;
        c.xs = std::move(xs);
        c.appended.W = W;
        c.appended.N = N;
        WaveResult r = [&] {
          py::gil_scoped_release release;
          return wave_solve(c);
        }();
        return wave_to_dict(r);
      },
      py::arg("omega_max") = 20.0, py::arg("d_omega") = 0.1, py::arg("n") = 7, py::arg("xs") = std::vector<double>{},
      py::arg("W") = 1000.0, py::arg("N") = 1L << 20);
}
