#include "mstcov/boxplot.hpp"
#include "mstcov/cross_cov.hpp"
#include "mstcov/depth.hpp"
#include "mstcov/detrend.hpp"
#include "mstcov/error.hpp"
#include "mstcov/nearest_pd.hpp"
#include "mstcov/parallel.hpp"
#include "mstcov/pipeline.hpp"
#include "mstcov/simulate.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <optional>

namespace py = pybind11;
using namespace mstcov;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// values: (p, n, l) array; coords: (n, 2) array.
MvstDataset to_dataset(const Array& values, const Array& coords) {
  if (values.ndim() != 3) throw ValidationError("values must have shape (p, n, l)");
  if (coords.ndim() != 2 || coords.shape(1) != 2 || coords.shape(0) != values.shape(1)) {
    throw ValidationError("coords must have shape (n, 2)");
  }
  const auto p = static_cast<std::size_t>(values.shape(0));
  const auto n = static_cast<std::size_t>(values.shape(1));
  const auto l = static_cast<std::size_t>(values.shape(2));
  std::vector<Point> pts(n);
  for (std::size_t a = 0; a < n; ++a) pts[a] = {coords.at(a, 0), coords.at(a, 1)};
  return {p, std::move(pts), l, std::vector<double>(values.data(), values.data() + values.size())};
}

py::tuple from_dataset(const MvstDataset& d) {
  Array values({d.num_variables(), d.num_locations(), d.num_times()});
  std::copy(d.values().begin(), d.values().end(), values.mutable_data());
  Array coords({d.num_locations(), std::size_t{2}});
  for (std::size_t a = 0; a < d.num_locations(); ++a) {
    coords.mutable_at(a, 0) = d.coords()[a].x;
    coords.mutable_at(a, 1) = d.coords()[a].y;
  }
  return py::make_tuple(values, coords);
}

py::dict test_function_dict(const TestFunctionSet& f) {
  py::dict out;
  out["property"] = std::string(to_string(f.property));
  out["lags"] = f.lags;
  std::vector<std::array<std::size_t, 4>> labels;
  for (const auto& c : f.labels) labels.push_back({c.i, c.j, c.a, c.b});
  out["labels"] = labels;
  Array values({f.num_curves(), f.num_lags()});
  std::copy(f.values.begin(), f.values.end(), values.mutable_data());
  out["values"] = values;
  return out;
}

TestFunctionSet set_from(PropertyType property, const Array& curves) {
  if (curves.ndim() != 2) throw ValidationError("curves must have shape (N, T)");
  TestFunctionSet f;
  f.property = property;
  for (py::ssize_t u = 0; u < curves.shape(1); ++u) f.lags.push_back(static_cast<int>(u + 1));
  for (py::ssize_t k = 0; k < curves.shape(0); ++k) f.labels.push_back({0, 0, static_cast<std::size_t>(k), 0});
  f.values.assign(curves.data(), curves.data() + curves.size());
  return f;
}

py::dict result_dict(const TestResult& r) {
  py::dict out;
  out["property"] = std::string(to_string(r.property));
  out["W"] = r.W;
  out["p_value"] = r.p_value;
  out["alpha"] = r.alpha;
  out["reject"] = r.reject;
  out["n_F"] = r.n_F;
  out["n_FH0"] = r.n_FH0;
  out["B"] = r.bootstrap_B;
  out["seed"] = r.seed;
  out["b"] = r.block_length;
  out["U"] = r.max_lag;
  out["estimator_mode"] = std::string(to_string(r.estimator));
  out["null_mode"] = std::string(to_string(r.null_mode));
  out["clipped_eigenvalues"] = r.clipped_eigenvalues;
  out["warnings"] = r.warnings;
  return out;
}

} // namespace

PYBIND11_MODULE(_mstcov, m) {
  m.doc() = "Rank-based tests of multivariate space-time covariance properties";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("set_thread_count", &set_thread_count, py::arg("threads"));

  m.def("simulate_model1",
        [](std::size_t grid, std::size_t l, std::size_t shift, std::size_t lag, std::uint64_t seed) {
          auto d = simulate_model1({grid, l, shift, lag, seed});
          return from_dataset(d);
        },
        py::arg("m") = 4, py::arg("l") = 10000, py::arg("shift") = 0, py::arg("lag") = 0,
        py::arg("seed") = 0, "Returns (values[p, n, l], coords[n, 2]).");

  m.def("simulate_model2",
        [](std::size_t grid, std::size_t l, double beta1, double beta2, std::uint64_t seed,
           std::size_t memory_limit) {
          std::vector<std::string> warnings;
          auto d = simulate_model2({grid, l, beta1, beta2, seed, memory_limit}, &warnings);
          return from_dataset(d);
        },
        py::arg("m") = 4, py::arg("l") = 10000, py::arg("beta1") = 0.0, py::arg("beta2") = 0.0,
        py::arg("seed") = 0, py::arg("memory_limit") = 3000);

  m.def("model2_covariance", &model2_covariance, py::arg("i"), py::arg("j"), py::arg("h"),
        py::arg("u"), py::arg("beta1"), py::arg("beta2"));

  m.def("estimate_cross_cov",
        [](const Array& values, const Array& coords, std::size_t max_lag) {
          auto cov = estimate_cross_cov(to_dataset(values, coords), max_lag);
          const std::size_t p = cov.num_variables(), n = cov.num_locations();
          Array out({p, p, n, n, 2 * max_lag + 1});
          std::copy(cov.entries().begin(), cov.entries().end(), out.mutable_data());
          return out;
        },
        py::arg("values"), py::arg("coords"), py::arg("max_lag"),
        "Array [i, j, a, b, u + U] of C^{ab}_{ij}(u).");

  m.def("harmonic_detrend",
        [](const Array& values, const Array& coords, std::vector<double> periods) {
          auto r = harmonic_detrend(to_dataset(values, coords), periods);
          Array coef({r.fit.num_variables, r.fit.num_locations, r.fit.num_terms()});
          std::copy(r.fit.coefficients.begin(), r.fit.coefficients.end(), coef.mutable_data());
          return py::make_tuple(from_dataset(r.residuals)[0], coef);
        },
        py::arg("values"), py::arg("coords"), py::arg("periods") = std::vector<double>{24.0, 12.0});

  m.def("test_functions",
        [](const Array& values, const Array& coords, const std::string& property,
           std::size_t max_lag, const std::string& mode) {
          return test_function_dict(data_test_functions(to_dataset(values, coords),
                                                        parse_property(property), max_lag,
                                                        parse_estimator_mode(mode)));
        },
        py::arg("values"), py::arg("coords"), py::arg("property"), py::arg("max_lag") = 10,
        py::arg("mode") = "least-squares");

  m.def("run_property_test",
        [](const Array& values, const Array& coords, const std::string& property, double alpha,
           std::size_t max_lag, std::size_t bootstrap, std::size_t memory_limit,
           std::uint64_t seed, const std::string& mode, const std::string& null_mode) {
          const auto data = to_dataset(values, coords);
          PropertyTestOptions o;
          o.alpha = alpha;
          o.max_lag = max_lag;
          o.bootstrap = bootstrap;
          o.memory_limit = memory_limit;
          o.seed = seed;
          o.estimator = parse_estimator_mode(mode);
          o.null_mode = parse_null_mode(null_mode);
          const auto prop = parse_property(property);
          TestResult r;
          {
            py::gil_scoped_release release;
            r = run_property_test(data, prop, o);
          }
          return result_dict(r);
        },
        py::arg("values"), py::arg("coords"), py::arg("property"), py::arg("alpha") = 0.05,
        py::arg("max_lag") = 10, py::arg("bootstrap") = 200, py::arg("memory_limit") = 3000,
        py::arg("seed") = 0, py::arg("mode") = "least-squares", py::arg("null") = "regenerate");

  m.def("nearest_pd", [](const Eigen::MatrixXd& a) { return nearest_pd(a); }, py::arg("matrix"));

  m.def("modified_band_depth",
        [](const Array& curves) {
          if (curves.ndim() != 2) throw ValidationError("curves must have shape (N, T)");
          return modified_band_depth({static_cast<std::size_t>(curves.shape(0)),
                                      static_cast<std::size_t>(curves.shape(1)), curves.data()});
        },
        py::arg("curves"));

  m.def("exact_rank_sum_null",
        [](std::size_t n_F, std::size_t n_FH0) {
          auto e = exact_rank_sum_null(n_F, n_FH0);
          return py::make_tuple(e.w_min, e.probabilities);
        },
        py::arg("n_F"), py::arg("n_FH0"), "Returns (w_min, probabilities).");

  m.def("functional_boxplot_svg",
        [](const Array& curves, const std::string& property, std::optional<double> p_value,
           double alpha, double central_fraction, double whisker_factor) {
          auto set = set_from(parse_property(property), curves);
          BoxplotSpec spec;
          spec.central_fraction = central_fraction;
          spec.whisker_factor = whisker_factor;
          TestResult r;
          if (p_value) {
            r.property = set.property;
            r.p_value = *p_value;
            r.alpha = alpha;
            r.reject = *p_value < alpha;
          }
          return render_functional_boxplot(set, p_value ? &r : nullptr, spec);
        },
        py::arg("curves"), py::arg("property") = "Vsym", py::arg("p_value") = py::none(),
        py::arg("alpha") = 0.05, py::arg("central_fraction") = 0.5, py::arg("whisker_factor") = 1.5);
}
