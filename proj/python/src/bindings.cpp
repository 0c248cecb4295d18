#include "quantest/cli/render.hpp"
#include "quantest/covariance.hpp"
#include "quantest/error.hpp"
#include "quantest/inequality.hpp"
#include "quantest/inference.hpp"
#include "quantest/measures.hpp"
#include "quantest/verify.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

namespace py = pybind11;
using namespace quantest;

namespace {

QdMethod make_method(const std::string& var_method, const std::string& qor_sigma,
                     bool bw_correct, const std::string& kernel) {
  QdMethod m;
  if (var_method == "density") {
    m.kind = QdMethodKind::DensityInversion;
  } else if (var_method != "qor") {
    throw std::invalid_argument("var_method must be 'qor' or 'density'");
  }
  if (qor_sigma == "fitted") {
    m.sigma = LognormalSigma::Fitted;
  } else if (qor_sigma != "standard") {
    throw std::invalid_argument("qor_sigma must be 'standard' or 'fitted'");
  }
  if (kernel == "gaussian") {
    m.kernel.kind = KernelKind::Gaussian;
  } else if (kernel != "epanechnikov") {
    throw std::invalid_argument("kernel must be 'epanechnikov' or 'gaussian'");
  }
  m.bw_correct = bw_correct;
  return m;
}

MeasureSpec make_spec(const std::optional<std::string>& measure, std::optional<double> p,
                      const std::optional<std::vector<double>>& u, const py::object& coef,
                      const std::optional<std::vector<double>>& u2,
                      const std::optional<std::vector<double>>& coef2) {
  if (!u) {
    if (!coef.is_none() || u2 || coef2) {
      throw std::invalid_argument("coef, u2 and coef2 need u");
    }
    return resolve_measure(measure.value_or("median"), p);
  }
  if (measure) throw std::invalid_argument("measure conflicts with u");
  if (p) throw std::invalid_argument("p applies to named measures only");
  if (coef.is_none()) return MeasureSpec::from_vectors(*u, {}, u2.value_or(std::vector<double>{}),
                                                       coef2.value_or(std::vector<double>{}));
  try {
    auto rows = coef.cast<std::vector<std::vector<double>>>();
    if (u2 || coef2) throw std::invalid_argument("a coefficient matrix excludes u2 and coef2");
    return MeasureSpec::from_matrix(*u, rows);
  } catch (const py::cast_error&) {
  }
  return MeasureSpec::from_vectors(*u, coef.cast<std::vector<double>>(),
                                   u2.value_or(std::vector<double>{}),
                                   coef2.value_or(std::vector<double>{}));
}

py::dict result_dict(const TestResult& r) {
  py::dict d;
  d["method"] = r.method;
  d["data_name"] = r.data_name;
  d["estimate_label"] = r.estimate_label;
  d["hypothesis"] = r.hypothesis;
  d["estimate"] = r.estimate;
  d["se"] = r.se;
  d["statistic"] = r.statistic;
  d["p_value"] = r.p_value;
  d["conf_int"] = py::make_tuple(r.conf_low, r.conf_high);
  d["conf_level"] = r.conf_level;
  d["null_value"] = r.null_value;
  d["alternative"] = std::string(to_string(r.alternative));
  d["scale"] = std::string(to_string(r.scale));
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distribution-free inference for quantile-based measures";

  py::register_exception<Error>(m, "ComputationError", PyExc_RuntimeError);

  py::class_<TestResult>(m, "TestResult")
      .def_readonly("method", &TestResult::method)
      .def_readonly("data_name", &TestResult::data_name)
      .def_readonly("estimate_label", &TestResult::estimate_label)
      .def_readonly("hypothesis", &TestResult::hypothesis)
      .def_readonly("estimate", &TestResult::estimate)
      .def_readonly("se", &TestResult::se)
      .def_readonly("statistic", &TestResult::statistic)
      .def_readonly("p_value", &TestResult::p_value)
      .def_property_readonly("conf_int",
                             [](const TestResult& r) { return py::make_tuple(r.conf_low, r.conf_high); })
      .def_readonly("conf_level", &TestResult::conf_level)
      .def_readonly("null_value", &TestResult::null_value)
      .def_property_readonly("alternative",
                             [](const TestResult& r) { return std::string(to_string(r.alternative)); })
      .def_property_readonly("scale", [](const TestResult& r) { return std::string(to_string(r.scale)); })
      .def_readonly("warnings", &TestResult::warnings)
      .def("to_dict", &result_dict)
      .def("to_json", [](const TestResult& r) { return cli::render_json(r); })
      .def("__str__", [](const TestResult& r) { return cli::render_text(r); })
      .def("__repr__", [](const TestResult& r) {
        return "<TestResult " + r.estimate_label + "=" + cli::format_number(r.estimate) +
               " Z=" + cli::format_number(r.statistic) + ">";
      });

  m.def("quantile", [](const std::vector<double>& x, double p, int type) {
    return sample_quantile(Sample(x), p, type);
  }, py::arg("x"), py::arg("p"), py::arg("type") = kDefaultQuantileType);

  m.def("quantiles", [](const std::vector<double>& x, const std::vector<double>& ps, int type) {
    return sample_quantiles(Sample(x), ps, type);
  }, py::arg("x"), py::arg("p"), py::arg("type") = kDefaultQuantileType);

  m.def("qcov", [](const std::vector<double>& x, const std::vector<double>& u,
                   const std::string& var_method, const std::string& qor_sigma, bool bw_correct,
                   const std::string& kernel, int type) {
    const QuantileCov cov = qcov(Sample(x), u, make_method(var_method, qor_sigma, bw_correct, kernel), type);
    const auto k = static_cast<py::ssize_t>(cov.dim());
    py::array_t<double> out({k, k});
    auto view = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < k; ++i) {
      for (py::ssize_t j = 0; j < k; ++j) view(i, j) = cov(i, j);
    }
    return out;
  }, py::arg("x"), py::arg("u"), py::arg("var_method") = "qor", py::arg("qor_sigma") = "standard",
     py::arg("bw_correct") = true, py::arg("kernel") = "epanechnikov",
     py::arg("type") = kDefaultQuantileType);

  m.def("measures", [] {
    std::vector<std::string> out;
    for (auto n : measure_names()) out.emplace_back(n);
    return out;
  });

  m.def("estimate", [](const std::vector<double>& x, std::optional<std::string> measure,
                       std::optional<double> p, std::optional<std::vector<double>> u,
                       py::object coef, std::optional<std::vector<double>> u2,
                       std::optional<std::vector<double>> coef2, int type) {
    return estimate_measure(Sample(x), make_spec(measure, p, u, coef, u2, coef2), type);
  }, py::arg("x"), py::arg("measure") = py::none(), py::arg("p") = py::none(),
     py::arg("u") = py::none(), py::arg("coef") = py::none(), py::arg("u2") = py::none(),
     py::arg("coef2") = py::none(), py::arg("type") = kDefaultQuantileType);

  m.def("q_test", [](const std::vector<double>& x, std::optional<std::vector<double>> y,
                     std::optional<std::string> measure, std::optional<double> p,
                     std::optional<std::vector<double>> u, py::object coef,
                     std::optional<std::vector<double>> u2, std::optional<std::vector<double>> coef2,
                     const std::string& alternative, double conf_level, double true_q,
                     bool log_transf, bool back_transf, double min_q, int type,
                     const std::string& var_method, const std::string& qor_sigma, bool bw_correct,
                     const std::string& kernel) {
    const MeasureSpec spec = make_spec(measure, p, u, coef, u2, coef2);
    TestOptions opts;
    opts.alternative = parse_alternative(alternative);
    opts.conf_level = conf_level;
    opts.true_q = true_q;
    opts.log_transf = log_transf;
    opts.back_transf = back_transf;
    opts.min_q = min_q;
    opts.quantile_type = type;
    opts.var_method = make_method(var_method, qor_sigma, bw_correct, kernel);
    if (y) {
      TestResult r = q_test_two(Sample(x), Sample(*y), spec, opts);
      r.data_name = "x and y";
      return r;
    }
    return q_test_one(Sample(x), spec, opts);
  }, py::arg("x"), py::arg("y") = py::none(), py::arg("measure") = py::none(),
     py::arg("p") = py::none(), py::arg("u") = py::none(), py::arg("coef") = py::none(),
     py::arg("u2") = py::none(), py::arg("coef2") = py::none(),
     py::arg("alternative") = "two.sided", py::arg("conf_level") = 0.95, py::arg("true_q") = 0.0,
     py::arg("log_transf") = false, py::arg("back_transf") = false,
     py::arg("min_q") = -std::numeric_limits<double>::infinity(),
     py::arg("type") = kDefaultQuantileType, py::arg("var_method") = "qor",
     py::arg("qor_sigma") = "standard", py::arg("bw_correct") = true,
     py::arg("kernel") = "epanechnikov");

  m.def("qineq", [](const std::vector<double>& x, std::optional<std::vector<double>> y,
                    const std::string& measure, int J, std::optional<double> true_ineq,
                    const std::string& alternative, double conf_level, int type,
                    const std::string& var_method, const std::string& qor_sigma, bool bw_correct) {
    InequalitySpec spec;
    spec.kind = parse_ineq_kind(measure);
    spec.J = J;
    spec.true_ineq = true_ineq;
    spec.alternative = parse_alternative(alternative);
    spec.conf_level = conf_level;
    spec.quantile_type = type;
    spec.var_method = make_method(var_method, qor_sigma, bw_correct, "epanechnikov");
    std::optional<Sample> ys;
    if (y) ys.emplace(*y);
    TestResult r = qineq_test(Sample(x), ys, spec);
    if (y) r.data_name = "x and y";
    return r;
  }, py::arg("x"), py::arg("y") = py::none(), py::arg("measure") = "QRI", py::arg("J") = 100,
     py::arg("true_ineq") = py::none(), py::arg("alternative") = "two.sided",
     py::arg("conf_level") = 0.95, py::arg("type") = kDefaultQuantileType,
     py::arg("var_method") = "qor", py::arg("qor_sigma") = "standard",
     py::arg("bw_correct") = true);

  m.def("qri", [](const std::vector<double>& x, int J, int type) {
    return qri_estimate(Sample(x), J, type);
  }, py::arg("x"), py::arg("J") = 100, py::arg("type") = kDefaultQuantileType);
  m.def("g2", [](const std::vector<double>& x, int J, int type) {
    return g2_estimate(Sample(x), J, type);
  }, py::arg("x"), py::arg("J") = 100, py::arg("type") = kDefaultQuantileType);

  m.def("qor_lognormal", &qor_lognormal, py::arg("sigma"), py::arg("p"));
  m.def("optimal_bandwidth", [](double qor, double p, std::size_t n, bool bw_correct) {
    return optimal_bandwidth(qor, p, n, bw_correct, Kernel{});
  }, py::arg("qor"), py::arg("p"), py::arg("n"), py::arg("bw_correct") = true);

  m.def("coverage", [](const std::string& dist, std::size_t n, std::size_t reps,
                       std::optional<std::string> measure, std::optional<double> p,
                       std::optional<std::string> ineq, double conf_level, bool log_transf,
                       bool back_transf, std::uint64_t seed, unsigned threads) {
    SimConfig cfg;
    cfg.dist = Distribution::parse(dist);
    cfg.n = n;
    cfg.reps = reps;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.options.conf_level = conf_level;
    cfg.options.log_transf = log_transf;
    cfg.options.back_transf = back_transf;
    if (ineq) {
      InequalitySpec spec;
      spec.kind = parse_ineq_kind(*ineq);
      spec.conf_level = conf_level;
      cfg.measure = spec;
    } else {
      cfg.measure = resolve_measure(measure.value_or("median"), p);
    }
    py::gil_scoped_release release;
    const CoverageResult r = coverage_sim(cfg);
    py::gil_scoped_acquire acquire;
    py::dict d;
    d["coverage"] = r.coverage;
    d["avg_width"] = r.avg_width;
    d["mc_se"] = r.mc_se;
    d["true_value"] = r.true_value;
    d["reps"] = r.reps;
    d["failures"] = r.failures;
    return d;
  }, py::arg("dist"), py::arg("n"), py::arg("reps") = 1000, py::arg("measure") = py::none(),
     py::arg("p") = py::none(), py::arg("ineq") = py::none(), py::arg("conf_level") = 0.95,
     py::arg("log_transf") = false, py::arg("back_transf") = false, py::arg("seed") = 1234,
     py::arg("threads") = 0);

  m.def("bootstrap_se", [](const std::vector<double>& x, std::optional<std::string> measure,
                           std::optional<double> p, std::optional<std::string> ineq,
                           std::size_t B, std::uint64_t seed, unsigned threads) {
    SimMeasure sm = resolve_measure(measure.value_or("median"), p);
    if (ineq) {
      InequalitySpec spec;
      spec.kind = parse_ineq_kind(*ineq);
      sm = spec;
    }
    const Sample s(x);
    py::gil_scoped_release release;
    const BootstrapResult r = quantest::bootstrap_se(s, sm, B, seed, kDefaultQuantileType, threads);
    return r.se;
  }, py::arg("x"), py::arg("measure") = py::none(), py::arg("p") = py::none(),
     py::arg("ineq") = py::none(), py::arg("B") = 2000, py::arg("seed") = 1234,
     py::arg("threads") = 0);
}
