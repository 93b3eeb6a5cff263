#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kreindil/cli.hpp"
#include "kreindil/g_operator.hpp"
#include "kreindil/krein_dilation.hpp"
#include "kreindil/model_io.hpp"
#include "kreindil/sectoriality.hpp"
#include "kreindil/toeplitz_kernel.hpp"

namespace py = pybind11;
using namespace kreindil;

namespace {

OperatorSpec make_spec(const CMatrix& generator, const std::optional<CMatrix>& metric) {
  OperatorSpec spec{generator, metric};
  spec.validate();
  return spec;
}

FiniteSupportFunction make_function(const std::vector<double>& points,
                                    const std::vector<CVector>& vectors) {
  return FiniteSupportFunction::make(points, vectors);
}

// Semigroup and the decomposition of its generator at a fixed β, the state
// every kernel-level query needs.
class Kernel {
 public:
  Kernel(const OperatorSpec& spec, double beta)
      : sg_(spec), decomp_(decompose(spec, beta, sg_.metric())) {}

  double beta() const { return decomp_.beta; }
  const CMatrix& G() const { return decomp_.G; }
  const CMatrix& J() const { return decomp_.J; }
  const CMatrix& abs_G() const { return decomp_.absG; }

  CMatrix f(double s) const { return f_value(sg_, s); }
  CMatrix k(double s, double t) const { return kernel_value(sg_, decomp_, s, t).value; }

  py::dict s_f(const std::vector<double>& points, const std::vector<CVector>& vectors) const {
    return form_dict(kreindil::s_f(sg_, decomp_, make_function(points, vectors)));
  }
  py::dict s_k(const std::vector<double>& points, const std::vector<CVector>& vectors) const {
    return form_dict(kreindil::s_k(sg_, decomp_, make_function(points, vectors)));
  }

  py::dict condition_iii(const std::vector<double>& points,
                         const std::vector<CVector>& vectors) const {
    const auto r = check_condition_iii(sg_, decomp_, make_function(points, vectors));
    py::dict d;
    d["cross"] = r.cross;
    d["sk"] = r.sk;
    d["sk_prime"] = r.sk_prime;
    d["ratio"] = r.ratio;
    d["cross_deviation"] = r.cross_deviation;
    d["prime_deviation"] = r.prime_deviation;
    d["best_ratio"] = r.best_ratio;
    d["passed"] = r.passed;
    return d;
  }

  py::dict majorization(const std::vector<double>& points,
                        const std::vector<CVector>& vectors) const {
    const auto r = check_majorization(sg_, decomp_, make_function(points, vectors));
    py::dict d;
    d["sf"] = r.sf;
    d["sk"] = r.sk;
    d["slack"] = r.slack;
    d["passed"] = r.passed;
    return d;
  }

  py::dict translation(const std::vector<double>& points, const std::vector<CVector>& vectors,
                       double xi) const {
    const auto r =
        check_translation_bound(sg_, decomp_, make_function(points, vectors), xi, decomp_.beta);
    py::dict d;
    d["xi"] = r.xi;
    d["s0"] = r.s0;
    d["s_xi"] = r.s_xi;
    d["rho"] = r.rho;
    d["ratio"] = r.ratio;
    d["observed_exponent"] = r.observed_exponent;
    d["passed"] = r.passed;
    return d;
  }

 private:
  static py::dict form_dict(const FormEvaluation& e) {
    py::dict d;
    d["value"] = e.value;
    d["integral_route"] = e.integral_route;
    d["magnitude"] = e.magnitude;
    d["routes_agree"] = e.routes_agree;
    return d;
  }

  Semigroup sg_;
  GDecomposition decomp_;
};

py::dict dilation_dict(const DilationReport& r) {
  py::dict d;
  d["delta"] = r.delta;
  d["m"] = r.m;
  d["metric_path"] = r.metric_path;
  d["signature"] = py::make_tuple(r.signature.positive, r.signature.negative,
                                  r.signature.degenerate);
  d["max_compression_error"] = r.max_compression_error;
  d["max_transported_error"] = r.max_transported_error;
  d["gram_isometry_defect"] = r.gram_isometry_defect;
  d["quotient_isometry_defect"] = r.quotient_isometry_defect;
  d["regularity_defect"] = r.regularity_defect;
  d["gram_consistency"] = r.gram_consistency;
  d["embedding_positive"] = r.embedding_positive;
  py::list trace;
  for (const auto& row : r.signature_trace) {
    trace.append(py::make_tuple(row.m, row.signature.positive, row.signature.negative,
                                row.signature.degenerate));
  }
  d["signature_trace"] = trace;
  return d;
}

// The CLI commands take and return JSON text; the Python wrapper decodes it.
template <class Options, class Command>
std::pair<int, std::string> run_command(const std::string& model_json, const Options& opts,
                                        Command command) {
  const ModelFile model = parse_model(nlohmann::json::parse(model_json));
  cli::CommandResult result = command(model, opts);
  return {result.exit_code, result.report.dump()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sectorial semigroups, their Toeplitz majorants and Krein-space dilations";

  auto base = py::register_exception<Error>(m, "KreindilError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<NumericsError>(m, "NumericsError", base.ptr());
  py::register_exception<HypothesisError>(m, "HypothesisError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<RegularityError>(m, "RegularityError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());

  py::class_<OperatorSpec>(m, "Model")
      .def(py::init(&make_spec), py::arg("generator"), py::arg("metric") = std::nullopt)
      .def_readonly("generator", &OperatorSpec::generator)
      .def_readonly("metric", &OperatorSpec::metric)
      .def_property_readonly("dim", &OperatorSpec::dim)
      .def("semigroup", &semigroup, py::arg("t"))
      .def("resolvent", &resolvent, py::arg("lam"))
      .def("spectrum", &spectrum);

  m.def("expm", &expm, py::arg("matrix"));
  m.def("generate_instance", &generate_instance, py::arg("dim"), py::arg("theta"),
        py::arg("beta"), py::arg("metric") = false, py::arg("seed") = 0);
  m.def("dissipative_margin", &dissipative_margin, py::arg("model"), py::arg("beta"),
        py::arg("use_metric") = false);
  m.def(
      "find_beta",
      [](const OperatorSpec& spec, double theta, bool use_metric) -> std::optional<double> {
        const BetaSearch s = find_beta(spec, theta, use_metric);
        if (!s.feasible) return std::nullopt;
        return s.beta;
      },
      py::arg("model"), py::arg("theta"), py::arg("use_metric") = false,
      "Smallest admissible β, or None when the numerical range fits no sector of that angle.");

  py::class_<Kernel>(m, "Kernel")
      .def(py::init<const OperatorSpec&, double>(), py::arg("model"), py::arg("beta"))
      .def_property_readonly("beta", &Kernel::beta)
      .def_property_readonly("G", &Kernel::G)
      .def_property_readonly("J", &Kernel::J)
      .def_property_readonly("abs_G", &Kernel::abs_G)
      .def("f", &Kernel::f, py::arg("s"))
      .def("k", &Kernel::k, py::arg("s"), py::arg("t"))
      .def("s_f", &Kernel::s_f, py::arg("points"), py::arg("vectors"))
      .def("s_k", &Kernel::s_k, py::arg("points"), py::arg("vectors"))
      .def("majorization", &Kernel::majorization, py::arg("points"), py::arg("vectors"))
      .def("condition_iii", &Kernel::condition_iii, py::arg("points"), py::arg("vectors"))
      .def("translation", &Kernel::translation, py::arg("points"), py::arg("vectors"),
           py::arg("xi"));

  m.def(
      "dilate",
      [](const OperatorSpec& spec, double delta, int half_width, double cutoff, bool plain) {
        if (spec.metric && !plain) {
          return dilation_dict(dilate_with_metric(spec, delta, half_width, cutoff));
        }
        return dilation_dict(kreindil::dilate(Semigroup(spec), delta, half_width, cutoff));
      },
      py::arg("model"), py::arg("delta") = 0.25, py::arg("m") = 8,
      py::arg("cutoff") = kDegeneracyCutoff, py::arg("plain") = false);

  m.def(
      "_analyze",
      [](const std::string& model, std::optional<double> theta, std::optional<double> beta) {
        return run_command(model, cli::AnalyzeOptions{theta, beta}, &cli::cmd_analyze);
      },
      py::arg("model"), py::arg("theta") = std::nullopt, py::arg("beta") = std::nullopt);
  m.def(
      "_certify",
      [](const std::string& model, int trials, std::uint64_t seed, int max_points, int jobs,
         bool force) {
        cli::CertifyOptions opts;
        opts.trials = trials;
        opts.seed = seed;
        opts.max_points = max_points;
        opts.jobs = jobs;
        opts.force = force;
        py::gil_scoped_release release;
        return run_command(model, opts, &cli::cmd_certify);
      },
      py::arg("model"), py::arg("trials") = 100, py::arg("seed") = 0, py::arg("max_points") = 5,
      py::arg("jobs") = 1, py::arg("force") = false);
  m.def(
      "_dilate_report",
      [](const std::string& model, double delta, int half_width, bool plain, bool force) {
        cli::DilateOptions opts;
        opts.delta = delta;
        opts.m = half_width;
        opts.plain = plain;
        opts.force = force;
        return run_command(model, opts, &cli::cmd_dilate);
      },
      py::arg("model"), py::arg("delta") = 0.25, py::arg("m") = 8, py::arg("plain") = false,
      py::arg("force") = false);
}
