#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sqwell/error.hpp"
#include "sqwell/verify.hpp"

namespace py = pybind11;
using namespace sqwell;

namespace {

py::dict level_dict(const LevelSolution& l) {
    py::dict d;
    d["n"] = l.n;
    d["s"] = l.s;
    d["t"] = l.t;
    d["eps"] = l.eps;
    d["E"] = l.E;
    d["residual"] = l.residual;
    d["branch"] = std::string(to_string(l.branch));
    d["sublabel"] = static_cast<int>(l.sublabel);
    d["non_diagonalizable"] = l.non_diagonalizable;
    return d;
}

MetricWeights weights_or_uniform(int levels, const std::optional<std::vector<double>>& plus,
                                 const std::optional<std::vector<double>>& minus) {
    if (!plus && !minus) return MetricWeights::uniform(levels);
    return {plus.value_or(std::vector<double>(levels, 1.0)), minus.value_or(std::vector<double>(levels, 1.0))};
}

}  // namespace

PYBIND11_MODULE(_sqwell, m) {
    m.doc() = "Two-channel pseudo-Hermitian square well";

    static py::exception<Error> error_type(m, "SqwellError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::handle(error_type.ptr())(e.what());
            exc.attr("code") = to_string(e.code());
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def("residual", &residual, py::arg("s"), py::arg("c"));

    m.def(
        "solve_level",
        [](int n, double y, double z, double tol) { return level_dict(solve_level(n, {y, z}, tol)); },
        py::arg("n"), py::arg("Y"), py::arg("Z"), py::arg("tol") = kDefaultRootTol);

    m.def(
        "spectrum",
        [](double y, double z, int levels, double tol) {
            const Spectrum sp = spectrum({y, z}, levels - 1, tol);
            py::list out;
            for (const LevelSolution& l : sp.levels) out.append(level_dict(l));
            py::dict d;
            d["levels"] = out;
            d["truncated"] = sp.truncated;
            d["lost_level"] = sp.lost_level;
            return d;
        },
        py::arg("Y"), py::arg("Z"), py::arg("levels"), py::arg("tol") = kDefaultRootTol);

    m.def(
        "perturbative_eps", [](int n, double y, double z, int order) { return perturbative_eps(n, {y, z}, order); },
        py::arg("n"), py::arg("Y"), py::arg("Z"), py::arg("order") = 2);

    m.def(
        "critical_coupling",
        [](int pair, double tol) {
            const CriticalResult r = critical_coupling(pair, tol);
            py::dict d;
            d["pair_index"] = r.pair_index;
            d["c_crit"] = r.c_crit;
            d["bracket_width"] = r.bracket_width;
            d["evaluations"] = r.evaluations;
            return d;
        },
        py::arg("pair") = 0, py::arg("tol") = kDefaultCriticalTol);

    m.def(
        "oracle_eigenvalues",
        [](double y, double z, int grid) {
            const std::vector<cplx> ev = eigenvalues(build_hamiltonian({y, z}, GridSpec(grid)));
            return Eigen::VectorXcd(Eigen::Map<const Eigen::VectorXcd>(ev.data(), static_cast<Eigen::Index>(ev.size())));
        },
        py::arg("Y"), py::arg("Z"), py::arg("grid") = 512, py::call_guard<py::gil_scoped_release>());

    m.def(
        "theta_metric",
        [](double y, double z, int levels, std::optional<std::vector<double>> plus,
           std::optional<std::vector<double>> minus, bool unsafe) {
            const ModeBasis basis = build_mode_basis({y, z}, levels);
            return build_theta_metric(basis, weights_or_uniform(levels, plus, minus), BasisSpec::mode(), unsafe).entries;
        },
        py::arg("Y"), py::arg("Z"), py::arg("levels"), py::arg("s_plus") = py::none(), py::arg("s_minus") = py::none(),
        py::arg("unsafe") = false);

    m.def(
        "biorthogonality_matrix",
        [](double y, double z, int levels) {
            const ModeBasis basis = build_mode_basis({y, z}, levels);
            return biorthogonality_matrix(basis.states, basis.left);
        },
        py::arg("Y"), py::arg("Z"), py::arg("levels"));

    m.def(
        "invariant_suite",
        [](double y, double z, int levels, int grid) {
            SuiteConfig cfg;
            cfg.coupling = {y, z};
            cfg.levels = levels;
            cfg.grid = grid;
            py::list out;
            for (const CheckResult& r : invariant_suite(cfg)) {
                py::dict d;
                d["name"] = r.name;
                d["value"] = r.value;
                d["threshold"] = r.threshold;
                d["passed"] = r.passed;
                d["skipped"] = r.skipped;
                d["note"] = r.note;
                out.append(d);
            }
            return out;
        },
        py::arg("Y") = 1.0, py::arg("Z") = 1.0, py::arg("levels") = 6, py::arg("grid") = 512);
}
