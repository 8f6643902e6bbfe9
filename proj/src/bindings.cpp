#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "segal/amplitude.hpp"
#include "segal/checks.hpp"
#include "segal/gmc.hpp"

namespace py = pybind11;
using namespace segal;

namespace {

CheckConfig config_from_dict(const py::dict& d) {
    json j = json::object();
    for (auto item : d) {
        std::string key = py::str(item.first);
        if (py::isinstance<py::int_>(item.second))
            j[key] = item.second.cast<long long>();
        else
            j[key] = item.second.cast<double>();
    }
    return config_from_json(j);
}

}  // namespace

PYBIND11_MODULE(_segal, m) {
    m.doc() = "Annulus propagators, Dirichlet-to-Neumann maps and Virasoro sectors";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<double, double, double>(), py::arg("gamma"), py::arg("mu") = 0.0, py::arg("p") = 0.0)
        .def_property_readonly("gamma", &ModelParams::gamma)
        .def_property_readonly("mu", &ModelParams::mu)
        .def_property_readonly("Q", &ModelParams::Q)
        .def_property_readonly("c_L", &ModelParams::c_L)
        .def_property_readonly("alpha", &ModelParams::alpha)
        .def_property_readonly("p", &ModelParams::p);

    py::class_<LaurentMap>(m, "LaurentMap")
        .def_static("from_powers", &LaurentMap::from_powers, py::arg("terms"), py::arg("eps") = 0.0)
        .def_static("monomial", &LaurentMap::monomial, py::arg("power"), py::arg("c"), py::arg("eps") = 0.0)
        .def("power", &LaurentMap::power)
        .def_property_readonly("min_power", &LaurentMap::min_power)
        .def_property_readonly("max_power", &LaurentMap::max_power)
        .def_property_readonly("eps", &LaurentMap::eps)
        .def("__call__", [](const LaurentMap& f, cd z) { return f(z); })
        .def("derivative", &LaurentMap::derivative)
        .def("to_json", [](const LaurentMap& f) { return series_to_json(f).dump(); })
        .def_static("from_json", [](const std::string& s) { return series_from_json(parse_json_text(s)); });

    m.def("compose", &compose, py::arg("f"), py::arg("g"), py::arg("trunc") = 40, py::arg("check_domain") = true);
    m.def("invert", &invert, py::arg("f"), py::arg("trunc") = 40);

    m.def("dn_annulus", [](const LaurentMap& f, int n_max, int nodes) { return dn_annulus(f, n_max, nodes).blocks; },
          py::arg("f"), py::arg("n_max") = 16, py::arg("nodes") = 512);

    m.def("sector_labels", [](const ModelParams& p, int level) {
        FockSector s(p, level);
        std::vector<std::string> out;
        for (int i = 0; i < s.size(); ++i) out.push_back(s.label(i));
        return out;
    });
    m.def("hamiltonian", [](const ModelParams& p, int level, const LaurentMap& v) {
        FockSector s(p, level);
        return hamiltonian_matrix(s, v, false);
    }, py::arg("params"), py::arg("level"), py::arg("v"));
    m.def("propagator", [](const LaurentMap& f, const ModelParams& p, int level, int nodes) {
        FockSector s(p, level);
        return propagator_matrix(f, s, nodes).matrix;
    }, py::arg("f"), py::arg("params"), py::arg("level"), py::arg("nodes") = 256);

    m.def("W_constant", [](const LaurentMap& f) { return W_constant(f); });
    m.def("C_f_constant", &C_f_constant, py::arg("f"), py::arg("c_L"), py::arg("nodes") = 512);

    m.def("mc_vacuum_element", [](const LaurentMap& f, const ModelParams& p, long n, std::uint64_t seed) {
        McEstimate e = mc_propagator_element(f, p, n, seed);
        py::dict d;
        d["n"] = e.n;
        d["estimate"] = e.estimate;
        d["std_error"] = e.std_error;
        d["ci95"] = py::make_tuple(e.ci_low, e.ci_high);
        return d;
    }, py::arg("f"), py::arg("params"), py::arg("n"), py::arg("seed") = 42);

    m.def("suite_names", &suite_names);
    m.def("_run_suite_json", [](const std::string& name, const py::dict& config) {
        return run_suite(name, config_from_dict(config)).to_json().dump();
    }, py::arg("name"), py::arg("config") = py::dict());
}
