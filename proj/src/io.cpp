#include "segal/io.hpp"

#include <fstream>
#include <sstream>

namespace segal {

namespace {

json complex_pair(cd z) { return json::array({z.real(), z.imag()}); }

void line_column(const std::string& text, std::size_t byte, int& line, int& column) {
    line = 1;
    column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
}

double number_at(const json& a, std::size_t i, const char* what) {
    if (!a.is_array() || i >= a.size() || !a[i].is_number())
        throw ParseError(std::string("expected a number in ") + what, 0, 0);
    return a[i].get<double>();
}

}  // namespace

json series_to_json(const LaurentMap& f) {
    json coeffs = json::array();
    for (int n = f.n_min(); !f.empty() && n <= f.n_max(); ++n) {
        cd c = f.coeff(n);
        if (c != cd(0.0)) coeffs.push_back(json::array({n, c.real(), c.imag()}));
    }
    return {{"eps", f.eps()}, {"coeffs", coeffs}};
}

LaurentMap series_from_json(const json& j) {
    if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
        throw ParseError("series: expected an object with a \"coeffs\" array", 0, 0);
    double eps = j.value("eps", 0.0);
    std::vector<std::pair<int, cd>> terms;
    for (const json& t : j["coeffs"]) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer())
            throw ParseError("series: each coefficient must be [n, re, im] with integer n", 0, 0);
        int n = t[0].get<int>();
        terms.push_back({n + 1, cd(number_at(t, 1, "series"), number_at(t, 2, "series"))});
    }
    return LaurentMap::from_powers(terms, eps);
}

json boundary_field_to_json(const BoundaryField& phi) {
    json modes = json::array();
    for (cd m : phi.positive_modes()) modes.push_back(complex_pair(m));
    return {{"c", phi.c()}, {"modes", modes}};
}

BoundaryField boundary_field_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("boundary field: expected an object", 0, 0);
    std::vector<cd> modes;
    if (j.contains("modes"))
        for (const json& m : j["modes"]) modes.emplace_back(number_at(m, 0, "modes"), number_at(m, 1, "modes"));
    return BoundaryField(j.value("c", 0.0), modes);
}

json trajectory_to_json(const FlowTrajectory& tr) {
    json out = json::array();
    for (size_t i = 0; i < tr.times.size(); ++i) out.push_back({{"t", tr.times[i]}, {"series", series_to_json(tr.maps[i])}});
    return out;
}

json complex_matrix_to_json(const CMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(complex_pair(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

json dn_to_json(const DnOperator& d) {
    const char* kind = d.kind == DnKind::Disk ? "disk" : d.kind == DnKind::Annulus ? "annulus" : "interior_curve";
    return {{"kind", kind}, {"n_max", d.n_max}, {"circles", d.circles}, {"blocks", complex_matrix_to_json(d.blocks)}};
}

json operator_to_json(const FockSector& s, const CMat& m) {
    json labels = json::array();
    for (int i = 0; i < s.size(); ++i) labels.push_back(s.label(i));
    return {{"alpha", complex_pair(s.alpha())},
            {"gamma", s.params().gamma()},
            {"level_cap", s.level_cap()},
            {"basis", labels},
            {"entries", complex_matrix_to_json(m)}};
}

json kernel_data_to_json(const GaussianKernelData& kd) {
    json shift = json::array();
    for (int i = 0; i < kd.shift.size(); ++i) shift.push_back(complex_pair(kd.shift(i)));
    return {{"n_max", kd.n_max},
            {"mean_map", complex_matrix_to_json(kd.mean_map)},
            {"shift", shift},
            {"covariance", complex_matrix_to_json(kd.covariance)},
            {"smooth", complex_matrix_to_json(kd.smooth)},
            {"prefactor_exponent", kd.prefactor_exponent}};
}

json derivative_report_to_json(const DerivativeReport& rep) {
    json pts = json::array();
    for (size_t i = 0; i < rep.t.size(); ++i) pts.push_back(json::array({rep.t[i], rep.residual[i]}));
    return {{"residuals", pts}, {"extrapolated", rep.extrapolated}, {"slope", rep.slope}, {"best", rep.best()}};
}

json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 0, column = 0;
        line_column(text, e.byte, line, column);
        std::ostringstream os;
        os << source << ":" << line << ":" << column << ": " << e.what();
        throw ParseError(os.str(), line, column);
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0, 0);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

LaurentMap read_series_file(const std::string& path) {
    try {
        return series_from_json(read_json_file(path));
    } catch (const ParseError& e) {
        if (e.line() > 0) throw;
        throw ParseError(path + ": " + e.what(), e.line(), e.column());
    }
}

}  // namespace segal
