#pragma once

#include <string>

#include <json.hpp>

#include "segal/flow.hpp"
#include "segal/fock.hpp"
#include "segal/potential.hpp"
#include "segal/propagator.hpp"
#include "segal/series.hpp"

namespace segal {

using json = nlohmann::json;

// Raised for malformed input documents; line and column are 1-based (0 when unknown).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error(what), line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

// {"eps": real, "coeffs": [[n, re, im], ...]} with n the stored index (coefficient of z^{n+1}).
json series_to_json(const LaurentMap& f);
LaurentMap series_from_json(const json& j);

// {"c": real, "modes": [[re, im], ...]} with modes phi_1, phi_2, ...
json boundary_field_to_json(const BoundaryField& phi);
BoundaryField boundary_field_from_json(const json& j);

json trajectory_to_json(const FlowTrajectory& tr);
json dn_to_json(const DnOperator& d);
json operator_to_json(const FockSector& s, const CMat& m);
json kernel_data_to_json(const GaussianKernelData& kd);
json derivative_report_to_json(const DerivativeReport& rep);
json complex_matrix_to_json(const CMat& m);

json parse_json_text(const std::string& text, const std::string& source = "<input>");
json read_json_file(const std::string& path);
LaurentMap read_series_file(const std::string& path);

}  // namespace segal
