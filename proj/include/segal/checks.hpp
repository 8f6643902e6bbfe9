#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "segal/io.hpp"

namespace segal {

// Shared knobs of the verification batteries. Zero for level or nodes selects each battery's default.
struct CheckConfig {
    double gamma = 1.2;
    double mu = 0.0;
    double alpha_p = 0.7;
    int level = 0;
    int nodes = 0;
    int trunc = 40;
    std::uint64_t seed = 42;
    long samples = 100000;
};

json config_to_json(const CheckConfig& c);
// Keys present in j override the fields of base.
CheckConfig config_from_json(const json& j, CheckConfig base = {});

struct CheckCase {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    json details = json::object();
};

CheckCase make_case(std::string name, double residual, double tolerance, json details = json::object());

std::vector<CheckCase> check_virasoro_algebra(const CheckConfig& c);
std::vector<CheckCase> check_primary_eigenvalue(const CheckConfig& c);
std::vector<CheckCase> check_dn_closed_forms(const CheckConfig& c);
std::vector<CheckCase> check_colin(const CheckConfig& c);
std::vector<CheckCase> check_kernel_consistency(const CheckConfig& c);
std::vector<CheckCase> check_semigroup(const CheckConfig& c);
std::vector<CheckCase> check_differentiability(const CheckConfig& c);
std::vector<CheckCase> check_annulus_derivative(const CheckConfig& c);
std::vector<CheckCase> check_metric_independence(const CheckConfig& c);
std::vector<CheckCase> check_time_ordered(const CheckConfig& c);
std::vector<CheckCase> check_gluing(const CheckConfig& c);
std::vector<CheckCase> check_monte_carlo(const CheckConfig& c);
std::vector<CheckCase> check_monte_carlo_composition(const CheckConfig& c);

struct Report {
    static constexpr int kSchemaVersion = 1;
    std::string suite;
    CheckConfig config;
    std::vector<CheckCase> cases;
    bool pass() const;
    json to_json() const;
};

std::vector<std::string> suite_names();
// Throws std::invalid_argument for an unknown suite name.
Report run_suite(const std::string& name, const CheckConfig& c);

}  // namespace segal
