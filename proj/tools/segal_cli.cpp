#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "segal/amplitude.hpp"
#include "segal/checks.hpp"

using namespace segal;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

struct Flags {
    std::optional<int> trunc, level, nodes, modes;
    std::optional<double> gamma, mu, alpha_p;
    std::optional<std::uint64_t> seed;
    std::optional<long> samples;
    std::string config, out, series, phi1, phi2;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--trunc", f.trunc, "series truncation order");
    cmd->add_option("--level", f.level, "Fock level cap");
    cmd->add_option("--gamma", f.gamma, "coupling gamma in (0, 2)");
    cmd->add_option("--mu", f.mu, "cosmological constant mu >= 0");
    cmd->add_option("--alpha-p", f.alpha_p, "momentum p of alpha = Q + ip");
    cmd->add_option("--nodes", f.nodes, "boundary quadrature nodes");
    cmd->add_option("--seed", f.seed, "Monte Carlo seed");
    cmd->add_option("--samples", f.samples, "Monte Carlo sample count");
    cmd->add_option("--config", f.config, "JSON configuration; explicit flags take precedence");
    cmd->add_option("--out", f.out, "write JSON here instead of standard output");
}

CheckConfig resolve(const Flags& f) {
    CheckConfig c;
    if (!f.config.empty()) c = config_from_json(read_json_file(f.config));
    if (f.trunc) c.trunc = *f.trunc;
    if (f.level) c.level = *f.level;
    if (f.gamma) c.gamma = *f.gamma;
    if (f.mu) c.mu = *f.mu;
    if (f.alpha_p) c.alpha_p = *f.alpha_p;
    if (f.nodes) c.nodes = *f.nodes;
    if (f.seed) c.seed = *f.seed;
    if (f.samples) c.samples = *f.samples;
    if (!(c.gamma > 0 && c.gamma < 2)) throw CLI::ValidationError("--gamma", "must lie in (0, 2)");
    if (c.mu < 0) throw CLI::ValidationError("--mu", "must be non-negative");
    if (c.trunc < 1 || c.level < 0 || c.nodes < 0 || c.samples < 1)
        throw CLI::ValidationError("config", "trunc, level, nodes and samples must be positive");
    return c;
}

void emit(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << j.dump(2) << "\n";
}

json compute(const std::string& object, const Flags& flags, const CheckConfig& c) {
    if (flags.series.empty()) throw CLI::RequiredError("--series");
    LaurentMap f = read_series_file(flags.series);
    int nodes = c.nodes > 0 ? c.nodes : 256;
    int modes = flags.modes.value_or(16);
    ModelParams p(c.gamma, 0.0, c.alpha_p);
    json inputs = {{"series", series_to_json(f)}, {"series_path", flags.series}};
    json result;
    if (object == "dn") {
        result = dn_to_json(dn_annulus(f, modes, nodes));
    } else if (object == "kernel-data") {
        result = kernel_data_to_json(kernel_data(f, p.Q(), modes, nodes));
    } else if (object == "propagator") {
        FockSector s(p, c.level > 0 ? c.level : 4);
        result = operator_to_json(s, propagator_matrix(f, s, nodes).matrix);
    } else if (object == "W") {
        result = {{"W", W_constant(f)}, {"C_f", C_f_constant(f, p.c_L(), nodes)}};
    } else {
        if (flags.phi1.empty() || flags.phi2.empty()) throw CLI::RequiredError("--phi1 and --phi2");
        BoundaryField phi1 = boundary_field_from_json(read_json_file(flags.phi1));
        BoundaryField phi2 = boundary_field_from_json(read_json_file(flags.phi2));
        inputs["phi1"] = boundary_field_to_json(phi1);
        inputs["phi2"] = boundary_field_to_json(phi2);
        result = {{"free_field_kernel", free_field_kernel(f, phi1, phi2, modes, nodes)},
                  {"W", W_constant(f)},
                  {"C_f", C_f_constant(f, p.c_L(), nodes)}};
    }
    json params = config_to_json(c);
    params["Q"] = p.Q();
    params["c_L"] = p.c_L();
    params["modes"] = modes;
    params["nodes_used"] = nodes;
    return {{"object", object}, {"inputs", inputs}, {"params", params}, {"result", result}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Segal annulus semigroup toolkit"};
    app.require_subcommand(1);
    Flags flags;
    std::string suite, object;

    auto* check = app.add_subcommand("check", "run a verification suite and print its report");
    check->add_option("suite", suite, "suite name")->required()->check(
        CLI::IsMember({"virasoro", "dn", "propagator", "derivative", "amplitude", "mc"}));
    add_common(check, flags);

    auto* comp = app.add_subcommand("compute", "compute one object from input files");
    comp->add_option("object", object, "object name")->required()->check(
        CLI::IsMember({"dn", "kernel-data", "propagator", "W", "amplitude-kernel"}));
    comp->add_option("--series", flags.series, "series file {\"eps\", \"coeffs\": [[n, re, im], ...]}");
    comp->add_option("--phi1", flags.phi1, "boundary field file for the outer circle");
    comp->add_option("--phi2", flags.phi2, "boundary field file for the inner curve");
    comp->add_option("--modes", flags.modes, "Fourier modes kept per boundary component");
    add_common(comp, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        CheckConfig c = resolve(flags);
        if (*check) {
            Report r = run_suite(suite, c);
            emit(r.to_json(), flags.out);
            return r.pass() ? 0 : kExitFail;
        }
        emit(compute(object, flags, c), flags.out);
        return 0;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << " at (" << e.point().real() << ", " << e.point().imag() << ")\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
}
