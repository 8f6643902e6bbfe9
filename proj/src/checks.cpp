#include "segal/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Core>

#include "segal/amplitude.hpp"
#include "segal/gmc.hpp"
#include "segal/quadrature.hpp"

namespace segal {

namespace {

constexpr const char* kLibraryVersion = "0.1.0";

int pick(int value, int fallback) { return value > 0 ? value : fallback; }

ModelParams exact_params(const CheckConfig& c) { return ModelParams(c.gamma, 0.0, c.alpha_p); }

LaurentMap random_cubic(std::mt19937_64& rng, double r, double spread) {
    std::uniform_real_distribution<double> u(-spread, spread);
    return LaurentMap::from_powers({{1, r}, {2, cd(u(rng), u(rng))}, {3, cd(u(rng), u(rng))}});
}

BoundaryField random_field(std::mt19937_64& rng, int degree) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<cd> m(degree);
    for (auto& x : m) x = cd(u(rng), u(rng)) * 0.5;
    return BoundaryField(u(rng), m);
}

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

double window_max(const FockSector& s, const SpMat& m, int L) {
    double best = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
            if (s.level(int(it.row())) <= L && s.level(int(it.col())) <= L) {
                double scale = std::sqrt(s.gram()[it.row()] / s.gram()[it.col()]);
                best = std::max(best, std::abs(it.value()) * scale);
            }
    return best;
}

double window_diff(const FockSector& s, const CMat& a, const CMat& b, int L) {
    auto w = s.window(L);
    return max_abs(restrict_to(to_orthonormal(s, CMat(a - b)), w, w));
}

std::string label_of(const char* stem, int i) { return std::string(stem) + "_" + (i < 10 ? "0" : "") + std::to_string(i); }

}  // namespace

json config_to_json(const CheckConfig& c) {
    return {{"gamma", c.gamma}, {"mu", c.mu},       {"alpha_p", c.alpha_p}, {"level", c.level},
            {"nodes", c.nodes}, {"trunc", c.trunc}, {"seed", c.seed},       {"samples", c.samples}};
}

CheckConfig config_from_json(const json& j, CheckConfig base) {
    if (!j.is_object()) throw ParseError("config: expected a JSON object", 0, 0);
    static const std::vector<std::string> known{"gamma", "mu", "alpha_p", "level", "nodes", "trunc", "seed", "samples"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ParseError("config: unknown key \"" + it.key() + "\"", 0, 0);
        if (!it->is_number()) throw ParseError("config: \"" + it.key() + "\" must be a number", 0, 0);
    }
    base.gamma = j.value("gamma", base.gamma);
    base.mu = j.value("mu", base.mu);
    base.alpha_p = j.value("alpha_p", base.alpha_p);
    base.level = j.value("level", base.level);
    base.nodes = j.value("nodes", base.nodes);
    base.trunc = j.value("trunc", base.trunc);
    base.seed = j.value("seed", base.seed);
    base.samples = j.value("samples", base.samples);
    return base;
}

CheckCase make_case(std::string name, double residual, double tolerance, json details) {
    CheckCase c;
    c.name = std::move(name);
    c.residual = residual;
    c.tolerance = tolerance;
    c.pass = std::isfinite(residual) && residual <= tolerance;
    c.details = std::move(details);
    return c;
}

std::vector<CheckCase> check_virasoro_algebra(const CheckConfig& c) {
    ModelParams p = exact_params(c);
    const int N = pick(c.level, 10);
    FockSector s(p, N);
    std::vector<CheckCase> out;
    for (bool tilde : {false, true}) {
        std::vector<SpMat> L;
        for (int n = -8; n <= 8; ++n) L.push_back(virasoro_free_sparse(s, n, tilde));
        auto at = [&](int n) -> const SpMat& { return L[n + 8]; };
        SpMat id(s.size(), s.size());
        id.setIdentity();
        for (int n = -4; n <= 4; ++n)
            for (int m = -4; m <= 4; ++m) {
                SpMat comm = SpMat(at(n) * at(m)) - SpMat(at(m) * at(n));
                comm -= double(n - m) * at(n + m);
                if (n == -m) comm -= (p.c_L() / 12.0) * double(n * n * n - n) * id;
                int window = N - std::max(0, -n) - std::max(0, -m);
                std::string name = std::string(tilde ? "antiholomorphic" : "holomorphic") + "_n" + std::to_string(n) +
                                   "_m" + std::to_string(m);
                out.push_back(make_case(name, window_max(s, comm, window), 1e-9, {{"window", window}}));
            }
    }
    return out;
}

std::vector<CheckCase> check_primary_eigenvalue(const CheckConfig& c) {
    ModelParams p = exact_params(c);
    FockSector s(p, pick(c.level, 10));
    SpMat h = virasoro_free_sparse(s, 0, false) + virasoro_free_sparse(s, 0, true);
    CVec vac = CVec::Zero(s.size());
    vac(0) = 1.0;
    CVec hv = h * vac;
    double expect = 0.5 * (p.Q() * p.Q() + c.alpha_p * c.alpha_p);
    hv(0) -= expect;
    return {make_case("vacuum_eigenvalue", hv.cwiseAbs().maxCoeff(), 1e-12,
                      {{"expected", expect}, {"Q", p.Q()}, {"c_L", p.c_L()}})};
}

std::vector<CheckCase> check_dn_closed_forms(const CheckConfig& c) {
    const int nodes = pick(c.nodes, 512);
    const int K = 16;
    std::vector<CheckCase> out;
    for (double q : {0.3, 0.5, 0.8}) {
        auto d = dn_annulus(LaurentMap::monomial(1, q), K, nodes);
        double L = std::log(1 / q), err = 0.0;
        for (int n = -K; n <= K; ++n) {
            int a = std::abs(n);
            double diag = a == 0 ? 1.0 / L : a / std::tanh(a * L);
            double off = a == 0 ? -1.0 / L : -a / std::sinh(a * L);
            err = std::max(err, std::abs(d.blocks(d.offset(0, n), d.offset(0, n)) - diag));
            err = std::max(err, std::abs(d.blocks(d.offset(1, n), d.offset(1, n)) - diag));
            err = std::max(err, std::abs(d.blocks(d.offset(0, n), d.offset(1, n)) - off));
            err = std::max(err, std::abs(d.blocks(d.offset(1, n), d.offset(0, n)) - off));
        }
        char name[32];
        std::snprintf(name, sizeof name, "concentric_q%.1f", q);
        out.push_back(make_case(name, err, 1e-9, {{"q", q}, {"modes", K}, {"nodes", nodes}}));
    }

    // Energy of an explicit harmonic function on the annulus against the DN quadratic form of its traces.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 2; ++t) {
        auto f = random_cubic(rng, 0.5, 0.03);
        double b = 0.5 * u(rng);
        std::vector<cd> a(3), cm(3);
        for (int k = 0; k < 3; ++k) {
            a[k] = 0.5 * cd(u(rng), u(rng));
            cm[k] = 0.05 * std::pow(0.5, k) * cd(u(rng), u(rng));
        }
        auto value = [&](cd x) {
            cd F = b * std::log(x);
            for (int k = 1; k <= 3; ++k) F += a[k - 1] * std::pow(x, k) + cm[k - 1] * std::pow(x, -k);
            return F.real();
        };
        auto grad = [&](cd x) {
            cd d = b / x;
            for (int k = 1; k <= 3; ++k) d += double(k) * (a[k - 1] * std::pow(x, k - 1) - cm[k - 1] * std::pow(x, -k - 1));
            return d;
        };
        const int M = 32;
        auto zs = circle_points(nodes);
        std::vector<double> s1(nodes), s2(nodes);
        for (int j = 0; j < nodes; ++j) {
            s1[j] = value(zs[j]);
            s2[j] = value(f(zs[j]));
        }
        auto d = dn_annulus(f, M, nodes);
        CVec both(2 * d.width());
        both << BoundaryField::from_samples(s1, M).mode_vector(M), BoundaryField::from_samples(s2, M).mode_vector(M);
        double form = d.quadratic_form(both).real();
        AnnulusGrid g = annulus_grid(f, 16, 8, nodes);
        double energy = 0.0;
        for (size_t i = 0; i < g.x.size(); ++i) energy += std::norm(grad(g.x[i])) * g.w[i];
        energy /= 2 * kPi;
        out.push_back(make_case(label_of("green_energy", t), std::abs(form - energy), 1e-6,
                                {{"form", form}, {"energy", energy}, {"series", series_to_json(f)}}));
    }
    return out;
}

std::vector<CheckCase> check_colin(const CheckConfig& c) {
    const int nodes = pick(c.nodes, 512);
    std::mt19937_64 rng(8);
    std::vector<CheckCase> out;
    for (int t = 0; t < 20; ++t) {
        auto f = random_cubic(rng, 0.7, 0.04);
        auto r = colin_identities(f, random_field(rng, 3), random_field(rng, 3), nodes);
        json details = {{"quadratic", r.quadratic}, {"linear", r.linear}, {"series", series_to_json(f)}};
        out.push_back(make_case(label_of("random", t), std::max(r.quadratic, r.linear), 1e-6, details));
    }
    return out;
}

std::vector<CheckCase> check_kernel_consistency(const CheckConfig& c) {
    ModelParams p = exact_params(c);
    FockSector s(p, pick(c.level, 6));
    const int nodes = pick(c.nodes, 64);
    CMat H = hamiltonian(s, LaurentMap::monomial(1, -1.0), false).matrix;
    std::vector<CheckCase> out;
    for (double t : {0.2, 0.5, 1.0}) {
        auto f = LaurentMap::monomial(1, std::exp(-t));
        CMat E = expm_neg(H, t);
        CMat T = propagator_matrix(f, s, nodes).matrix;
        char name[48];
        std::snprintf(name, sizeof name, "exponential_t%.1f", t);
        out.push_back(make_case(name, max_abs(to_orthonormal(s, CMat(T - E))), 1e-8, {{"t", t}}));
        Amplitude A = amplitude_operator(f, s, {}, nodes);
        CMat scaled = (std::exp(-t * p.c_L() / 12.0) / (std::sqrt(2.0) * kPi)) * A.op.matrix;
        std::snprintf(name, sizeof name, "normalization_t%.1f", t);
        out.push_back(make_case(name, max_abs(to_orthonormal(s, CMat(scaled - E))), 1e-8, {{"t", t}, {"W", A.W}}));
    }
    return out;
}

std::vector<CheckCase> check_semigroup(const CheckConfig& c) {
    FockSector s(exact_params(c), pick(c.level, 8));
    const int N = s.level_cap(), nodes = pick(c.nodes, 256);
    std::mt19937_64 rng(2);
    std::vector<CheckCase> out;
    for (int t = 0; t < 10; ++t) {
        auto f = random_cubic(rng, 0.8, 0.04), g = random_cubic(rng, 0.8, 0.04);
        CMat lhs = propagator_matrix(f, s, nodes).matrix * propagator_matrix(g, s, nodes).matrix;
        CMat rhs = propagator_matrix(compose(f, g, c.trunc), s, nodes).matrix;
        out.push_back(make_case(label_of("pair", t), window_diff(s, lhs, rhs, N - 4), 1e-6,
                                {{"window", N - 4}, {"f", series_to_json(f)}, {"g", series_to_json(g)}}));
    }
    return out;
}

std::vector<CheckCase> check_differentiability(const CheckConfig& c) {
    FockSector s(exact_params(c), pick(c.level, 5));
    const int nodes = pick(c.nodes, 256);
    const std::vector<double> ts{1e-2, 5e-3, 2.5e-3};
    std::vector<std::pair<LaurentMap, LaurentMap>> pairs;
    for (int n = 0; n <= 3; ++n) pairs.emplace_back(LaurentMap::monomial(1, 0.7), LaurentMap::monomial(n + 1, 0.05));
    std::mt19937_64 rng(6);
    pairs.emplace_back(random_cubic(rng, 0.7, 0.04), LaurentMap::from_powers({{1, -0.7}, {3, 0.05}}));
    pairs.emplace_back(random_cubic(rng, 0.7, 0.04), LaurentMap::from_powers({{2, cd(0.02, 0.01)}, {4, -0.03}}));
    std::vector<CheckCase> out;
    for (size_t i = 0; i < pairs.size(); ++i) {
        auto rep = derivative_check(pairs[i].first, pairs[i].second, s, ts, nodes);
        json details = derivative_report_to_json(rep);
        details["f"] = series_to_json(pairs[i].first);
        details["v"] = series_to_json(pairs[i].second);
        std::string name = i < 4 ? "pure_mode_n" + std::to_string(i) : label_of("mixed", int(i) - 4);
        out.push_back(make_case(name, rep.best(), 1e-5, details));
    }
    return out;
}

std::vector<CheckCase> check_annulus_derivative(const CheckConfig& c) {
    FockSector s(exact_params(c), pick(c.level, 6));
    const int nodes = pick(c.nodes, 256);
    std::vector<CheckCase> out;
    for (int n : {-1, 0, 1}) {
        auto rep = annulus_derivative_check(0.6, LaurentMap::monomial(n + 1, 1.0), s, {1e-2, 5e-3, 2.5e-3, 1.25e-3}, nodes);
        json details = derivative_report_to_json(rep.fd);
        details["relative"] = rep.relative;
        details["action_derivative"] = rep.action_derivative;
        std::string tag = "mode_n" + std::string(n < 0 ? "m" : "") + std::to_string(std::abs(n));
        out.push_back(make_case(tag + "_relative", rep.relative_extrapolated, 1e-3, details));
        double slope = rep.fd.slope.back();
        out.push_back(make_case(tag + "_slope", std::abs(slope - 1.0), 0.2, {{"slope", slope}}));
    }
    return out;
}

std::vector<CheckCase> check_metric_independence(const CheckConfig& c) {
    ModelParams p = exact_params(c);
    FockSector s(p, pick(c.level, 4));
    const int nodes = pick(c.nodes, 256);
    std::vector<LaurentMap> maps{LaurentMap::from_powers({{1, 0.7}, {2, cd(0.03, 0.01)}, {3, -0.02}}),
                                 LaurentMap::from_powers({{1, 0.8}, {2, 0.02}})};
    std::mt19937_64 rng(14);
    while (maps.size() < 5) maps.push_back(random_cubic(rng, 0.7, 0.04));
    CutoffSpec a, b;
    b.profile = CutoffProfile::B;
    std::vector<CheckCase> out;
    for (size_t i = 0; i < maps.size(); ++i) {
        double S = metric_change_action(maps[i], CutoffProfile::A, CutoffProfile::B);
        Amplitude Aa = amplitude_operator(maps[i], s, a, nodes), Ab = amplitude_operator(maps[i], s, b, nodes);
        double res = max_abs(CMat(std::exp(-p.c_L() * S) * Ab.op.matrix - Aa.op.matrix)) / max_abs(Aa.op.matrix);
        out.push_back(make_case(label_of("map", int(i)), res, 1e-6,
                                {{"action", S}, {"W_A", Aa.W}, {"W_B", Ab.W}, {"series", series_to_json(maps[i])}}));
    }
    return out;
}

std::vector<CheckCase> check_time_ordered(const CheckConfig& c) {
    FockSector s(exact_params(c), pick(c.level, 4));
    auto f = LaurentMap::monomial(1, 0.9);
    auto v = LaurentMap::from_powers({{1, -0.45}, {2, 0.005}});
    const double t = 0.5;
    CMat exact = propagator_matrix(exact_nonautonomous_map(f, v, t, 24), s).matrix;
    std::vector<int> pieces{16, 32, 64, 128};
    std::vector<double> defect, slopes;
    for (int n : pieces)
        defect.push_back(max_abs(to_orthonormal(s, CMat(time_ordered_propagator(f, v, s, t, n, false).matrix - exact))));
    double worst = 0.0;
    for (size_t i = 1; i < defect.size(); ++i) {
        slopes.push_back(std::log2(defect[i - 1] / defect[i]));
        worst = std::max(worst, std::abs(slopes.back() - 1.0));
    }
    return {make_case("first_order_slope", worst, 0.2, {{"pieces", pieces}, {"defect", defect}, {"slopes", slopes}})};
}

std::vector<CheckCase> check_gluing(const CheckConfig& c) {
    FockSector s(exact_params(c), pick(c.level, 8));
    std::vector<CheckCase> out;
    auto rep = gluing_check(LaurentMap::monomial(1, 0.7), LaurentMap::monomial(1, 0.8), s, c.trunc);
    out.push_back(make_case("gluing_concentric", rep.residual, 1e-9, {{"cocycle", rep.cocycle}}));
    std::mt19937_64 rng(13);
    for (int t = 0; t < 2; ++t) {
        auto r = gluing_check(random_cubic(rng, 0.8, 0.03), random_cubic(rng, 0.8, 0.03), s, c.trunc);
        json details = {{"cocycle", r.cocycle}, {"log_vacuum_ratio", r.log_vacuum_ratio}};
        out.push_back(make_case(label_of("gluing_cubic", t), r.residual, 1e-5, details));
        out.push_back(make_case(label_of("gluing_scalar", t), std::abs(r.log_vacuum_ratio - r.cocycle), 1e-6, details));
    }
    return out;
}

namespace {

std::vector<LaurentMap> mc_maps() {
    return {LaurentMap::monomial(1, 0.8), LaurentMap::from_powers({{1, 0.8}, {2, 0.03}, {3, cd(0.0, 0.01)}}),
            LaurentMap::from_powers({{1, 0.85}, {2, 0.02}})};
}

double exact_vacuum(const LaurentMap& f, const ModelParams& p) {
    FockSector s(p.with_mu(0.0), 0);
    return propagator_matrix(f, s, 64).matrix(0, 0).real();
}

json estimate_json(const McEstimate& e) {
    return {{"n", e.n},
            {"estimate", e.estimate},
            {"std_error", e.std_error},
            {"ci95", json::array({e.ci_low, e.ci_high})},
            {"batch_std_error", e.batch_std_error}};
}

}  // namespace

std::vector<CheckCase> check_monte_carlo(const CheckConfig& c) {
    ModelParams p0(c.gamma, 0.0, c.alpha_p);
    std::vector<CheckCase> out;
    auto maps = mc_maps();
    for (size_t i = 0; i < maps.size(); ++i) {
        auto e = mc_propagator_element(maps[i], p0, c.samples, c.seed + i);
        double exact = exact_vacuum(maps[i], p0);
        json details = estimate_json(e);
        details["exact"] = exact;
        details["series"] = series_to_json(maps[i]);
        out.push_back(make_case(label_of("control", int(i)), std::abs(e.estimate - exact) / e.std_error, 3.0, details));
    }

    double mu = c.mu > 0 ? c.mu : 1.0;
    ModelParams pm(c.gamma, mu, c.alpha_p);
    long n_mu = std::min<long>(c.samples, 8192);
    auto e = mc_propagator_element(maps[0], pm, n_mu, c.seed + 100);
    double exact = exact_vacuum(maps[0], p0);
    json details = estimate_json(e);
    details["mu"] = mu;
    details["zero_coupling_value"] = exact;
    out.push_back(make_case("monotonicity", (e.estimate - exact) / e.std_error, -3.0, details));

    auto r1 = mc_propagator_element(maps[1], pm, 2048, c.seed + 200);
    auto r2 = mc_propagator_element(maps[1], pm, 2048, c.seed + 200);
    bool same = estimate_json(r1).dump() == estimate_json(r2).dump();
    out.push_back(make_case("reproducibility", same ? 0.0 : 1.0, 0.0,
                            {{"first", estimate_json(r1)}, {"second", estimate_json(r2)}}));
    return out;
}

std::vector<CheckCase> check_monte_carlo_composition(const CheckConfig& c) {
    ModelParams p(c.gamma, 0.0, c.alpha_p);
    auto f = LaurentMap::from_powers({{1, 0.85}, {2, 0.02}}), g = LaurentMap::from_powers({{1, 0.9}, {3, -0.01}});
    auto ef = mc_propagator_element(f, p, c.samples, c.seed + 300);
    auto eg = mc_propagator_element(g, p, c.samples, c.seed + 301);
    auto efg = mc_propagator_element(compose(f, g, c.trunc), p, c.samples, c.seed + 302);
    double prod = ef.estimate * eg.estimate;
    double sigma = std::hypot(efg.std_error, std::hypot(ef.std_error * eg.estimate, eg.std_error * ef.estimate));
    return {make_case("composition", std::abs(efg.estimate - prod) / sigma, 3.0,
                      {{"f", estimate_json(ef)}, {"g", estimate_json(eg)}, {"fg", estimate_json(efg)}, {"product", prod}})};
}

bool Report::pass() const {
    return std::all_of(cases.begin(), cases.end(), [](const CheckCase& k) { return k.pass; });
}

json Report::to_json() const {
    ModelParams p(config.gamma, config.mu, config.alpha_p);
    json params = config_to_json(config);
    params["Q"] = p.Q();
    params["c_L"] = p.c_L();
    params["alpha"] = complex_json(p.alpha());
    json list = json::array();
    for (const CheckCase& k : cases)
        list.push_back({{"name", k.name},
                        {"residual", k.residual},
                        {"tolerance", k.tolerance},
                        {"pass", k.pass},
                        {"details", k.details}});
    json versions = {{"segal", kLibraryVersion},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                     {"compiler", __VERSION__}};
    return {{"schema_version", kSchemaVersion},
            {"suite", suite},
            {"params", params},
            {"cases", list},
            {"pass", pass()},
            {"versions", versions},
            {"seed", config.seed}};
}

std::vector<std::string> suite_names() { return {"virasoro", "dn", "propagator", "derivative", "amplitude", "mc"}; }

Report run_suite(const std::string& name, const CheckConfig& c) {
    using Battery = std::vector<CheckCase> (*)(const CheckConfig&);
    std::vector<std::pair<std::string, Battery>> batteries;
    if (name == "virasoro") {
        batteries = {{"algebra", check_virasoro_algebra}, {"primary", check_primary_eigenvalue}};
    } else if (name == "dn") {
        batteries = {{"closed_form", check_dn_closed_forms}, {"colin", check_colin}};
    } else if (name == "propagator") {
        batteries = {{"kernel", check_kernel_consistency}, {"semigroup", check_semigroup}, {"time_ordered", check_time_ordered}};
    } else if (name == "derivative") {
        batteries = {{"holomorphic", check_differentiability}};
    } else if (name == "amplitude") {
        batteries = {{"annulus_derivative", check_annulus_derivative},
                     {"metric", check_metric_independence},
                     {"gluing", check_gluing}};
    } else if (name == "mc") {
        batteries = {{"gates", check_monte_carlo}, {"composition", check_monte_carlo_composition}};
    } else {
        throw std::invalid_argument("unknown suite: " + name);
    }
    Report r;
    r.suite = name;
    r.config = c;
    for (auto& [prefix, run] : batteries)
        for (CheckCase& k : run(c)) {
            k.name = prefix + "/" + k.name;
            r.cases.push_back(std::move(k));
        }
    std::sort(r.cases.begin(), r.cases.end(), [](const CheckCase& a, const CheckCase& b) { return a.name < b.name; });
    return r;
}

}  // namespace segal
