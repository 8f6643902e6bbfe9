#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "segal/checks.hpp"

using namespace segal;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::vector<std::vector<CheckCase> (*)(const CheckConfig&)> batteries;
    double budget_seconds;
};

}  // namespace

int main() {
    CheckConfig cfg;
    const std::vector<Criterion> criteria{
        {1, "Virasoro commutator table at N=10, |n|,|m|<=4 (tol 1e-9)", {check_virasoro_algebra}, 30},
        {2, "primary eigenvalue (Q^2+p^2)/2 on the vacuum (tol 1e-12)", {check_primary_eigenvalue}, 0},
        {3, "DN closed forms q in {0.3,0.5,0.8} (tol 1e-9) and Green energy (tol 1e-6)", {check_dn_closed_forms}, 0},
        {4, "colin_identities residuals on 20 random cubic cases (tol 1e-6)", {check_colin}, 120},
        {5, "dilation propagator vs exp(-tH) and amplitude normalization (tol 1e-8)", {check_kernel_consistency}, 0},
        {6, "semigroup law, 10 cubic pairs near 0.8z, N=8, levels <= 4 (tol 1e-6)", {check_semigroup}, 0},
        {7, "differentiability, 6 (f, v) pairs, Richardson residual (tol 1e-5)", {check_differentiability}, 0},
        {8, "annulus derivative at 0.6z, n in {-1,0,1}, N=6 (rel 1e-3, slope in [0.8,1.2])", {check_annulus_derivative}, 600},
        {9, "metric independence across cutoff profiles, 5 maps (tol 1e-6)", {check_metric_independence}, 0},
        {10, "piecewise scheme first-order convergence (slope in [0.8,1.2])", {check_time_ordered}, 0},
        {11, "Monte Carlo control, monotonicity and reproducibility", {check_monte_carlo}, 900},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        bool pass = true;
        double worst = 0.0;
        std::string worst_name, error;
        try {
            for (auto battery : c.batteries)
                for (const CheckCase& k : battery(cfg)) {
                    double ratio = k.tolerance != 0 ? k.residual / std::abs(k.tolerance) : (k.pass ? 0.0 : 1e300);
                    if ((pass && !k.pass) || (pass == k.pass && (worst_name.empty() || ratio > worst))) {
                        worst = ratio;
                        worst_name = k.name;
                    }
                    pass = pass && k.pass;
                }
        } catch (const std::exception& e) {
            pass = false;
            error = e.what();
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_budget = c.budget_seconds <= 0 || seconds <= c.budget_seconds;
        bool ok = pass && in_budget;
        if (!ok) ++failed;
        std::printf("%s criterion %2d: %s | worst case %s (residual/tolerance %.3g) | %.1f s%s%s\n", ok ? "PASS" : "FAIL",
                    c.id, c.title.c_str(), worst_name.c_str(), worst, seconds, in_budget ? "" : " over budget",
                    error.empty() ? "" : (" | error: " + error).c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
