#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "segal/flow.hpp"
#include "segal/propagator.hpp"

using namespace segal;

namespace {

LaurentMap random_cubic(std::mt19937_64& rng, double r, double spread) {
    std::uniform_real_distribution<double> u(-spread, spread);
    return LaurentMap::from_powers({{1, r}, {2, cd(u(rng), u(rng))}, {3, cd(u(rng), u(rng))}});
}

double window_diff(const FockSector& s, const CMat& a, const CMat& b, int L) {
    auto w = s.window(L);
    return max_abs(restrict_to(to_orthonormal(s, CMat(a - b)), w, w));
}

}  // namespace

TEST(KernelData, Dilation) {
    double q = 0.6, Q = ModelParams(1.2).Q();
    auto kd = kernel_data(LaurentMap::monomial(1, q), Q, 5, 64);
    for (int k = -5; k <= 5; ++k)
        for (int n = -5; n <= 5; ++n) {
            cd expect = (k == n && n != 0) ? std::pow(q, std::abs(n)) : 0.0;
            EXPECT_NEAR(std::abs(kd.mean_map(kd.pos(k), kd.pos(n)) - expect), 0.0, 1e-15);
        }
    EXPECT_LT(kd.shift.norm(), 1e-14);
    EXPECT_NEAR(kd.constant_variance(), std::log(1 / q), 1e-13);
    EXPECT_NEAR(kd.prefactor_exponent, 0.5 * Q * Q * std::log(q), 1e-14);
    EXPECT_THROW(kernel_data(LaurentMap::monomial(1, q), Q, 5, 16), std::invalid_argument);
}

TEST(KernelData, CovarianceHermitianPsdAndMeanValue) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 4; ++t) {
        auto f = random_cubic(rng, 0.7, 0.05);
        auto kd = kernel_data(f, 2.0, 8, 128);
        EXPECT_LT(kd.mean_map.row(kd.pos(0)).norm(), 1e-15);
        EXPECT_NEAR(std::abs(kd.shift(kd.pos(0))), 0.0, 1e-13);
        EXPECT_LT(max_abs(kd.covariance - CMat(kd.covariance.adjoint())), 1e-12);
        Eigen::SelfAdjointEigenSolver<CMat> es(kd.covariance);
        EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
        EXPECT_NEAR(kd.constant_variance(), -std::log(std::abs(f.power(1))), 1e-12);
    }
}

TEST(KernelData, IdentityLimit) {
    auto kd = kernel_data(LaurentMap::monomial(1, 1.0 - 1e-12), 2.0, 4, 64);
    EXPECT_LT(max_abs(kd.covariance), 1e-10);
    CMat id = CMat::Identity(9, 9);
    id(4, 4) = 0.0;
    EXPECT_LT(max_abs(kd.mean_map - id), 1e-10);
}

TEST(Propagator, DilationMatchesExponential) {
    ModelParams p(1.2, 0.0, 0.3);
    FockSector s(p, 6);
    CMat H = hamiltonian(s, LaurentMap::monomial(1, -1.0), false).matrix;
    for (double t : {0.2, 0.5, 1.0}) {
        CMat T = propagator_matrix(LaurentMap::monomial(1, std::exp(-t)), s, 64).matrix;
        double Q = p.Q();
        EXPECT_NEAR(std::abs(T(0, 0) - std::exp(-t * (Q * Q + 0.09) / 2)), 0.0, 1e-13);
        EXPECT_LT(max_abs(T - expm_neg(H, t)), 1e-10);
    }
}

TEST(Propagator, CompositionRule) {
    ModelParams p(1.2, 0.0, 0.4);
    const int N = 6;
    FockSector s(p, N);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 3; ++t) {
        auto f = random_cubic(rng, 0.8, 0.04), g = random_cubic(rng, 0.8, 0.04);
        CMat lhs = propagator_matrix(f, s).matrix * propagator_matrix(g, s).matrix;
        CMat rhs = propagator_matrix(compose(f, g, 40), s).matrix;
        EXPECT_LT(window_diff(s, lhs, rhs, N - 4), 1e-9);
        EXPECT_LT(window_diff(s, lhs, rhs, N), 1e-9);
    }
}

TEST(Propagator, LevelNonIncreasing) {
    FockSector s(ModelParams(1.0, 0.0, 0.2), 5);
    std::mt19937_64 rng(3);
    CMat T = propagator_matrix(random_cubic(rng, 0.7, 0.05), s).matrix;
    for (int a = 0; a < s.size(); ++a)
        for (int b = 0; b < s.size(); ++b)
            if (s.level(a) > s.level(b)) EXPECT_EQ(T(a, b), cd(0.0));
}

TEST(Propagator, ContractionOnUnitaryLine) {
    FockSector s(ModelParams(1.2, 0.0, 0.5), 6);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 3; ++t) {
        CMat T = to_orthonormal(s, propagator_matrix(random_cubic(rng, 0.8, 0.04), s).matrix);
        Eigen::JacobiSVD<CMat> svd(T);
        EXPECT_LE(svd.singularValues()(0), 1.0 + 1e-8);
    }
}

TEST(Propagator, MomentumEntersThroughScalarOnVacuumColumn) {
    std::mt19937_64 rng(5);
    auto f = random_cubic(rng, 0.75, 0.04);
    FockSector s1(ModelParams(1.2, 0.0, 0.3), 4), s2(ModelParams(1.2, 0.0, -0.6), 4);
    CMat a = propagator_matrix(f, s1).matrix, b = propagator_matrix(f, s2).matrix;
    double g00 = -std::log(std::abs(f.power(1)));
    EXPECT_NEAR(std::abs(b(0, 0) / a(0, 0) - std::exp(-(0.36 - 0.09) * g00 / 2)), 0.0, 1e-12);
}

TEST(Propagator, ExchangeWithDilation) {
    ModelParams p(1.2, 0.0, 0.7);
    FockSector s(p, 5);
    auto v = LaurentMap::from_powers({{1, -1.0}, {2, cd(0.2, 0.1)}, {4, -0.05}});
    double t = 0.3;
    auto vt = LaurentMap::from_powers({{1, -1.0}, {2, std::exp(t) * cd(0.2, 0.1)}, {4, std::exp(3 * t) * -0.05}});
    CMat T = propagator_matrix(LaurentMap::monomial(1, std::exp(-t)), s, 64).matrix;
    EXPECT_LT(max_abs(T * hamiltonian(s, v, false).matrix - hamiltonian(s, vt, false).matrix * T), 1e-9);
}

TEST(Propagator, DilationIsSelfAdjoint) {
    FockSector s(ModelParams(1.2, 0.0, 0.7), 5);
    CMat T = propagator_matrix(LaurentMap::monomial(1, 0.7), s, 64).matrix;
    EXPECT_LT(max_abs(sector_adjoint(s, T) - T), 1e-12);
}

TEST(Derivative, PureModes) {
    FockSector s(ModelParams(1.2, 0.0, 0.4), 5);
    double r = 0.7, eps = 0.05;
    for (int n = 0; n <= 3; ++n) {
        auto rep = derivative_check(LaurentMap::monomial(1, r), LaurentMap::monomial(n + 1, eps), s, {1e-2, 5e-3, 2.5e-3});
        EXPECT_LT(rep.best(), 1e-6) << n;
        if (rep.residual.front() > 1e-10) EXPECT_NEAR(rep.slope.back(), 1.0, 0.1) << n;
    }
}

TEST(Derivative, DilationDirectionAndLinearity) {
    FockSector s(ModelParams(1.0, 0.0, 0.2), 5);
    double r = 0.6;
    auto f = LaurentMap::monomial(1, r);
    auto rep = derivative_check(f, LaurentMap::monomial(1, -r), s, {1e-3, 5e-4, 2.5e-4});
    EXPECT_LT(rep.best(), 1e-9);
    std::mt19937_64 rng(6);
    auto g = random_cubic(rng, 0.7, 0.04);
    auto rep2 = derivative_check(g, LaurentMap::from_powers({{1, -0.7}, {3, 0.05}}), s, {1e-2, 5e-3, 2.5e-3});
    EXPECT_LT(rep2.best(), 1e-6);
}

TEST(TimeOrdered, CommutingPiecesGiveExponentialOfSum) {
    FockSector s(ModelParams(1.2, 0.0, 0.3), 4);
    double r = 0.9, t = 0.3;
    const int n = 8;
    auto T = time_ordered_propagator(LaurentMap::monomial(1, r), LaurentMap::monomial(1, -r), s, t, n, false).matrix;
    // Frozen fields are -z / a_k with a_{k+1} = a_k exp(-dt / a_k).
    double a = 1.0, total = 0.0, dt = t / n;
    for (int k = 0; k < n; ++k) {
        total += dt / a;
        a *= std::exp(-dt / a);
    }
    CMat H = hamiltonian(s, LaurentMap::monomial(1, -1.0), false).matrix;
    EXPECT_LT(max_abs(T - expm_neg(H, total)), 1e-10);
    auto single = time_ordered_propagator(LaurentMap::monomial(1, r), LaurentMap::from_powers({{1, -0.5 * r}, {2, 0.004}}), s, t, 1, false).matrix;
    CMat H1 = hamiltonian(s, LaurentMap::from_powers({{1, -0.5}, {2, 0.004 / r}}), false).matrix;
    EXPECT_LT(max_abs(single - expm_neg(H1, t)), 1e-10);
}

TEST(TimeOrdered, FirstOrderConvergenceAtZeroCoupling) {
    FockSector s(ModelParams(1.2, 0.0, 0.3), 4);
    auto f = LaurentMap::monomial(1, 0.9);
    auto v = LaurentMap::from_powers({{1, -0.45}, {2, 0.005}});
    double t = 0.5;
    CMat exact = propagator_matrix(exact_nonautonomous_map(f, v, t, 24), s).matrix;
    std::vector<double> defect;
    for (int n : {16, 32, 64}) defect.push_back(max_abs(to_orthonormal(s, CMat(time_ordered_propagator(f, v, s, t, n, false).matrix - exact))));
    for (size_t i = 1; i < defect.size(); ++i) EXPECT_NEAR(std::log2(defect[i - 1] / defect[i]), 1.0, 0.2);
}

TEST(TimeOrdered, SelfConvergenceWithPotential) {
    FockSector s(ModelParams(1.0, 0.1, 0.3), 4);
    auto f = LaurentMap::monomial(1, 0.9);
    auto v = LaurentMap::from_powers({{1, -0.045}, {2, 0.0005}});
    CMat a = time_ordered_propagator(f, v, s, 0.5, 32, true).matrix;
    CMat b = time_ordered_propagator(f, v, s, 0.5, 64, true).matrix;
    CMat c = time_ordered_propagator(f, v, s, 0.5, 128, true).matrix;
    double d1 = window_diff(s, a, b, 3), d2 = window_diff(s, b, c, 3);
    EXPECT_LT(d2, 1e-4);
    EXPECT_NEAR(d1 / d2, 2.0, 0.2);
    CMat free = time_ordered_propagator(f, v, s, 0.5, 128, false).matrix;
    EXPECT_GT(window_diff(s, c, free, 3), 10 * d2);
}
