#include <gtest/gtest.h>

#include <cmath>

#include "segal/gmc.hpp"
#include "segal/propagator.hpp"

using namespace segal;

namespace {

double exact_vacuum(const LaurentMap& f, const ModelParams& p) {
    FockSector s(p.with_mu(0.0), 0);
    return propagator_matrix(f, s, 64).matrix(0, 0).real();
}

LaurentMap cubic() { return LaurentMap::from_powers({{1, 0.8}, {2, 0.03}, {3, cd(0.0, 0.01)}}); }

}  // namespace

TEST(GffSampler, CovarianceAndShape) {
    auto f = cubic();
    GffSampler s = make_gff_sampler(f, {}, 7);
    EXPECT_NEAR(s.sigma2[0], -std::log(0.8), 1e-15);
    EXPECT_GT(s.dim(), 1500);
    EXPECT_LT(s.dim(), 2600);
    EXPECT_EQ(s.chol.rows(), s.dim());
    auto [layers, angular] = sampling_grid_shape(LaurentMap::monomial(1, 0.8), 2000);
    double cell_radial = 0.2 / layers, cell_angular = 2 * kPi * 0.9 / angular;
    EXPECT_NEAR(cell_radial / cell_angular, 1.0, 0.3);
}

TEST(GffSampler, SeededDeterminism) {
    auto f = LaurentMap::monomial(1, 0.8);
    GffSampler a = make_gff_sampler(f, {}, 99), b = make_gff_sampler(f, {}, 99), c = make_gff_sampler(f, {}, 100);
    RMat xa = a.draw(3, 16, a.dim()), xb = b.draw(3, 16, b.dim()), xc = c.draw(3, 16, c.dim());
    EXPECT_TRUE(xa == xb);
    EXPECT_FALSE(xa == xc);
    EXPECT_FALSE(xa == a.draw(4, 16, a.dim()));
    ModelParams p(1.0, 0.5, 0.3);
    auto e1 = mc_propagator_element(f, p, 2000, 5), e2 = mc_propagator_element(f, p, 2000, 5);
    EXPECT_EQ(e1.estimate, e2.estimate);
    EXPECT_EQ(e1.std_error, e2.std_error);
}

TEST(GmcMass, SmallGammaGivesWeightedArea) {
    double r = 0.8, gamma = 0.02;
    ModelParams p(gamma);
    double a = 2.0 - gamma * p.Q();
    double area = 2 * kPi * (1.0 - std::pow(r, a)) / a;
    auto st = sample_gmc_mass(LaurentMap::monomial(1, r), p, BoundaryField(0.0, {}), 4096, 3);
    EXPECT_NEAR(st.mean, area, 3 * st.std_error + 1e-3 * area);
    EXPECT_NEAR(st.expected, area, 1e-3 * area);
}

TEST(GmcMass, UnitMeanOfNormalOrderedExponential) {
    ModelParams p(1.0);
    BoundaryField phi(0.1, {cd(0.05, -0.02)});
    auto st = sample_gmc_mass(cubic(), p, phi, 8192, 4);
    EXPECT_NEAR(st.mean, st.expected, 4 * st.std_error);
    EXPECT_LT(std::abs(st.refinement_trend), 0.05 * st.expected);
    EXPECT_GT(st.min_radius, 0.75);
    EXPECT_GT(st.conditioning, 1.0);
}

TEST(GmcMass, RejectsLargeGamma) {
    EXPECT_THROW(sample_gmc_mass(cubic(), ModelParams(1.6), BoundaryField(), 10, 1), std::invalid_argument);
    GmcOptions opt;
    opt.allow_large_gamma = true;
    EXPECT_NO_THROW(sample_gmc_mass(cubic(), ModelParams(1.6), BoundaryField(), 10, 1, opt));
}

TEST(McPropagator, ZeroCouplingControl) {
    ModelParams p(1.2, 0.0, 0.5);
    for (const LaurentMap& f : {LaurentMap::monomial(1, 0.8), cubic()}) {
        auto e = mc_propagator_element(f, p, 100000, 42);
        EXPECT_NEAR(e.estimate, exact_vacuum(f, p), 3 * e.std_error);
        EXPECT_LT(e.ci_low, e.ci_high);
    }
}

TEST(McPropagator, StandardErrorScaling) {
    ModelParams p(1.2, 0.0, 0.8);
    auto f = LaurentMap::monomial(1, 0.8);
    auto small = mc_propagator_element(f, p, 16384, 1), large = mc_propagator_element(f, p, 65536, 2);
    EXPECT_NEAR(large.std_error / small.std_error, 0.5, 0.05);
    EXPECT_NEAR(large.batch_std_error / large.std_error, 1.0, 0.9);
}

TEST(McPropagator, PotentialLowersVacuumElement) {
    ModelParams p(1.0, 1.0, 0.2);
    auto f = LaurentMap::monomial(1, 0.8);
    auto e = mc_propagator_element(f, p, 4096, 8);
    EXPECT_LT(e.estimate + 3 * e.std_error, exact_vacuum(f, p));
}

TEST(McPropagator, CompositionAtZeroCoupling) {
    ModelParams p(1.2, 0.0, 0.6);
    auto f = LaurentMap::from_powers({{1, 0.85}, {2, 0.02}}), g = LaurentMap::from_powers({{1, 0.9}, {3, -0.01}});
    auto ef = mc_propagator_element(f, p, 100000, 11), eg = mc_propagator_element(g, p, 100000, 12);
    auto efg = mc_propagator_element(compose(f, g, 30), p, 100000, 13);
    double prod = ef.estimate * eg.estimate;
    double sprod = std::hypot(ef.std_error * eg.estimate, eg.std_error * ef.estimate);
    EXPECT_NEAR(efg.estimate, prod, 3 * std::hypot(efg.std_error, sprod));
}
