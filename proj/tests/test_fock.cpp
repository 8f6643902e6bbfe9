#include <gtest/gtest.h>

#include <cmath>

#include "segal/fock.hpp"

using namespace segal;

namespace {

CMat commutator(const SpMat& a, const SpMat& b) { return CMat(a * b - b * a); }

double window_max(const FockSector& s, const CMat& m, int L) {
    auto w = s.window(L);
    return max_abs(restrict_to(m, w, w));
}

}  // namespace

TEST(FockSector, BasisCounts) {
    // Number of partition pairs with total level <= N.
    ModelParams p(1.0);
    EXPECT_EQ(FockSector(p, 0).size(), 1);
    EXPECT_EQ(FockSector(p, 1).size(), 3);
    EXPECT_EQ(FockSector(p, 2).size(), 8);
    EXPECT_EQ(FockSector(p, 4).size(), 38);
    EXPECT_EQ(FockSector(p, 8).size(), 434);
    FockSector s(p, 4);
    EXPECT_EQ(s.label(0), "[|]");
    for (int i = 0; i < s.size(); ++i) EXPECT_EQ(s.index(s.state(i)), i);
    for (int i = 1; i < s.size(); ++i) EXPECT_LE(s.level(i - 1), s.level(i));
}

TEST(Heisenberg, VacuumAndZeroMode) {
    ModelParams p(1.2, 0.0, 0.7);
    FockSector s(p, 4);
    CMat a1 = heisenberg(s, 1, false).matrix;
    EXPECT_EQ(max_abs(a1.col(0)), 0.0);
    CMat a0 = heisenberg(s, 0, true).matrix;
    EXPECT_NEAR(std::abs(a0(0, 0) - cd(0, 0.5) * p.alpha()), 0.0, 1e-15);
}

TEST(Heisenberg, CanonicalCommutators) {
    ModelParams p(1.2, 0.0, 0.7);
    const int N = 6;
    FockSector s(p, N);
    for (bool tilde : {false, true})
        for (int n = -3; n <= 3; ++n)
            for (int m = -3; m <= 3; ++m) {
                CMat c = commutator(heisenberg_sparse(s, n, tilde), heisenberg_sparse(s, m, tilde));
                if (n == -m) c -= (n / 2.0) * CMat::Identity(s.size(), s.size());
                int L = N - std::max(0, -n) - std::max(0, -m);
                EXPECT_LT(window_max(s, c, L), 1e-14) << n << "," << m;
            }
    CMat mixed = commutator(heisenberg_sparse(s, 2, false), heisenberg_sparse(s, -2, true));
    EXPECT_EQ(window_max(s, mixed, N - 2), 0.0);
}

TEST(Heisenberg, AdjointUnderPairing) {
    FockSector s(ModelParams(1.2, 0.0, 0.7), 5);
    for (int n = 1; n <= 4; ++n)
        for (bool tilde : {false, true}) {
            CMat an = heisenberg(s, n, tilde).matrix;
            CMat am = heisenberg(s, -n, tilde).matrix;
            auto w = s.window(5 - n);
            auto all = s.window(5);
            // <A_n a, b> = <a, A_{-n} b> for b within the cap.
            EXPECT_LT(max_abs(restrict_to(sector_adjoint(s, an) - am, all, w)), 1e-14);
        }
}

TEST(Virasoro, VacuumWeights) {
    ModelParams p(1.2, 0.0, 0.7);
    FockSector s(p, 4);
    CMat l0 = virasoro_free(s, 0, false).matrix;
    EXPECT_NEAR(std::abs(l0(0, 0) - p.delta()), 0.0, 1e-14);
    CMat h = l0 + virasoro_free(s, 0, true).matrix;
    double Q = p.Q(), pp = 0.7;
    EXPECT_NEAR(std::abs(h(0, 0) - 0.5 * (Q * Q + pp * pp)), 0.0, 1e-13);
    EXPECT_LT(max_abs(h.col(0).tail(s.size() - 1)), 1e-15);
}

TEST(Virasoro, CentralTerm) {
    ModelParams p(1.2, 0.0, 0.7);
    const int N = 6;
    FockSector s(p, N);
    CMat c = commutator(virasoro_free_sparse(s, 2, false), virasoro_free_sparse(s, -2, false));
    c -= 4.0 * CMat(virasoro_free_sparse(s, 0, false)) + (p.c_L() / 2) * CMat::Identity(s.size(), s.size());
    EXPECT_LT(window_max(s, c, N - 2), 1e-10);
}

TEST(Virasoro, AlgebraAndChiralitiesCommute) {
    ModelParams p(0.8, 0.0, cd(0.4 / 2 + 2 / 0.8 + 0.1, 0.3));
    const int N = 6;
    FockSector s(p, N);
    for (int n = -3; n <= 3; ++n)
        for (int m = -3; m <= 3; ++m) {
            for (bool tilde : {false, true}) {
                CMat c = commutator(virasoro_free_sparse(s, n, tilde), virasoro_free_sparse(s, m, tilde));
                if (std::abs(n + m) <= N) c -= double(n - m) * CMat(virasoro_free_sparse(s, n + m, tilde));
                if (n == -m) c -= (p.c_L() / 12) * double(n * n * n - n) * CMat::Identity(s.size(), s.size());
                int L = N - std::max(0, -n) - std::max(0, -m);
                EXPECT_LT(window_max(s, c, L), 1e-9) << n << "," << m;
            }
            CMat x = commutator(virasoro_free_sparse(s, n, false), virasoro_free_sparse(s, m, true));
            int L = N - std::max(0, -n) - std::max(0, -m);
            EXPECT_EQ(window_max(s, x, L), 0.0);
        }
}

TEST(Virasoro, GradingAndAdjoint) {
    ModelParams p(1.2, 0.0, 0.7);
    const int N = 5;
    FockSector s(p, N);
    for (int n = -3; n <= 3; ++n) {
        CMat l = virasoro_free(s, n, false).matrix;
        for (int a = 0; a < s.size(); ++a)
            for (int b = 0; b < s.size(); ++b)
                if (l(a, b) != cd(0.0)) EXPECT_EQ(s.level(a), s.level(b) - n);
        // (L_n)^* = L_{-n} on the unitary line alpha = Q + ip.
        CMat lm = virasoro_free(s, -n, false).matrix;
        auto rows = s.window(N);
        auto cols = s.window(N - std::max(0, n) - std::max(0, -n));
        EXPECT_LT(max_abs(restrict_to(sector_adjoint(s, l) - lm, rows, cols)), 1e-11) << n;
    }
}

TEST(VertexPotential, VacuumAndOnePairing) {
    ModelParams p(1.2, 0.1, 0.7);
    FockSector s(p, 4);
    CMat v0 = vertex_potential(s, 0, false).matrix;
    EXPECT_NEAR(std::abs(p.mu() * v0(0, 0) - cd(p.mu() * kPi)), 0.0, 1e-15);
    for (int m = 1; m <= 4; ++m) {
        FockState st = s.state(0);
        st.k[m - 1] = 1;
        st.level_h = m;
        int a = s.index(st);
        CMat vm = vertex_potential(s, -m, false).matrix;
        // coefficient of A_{-m}|0> is pi * i gamma / m; paired against u_m (norm m/2) it gives pi gamma / (2m) times i.
        EXPECT_NEAR(std::abs(vm(a, 0) - cd(0, kPi * p.gamma() / m)), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(vm(a, 0) * s.gram()[a] / cd(0, 1) - kPi * p.gamma() / 2.0), 0.0, 1e-14);
    }
}

TEST(VertexPotential, Hermiticity) {
    ModelParams p(1.2, 0.1, 0.7);
    FockSector s(p, 5);
    for (int n = -3; n <= 3; ++n)
        for (bool tilde : {false, true}) {
            CMat vn = vertex_potential(s, n, tilde).matrix;
            CMat vm = vertex_potential(s, -n, tilde).matrix;
            EXPECT_LT(max_abs(sector_adjoint(s, vn) - vm), 1e-12) << n;
        }
}

TEST(Hamiltonian, DilationIsGrading) {
    ModelParams p(1.2, 0.0, 0.7);
    FockSector s(p, 5);
    CMat h = hamiltonian(s, LaurentMap::monomial(1, -1.0), false).matrix;
    for (int a = 0; a < s.size(); ++a)
        for (int b = 0; b < s.size(); ++b) {
            cd expect = (a == b) ? 2.0 * p.delta() + double(s.level(a)) : cd(0.0);
            EXPECT_NEAR(std::abs(h(a, b) - expect), 0.0, 1e-12);
        }
}

TEST(Hamiltonian, AdjointMatchesReflectedField) {
    ModelParams p(1.2, 0.0, 0.7);
    const int N = 5;
    FockSector s(p, N);
    auto v = LaurentMap::from_powers({{1, cd(-1.0, 0.2)}, {2, cd(0.1, -0.3)}, {3, 0.05}});
    // reflected field z^2 conj(v(1/conj z)): stored coefficient at index m is conj(c_{-m}).
    std::vector<std::pair<int, cd>> terms;
    for (int n = v.n_min(); n <= v.n_max(); ++n) terms.emplace_back(-n + 1, std::conj(v.coeff(n)));
    auto vstar = LaurentMap::from_powers(terms);
    CMat h = hamiltonian(s, v, false).matrix;
    CMat hs = hamiltonian(s, vstar, false).matrix;
    auto rows = s.window(N);
    auto cols = s.window(N - 2);
    EXPECT_LT(max_abs(restrict_to(sector_adjoint(s, h) - hs, rows, cols)), 1e-11);
}

TEST(Hamiltonian, ExchangeWithDilationSemigroup) {
    ModelParams p(1.2, 0.0, 0.7);
    const int N = 5;
    FockSector s(p, N);
    auto v = LaurentMap::from_powers({{1, -1.0}, {2, cd(0.2, 0.1)}, {4, -0.05}});
    double t = 0.3;
    auto vt = LaurentMap::from_powers({{1, -1.0}, {2, std::exp(t) * cd(0.2, 0.1)}, {4, std::exp(3 * t) * -0.05}});
    CMat H = hamiltonian(s, LaurentMap::monomial(1, -1.0), false).matrix;
    CMat E = expm_neg(H, t);
    CMat lhs = E * hamiltonian(s, v, false).matrix;
    CMat rhs = hamiltonian(s, vt, false).matrix * E;
    EXPECT_LT(max_abs(lhs - rhs), 1e-8);
}

TEST(MatrixExponential, BasicIdentities) {
    ModelParams p(1.2, 0.0, 0.7);
    FockSector s(p, 4);
    int d = s.size();
    EXPECT_LT(max_abs(expm_neg(CMat::Zero(d, d), 1.0) - CMat::Identity(d, d)), 1e-15);
    CMat H = hamiltonian(s, LaurentMap::monomial(1, -1.0), false).matrix;
    double t = 0.7;
    CMat E = expm_neg(H, t);
    double Q = p.Q();
    EXPECT_NEAR(std::abs(E(0, 0) - std::exp(-t * (Q * Q + 0.49) / 2)), 0.0, 1e-14);
    CMat Hv = hamiltonian(s, LaurentMap::from_powers({{1, -1.0}, {2, 0.3}}), true).matrix;
    EXPECT_LT(max_abs(expm_neg(Hv, 0.2) * expm_neg(Hv, 0.3) - expm_neg(Hv, 0.5)), 1e-10);
    EXPECT_THROW(expm_neg(H, -1.0), std::invalid_argument);
    EXPECT_THROW(expm_neg(CMat(-H), 1e6), std::overflow_error);
}
