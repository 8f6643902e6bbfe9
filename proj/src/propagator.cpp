#include "segal/propagator.hpp"

#include <cmath>
#include <sstream>

#include "segal/flow.hpp"

namespace segal {

namespace {

void require_contracting(const LaurentMap& f, const char* who) {
    if (!f.is_taylor() || std::abs(f(0.0)) > 1e-12) throw std::invalid_argument(std::string(who) + ": map must fix 0");
    if (std::abs(f.power(1)) == 0.0) throw std::invalid_argument(std::string(who) + ": f'(0) vanishes");
    for (cd z : circle_points(256)) {
        if (std::abs(f(z)) >= 1.0) {
            std::ostringstream os;
            os << who << ": f(T) leaves the open unit disk at z=" << z;
            throw DomainError(os.str(), z);
        }
    }
}

// -log|(f(x) - f(y))/(x - y)| for a Taylor map f.
double smooth_green(const std::vector<cd>& a, cd x, cd y, cd fprime_x) {
    if (x == y) return -std::log(std::abs(fprime_x));
    cd h = 0.0, ypow = 1.0, acc = 0.0;
    for (size_t p = 1; p < a.size(); ++p) {
        h = x * h + ypow;
        ypow *= y;
        acc += a[p] * h;
    }
    return -std::log(std::abs(acc));
}

// Exponent vector of a Fock state on the variables k = -N..N (k != 0).
int& slot(FockState& s, int k) { return k > 0 ? s.k[k - 1] : s.kt[-k - 1]; }
int slot(const FockState& s, int k) { return k > 0 ? s.k[k - 1] : s.kt[-k - 1]; }

FockState shifted(const FockState& s, int k, int by) {
    FockState t = s;
    slot(t, k) += by;
    int n = std::abs(k);
    (k > 0 ? t.level_h : t.level_a) += by * n;
    return t;
}

std::vector<int> variables(int N) {
    std::vector<int> v;
    for (int n = 1; n <= N; ++n) {
        v.push_back(n);
        v.push_back(-n);
    }
    return v;
}

}  // namespace

GaussianKernelData kernel_data(const LaurentMap& f, double Q, int n_max, int nodes) {
    if (nodes < 4 * n_max) throw std::invalid_argument("kernel_data: quadrature node count below 4 n_max");
    if (n_max < 0) throw std::invalid_argument("kernel_data: negative n_max");
    require_contracting(f, "kernel_data");
    const int N = n_max, W = 2 * N + 1;
    GaussianKernelData kd;
    kd.n_max = N;

    kd.mean_map = CMat::Zero(W, W);
    LaurentMap fn = LaurentMap::constant(1.0);
    for (int n = 1; n <= N; ++n) {
        fn = mul(fn, f, N - 1);
        for (int k = n; k <= N; ++k) {
            cd c = fn.power(k);
            kd.mean_map(k + N, n + N) = c;
            kd.mean_map(-k + N, -n + N) = std::conj(c);
        }
    }

    std::vector<double> om = omega_samples(f, nodes);
    for (double& x : om) x *= Q;
    kd.shift = analyze(om, N);

    std::vector<cd> a(f.max_power() + 1, 0.0);
    for (int p = 1; p <= f.max_power(); ++p) a[p] = f.power(p);
    auto zs = circle_points(nodes);
    LaurentMap df = f.derivative();
    RMat g(nodes, nodes);
    for (int i = 0; i < nodes; ++i) {
        cd dfi = df(zs[i]);
        for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = smooth_green(a, zs[i], zs[j], dfi);
    }
    CMat E(W, nodes);
    for (int k = -N; k <= N; ++k)
        for (int j = 0; j < nodes; ++j) E(k + N, j) = std::polar(1.0, -2 * kPi * k * j / nodes);
    kd.smooth = E * g.cast<cd>() * E.transpose() / double(nodes) / double(nodes);

    CMat C0 = CMat::Zero(W, W);
    for (int n = 1; n <= N; ++n) C0(n + N, -n + N) = C0(-n + N, n + N) = 1.0 / (2.0 * n);
    CMat bilinear = kd.smooth + C0 - kd.mean_map * C0 * kd.mean_map.transpose();
    kd.covariance.resize(W, W);
    for (int k = -N; k <= N; ++k)
        for (int l = -N; l <= N; ++l) kd.covariance(k + N, l + N) = bilinear(k + N, -l + N);

    kd.prefactor_exponent = 0.5 * Q * Q * std::log(std::abs(f.power(1)));
    return kd;
}

SectorOperator propagator_matrix(const LaurentMap& f, const FockSector& s, int nodes) {
    const int N = s.level_cap();
    GaussianKernelData kd = kernel_data(f, s.params().Q(), N, nodes);
    const int M = s.size();
    const cd shift_c = s.alpha() - s.params().Q();
    auto vars = variables(N);

    std::vector<cd> m(2 * N + 1);
    for (int k = -N; k <= N; ++k) m[k + N] = kd.shift(k + N) + shift_c * kd.smooth(k + N, N);

    // D = m . d + (1/2) sum K_kl d_k d_l on polynomial coefficients in the monomial basis.
    std::vector<Eigen::Triplet<cd>> trip;
    for (int b = 0; b < M; ++b) {
        const FockState& st = s.state(b);
        for (size_t iu = 0; iu < vars.size(); ++iu) {
            int u = vars[iu];
            int eu = slot(st, u);
            if (eu == 0) continue;
            FockState t1 = shifted(st, u, -1);
            trip.emplace_back(s.index(t1), b, double(eu) * m[u + N]);
            if (eu >= 2)
                trip.emplace_back(s.index(shifted(t1, u, -1)), b, 0.5 * kd.smooth(u + N, u + N) * double(eu * (eu - 1)));
            for (size_t iw = iu + 1; iw < vars.size(); ++iw) {
                int w = vars[iw];
                int ew = slot(st, w);
                if (ew == 0) continue;
                trip.emplace_back(s.index(shifted(t1, w, -1)), b, kd.smooth(u + N, w + N) * double(eu * ew));
            }
        }
    }
    SpMat D(M, M);
    D.setFromTriplets(trip.begin(), trip.end());
    CMat expD = CMat::Identity(M, M), term = CMat::Identity(M, M);
    for (int j = 1; j <= N; ++j) {
        term = (D * term) / double(j);
        if (max_abs(term) == 0.0) break;
        expD += term;
    }

    // Second quantization of the mean map: column b holds the monomial expansion of prod_k (L phi)_k^{b_k}.
    CMat G = CMat::Zero(M, M);
    G(0, 0) = 1.0;
    for (int b = 1; b < M; ++b) {
        const FockState& st = s.state(b);
        int u = 0;
        for (int k : vars)
            if (slot(st, k) > 0) {
                u = k;
                break;
            }
        int prev = s.index(shifted(st, u, -1));
        for (int c = 0; c < M; ++c) {
            cd pc = G(c, prev);
            if (pc == cd(0.0)) continue;
            const FockState& sc = s.state(c);
            for (int n = 1; n <= std::abs(u); ++n) {
                int var = u > 0 ? n : -n;
                cd l = kd.mean_map(u + N, var + N);
                if (l == cd(0.0)) continue;
                int target = s.index(shifted(sc, var, 1));
                if (target >= 0) G(target, b) += pc * l;
            }
        }
    }

    cd pref = std::exp(kd.prefactor_exponent + 0.5 * shift_c * shift_c * kd.smooth(N, N));
    CMat T = pref * (G * expD);

    std::vector<cd> c(M);
    for (int b = 0; b < M; ++b) {
        const FockState& st = s.state(b);
        cd v = 1.0;
        for (int n = 1; n <= N; ++n) v *= std::pow(cd(0, -double(n)), st.k[n - 1] + st.kt[n - 1]);
        c[b] = v;
    }
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b)
            if (T(a, b) != cd(0.0)) T(a, b) *= c[b] / c[a];
    return {T, 0};
}

DerivativeReport richardson_report(const std::vector<double>& t_list, const std::vector<CMat>& residuals) {
    DerivativeReport rep;
    rep.t = t_list;
    for (const CMat& r : residuals) rep.residual.push_back(max_abs(r));
    for (size_t i = 1; i < residuals.size(); ++i)
        rep.slope.push_back(std::log(rep.residual[i - 1] / rep.residual[i]) / std::log(t_list[i - 1] / t_list[i]));
    // Neville tableau: polynomial extrapolation of R(t) to t = 0.
    std::vector<CMat> col = residuals;
    for (size_t level = 1; level < residuals.size(); ++level) {
        std::vector<CMat> next;
        for (size_t j = 0; j + 1 < col.size(); ++j) {
            double a = t_list[j], b = t_list[j + level];
            next.push_back((a * col[j + 1] - b * col[j]) / (a - b));
        }
        col = next;
        rep.extrapolated.push_back(max_abs(col.back()));
    }
    return rep;
}

DerivativeReport derivative_check(const LaurentMap& f, const LaurentMap& v, const FockSector& s,
                                  const std::vector<double>& t_list, int nodes) {
    const int trunc = std::max(f.n_max(), v.n_max()) + s.level_cap() + 2;
    LaurentMap w = divide(v, f.derivative(), trunc);
    CMat Tf = propagator_matrix(f, s, nodes).matrix;
    CMat target = -Tf * hamiltonian(s, w, false).matrix;
    std::vector<CMat> res;
    for (double t : t_list) {
        LaurentMap ft = f + v * cd(t);
        if (!classify(ft).in_S) {
            std::ostringstream os;
            os << "derivative_check: f + t v leaves the class at t=" << t;
            throw std::domain_error(os.str());
        }
        CMat Tt = propagator_matrix(ft, s, nodes).matrix;
        res.push_back(to_orthonormal(s, CMat((Tt - Tf) / t - target)));
    }
    return richardson_report(t_list, res);
}

SectorOperator time_ordered_propagator(const LaurentMap& f, const LaurentMap& v, const FockSector& s, double t_end,
                                       int n_pieces, bool include_potential, int trunc) {
    FlowTrajectory tr = flow_nonautonomous(f, v, t_end, n_pieces, trunc);
    double dt = t_end / n_pieces;
    CMat T = CMat::Identity(s.size(), s.size());
    for (const LaurentMap& w : tr.generators) T = expm_neg(hamiltonian_matrix(s, w, include_potential), dt) * T;
    return {T, 0};
}

}  // namespace segal
