#include "segal/gmc.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "segal/amplitude.hpp"

namespace segal {

namespace {

void check_gamma(const ModelParams& p, const GmcOptions& opt) {
    if (p.gamma() > 1.5 && !opt.allow_large_gamma)
        throw std::invalid_argument("gamma above 1.5 is outside the reliability window of grid chaos");
}

std::mt19937_64 batch_engine(std::uint64_t seed, std::uint64_t batch) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(batch), std::uint32_t(batch >> 32)};
    return std::mt19937_64(seq);
}

// Weights w_i |x_i|^{-gamma Q} (1 - |x_i|^2)^{gamma^2/2} of the normal-ordered chaos.
std::vector<double> chaos_weights(const GffSampler& s, const ModelParams& p) {
    double g = p.gamma(), Q = p.Q();
    std::vector<double> out(s.x.size());
    for (size_t i = 0; i < s.x.size(); ++i) {
        double r = std::abs(s.x[i]);
        out[i] = s.w[i] * std::pow(r, -g * Q) * std::pow(1.0 - r * r, 0.5 * g * g);
    }
    return out;
}

struct Accumulator {
    long n = 0;
    double sum = 0.0, sum2 = 0.0;
    std::vector<double> batch_means;
    void add_batch(const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) {
            s += x;
            sum2 += x * x;
        }
        sum += s;
        n += static_cast<long>(v.size());
        batch_means.push_back(s / v.size());
    }
    double mean() const { return sum / n; }
    double variance() const { return n > 1 ? (sum2 - sum * sum / n) / (n - 1) : 0.0; }
    double std_error() const { return std::sqrt(variance() / n); }
    double batch_std_error() const {
        size_t b = batch_means.size();
        if (b < 2) return std_error();
        double m = 0.0, v = 0.0;
        for (double x : batch_means) m += x;
        m /= b;
        for (double x : batch_means) v += (x - m) * (x - m);
        return std::sqrt(v / (b - 1) / b);
    }
};

std::vector<double> mass_batch(const GffSampler& s, const std::vector<double>& cw, const ModelParams& p,
                               const std::vector<double>& shift, std::uint64_t batch, int count) {
    RMat X = s.draw(batch, count, s.dim());
    double g = p.gamma();
    std::vector<double> out(count, 0.0);
    for (int k = 0; k < count; ++k)
        for (size_t i = 0; i < s.x.size(); ++i) {
            double sig = s.sigma2[i + 1];
            out[k] += cw[i] * std::exp(g * (X(i + 1, k) + shift[i]) - 0.5 * g * g * sig);
        }
    return out;
}

MassStats run_mass(const LaurentMap& f, const ModelParams& p, const BoundaryField& phi, long n, std::uint64_t seed,
                   const GmcOptions& opt) {
    GffSampler s = make_gff_sampler(f, opt, seed);
    std::vector<double> cw = chaos_weights(s, p);
    std::vector<double> shift = harmonic_extension_disk(phi, s.x);
    Accumulator acc;
    MassStats st;
    double g = p.gamma();
    for (size_t i = 0; i < cw.size(); ++i) st.expected += cw[i] * std::exp(g * shift[i]);
    for (std::uint64_t b = 0; acc.n < n; ++b) {
        int count = static_cast<int>(std::min<long>(opt.batch, n - acc.n));
        acc.add_batch(mass_batch(s, cw, p, shift, b, count));
    }
    st.n = acc.n;
    st.mean = acc.mean();
    st.variance = acc.variance();
    st.std_error = acc.std_error();
    st.min_radius = s.min_radius;
    double wmax = 0.0, wsum = 0.0;
    for (size_t i = 0; i < cw.size(); ++i) {
        wmax = std::max(wmax, cw[i] / s.w[i]);
        wsum += cw[i];
    }
    double area = 0.0;
    for (double w : s.w) area += w;
    st.conditioning = wmax / (wsum / area);
    return st;
}

}  // namespace

RMat GffSampler::draw(std::uint64_t batch, int count, int rows) const {
    std::mt19937_64 eng = batch_engine(seed, batch);
    std::normal_distribution<double> normal(0.0, 1.0);
    RMat Z(rows, count);
    for (int k = 0; k < count; ++k)
        for (int i = 0; i < rows; ++i) Z(i, k) = normal(eng);
    return chol.topLeftCorner(rows, rows).triangularView<Eigen::Lower>() * Z;
}

std::pair<int, int> sampling_grid_shape(const LaurentMap& f, int target_points) {
    const int M = 512;
    double thick = 0.0, len = 0.0;
    LaurentMap df = f.derivative();
    for (cd z : circle_points(M)) {
        thick += std::abs(f(z) - z) / M;
        len += (1.0 + std::abs(df(z))) * kPi / M;
    }
    int layers = std::max(1, int(std::lround(std::sqrt(target_points * thick / len))));
    int angular = std::max(8, int(std::lround(layers * len / thick / 8.0)) * 8);
    return {layers, angular};
}

GffSampler make_gff_sampler(const LaurentMap& f, const GmcOptions& opt, std::uint64_t seed) {
    auto [layers, angular] = sampling_grid_shape(f, opt.target_points);
    AnnulusGrid g = annulus_grid(f, layers, 1, angular);
    GffSampler s;
    s.seed = seed;
    s.x = g.x;
    s.w = g.w;
    const int m = static_cast<int>(s.x.size());
    RMat C(m + 1, m + 1);
    C(0, 0) = -std::log(std::abs(f.power(1)));
    s.min_radius = 1.0;
    for (int i = 0; i < m; ++i) {
        cd xi = s.x[i];
        s.min_radius = std::min(s.min_radius, std::abs(xi));
        C(i + 1, 0) = C(0, i + 1) = -std::log(std::abs(xi));
        double eps = std::sqrt(s.w[i] / kPi);
        C(i + 1, i + 1) = std::log(1.0 - std::norm(xi)) - std::log(eps) + 0.25;
        for (int j = 0; j < i; ++j) {
            cd xj = s.x[j];
            C(i + 1, j + 1) = C(j + 1, i + 1) = std::log(std::abs(1.0 - xi * std::conj(xj)) / std::abs(xi - xj));
        }
    }
    s.sigma2.resize(m + 1);
    for (int i = 0; i <= m; ++i) s.sigma2[i] = C(i, i);
    Eigen::LLT<RMat> llt(C);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("free field covariance is not positive definite after regularization");
    s.chol = llt.matrixL();
    return s;
}

MassStats sample_gmc_mass(const LaurentMap& f, const ModelParams& params, const BoundaryField& phi, long n_samples,
                          std::uint64_t seed, const GmcOptions& opt) {
    check_gamma(params, opt);
    if (n_samples <= 0) throw std::invalid_argument("sample_gmc_mass: need a positive sample count");
    MassStats st = run_mass(f, params, phi, n_samples, seed, opt);
    GmcOptions coarse = opt;
    coarse.target_points = std::max(16, opt.target_points / 4);
    st.coarse_mean = run_mass(f, params, phi, n_samples, seed, coarse).mean;
    st.refinement_trend = st.mean - st.coarse_mean;
    return st;
}

McEstimate mc_propagator_element(const LaurentMap& f, const ModelParams& params, long n_samples, std::uint64_t seed,
                                 const GmcOptions& opt) {
    check_gamma(params, opt);
    if (n_samples <= 0) throw std::invalid_argument("mc_propagator_element: need a positive sample count");
    const double p = params.p(), Q = params.Q(), mu = params.mu(), g = params.gamma();
    const double pref = std::pow(std::abs(f.power(1)), 0.5 * Q * Q);
    GffSampler s = make_gff_sampler(f, opt, seed);
    std::vector<double> cw = chaos_weights(s, params);
    const int m = static_cast<int>(s.x.size()), K = opt.boundary_modes;
    // Powers x_i^n for the harmonic extension of the sampled boundary field.
    CMat xp(m, K);
    for (int i = 0; i < m; ++i) {
        cd pw = 1.0;
        for (int n = 0; n < K; ++n) xp(i, n) = (pw *= s.x[i]);
    }
    const double zero_mode_weight = std::exp(g * opt.zero_mode);
    Accumulator acc;
    for (std::uint64_t b = 0; acc.n < n_samples; ++b) {
        int count = static_cast<int>(std::min<long>(opt.batch, n_samples - acc.n));
        std::vector<double> vals(count);
        if (mu == 0.0) {
            RMat X = s.draw(b, count, 1);
            for (int k = 0; k < count; ++k) vals[k] = pref * std::cos(p * X(0, k));
        } else {
            RMat X = s.draw(b, count, s.dim());
            std::mt19937_64 eng = batch_engine(~seed, b);
            std::normal_distribution<double> normal(0.0, 1.0);
            for (int k = 0; k < count; ++k) {
                CVec modes(K);
                for (int n = 1; n <= K; ++n) modes(n - 1) = cd(normal(eng), normal(eng)) / (2.0 * std::sqrt(double(n)));
                Eigen::VectorXd ext = 2.0 * (xp * modes).real();
                double mass = 0.0;
                for (int i = 0; i < m; ++i)
                    mass += cw[i] * std::exp(g * (X(i + 1, k) + ext(i)) - 0.5 * g * g * s.sigma2[i + 1]);
                vals[k] = pref * std::cos(p * X(0, k)) * std::exp(-mu * zero_mode_weight * mass);
            }
        }
        acc.add_batch(vals);
    }
    McEstimate e;
    e.n = acc.n;
    e.estimate = acc.mean();
    e.std_error = acc.std_error();
    e.ci_low = e.estimate - 1.96 * e.std_error;
    e.ci_high = e.estimate + 1.96 * e.std_error;
    e.batch_std_error = acc.batch_std_error();
    return e;
}

}  // namespace segal
