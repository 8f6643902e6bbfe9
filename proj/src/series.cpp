#include "segal/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace segal {

ModelParams::ModelParams(double gamma, double mu, double p)
    : ModelParams(gamma, mu, cd(gamma / 2 + 2 / gamma, p)) {}

ModelParams::ModelParams(double gamma, double mu, cd alpha) : gamma_(gamma), mu_(mu), alpha_(alpha) {
    if (!(gamma > 0.0 && gamma < 2.0)) throw std::invalid_argument("gamma must lie in (0,2)");
    if (!(mu >= 0.0)) throw std::invalid_argument("mu must be nonnegative");
    Q_ = gamma / 2 + 2 / gamma;
    cL_ = 1 + 6 * Q_ * Q_;
}

LaurentMap::LaurentMap(int n_min, std::vector<cd> coeffs, double eps) : n_min_(n_min), c_(std::move(coeffs)), eps_(eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
    size_t lo = 0;
    while (lo < c_.size() && c_[lo] == cd(0.0)) ++lo;
    size_t hi = c_.size();
    while (hi > lo && c_[hi - 1] == cd(0.0)) --hi;
    if (lo == hi) {
        c_.clear();
        n_min_ = 0;
        return;
    }
    c_ = std::vector<cd>(c_.begin() + lo, c_.begin() + hi);
    n_min_ += static_cast<int>(lo);
}

LaurentMap LaurentMap::from_powers(const std::vector<std::pair<int, cd>>& terms, double eps) {
    if (terms.empty()) return LaurentMap({}, {}, eps);
    int lo = terms.front().first, hi = lo;
    for (auto& t : terms) {
        lo = std::min(lo, t.first);
        hi = std::max(hi, t.first);
    }
    std::vector<cd> c(hi - lo + 1, 0.0);
    for (auto& t : terms) c[t.first - lo] += t.second;
    return LaurentMap(lo - 1, std::move(c), eps);
}

LaurentMap LaurentMap::monomial(int power, cd c, double eps) { return LaurentMap(power - 1, {c}, eps); }

cd LaurentMap::coeff(int n) const {
    if (c_.empty() || n < n_min_ || n > n_max()) return 0.0;
    return c_[n - n_min_];
}

LaurentMap LaurentMap::truncated(int n_max_keep) const {
    if (c_.empty() || n_max_keep >= n_max()) return *this;
    if (n_max_keep < n_min_) return LaurentMap(0, {}, eps_);
    return LaurentMap(n_min_, std::vector<cd>(c_.begin(), c_.begin() + (n_max_keep - n_min_ + 1)), eps_);
}

cd LaurentMap::operator()(cd z) const {
    if (c_.empty()) return 0.0;
    cd acc = 0.0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
    int p = min_power();
    if (p == 0) return acc;
    if (p > 0) return acc * std::pow(z, p);
    if (z == cd(0.0)) throw DomainError("Laurent series evaluated at 0", z);
    return acc / std::pow(z, -p);
}

std::vector<cd> LaurentMap::evaluate(const std::vector<cd>& points) const {
    std::vector<cd> out;
    out.reserve(points.size());
    for (cd z : points) out.push_back((*this)(z));
    return out;
}

LaurentMap LaurentMap::derivative() const {
    if (c_.empty()) return LaurentMap(0, {}, eps_);
    std::vector<cd> d(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) {
        int n = n_min_ + static_cast<int>(i);
        d[i] = c_[i] * double(n + 1);
    }
    // z^{n+1} -> (n+1) z^n, which is index n-1.
    return LaurentMap(n_min_ - 1, std::move(d), eps_);
}

LaurentMap LaurentMap::operator+(const LaurentMap& o) const {
    if (o.empty()) return LaurentMap(n_min_, c_, std::min(eps_, o.eps_));
    if (empty()) return LaurentMap(o.n_min_, o.c_, std::min(eps_, o.eps_));
    int lo = std::min(n_min_, o.n_min_), hi = std::max(n_max(), o.n_max());
    std::vector<cd> c(hi - lo + 1, 0.0);
    for (size_t i = 0; i < c_.size(); ++i) c[n_min_ - lo + i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) c[o.n_min_ - lo + i] += o.c_[i];
    return LaurentMap(lo, std::move(c), std::min(eps_, o.eps_));
}

LaurentMap LaurentMap::operator-(const LaurentMap& o) const { return *this + (-o); }

LaurentMap LaurentMap::operator*(cd s) const {
    std::vector<cd> c(c_);
    for (auto& x : c) x *= s;
    return LaurentMap(n_min_, std::move(c), eps_);
}

LaurentMap mul(const LaurentMap& a, const LaurentMap& b, int trunc) {
    double eps = std::min(a.eps(), b.eps());
    if (a.empty() || b.empty()) return LaurentMap(0, {}, eps);
    // powers: pa = a.min_power()+i, pb = b.min_power()+j; product power pa+pb = n+1.
    int lo = a.n_min() + b.n_min() + 1;
    int hi = std::min(a.n_max() + b.n_max() + 1, trunc);
    if (hi < lo) return LaurentMap(0, {}, eps);
    std::vector<cd> c(hi - lo + 1, 0.0);
    const auto& ac = a.data();
    const auto& bc = b.data();
    for (size_t i = 0; i < ac.size(); ++i) {
        int base = a.n_min() + static_cast<int>(i) + b.n_min() + 1;
        if (base > hi) break;
        size_t jmax = std::min(bc.size(), static_cast<size_t>(hi - base + 1));
        for (size_t j = 0; j < jmax; ++j) c[base + j - lo] += ac[i] * bc[j];
    }
    return LaurentMap(lo, std::move(c), eps);
}

LaurentMap reciprocal(const LaurentMap& a, int trunc) {
    if (!a.is_taylor() || a.coeff(-1) == cd(0.0))
        throw std::invalid_argument("reciprocal needs a Taylor series with nonzero constant term");
    // powers 0..trunc+1
    int P = trunc + 1;
    if (P < 0) return LaurentMap(0, {}, a.eps());
    std::vector<cd> r(P + 1, 0.0);
    cd a0 = a.power(0);
    r[0] = 1.0 / a0;
    for (int k = 1; k <= P; ++k) {
        cd s = 0.0;
        for (int j = 1; j <= k; ++j) s += a.power(j) * r[k - j];
        r[k] = -s / a0;
    }
    return LaurentMap(-1, std::move(r), a.eps());
}

LaurentMap divide(const LaurentMap& a, const LaurentMap& b, int trunc) {
    if (b.empty()) throw std::invalid_argument("division by zero series");
    int k = b.min_power();
    if (k < 0) throw std::invalid_argument("divisor must not have negative powers");
    // b = z^k u, u(0) != 0
    LaurentMap u(-1, b.data(), b.eps());
    LaurentMap ru = reciprocal(u, trunc + k);
    LaurentMap q = mul(a, ru, trunc + k);
    // shift by z^{-k}
    if (q.empty()) return q;
    return LaurentMap(q.n_min() - k, q.data(), q.eps()).truncated(trunc);
}

double seminorm(const LaurentMap& f, double eps, int k) {
    double s = 0.0;
    const auto& c = f.data();
    for (size_t i = 0; i < c.size(); ++i) {
        int n = f.n_min() + static_cast<int>(i);
        int an = std::abs(n);
        s += std::pow(1 + eps, 2 * an + 2) * std::pow(1.0 + an, 2 * k) * std::norm(c[i]);
    }
    return std::sqrt(s);
}

std::vector<cd> circle_points(int n, double rho) {
    std::vector<cd> z(n);
    for (int j = 0; j < n; ++j) z[j] = std::polar(rho, 2 * kPi * j / n);
    return z;
}

namespace {

void check_composition_domain(const LaurentMap& f, const LaurentMap& g) {
    constexpr int kGrid = 256;
    double outer = 1 + f.eps();
    double inner = 1 / (1 + f.eps());
    bool f_laurent = !f.is_taylor();
    std::vector<double> radii{1 + g.eps()};
    if (!g.is_taylor()) radii.push_back(1 / (1 + g.eps()));
    double slack = 1e-12;
    for (double rho : radii) {
        for (cd z : circle_points(kGrid, rho)) {
            cd w = g(z);
            double m = std::abs(w);
            if (m > outer * (1 + slack) || (f_laurent && m < inner * (1 - slack))) {
                std::ostringstream os;
                os << "composition leaves the domain of the outer map at sample z=" << z << " (|g(z)|=" << m << ")";
                throw DomainError(os.str(), z);
            }
        }
    }
    if (f_laurent && g.is_taylor() && std::abs(g(0.0)) < inner) {
        throw DomainError("composition leaves the domain of the outer map at sample z=0", 0.0);
    }
}

LaurentMap shift_powers(const LaurentMap& a, int k) {
    if (a.empty()) return a;
    return LaurentMap(a.n_min() + k, a.data(), a.eps());
}

}  // namespace

LaurentMap compose(const LaurentMap& f, const LaurentMap& g, int trunc, bool check_domain) {
    if (check_domain) check_composition_domain(f, g);
    double eps = g.eps();
    if (f.empty()) return LaurentMap(0, {}, eps);
    if (g.empty()) {
        if (!f.is_taylor()) throw DomainError("composition with the zero map", 0.0);
        return LaurentMap::constant(f.power(0), eps);
    }
    // Nonnegative powers by Horner. Truncation above is safe when g has no negative powers.
    LaurentMap acc(0, {}, eps);
    int top = f.max_power();
    int gmin = g.min_power();
    if (top >= 0) {
        if (gmin >= 0) {
            for (int k = top; k >= 0; --k) acc = mul(acc, g, trunc) + LaurentMap::constant(f.power(k), eps);
        } else {
            // Laurent inner map: powers of g reach below; keep enough headroom above.
            int head = trunc + (top)*std::max(0, -gmin) + 1;
            for (int k = top; k >= 0; --k) acc = mul(acc, g, head) + LaurentMap::constant(f.power(k), eps);
            acc = acc.truncated(trunc);
        }
    }
    int bottom = f.min_power();
    if (bottom < 0) {
        int K = -bottom;
        // g = z^{k0} u with u(0) != 0; needs u Taylor.
        int k0 = gmin;
        LaurentMap u = shift_powers(g, -k0);
        if (!u.is_taylor()) throw std::invalid_argument("negative-power composition needs a monomial-leading inner map");
        int head = trunc + K * std::max(k0, 0) + 1;
        LaurentMap ru = reciprocal(u, head);
        LaurentMap pw = LaurentMap::constant(1.0, eps);
        for (int k = 1; k <= K; ++k) {
            pw = mul(pw, ru, head);
            cd a = f.power(-k);
            if (a == cd(0.0)) continue;
            acc = acc + shift_powers(pw, -k * k0).truncated(trunc) * a;
        }
    }
    return acc.truncated(trunc).with_eps(eps);
}

LaurentMap invert(const LaurentMap& f, int trunc) {
    if (!f.is_taylor()) throw std::invalid_argument("invert: series has negative powers");
    cd f0 = f.coeff(0);
    if (f0 == cd(0.0)) throw std::invalid_argument("invert: zero linear coefficient");
    double scale = seminorm(f, 0.0, 0);
    if (std::abs(f.coeff(-1)) > 1e-14 * scale) throw std::invalid_argument("invert: map does not fix 0");
    LaurentMap fz = (f - LaurentMap::constant(f.coeff(-1))).truncated(trunc);
    LaurentMap df = fz.derivative();
    LaurentMap id = LaurentMap::identity();
    LaurentMap g = LaurentMap::monomial(1, 1.0 / f0);
    int iters = 3;
    for (int m = 1; m < trunc + 2; m *= 2) ++iters;
    for (int it = 0; it < iters; ++it) {
        LaurentMap r = compose(fz, g, trunc, false) - id;
        if (r.empty()) break;
        LaurentMap d = compose(df, g, trunc, false);
        g = (g - mul(r, reciprocal(d, trunc), trunc)).truncated(trunc);
    }
    return g;
}

cd h_coefficient(const LaurentMap& v, int n) { return -v.coeff(n); }

LaurentMap from_h_coefficients(const std::vector<std::pair<int, cd>>& vn, double eps) {
    std::vector<std::pair<int, cd>> terms;
    for (auto& [n, c] : vn) terms.emplace_back(n + 1, -c);
    return LaurentMap::from_powers(terms, eps);
}

bool is_markovian(const LaurentMap& v, int grid) {
    grid = std::max(grid, 64);
    for (cd z : circle_points(grid)) {
        if (!(std::real(std::conj(z) * v(z)) < 0.0)) return false;
    }
    return true;
}

CoercivityReport coercivity(const LaurentMap& v, double C) {
    CoercivityReport r;
    r.C = C;
    cd v0 = h_coefficient(v, 0);
    r.omega = v0.real();
    double s = std::norm(v0.imag());
    const auto& c = v.data();
    for (size_t i = 0; i < c.size(); ++i) {
        int n = v.n_min() + static_cast<int>(i);
        if (n == 0) continue;
        s += std::pow(1.0 + std::abs(n), 5) * std::norm(c[i]);
    }
    r.rhs = C * std::sqrt(s);
    r.coercive = r.omega > 0.0 && r.omega * r.omega > C * C * s;
    return r;
}

int winding_number(const LaurentMap& f, cd w0, double rho, int grid, bool* ok) {
    double total = 0.0;
    cd prev = f(std::polar(rho, 0.0)) - w0;
    bool good = std::abs(prev) > 0.0;
    for (int j = 1; j <= grid; ++j) {
        cd cur = f(std::polar(rho, 2 * kPi * j / grid)) - w0;
        if (std::abs(cur) == 0.0) good = false;
        double d = std::arg(cur / prev);
        if (std::abs(d) > kPi / 2) good = false;
        total += d;
        prev = cur;
    }
    if (ok) *ok = good;
    return static_cast<int>(std::lround(total / (2 * kPi)));
}

namespace {

double cross(cd a, cd b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(cd p1, cd p2, cd q1, cd q2) {
    double d1 = cross(q2 - q1, p1 - q1);
    double d2 = cross(q2 - q1, p2 - q1);
    double d3 = cross(p2 - p1, q1 - p1);
    double d4 = cross(p2 - p1, q2 - p1);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

bool polygon_is_simple(const std::vector<cd>& pts) {
    size_t n = pts.size();
    if (n < 4) return true;
    // bounding boxes prune most pairs
    for (size_t i = 0; i < n; ++i) {
        cd a = pts[i], b = pts[(i + 1) % n];
        double ax0 = std::min(a.real(), b.real()), ax1 = std::max(a.real(), b.real());
        double ay0 = std::min(a.imag(), b.imag()), ay1 = std::max(a.imag(), b.imag());
        for (size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            cd c = pts[j], d = pts[(j + 1) % n];
            if (std::max(c.real(), d.real()) < ax0 || std::min(c.real(), d.real()) > ax1) continue;
            if (std::max(c.imag(), d.imag()) < ay0 || std::min(c.imag(), d.imag()) > ay1) continue;
            if (segments_cross(a, b, c, d)) return false;
        }
    }
    return true;
}

namespace {

struct CircleCheck {
    bool simple = false;
    bool resolved = true;
    int wind_df = 0;
    int wind_f = 0;
    double max_mod = 0.0;
};

CircleCheck check_circle(const LaurentMap& f, const LaurentMap& df, double rho, cd centre) {
    CircleCheck c;
    constexpr int kGrid = 512;
    bool ok1 = true, ok2 = true;
    c.wind_df = winding_number(df, 0.0, rho, kGrid, &ok1);
    c.wind_f = winding_number(f, centre, rho, kGrid, &ok2);
    c.resolved = ok1 && ok2;
    auto pts = f.evaluate(circle_points(kGrid, rho));
    for (cd w : pts) c.max_mod = std::max(c.max_mod, std::abs(w));
    c.simple = polygon_is_simple(pts);
    return c;
}

double min_pair_ratio(const LaurentMap& f, double rho) {
    constexpr int kSamples = 128;
    auto z = circle_points(kSamples, rho);
    auto w = f.evaluate(z);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kSamples; ++i)
        for (int j = i + 1; j < kSamples; ++j) best = std::min(best, std::abs(w[i] - w[j]) / std::abs(z[i] - z[j]));
    return best;
}

}  // namespace

Membership classify(const LaurentMap& f) {
    Membership m;
    m.note = "semi-decision from boundary samples";
    if (f.empty()) {
        m.note = "zero map";
        return m;
    }
    double scale = seminorm(f, 0.0, 0);
    m.f0_zero = f.is_taylor() && std::abs(f.coeff(-1)) <= 1e-14 * scale;
    LaurentMap df = f.derivative();
    std::ostringstream note;
    note << "semi-decision from boundary samples";

    cd centre = f.is_taylor() ? f(0.0) : cd(0.0);
    CircleCheck unit = check_circle(f, df, 1.0, centre);
    m.max_modulus = unit.max_mod;
    m.winding_derivative = unit.wind_df;
    m.winding_map = unit.wind_f;
    m.min_pair_ratio = min_pair_ratio(f, 1.0);
    if (!unit.resolved) m.conclusive = false;
    if (m.min_pair_ratio < 1e-6) {
        m.conclusive = false;
        note << "; near-coincident boundary samples";
    }

    bool disk_univalent = f.is_taylor() && unit.wind_df == 0 && unit.wind_f == 1 && unit.simple;
    m.in_S = m.f0_zero && f.coeff(0) != cd(0.0) && disk_univalent && unit.max_mod < 1.0;

    if (f.eps() > 0.0) {
        double R = 1 + f.eps();
        CircleCheck big = check_circle(f, df, R, centre);
        if (!big.resolved) m.conclusive = false;
        m.in_S_eps = m.in_S && big.wind_df == 0 && big.wind_f == 1 && big.simple;

        // Annulus class: biholomorphic on delta < |z| < 1/delta, and f(T) inside the open disk.
        double delta = 1 / R;
        CircleCheck in = check_circle(f, df, delta, centre);
        if (!in.resolved) m.conclusive = false;
        bool no_critical = (big.wind_df == in.wind_df);
        bool same_orientation = (big.wind_f == in.wind_f) && std::abs(big.wind_f) == 1;
        m.in_S_delta_annulus = no_critical && same_orientation && big.simple && in.simple && unit.simple &&
                               unit.max_mod < 1.0 && m.min_pair_ratio > 0.0;
    } else {
        note << "; eps = 0 so the eps-classes are not tested";
    }
    if (!m.conclusive) note << "; inconclusive";
    m.note = note.str();
    return m;
}

}  // namespace segal
