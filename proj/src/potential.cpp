#include "segal/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace segal {

BoundaryField BoundaryField::from_xy(double c, const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y mode lists differ in length");
    std::vector<cd> m(x.size());
    for (size_t i = 0; i < x.size(); ++i) m[i] = cd(x[i], y[i]) / (2 * std::sqrt(double(i + 1)));
    return BoundaryField(c, m);
}

BoundaryField BoundaryField::from_samples(const std::vector<double>& samples, int n_max) {
    CVec m = analyze(samples, n_max);
    std::vector<cd> pos(n_max);
    for (int n = 1; n <= n_max; ++n) pos[n - 1] = m(n_max + n);
    return BoundaryField(m(n_max).real(), pos);
}

cd BoundaryField::mode(int n) const {
    if (n == 0) return c_;
    int a = std::abs(n);
    if (a > n_max()) return 0.0;
    return n > 0 ? modes_[a - 1] : std::conj(modes_[a - 1]);
}

double BoundaryField::operator()(double theta) const {
    double v = c_;
    for (int n = 1; n <= n_max(); ++n) v += 2 * std::real(modes_[n - 1] * std::polar(1.0, n * theta));
    return v;
}

std::vector<double> BoundaryField::sample(int nodes) const {
    std::vector<double> s(nodes);
    for (int j = 0; j < nodes; ++j) s[j] = (*this)(2 * kPi * j / nodes);
    return s;
}

CVec BoundaryField::mode_vector(int K) const {
    CVec v(2 * K + 1);
    for (int k = -K; k <= K; ++k) v(k + K) = mode(k);
    return v;
}

BoundaryField BoundaryField::operator+(const BoundaryField& o) const {
    int n = std::max(n_max(), o.n_max());
    std::vector<cd> m(n);
    for (int k = 1; k <= n; ++k) m[k - 1] = mode(k) + o.mode(k);
    return BoundaryField(c_ + o.c_, m);
}

BoundaryField BoundaryField::operator-(const BoundaryField& o) const {
    int n = std::max(n_max(), o.n_max());
    std::vector<cd> m(n);
    for (int k = 1; k <= n; ++k) m[k - 1] = mode(k) - o.mode(k);
    return BoundaryField(c_ - o.c_, m);
}

cd pairing(const CVec& u, const CVec& v) { return (u.array() * v.array().conjugate()).sum(); }

std::vector<double> harmonic_extension_disk(const BoundaryField& phi, const std::vector<cd>& points) {
    std::vector<double> out;
    out.reserve(points.size());
    for (cd z : points) {
        if (std::abs(z) >= 1.0) {
            std::ostringstream os;
            os << "harmonic extension requested outside the open disk at " << z;
            throw DomainError(os.str(), z);
        }
        double v = phi.c();
        cd zn = 1.0;
        for (int n = 1; n <= phi.n_max(); ++n) {
            zn *= z;
            v += 2 * std::real(phi.mode(n) * zn);
        }
        out.push_back(v);
    }
    return out;
}

double green_disk(cd x, cd y) {
    if (std::abs(x) >= 1.0 || std::abs(y) >= 1.0) throw DomainError("Green function needs points in the open disk", x);
    if (x == y) throw std::invalid_argument("Green function at coincident points");
    return std::log(std::abs(1.0 - x * std::conj(y))) - std::log(std::abs(x - y));
}

std::vector<cd> synthesize(const CVec& modes, int nodes) {
    int K = (static_cast<int>(modes.size()) - 1) / 2;
    std::vector<cd> s(nodes, 0.0);
    for (int j = 0; j < nodes; ++j) {
        double t = 2 * kPi * j / nodes;
        for (int k = -K; k <= K; ++k) s[j] += modes(k + K) * std::polar(1.0, k * t);
    }
    return s;
}

CVec analyze(const std::vector<cd>& samples, int n_max) {
    int N = static_cast<int>(samples.size());
    CVec m = CVec::Zero(2 * n_max + 1);
    for (int j = 0; j < N; ++j) {
        double t = 2 * kPi * j / N;
        for (int k = -n_max; k <= n_max; ++k) m(k + n_max) += samples[j] * std::polar(1.0, -k * t);
    }
    return m / double(N);
}

CVec analyze(const std::vector<double>& samples, int n_max) {
    return analyze(std::vector<cd>(samples.begin(), samples.end()), n_max);
}

namespace {

struct CurveNodes {
    std::vector<cd> x, d, dd;  // position, first and second theta-derivatives
    std::vector<double> speed;
    std::vector<cd> normal;    // unit normal pointing away from the domain
};

// side = +1 when the domain lies inside the curve, -1 when it lies outside.
CurveNodes sample_curve(const LaurentMap& g, int N, int side) {
    CurveNodes c;
    LaurentMap g1 = g.derivative();
    LaurentMap g2 = g1.derivative();
    for (int j = 0; j < N; ++j) {
        cd z = std::polar(1.0, 2 * kPi * j / N);
        cd f1 = g1(z), f2 = g2(z);
        cd d = cd(0, 1) * z * f1;
        cd dd = -z * f1 - z * z * f2;
        c.x.push_back(g(z));
        c.d.push_back(d);
        c.dd.push_back(dd);
        c.speed.push_back(std::abs(d));
        c.normal.push_back(cd(0, -1) * double(side) * d / std::abs(d));
    }
    return c;
}

std::vector<double> kress_weights(int N) {
    if (N % 2 != 0) throw std::invalid_argument("node count must be even");
    int n = N / 2;
    std::vector<double> R(N);
    for (int k = 0; k < N; ++k) {
        double s = 0.0;
        double a = k * kPi / n;
        for (int m = 1; m < n; ++m) s += std::cos(m * a) / m;
        R[k] = -(2 * kPi / n) * s - (kPi / (double(n) * n)) * std::cos(n * a);
    }
    return R;
}

NodalDn solve_dn(const std::vector<CurveNodes>& curves, int N) {
    const int M = static_cast<int>(curves.size());
    const int T = M * N;
    const double h = 2 * kPi / N;
    auto R = kress_weights(N);
    RMat A = RMat::Zero(T + 1, T + 1);
    RMat K = RMat::Zero(T, T);
    for (int a = 0; a < M; ++a) {
        const auto& ca = curves[a];
        for (int i = 0; i < N; ++i) {
            int row = a * N + i;
            cd x = ca.x[i];
            cd nu = ca.normal[i];
            for (int b = 0; b < M; ++b) {
                const auto& cb = curves[b];
                for (int j = 0; j < N; ++j) {
                    int col = b * N + j;
                    double wj = cb.speed[j];
                    if (a == b) {
                        double smooth;
                        if (i == j) {
                            smooth = std::log(cb.speed[j] * cb.speed[j]);
                        } else {
                            double s = std::sin((i - j) * kPi / N);
                            smooth = std::log(std::norm(x - cb.x[j]) / (4 * s * s));
                        }
                        A(row, col) = -(1 / (2 * kPi)) * (0.5 * R[(i - j + N) % N] + 0.5 * h * smooth) * wj;
                    } else {
                        A(row, col) = -(1 / (2 * kPi)) * h * std::log(std::abs(x - cb.x[j])) * wj;
                    }
                    if (a == b && i == j) {
                        double curv = std::real(ca.dd[i] * std::conj(nu));
                        K(row, col) = curv / (4 * kPi * ca.speed[i] * ca.speed[i]) * wj * h;
                    } else {
                        cd r = x - cb.x[j];
                        K(row, col) = -(1 / (2 * kPi)) * std::real(r * std::conj(nu)) / std::norm(r) * wj * h;
                    }
                }
            }
            A(row, T) = 1.0;
        }
    }
    for (int b = 0; b < M; ++b)
        for (int j = 0; j < N; ++j) A(T, b * N + j) = curves[b].speed[j] * h;

    Eigen::PartialPivLU<RMat> lu(A);
    RMat rhs = RMat::Zero(T + 1, T);
    rhs.topRows(T) = RMat::Identity(T, T);
    RMat sol = lu.solve(rhs);
    RMat sigma = sol.topRows(T);
    if (!sigma.allFinite()) throw std::runtime_error("boundary integral system is singular");
    RMat D = K * sigma + 0.5 * sigma;
    for (int a = 0; a < M; ++a)
        for (int i = 0; i < N; ++i) D.row(a * N + i) *= curves[a].speed[i];
    NodalDn out;
    out.nodes = N;
    out.circles = M;
    out.matrix = std::move(D);
    return out;
}

void check_nodes(int nodes) {
    if (nodes < 128 || (nodes & (nodes - 1)) != 0) throw std::invalid_argument("node count must be a power of two >= 128");
}

}  // namespace

Separation curve_separation(const LaurentMap& outer, const LaurentMap& inner, int nodes) {
    auto zs = circle_points(nodes);
    auto xo = outer.evaluate(zs), xi = inner.evaluate(zs);
    Separation s;
    s.min_distance = std::numeric_limits<double>::infinity();
    for (cd a : xo)
        for (cd b : xi) s.min_distance = std::min(s.min_distance, std::abs(a - b));
    for (int j = 0; j < nodes; ++j) {
        s.spacing = std::max(s.spacing, std::abs(xo[(j + 1) % nodes] - xo[j]));
        s.spacing = std::max(s.spacing, std::abs(xi[(j + 1) % nodes] - xi[j]));
    }
    return s;
}

NodalDn nodal_dn_two_curves(const LaurentMap& outer, const LaurentMap& inner, int nodes) {
    check_nodes(nodes);
    Separation sep = curve_separation(outer, inner, nodes);
    if (sep.min_distance < 10 * sep.spacing) {
        std::ostringstream os;
        os << "boundary curves too close for " << nodes << " nodes: distance " << sep.min_distance << " < 10 x spacing "
           << sep.spacing;
        throw std::runtime_error(os.str());
    }
    std::vector<CurveNodes> curves{sample_curve(outer, nodes, +1), sample_curve(inner, nodes, -1)};
    return solve_dn(curves, nodes);
}

NodalDn nodal_dn_interior(const LaurentMap& curve, int nodes) {
    check_nodes(nodes);
    std::vector<CurveNodes> curves{sample_curve(curve, nodes, +1)};
    return solve_dn(curves, nodes);
}

DnOperator nodal_to_modes(const NodalDn& d, int n_max, DnKind kind) {
    const int N = d.nodes, W = 2 * n_max + 1;
    if (N < 4 * n_max) throw std::invalid_argument("node count below 4 n_max");
    CMat E(N, W);
    for (int j = 0; j < N; ++j)
        for (int k = -n_max; k <= n_max; ++k) E(j, k + n_max) = std::polar(1.0, 2 * kPi * k * j / N);
    DnOperator out;
    out.kind = kind;
    out.n_max = n_max;
    out.circles = d.circles;
    out.blocks = CMat::Zero(W * d.circles, W * d.circles);
    for (int a = 0; a < d.circles; ++a)
        for (int b = 0; b < d.circles; ++b) {
            CMat blk = E.adjoint() * d.block(a, b).cast<cd>() * E / double(N);
            out.blocks.block(a * W, b * W, W, W) = blk;
        }
    return out;
}

DnOperator dn_disk(int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    DnOperator d;
    d.kind = DnKind::Disk;
    d.n_max = n_max;
    d.circles = 1;
    d.blocks = CMat::Zero(2 * n_max + 1, 2 * n_max + 1);
    for (int k = -n_max; k <= n_max; ++k) d.blocks(k + n_max, k + n_max) = double(std::abs(k));
    return d;
}

NodalDn nodal_dn_annulus(const LaurentMap& f, int nodes) {
    auto m = classify(f);
    if (m.max_modulus >= 1.0) throw DomainError("inner curve leaves the open unit disk", 0.0);
    return nodal_dn_two_curves(LaurentMap::identity(), f, nodes);
}

DnOperator dn_annulus(const LaurentMap& f, int n_max, int nodes) {
    return nodal_to_modes(nodal_dn_annulus(f, nodes), n_max, DnKind::Annulus);
}

RMat nodal_dn_interior_curve(const LaurentMap& f, int nodes) {
    NodalDn ann = nodal_dn_annulus(f, nodes);
    NodalDn in = nodal_dn_interior(f, nodes);
    return ann.block(1, 1) + in.matrix;
}

DnOperator dn_interior_curve(const LaurentMap& f, int n_max, int nodes) {
    NodalDn d;
    d.nodes = nodes;
    d.circles = 1;
    d.matrix = nodal_dn_interior_curve(f, nodes);
    return nodal_to_modes(d, n_max, DnKind::InteriorCurve);
}

std::vector<double> omega_samples(const LaurentMap& f, int nodes) {
    LaurentMap df = f.derivative();
    std::vector<double> w(nodes);
    for (int j = 0; j < nodes; ++j) {
        cd z = std::polar(1.0, 2 * kPi * j / nodes);
        w[j] = std::log(std::abs(z * df(z) / f(z)));
    }
    return w;
}

namespace {

double node_pairing(const RVec& a, const RVec& b) { return a.dot(b) / double(a.size()); }

RVec to_vec(const std::vector<double>& v) { return Eigen::Map<const RVec>(v.data(), v.size()); }

// (D u, u)_2 for the disk DN map from equispaced samples.
double disk_energy(const std::vector<double>& u) {
    int N = static_cast<int>(u.size());
    CVec m = analyze(u, N / 2 - 1);
    double s = 0.0;
    int K = N / 2 - 1;
    for (int k = -K; k <= K; ++k) s += std::abs(k) * std::norm(m(k + K));
    return s;
}

}  // namespace

ColinResidual colin_identities(const LaurentMap& f, const BoundaryField& phi1, const BoundaryField& phi2,
                               const std::vector<double>& omega, int nodes) {
    ColinResidual r;
    auto zs = circle_points(nodes);
    auto p = harmonic_extension_disk(phi1, f.evaluate(zs));
    RVec u1 = to_vec(phi1.sample(nodes)), u2 = to_vec(phi2.sample(nodes)), pv = to_vec(p), om = to_vec(omega);
    NodalDn ann = nodal_dn_annulus(f, nodes);
    NodalDn in = nodal_dn_interior(f, nodes);
    RMat ddc = ann.block(1, 1) + in.matrix;

    RVec diff = u2 - pv;
    double lhs1 = node_pairing(ddc * diff, diff);
    RVec both(2 * nodes);
    both << u1, u2;
    RVec ab = ann.matrix * both;
    double ann_energy = node_pairing(ab.head(nodes), u1) + node_pairing(ab.tail(nodes), u2);
    double rhs1 = ann_energy - disk_energy(phi1.sample(nodes)) + disk_energy(phi2.sample(nodes));
    r.quadratic = std::abs(lhs1 - rhs1);

    double lhs2 = node_pairing(ddc * om, pv);
    double rhs2 = -node_pairing(ann.block(0, 1) * om, u1);
    r.linear = std::abs(lhs2 - rhs2);
    return r;
}

ColinResidual colin_identities(const LaurentMap& f, const BoundaryField& phi1, const BoundaryField& phi2, int nodes) {
    return colin_identities(f, phi1, phi2, omega_samples(f, nodes), nodes);
}

std::vector<double> geodesic_curvature(const LaurentMap& f, int nodes) {
    LaurentMap d1 = f.derivative(), d2 = d1.derivative();
    std::vector<double> k(nodes);
    for (int j = 0; j < nodes; ++j) {
        cd z = std::polar(1.0, 2 * kPi * j / nodes);
        cd F = f(z), F1 = d1(z), F2 = d2(z);
        cd G1 = 1.0 / z + F2 / F1 - F1 / F;
        k[j] = -(std::abs(F) / std::abs(F1)) * std::real(z * G1);
    }
    return k;
}

double curvature_identity_residual(const LaurentMap& f, int nodes) {
    auto om = omega_samples(f, nodes);
    auto k = geodesic_curvature(f, nodes);
    NodalDn ann = nodal_dn_annulus(f, nodes);
    NodalDn in = nodal_dn_interior(f, nodes);
    RVec w = to_vec(om);
    RVec ddc = (ann.block(1, 1) + in.matrix) * w;
    RVec a2 = ann.block(1, 1) * w;
    double r = 0.0;
    for (int j = 0; j < nodes; ++j) r = std::max(r, std::abs(ddc(j) + std::exp(om[j]) * k[j] - a2(j)));
    return r;
}

}  // namespace segal
