#include "segal/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "segal/quadrature.hpp"

namespace segal {

namespace {

const double kSqrt2Pi = std::sqrt(2.0) * kPi;

double psi(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); }
double psi_d1(double x) { return x <= 0.0 ? 0.0 : psi(x) / (x * x); }
double psi_d2(double x) { return x <= 0.0 ? 0.0 : psi(x) * (1.0 / (x * x * x * x) - 2.0 / (x * x * x)); }

double max_modulus(const LaurentMap& f, double rho, int grid = 256) {
    double m = 0.0;
    for (cd z : circle_points(grid, rho)) m = std::max(m, std::abs(f(z)));
    return m;
}

struct ChartSample {
    double H, drho_H, grad2;
};

ChartSample chart_sample(const LaurentMap& f, const LaurentMap& df, const LaurentMap& d2f, double rho, double theta) {
    cd e = std::polar(1.0, theta), z = rho * e;
    cd fz = f(z), dfz = df(z), d2fz = d2f(z);
    cd Gp = 1.0 / z + d2fz / dfz - dfz / fz;
    return {std::log(std::abs(z * dfz / fz)), (Gp * e).real(), std::norm(Gp)};
}

}  // namespace

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double p = psi(x), q = psi(1.0 - x);
    return p / (p + q);
}

double smooth_step_d1(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    double p = psi(x), q = psi(1.0 - x), dp = psi_d1(x), dq = -psi_d1(1.0 - x);
    double D = p + q;
    return (dp * q - p * dq) / (D * D);
}

double smooth_step_d2(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    double p = psi(x), q = psi(1.0 - x), dp = psi_d1(x), dq = -psi_d1(1.0 - x);
    double d2p = psi_d2(x), d2q = psi_d2(1.0 - x);
    double D = p + q, dD = dp + dq;
    double N = dp * q - p * dq, dN = d2p * q - p * d2q;
    return (dN * D - 2.0 * N * dD) / (D * D * D);
}

double RadialBump::value(double rho) const { return 1.0 - smooth_step((rho - rho_a) / (rho_b - rho_a)); }
double RadialBump::d1(double rho) const {
    double w = rho_b - rho_a;
    return -smooth_step_d1((rho - rho_a) / w) / w;
}
double RadialBump::d2(double rho) const {
    double w = rho_b - rho_a;
    return -smooth_step_d2((rho - rho_a) / w) / (w * w);
}

RadialBump make_bump(double R, CutoffProfile profile) {
    if (!(R > 1.0)) throw std::invalid_argument("make_bump: chart radius must exceed 1");
    double lo = profile == CutoffProfile::A ? 0.25 : 0.1;
    double hi = profile == CutoffProfile::A ? 0.75 : 0.9;
    return {1.0 + lo * (R - 1.0), 1.0 + hi * (R - 1.0)};
}

double chart_radius(const LaurentMap& f) {
    double m1 = max_modulus(f, 1.0);
    if (m1 >= 1.0) throw DomainError("chart_radius: f(T) leaves the open unit disk", 0.0);
    double target = 0.5 * (1.0 + m1);
    auto ok = [&](double R) { return max_modulus(f, R) <= target; };
    double good = 1.0, step = 0.01;
    while (good + step <= 2.0 && ok(good + step)) good += step;
    if (good + step > 2.0) return ok(2.0) ? 2.0 : good;
    double bad = good + step;
    for (int i = 0; i < 40; ++i) {
        double mid = 0.5 * (good + bad);
        (ok(mid) ? good : bad) = mid;
    }
    return good;
}

double chart_liouville_action(const LaurentMap& f, const RadialBump* b1, const RadialBump* b2, const CutoffSpec& spec) {
    double R = spec.chart_radius > 0.0 ? spec.chart_radius : chart_radius(f);
    LaurentMap df = f.derivative(), d2f = df.derivative();
    QuadratureRule rq = composite_gauss(spec.radial_panels, spec.radial_points, 1.0, R);
    const int M = spec.angular;
    double total = 0.0;
    for (size_t i = 0; i < rq.x.size(); ++i) {
        double rho = rq.x[i];
        double v1 = b1 ? b1->value(rho) : 0.0, d1 = b1 ? b1->d1(rho) : 0.0, dd1 = b1 ? b1->d2(rho) : 0.0;
        double v2 = b2 ? b2->value(rho) : 0.0, d2 = b2 ? b2->d1(rho) : 0.0;
        double db = v2 - v1, ddb = d2 - d1;
        if (db == 0.0 && ddb == 0.0) continue;
        double ring = 0.0;
        for (int j = 0; j < M; ++j) {
            ChartSample c = chart_sample(f, df, d2f, rho, 2 * kPi * j / M);
            double grad_d = ddb * ddb * c.H * c.H + 2.0 * ddb * db * c.H * c.drho_H + db * db * c.grad2;
            double lap_chi1 = dd1 * c.H + d1 * c.H / rho + 2.0 * d1 * c.drho_H;
            ring += 4.0 * grad_d - 8.0 * db * c.H * lap_chi1;
        }
        total += rq.w[i] * rho * ring * (2 * kPi / M);
    }
    return total / (96.0 * kPi);
}

double cutoff_action(const LaurentMap& f, const CutoffSpec& spec) {
    CutoffSpec sp = spec;
    if (sp.chart_radius <= 0.0) sp.chart_radius = chart_radius(f);
    RadialBump b = make_bump(sp.chart_radius, sp.profile);
    return chart_liouville_action(f, &b, nullptr, sp);
}

double metric_change_action(const LaurentMap& f, CutoffProfile from, CutoffProfile to, const CutoffSpec& spec) {
    CutoffSpec sp = spec;
    if (sp.chart_radius <= 0.0) sp.chart_radius = chart_radius(f);
    RadialBump b1 = make_bump(sp.chart_radius, from), b2 = make_bump(sp.chart_radius, to);
    return chart_liouville_action(f, &b1, &b2, sp);
}

double omega_energy(const LaurentMap& f, int nodes) {
    CVec w = analyze(omega_samples(f, nodes), nodes / 2 - 1);
    const int K = nodes / 2 - 1;
    double e = 0.0;
    for (int k = -K; k <= K; ++k) e += std::abs(k) * std::norm(w(k + K));
    return e;
}

double W_constant(const LaurentMap& f, const CutoffSpec& spec) {
    return -std::log(std::abs(f.power(1))) - omega_energy(f, 2 * spec.angular) - 12.0 * cutoff_action(f, spec);
}

double C_f_constant(const LaurentMap& f, double c_L, int nodes) {
    return std::exp(c_L / 12.0 * std::log(std::abs(f.power(1))) + omega_energy(f, nodes) / 12.0) / kSqrt2Pi;
}

PlaneField PlaneField::zero() {
    return {[](cd) { return 0.0; }, [](cd) { return cd(0.0); }, [](cd) { return 0.0; }};
}

AnnulusGrid annulus_grid(const LaurentMap& f, int radial_panels, int radial_points, int angular) {
    AnnulusGrid g;
    LaurentMap df = f.derivative();
    QuadratureRule sq = composite_gauss(radial_panels, radial_points, 0.0, 1.0);
    const double dth = 2 * kPi / angular;
    std::vector<cd> e(angular), fe(angular), dfe(angular);
    for (int j = 0; j < angular; ++j) {
        e[j] = std::polar(1.0, j * dth);
        fe[j] = f(e[j]);
        dfe[j] = df(e[j]);
    }
    for (size_t i = 0; i < sq.x.size(); ++i) {
        double s = sq.x[i];
        for (int j = 0; j < angular; ++j) {
            cd Ps = fe[j] - e[j];
            cd Pt = cd(0, 1) * e[j] * ((1.0 - s) + s * dfe[j]);
            g.x.push_back((1.0 - s) * e[j] + s * fe[j]);
            g.w.push_back(sq.w[i] * dth * std::abs((std::conj(Ps) * Pt).imag()));
        }
    }
    for (int j = 0; j < angular; ++j) {
        g.bx.push_back(e[j]);
        g.bnormal.push_back(-e[j]);
        g.bw.push_back(dth);
    }
    for (int j = 0; j < angular; ++j) {
        cd tangent = cd(0, 1) * e[j] * dfe[j];
        g.bx.push_back(fe[j]);
        g.bnormal.push_back(-cd(0, 1) * tangent / std::abs(tangent));
        g.bw.push_back(std::abs(tangent) * dth);
    }
    return g;
}

double grid_area(const AnnulusGrid& g) {
    double a = 0.0;
    for (double w : g.w) a += w;
    return a;
}

double liouville_action(const AnnulusGrid& g, const PlaneField& sigma0, const PlaneField& omega) {
    double total = 0.0;
    for (size_t i = 0; i < g.x.size(); ++i) {
        cd x = g.x[i];
        total += g.w[i] * (std::norm(omega.grad(x)) - 2.0 * omega.value(x) * sigma0.laplacian(x));
    }
    return total / (96.0 * kPi);
}

double boundary_flux_pairing(const AnnulusGrid& g, const PlaneField& a, const PlaneField& b) {
    double total = 0.0;
    for (size_t i = 0; i < g.bx.size(); ++i) {
        cd x = g.bx[i];
        double dnu = (a.grad(x) * std::conj(g.bnormal[i])).real();
        total += g.bw[i] * dnu * b.value(x);
    }
    return total;
}

LiouvilleResult liouville_action_checked(const LaurentMap& f, const PlaneField& sigma0, const PlaneField& omega,
                                         int radial_panels, int radial_points, int angular) {
    LiouvilleResult r;
    r.value = liouville_action(annulus_grid(f, radial_panels, radial_points, angular), sigma0, omega);
    r.coarse = liouville_action(annulus_grid(f, std::max(1, radial_panels / 2), radial_points, std::max(8, angular / 2)),
                                sigma0, omega);
    r.converged = std::abs(r.value - r.coarse) <= 1e-4;
    return r;
}

Amplitude amplitude_operator(const LaurentMap& f, const FockSector& s, const CutoffSpec& spec, int nodes) {
    Amplitude a;
    a.W = W_constant(f, spec);
    a.scale = kSqrt2Pi * std::exp(s.params().c_L() * a.W / 12.0);
    a.op = propagator_matrix(f, s, nodes);
    a.op.matrix *= a.scale;
    return a;
}

ModelForm model_form(const LaurentMap& f, double a, int trunc) {
    if (!f.is_taylor()) throw std::invalid_argument("model_form: map must be holomorphic in the disk");
    ModelForm m;
    m.a = a;
    m.c = f(0.0);
    if (a * (1.0 - std::abs(m.c)) <= 1.0) throw DomainError("model_form: a (1 - |c|) must exceed 1", m.c);
    LaurentMap shifted = f - LaurentMap::constant(m.c);
    if (a * max_modulus(shifted, 1.0) >= 1.0) throw DomainError("model_form: a max|f - c| must be below 1", m.c);
    m.f_in = shifted * cd(a);
    std::vector<std::pair<int, cd>> terms;
    cd cbar = std::conj(m.c), pw = 1.0 / a;
    for (int k = 0; k <= trunc; ++k) {
        terms.push_back({k + 1, pw});
        pw *= cbar;
        if (std::abs(pw) < 1e-18) break;
    }
    m.f_out = LaurentMap::from_powers(terms);
    return m;
}

Amplitude model_form_amplitude(const LaurentMap& f, const FockSector& s, double a, const CutoffSpec& spec_in,
                               const CutoffSpec& spec_out, int nodes) {
    ModelForm m = model_form(f, a);
    Amplitude r;
    r.W = W_constant(m.f_in, spec_in) + W_constant(m.f_out, spec_out);
    r.scale = kSqrt2Pi * std::exp(s.params().c_L() * r.W / 12.0);
    CMat Tin = propagator_matrix(m.f_in, s, nodes).matrix;
    CMat Tout = propagator_matrix(m.f_out, s, nodes).matrix;
    r.op = {CMat(r.scale * sector_adjoint(s, Tout) * Tin), 0};
    return r;
}

double free_field_kernel(const LaurentMap& f, const BoundaryField& phi1, const BoundaryField& phi2, int n_max,
                         int nodes) {
    DnOperator ds = dn_annulus(f, n_max, nodes);
    const int W = ds.width();
    CVec u(2 * W);
    u.head(W) = phi1.mode_vector(n_max);
    u.tail(W) = phi2.mode_vector(n_max);
    double q = ds.quadratic_form(u).real();
    DnOperator d = dn_disk(n_max);
    q -= d.quadratic_form(u.head(W)).real() + d.quadratic_form(u.tail(W)).real();
    return std::exp(-0.5 * q);
}

LaurentMap reflect(const LaurentMap& f, int trunc) {
    if (f.empty() || f.power(1) == cd(0.0)) throw std::invalid_argument("reflect: the linear coefficient must be nonzero");
    bool taylor = f.min_power() >= 1;
    bool antitaylor = f.max_power() <= 1;
    if (!taylor && !antitaylor) throw std::invalid_argument("reflect: map must be z u(z) or z u(1/z)");
    std::vector<std::pair<int, cd>> u;
    if (taylor)
        for (int k = 1; k <= f.max_power(); ++k) u.push_back({k - 1, std::conj(f.power(k))});
    else
        for (int k = 1; k >= f.min_power(); --k) u.push_back({1 - k, std::conj(f.power(k))});
    LaurentMap r = reciprocal(LaurentMap::from_powers(u), trunc);
    std::vector<std::pair<int, cd>> out;
    for (int j = 0; j <= trunc + 1; ++j) {
        cd c = r.power(j);
        if (c != cd(0.0)) out.push_back({taylor ? 1 - j : 1 + j, c});
    }
    return LaurentMap::from_powers(out);
}

SectorOperator adjoint_operator(const LaurentMap& f, const FockSector& s, int nodes) {
    return {sector_adjoint(s, propagator_matrix(f, s, nodes).matrix), 0};
}

GluingReport gluing_check(const LaurentMap& f, const LaurentMap& g, const FockSector& s, int trunc,
                          const CutoffSpec& spec) {
    LaurentMap fg = compose(f, g, trunc);
    Amplitude Af = amplitude_operator(f, s, spec), Ag = amplitude_operator(g, s, spec), Afg = amplitude_operator(fg, s, spec);
    CMat lhs = Af.op.matrix * Ag.op.matrix / kSqrt2Pi;
    GluingReport rep;
    rep.cocycle = s.params().c_L() / 12.0 * (Af.W + Ag.W - Afg.W);
    CMat rhs = std::exp(rep.cocycle) * Afg.op.matrix;
    rep.residual = max_abs(to_orthonormal(s, CMat(lhs - rhs))) / max_abs(to_orthonormal(s, rhs));
    rep.log_vacuum_ratio = std::log(std::abs(lhs(0, 0) / Afg.op.matrix(0, 0)));
    return rep;
}

AnnulusDerivativeReport annulus_derivative_check(double r, const LaurentMap& v, const FockSector& s,
                                                 const std::vector<double>& t_list, int nodes) {
    if (!v.is_taylor())
        throw std::invalid_argument("annulus_derivative_check: directions with poles at 0 are not supported");
    const int N = s.level_cap();
    const double cL = s.params().c_L();
    LaurentMap f0 = LaurentMap::monomial(1, r);
    double a = 1.0 / std::sqrt(r);
    ModelForm m0 = model_form(f0, a);
    CutoffSpec spec_in, spec_out, spec_f;
    spec_in.chart_radius = chart_radius(m0.f_in);
    spec_out.chart_radius = chart_radius(m0.f_out);
    spec_f.chart_radius = chart_radius(f0);

    CMat A0 = model_form_amplitude(f0, s, a, spec_in, spec_out, nodes).op.matrix;
    AnnulusDerivativeReport rep;
    double h = 1e-4;
    rep.action_derivative = (cutoff_action(f0 + v * cd(h), spec_f) - cutoff_action(f0 + v * cd(-h), spec_f)) / (2 * h);
    CMat rhs = -cL * (v.power(1).real() / (12.0 * r) + rep.action_derivative) * A0 -
               A0 * hamiltonian(s, v * cd(1.0 / r), false).matrix;

    std::vector<int> rows(s.size());
    for (int i = 0; i < s.size(); ++i) rows[i] = i;
    std::vector<int> cols = s.window(N - 1);
    double scale = max_abs(restrict_to(to_orthonormal(s, rhs), rows, cols));
    std::vector<CMat> res;
    for (double t : t_list) {
        CMat At = model_form_amplitude(f0 + v * cd(t), s, a, spec_in, spec_out, nodes).op.matrix;
        res.push_back(restrict_to(to_orthonormal(s, CMat((At - A0) / t - rhs)), rows, cols));
    }
    rep.fd = richardson_report(t_list, res);
    for (double e : rep.fd.residual) rep.relative.push_back(e / scale);
    rep.relative_extrapolated = rep.fd.best() / scale;
    return rep;
}

}  // namespace segal
