#pragma once

#include <functional>
#include <vector>

#include "segal/fock.hpp"
#include "segal/potential.hpp"
#include "segal/propagator.hpp"
#include "segal/series.hpp"

namespace segal {

// Smooth step S(x) = psi(x) / (psi(x) + psi(1 - x)) with psi(x) = exp(-1/x), and its derivatives.
double smooth_step(double x);
double smooth_step_d1(double x);
double smooth_step_d2(double x);

enum class CutoffProfile { A, B };

// Radial bump b(rho): 1 for rho <= rho_a, 0 for rho >= rho_b.
struct RadialBump {
    double rho_a = 1.0, rho_b = 1.0;
    double value(double rho) const;
    double d1(double rho) const;
    double d2(double rho) const;
};

RadialBump make_bump(double chart_radius, CutoffProfile profile);

// Largest R in (1, 2] with max|f(R T)| <= (1 + max|f(T)|)/2 on a grid of radii.
double chart_radius(const LaurentMap& f);

struct CutoffSpec {
    CutoffProfile profile = CutoffProfile::A;
    // 0 selects chart_radius(f).
    double chart_radius = 0.0;
    int radial_panels = 24;
    int radial_points = 8;
    int angular = 256;
};

// Liouville action between e^{-2 b1 H} g_A and e^{-2 b2 H} g_A, where H = log|z f'/f| is carried through the
// chart z -> f(z) on 1 <= |z| <= R. A null bump stands for the zero cutoff.
double chart_liouville_action(const LaurentMap& f, const RadialBump* b1, const RadialBump* b2, const CutoffSpec& spec);

// S_L^0(A_f, g_f, g_A) for the admissible metric g_f = e^{-2 chi_f} g_A with chi_f o f = b(|z|) log|z f'/f|.
double cutoff_action(const LaurentMap& f, const CutoffSpec& spec);

// (D omega, omega)_2 with omega = log|f'/f| on the circle.
double omega_energy(const LaurentMap& f, int nodes = 512);

double W_constant(const LaurentMap& f, const CutoffSpec& spec = {});
// S_L^0(A_f, g_from, g_to) between the admissible metrics built from two cutoff profiles on the same chart.
double metric_change_action(const LaurentMap& f, CutoffProfile from, CutoffProfile to, const CutoffSpec& spec = {});
double C_f_constant(const LaurentMap& f, double c_L, int nodes = 512);

// Scalar field on the plane with Cartesian gradient (d_x + i d_y) and Laplacian.
struct PlaneField {
    std::function<double(cd)> value;
    std::function<cd(cd)> grad;
    std::function<double(cd)> laplacian;
    static PlaneField zero();
};

// Body-fitted quadrature over A_f: P(s, theta) = (1 - s) e^{i theta} + s f(e^{i theta}).
struct AnnulusGrid {
    std::vector<cd> x;
    std::vector<double> w;
    // Boundary nodes with inward unit normals and arc-length weights (unit circle first, then f(T)).
    std::vector<cd> bx, bnormal;
    std::vector<double> bw;
};

AnnulusGrid annulus_grid(const LaurentMap& f, int radial_panels, int radial_points, int angular);
double grid_area(const AnnulusGrid& g);

// S_L^0(Sigma, g0, e^omega g0) for g0 = e^{sigma0} g_A: (1/96 pi) \int (|grad omega|^2 - 2 omega Lap sigma0) dx.
double liouville_action(const AnnulusGrid& g, const PlaneField& sigma0, const PlaneField& omega);
// \oint d_nu a . b ds over both boundary circles with the inward normal.
double boundary_flux_pairing(const AnnulusGrid& g, const PlaneField& a, const PlaneField& b);

struct LiouvilleResult {
    double value = 0.0;
    double coarse = 0.0;
    bool converged = true;
};
// Action on a grid and on a coarser one; converged is false when they differ by more than 1e-4.
LiouvilleResult liouville_action_checked(const LaurentMap& f, const PlaneField& sigma0, const PlaneField& omega,
                                         int radial_panels = 8, int radial_points = 8, int angular = 256);

struct Amplitude {
    SectorOperator op;
    double W = 0.0;
    // sqrt(2) pi e^{c_L W / 12}
    double scale = 0.0;
};

// sqrt(2) pi e^{c_L W(f, g_f)/12} T_f for f fixing 0.
Amplitude amplitude_operator(const LaurentMap& f, const FockSector& s, const CutoffSpec& spec = {}, int nodes = 256);

// Model-form amplitude for a Taylor map f with c = f(0) possibly nonzero: Phi(z) = a (z - c) splits the
// annulus into A_{a(f - c)} and the reflection of A_{z / (a (1 - conj(c) z))}.
struct ModelForm {
    LaurentMap f_in, f_out;
    double a = 1.0;
    cd c = 0.0;
};
ModelForm model_form(const LaurentMap& f, double a, int trunc = 40);
Amplitude model_form_amplitude(const LaurentMap& f, const FockSector& s, double a, const CutoffSpec& spec_in,
                               const CutoffSpec& spec_out, int nodes = 256);

// exp(-(1/2) (phi, (D_Sigma - D) phi)) for boundary data (c1 + phi1 on T, c2 + phi2 on f(T)).
double free_field_kernel(const LaurentMap& f, const BoundaryField& phi1, const BoundaryField& phi2, int n_max = 16,
                         int nodes = 256);

// Reflection f* = iota o f o iota with iota(z) = 1/conj(z), for maps z u(z) or z u(1/z) with u(0) != 0.
LaurentMap reflect(const LaurentMap& f, int trunc);

// Sector adjoint of T_f.
SectorOperator adjoint_operator(const LaurentMap& f, const FockSector& s, int nodes = 256);

struct GluingReport {
    double residual = 0.0;
    // log of the vacuum ratio of A(f)A(g)/sqrt(2)pi to A(f o g), and (c_L/12)(W(f) + W(g) - W(f o g)).
    double log_vacuum_ratio = 0.0;
    double cocycle = 0.0;
};
GluingReport gluing_check(const LaurentMap& f, const LaurentMap& g, const FockSector& s, int trunc = 40,
                          const CutoffSpec& spec = {});

struct AnnulusDerivativeReport {
    DerivativeReport fd;
    // Relative errors max|FD(t) - formula| / max|formula| on columns of level <= N - 1.
    std::vector<double> relative;
    double relative_extrapolated = 0.0;
    double action_derivative = 0.0;
};

// Finite differences of the model-form amplitude along f_0 + t v with f_0 = r z, against
// -c_L (Re v_0 / (12 r) + D_v S) A - A H_{v/r}.
AnnulusDerivativeReport annulus_derivative_check(double r, const LaurentMap& v, const FockSector& s,
                                                 const std::vector<double>& t_list, int nodes = 256);

}  // namespace segal
