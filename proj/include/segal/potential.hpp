#pragma once

#include <Eigen/Dense>

#include <vector>

#include "segal/fock.hpp"
#include "segal/series.hpp"

namespace segal {

using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Real field on the unit circle: constant mode c plus modes phi_n (n >= 1), with phi_{-n} = conj(phi_n).
class BoundaryField {
public:
    BoundaryField() = default;
    BoundaryField(double c, std::vector<cd> positive_modes) : c_(c), modes_(std::move(positive_modes)) {}
    // phi_n = (x_n + i y_n) / (2 sqrt n)
    static BoundaryField from_xy(double c, const std::vector<double>& x, const std::vector<double>& y);
    // Fourier analysis of equispaced samples, truncated at n_max.
    static BoundaryField from_samples(const std::vector<double>& samples, int n_max);

    double c() const { return c_; }
    int n_max() const { return static_cast<int>(modes_.size()); }
    cd mode(int n) const;
    const std::vector<cd>& positive_modes() const { return modes_; }
    double operator()(double theta) const;
    std::vector<double> sample(int nodes) const;
    // Coefficients for k = -K..K.
    CVec mode_vector(int K) const;
    BoundaryField operator-(const BoundaryField& o) const;
    BoundaryField operator+(const BoundaryField& o) const;

private:
    double c_ = 0.0;
    std::vector<cd> modes_;
};

// (u, v)_2 = (1/2 pi) \int u conj(v) d theta for mode vectors with k = -K..K.
cd pairing(const CVec& u, const CVec& v);

std::vector<double> harmonic_extension_disk(const BoundaryField& phi, const std::vector<cd>& points);
double green_disk(cd x, cd y);

enum class DnKind { Disk, Annulus, InteriorCurve };

// Fourier-block DN operator. Each circle carries modes k = -n_max..n_max.
struct DnOperator {
    DnKind kind = DnKind::Disk;
    int n_max = 0;
    int circles = 1;
    CMat blocks;

    int width() const { return 2 * n_max + 1; }
    int offset(int circle, int k) const { return circle * width() + k + n_max; }
    CMat block(int i, int j) const { return blocks.block(i * width(), j * width(), width(), width()); }
    CVec apply(const CVec& modes) const { return blocks * modes; }
    cd quadratic_form(const CVec& modes) const { return pairing(blocks * modes, modes); }
};

// DN map acting on node values: rows and columns ordered curve by curve; output is the outward normal
// derivative times |gamma'| (parametrization-normalized).
struct NodalDn {
    int nodes = 0;
    int circles = 1;
    RMat matrix;
    RMat block(int i, int j) const { return matrix.block(i * nodes, j * nodes, nodes, nodes); }
};

// Dirichlet problem on the region between an outer and an inner analytic Jordan curve, each given by
// a parametrization of the unit circle.
NodalDn nodal_dn_two_curves(const LaurentMap& outer, const LaurentMap& inner, int nodes);
// Dirichlet problem inside a single analytic Jordan curve.
NodalDn nodal_dn_interior(const LaurentMap& curve, int nodes);
DnOperator nodal_to_modes(const NodalDn& d, int n_max, DnKind kind);

// Real-valued samples of mode vector entries: sum_k m_k e^{ik theta_j}.
std::vector<cd> synthesize(const CVec& modes, int nodes);
CVec analyze(const std::vector<cd>& samples, int n_max);
CVec analyze(const std::vector<double>& samples, int n_max);

DnOperator dn_disk(int n_max);
DnOperator dn_annulus(const LaurentMap& f, int n_max, int nodes);
DnOperator dn_interior_curve(const LaurentMap& f, int n_max, int nodes);
NodalDn nodal_dn_annulus(const LaurentMap& f, int nodes);
// D_{D,C} on node values of the curve f(T): annulus side with zero data on T plus the inside of f(T).
RMat nodal_dn_interior_curve(const LaurentMap& f, int nodes);

// Samples of log|e^{i theta} f'(e^{i theta}) / f(e^{i theta})|.
std::vector<double> omega_samples(const LaurentMap& f, int nodes);

struct ColinResidual {
    double quadratic = 0.0;
    double linear = 0.0;
};
// Residuals of the two identities relating D_{D,C}, D_{A_f} and D; omega defaults to log|f'/f| on T.
ColinResidual colin_identities(const LaurentMap& f, const BoundaryField& phi1, const BoundaryField& phi2, int nodes = 512);
ColinResidual colin_identities(const LaurentMap& f, const BoundaryField& phi1, const BoundaryField& phi2,
                               const std::vector<double>& omega, int nodes);

// Geodesic curvature of f(T) for |dz|^2/|z|^2, sampled at theta_j = 2 pi j / nodes.
std::vector<double> geodesic_curvature(const LaurentMap& f, int nodes);
// Residual max_j |(D_{D,C} omega)_j + e^{omega_j} k_j - (D_{A_f}(0, omega))_{2,j}|.
double curvature_identity_residual(const LaurentMap& f, int nodes);

// Smallest distance between sample sets of the two curves, and the largest node spacing.
struct Separation {
    double min_distance = 0.0;
    double spacing = 0.0;
};
Separation curve_separation(const LaurentMap& outer, const LaurentMap& inner, int nodes);

}  // namespace segal
