#pragma once

#include <vector>

#include "segal/fock.hpp"
#include "segal/potential.hpp"
#include "segal/series.hpp"

namespace segal {

// Gaussian data of the boundary field (X o f + P phi o f + Q log|f'/f|) on the circle.
// Mode vectors and matrices are indexed by k = -n_max..n_max (position k + n_max).
struct GaussianKernelData {
    int n_max = 0;
    // (k, n): Fourier mode k of (P e_n) o f on the circle.
    CMat mean_map;
    // Fourier modes of Q log|f'/f| on the circle.
    CVec shift;
    // Hermitian covariance E[Z_k conj Z_l] of the modes of X o f, constant mode included.
    CMat covariance;
    // Bilinear covariance E[Z_k Z_l] of the smooth part -log|(f(x) - f(y))/(x - y)| of the Green kernel.
    CMat smooth;
    // (Q^2/2) log|f'(0)|.
    double prefactor_exponent = 0.0;

    int pos(int k) const { return k + n_max; }
    double constant_variance() const { return covariance(n_max, n_max).real(); }
};

GaussianKernelData kernel_data(const LaurentMap& f, double Q, int n_max, int nodes);

// T_f at mu = 0 on a momentum sector, in the Fock basis of the sector. Requires nodes >= 4 * level cap.
SectorOperator propagator_matrix(const LaurentMap& f, const FockSector& s, int nodes = 256);

struct DerivativeReport {
    std::vector<double> t;
    std::vector<double> residual;
    // max-abs of the last entry of each Richardson level, in the orthonormal basis.
    std::vector<double> extrapolated;
    // log2 ratio of consecutive residuals (about 1 for first-order convergence).
    std::vector<double> slope;
    double best() const { return extrapolated.empty() ? residual.back() : extrapolated.back(); }
};

// Finite differences of t -> T_{f + t v} against -T_f H_{v/f'}.
DerivativeReport derivative_check(const LaurentMap& f, const LaurentMap& v, const FockSector& s,
                                  const std::vector<double>& t_list, int nodes = 256);

// Shared finite-difference bookkeeping: residual matrices R(t) in the orthonormal basis.
DerivativeReport richardson_report(const std::vector<double>& t_list, const std::vector<CMat>& residuals);

// Ordered product of exp(-dt H_w) over the frozen generators of the piecewise flow.
SectorOperator time_ordered_propagator(const LaurentMap& f, const LaurentMap& v, const FockSector& s, double t_end,
                                       int n_pieces, bool include_potential, int trunc = 24);

}  // namespace segal
