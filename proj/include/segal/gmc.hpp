#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "segal/fock.hpp"
#include "segal/potential.hpp"
#include "segal/series.hpp"

namespace segal {

struct GmcOptions {
    // Approximate node count of the midpoint grid on A_f; cells are kept close to square.
    int target_points = 2000;
    // Samples per seeded batch.
    int batch = 4096;
    // Boundary modes of the sampled free field phi on the circle.
    int boundary_modes = 32;
    // Zero mode c at which the mu > 0 element is evaluated.
    double zero_mode = 0.0;
    bool allow_large_gamma = false;
};

// Gaussian vector (X_0, X(x_1), ..., X(x_m)) for the Dirichlet free field X of the disk, where X_0 is the
// average of X over f(T) and x_i are grid nodes of A_f with weights w_i.
struct GffSampler {
    std::vector<cd> x;
    std::vector<double> w;
    RMat chol;
    // Pointwise variances used for normal ordering (sigma2[0] belongs to X_0).
    std::vector<double> sigma2;
    std::uint64_t seed = 0;
    double min_radius = 0.0;

    int dim() const { return static_cast<int>(sigma2.size()); }
    // Columns are samples of batch `batch`; only the first `rows` coordinates are produced.
    RMat draw(std::uint64_t batch, int count, int rows) const;
};

// Radial layers and angular count of the sampling grid for a target node count.
std::pair<int, int> sampling_grid_shape(const LaurentMap& f, int target_points);

GffSampler make_gff_sampler(const LaurentMap& f, const GmcOptions& opt, std::uint64_t seed);

struct MassStats {
    long n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    // Exact expectation of the grid functional.
    double expected = 0.0;
    // Mean on a grid with half the resolution in each direction, and fine minus coarse.
    double coarse_mean = 0.0;
    double refinement_trend = 0.0;
    // Smallest |x_i| on the grid and the largest relative weight |x|^{-gamma Q}.
    double min_radius = 0.0;
    double conditioning = 0.0;
};

// Statistics of sum_i w_i |x_i|^{-gamma Q} (1 - |x_i|^2)^{gamma^2/2} e^{gamma (X_i + P phi(x_i)) - gamma^2 sigma_i^2 / 2}.
MassStats sample_gmc_mass(const LaurentMap& f, const ModelParams& params, const BoundaryField& phi, long n_samples,
                          std::uint64_t seed, const GmcOptions& opt = {});

struct McEstimate {
    long n = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
    // Standard error from batch means.
    double batch_std_error = 0.0;
};

// Vacuum element of T_f in the sector alpha = Q + ip at zero mode c: the average of
// |f'(0)|^{Q^2/2} cos(p X_0) exp(-mu e^{gamma c} M) with the boundary field phi drawn from the free measure.
McEstimate mc_propagator_element(const LaurentMap& f, const ModelParams& params, long n_samples, std::uint64_t seed,
                                 const GmcOptions& opt = {});

}  // namespace segal
