#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "segal/series.hpp"

namespace segal {

// Raised when a flow leaves the admissible class or violates a generator condition at time t.
class FlowError : public std::runtime_error {
public:
    FlowError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

struct FlowTrajectory {
    std::vector<double> times;
    std::vector<LaurentMap> maps;
    // Autonomous flows store a single generator; the piecewise scheme stores the frozen field of each piece.
    std::vector<LaurentMap> generators;
    const LaurentMap& final_map() const { return maps.back(); }
};

// One classical Runge-Kutta step of d/dt g = w(g) on the coefficients of g.
LaurentMap rk4_step(const LaurentMap& w, const LaurentMap& g, double dt, int trunc);

// Flow f_t of d/dt f_t = v(f_t), f_0 = id, with `steps` fixed steps up to t_end.
FlowTrajectory flow_autonomous(const LaurentMap& v, double t_end, int steps, int trunc);

struct NonautonomousOptions {
    int substeps = 4;
    bool require_coercive = true;
    double coercivity_constant = 8.0;
};

// Piecewise-autonomous approximation of the family f_t with f o f_t = f + t v: on each piece the field
// w(z) = v(f_t^{-1}(z)) / f'(z) is frozen at the left endpoint and integrated autonomously.
FlowTrajectory flow_nonautonomous(const LaurentMap& f, const LaurentMap& v, double t_end, int n_pieces, int trunc,
                                  const NonautonomousOptions& opt = {});

// Frozen generator v(g^{-1}(z)) / f'(z) for the current map g.
LaurentMap frozen_generator(const LaurentMap& f, const LaurentMap& v, const LaurentMap& g, int trunc);

// f^{-1} o (f + t v), the family the piecewise scheme approximates.
LaurentMap exact_nonautonomous_map(const LaurentMap& f, const LaurentMap& v, double t, int trunc);

}  // namespace segal
