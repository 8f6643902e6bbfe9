#include "segal/flow.hpp"

#include <cmath>
#include <sstream>

namespace segal {

namespace {

void require_in_class(const LaurentMap& g, double t) {
    Membership m = classify(g);
    if (!m.in_S) {
        std::ostringstream os;
        os << "flow left the class of contracting univalent maps at t=" << t << " (" << m.note << ")";
        throw FlowError(os.str(), t);
    }
}

}  // namespace

LaurentMap rk4_step(const LaurentMap& w, const LaurentMap& g, double dt, int trunc) {
    auto rhs = [&](const LaurentMap& x) { return compose(w, x, trunc, false); };
    LaurentMap k1 = rhs(g);
    LaurentMap k2 = rhs(g + k1 * cd(dt / 2));
    LaurentMap k3 = rhs(g + k2 * cd(dt / 2));
    LaurentMap k4 = rhs(g + k3 * cd(dt));
    return (g + (k1 + k2 * cd(2.0) + k3 * cd(2.0) + k4) * cd(dt / 6)).truncated(trunc);
}

FlowTrajectory flow_autonomous(const LaurentMap& v, double t_end, int steps, int trunc) {
    if (steps <= 0 || t_end < 0) throw std::invalid_argument("flow_autonomous: need steps > 0 and t_end >= 0");
    if (std::abs(v(0.0)) > 1e-14) throw std::invalid_argument("flow_autonomous: the vector field must vanish at 0");
    if (!v.is_taylor()) throw std::invalid_argument("flow_autonomous: the vector field must be holomorphic in the disk");
    if (!is_markovian(v)) throw std::invalid_argument("flow_autonomous: the vector field is not Markovian");
    FlowTrajectory tr;
    tr.generators.push_back(v);
    LaurentMap g = LaurentMap::identity();
    tr.times.push_back(0.0);
    tr.maps.push_back(g);
    double dt = t_end / steps;
    for (int i = 1; i <= steps; ++i) {
        g = rk4_step(v, g, dt, trunc);
        double t = i * dt;
        require_in_class(g, t);
        tr.times.push_back(t);
        tr.maps.push_back(g);
    }
    return tr;
}

LaurentMap frozen_generator(const LaurentMap& f, const LaurentMap& v, const LaurentMap& g, int trunc) {
    LaurentMap ginv = invert(g, trunc);
    LaurentMap num = compose(v, ginv, trunc, false);
    return divide(num, f.derivative(), trunc);
}

LaurentMap exact_nonautonomous_map(const LaurentMap& f, const LaurentMap& v, double t, int trunc) {
    return compose(invert(f, trunc), f + v * cd(t), trunc, false);
}

FlowTrajectory flow_nonautonomous(const LaurentMap& f, const LaurentMap& v, double t_end, int n_pieces, int trunc,
                                  const NonautonomousOptions& opt) {
    if (n_pieces <= 0 || t_end < 0 || opt.substeps <= 0)
        throw std::invalid_argument("flow_nonautonomous: need n_pieces > 0, substeps > 0 and t_end >= 0");
    if (std::abs(f(0.0)) > 1e-14 || std::abs(v(0.0)) > 1e-14)
        throw std::invalid_argument("flow_nonautonomous: f and v must vanish at 0");
    if (!classify(f).in_S) throw std::invalid_argument("flow_nonautonomous: f is not a contracting univalent map");
    FlowTrajectory tr;
    LaurentMap g = LaurentMap::identity();
    tr.times.push_back(0.0);
    tr.maps.push_back(g);
    double dt = t_end / n_pieces;
    for (int k = 0; k < n_pieces; ++k) {
        double tk = k * dt;
        LaurentMap w = frozen_generator(f, v, g, trunc);
        if (opt.require_coercive) {
            CoercivityReport rep = coercivity(w, opt.coercivity_constant);
            if (!rep.coercive) {
                std::ostringstream os;
                os << "frozen generator is not coercive at t_k=" << tk << " (omega=" << rep.omega << ", bound=" << rep.rhs << ")";
                throw FlowError(os.str(), tk);
            }
        }
        double h = dt / opt.substeps;
        for (int j = 0; j < opt.substeps; ++j) g = rk4_step(w, g, h, trunc);
        tr.generators.push_back(w);
        tr.times.push_back(tk + dt);
        tr.maps.push_back(g);
    }
    return tr;
}

}  // namespace segal
