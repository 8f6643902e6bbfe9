#pragma once

#include <vector>

namespace segal {

struct QuadratureRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Legendre rule with n points on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Composite Gauss-Legendre rule: `panels` equal panels of `n` points each on [a, b].
QuadratureRule composite_gauss(int panels, int n, double a, double b);

}  // namespace segal
