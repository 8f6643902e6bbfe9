#include "segal/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace segal {

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("quadrature needs at least one node");
    QuadratureRule r;
    r.x.resize(n);
    r.w.resize(n);
    const double pi = 3.141592653589793238462643383279502884;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2 / ((1 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    double h = (b - a) / 2, m = (a + b) / 2;
    for (int i = 0; i < n; ++i) {
        r.x[i] = m + h * r.x[i];
        r.w[i] *= h;
    }
    return r;
}

QuadratureRule composite_gauss(int panels, int n, double a, double b) {
    QuadratureRule r;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        auto g = gauss_legendre(n, a + p * h, a + (p + 1) * h);
        r.x.insert(r.x.end(), g.x.begin(), g.x.end());
        r.w.insert(r.w.end(), g.w.begin(), g.w.end());
    }
    return r;
}

}  // namespace segal
