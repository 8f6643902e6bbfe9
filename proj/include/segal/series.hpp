#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace segal {

using cd = std::complex<double>;

constexpr double kPi = 3.141592653589793238462643383279502884;

// Raised when a composition sends sample points outside the domain of the outer map.
class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, cd point) : std::runtime_error(what), point_(point) {}
    cd point() const { return point_; }

private:
    cd point_;
};

// Coupling constants. Q and c_L are always derived from gamma.
class ModelParams {
public:
    ModelParams() : ModelParams(1.0) {}
    explicit ModelParams(double gamma, double mu = 0.0, double p = 0.0);
    ModelParams(double gamma, double mu, cd alpha);

    double gamma() const { return gamma_; }
    double mu() const { return mu_; }
    double Q() const { return Q_; }
    double c_L() const { return cL_; }
    cd alpha() const { return alpha_; }
    // Imaginary part of alpha - Q (the spectral momentum when alpha = Q + ip).
    double p() const { return (alpha_ - Q_).imag(); }
    // Conformal weight (alpha/2)(Q - alpha/2).
    cd delta() const { return 0.5 * alpha_ * (Q_ - 0.5 * alpha_); }

    ModelParams with_mu(double mu) const { return ModelParams(gamma_, mu, alpha_); }
    ModelParams with_p(double p) const { return ModelParams(gamma_, mu_, p); }

private:
    double gamma_, mu_, Q_, cL_;
    cd alpha_;
};

// Truncated Laurent series. Index n holds the coefficient of z^{n+1}.
// Stored window is trimmed so that both end coefficients are nonzero.
class LaurentMap {
public:
    LaurentMap() = default;
    LaurentMap(int n_min, std::vector<cd> coeffs, double eps = 0.0);

    // Terms given as (power k, coefficient of z^k).
    static LaurentMap from_powers(const std::vector<std::pair<int, cd>>& terms, double eps = 0.0);
    static LaurentMap monomial(int power, cd c, double eps = 0.0);
    static LaurentMap identity(double eps = 0.0) { return monomial(1, 1.0, eps); }
    static LaurentMap constant(cd c, double eps = 0.0) { return monomial(0, c, eps); }

    bool empty() const { return c_.empty(); }
    int n_min() const { return n_min_; }
    int n_max() const { return n_min_ + static_cast<int>(c_.size()) - 1; }
    int min_power() const { return n_min_ + 1; }
    int max_power() const { return n_max() + 1; }
    double eps() const { return eps_; }
    const std::vector<cd>& data() const { return c_; }

    cd coeff(int n) const;
    cd power(int k) const { return coeff(k - 1); }
    // No negative powers of z.
    bool is_taylor() const { return empty() || n_min_ >= -1; }

    LaurentMap with_eps(double eps) const { return LaurentMap(n_min_, c_, eps); }
    LaurentMap truncated(int n_max) const;

    cd operator()(cd z) const;
    std::vector<cd> evaluate(const std::vector<cd>& points) const;
    LaurentMap derivative() const;

    LaurentMap operator+(const LaurentMap& o) const;
    LaurentMap operator-(const LaurentMap& o) const;
    LaurentMap operator-() const { return (*this) * cd(-1.0); }
    LaurentMap operator*(cd s) const;
    friend LaurentMap operator*(cd s, const LaurentMap& f) { return f * s; }

private:
    int n_min_ = 0;
    std::vector<cd> c_;
    double eps_ = 0.0;
};

// Product truncated to indices <= trunc (powers <= trunc + 1).
LaurentMap mul(const LaurentMap& a, const LaurentMap& b, int trunc);
// Reciprocal of a Taylor series with nonzero constant term, truncated at index trunc.
LaurentMap reciprocal(const LaurentMap& a, int trunc);
// a / b where b = z^k u(z) with u(0) != 0 and no negative powers in u.
LaurentMap divide(const LaurentMap& a, const LaurentMap& b, int trunc);

double seminorm(const LaurentMap& f, double eps, int k);

LaurentMap compose(const LaurentMap& f, const LaurentMap& g, int trunc, bool check_domain = true);
LaurentMap invert(const LaurentMap& f, int trunc);

// The H-operator coefficient v_n for a field stored as v(z) = sum c_n z^{n+1}: v_n = -c_n.
cd h_coefficient(const LaurentMap& v, int n);
// Inverse of h_coefficient: build the stored series from (n, v_n) pairs.
LaurentMap from_h_coefficients(const std::vector<std::pair<int, cd>>& vn, double eps = 0.0);

bool is_markovian(const LaurentMap& v, int grid = 256);

struct CoercivityReport {
    bool coercive = false;
    double omega = 0.0;
    double rhs = 0.0;
    double C = 0.0;
};

CoercivityReport coercivity(const LaurentMap& v, double C = 8.0);
inline bool is_coercive(const LaurentMap& v, double C = 8.0) { return coercivity(v, C).coercive; }

struct Membership {
    bool f0_zero = false;
    bool in_S = false;
    bool in_S_eps = false;
    bool in_S_delta_annulus = false;
    bool conclusive = true;
    double max_modulus = 0.0;
    int winding_derivative = 0;
    int winding_map = 0;
    double min_pair_ratio = 0.0;
    std::string note;
};

// Semi-decision of class membership from boundary samples.
Membership classify(const LaurentMap& f);

// Winding number of f around w0 along the circle of radius rho, from `grid` samples.
// `ok` is cleared when consecutive samples turn by more than a quarter turn.
int winding_number(const LaurentMap& f, cd w0, double rho, int grid, bool* ok = nullptr);
// True when the closed polygon through the samples has no self-intersection.
bool polygon_is_simple(const std::vector<cd>& pts);

std::vector<cd> circle_points(int n, double rho = 1.0);

}  // namespace segal
