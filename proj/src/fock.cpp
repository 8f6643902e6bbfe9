#include "segal/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace segal {

namespace {

// All occupation vectors over modes 1..N with sum n*k_n == level.
void partitions_of(int level, int N, std::vector<std::vector<int>>& out) {
    std::vector<int> k(N, 0);
    std::function<void(int, int)> rec = [&](int mode, int remaining) {
        if (mode == 0) {
            if (remaining == 0) out.push_back(k);
            return;
        }
        for (int c = remaining / mode; c >= 0; --c) {
            k[mode - 1] = c;
            rec(mode - 1, remaining - c * mode);
        }
        k[mode - 1] = 0;
    };
    rec(N, level);
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace

FockSector::FockSector(const ModelParams& params, int level_cap) : params_(params), N_(level_cap) {
    if (level_cap < 0) throw std::invalid_argument("level cap must be nonnegative");
    std::vector<std::vector<std::vector<int>>> parts(N_ + 1);
    for (int l = 0; l <= N_; ++l) partitions_of(l, std::max(N_, 1), parts[l]);
    for (int L = 0; L <= N_; ++L) {
        for (int lh = L; lh >= 0; --lh) {
            int la = L - lh;
            for (auto& ph : parts[lh])
                for (auto& pa : parts[la]) {
                    FockState s{ph, pa, lh, la};
                    lookup_[s] = static_cast<int>(basis_.size());
                    basis_.push_back(s);
                }
        }
    }
    gram_.resize(basis_.size());
    for (size_t i = 0; i < basis_.size(); ++i) {
        double g = 1.0;
        for (size_t n = 1; n <= basis_[i].k.size(); ++n) {
            g *= factorial(basis_[i].k[n - 1]) * std::pow(n / 2.0, basis_[i].k[n - 1]);
            g *= factorial(basis_[i].kt[n - 1]) * std::pow(n / 2.0, basis_[i].kt[n - 1]);
        }
        gram_[i] = g;
    }
}

int FockSector::index(const FockState& s) const {
    if (s.level() > N_) return -1;
    auto it = lookup_.find(s);
    return it == lookup_.end() ? -1 : it->second;
}

std::string FockSector::label(int i) const {
    const auto& s = basis_[i];
    auto part = [](const std::vector<int>& k) {
        std::ostringstream os;
        bool first = true;
        for (int n = static_cast<int>(k.size()); n >= 1; --n)
            for (int c = 0; c < k[n - 1]; ++c) {
                if (!first) os << ',';
                os << n;
                first = false;
            }
        return os.str();
    };
    return "[" + part(s.k) + "|" + part(s.kt) + "]";
}

std::vector<int> FockSector::window(int L) const {
    std::vector<int> idx;
    for (int i = 0; i < size(); ++i)
        if (basis_[i].level() <= L) idx.push_back(i);
    return idx;
}

namespace {

struct Term {
    cd coef;
    FockState state;
    bool alive;
};

// Apply A_j (or tilde A_j) to a basis state without enforcing the level cap.
Term apply_mode(const FockSector& s, const Term& in, int j, bool tilde) {
    Term t = in;
    if (!t.alive) return t;
    int N = static_cast<int>(t.state.k.size());
    if (j == 0) {
        t.coef *= cd(0.0, 0.5) * s.alpha();
        return t;
    }
    int n = std::abs(j);
    if (n > N) {
        t.alive = false;
        return t;
    }
    auto& occ = tilde ? t.state.kt : t.state.k;
    int& lev = tilde ? t.state.level_a : t.state.level_h;
    if (j > 0) {
        if (occ[n - 1] == 0) {
            t.alive = false;
            return t;
        }
        t.coef *= occ[n - 1] * (n / 2.0);
        occ[n - 1] -= 1;
        lev -= n;
    } else {
        occ[n - 1] += 1;
        lev += n;
    }
    return t;
}

SpMat build_sparse(const FockSector& s, const std::function<void(int, std::vector<Term>&)>& act) {
    std::vector<Eigen::Triplet<cd>> trip;
    std::vector<Term> out;
    for (int b = 0; b < s.size(); ++b) {
        out.clear();
        act(b, out);
        for (auto& t : out) {
            if (!t.alive || t.coef == cd(0.0)) continue;
            int a = s.index(t.state);
            if (a >= 0) trip.emplace_back(a, b, t.coef);
        }
    }
    SpMat m(s.size(), s.size());
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

}  // namespace

SpMat heisenberg_sparse(const FockSector& s, int n, bool tilde) {
    return build_sparse(s, [&](int b, std::vector<Term>& out) {
        out.push_back(apply_mode(s, Term{1.0, s.state(b), true}, n, tilde));
    });
}

SpMat virasoro_free_sparse(const FockSector& s, int n, bool tilde) {
    const int N = s.level_cap();
    const double Q = s.params().Q();
    return build_sparse(s, [&](int b, std::vector<Term>& out) {
        Term start{1.0, s.state(b), true};
        Term lin = apply_mode(s, start, n, tilde);
        lin.coef *= cd(0.0, -Q * (n + 1));
        out.push_back(lin);
        for (int m = std::max(-N, n - N); m <= std::min(N, n + N); ++m) {
            int k = n - m;
            // Wick ordering: positive (annihilation) index acts first.
            int first = k, second = m;
            if (m > 0 && k <= 0) {
                first = m;
                second = k;
            }
            Term t = apply_mode(s, start, first, tilde);
            t = apply_mode(s, t, second, tilde);
            out.push_back(t);
        }
    });
}

SpMat vertex_potential_sparse(const FockSector& s, int n, bool tilde) {
    const int N = s.level_cap();
    const double g = s.params().gamma();
    const int dim = s.size();
    // Per-mode factors of <a| e^{gamma phi_+} e^{gamma phi_-} |b> for occupations a,b <= N.
    std::vector<std::vector<std::vector<cd>>> table(N + 1);
    for (int m = 1; m <= N; ++m) {
        int cap = N / m;
        table[m].assign(cap + 1, std::vector<cd>(cap + 1, 0.0));
        cd cp(0.0, g / m), cm(0.0, -g / m);
        for (int a = 0; a <= cap; ++a)
            for (int b = 0; b <= cap; ++b) {
                cd acc = 0.0;
                for (int c = 0; c <= std::min(a, b); ++c) {
                    acc += std::pow(cp, a - c) / factorial(a - c) * std::pow(cm, b - c) / factorial(b - c) *
                           (factorial(b) / factorial(c)) * std::pow(m / 2.0, b - c);
                }
                table[m][a][b] = acc;
            }
    }
    std::vector<Eigen::Triplet<cd>> trip;
    for (int a = 0; a < dim; ++a) {
        const auto& sa = s.state(a);
        for (int b = 0; b < dim; ++b) {
            const auto& sb = s.state(b);
            int charge = (sa.level_h - sb.level_h) - (sa.level_a - sb.level_a);
            if (charge != (tilde ? n : -n)) continue;
            cd v = kPi;
            for (int m = 1; m <= N && v != cd(0.0); ++m) {
                v *= table[m][sa.k[m - 1]][sb.k[m - 1]];
                v *= table[m][sa.kt[m - 1]][sb.kt[m - 1]];
            }
            if (v != cd(0.0)) trip.emplace_back(a, b, v);
        }
    }
    SpMat out(dim, dim);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SectorOperator heisenberg(const FockSector& s, int n, bool tilde) {
    return {CMat(heisenberg_sparse(s, n, tilde)), -n};
}

SectorOperator virasoro_free(const FockSector& s, int n, bool tilde) {
    return {CMat(virasoro_free_sparse(s, n, tilde)), -n};
}

SectorOperator vertex_potential(const FockSector& s, int n, bool tilde) {
    return {CMat(vertex_potential_sparse(s, n, tilde)), 0};
}

SpMat virasoro_sparse(const FockSector& s, int n, bool tilde, bool include_potential) {
    SpMat l = virasoro_free_sparse(s, n, tilde);
    double mu = s.params().mu();
    if (include_potential && mu != 0.0) l += cd(mu) * vertex_potential_sparse(s, n, tilde);
    return l;
}

CMat hamiltonian_matrix(const FockSector& s, const LaurentMap& v, bool include_potential) {
    const int N = s.level_cap();
    SpMat h(s.size(), s.size());
    if (!v.empty()) {
        for (int n = std::max(v.n_min(), -N); n <= std::min(v.n_max(), N); ++n) {
            cd vn = h_coefficient(v, n);
            if (vn == cd(0.0)) continue;
            h += vn * virasoro_sparse(s, n, false, include_potential);
            h += std::conj(vn) * virasoro_sparse(s, n, true, include_potential);
        }
    }
    return CMat(h);
}

SectorOperator hamiltonian(const FockSector& s, const LaurentMap& v, bool include_potential) {
    return {hamiltonian_matrix(s, v, include_potential), 0};
}

CMat expm_neg(const CMat& m, double t) {
    if (t < 0) throw std::invalid_argument("matrix exponential needs t >= 0");
    CMat a = (-t) * m;
    CMat e = a.exp();
    if (!e.allFinite()) throw std::overflow_error("matrix exponential overflowed");
    return e;
}

SectorOperator matrix_exponential(const SectorOperator& op, double t) { return {expm_neg(op.matrix, t), 0}; }

CMat sector_adjoint(const FockSector& s, const CMat& m) {
    const auto& g = s.gram();
    CMat out = m.adjoint();
    for (int a = 0; a < out.rows(); ++a)
        for (int b = 0; b < out.cols(); ++b) out(a, b) *= g[b] / g[a];
    return out;
}

CMat to_orthonormal(const FockSector& s, const CMat& m) {
    const auto& g = s.gram();
    CMat out = m;
    for (int a = 0; a < out.rows(); ++a)
        for (int b = 0; b < out.cols(); ++b) out(a, b) *= std::sqrt(g[a] / g[b]);
    return out;
}

CMat restrict_to(const CMat& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    CMat out(rows.size(), cols.size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
    return out;
}

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace segal
