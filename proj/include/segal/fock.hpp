#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <map>
#include <string>
#include <vector>

#include "segal/series.hpp"

namespace segal {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cd>;

// Occupation numbers of the creation modes 1..N for each chirality.
struct FockState {
    std::vector<int> k;   // holomorphic, k[n-1] = power of A_{-n}
    std::vector<int> kt;  // antiholomorphic, kt[n-1] = power of tilde A_{-n}
    int level_h = 0;
    int level_a = 0;
    int level() const { return level_h + level_a; }
    bool operator<(const FockState& o) const { return k != o.k ? k < o.k : kt < o.kt; }
    bool operator==(const FockState& o) const { return k == o.k && kt == o.kt; }
};

// Truncated momentum sector: states prod A_{-n}^{k_n} tilde A_{-n}^{kt_n} |alpha> with total level <= N.
class FockSector {
public:
    FockSector(const ModelParams& params, int level_cap);

    const ModelParams& params() const { return params_; }
    cd alpha() const { return params_.alpha(); }
    int level_cap() const { return N_; }
    int size() const { return static_cast<int>(basis_.size()); }
    const std::vector<FockState>& basis() const { return basis_; }
    const FockState& state(int i) const { return basis_[i]; }
    int level(int i) const { return basis_[i].level(); }
    // -1 when the state lies outside the cap.
    int index(const FockState& s) const;
    // Diagonal Gram matrix of the sector pairing in this basis.
    const std::vector<double>& gram() const { return gram_; }
    // Partition-pair label, e.g. "[2,1|1]".
    std::string label(int i) const;
    // Indices of states with level <= L.
    std::vector<int> window(int L) const;

private:
    ModelParams params_;
    int N_;
    std::vector<FockState> basis_;
    std::map<FockState, int> lookup_;
    std::vector<double> gram_;
};

struct SectorOperator {
    CMat matrix;
    int grading_shift = 0;
};

SpMat heisenberg_sparse(const FockSector& s, int n, bool tilde);
SpMat virasoro_free_sparse(const FockSector& s, int n, bool tilde);
// Potential mode V_n := (1/2) \oint e^{i n theta} :e^{gamma phi(theta)}: d theta (tilde: e^{-i n theta}).
SpMat vertex_potential_sparse(const FockSector& s, int n, bool tilde);

SectorOperator heisenberg(const FockSector& s, int n, bool tilde);
SectorOperator virasoro_free(const FockSector& s, int n, bool tilde);
SectorOperator vertex_potential(const FockSector& s, int n, bool tilde);
// L_n = L_n^0 + mu V_n.
SpMat virasoro_sparse(const FockSector& s, int n, bool tilde, bool include_potential);

// H_v = sum_n v_n L_n + conj(v_n) tilde L_n with v_n = h_coefficient(v, n).
CMat hamiltonian_matrix(const FockSector& s, const LaurentMap& v, bool include_potential);
SectorOperator hamiltonian(const FockSector& s, const LaurentMap& v, bool include_potential);

// exp(-t M) by scaling and squaring with Pade approximants.
CMat expm_neg(const CMat& m, double t);
SectorOperator matrix_exponential(const SectorOperator& op, double t);

// Adjoint with respect to the sector pairing.
CMat sector_adjoint(const FockSector& s, const CMat& m);
// Matrix in the orthonormal basis e_b / sqrt(g_b).
CMat to_orthonormal(const FockSector& s, const CMat& m);
CMat restrict_to(const CMat& m, const std::vector<int>& rows, const std::vector<int>& cols);
double max_abs(const CMat& m);

}  // namespace segal
