#pragma once

#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include "qgv/linalg.hpp"

namespace qgv::sdp {

// Hermitian matrix stored by its upper triangle: entry (i,j,v) with i <= j
// means A(i,j) = v and A(j,i) = conj(v); diagonal entries are real.
struct SparseHermitian {
    struct Entry {
        std::size_t i, j;
        cpx v;
    };
    std::size_t side = 0;
    std::vector<Entry> entries;

    void add(std::size_t i, std::size_t j, cpx v);
    ComplexMatrix dense() const;
};

// Re Tr(A* X) for Hermitian sparse A against a dense matrix.
double sparse_inner(const SparseHermitian& a, const ComplexMatrix& x);

struct Constraint {
    SparseHermitian a;
    double b = 0.0;
};

struct SdpProblem {
    ComplexMatrix c; // Hermitian objective, maximize Re Tr(C* X)
    std::vector<Constraint> constraints;
    std::size_t side = 0;
};

struct SdpSolution {
    ComplexMatrix x;
    double objective_value = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

// ADMM splitting between the affine set {<A_i,X> = b_i} and the PSD cone.
// Penalty 1.0, over-relaxation 1.6, adaptive penalty rescaling; affine
// projection through a Cholesky-factored Gram matrix with 1e-12 diagonal
// regularization. Deterministic.
SdpSolution solve(const SdpProblem& p, std::size_t max_iter = 100000, double tol = 1e-7);

// Constraints expressing Tr_out J = I_in on an out (x) in ordered Choi matrix.
std::vector<Constraint> choi_tp_constraints(std::size_t out_dim, std::size_t in_dim);

// maximize Re Tr(W J) over {J >= 0, Tr_out J = I_in} plus extra equalities.
// Returns the optimizer and the value.
std::pair<ComplexMatrix, double> max_over_choi(const ComplexMatrix& w, std::size_t out_dim,
                                               std::size_t in_dim,
                                               const std::vector<Constraint>& extra = {},
                                               std::size_t max_iter = 100000, double tol = 1e-7);

// Accumulates a complex-linear functional L(X) = sum K_ij X_ij over a
// Hermitian variable and emits it as one or two Hermitian equality
// constraints (real and imaginary parts).
class ComplexEqualityBuilder {
public:
    explicit ComplexEqualityBuilder(std::size_t side) : side_(side) {}
    void add(std::size_t i, std::size_t j, cpx coeff);
    void emit(std::vector<Constraint>& out, cpx rhs) const;

private:
    std::size_t side_;
    std::vector<std::tuple<std::size_t, std::size_t, cpx>> k_;
};

} // namespace qgv::sdp
