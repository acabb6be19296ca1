#pragma once

#include <cstddef>
#include <vector>

#include "qgv/linalg.hpp"

namespace qgv::games {

// Register sizes |X|,|Y|,|A|,|B|,|R|; a trivial referee register is r = 1.
struct RegisterDims {
    std::size_t x = 1, y = 1, a = 1, b = 1, r = 1;
    std::size_t xy() const { return x * y; }
    std::size_t ab() const { return a * b; }
};

// Rank-one component of P: P = sum_k lambda_k gamma_k gamma_k*.
struct RankTerm {
    double lambda = 1.0;
    std::vector<cpx> gamma; // C^{A*B*R}, index (a*B + b)*R + r
};

// The pair (xi, P): xi a unit vector on C^{X*Y*R} (index (x*Y + y)*R + r),
// P a positive contraction given by its rank decomposition.
struct ProjectionGame {
    RegisterDims dims;
    std::vector<cpx> xi;
    std::vector<RankTerm> p_terms;
    // The remark-sanctioned relaxation: accept non-orthogonal rank-one
    // decompositions when set.
    bool allow_nonorthogonal = false;

    void validate() const;
    ComplexMatrix p_dense() const; // on (A*B) (x) R
    ComplexMatrix xi_density() const;
};

struct HypergraphAtom {
    double weight = 0.0;
    std::vector<cpx> xi; // unit vector on C^{X*Y}, index x*Y + y
    ComplexMatrix q;     // projection on C^{A*B}
};

struct HypergraphGame {
    RegisterDims dims; // r unused (1)
    std::vector<HypergraphAtom> atoms;
    void validate() const;
};

struct ClassicalGame {
    RegisterDims dims;            // r = 1
    std::vector<std::uint8_t> rule; // index ((x*Y + y)*A + a)*B + b
    std::vector<double> pi;         // index x*Y + y
    bool rule_at(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const;
    void validate() const;
};

// Column [rho_k] with rho_k = sqrt(lambda_k) conj(Tr_R(xi gamma_k*)),
// each of shape (X*Y) x (A*B).
struct GameTensor {
    std::vector<ComplexMatrix> rho;
    double column_norm_sq() const; // sum_k ||rho_k||_F^2
};

GameTensor game_tensor(const ProjectionGame& g);

// One atom per positive-probability input pair; projection onto the
// accepting answers.
HypergraphGame classical_to_hypergraph(const ClassicalGame& g);

// xi_mu = sum_i sqrt(mu_i) xi_i (x) e_i, P = sum_i Q_i (x) eps_ii, with
// |R| = number of atoms.
ProjectionGame hypergraph_to_projection(const HypergraphGame& h);

// Classical-to-quantum game: table maps (x,y) -> projection on C^{A*B}
// (index x*Y + y), pi a distribution on X*Y.
ProjectionGame cq_to_projection(const std::vector<ComplexMatrix>& table,
                                const std::vector<double>& pi, const RegisterDims& dims);

ClassicalGame gen_chsh();

// The diagonal family: X = B = R = [n], Y = A = {1},
// xi = n^{-1/2} sum_i e_i (x) e_1 (x) e_i, gamma_k = e_1 (x) sum_i gamma_{k,i} e_i (x) e_i.
ProjectionGame gen_diag_family(std::size_t n, const std::vector<std::vector<cpx>>& gammas);

// (1/n) || sum_k D_k* D_k || with D_k = diag(gamma_k).
double closed_form_diag_value(const std::vector<std::vector<cpx>>& gammas);

// Implication game P => Q as a hypergraph game: uniform atoms over an
// orthonormal basis of ran(P), constant answer projection Q.
HypergraphGame gen_implication(const ComplexMatrix& p, const ComplexMatrix& q);

// Quantum XOR game embedding: referee state xi on H_X (x) H_Y (x) H_R and
// projections pi0, pi1 on H_R; returns the projection game (conj xi, conj P)
// with binary answers.
ProjectionGame gen_xor_embedding(const std::vector<cpx>& xi, std::size_t dim_x, std::size_t dim_y,
                                 const ComplexMatrix& pi0, const ComplexMatrix& pi1);

// Matrix of the tensor G = conj((id (x) phi_R)(xi xi* (x) P)) in the basis
// eps_{x,x'} (x) eps_{a,a'} (x) eps_{y,y'} (x) eps_{b,b'}; row (x,a,y,b).
ComplexMatrix build_G_hat(const ProjectionGame& g);

// Hypergraph variant: conj(sum_i mu_i p_i (x) Q_i), same coordinates.
ComplexMatrix build_H_hat(const HypergraphGame& h);

// Eigendecompose a dense positive contraction P into rank terms, dropping
// eigenvalues below 1e-10.
ProjectionGame projection_from_dense(const RegisterDims& dims, const std::vector<cpx>& xi,
                                     const ComplexMatrix& p);

// Pure-state conversion game: the value-1 criterion of LOSR/LOCC
// convertibility of xi into gamma over C^X (x) C^Y.
ProjectionGame conversion_game(const std::vector<cpx>& xi, const std::vector<cpx>& gamma,
                               std::size_t dim_x, std::size_t dim_y);

} // namespace qgv::games
