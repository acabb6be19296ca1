#pragma once

#include <cstddef>
#include <vector>

#include "qgv/linalg.hpp"

namespace qgv::channels {

// Validation tolerances; solvers produce approximately feasible points, so
// callers may loosen these per call.
struct Tolerances {
    double cp = 1e-8; // smallest admissible eigenvalue is -cp
    double tp = 1e-7; // Frobenius distance of Tr_out J from I_in
};

// Choi matrix J = sum_{ij} Phi(eps_ij) (x) eps_ij on out (x) in ordering.
struct ChoiMatrix {
    ComplexMatrix j;
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;

    ChoiMatrix() = default;
    ChoiMatrix(ComplexMatrix jj, std::size_t out, std::size_t in);

    bool is_channel(const Tolerances& tol = {}) const;
    void require_channel(const Tolerances& tol = {}) const;

    static ChoiMatrix identity(std::size_t d);
    // Phi(rho) = Tr(rho) * sigma, J = sigma (x) I_in.
    static ChoiMatrix replacer(const ComplexMatrix& sigma, std::size_t in_dim);
    // Phi(rho) = Tr(rho) I/out_dim.
    static ChoiMatrix depolarizing(std::size_t in_dim, std::size_t out_dim);
    // Conjugation by a single Kraus operator k (unitary gives a channel).
    static ChoiMatrix from_kraus(const std::vector<ComplexMatrix>& kraus);
};

// Block operator isometry U = (U_{a,x}) : C^X (x) H -> C^A (x) K; the blocks
// satisfy sum_a U*_{a,x} U_{a,x'} = delta_{xx'} I_H.
struct BlockIsometry {
    std::size_t in_label_dim = 0;  // |X|
    std::size_t out_label_dim = 0; // |A|
    std::size_t env_in_dim = 0;    // dim H
    std::size_t env_out_dim = 0;   // dim K
    std::vector<ComplexMatrix> blocks; // indexed a * |X| + x, each env_out x env_in

    const ComplexMatrix& block(std::size_t a, std::size_t x) const {
        return blocks[a * in_label_dim + x];
    }
    ComplexMatrix& block(std::size_t a, std::size_t x) { return blocks[a * in_label_dim + x]; }

    double isometry_error() const;
    void require_valid(double tol = 1e-8) const;
};

// Positive block operator matrix E on C^X (x) C^A (x) H with Tr_A E = I.
struct StochasticOperatorMatrix {
    std::size_t in_label_dim = 0;  // |X|
    std::size_t out_label_dim = 0; // |A|
    std::size_t env_dim = 0;       // dim H
    ComplexMatrix e;               // side |X||A|env, (x,a) blocks

    ComplexMatrix block(std::size_t x, std::size_t a, std::size_t xp, std::size_t ap) const;
    double positivity_defect() const;   // max(0, -lambda_min)
    double marginal_error() const;      // ||Tr_A E - I||_F
    void require_valid(double cp_tol = 1e-8, double tp_tol = 1e-7) const;
};

// Choi matrix of Gamma_{U,sigma}(eps_xx') = sum_{aa'} Tr(sigma U*_{a,x} U_{a',x'}) eps_aa'.
ChoiMatrix gamma_from_isometry(const BlockIsometry& u, const ComplexMatrix& sigma);

// Choi of rho -> Gamma(rho^t)^t; an involution.
ChoiMatrix gamma_sharp(const ChoiMatrix& c);

// Kraus decomposition of the Choi matrix re-packed as a block isometry with
// trivial environment input, so gamma_from_isometry(result, [1]) == c.
BlockIsometry isometry_from_channel(const ChoiMatrix& c);

// E with (x,a),(x',a') block U*_{a,x} U_{a',x'}.
StochasticOperatorMatrix stochastic_from_isometry(const BlockIsometry& u);

// Choi of Phi1 (x) Phi2 with outputs A1 (x) A2 and inputs X1 (x) X2.
ChoiMatrix tensor_channels(const ChoiMatrix& c1, const ChoiMatrix& c2);

// Phi(rho) = Tr_in(J (I_out (x) rho^t)).
ComplexMatrix apply_choi(const ChoiMatrix& c, const ComplexMatrix& rho);

// Blockwise tensor (U (x) V)_{(ab),(xy)} = U_{a,x} (x) V_{b,y}.
BlockIsometry tensor_isometries(const BlockIsometry& u, const BlockIsometry& v);

// Random block isometry with environment input dimension env_in; the
// environment output is |X| * env_in, which always admits an isometry.
BlockIsometry random_block_isometry(std::size_t in_label_dim, std::size_t out_label_dim,
                                    std::size_t env_in, Rng& rng);

// Isometry encoding per-input projective measurements {P^x_a}_a on C^d:
// U_{a,x} = e_x (x) P^x_a with K = C^X (x) C^d.
BlockIsometry isometry_from_pvms(const std::vector<std::vector<ComplexMatrix>>& pvms);

// Density matrix of a pure state given as a flat vector.
ComplexMatrix pure_density(const std::vector<cpx>& psi);

} // namespace qgv::channels
