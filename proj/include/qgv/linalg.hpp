#pragma once

#include <complex>
#include <cstddef>
#include <set>
#include <vector>

#include "qgv/errors.hpp"
#include "qgv/rng.hpp"

namespace qgv {

using cpx = std::complex<double>;

// Dense complex matrix, row-major, double precision. The universal numeric
// carrier for every operator in the library.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cpx(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diag(const std::vector<double>& d);
    static ComplexMatrix diag(const std::vector<cpx>& d);
    // n x 1 column vector from entries.
    static ComplexMatrix col(const std::vector<cpx>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return a_.empty(); }

    cpx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cpx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    cpx* data() { return a_.data(); }
    const cpx* data() const { return a_.data(); }

    ComplexMatrix operator+(const ComplexMatrix& o) const;
    ComplexMatrix operator-(const ComplexMatrix& o) const;
    ComplexMatrix operator*(const ComplexMatrix& o) const;
    ComplexMatrix operator*(cpx s) const;
    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cpx s);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    cpx trace() const;
    double frobenius_norm() const;
    bool all_finite() const;
    // Max entrywise deviation from (A + A*)/2; requires square.
    double hermiticity_error() const;
    bool is_hermitian(double tol = 1e-9) const { return rows_ == cols_ && hermiticity_error() <= tol; }

private:
    std::size_t rows_, cols_;
    std::vector<cpx> a_;
};

struct HermitianEigen {
    std::vector<double> eigenvalues; // ascending
    ComplexMatrix eigenvectors;      // column j pairs with eigenvalue j
};

// Kronecker product; (i_a*rows_b+i_b, j_a*cols_b+j_b) = a(i_a,j_a)*b(i_b,j_b).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Partial trace over the tensor factors listed in `traced`; remaining factors
// keep their original order. `m` must be square with side = prod(dims).
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::set<std::size_t>& traced);

// Permute tensor factors of an operator: factor k of the result is factor
// perm[k] of the input.
ComplexMatrix permute_factors(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& perm);

// Cyclic complex Jacobi eigensolver for Hermitian matrices. Deterministic:
// fixed sweep order; eigenvalues ascending; in each eigenvector the first
// component of modulus > 1e-8 is made real and positive; degenerate clusters
// are ordered lexicographically after the phase fix.
HermitianEigen herm_eig(const ComplexMatrix& h);

// Clamp negative eigenvalues to zero and reconstruct.
ComplexMatrix psd_project(const ComplexMatrix& h);

// Largest singular value, computed as sqrt(lambda_max(a* a)).
double op_norm(const ComplexMatrix& a);

// Isometry with V*V = I_cols, from Gram-Schmidt orthonormalization of an
// i.i.d. standard complex Gaussian matrix (Haar when rows == cols).
ComplexMatrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double min_eigenvalue(const ComplexMatrix& h);

// Re Tr(a* b), the real Hilbert-Schmidt pairing.
double re_inner(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace qgv
