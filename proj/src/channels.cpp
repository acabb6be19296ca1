#include "qgv/channels.hpp"

#include <cmath>

namespace qgv::channels {

ChoiMatrix::ChoiMatrix(ComplexMatrix jj, std::size_t out, std::size_t in)
    : j(std::move(jj)), in_dim(in), out_dim(out) {
    if (j.rows() != out * in || j.cols() != out * in)
        throw DimensionError("ChoiMatrix: side must be out_dim * in_dim");
}

bool ChoiMatrix::is_channel(const Tolerances& tol) const {
    if (!j.is_hermitian(1e-9)) return false;
    if (min_eigenvalue(j) < -tol.cp) return false;
    const ComplexMatrix marg = partial_trace(j, {out_dim, in_dim}, {0});
    return (marg - ComplexMatrix::identity(in_dim)).frobenius_norm() < tol.tp;
}

void ChoiMatrix::require_channel(const Tolerances& tol) const {
    if (!is_channel(tol)) throw ValidationError("ChoiMatrix: not a channel within tolerance");
}

ChoiMatrix ChoiMatrix::identity(std::size_t d) {
    ComplexMatrix j(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) j(i * d + i, k * d + k) = 1.0;
    return ChoiMatrix(j, d, d);
}

ChoiMatrix ChoiMatrix::replacer(const ComplexMatrix& sigma, std::size_t in_dim) {
    return ChoiMatrix(kron(sigma, ComplexMatrix::identity(in_dim)), sigma.rows(), in_dim);
}

ChoiMatrix ChoiMatrix::depolarizing(std::size_t in_dim, std::size_t out_dim) {
    ComplexMatrix sigma = ComplexMatrix::identity(out_dim) * cpx(1.0 / out_dim, 0.0);
    return replacer(sigma, in_dim);
}

ChoiMatrix ChoiMatrix::from_kraus(const std::vector<ComplexMatrix>& kraus) {
    if (kraus.empty()) throw ValidationError("from_kraus: empty Kraus list");
    const std::size_t out = kraus[0].rows(), in = kraus[0].cols();
    ComplexMatrix j(out * in, out * in);
    for (const auto& k : kraus) {
        if (k.rows() != out || k.cols() != in) throw DimensionError("from_kraus: shape mismatch");
        for (std::size_t a = 0; a < out; ++a)
            for (std::size_t x = 0; x < in; ++x)
                for (std::size_t ap = 0; ap < out; ++ap)
                    for (std::size_t xp = 0; xp < in; ++xp)
                        j(a * in + x, ap * in + xp) += k(a, x) * std::conj(k(ap, xp));
    }
    return ChoiMatrix(j, out, in);
}

double BlockIsometry::isometry_error() const {
    double err = 0.0;
    for (std::size_t x = 0; x < in_label_dim; ++x) {
        for (std::size_t xp = 0; xp < in_label_dim; ++xp) {
            ComplexMatrix s(env_in_dim, env_in_dim);
            for (std::size_t a = 0; a < out_label_dim; ++a)
                s += block(a, x).adjoint() * block(a, xp);
            if (x == xp) s -= ComplexMatrix::identity(env_in_dim);
            err = std::max(err, max_abs_diff(s, ComplexMatrix(env_in_dim, env_in_dim)));
        }
    }
    return err;
}

void BlockIsometry::require_valid(double tol) const {
    if (blocks.size() != in_label_dim * out_label_dim)
        throw DimensionError("BlockIsometry: wrong number of blocks");
    for (const auto& b : blocks)
        if (b.rows() != env_out_dim || b.cols() != env_in_dim)
            throw DimensionError("BlockIsometry: block shape mismatch");
    if (isometry_error() > tol) throw ValidationError("BlockIsometry: isometry relation violated");
}

ComplexMatrix StochasticOperatorMatrix::block(std::size_t x, std::size_t a, std::size_t xp,
                                              std::size_t ap) const {
    ComplexMatrix r(env_dim, env_dim);
    const std::size_t row0 = (x * out_label_dim + a) * env_dim;
    const std::size_t col0 = (xp * out_label_dim + ap) * env_dim;
    for (std::size_t i = 0; i < env_dim; ++i)
        for (std::size_t k = 0; k < env_dim; ++k) r(i, k) = e(row0 + i, col0 + k);
    return r;
}

double StochasticOperatorMatrix::positivity_defect() const {
    return std::max(0.0, -min_eigenvalue(e));
}

double StochasticOperatorMatrix::marginal_error() const {
    // Factors of e are (X, A, H); trace out A.
    const ComplexMatrix marg = partial_trace(e, {in_label_dim, out_label_dim, env_dim}, {1});
    return (marg - ComplexMatrix::identity(in_label_dim * env_dim)).frobenius_norm();
}

void StochasticOperatorMatrix::require_valid(double cp_tol, double tp_tol) const {
    if (e.rows() != in_label_dim * out_label_dim * env_dim)
        throw DimensionError("StochasticOperatorMatrix: side mismatch");
    if (positivity_defect() > cp_tol)
        throw ValidationError("StochasticOperatorMatrix: not positive");
    if (marginal_error() > tp_tol)
        throw ValidationError("StochasticOperatorMatrix: Tr_A E != I");
}

ChoiMatrix gamma_from_isometry(const BlockIsometry& u, const ComplexMatrix& sigma) {
    if (sigma.rows() != u.env_in_dim || sigma.cols() != u.env_in_dim)
        throw DimensionError("gamma_from_isometry: sigma side mismatch");
    const std::size_t X = u.in_label_dim, A = u.out_label_dim;
    ComplexMatrix j(A * X, A * X);
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t x = 0; x < X; ++x)
            for (std::size_t ap = 0; ap < A; ++ap)
                for (std::size_t xp = 0; xp < X; ++xp) {
                    const ComplexMatrix m = u.block(a, x).adjoint() * u.block(ap, xp);
                    j(a * X + x, ap * X + xp) = (sigma * m).trace();
                }
    return ChoiMatrix(j, A, X);
}

ChoiMatrix gamma_sharp(const ChoiMatrix& c) {
    return ChoiMatrix(c.j.transpose(), c.out_dim, c.in_dim);
}

BlockIsometry isometry_from_channel(const ChoiMatrix& c) {
    c.require_channel();
    const HermitianEigen eig = herm_eig(c.j);
    const double cutoff = 1e-10 * std::abs(c.j.trace());
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
        if (eig.eigenvalues[k] > cutoff) keep.push_back(k);

    // Kraus operator s has entries V_s(a,x) = sqrt(lam_s) * vec_s[(a,x)];
    // the conjugated blocks make gamma_from_isometry reproduce c exactly.
    BlockIsometry u;
    u.in_label_dim = c.in_dim;
    u.out_label_dim = c.out_dim;
    u.env_in_dim = 1;
    u.env_out_dim = keep.size();
    u.blocks.assign(c.in_dim * c.out_dim, ComplexMatrix(keep.size(), 1));
    for (std::size_t a = 0; a < c.out_dim; ++a)
        for (std::size_t x = 0; x < c.in_dim; ++x) {
            ComplexMatrix& blk = u.block(a, x);
            for (std::size_t s = 0; s < keep.size(); ++s) {
                const double root = std::sqrt(eig.eigenvalues[keep[s]]);
                blk(s, 0) = std::conj(root * eig.eigenvectors(a * c.in_dim + x, keep[s]));
            }
        }
    return u;
}

StochasticOperatorMatrix stochastic_from_isometry(const BlockIsometry& u) {
    const std::size_t X = u.in_label_dim, A = u.out_label_dim, H = u.env_in_dim;
    StochasticOperatorMatrix s;
    s.in_label_dim = X;
    s.out_label_dim = A;
    s.env_dim = H;
    s.e = ComplexMatrix(X * A * H, X * A * H);
    for (std::size_t x = 0; x < X; ++x)
        for (std::size_t a = 0; a < A; ++a)
            for (std::size_t xp = 0; xp < X; ++xp)
                for (std::size_t ap = 0; ap < A; ++ap) {
                    const ComplexMatrix m = u.block(a, x).adjoint() * u.block(ap, xp);
                    const std::size_t r0 = (x * A + a) * H, c0 = (xp * A + ap) * H;
                    for (std::size_t i = 0; i < H; ++i)
                        for (std::size_t k = 0; k < H; ++k) s.e(r0 + i, c0 + k) = m(i, k);
                }
    return s;
}

ChoiMatrix tensor_channels(const ChoiMatrix& c1, const ChoiMatrix& c2) {
    // kron gives factors (A1, X1, A2, X2); the product channel needs
    // (A1, A2, X1, X2).
    const ComplexMatrix k = kron(c1.j, c2.j);
    const std::vector<std::size_t> dims = {c1.out_dim, c1.in_dim, c2.out_dim, c2.in_dim};
    const ComplexMatrix p = permute_factors(k, dims, {0, 2, 1, 3});
    return ChoiMatrix(p, c1.out_dim * c2.out_dim, c1.in_dim * c2.in_dim);
}

ComplexMatrix apply_choi(const ChoiMatrix& c, const ComplexMatrix& rho) {
    if (rho.rows() != c.in_dim || rho.cols() != c.in_dim)
        throw DimensionError("apply_choi: rho side mismatch");
    ComplexMatrix out(c.out_dim, c.out_dim);
    for (std::size_t a = 0; a < c.out_dim; ++a)
        for (std::size_t b = 0; b < c.out_dim; ++b) {
            cpx s = 0.0;
            for (std::size_t i = 0; i < c.in_dim; ++i)
                for (std::size_t k = 0; k < c.in_dim; ++k)
                    s += c.j(a * c.in_dim + i, b * c.in_dim + k) * rho(i, k);
            out(a, b) = s;
        }
    return out;
}

BlockIsometry tensor_isometries(const BlockIsometry& u, const BlockIsometry& v) {
    BlockIsometry w;
    w.in_label_dim = u.in_label_dim * v.in_label_dim;
    w.out_label_dim = u.out_label_dim * v.out_label_dim;
    w.env_in_dim = u.env_in_dim * v.env_in_dim;
    w.env_out_dim = u.env_out_dim * v.env_out_dim;
    w.blocks.assign(w.in_label_dim * w.out_label_dim, ComplexMatrix());
    for (std::size_t a = 0; a < u.out_label_dim; ++a)
        for (std::size_t b = 0; b < v.out_label_dim; ++b)
            for (std::size_t x = 0; x < u.in_label_dim; ++x)
                for (std::size_t y = 0; y < v.in_label_dim; ++y)
                    w.block(a * v.out_label_dim + b, x * v.in_label_dim + y) =
                        kron(u.block(a, x), v.block(b, y));
    return w;
}

BlockIsometry random_block_isometry(std::size_t in_label_dim, std::size_t out_label_dim,
                                    std::size_t env_in, Rng& rng) {
    const std::size_t env_out = in_label_dim * env_in;
    const ComplexMatrix v =
        random_isometry(out_label_dim * env_out, in_label_dim * env_in, rng);
    BlockIsometry u;
    u.in_label_dim = in_label_dim;
    u.out_label_dim = out_label_dim;
    u.env_in_dim = env_in;
    u.env_out_dim = env_out;
    u.blocks.assign(in_label_dim * out_label_dim, ComplexMatrix(env_out, env_in));
    for (std::size_t a = 0; a < out_label_dim; ++a)
        for (std::size_t x = 0; x < in_label_dim; ++x) {
            ComplexMatrix& blk = u.block(a, x);
            for (std::size_t i = 0; i < env_out; ++i)
                for (std::size_t k = 0; k < env_in; ++k)
                    blk(i, k) = v(a * env_out + i, x * env_in + k);
        }
    return u;
}

BlockIsometry isometry_from_pvms(const std::vector<std::vector<ComplexMatrix>>& pvms) {
    const std::size_t X = pvms.size();
    if (X == 0) throw ValidationError("isometry_from_pvms: empty");
    const std::size_t A = pvms[0].size();
    const std::size_t d = pvms[0][0].rows();
    BlockIsometry u;
    u.in_label_dim = X;
    u.out_label_dim = A;
    u.env_in_dim = d;
    u.env_out_dim = X * d;
    u.blocks.assign(X * A, ComplexMatrix(X * d, d));
    for (std::size_t x = 0; x < X; ++x) {
        if (pvms[x].size() != A) throw DimensionError("isometry_from_pvms: ragged outcome lists");
        for (std::size_t a = 0; a < A; ++a) {
            ComplexMatrix& blk = u.block(a, x);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t k = 0; k < d; ++k) blk(x * d + i, k) = pvms[x][a](i, k);
        }
    }
    u.require_valid(1e-7);
    return u;
}

ComplexMatrix pure_density(const std::vector<cpx>& psi) {
    ComplexMatrix rho(psi.size(), psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        for (std::size_t j = 0; j < psi.size(); ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
    return rho;
}

} // namespace qgv::channels
