#include "qgv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qgv {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diag(const std::vector<double>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::diag(const std::vector<cpx>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::col(const std::vector<cpx>& v) {
    ComplexMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix add: shape mismatch");
    ComplexMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sub: shape mismatch");
    ComplexMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
    if (cols_ != o.rows_) throw DimensionError("matrix mul: shape mismatch");
    ComplexMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const cpx aik = a_[i * cols_ + k];
            if (aik == cpx(0.0, 0.0)) continue;
            const cpx* brow = &o.a_[k * o.cols_];
            cpx* rrow = &r.a_[i * o.cols_];
            for (std::size_t j = 0; j < o.cols_; ++j) rrow[j] += aik * brow[j];
        }
    }
    return r;
}

ComplexMatrix ComplexMatrix::operator*(cpx s) const {
    ComplexMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix add: shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sub: shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cpx s) {
    for (auto& v : a_) v *= s;
    return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = std::conj(a_[i]);
    return r;
}

cpx ComplexMatrix::trace() const {
    if (rows_ != cols_) throw DimensionError("trace: non-square");
    cpx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
    for (const auto& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double ComplexMatrix::hermiticity_error() const {
    if (rows_ != cols_) throw DimensionError("hermiticity_error: non-square");
    double e = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            e = std::max(e, std::abs((*this)(i, j) - std::conj((*this)(j, i))) * 0.5);
    return e;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const cpx v = a(ia, ja);
            if (v == cpx(0.0, 0.0)) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb = 0; jb < b.cols(); ++jb)
                    r(ia * b.rows() + ib, ja * b.cols() + jb) = v * b(ib, jb);
        }
    return r;
}

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
    std::size_t p = 1;
    for (auto d : dims) p *= d;
    return p;
}

void flat_to_multi(std::size_t flat, const std::vector<std::size_t>& dims, std::vector<std::size_t>& out) {
    for (std::size_t k = dims.size(); k-- > 0;) {
        out[k] = flat % dims[k];
        flat /= dims[k];
    }
}

std::size_t multi_to_flat(const std::vector<std::size_t>& idx, const std::vector<std::size_t>& dims) {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + idx[k];
    return flat;
}

} // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::set<std::size_t>& traced) {
    const std::size_t side = product(dims);
    if (m.rows() != m.cols() || m.rows() != side)
        throw DimensionError("partial_trace: side does not match dims");
    for (auto t : traced)
        if (t >= dims.size()) throw DimensionError("partial_trace: traced index out of range");

    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (!traced.count(k)) kept.push_back(k);

    std::vector<std::size_t> kept_dims, traced_dims;
    for (auto k : kept) kept_dims.push_back(dims[k]);
    std::vector<std::size_t> traced_list(traced.begin(), traced.end());
    for (auto k : traced_list) traced_dims.push_back(dims[k]);

    const std::size_t out_side = product(kept_dims);
    const std::size_t tr_count = product(traced_dims);
    ComplexMatrix r(out_side, out_side);

    std::vector<std::size_t> mi(dims.size()), mj(dims.size());
    std::vector<std::size_t> ik(kept.size()), jk(kept.size()), t(traced_list.size());
    for (std::size_t io = 0; io < out_side; ++io) {
        flat_to_multi(io, kept_dims, ik);
        for (std::size_t jo = 0; jo < out_side; ++jo) {
            flat_to_multi(jo, kept_dims, jk);
            cpx s = 0.0;
            for (std::size_t tt = 0; tt < tr_count; ++tt) {
                flat_to_multi(tt, traced_dims, t);
                for (std::size_t k = 0; k < kept.size(); ++k) {
                    mi[kept[k]] = ik[k];
                    mj[kept[k]] = jk[k];
                }
                for (std::size_t k = 0; k < traced_list.size(); ++k) {
                    mi[traced_list[k]] = t[k];
                    mj[traced_list[k]] = t[k];
                }
                s += m(multi_to_flat(mi, dims), multi_to_flat(mj, dims));
            }
            r(io, jo) = s;
        }
    }
    return r;
}

ComplexMatrix permute_factors(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& perm) {
    const std::size_t side = product(dims);
    if (m.rows() != side || m.cols() != side)
        throw DimensionError("permute_factors: side does not match dims");
    std::vector<std::size_t> new_dims(dims.size());
    for (std::size_t k = 0; k < perm.size(); ++k) new_dims[k] = dims[perm[k]];

    ComplexMatrix r(side, side);
    std::vector<std::size_t> io(dims.size()), jo(dims.size()), in(dims.size()), jn(dims.size());
    for (std::size_t i = 0; i < side; ++i) {
        flat_to_multi(i, dims, io);
        for (std::size_t k = 0; k < perm.size(); ++k) in[k] = io[perm[k]];
        const std::size_t inew = multi_to_flat(in, new_dims);
        for (std::size_t j = 0; j < side; ++j) {
            flat_to_multi(j, dims, jo);
            for (std::size_t k = 0; k < perm.size(); ++k) jn[k] = jo[perm[k]];
            r(inew, multi_to_flat(jn, new_dims)) = m(i, j);
        }
    }
    return r;
}

namespace {

// One cyclic Jacobi pass over all off-diagonal pairs; returns updated matrix
// in place and accumulates rotations into v.
void jacobi_sweep(ComplexMatrix& s, ComplexMatrix& v) {
    const std::size_t n = s.rows();
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const cpx apq = s(p, q);
            const double r = std::abs(apq);
            if (r == 0.0) continue;
            const double app = s(p, p).real();
            const double aqq = s(q, q).real();
            // Phase absorbed so the 2x2 block becomes real symmetric.
            const cpx phase = std::conj(apq) / r;
            const double tau = (aqq - app) / (2.0 * r);
            double t;
            if (tau >= 0.0)
                t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
            else
                t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double sn = t * c;
            const cpx sp = sn * phase;           // G(q,p) = -sp, G(q,q) = c*phase
            // Columns: S <- S G, with G(p,p)=c, G(p,q)=sn, G(q,p)=-sp, G(q,q)=c*phase.
            for (std::size_t k = 0; k < n; ++k) {
                const cpx skp = s(k, p), skq = s(k, q);
                s(k, p) = c * skp - sp * skq;
                s(k, q) = sn * skp + c * phase * skq;
            }
            // Rows: S <- G* S.
            for (std::size_t k = 0; k < n; ++k) {
                const cpx spk = s(p, k), sqk = s(q, k);
                s(p, k) = c * spk - std::conj(sp) * sqk;
                s(q, k) = sn * spk + c * std::conj(phase) * sqk;
            }
            // Accumulate eigenvectors: V <- V G.
            for (std::size_t k = 0; k < n; ++k) {
                const cpx vkp = v(k, p), vkq = v(k, q);
                v(k, p) = c * vkp - sp * vkq;
                v(k, q) = sn * vkp + c * phase * vkq;
            }
        }
    }
}

double off_norm(const ComplexMatrix& s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j)
            if (i != j) acc += std::norm(s(i, j));
    return std::sqrt(acc);
}

// Phase convention: first component of modulus > 1e-8 made real positive.
void fix_phase(ComplexMatrix& v, std::size_t col) {
    for (std::size_t i = 0; i < v.rows(); ++i) {
        const cpx x = v(i, col);
        if (std::abs(x) > 1e-8) {
            const cpx ph = std::conj(x) / std::abs(x);
            for (std::size_t k = 0; k < v.rows(); ++k) v(k, col) *= ph;
            return;
        }
    }
}

// Lexicographic comparison of phase-fixed columns, used to order degenerate
// eigenvalue clusters reproducibly.
bool col_less(const ComplexMatrix& v, std::size_t c1, std::size_t c2) {
    for (std::size_t i = 0; i < v.rows(); ++i) {
        const cpx a = v(i, c1), b = v(i, c2);
        if (a.real() != b.real()) return a.real() < b.real();
        if (a.imag() != b.imag()) return a.imag() < b.imag();
    }
    return false;
}

} // namespace

HermitianEigen herm_eig(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) throw DimensionError("herm_eig: non-square");
    const std::size_t n = h.rows();

    // Symmetrize (h + h*)/2.
    ComplexMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

    ComplexMatrix v = ComplexMatrix::identity(n);
    const double stop = 1e-13 * (1.0 + s.frobenius_norm());
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (off_norm(s) < stop) break;
        jacobi_sweep(s, v);
    }

    HermitianEigen out;
    out.eigenvalues.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = s(i, i).real();

    for (std::size_t c = 0; c < n; ++c) fix_phase(v, c);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (d[a] != d[b]) return d[a] < d[b];
        return col_less(v, a, b);
    });

    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        out.eigenvalues[c] = d[order[c]];
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, c) = v(i, order[c]);
    }
    return out;
}

ComplexMatrix psd_project(const ComplexMatrix& h) {
    const HermitianEigen e = herm_eig(h);
    const std::size_t n = h.rows();
    ComplexMatrix r(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const double lam = e.eigenvalues[c];
        if (lam <= 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cpx vi = e.eigenvectors(i, c) * lam;
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += vi * std::conj(e.eigenvectors(j, c));
        }
    }
    return r;
}

double op_norm(const ComplexMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    const ComplexMatrix g = a.adjoint() * a;
    const HermitianEigen e = herm_eig(g);
    const double lam = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
    return std::sqrt(std::max(0.0, lam));
}

ComplexMatrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
    if (rows < cols) throw DimensionError("random_isometry: rows < cols");
    ComplexMatrix g(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) g(i, j) = rng.gaussian_complex();
    // Modified Gram-Schmidt with one re-orthogonalization pass.
    for (std::size_t j = 0; j < cols; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                cpx proj = 0.0;
                for (std::size_t i = 0; i < rows; ++i) proj += std::conj(g(i, k)) * g(i, j);
                for (std::size_t i = 0; i < rows; ++i) g(i, j) -= proj * g(i, k);
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < rows; ++i) nrm += std::norm(g(i, j));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) {
            // Degenerate draw; replace with a fresh Gaussian column.
            for (std::size_t i = 0; i < rows; ++i) g(i, j) = rng.gaussian_complex();
            --j;
            continue;
        }
        for (std::size_t i = 0; i < rows; ++i) g(i, j) /= nrm;
    }
    return g;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) e = std::max(e, std::abs(a(i, j) - b(i, j)));
    return e;
}

double min_eigenvalue(const ComplexMatrix& h) {
    const HermitianEigen e = herm_eig(h);
    return e.eigenvalues.empty() ? 0.0 : e.eigenvalues.front();
}

double re_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("re_inner: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            s += (std::conj(a(i, j)) * b(i, j)).real();
    return s;
}

} // namespace qgv
