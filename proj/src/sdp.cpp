#include "qgv/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qgv::sdp {

void SparseHermitian::add(std::size_t i, std::size_t j, cpx v) {
    if (i > j) {
        std::swap(i, j);
        v = std::conj(v);
    }
    for (auto& e : entries) {
        if (e.i == i && e.j == j) {
            e.v += v;
            return;
        }
    }
    entries.push_back({i, j, v});
}

ComplexMatrix SparseHermitian::dense() const {
    ComplexMatrix m(side, side);
    for (const auto& e : entries) {
        m(e.i, e.j) += e.v;
        if (e.i != e.j) m(e.j, e.i) += std::conj(e.v);
    }
    return m;
}

double sparse_inner(const SparseHermitian& a, const ComplexMatrix& x) {
    double s = 0.0;
    for (const auto& e : a.entries) {
        if (e.i == e.j) {
            s += (std::conj(e.v) * x(e.i, e.i)).real();
        } else {
            s += (std::conj(e.v) * x(e.i, e.j)).real() + (e.v * x(e.j, e.i)).real();
        }
    }
    return s;
}

void ComplexEqualityBuilder::add(std::size_t i, std::size_t j, cpx coeff) {
    k_.emplace_back(i, j, coeff);
}

void ComplexEqualityBuilder::emit(std::vector<Constraint>& out, cpx rhs) const {
    // L(X) = sum K_ij X_ij = Tr(A* X) with A = conj(K) entrywise. Split
    // A = H1 + i H2 with H1, H2 Hermitian; over Hermitian X the equality
    // becomes Tr(H1 X) = Re rhs and Tr(H2 X) = -Im rhs.
    std::map<std::pair<std::size_t, std::size_t>, cpx> a; // full matrix of A
    for (const auto& [i, j, k] : k_) a[{i, j}] += std::conj(k);

    SparseHermitian h1, h2;
    h1.side = h2.side = side_;
    const cpx I(0.0, 1.0);
    for (const auto& [ij, aij] : a) {
        const auto [i, j] = ij;
        if (i > j) continue; // handled from the (j,i) side
        if (i == j) {
            if (aij.real() != 0.0) h1.add(i, i, aij.real());
            if (aij.imag() != 0.0) h2.add(i, i, aij.imag());
        } else {
            cpx aji(0.0, 0.0);
            auto it = a.find({j, i});
            if (it != a.end()) aji = it->second;
            const cpx v1 = 0.5 * (aij + std::conj(aji));
            const cpx v2 = (aij - std::conj(aji)) / (2.0 * I);
            if (v1 != cpx(0.0, 0.0)) h1.add(i, j, v1);
            if (v2 != cpx(0.0, 0.0)) h2.add(i, j, v2);
        }
    }
    // Entries strictly below the diagonal with no upper partner.
    for (const auto& [ij, aij] : a) {
        const auto [i, j] = ij;
        if (i <= j) continue;
        if (a.count({j, i})) continue;
        const cpx v1 = 0.5 * std::conj(aij);
        const cpx v2 = -std::conj(aij) / (2.0 * I);
        if (v1 != cpx(0.0, 0.0)) h1.add(j, i, v1);
        if (v2 != cpx(0.0, 0.0)) h2.add(j, i, v2);
    }
    if (!h1.entries.empty()) out.push_back({h1, rhs.real()});
    if (!h2.entries.empty()) out.push_back({h2, -rhs.imag()});
}

namespace {

// Dense Cholesky of a symmetric positive definite matrix (row-major).
void cholesky_inplace(std::vector<double>& g, std::size_t m) {
    for (std::size_t k = 0; k < m; ++k) {
        double d = g[k * m + k];
        for (std::size_t p = 0; p < k; ++p) d -= g[k * m + p] * g[k * m + p];
        d = std::sqrt(std::max(d, 1e-300));
        g[k * m + k] = d;
        for (std::size_t i = k + 1; i < m; ++i) {
            double s = g[i * m + k];
            for (std::size_t p = 0; p < k; ++p) s -= g[i * m + p] * g[k * m + p];
            g[i * m + k] = s / d;
        }
    }
}

void cholesky_solve(const std::vector<double>& l, std::size_t m, std::vector<double>& y) {
    for (std::size_t i = 0; i < m; ++i) {
        double s = y[i];
        for (std::size_t p = 0; p < i; ++p) s -= l[i * m + p] * y[p];
        y[i] = s / l[i * m + i];
    }
    for (std::size_t i = m; i-- > 0;) {
        double s = y[i];
        for (std::size_t p = i + 1; p < m; ++p) s -= l[p * m + i] * y[p];
        y[i] = s / l[i * m + i];
    }
}

double re_between(const SparseHermitian& a, const SparseHermitian& b) {
    // Re Tr(A* B) via dense scatter of the smaller into a map.
    double s = 0.0;
    for (const auto& ea : a.entries) {
        for (const auto& eb : b.entries) {
            if (ea.i == eb.i && ea.j == eb.j) {
                const double w = (ea.i == ea.j) ? 1.0 : 2.0;
                s += w * (std::conj(ea.v) * eb.v).real();
            }
        }
    }
    return s;
}

// Eigendecomposition helper reused across ADMM iterations: keeps an
// accumulated basis so each call starts from a nearly diagonal matrix.
class WarmEig {
public:
    explicit WarmEig(std::size_t n) : n_(n), basis_(ComplexMatrix::identity(n)) {}

    // Projects h onto the PSD cone.
    ComplexMatrix psd(const ComplexMatrix& h) {
        // B = V* H V is near diagonal once the basis has settled.
        ComplexMatrix b = basis_.adjoint() * h * basis_;
        ComplexMatrix v = ComplexMatrix::identity(n_);
        const double stop = 1e-12 * (1.0 + b.frobenius_norm());
        for (int sweep = 0; sweep < 60; ++sweep) {
            if (offnorm(b) < stop) break;
            sweep_once(b, v);
        }
        basis_ = basis_ * v;
        // Reconstruct with negative eigenvalues clamped.
        ComplexMatrix r(n_, n_);
        for (std::size_t c = 0; c < n_; ++c) {
            const double lam = b(c, c).real();
            if (lam <= 0.0) continue;
            for (std::size_t i = 0; i < n_; ++i) {
                const cpx vi = basis_(i, c) * lam;
                for (std::size_t j = 0; j < n_; ++j) r(i, j) += vi * std::conj(basis_(j, c));
            }
        }
        // Exact Hermitian symmetrization keeps the iterates well-typed.
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j) {
                const cpx m = 0.5 * (r(i, j) + std::conj(r(j, i)));
                r(i, j) = m;
                r(j, i) = std::conj(m);
            }
        return r;
    }

private:
    static double offnorm(const ComplexMatrix& s) {
        double acc = 0.0;
        for (std::size_t i = 0; i < s.rows(); ++i)
            for (std::size_t j = 0; j < s.cols(); ++j)
                if (i != j) acc += std::norm(s(i, j));
        return std::sqrt(acc);
    }

    static void sweep_once(ComplexMatrix& s, ComplexMatrix& v) {
        const std::size_t n = s.rows();
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cpx apq = s(p, q);
                const double r = std::abs(apq);
                if (r < 1e-300) continue;
                const double app = s(p, p).real();
                const double aqq = s(q, q).real();
                const cpx phase = std::conj(apq) / r;
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                const cpx sp = sn * phase;
                for (std::size_t k = 0; k < n; ++k) {
                    const cpx skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sp * skq;
                    s(k, q) = sn * skp + c * phase * skq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cpx spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - std::conj(sp) * sqk;
                    s(q, k) = sn * spk + c * std::conj(phase) * sqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cpx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sp * vkq;
                    v(k, q) = sn * vkp + c * phase * vkq;
                }
            }
        }
    }

    std::size_t n_;
    ComplexMatrix basis_;
};

} // namespace

SdpSolution solve(const SdpProblem& p, std::size_t max_iter, double tol) {
    const std::size_t n = p.side;
    const std::size_t m = p.constraints.size();
    for (const auto& c : p.constraints)
        if (c.a.side != n) throw DimensionError("sdp::solve: constraint side mismatch");
    if (p.c.rows() != n || p.c.cols() != n) throw DimensionError("sdp::solve: objective side mismatch");

    // Gram matrix of the constraints, Cholesky-factored once.
    std::vector<double> gram(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            const double g = re_between(p.constraints[i].a, p.constraints[j].a);
            gram[i * m + j] = g;
            gram[j * m + i] = g;
        }
        gram[i * m + i] += 1e-12;
    }
    cholesky_inplace(gram, m);

    auto project_affine = [&](ComplexMatrix& x, double& residual_before) {
        std::vector<double> y(m);
        residual_before = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            y[i] = sparse_inner(p.constraints[i].a, x) - p.constraints[i].b;
            residual_before = std::max(
                residual_before, std::abs(y[i]) / (1.0 + std::abs(p.constraints[i].b)));
        }
        if (m == 0) return;
        cholesky_solve(gram, m, y);
        for (std::size_t i = 0; i < m; ++i) {
            if (y[i] == 0.0) continue;
            for (const auto& e : p.constraints[i].a.entries) {
                x(e.i, e.j) -= y[i] * e.v;
                if (e.i != e.j) x(e.j, e.i) -= y[i] * std::conj(e.v);
            }
        }
    };

    ComplexMatrix x(n, n), z(n, n), u(n, n);
    WarmEig eig(n);
    double rho = 1.0;
    const double alpha = 1.6;
    double rp = 0.0, rd = 0.0;
    bool converged = false;
    std::size_t it = 0;
    std::size_t stagnant = 0;

    for (it = 1; it <= max_iter; ++it) {
        // X update: affine projection of Z - U + C/rho.
        x = z - u + p.c * cpx(1.0 / rho, 0.0);
        double aff_res = 0.0;
        project_affine(x, aff_res);
        // Affine residual AFTER projection detects inconsistent constraints.
        double post_res = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double r =
                std::abs(sparse_inner(p.constraints[i].a, x) - p.constraints[i].b) /
                (1.0 + std::abs(p.constraints[i].b));
            post_res = std::max(post_res, r);
        }
        if (post_res > 1e-6) {
            if (++stagnant >= 5000)
                throw InfeasibleError("sdp::solve: affine residual stagnates; constraints inconsistent");
        } else {
            stagnant = 0;
        }

        // Over-relaxation and cone step.
        ComplexMatrix xhat = x * cpx(alpha, 0.0) + z * cpx(1.0 - alpha, 0.0);
        ComplexMatrix zprev = z;
        z = eig.psd(xhat + u);
        u += xhat - z;

        const double xn = x.frobenius_norm(), zn = z.frobenius_norm();
        rp = (x - z).frobenius_norm() / (1.0 + std::max(xn, zn));
        rd = rho * (z - zprev).frobenius_norm() / (1.0 + rho * u.frobenius_norm());
        if (rp < tol && rd < tol) {
            if (post_res > 1e-6)
                throw InfeasibleError("sdp::solve: converged to a point violating the constraints");
            converged = true;
            break;
        }
        if (it % 50 == 0) {
            if (rp > 10.0 * rd) {
                rho *= 2.0;
                u *= cpx(0.5, 0.0);
            } else if (rd > 10.0 * rp) {
                rho *= 0.5;
                u *= cpx(2.0, 0.0);
            }
        }
    }
    if (it > max_iter) it = max_iter;

    SdpSolution sol;
    sol.x = x;
    sol.objective_value = re_inner(p.c, x);
    sol.primal_residual = rp;
    sol.dual_residual = rd;
    sol.iterations = it;
    sol.converged = converged;
    return sol;
}

std::vector<Constraint> choi_tp_constraints(std::size_t out_dim, std::size_t in_dim) {
    std::vector<Constraint> out;
    const std::size_t side = out_dim * in_dim;
    for (std::size_t i = 0; i < in_dim; ++i) {
        for (std::size_t j = i; j < in_dim; ++j) {
            ComplexEqualityBuilder eq(side);
            for (std::size_t a = 0; a < out_dim; ++a) eq.add(a * in_dim + i, a * in_dim + j, 1.0);
            eq.emit(out, i == j ? cpx(1.0, 0.0) : cpx(0.0, 0.0));
        }
    }
    return out;
}

std::pair<ComplexMatrix, double> max_over_choi(const ComplexMatrix& w, std::size_t out_dim,
                                               std::size_t in_dim,
                                               const std::vector<Constraint>& extra,
                                               std::size_t max_iter, double tol) {
    const std::size_t side = out_dim * in_dim;
    if (w.rows() != side || w.cols() != side)
        throw DimensionError("max_over_choi: W side mismatch");
    SdpProblem p;
    p.side = side;
    p.c = w;
    p.constraints = choi_tp_constraints(out_dim, in_dim);
    for (const auto& c : extra) p.constraints.push_back(c);
    SdpSolution s = solve(p, max_iter, tol);
    return {s.x, s.objective_value};
}

} // namespace qgv::sdp
