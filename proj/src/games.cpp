#include "qgv/games.hpp"

#include <cmath>

namespace qgv::games {

namespace {

double vec_norm(const std::vector<cpx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

cpx vec_inner(const std::vector<cpx>& a, const std::vector<cpx>& b) {
    // Linear in the first argument.
    cpx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
    return s;
}

} // namespace

void ProjectionGame::validate() const {
    if (dims.x < 1 || dims.y < 1 || dims.a < 1 || dims.b < 1 || dims.r < 1)
        throw ValidationError("ProjectionGame: register dims must all be >= 1");
    if (xi.size() != dims.xy() * dims.r) throw DimensionError("ProjectionGame: xi size mismatch");
    if (std::abs(vec_norm(xi) - 1.0) > 1e-10)
        throw ValidationError("ProjectionGame: xi is not a unit vector");
    for (const auto& t : p_terms) {
        if (t.gamma.size() != dims.ab() * dims.r)
            throw DimensionError("ProjectionGame: gamma size mismatch");
        if (t.lambda < -1e-12 || t.lambda > 1.0 + 1e-12)
            throw ValidationError("ProjectionGame: lambda outside [0,1]");
    }
    if (!allow_nonorthogonal) {
        for (std::size_t k = 0; k < p_terms.size(); ++k)
            for (std::size_t l = 0; l <= k; ++l) {
                const cpx ip = vec_inner(p_terms[k].gamma, p_terms[l].gamma);
                const double target = (k == l) ? 1.0 : 0.0;
                if (std::abs(ip - cpx(target, 0.0)) > 1e-8)
                    throw ValidationError("ProjectionGame: gamma terms not orthonormal");
            }
    }
}

ComplexMatrix ProjectionGame::p_dense() const {
    const std::size_t n = dims.ab() * dims.r;
    ComplexMatrix p(n, n);
    for (const auto& t : p_terms)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                p(i, j) += t.lambda * t.gamma[i] * std::conj(t.gamma[j]);
    return p;
}

ComplexMatrix ProjectionGame::xi_density() const {
    const std::size_t n = xi.size();
    ComplexMatrix rho(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rho(i, j) = xi[i] * std::conj(xi[j]);
    return rho;
}

void HypergraphGame::validate() const {
    if (atoms.empty()) throw ValidationError("HypergraphGame: no atoms");
    double total = 0.0;
    for (const auto& at : atoms) {
        if (at.weight <= 0.0) throw ValidationError("HypergraphGame: atom weight must be positive");
        total += at.weight;
        if (at.xi.size() != dims.xy()) throw DimensionError("HypergraphGame: atom state size mismatch");
        if (std::abs(vec_norm(at.xi) - 1.0) > 1e-8)
            throw ValidationError("HypergraphGame: atom state not a unit vector");
        if (at.q.rows() != dims.ab() || at.q.cols() != dims.ab())
            throw DimensionError("HypergraphGame: atom projection side mismatch");
        if (max_abs_diff(at.q * at.q, at.q) > 1e-8 || at.q.hermiticity_error() > 1e-8)
            throw ValidationError("HypergraphGame: atom Q is not a projection");
    }
    if (std::abs(total - 1.0) > 1e-10) throw ValidationError("HypergraphGame: weights must sum to 1");
}

bool ClassicalGame::rule_at(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return rule[((x * dims.y + y) * dims.a + a) * dims.b + b] != 0;
}

void ClassicalGame::validate() const {
    if (rule.size() != dims.xy() * dims.ab()) throw DimensionError("ClassicalGame: rule size mismatch");
    if (pi.size() != dims.xy()) throw DimensionError("ClassicalGame: pi size mismatch");
    double total = 0.0;
    for (double w : pi) {
        if (w < 0.0) throw ValidationError("ClassicalGame: negative probability");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("ClassicalGame: pi must sum to 1");
}

double GameTensor::column_norm_sq() const {
    double s = 0.0;
    for (const auto& m : rho) {
        const double f = m.frobenius_norm();
        s += f * f;
    }
    return s;
}

GameTensor game_tensor(const ProjectionGame& g) {
    g.validate();
    const std::size_t XY = g.dims.xy(), AB = g.dims.ab(), R = g.dims.r;
    GameTensor t;
    for (const auto& term : g.p_terms) {
        ComplexMatrix m(XY, AB);
        const double root = std::sqrt(std::max(0.0, term.lambda));
        for (std::size_t u = 0; u < XY; ++u)
            for (std::size_t v = 0; v < AB; ++v) {
                cpx s = 0.0;
                for (std::size_t r = 0; r < R; ++r)
                    s += std::conj(g.xi[u * R + r]) * term.gamma[v * R + r];
                m(u, v) = root * s;
            }
        t.rho.push_back(std::move(m));
    }
    return t;
}

HypergraphGame classical_to_hypergraph(const ClassicalGame& g) {
    g.validate();
    HypergraphGame h;
    h.dims = g.dims;
    h.dims.r = 1;
    for (std::size_t x = 0; x < g.dims.x; ++x)
        for (std::size_t y = 0; y < g.dims.y; ++y) {
            const double w = g.pi[x * g.dims.y + y];
            if (w <= 0.0) continue;
            HypergraphAtom at;
            at.weight = w;
            at.xi.assign(g.dims.xy(), cpx(0.0, 0.0));
            at.xi[x * g.dims.y + y] = 1.0;
            at.q = ComplexMatrix(g.dims.ab(), g.dims.ab());
            for (std::size_t a = 0; a < g.dims.a; ++a)
                for (std::size_t b = 0; b < g.dims.b; ++b)
                    if (g.rule_at(x, y, a, b)) at.q(a * g.dims.b + b, a * g.dims.b + b) = 1.0;
            h.atoms.push_back(std::move(at));
        }
    h.validate();
    return h;
}

ProjectionGame hypergraph_to_projection(const HypergraphGame& h) {
    h.validate();
    const std::size_t k = h.atoms.size();
    ProjectionGame g;
    g.dims = h.dims;
    g.dims.r = k;
    g.xi.assign(h.dims.xy() * k, cpx(0.0, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        const double root = std::sqrt(h.atoms[i].weight);
        for (std::size_t u = 0; u < h.dims.xy(); ++u) g.xi[u * k + i] = root * h.atoms[i].xi[u];
    }
    for (std::size_t i = 0; i < k; ++i) {
        const HermitianEigen eig = herm_eig(h.atoms[i].q);
        for (std::size_t c = 0; c < eig.eigenvalues.size(); ++c) {
            if (eig.eigenvalues[c] < 0.5) continue;
            RankTerm term;
            term.lambda = 1.0;
            term.gamma.assign(h.dims.ab() * k, cpx(0.0, 0.0));
            for (std::size_t v = 0; v < h.dims.ab(); ++v)
                term.gamma[v * k + i] = eig.eigenvectors(v, c);
            g.p_terms.push_back(std::move(term));
        }
    }
    g.validate();
    return g;
}

ProjectionGame cq_to_projection(const std::vector<ComplexMatrix>& table,
                                const std::vector<double>& pi, const RegisterDims& dims) {
    if (table.size() != dims.xy() || pi.size() != dims.xy())
        throw DimensionError("cq_to_projection: table/pi size mismatch");
    HypergraphGame h;
    h.dims = dims;
    h.dims.r = 1;
    for (std::size_t u = 0; u < dims.xy(); ++u) {
        if (pi[u] <= 0.0) continue;
        HypergraphAtom at;
        at.weight = pi[u];
        at.xi.assign(dims.xy(), cpx(0.0, 0.0));
        at.xi[u] = 1.0;
        at.q = table[u];
        h.atoms.push_back(std::move(at));
    }
    return hypergraph_to_projection(h);
}

ClassicalGame gen_chsh() {
    ClassicalGame g;
    g.dims = {2, 2, 2, 2, 1};
    g.rule.assign(16, 0);
    g.pi.assign(4, 0.25);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b)
                    g.rule[((x * 2 + y) * 2 + a) * 2 + b] = ((a ^ b) == (x & y)) ? 1 : 0;
    return g;
}

ProjectionGame gen_diag_family(std::size_t n, const std::vector<std::vector<cpx>>& gammas) {
    for (std::size_t k = 0; k < gammas.size(); ++k) {
        if (gammas[k].size() != n) throw DimensionError("gen_diag_family: gamma length mismatch");
        for (std::size_t l = 0; l <= k; ++l) {
            const cpx ip = vec_inner(gammas[k], gammas[l]);
            const double target = (k == l) ? 1.0 : 0.0;
            if (std::abs(ip - cpx(target, 0.0)) > 1e-8)
                throw ValidationError("gen_diag_family: gamma vectors must be orthonormal");
        }
    }
    ProjectionGame g;
    g.dims = {n, 1, 1, n, n};
    g.xi.assign(n * n, cpx(0.0, 0.0));
    const double root = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) g.xi[i * n + i] = root;
    for (const auto& gk : gammas) {
        RankTerm term;
        term.lambda = 1.0;
        term.gamma.assign(n * n, cpx(0.0, 0.0));
        for (std::size_t i = 0; i < n; ++i) term.gamma[i * n + i] = gk[i];
        g.p_terms.push_back(std::move(term));
    }
    g.validate();
    return g;
}

double closed_form_diag_value(const std::vector<std::vector<cpx>>& gammas) {
    if (gammas.empty()) return 0.0;
    const std::size_t n = gammas[0].size();
    ComplexMatrix s(n, n);
    for (const auto& gk : gammas) {
        const ComplexMatrix d = ComplexMatrix::diag(gk);
        s += d.adjoint() * d;
    }
    return op_norm(s) / static_cast<double>(n);
}

HypergraphGame gen_implication(const ComplexMatrix& p, const ComplexMatrix& q) {
    const std::size_t nx = p.rows();
    const std::size_t na = q.rows();
    const auto isqrt = [](std::size_t m) {
        std::size_t r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m))));
        if (r * r != m) throw DimensionError("gen_implication: projection side is not a square");
        return r;
    };
    const std::size_t side_x = isqrt(nx), side_a = isqrt(na);
    if (max_abs_diff(p * p, p) > 1e-8 || p.hermiticity_error() > 1e-8)
        throw ValidationError("gen_implication: P is not a projection");
    if (max_abs_diff(q * q, q) > 1e-8 || q.hermiticity_error() > 1e-8)
        throw ValidationError("gen_implication: Q is not a projection");

    const HermitianEigen eig = herm_eig(p);
    std::vector<std::size_t> range;
    for (std::size_t c = 0; c < eig.eigenvalues.size(); ++c)
        if (eig.eigenvalues[c] > 0.5) range.push_back(c);
    if (range.empty()) throw ValidationError("gen_implication: P has rank 0");

    HypergraphGame h;
    h.dims = {side_x, side_x, side_a, side_a, 1};
    for (std::size_t c : range) {
        HypergraphAtom at;
        at.weight = 1.0 / static_cast<double>(range.size());
        at.xi.resize(nx);
        for (std::size_t i = 0; i < nx; ++i) at.xi[i] = eig.eigenvectors(i, c);
        at.q = q;
        h.atoms.push_back(std::move(at));
    }
    h.validate();
    return h;
}

ProjectionGame gen_xor_embedding(const std::vector<cpx>& xi, std::size_t dim_x, std::size_t dim_y,
                                 const ComplexMatrix& pi0, const ComplexMatrix& pi1) {
    const std::size_t dim_r = pi0.rows();
    if (pi1.rows() != dim_r) throw DimensionError("gen_xor_embedding: projection sides differ");
    if (xi.size() != dim_x * dim_y * dim_r) throw DimensionError("gen_xor_embedding: xi size mismatch");
    if (max_abs_diff(pi0 * pi0, pi0) > 1e-8 || max_abs_diff(pi1 * pi1, pi1) > 1e-8)
        throw ValidationError("gen_xor_embedding: pi0/pi1 must be projections");

    // P = sum_{ab} eps_{ab,ab} (x) Pi_{a xor b}; the game uses (conj xi, conj P).
    const std::size_t ab_dim = 4;
    ComplexMatrix p(ab_dim * dim_r, ab_dim * dim_r);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            const ComplexMatrix& blk = ((a ^ b) == 0) ? pi0 : pi1;
            const std::size_t off = (a * 2 + b) * dim_r;
            for (std::size_t i = 0; i < dim_r; ++i)
                for (std::size_t j = 0; j < dim_r; ++j) p(off + i, off + j) = std::conj(blk(i, j));
        }
    std::vector<cpx> xibar(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) xibar[i] = std::conj(xi[i]);

    RegisterDims dims{dim_x, dim_y, 2, 2, dim_r};
    return projection_from_dense(dims, xibar, p);
}

ComplexMatrix build_G_hat(const ProjectionGame& g) {
    g.validate();
    const std::size_t X = g.dims.x, Y = g.dims.y, A = g.dims.a, B = g.dims.b, R = g.dims.r;
    const ComplexMatrix p = g.p_dense();
    const std::size_t side = X * A * Y * B;
    ComplexMatrix out(side, side);
    auto row_of = [&](std::size_t x, std::size_t a, std::size_t y, std::size_t b) {
        return ((x * A + a) * Y + y) * B + b;
    };
    for (std::size_t x = 0; x < X; ++x)
        for (std::size_t y = 0; y < Y; ++y)
            for (std::size_t xp = 0; xp < X; ++xp)
                for (std::size_t yp = 0; yp < Y; ++yp)
                    for (std::size_t a = 0; a < A; ++a)
                        for (std::size_t b = 0; b < B; ++b)
                            for (std::size_t ap = 0; ap < A; ++ap)
                                for (std::size_t bp = 0; bp < B; ++bp) {
                                    cpx t = 0.0;
                                    for (std::size_t r = 0; r < R; ++r)
                                        for (std::size_t rp = 0; rp < R; ++rp)
                                            t += g.xi[(x * Y + y) * R + r] *
                                                 std::conj(g.xi[(xp * Y + yp) * R + rp]) *
                                                 p((a * B + b) * R + rp, (ap * B + bp) * R + r);
                                    out(row_of(x, a, y, b), row_of(xp, ap, yp, bp)) = std::conj(t);
                                }
    return out;
}

ComplexMatrix build_H_hat(const HypergraphGame& h) {
    h.validate();
    const std::size_t X = h.dims.x, Y = h.dims.y, A = h.dims.a, B = h.dims.b;
    const std::size_t side = X * A * Y * B;
    ComplexMatrix out(side, side);
    auto row_of = [&](std::size_t x, std::size_t a, std::size_t y, std::size_t b) {
        return ((x * A + a) * Y + y) * B + b;
    };
    for (const auto& at : h.atoms)
        for (std::size_t x = 0; x < X; ++x)
            for (std::size_t y = 0; y < Y; ++y)
                for (std::size_t xp = 0; xp < X; ++xp)
                    for (std::size_t yp = 0; yp < Y; ++yp)
                        for (std::size_t a = 0; a < A; ++a)
                            for (std::size_t b = 0; b < B; ++b)
                                for (std::size_t ap = 0; ap < A; ++ap)
                                    for (std::size_t bp = 0; bp < B; ++bp)
                                        out(row_of(x, a, y, b), row_of(xp, ap, yp, bp)) +=
                                            at.weight *
                                            std::conj(at.xi[x * Y + y] *
                                                      std::conj(at.xi[xp * Y + yp]) *
                                                      at.q(a * B + b, ap * B + bp));
    return out;
}

ProjectionGame projection_from_dense(const RegisterDims& dims, const std::vector<cpx>& xi,
                                     const ComplexMatrix& p) {
    const std::size_t n = dims.ab() * dims.r;
    if (p.rows() != n || p.cols() != n) throw DimensionError("projection_from_dense: P side mismatch");
    if (p.hermiticity_error() > 1e-9) throw ValidationError("projection_from_dense: P not Hermitian");
    const HermitianEigen eig = herm_eig(p);
    ProjectionGame g;
    g.dims = dims;
    g.xi = xi;
    for (std::size_t c = 0; c < eig.eigenvalues.size(); ++c) {
        double lam = eig.eigenvalues[c];
        if (lam < -1e-8) throw ValidationError("projection_from_dense: P not positive");
        if (lam > 1.0 + 1e-8) throw ValidationError("projection_from_dense: P not a contraction");
        lam = std::min(std::max(lam, 0.0), 1.0);
        if (lam < 1e-10) continue;
        RankTerm term;
        term.lambda = lam;
        term.gamma.resize(n);
        for (std::size_t i = 0; i < n; ++i) term.gamma[i] = eig.eigenvectors(i, c);
        g.p_terms.push_back(std::move(term));
    }
    g.validate();
    return g;
}

ProjectionGame conversion_game(const std::vector<cpx>& xi, const std::vector<cpx>& gamma,
                               std::size_t dim_x, std::size_t dim_y) {
    if (xi.size() != dim_x * dim_y || gamma.size() != dim_x * dim_y)
        throw DimensionError("conversion_game: vector sizes mismatch");
    ProjectionGame g;
    g.dims = {dim_x, dim_y, dim_x, dim_y, 1};
    g.xi = xi;
    RankTerm term;
    term.lambda = 1.0;
    term.gamma = gamma;
    g.p_terms.push_back(std::move(term));
    g.validate();
    return g;
}

} // namespace qgv::games
