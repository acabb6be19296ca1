#include <cmath>

#include "qgv/values.hpp"

namespace qgv::values {

namespace {

ComplexMatrix strategy_choi(const QStrategy& s) {
    const std::size_t X = s.e.in_label_dim, A = s.e.out_label_dim, da = s.e.env_dim;
    const std::size_t Y = s.f.in_label_dim, B = s.f.out_label_dim, db = s.f.env_dim;
    const std::size_t XY = X * Y, AB = A * B;
    ComplexMatrix j(AB * XY, AB * XY);
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t x = 0; x < X; ++x)
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t y = 0; y < Y; ++y)
                    for (std::size_t ap = 0; ap < A; ++ap)
                        for (std::size_t xp = 0; xp < X; ++xp)
                            for (std::size_t bp = 0; bp < B; ++bp)
                                for (std::size_t yp = 0; yp < Y; ++yp) {
                                    const ComplexMatrix eb = s.e.block(x, a, xp, ap);
                                    const ComplexMatrix fb = s.f.block(y, b, yp, bp);
                                    cpx v = 0.0;
                                    for (std::size_t i = 0; i < da; ++i)
                                        for (std::size_t ip = 0; ip < da; ++ip)
                                            for (std::size_t q = 0; q < db; ++q)
                                                for (std::size_t qp = 0; qp < db; ++qp)
                                                    v += std::conj(s.psi[i * db + q]) *
                                                         eb(i, ip) * fb(q, qp) *
                                                         s.psi[ip * db + qp];
                                    j((a * B + b) * XY + x * Y + y,
                                      (ap * B + bp) * XY + xp * Y + yp) = v;
                                }
    return j;
}

} // namespace

channels::ChoiMatrix choi_from_q_strategy(const QStrategy& s) {
    const std::size_t XY = s.e.in_label_dim * s.f.in_label_dim;
    const std::size_t AB = s.e.out_label_dim * s.f.out_label_dim;
    return channels::ChoiMatrix(strategy_choi(s), AB, XY);
}

QcMomentModel build_qc_moment_model(const games::ProjectionGame& g) {
    g.validate();
    QcMomentModel m;
    m.X = g.dims.x;
    m.Y = g.dims.y;
    m.A = g.dims.a;
    m.B = g.dims.b;
    const std::size_t X = m.X, Y = m.Y, A = m.A, B = m.B;
    m.side = 1 + A * X + B * Y + A * X * B * Y;

    // Objective: the game matrix on the word block.
    const ComplexMatrix w = game_objective(g);
    m.c = ComplexMatrix(m.side, m.side);
    const std::size_t off = 1 + A * X + B * Y;
    for (std::size_t u = 0; u < w.rows(); ++u)
        for (std::size_t v = 0; v < w.cols(); ++v) m.c(off + u, off + v) = w(u, v);

    // Unit normalization.
    {
        sdp::ComplexEqualityBuilder eq(m.side);
        eq.add(0, 0, 1.0);
        eq.emit(m.constraints, 1.0);
    }
    // Isometry relation on single A-words: sum_a G[(a,x),(a,x')] = delta.
    for (std::size_t x = 0; x < X; ++x)
        for (std::size_t xp = x; xp < X; ++xp) {
            sdp::ComplexEqualityBuilder eq(m.side);
            for (std::size_t a = 0; a < A; ++a) eq.add(m.idx_a(a, x), m.idx_a(a, xp), 1.0);
            eq.emit(m.constraints, x == xp ? cpx(1.0, 0.0) : cpx(0.0, 0.0));
        }
    for (std::size_t y = 0; y < Y; ++y)
        for (std::size_t yp = y; yp < Y; ++yp) {
            sdp::ComplexEqualityBuilder eq(m.side);
            for (std::size_t b = 0; b < B; ++b) eq.add(m.idx_b(b, y), m.idx_b(b, yp), 1.0);
            eq.emit(m.constraints, y == yp ? cpx(1.0, 0.0) : cpx(0.0, 0.0));
        }
    // Marginal consistency of the word block against single B-words.
    for (std::size_t x = 0; x < X; ++x)
        for (std::size_t xp = x; xp < X; ++xp)
            for (std::size_t q1 = 0; q1 < B * Y; ++q1)
                for (std::size_t q2 = 0; q2 < B * Y; ++q2) {
                    if (x == xp && q1 > q2) continue;
                    const std::size_t b = q1 / Y, y = q1 % Y;
                    const std::size_t bp = q2 / Y, yp = q2 % Y;
                    sdp::ComplexEqualityBuilder eq(m.side);
                    for (std::size_t a = 0; a < A; ++a)
                        eq.add(m.idx_ab(a, x, b, y), m.idx_ab(a, xp, bp, yp), 1.0);
                    if (x == xp) eq.add(m.idx_b(b, y), m.idx_b(bp, yp), -1.0);
                    eq.emit(m.constraints, 0.0);
                }
    // And against single A-words.
    for (std::size_t y = 0; y < Y; ++y)
        for (std::size_t yp = y; yp < Y; ++yp)
            for (std::size_t q1 = 0; q1 < A * X; ++q1)
                for (std::size_t q2 = 0; q2 < A * X; ++q2) {
                    if (y == yp && q1 > q2) continue;
                    const std::size_t a = q1 / X, x = q1 % X;
                    const std::size_t ap = q2 / X, xp = q2 % X;
                    sdp::ComplexEqualityBuilder eq(m.side);
                    for (std::size_t b = 0; b < B; ++b)
                        eq.add(m.idx_ab(a, x, b, y), m.idx_ab(ap, xp, b, yp), 1.0);
                    if (y == yp) eq.add(m.idx_a(a, x), m.idx_a(ap, xp), -1.0);
                    eq.emit(m.constraints, 0.0);
                }
    return m;
}

ComplexMatrix induced_gram(const QcMomentModel& m, const QStrategy& s) {
    const std::size_t X = m.X, Y = m.Y, A = m.A, B = m.B;
    const std::size_t da = s.e.env_dim, db = s.f.env_dim;
    ComplexMatrix g(m.side, m.side);
    g(0, 0) = 1.0;

    auto quad = [&](const ComplexMatrix& op) {
        cpx v = 0.0;
        for (std::size_t i = 0; i < s.psi.size(); ++i)
            for (std::size_t j = 0; j < s.psi.size(); ++j)
                v += std::conj(s.psi[i]) * op(i, j) * s.psi[j];
        return v;
    };
    const ComplexMatrix ida = ComplexMatrix::identity(da);
    const ComplexMatrix idb = ComplexMatrix::identity(db);
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t x = 0; x < X; ++x)
            for (std::size_t ap = 0; ap < A; ++ap)
                for (std::size_t xp = 0; xp < X; ++xp)
                    g(m.idx_a(a, x), m.idx_a(ap, xp)) = quad(kron(s.e.block(x, a, xp, ap), idb));
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t y = 0; y < Y; ++y)
            for (std::size_t bp = 0; bp < B; ++bp)
                for (std::size_t yp = 0; yp < Y; ++yp)
                    g(m.idx_b(b, y), m.idx_b(bp, yp)) = quad(kron(ida, s.f.block(y, b, yp, bp)));
    const ComplexMatrix j = strategy_choi(s);
    const std::size_t XY = X * Y;
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t x = 0; x < X; ++x)
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t y = 0; y < Y; ++y)
                    for (std::size_t ap = 0; ap < A; ++ap)
                        for (std::size_t xp = 0; xp < X; ++xp)
                            for (std::size_t bp = 0; bp < B; ++bp)
                                for (std::size_t yp = 0; yp < Y; ++yp)
                                    g(m.idx_ab(a, x, b, y), m.idx_ab(ap, xp, bp, yp)) =
                                        j((a * B + b) * XY + x * Y + y,
                                          (ap * B + bp) * XY + xp * Y + yp);
    return g;
}

double moment_constraint_residual(const QcMomentModel& m, const ComplexMatrix& g) {
    double r = 0.0;
    for (const auto& c : m.constraints)
        r = std::max(r, std::abs(sdp::sparse_inner(c.a, g) - c.b));
    return r;
}

ValueEstimate value_qc_upper(const games::ProjectionGame& g, double tol, std::size_t max_iter) {
    const QcMomentModel m = build_qc_moment_model(g);
    sdp::SdpProblem p;
    p.side = m.side;
    p.c = m.c;
    p.constraints = m.constraints;
    const sdp::SdpSolution s = sdp::solve(p, max_iter, tol);
    ValueEstimate est;
    est.value = s.objective_value;
    est.bound_kind = BoundKind::Upper;
    est.solver = "qc_moment_level1";
    est.iterations = s.iterations;
    est.residual = std::max(s.primal_residual, s.dual_residual);
    return est;
}

ValueEstimate value_qc_upper(const games::HypergraphGame& h, double tol, std::size_t max_iter) {
    return value_qc_upper(games::hypergraph_to_projection(h), tol, max_iter);
}

namespace {

// Level-1 moment relaxation over the matrix-unit letters of the amalgamated
// free products M_A *1 ... *1 M_A and M_B *1 ... *1 M_B, for games whose
// questions are classical. Letter collisions within one input reduce to
// first moments, which is what pins CHSH-type objectives at the Tsirelson
// point.
struct FreeProductModel {
    std::size_t X, Y, A, B;
    std::size_t side;
    std::size_t e(std::size_t x, std::size_t a, std::size_t ap) const {
        return 1 + (x * A + a) * A + ap;
    }
    std::size_t f(std::size_t y, std::size_t b, std::size_t bp) const {
        return 1 + X * A * A + (y * B + b) * B + bp;
    }
};

FreeProductModel make_fp_model(std::size_t X, std::size_t Y, std::size_t A, std::size_t B) {
    FreeProductModel m{X, Y, A, B, 0};
    m.side = 1 + X * A * A + Y * B * B;
    return m;
}

std::vector<sdp::Constraint> fp_constraints(const FreeProductModel& m) {
    std::vector<sdp::Constraint> out;
    const std::size_t side = m.side;
    {
        sdp::ComplexEqualityBuilder eq(side);
        eq.add(0, 0, 1.0);
        eq.emit(out, 1.0);
    }
    // Unit columns: sum_a M[w, e_x(a,a)] = M[w, 0] for every word w.
    for (std::size_t w = 0; w < side; ++w) {
        for (std::size_t x = 0; x < m.X; ++x) {
            sdp::ComplexEqualityBuilder eq(side);
            for (std::size_t a = 0; a < m.A; ++a) eq.add(w, m.e(x, a, a), 1.0);
            eq.add(w, 0, -1.0);
            eq.emit(out, 0.0);
        }
        for (std::size_t y = 0; y < m.Y; ++y) {
            sdp::ComplexEqualityBuilder eq(side);
            for (std::size_t b = 0; b < m.B; ++b) eq.add(w, m.f(y, b, b), 1.0);
            eq.add(w, 0, -1.0);
            eq.emit(out, 0.0);
        }
    }
    // Same-input collisions: M[e_x(a1,a2), e_x(a3,a4)] = d_{a1,a3} M[0, e_x(a2,a4)].
    for (std::size_t x = 0; x < m.X; ++x)
        for (std::size_t a1 = 0; a1 < m.A; ++a1)
            for (std::size_t a2 = 0; a2 < m.A; ++a2)
                for (std::size_t a3 = 0; a3 < m.A; ++a3)
                    for (std::size_t a4 = 0; a4 < m.A; ++a4) {
                        sdp::ComplexEqualityBuilder eq(m.side);
                        eq.add(m.e(x, a1, a2), m.e(x, a3, a4), 1.0);
                        if (a1 == a3) eq.add(0, m.e(x, a2, a4), -1.0);
                        eq.emit(out, 0.0);
                    }
    for (std::size_t y = 0; y < m.Y; ++y)
        for (std::size_t b1 = 0; b1 < m.B; ++b1)
            for (std::size_t b2 = 0; b2 < m.B; ++b2)
                for (std::size_t b3 = 0; b3 < m.B; ++b3)
                    for (std::size_t b4 = 0; b4 < m.B; ++b4) {
                        sdp::ComplexEqualityBuilder eq(m.side);
                        eq.add(m.f(y, b1, b2), m.f(y, b3, b4), 1.0);
                        if (b1 == b3) eq.add(0, m.f(y, b2, b4), -1.0);
                        eq.emit(out, 0.0);
                    }
    // First-moment adjoints: M[0, e_x(a,a')] = conj(M[0, e_x(a',a)]).
    for (std::size_t x = 0; x < m.X; ++x)
        for (std::size_t a = 0; a < m.A; ++a)
            for (std::size_t ap = a; ap < m.A; ++ap) {
                sdp::ComplexEqualityBuilder eq(m.side);
                eq.add(0, m.e(x, a, ap), 1.0);
                eq.add(m.e(x, ap, a), 0, -1.0);
                eq.emit(out, 0.0);
            }
    for (std::size_t y = 0; y < m.Y; ++y)
        for (std::size_t b = 0; b < m.B; ++b)
            for (std::size_t bp = b; bp < m.B; ++bp) {
                sdp::ComplexEqualityBuilder eq(m.side);
                eq.add(0, m.f(y, b, bp), 1.0);
                eq.add(m.f(y, bp, b), 0, -1.0);
                eq.emit(out, 0.0);
            }
    // Cross-block adjoints from commutation:
    // M[f(y,c,d), e(x,al,be)] = M[e(x,be,al), f(y,d,c)].
    for (std::size_t x = 0; x < m.X; ++x)
        for (std::size_t al = 0; al < m.A; ++al)
            for (std::size_t be = 0; be < m.A; ++be)
                for (std::size_t y = 0; y < m.Y; ++y)
                    for (std::size_t c = 0; c < m.B; ++c)
                        for (std::size_t d = 0; d < m.B; ++d) {
                            sdp::ComplexEqualityBuilder eq(m.side);
                            eq.add(m.f(y, c, d), m.e(x, al, be), 1.0);
                            eq.add(m.e(x, be, al), m.f(y, d, c), -1.0);
                            eq.emit(out, 0.0);
                        }
    return out;
}

ValueEstimate fp_solve(const FreeProductModel& m, const ComplexMatrix& c, double tol,
                       std::size_t max_iter) {
    sdp::SdpProblem p;
    p.side = m.side;
    p.c = c;
    p.constraints = fp_constraints(m);
    const sdp::SdpSolution s = sdp::solve(p, max_iter, tol);
    ValueEstimate est;
    est.value = s.objective_value;
    est.bound_kind = BoundKind::Upper;
    est.solver = "qc_freeproduct_level1";
    est.iterations = s.iterations;
    est.residual = std::max(s.primal_residual, s.dual_residual);
    return est;
}

// Hermitian part of conj(K) for a coefficient functional sum K_ij M_ij.
ComplexMatrix hermitian_objective(const ComplexMatrix& k) {
    const std::size_t n = k.rows();
    ComplexMatrix a = k.conjugate();
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return h;
}

} // namespace

ValueEstimate value_qc_upper(const games::ClassicalGame& g, double tol, std::size_t max_iter) {
    g.validate();
    const FreeProductModel m = make_fp_model(g.dims.x, g.dims.y, g.dims.a, g.dims.b);
    ComplexMatrix k(m.side, m.side);
    for (std::size_t x = 0; x < g.dims.x; ++x)
        for (std::size_t y = 0; y < g.dims.y; ++y)
            for (std::size_t a = 0; a < g.dims.a; ++a)
                for (std::size_t b = 0; b < g.dims.b; ++b)
                    if (g.rule_at(x, y, a, b))
                        k(m.e(x, a, a), m.f(y, b, b)) += g.pi[x * g.dims.y + y];
    return fp_solve(m, hermitian_objective(k), tol, max_iter);
}

ValueEstimate value_qc_upper_cq(const std::vector<ComplexMatrix>& table,
                                const std::vector<double>& pi, const games::RegisterDims& dims,
                                double tol, std::size_t max_iter) {
    if (table.size() != dims.xy() || pi.size() != dims.xy())
        throw DimensionError("value_qc_upper_cq: table/pi size mismatch");
    const FreeProductModel m = make_fp_model(dims.x, dims.y, dims.a, dims.b);
    ComplexMatrix k(m.side, m.side);
    const std::size_t B = dims.b;
    for (std::size_t x = 0; x < dims.x; ++x)
        for (std::size_t y = 0; y < dims.y; ++y) {
            const double w = pi[x * dims.y + y];
            if (w <= 0.0) continue;
            const ComplexMatrix& phi = table[x * dims.y + y];
            for (std::size_t a = 0; a < dims.a; ++a)
                for (std::size_t ap = 0; ap < dims.a; ++ap)
                    for (std::size_t b = 0; b < B; ++b)
                        for (std::size_t bp = 0; bp < B; ++bp)
                            k(m.e(x, ap, a), m.f(y, b, bp)) +=
                                w * phi(ap * B + bp, a * B + b);
        }
    return fp_solve(m, hermitian_objective(k), tol, max_iter);
}

} // namespace qgv::values
