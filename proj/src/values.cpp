#include "qgv/values.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>

#include "values_detail.hpp"

namespace qgv::values {

const char* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::Exact: return "exact";
        case BoundKind::Lower: return "lower";
        case BoundKind::Upper: return "upper";
    }
    return "?";
}

std::size_t restart_threads() {
    if (const char* env = std::getenv("QGV_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

void run_restarts(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t nt = std::min<std::size_t>(restart_threads(), n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

ComplexMatrix game_objective(const games::ProjectionGame& g) {
    const games::GameTensor gt = games::game_tensor(g);
    const std::size_t XY = g.dims.xy(), AB = g.dims.ab();
    const std::size_t side = AB * XY;
    ComplexMatrix w(side, side);
    for (const auto& rho : gt.rho) {
        // m[(ab,xy)] = rho[xy, ab]; W += m m*.
        std::vector<cpx> m(side);
        for (std::size_t v = 0; v < AB; ++v)
            for (std::size_t u = 0; u < XY; ++u) m[v * XY + u] = rho(u, v);
        for (std::size_t i = 0; i < side; ++i) {
            if (m[i] == cpx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < side; ++j) w(i, j) += m[i] * std::conj(m[j]);
        }
    }
    return w;
}

ComplexMatrix game_objective(const games::HypergraphGame& h) {
    h.validate();
    const std::size_t XY = h.dims.xy(), AB = h.dims.ab();
    const std::size_t side = AB * XY;
    ComplexMatrix w(side, side);
    for (const auto& at : h.atoms)
        for (std::size_t p_ab = 0; p_ab < AB; ++p_ab)
            for (std::size_t p_xy = 0; p_xy < XY; ++p_xy)
                for (std::size_t q_ab = 0; q_ab < AB; ++q_ab)
                    for (std::size_t q_xy = 0; q_xy < XY; ++q_xy)
                        w(p_ab * XY + p_xy, q_ab * XY + q_xy) +=
                            at.weight * at.xi[q_xy] * std::conj(at.xi[p_xy]) *
                            at.q(p_ab, q_ab);
    return w;
}

double evaluate_strategy(const games::ProjectionGame& g, const channels::ChoiMatrix& c) {
    g.validate();
    if (c.in_dim != g.dims.xy() || c.out_dim != g.dims.ab())
        throw DimensionError("evaluate_strategy: channel dims mismatch");
    c.require_channel({1e-7, 1e-6});
    const channels::ChoiMatrix ext =
        channels::tensor_channels(c, channels::ChoiMatrix::identity(g.dims.r));
    const ComplexMatrix out = channels::apply_choi(ext, g.xi_density());
    const ComplexMatrix p = g.p_dense();
    cpx t = 0.0;
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) t += out(i, j) * p(j, i);
    return t.real();
}

double evaluate_isometry_strategy(const games::ProjectionGame& g, const channels::BlockIsometry& u,
                                  const ComplexMatrix& sigma) {
    if (u.in_label_dim != g.dims.xy() || u.out_label_dim != g.dims.ab())
        throw DimensionError("evaluate_isometry_strategy: label dims mismatch");
    if (sigma.rows() != u.env_in_dim) throw DimensionError("evaluate_isometry_strategy: sigma side");
    u.require_valid(1e-7);
    const games::GameTensor gt = games::game_tensor(g);
    double total = 0.0;
    for (const auto& rho : gt.rho) {
        ComplexMatrix phi(u.env_out_dim, u.env_in_dim);
        for (std::size_t v = 0; v < g.dims.ab(); ++v)
            for (std::size_t w = 0; w < g.dims.xy(); ++w) {
                const cpx coeff = rho(w, v);
                if (coeff == cpx(0.0, 0.0)) continue;
                const ComplexMatrix& blk = u.block(v, w);
                for (std::size_t i = 0; i < u.env_out_dim; ++i)
                    for (std::size_t k = 0; k < u.env_in_dim; ++k) phi(i, k) += coeff * blk(i, k);
            }
        total += (sigma * (phi.adjoint() * phi)).trace().real();
    }
    return total;
}

std::vector<sdp::Constraint> ns_constraints(const games::RegisterDims& dims) {
    const std::size_t X = dims.x, Y = dims.y, A = dims.a, B = dims.b;
    const std::size_t XY = X * Y, AB = A * B;
    const std::size_t side = AB * XY;
    auto at = [&](std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
        return (a * B + b) * XY + (x * Y + y);
    };
    std::vector<sdp::Constraint> out = sdp::choi_tp_constraints(AB, XY);

    // B-marginal blind to x: Tr_A of the (x,y),(x',y') block vanishes for
    // x != x' and is x-independent on the diagonal.
    for (std::size_t x = 0; x < X; ++x)
        for (std::size_t xp = x; xp < X; ++xp) {
            for (std::size_t q1 = 0; q1 < B * Y; ++q1)
                for (std::size_t q2 = 0; q2 < B * Y; ++q2) {
                    if (x == xp && q1 > q2) continue; // adjoint duplicate
                    if (x == xp && x == 0) continue;  // reference block
                    const std::size_t b = q1 / Y, y = q1 % Y;
                    const std::size_t bp = q2 / Y, yp = q2 % Y;
                    sdp::ComplexEqualityBuilder eq(side);
                    for (std::size_t a = 0; a < A; ++a)
                        eq.add(at(a, b, x, y), at(a, bp, xp, yp), 1.0);
                    if (x == xp)
                        for (std::size_t a = 0; a < A; ++a)
                            eq.add(at(a, b, 0, y), at(a, bp, 0, yp), -1.0);
                    eq.emit(out, 0.0);
                }
        }

    // A-marginal blind to y.
    for (std::size_t y = 0; y < Y; ++y)
        for (std::size_t yp = y; yp < Y; ++yp) {
            for (std::size_t q1 = 0; q1 < A * X; ++q1)
                for (std::size_t q2 = 0; q2 < A * X; ++q2) {
                    if (y == yp && q1 > q2) continue;
                    if (y == yp && y == 0) continue;
                    const std::size_t a = q1 / X, x = q1 % X;
                    const std::size_t ap = q2 / X, xp = q2 % X;
                    sdp::ComplexEqualityBuilder eq(side);
                    for (std::size_t b = 0; b < B; ++b)
                        eq.add(at(a, b, x, y), at(ap, b, xp, yp), 1.0);
                    if (y == yp)
                        for (std::size_t b = 0; b < B; ++b)
                            eq.add(at(a, b, x, 0), at(ap, b, xp, 0), -1.0);
                    eq.emit(out, 0.0);
                }
        }
    return out;
}

namespace {

ValueEstimate ns_value_from(const ComplexMatrix& w, const games::RegisterDims& dims, double tol,
                            std::size_t max_iter) {
    sdp::SdpProblem p;
    p.side = w.rows();
    p.c = w;
    p.constraints = ns_constraints(dims);
    const sdp::SdpSolution s = sdp::solve(p, max_iter, tol);
    ValueEstimate est;
    est.value = s.objective_value;
    est.bound_kind = BoundKind::Exact;
    est.solver = "ns_sdp";
    est.iterations = s.iterations;
    est.residual = std::max(s.primal_residual, s.dual_residual);
    return est;
}

} // namespace

ValueEstimate value_ns(const games::ProjectionGame& g, double tol, std::size_t max_iter) {
    return ns_value_from(game_objective(g), g.dims, tol, max_iter);
}

ValueEstimate value_ns(const games::HypergraphGame& h, double tol, std::size_t max_iter) {
    return ns_value_from(game_objective(h), h.dims, tol, max_iter);
}

ValueEstimate value_classical_loc_exact(const games::ClassicalGame& g) {
    g.validate();
    const std::size_t X = g.dims.x, Y = g.dims.y, A = g.dims.a, B = g.dims.b;
    double combos = 1.0;
    for (std::size_t i = 0; i < X; ++i) combos *= static_cast<double>(A);
    for (std::size_t i = 0; i < Y; ++i) combos *= static_cast<double>(B);
    if (combos > 1e7) throw SizeError("value_classical_loc_exact: strategy space exceeds cap");

    // For a fixed Bob assignment the optimal Alice answer decouples per x.
    std::vector<std::size_t> gb(Y, 0);
    double best = 0.0;
    bool done = false;
    while (!done) {
        double total = 0.0;
        for (std::size_t x = 0; x < X; ++x) {
            double bx = 0.0;
            for (std::size_t a = 0; a < A; ++a) {
                double s = 0.0;
                for (std::size_t y = 0; y < Y; ++y)
                    if (g.rule_at(x, y, a, gb[y])) s += g.pi[x * Y + y];
                bx = std::max(bx, s);
            }
            total += bx;
        }
        best = std::max(best, total);
        // next Bob assignment
        std::size_t k = 0;
        for (; k < Y; ++k) {
            if (++gb[k] < B) break;
            gb[k] = 0;
        }
        done = (k == Y);
    }
    ValueEstimate est;
    est.value = best;
    est.bound_kind = BoundKind::Exact;
    est.solver = "classical_enumeration";
    return est;
}

std::pair<channels::BlockIsometry, ComplexMatrix> chsh_tsirelson_strategy() {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix z(2, 2), x(2, 2), id = ComplexMatrix::identity(2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    auto projs = [&](const ComplexMatrix& obs) {
        std::vector<ComplexMatrix> p(2);
        p[0] = (id + obs) * cpx(0.5, 0.0);
        p[1] = (id - obs) * cpx(0.5, 0.0);
        return p;
    };
    const ComplexMatrix bp = (z + x) * cpx(s, 0.0);
    const ComplexMatrix bm = (z - x) * cpx(s, 0.0);
    const channels::BlockIsometry ua = channels::isometry_from_pvms({projs(z), projs(x)});
    const channels::BlockIsometry ub = channels::isometry_from_pvms({projs(bp), projs(bm)});
    const channels::BlockIsometry u = channels::tensor_isometries(ua, ub);

    std::vector<cpx> bell = {s, 0.0, 0.0, s};
    return {u, channels::pure_density(bell)};
}

ChainReport chain_report(const games::ProjectionGame& g, const ChainOptions& opts) {
    ChainReport rep;
    rep.loc = value_loc_lower(g, opts.seesaw);
    rep.q = value_q_lower(g, opts.d_a, opts.d_b, opts.seesaw);
    rep.lowc = value_lowc_lower(g, opts.branches, opts.seesaw);
    rep.qc = value_qc_upper(g);
    rep.ns = value_ns(g);
    auto check = [&](double lo, double hi, const char* what) {
        if (lo > hi + opts.tol)
            throw InternalConsistencyError(std::string("chain violated: ") + what + " (" +
                                           std::to_string(lo) + " > " + std::to_string(hi) + ")");
    };
    check(rep.loc.value, rep.q.value, "loc <= q");
    check(rep.q.value, rep.qc.value, "q <= qc_upper");
    check(rep.q.value, rep.ns.value, "q <= ns");
    check(rep.loc.value, rep.lowc.value, "loc <= lowc");
    rep.chain_ok = true;
    return rep;
}

ChainReport chain_report(const games::HypergraphGame& h, const ChainOptions& opts) {
    return chain_report(games::hypergraph_to_projection(h), opts);
}

ChainReport chain_report(const games::ClassicalGame& g, const ChainOptions& opts) {
    const games::ProjectionGame pg =
        games::hypergraph_to_projection(games::classical_to_hypergraph(g));
    ChainReport rep;
    rep.loc = value_loc_lower(pg, opts.seesaw);
    rep.q = value_q_lower(pg, opts.d_a, opts.d_b, opts.seesaw);
    rep.lowc = value_lowc_lower(pg, opts.branches, opts.seesaw);
    rep.qc = value_qc_upper(g); // matrix-unit relaxation for classical inputs
    rep.ns = value_ns(pg);
    auto check = [&](double lo, double hi, const char* what) {
        if (lo > hi + opts.tol)
            throw InternalConsistencyError(std::string("chain violated: ") + what + " (" +
                                           std::to_string(lo) + " > " + std::to_string(hi) + ")");
    };
    check(rep.loc.value, rep.q.value, "loc <= q");
    check(rep.q.value, rep.qc.value, "q <= qc_upper");
    check(rep.q.value, rep.ns.value, "q <= ns");
    check(rep.loc.value, rep.lowc.value, "loc <= lowc");
    rep.chain_ok = true;
    return rep;
}

} // namespace qgv::values
