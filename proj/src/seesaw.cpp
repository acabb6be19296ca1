#include <algorithm>
#include <cmath>

#include "qgv/values.hpp"
#include "values_detail.hpp"

namespace qgv::values {

namespace {

constexpr std::size_t kInnerSdpIters = 60000;

cpx trace_prod(const ComplexMatrix& a, const ComplexMatrix& b) {
    cpx s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * b(j, i);
    return s;
}

// Game tensor reshaped to M_k[(a*X+x), (b*Y+y)] = rho_k[x*Y+y, a*B+b].
std::vector<ComplexMatrix> strategy_tensors(const games::ProjectionGame& g) {
    const games::GameTensor gt = games::game_tensor(g);
    const std::size_t X = g.dims.x, Y = g.dims.y, A = g.dims.a, B = g.dims.b;
    std::vector<ComplexMatrix> ms;
    for (const auto& rho : gt.rho) {
        ComplexMatrix m(A * X, B * Y);
        for (std::size_t a = 0; a < A; ++a)
            for (std::size_t x = 0; x < X; ++x)
                for (std::size_t b = 0; b < B; ++b)
                    for (std::size_t y = 0; y < Y; ++y)
                        m(a * X + x, b * Y + y) = rho(x * Y + y, a * B + b);
        ms.push_back(std::move(m));
    }
    return ms;
}

// Objective matrix for Alice's channel step given Bob's Choi.
ComplexMatrix contract_alice(const std::vector<ComplexMatrix>& ms, const ComplexMatrix& jb) {
    const std::size_t n = ms.empty() ? 0 : ms[0].rows();
    ComplexMatrix w(n, n);
    const ComplexMatrix jbt = jb.transpose();
    for (const auto& m : ms) w += m * jbt * m.adjoint();
    return w;
}

ComplexMatrix contract_bob(const std::vector<ComplexMatrix>& ms, const ComplexMatrix& ja) {
    const std::size_t n = ms.empty() ? 0 : ms[0].cols();
    ComplexMatrix w(n, n);
    const ComplexMatrix jat = ja.transpose();
    for (const auto& m : ms) w += m.transpose() * jat * m.conjugate();
    return w;
}

// Value of the product strategy (J_A, J_B).
double bilinear_value(const std::vector<ComplexMatrix>& ms, const ComplexMatrix& ja,
                      const ComplexMatrix& jb) {
    return trace_prod(contract_alice(ms, jb), ja).real();
}

channels::ChoiMatrix random_channel(std::size_t in_labels, std::size_t out_labels, Rng& rng) {
    const channels::BlockIsometry u = channels::random_block_isometry(in_labels, out_labels, 1, rng);
    return channels::gamma_from_isometry(u, ComplexMatrix::identity(1));
}

struct RestartOutcome {
    double value = -1.0;
    std::size_t iterations = 0;
};

// Games with an identically-zero P have value 0 under every resource.
ValueEstimate zero_estimate(const char* solver, const SeesawOptions& opts) {
    ValueEstimate est;
    est.value = 0.0;
    est.bound_kind = BoundKind::Lower;
    est.solver = solver;
    est.restarts = opts.restarts;
    est.seed = opts.seed;
    return est;
}

ValueEstimate merge_outcomes(const std::vector<RestartOutcome>& outs, const char* solver,
                             const SeesawOptions& opts) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < outs.size(); ++i)
        if (outs[i].value > outs[best].value) best = i;
    ValueEstimate est;
    est.value = outs[best].value;
    est.bound_kind = BoundKind::Lower;
    est.solver = solver;
    est.iterations = outs[best].iterations;
    est.restarts = outs.size();
    est.seed = opts.seed;
    return est;
}

} // namespace

ValueEstimate value_loc_lower(const games::ProjectionGame& g, const SeesawOptions& opts) {
    g.validate();
    const auto ms = strategy_tensors(g);
    if (ms.empty()) return zero_estimate("loc_seesaw", opts);
    const std::size_t X = g.dims.x, Y = g.dims.y, A = g.dims.a, B = g.dims.b;

    std::vector<RestartOutcome> outs(opts.restarts);
    run_restarts(opts.restarts, [&](std::size_t r) {
        Rng rng = Rng(opts.seed).stream(r);
        ComplexMatrix jb = random_channel(Y, B, rng).j;
        double val = -1.0;
        std::size_t outer = 0;
        for (; outer < opts.outer_iters; ++outer) {
            const double start = val;

            const ComplexMatrix wa = contract_alice(ms, jb);
            auto [ja_cand, ignored_a] = sdp::max_over_choi(wa, A, X, {}, kInnerSdpIters,
                                                           opts.inner_tol);
            const double v1 = trace_prod(wa, ja_cand).real();
            if (v1 < val) break; // solver failed to improve; keep the best seen
            val = v1;
            const ComplexMatrix ja = ja_cand;

            const ComplexMatrix wb = contract_bob(ms, ja);
            auto [jb_cand, ignored_b] = sdp::max_over_choi(wb, B, Y, {}, kInnerSdpIters,
                                                           opts.inner_tol);
            const double v2 = trace_prod(wb, jb_cand).real();
            if (v2 >= val) {
                val = v2;
                jb = jb_cand;
            }
            if (outer > 0 && val - start < opts.improvement_floor) break;
        }
        outs[r] = {val, outer};
    });
    return merge_outcomes(outs, "loc_seesaw", opts);
}

namespace {

// --- quantum see-saw ------------------------------------------------------

// psi has index i*dB + j over H_A (x) H_B.
ComplexMatrix effective_state_operator(const std::vector<ComplexMatrix>& ms,
                                       const channels::StochasticOperatorMatrix& e,
                                       const channels::StochasticOperatorMatrix& f) {
    const std::size_t X = e.in_label_dim, A = e.out_label_dim, da = e.env_dim;
    const std::size_t Y = f.in_label_dim, B = f.out_label_dim, db = f.env_dim;
    ComplexMatrix m(da * db, da * db);
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t x = 0; x < X; ++x)
            for (std::size_t ap = 0; ap < A; ++ap)
                for (std::size_t xp = 0; xp < X; ++xp) {
                    // collect sum over k and Bob labels of the coefficient matrix
                    ComplexMatrix fsum(db, db);
                    bool any = false;
                    for (std::size_t b = 0; b < B; ++b)
                        for (std::size_t y = 0; y < Y; ++y)
                            for (std::size_t bp = 0; bp < B; ++bp)
                                for (std::size_t yp = 0; yp < Y; ++yp) {
                                    cpx coeff = 0.0;
                                    for (const auto& mk : ms)
                                        coeff += std::conj(mk(a * X + x, b * Y + y)) *
                                                 mk(ap * X + xp, bp * Y + yp);
                                    if (coeff == cpx(0.0, 0.0)) continue;
                                    any = true;
                                    const ComplexMatrix fb = f.block(y, b, yp, bp);
                                    for (std::size_t j = 0; j < db; ++j)
                                        for (std::size_t jp = 0; jp < db; ++jp)
                                            fsum(j, jp) += coeff * fb(j, jp);
                                }
                    if (!any) continue;
                    const ComplexMatrix eb = e.block(x, a, xp, ap);
                    for (std::size_t i = 0; i < da; ++i)
                        for (std::size_t ip = 0; ip < da; ++ip) {
                            if (eb(i, ip) == cpx(0.0, 0.0)) continue;
                            for (std::size_t j = 0; j < db; ++j)
                                for (std::size_t jp = 0; jp < db; ++jp)
                                    m(i * db + j, ip * db + jp) += eb(i, ip) * fsum(j, jp);
                        }
                }
    return m;
}

double q_objective(const std::vector<ComplexMatrix>& ms,
                   const channels::StochasticOperatorMatrix& e,
                   const channels::StochasticOperatorMatrix& f, const std::vector<cpx>& psi) {
    const ComplexMatrix m = effective_state_operator(ms, e, f);
    cpx v = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        for (std::size_t j = 0; j < psi.size(); ++j) v += std::conj(psi[i]) * m(i, j) * psi[j];
    return v.real();
}

// S_N[i,i'] = sum_{j,j'} N[j,j'] psi[(i',j')] conj(psi[(i,j)]).
ComplexMatrix env_slice(const ComplexMatrix& n, const std::vector<cpx>& psi, std::size_t da,
                        std::size_t db, bool alice_side) {
    const std::size_t d = alice_side ? da : db;
    const std::size_t dn = alice_side ? db : da;
    ComplexMatrix s(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t ip = 0; ip < d; ++ip) {
            cpx acc = 0.0;
            for (std::size_t j = 0; j < dn; ++j)
                for (std::size_t jp = 0; jp < dn; ++jp) {
                    const std::size_t left = alice_side ? (i * db + j) : (j * db + i);
                    const std::size_t right = alice_side ? (ip * db + jp) : (jp * db + ip);
                    acc += n(j, jp) * psi[right] * std::conj(psi[left]);
                }
            s(i, ip) = acc;
        }
    return s;
}

// Choi-ordered objective for the Alice environment step.
ComplexMatrix alice_env_objective(const std::vector<ComplexMatrix>& ms,
                                  const channels::StochasticOperatorMatrix& f,
                                  const std::vector<cpx>& psi, std::size_t X, std::size_t A,
                                  std::size_t da) {
    const std::size_t Y = f.in_label_dim, B = f.out_label_dim, db = f.env_dim;
    const std::size_t side = A * X * da;
    auto choi = [&](std::size_t a, std::size_t x, std::size_t i) { return (a * X + x) * da + i; };
    ComplexMatrix w(side, side);
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t y = 0; y < Y; ++y)
            for (std::size_t bp = 0; bp < B; ++bp)
                for (std::size_t yp = 0; yp < Y; ++yp) {
                    const ComplexMatrix s = env_slice(f.block(y, b, yp, bp), psi, da, db, true);
                    for (std::size_t a = 0; a < A; ++a)
                        for (std::size_t x = 0; x < X; ++x)
                            for (std::size_t ap = 0; ap < A; ++ap)
                                for (std::size_t xp = 0; xp < X; ++xp) {
                                    cpx coeff = 0.0;
                                    for (const auto& mk : ms)
                                        coeff += std::conj(mk(a * X + x, b * Y + y)) *
                                                 mk(ap * X + xp, bp * Y + yp);
                                    if (coeff == cpx(0.0, 0.0)) continue;
                                    for (std::size_t i = 0; i < da; ++i)
                                        for (std::size_t ip = 0; ip < da; ++ip)
                                            w(choi(ap, xp, ip), choi(a, x, i)) +=
                                                coeff * s(i, ip);
                                }
                }
    // Symmetrize away roundoff.
    for (std::size_t i = 0; i < side; ++i)
        for (std::size_t j = i; j < side; ++j) {
            const cpx m = 0.5 * (w(i, j) + std::conj(w(j, i)));
            w(i, j) = m;
            w(j, i) = std::conj(m);
        }
    return w;
}

ComplexMatrix bob_env_objective(const std::vector<ComplexMatrix>& ms,
                                const channels::StochasticOperatorMatrix& e,
                                const std::vector<cpx>& psi, std::size_t Y, std::size_t B,
                                std::size_t db) {
    const std::size_t X = e.in_label_dim, A = e.out_label_dim, da = e.env_dim;
    const std::size_t side = B * Y * db;
    auto choi = [&](std::size_t b, std::size_t y, std::size_t j) { return (b * Y + y) * db + j; };
    ComplexMatrix w(side, side);
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t x = 0; x < X; ++x)
            for (std::size_t ap = 0; ap < A; ++ap)
                for (std::size_t xp = 0; xp < X; ++xp) {
                    const ComplexMatrix s = env_slice(e.block(x, a, xp, ap), psi, da, db, false);
                    for (std::size_t b = 0; b < B; ++b)
                        for (std::size_t y = 0; y < Y; ++y)
                            for (std::size_t bp = 0; bp < B; ++bp)
                                for (std::size_t yp = 0; yp < Y; ++yp) {
                                    cpx coeff = 0.0;
                                    for (const auto& mk : ms)
                                        coeff += std::conj(mk(a * X + x, b * Y + y)) *
                                                 mk(ap * X + xp, bp * Y + yp);
                                    if (coeff == cpx(0.0, 0.0)) continue;
                                    for (std::size_t j = 0; j < db; ++j)
                                        for (std::size_t jp = 0; jp < db; ++jp)
                                            w(choi(bp, yp, jp), choi(b, y, j)) +=
                                                coeff * s(j, jp);
                                }
                }
    for (std::size_t i = 0; i < side; ++i)
        for (std::size_t j = i; j < side; ++j) {
            const cpx m = 0.5 * (w(i, j) + std::conj(w(j, i)));
            w(i, j) = m;
            w(j, i) = std::conj(m);
        }
    return w;
}

channels::StochasticOperatorMatrix stoch_from_choi(const ComplexMatrix& j, std::size_t labels_in,
                                                   std::size_t labels_out, std::size_t env) {
    channels::StochasticOperatorMatrix s;
    s.in_label_dim = labels_in;
    s.out_label_dim = labels_out;
    s.env_dim = env;
    s.e = ComplexMatrix(labels_in * labels_out * env, labels_in * labels_out * env);
    auto choi = [&](std::size_t a, std::size_t x, std::size_t i) {
        return (a * labels_in + x) * env + i;
    };
    auto stoch = [&](std::size_t x, std::size_t a, std::size_t i) {
        return (x * labels_out + a) * env + i;
    };
    for (std::size_t a = 0; a < labels_out; ++a)
        for (std::size_t x = 0; x < labels_in; ++x)
            for (std::size_t i = 0; i < env; ++i)
                for (std::size_t ap = 0; ap < labels_out; ++ap)
                    for (std::size_t xp = 0; xp < labels_in; ++xp)
                        for (std::size_t ip = 0; ip < env; ++ip)
                            s.e(stoch(x, a, i), stoch(xp, ap, ip)) =
                                j(choi(a, x, i), choi(ap, xp, ip));
    return s;
}

std::vector<cpx> top_eigenvector(const ComplexMatrix& m) {
    const HermitianEigen eig = herm_eig(m);
    const std::size_t n = m.rows();
    const double lam_max = eig.eigenvalues.back();
    std::size_t pick = n - 1;
    for (std::size_t c = 0; c < n; ++c)
        if (eig.eigenvalues[c] >= lam_max - 1e-12 * (1.0 + std::abs(lam_max))) {
            pick = c;
            break;
        }
    std::vector<cpx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = eig.eigenvectors(i, pick);
    return v;
}

QStrategy random_q_strategy(const games::RegisterDims& dims, std::size_t da, std::size_t db,
                            Rng& rng) {
    QStrategy s;
    s.e = channels::stochastic_from_isometry(
        channels::random_block_isometry(dims.x, dims.a, da, rng));
    s.f = channels::stochastic_from_isometry(
        channels::random_block_isometry(dims.y, dims.b, db, rng));
    const ComplexMatrix v = random_isometry(da * db, 1, rng);
    s.psi.resize(da * db);
    for (std::size_t i = 0; i < s.psi.size(); ++i) s.psi[i] = v(i, 0);
    return s;
}

// Pads a strategy into larger environments. The extra environment levels
// carry a deterministic answer-0 strategy and zero state amplitude.
channels::StochasticOperatorMatrix pad_stochastic(const channels::StochasticOperatorMatrix& s,
                                                  std::size_t env) {
    if (env == s.env_dim) return s;
    channels::StochasticOperatorMatrix r;
    r.in_label_dim = s.in_label_dim;
    r.out_label_dim = s.out_label_dim;
    r.env_dim = env;
    const std::size_t X = s.in_label_dim, A = s.out_label_dim;
    r.e = ComplexMatrix(X * A * env, X * A * env);
    for (std::size_t x = 0; x < X; ++x)
        for (std::size_t a = 0; a < A; ++a)
            for (std::size_t xp = 0; xp < X; ++xp)
                for (std::size_t ap = 0; ap < A; ++ap) {
                    const ComplexMatrix blk = s.block(x, a, xp, ap);
                    for (std::size_t i = 0; i < s.env_dim; ++i)
                        for (std::size_t ip = 0; ip < s.env_dim; ++ip)
                            r.e((x * A + a) * env + i, (xp * A + ap) * env + ip) = blk(i, ip);
                }
    for (std::size_t x = 0; x < X; ++x)
        for (std::size_t xp = 0; xp < X; ++xp)
            if (x == xp)
                for (std::size_t i = s.env_dim; i < env; ++i)
                    r.e((x * A + 0) * env + i, (xp * A + 0) * env + i) = 1.0;
    return r;
}

QStrategy pad_strategy(const QStrategy& s, std::size_t da, std::size_t db) {
    QStrategy r;
    r.e = pad_stochastic(s.e, da);
    r.f = pad_stochastic(s.f, db);
    r.psi.assign(da * db, cpx(0.0, 0.0));
    const std::size_t old_db = s.f.env_dim;
    for (std::size_t i = 0; i < s.e.env_dim; ++i)
        for (std::size_t j = 0; j < old_db; ++j) r.psi[i * db + j] = s.psi[i * old_db + j];
    return r;
}

} // namespace

ValueEstimate value_q_lower(const games::ProjectionGame& g, std::size_t d_a, std::size_t d_b,
                            const SeesawOptions& opts, const QStrategy* warm,
                            QStrategy* best_out) {
    g.validate();
    if (d_a < 1 || d_b < 1) throw ValidationError("value_q_lower: dimensions must be >= 1");
    const auto ms = strategy_tensors(g);
    if (ms.empty()) return zero_estimate("q_seesaw", opts);
    const std::size_t X = g.dims.x, Y = g.dims.y, A = g.dims.a, B = g.dims.b;

    std::vector<RestartOutcome> outs(opts.restarts);
    std::vector<QStrategy> finals(opts.restarts);
    run_restarts(opts.restarts, [&](std::size_t r) {
        Rng rng = Rng(opts.seed).stream(r);
        QStrategy s;
        if (r == 0 && warm)
            s = pad_strategy(*warm, d_a, d_b);
        else
            s = random_q_strategy(g.dims, d_a, d_b, rng);

        double val = q_objective(ms, s.e, s.f, s.psi);
        std::size_t outer = 0;
        for (; outer < opts.outer_iters; ++outer) {
            const double start = val;

            const ComplexMatrix wa = alice_env_objective(ms, s.f, s.psi, X, A, d_a);
            auto [ja, va] = sdp::max_over_choi(wa, A, X * d_a, {}, kInnerSdpIters, opts.inner_tol);
            const channels::StochasticOperatorMatrix e_cand = stoch_from_choi(ja, X, A, d_a);
            const double v1 = q_objective(ms, e_cand, s.f, s.psi);
            if (v1 >= val) {
                val = v1;
                s.e = e_cand;
            }

            const ComplexMatrix wb = bob_env_objective(ms, s.e, s.psi, Y, B, d_b);
            auto [jb, vb] = sdp::max_over_choi(wb, B, Y * d_b, {}, kInnerSdpIters, opts.inner_tol);
            const channels::StochasticOperatorMatrix f_cand = stoch_from_choi(jb, Y, B, d_b);
            const double v2 = q_objective(ms, s.e, f_cand, s.psi);
            if (v2 >= val) {
                val = v2;
                s.f = f_cand;
            }

            const ComplexMatrix mop = effective_state_operator(ms, s.e, s.f);
            const std::vector<cpx> psi_cand = top_eigenvector(mop);
            const double v3 = q_objective(ms, s.e, s.f, psi_cand);
            if (v3 >= val) {
                val = v3;
                s.psi = psi_cand;
            }

            if (val - start < opts.improvement_floor) break;
        }
        outs[r] = {val, outer};
        finals[r] = std::move(s);
    });
    ValueEstimate est = merge_outcomes(outs, "q_seesaw", opts);
    if (best_out) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < outs.size(); ++i)
            if (outs[i].value > outs[best].value) best = i;
        *best_out = finals[best];
    }
    return est;
}

ValueEstimate value_q_lower_sweep(const games::ProjectionGame& g, std::size_t d_max,
                                  const SeesawOptions& opts) {
    QStrategy best;
    ValueEstimate est;
    for (std::size_t d = 1; d <= d_max; ++d) {
        QStrategy out;
        est = value_q_lower(g, d, d, opts, d == 1 ? nullptr : &best, &out);
        best = out;
    }
    return est;
}

ValueEstimate value_lowc_lower(const games::ProjectionGame& g, std::size_t branches,
                               const SeesawOptions& opts) {
    g.validate();
    if (branches < 1) throw ValidationError("value_lowc_lower: branches must be >= 1");
    const auto ms = strategy_tensors(g);
    if (ms.empty()) return zero_estimate("lowc_seesaw", opts);
    const std::size_t X = g.dims.x, Y = g.dims.y, A = g.dims.a, B = g.dims.b;
    const std::size_t blk = A * X;
    const std::size_t side = branches * blk;

    // Instrument normalization: sum_i Tr_A J_i = I_X.
    std::vector<sdp::Constraint> norm;
    for (std::size_t x = 0; x < X; ++x)
        for (std::size_t xp = x; xp < X; ++xp) {
            sdp::ComplexEqualityBuilder eq(side);
            for (std::size_t i = 0; i < branches; ++i)
                for (std::size_t a = 0; a < A; ++a)
                    eq.add(i * blk + a * X + x, i * blk + a * X + xp, 1.0);
            eq.emit(norm, x == xp ? cpx(1.0, 0.0) : cpx(0.0, 0.0));
        }

    std::vector<RestartOutcome> outs(opts.restarts);
    run_restarts(opts.restarts, [&](std::size_t r) {
        Rng rng = Rng(opts.seed).stream(r);
        // Random instrument from one isometry split into branch Kraus chunks.
        std::vector<ComplexMatrix> alice(branches);
        {
            const channels::ChoiMatrix total = random_channel(X, branches * A, rng);
            for (std::size_t i = 0; i < branches; ++i) {
                ComplexMatrix ji(blk, blk);
                for (std::size_t a = 0; a < A; ++a)
                    for (std::size_t x = 0; x < X; ++x)
                        for (std::size_t ap = 0; ap < A; ++ap)
                            for (std::size_t xp = 0; xp < X; ++xp)
                                ji(a * X + x, ap * X + xp) =
                                    total.j((i * A + a) * X + x, (i * A + ap) * X + xp);
                alice[i] = std::move(ji);
            }
        }
        std::vector<ComplexMatrix> bob(branches);
        for (std::size_t i = 0; i < branches; ++i) bob[i] = random_channel(Y, B, rng).j;

        auto total_value = [&]() {
            double v = 0.0;
            for (std::size_t i = 0; i < branches; ++i) v += bilinear_value(ms, alice[i], bob[i]);
            return v;
        };

        double val = total_value();
        std::size_t outer = 0;
        for (; outer < opts.outer_iters; ++outer) {
            const double start = val;

            // Alice step: one stacked SDP over the whole instrument.
            sdp::SdpProblem p;
            p.side = side;
            p.c = ComplexMatrix(side, side);
            for (std::size_t i = 0; i < branches; ++i) {
                const ComplexMatrix wi = contract_alice(ms, bob[i]);
                for (std::size_t u = 0; u < blk; ++u)
                    for (std::size_t v = 0; v < blk; ++v) p.c(i * blk + u, i * blk + v) = wi(u, v);
            }
            p.constraints = norm;
            const sdp::SdpSolution sol = sdp::solve(p, kInnerSdpIters, opts.inner_tol);
            std::vector<ComplexMatrix> alice_cand(branches);
            for (std::size_t i = 0; i < branches; ++i) {
                ComplexMatrix ji(blk, blk);
                for (std::size_t u = 0; u < blk; ++u)
                    for (std::size_t v = 0; v < blk; ++v) ji(u, v) = sol.x(i * blk + u, i * blk + v);
                alice_cand[i] = std::move(ji);
            }
            double v1 = 0.0;
            for (std::size_t i = 0; i < branches; ++i)
                v1 += bilinear_value(ms, alice_cand[i], bob[i]);
            if (v1 >= val) {
                val = v1;
                alice = std::move(alice_cand);
            }

            // Bob step: branches decouple.
            double v2 = 0.0;
            std::vector<ComplexMatrix> bob_cand(branches);
            for (std::size_t i = 0; i < branches; ++i) {
                const ComplexMatrix wb = contract_bob(ms, alice[i]);
                auto [jb, vb] = sdp::max_over_choi(wb, B, Y, {}, kInnerSdpIters, opts.inner_tol);
                bob_cand[i] = jb;
                v2 += bilinear_value(ms, alice[i], jb);
            }
            if (v2 >= val) {
                val = v2;
                bob = std::move(bob_cand);
            }

            if (val - start < opts.improvement_floor) break;
        }
        outs[r] = {val, outer};
    });
    return merge_outcomes(outs, "lowc_seesaw", opts);
}

} // namespace qgv::values
