#include <doctest.h>

#include "qgv/convert.hpp"
#include "qgv/values.hpp"

using namespace qgv;
using namespace qgv::games;
using namespace qgv::values;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

ProjectionGame chsh_projection() {
    return hypergraph_to_projection(classical_to_hypergraph(gen_chsh()));
}

ClassicalGame constant_rule(int bit) {
    ClassicalGame g = gen_chsh();
    std::fill(g.rule.begin(), g.rule.end(), static_cast<std::uint8_t>(bit));
    return g;
}

SeesawOptions quick_opts(std::size_t restarts = 4) {
    SeesawOptions o;
    o.restarts = restarts;
    o.outer_iters = 60;
    return o;
}

std::vector<cpx> bell_vector() { return {kInvSqrt2, 0.0, 0.0, kInvSqrt2}; }

} // namespace

TEST_CASE("evaluate_strategy basics") {
    // identity channel on the implication game with P = Q rank one
    ComplexMatrix p(4, 4), q(4, 4);
    p(0, 0) = 1.0;
    q(0, 0) = 1.0;
    const ProjectionGame g = hypergraph_to_projection(gen_implication(p, q));
    CHECK(evaluate_strategy(g, channels::ChoiMatrix::identity(4)) ==
          doctest::Approx(1.0).epsilon(1e-10));

    // completely depolarizing channel on the CHSH embedding wins half the time
    const ProjectionGame chsh = chsh_projection();
    CHECK(evaluate_strategy(chsh, channels::ChoiMatrix::depolarizing(4, 4)) ==
          doctest::Approx(0.5).epsilon(1e-10));

    // the all-accepting classical game embeds to value 1 for any channel
    const ProjectionGame all1 = hypergraph_to_projection(classical_to_hypergraph(constant_rule(1)));
    Rng rng(3);
    const channels::ChoiMatrix c = channels::gamma_from_isometry(
        channels::random_block_isometry(4, 4, 1, rng), ComplexMatrix::identity(1));
    CHECK(evaluate_strategy(all1, c) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("objective matrix agrees with evaluate_strategy") {
    Rng rng(4);
    const ProjectionGame g = chsh_projection();
    const ComplexMatrix w = game_objective(g);
    for (int t = 0; t < 3; ++t) {
        const channels::ChoiMatrix c = channels::gamma_from_isometry(
            channels::random_block_isometry(4, 4, 2, rng),
            ComplexMatrix::identity(2) * cpx(0.5, 0.0));
        cpx tr = 0.0;
        for (std::size_t i = 0; i < w.rows(); ++i)
            for (std::size_t j = 0; j < w.cols(); ++j) tr += w(i, j) * c.j(j, i);
        CHECK(evaluate_strategy(g, c) == doctest::Approx(tr.real()).epsilon(1e-9));
    }
}

TEST_CASE("hypergraph objective equals the reduced projection objective") {
    const HypergraphGame h = classical_to_hypergraph(gen_chsh());
    const ComplexMatrix w1 = game_objective(h);
    const ComplexMatrix w2 = game_objective(hypergraph_to_projection(h));
    CHECK(max_abs_diff(w1, w2) < 1e-10);
}

TEST_CASE("evaluate_isometry_strategy trivial game") {
    ProjectionGame g;
    g.dims = {1, 1, 1, 1, 1};
    g.xi = {1.0};
    g.p_terms.push_back({1.0, {1.0}});
    channels::BlockIsometry u;
    u.in_label_dim = 1;
    u.out_label_dim = 1;
    u.env_in_dim = 1;
    u.env_out_dim = 1;
    u.blocks.assign(1, ComplexMatrix::identity(1));
    CHECK(evaluate_isometry_strategy(g, u, ComplexMatrix::identity(1)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("CHSH Tsirelson strategy evaluates to (2+sqrt2)/4") {
    const auto [u, sigma] = chsh_tsirelson_strategy();
    const double v = evaluate_isometry_strategy(chsh_projection(), u, sigma);
    CHECK(v == doctest::Approx((2.0 + std::sqrt(2.0)) / 4.0).epsilon(1e-9));
}

TEST_CASE("isometry and Choi evaluation agree on random strategies") {
    Rng rng(5);
    const ProjectionGame g = chsh_projection();
    for (int t = 0; t < 3; ++t) {
        const channels::BlockIsometry u = channels::random_block_isometry(4, 4, 2, rng);
        ComplexMatrix sigma(2, 2);
        sigma(0, 0) = 0.75;
        sigma(1, 1) = 0.25;
        const double v1 = evaluate_isometry_strategy(g, u, sigma);
        const double v2 = evaluate_strategy(g, channels::gamma_from_isometry(u, sigma));
        CHECK(v1 == doctest::Approx(v2).epsilon(1e-9));
    }
}

TEST_CASE("ns value of CHSH is 1 (PR box reaches it)") {
    const ValueEstimate est = value_ns(chsh_projection());
    CHECK(est.value == doctest::Approx(1.0).epsilon(2e-6));
    CHECK(est.bound_kind == BoundKind::Exact);

    // the PR-box Choi is feasible for every ns constraint
    const ClassicalGame chsh = gen_chsh();
    ComplexMatrix j(16, 16);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) {
                    const double p = ((a ^ b) == (x & y)) ? 0.5 : 0.0;
                    const std::size_t idx = (a * 2 + b) * 4 + (x * 2 + y);
                    j(idx, idx) = p;
                }
    for (const auto& c : ns_constraints({2, 2, 2, 2, 4}))
        CHECK(std::abs(sdp::sparse_inner(c.a, j) - c.b) < 1e-12);
    CHECK(min_eigenvalue(j) > -1e-12);
}

TEST_CASE("ns value of the rejecting game is 0") {
    const ProjectionGame g = hypergraph_to_projection(classical_to_hypergraph(constant_rule(0)));
    const ValueEstimate est = value_ns(g);
    CHECK(std::abs(est.value) < 1e-7);
}

TEST_CASE("ns value dominates the diagonal family closed form") {
    const ProjectionGame g = gen_diag_family(2, {{kInvSqrt2, kInvSqrt2}});
    const ValueEstimate est = value_ns(g);
    CHECK(est.value >= 0.25 - 1e-6);
}

TEST_CASE("hypergraph ns value agrees with the reduction route") {
    Rng rng(6);
    for (int trial = 0; trial < 2; ++trial) {
        HypergraphGame h;
        h.dims = {2, 2, 2, 2, 1};
        const std::size_t atoms = 2 + trial;
        for (std::size_t i = 0; i < atoms; ++i) {
            HypergraphAtom at;
            at.weight = 1.0 / atoms;
            const ComplexMatrix v = random_isometry(4, 1, rng);
            at.xi.resize(4);
            for (int k = 0; k < 4; ++k) at.xi[k] = v(k, 0);
            const ComplexMatrix iso = random_isometry(4, 2, rng);
            at.q = iso * iso.adjoint();
            h.atoms.push_back(at);
        }
        const double direct = value_ns(h).value;
        const double reduced = value_ns(hypergraph_to_projection(h)).value;
        CHECK(direct == doctest::Approx(reduced).epsilon(2e-6));
    }
}

TEST_CASE("classical exact values") {
    CHECK(value_classical_loc_exact(gen_chsh()).value == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(value_classical_loc_exact(constant_rule(1)).value == doctest::Approx(1.0));
    // copy game lambda = delta_{a,x} delta_{b,y}
    ClassicalGame copy;
    copy.dims = {2, 2, 2, 2, 1};
    copy.pi.assign(4, 0.25);
    copy.rule.assign(16, 0);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            copy.rule[((x * 2 + y) * 2 + x) * 2 + y] = 1;
    CHECK(value_classical_loc_exact(copy).value == doctest::Approx(1.0));
}

TEST_CASE("loc see-saw on CHSH reaches 0.75") {
    const ValueEstimate est = value_loc_lower(chsh_projection(), quick_opts(6));
    CHECK(est.value == doctest::Approx(0.75).epsilon(1.5e-3));
    CHECK(est.value <= 0.75 + 1e-5);
    CHECK(est.bound_kind == BoundKind::Lower);
}

TEST_CASE("loc see-saw on the accepting game reaches 1") {
    const ProjectionGame g = hypergraph_to_projection(classical_to_hypergraph(constant_rule(1)));
    CHECK(value_loc_lower(g, quick_opts(2)).value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("loc see-saw determinism") {
    const ProjectionGame g = chsh_projection();
    const ValueEstimate a = value_loc_lower(g, quick_opts(3));
    const ValueEstimate b = value_loc_lower(g, quick_opts(3));
    CHECK(a.value == b.value);
}

TEST_CASE("q see-saw on CHSH beats the classical bound") {
    const ValueEstimate est = value_q_lower(chsh_projection(), 2, 2, quick_opts(6));
    CHECK(est.value >= 0.8535);
    CHECK(est.value <= (2.0 + std::sqrt(2.0)) / 4.0 + 1e-5);
}

TEST_CASE("q see-saw warm start sweep is monotone across dimensions") {
    const ProjectionGame g = chsh_projection();
    SeesawOptions o = quick_opts(2);
    QStrategy best1, best2;
    const ValueEstimate v1 = value_q_lower(g, 1, 1, o, nullptr, &best1);
    const ValueEstimate v2 = value_q_lower(g, 2, 2, o, &best1, &best2);
    CHECK(v2.value >= v1.value - 1e-9);
}

TEST_CASE("diag family: loc, q and ns sit at the closed form") {
    const std::vector<std::vector<cpx>> gam = {{kInvSqrt2, kInvSqrt2}};
    const ProjectionGame g = gen_diag_family(2, gam);
    const double cf = closed_form_diag_value(gam);
    REQUIRE(cf == doctest::Approx(0.25));

    const ValueEstimate q = value_q_lower(g, 2, 2, quick_opts(4));
    CHECK(q.value == doctest::Approx(cf).epsilon(2e-3));
    const ValueEstimate loc = value_loc_lower(g, quick_opts(4));
    CHECK(loc.value == doctest::Approx(cf).epsilon(2e-3));
}

TEST_CASE("separable overlap game (maximally entangled sigma)") {
    // xi (x) eta = |00>, sigma = Bell: loc value 1/2, q value 1 with d = 2.
    ProjectionGame g;
    g.dims = {2, 2, 2, 2, 1};
    g.xi = {1.0, 0.0, 0.0, 0.0};
    g.p_terms.push_back({1.0, bell_vector()});
    g.validate();

    const ValueEstimate loc = value_loc_lower(g, quick_opts(6));
    CHECK(loc.value == doctest::Approx(0.5).epsilon(1.5e-3));

    const ValueEstimate q = value_q_lower(g, 2, 2, quick_opts(6));
    CHECK(q.value >= 1.0 - 1e-6);
}

TEST_CASE("lowc with one branch matches loc on a product-structured game") {
    const ProjectionGame g = hypergraph_to_projection(classical_to_hypergraph(constant_rule(1)));
    const double a = value_lowc_lower(g, 1, quick_opts(2)).value;
    const double b = value_loc_lower(g, quick_opts(2)).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("lowc see-saw solves the Bell to |00> conversion game") {
    ProjectionGame g;
    g.dims = {2, 2, 2, 2, 1};
    g.xi = bell_vector();
    g.p_terms.push_back({1.0, {1.0, 0.0, 0.0, 0.0}});
    g.validate();
    const ValueEstimate est = value_lowc_lower(g, 2, quick_opts(8));
    CHECK(est.value >= 1.0 - 1e-6);

    // oracle: the synthesized protocol is a feasible point of value 1
    const convert::OneWayProtocol proto =
        convert::nielsen_protocol(bell_vector(), {1.0, 0.0, 0.0, 0.0}, 2, 2);
    CHECK(evaluate_strategy(g, proto.induced_channel()) >= 1.0 - 1e-9);
}

TEST_CASE("lowc cannot create entanglement: |00> to Bell stays away from 1") {
    ProjectionGame g;
    g.dims = {2, 2, 2, 2, 1};
    g.xi = {1.0, 0.0, 0.0, 0.0};
    g.p_terms.push_back({1.0, bell_vector()});
    g.validate();
    SeesawOptions o = quick_opts(8);
    const ValueEstimate est = value_lowc_lower(g, 4, o);
    CHECK(est.value < 1.0 - 1e-3);
    // majorization oracle: inconvertible
    CHECK(!convert::locc_convertible({1.0, 0.0, 0.0, 0.0}, bell_vector(), 2, 2));
}

TEST_CASE("chain report on CHSH") {
    ChainOptions o;
    o.seesaw = quick_opts(6);
    const ChainReport rep = chain_report(gen_chsh(), o);
    CHECK(rep.chain_ok);
    CHECK(rep.loc.value == doctest::Approx(0.75).epsilon(1.5e-3));
    CHECK(rep.q.value >= 0.8535);
    CHECK(rep.qc.value >= rep.q.value - 1e-6);
    CHECK(rep.qc.value <= 0.86);
    CHECK(rep.ns.value == doctest::Approx(1.0).epsilon(2e-6));
    CHECK(rep.lowc.value >= rep.loc.value - 1e-5);
}

TEST_CASE("chain report on the rejecting game is all zeros") {
    ChainOptions o;
    o.seesaw = quick_opts(2);
    const ChainReport rep = chain_report(constant_rule(0), o);
    CHECK(std::abs(rep.loc.value) < 1e-6);
    CHECK(std::abs(rep.q.value) < 1e-6);
    CHECK(std::abs(rep.lowc.value) < 1e-6);
    CHECK(std::abs(rep.qc.value) < 1e-5);
    CHECK(std::abs(rep.ns.value) < 1e-6);
}

TEST_CASE("see-saw values never exceed the ns value") {
    const ProjectionGame g = chsh_projection();
    const double ns = value_ns(g).value;
    CHECK(value_loc_lower(g, quick_opts(3)).value <= ns + 1e-5);
    CHECK(value_q_lower(g, 2, 2, quick_opts(3)).value <= ns + 1e-5);
    CHECK(value_lowc_lower(g, 2, quick_opts(3)).value <= ns + 1e-5);
}
