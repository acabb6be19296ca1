#include <doctest.h>

#include "qgv/values.hpp"

using namespace qgv;
using namespace qgv::games;
using namespace qgv::values;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

ProjectionGame chsh_projection() {
    return hypergraph_to_projection(classical_to_hypergraph(gen_chsh()));
}

QStrategy random_strategy(const RegisterDims& dims, std::size_t da, std::size_t db, Rng& rng) {
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

} // namespace

TEST_CASE("strategy Choi matches gamma of the tensored isometry") {
    Rng rng(1);
    const RegisterDims dims{2, 2, 2, 2, 1};
    const channels::BlockIsometry ua = channels::random_block_isometry(2, 2, 2, rng);
    const channels::BlockIsometry ub = channels::random_block_isometry(2, 2, 2, rng);
    QStrategy s;
    s.e = channels::stochastic_from_isometry(ua);
    s.f = channels::stochastic_from_isometry(ub);
    const ComplexMatrix v = random_isometry(4, 1, rng);
    s.psi.resize(4);
    for (int i = 0; i < 4; ++i) s.psi[i] = v(i, 0);

    const channels::ChoiMatrix direct = choi_from_q_strategy(s);
    CHECK(direct.is_channel({1e-7, 1e-6}));
    const channels::ChoiMatrix via_gamma = channels::gamma_from_isometry(
        channels::tensor_isometries(ua, ub), channels::pure_density(s.psi));
    CHECK(max_abs_diff(direct.j, via_gamma.j) < 1e-9);
}

TEST_CASE("induced Gram matrices satisfy the moment constraints") {
    Rng rng(2);
    const ProjectionGame g = chsh_projection();
    const QcMomentModel model = build_qc_moment_model(g);
    for (int t = 0; t < 5; ++t) {
        const QStrategy s = random_strategy(g.dims, 1 + t % 2, 1 + (t / 2) % 2, rng);
        const ComplexMatrix gram = induced_gram(model, s);
        CHECK(moment_constraint_residual(model, gram) < 1e-8);
        CHECK(min_eigenvalue(gram) > -1e-8);
        // objective on the Gram equals the evaluated strategy value
        const double obj = re_inner(model.c, gram);
        const double val = evaluate_strategy(g, choi_from_q_strategy(s));
        CHECK(obj == doctest::Approx(val).epsilon(1e-8));
    }
}

TEST_CASE("qc upper bound dominates explicit strategies") {
    Rng rng(3);
    const ProjectionGame g = chsh_projection();
    const ValueEstimate upper = value_qc_upper(g);
    for (int t = 0; t < 4; ++t) {
        const QStrategy s = random_strategy(g.dims, 2, 2, rng);
        const double val = evaluate_strategy(g, choi_from_q_strategy(s));
        CHECK(upper.value >= val - 1e-6);
    }
}

TEST_CASE("free-product relaxation pins CHSH at the Tsirelson point") {
    const ValueEstimate est = value_qc_upper(gen_chsh());
    CHECK(est.value >= 0.8535);
    CHECK(est.value <= 0.854);
    CHECK(est.bound_kind == BoundKind::Upper);
}

TEST_CASE("free-product relaxation on constant games") {
    ClassicalGame all1 = gen_chsh();
    std::fill(all1.rule.begin(), all1.rule.end(), 1);
    CHECK(value_qc_upper(all1).value == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("word-model qc upper on the diagonal family matches the closed form") {
    const std::vector<std::vector<cpx>> gam = {{kInvSqrt2, kInvSqrt2}};
    const ProjectionGame g = gen_diag_family(2, gam);
    const ValueEstimate est = value_qc_upper(g);
    CHECK(est.value == doctest::Approx(0.25).epsilon(2e-3));
    // rank-advantage sanity: the gap to a q lower bound stays within 2e-3
    SeesawOptions o;
    o.restarts = 4;
    const ValueEstimate lower = value_q_lower(g, 2, 2, o);
    CHECK(est.value - lower.value <= 2e-3);
    CHECK(est.value >= lower.value - 1e-6);
}

TEST_CASE("word-model qc upper is sandwiched on CHSH") {
    const ValueEstimate ns = value_ns(chsh_projection());
    const ValueEstimate qc = value_qc_upper(chsh_projection());
    // the word model cannot exceed ns-like feasibility by much
    CHECK(qc.value <= ns.value + 1e-5);
    // and it is a genuine upper bound on the quantum value
    CHECK(qc.value >= (2.0 + std::sqrt(2.0)) / 4.0 - 1e-6);
}

TEST_CASE("cq relaxation agrees with the classical one on lifted rules") {
    // lift the CHSH rule to diagonal projections
    const ClassicalGame chsh = gen_chsh();
    std::vector<ComplexMatrix> table(4, ComplexMatrix(4, 4));
    std::vector<double> pi(4, 0.25);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b)
                    if (chsh.rule_at(x, y, a, b))
                        table[x * 2 + y](a * 2 + b, a * 2 + b) = 1.0;
    const ValueEstimate lifted = value_qc_upper_cq(table, pi, {2, 2, 2, 2, 1});
    const ValueEstimate plain = value_qc_upper(chsh);
    CHECK(lifted.value == doctest::Approx(plain.value).epsilon(1e-5));
}

TEST_CASE("moment model sizes") {
    const QcMomentModel m = build_qc_moment_model(chsh_projection());
    CHECK(m.side == 25); // 1 + 4 + 4 + 16
}
