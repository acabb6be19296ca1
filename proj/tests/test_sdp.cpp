#include <doctest.h>

#include "qgv/sdp.hpp"

using namespace qgv;
using namespace qgv::sdp;

namespace {

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.gaussian_complex();
    return (m + m.adjoint()) * cpx(0.5, 0.0);
}

// maximize Tr(C X) s.t. Tr X = 1, X >= 0; optimum is lambda_max(C).
SdpProblem lambda_max_problem(const ComplexMatrix& c) {
    SdpProblem p;
    p.side = c.rows();
    p.c = c;
    Constraint tr;
    tr.a.side = c.rows();
    for (std::size_t i = 0; i < c.rows(); ++i) tr.a.add(i, i, 1.0);
    tr.b = 1.0;
    p.constraints.push_back(tr);
    return p;
}

} // namespace

TEST_CASE("equality builder reproduces a complex functional") {
    // L(X) = X(0,1) + 2i X(2,0) = rhs over Hermitian X.
    std::vector<Constraint> cons;
    ComplexEqualityBuilder eq(3);
    eq.add(0, 1, 1.0);
    eq.add(2, 0, cpx(0.0, 2.0));
    eq.emit(cons, cpx(0.25, -0.5));
    REQUIRE(cons.size() == 2);

    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const ComplexMatrix x = random_hermitian(3, rng);
        const cpx l = x(0, 1) + cpx(0.0, 2.0) * x(2, 0);
        const double re = sparse_inner(cons[0].a, x);
        const double im = -sparse_inner(cons[1].a, x);
        CHECK(re == doctest::Approx(l.real()).epsilon(1e-12));
        CHECK(im == doctest::Approx(l.imag()).epsilon(1e-12));
    }
    CHECK(cons[0].b == doctest::Approx(0.25));
    CHECK(cons[1].b == doctest::Approx(0.5)); // -Im rhs
}

TEST_CASE("lambda_max family: diagonal objective") {
    const ComplexMatrix c = ComplexMatrix::diag(std::vector<double>{1.0, 3.0, 2.0});
    const SdpSolution s = solve(lambda_max_problem(c));
    CHECK(s.converged);
    CHECK(s.objective_value == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("lambda_max family: random Hermitian side 6") {
    Rng rng(5);
    const ComplexMatrix c = random_hermitian(6, rng);
    const SdpSolution s = solve(lambda_max_problem(c));
    CHECK(s.converged);
    const double lam = herm_eig(c).eigenvalues.back();
    CHECK(std::abs(s.objective_value - lam) < 1e-6 * (1.0 + std::abs(lam)));
    // solution invariants
    CHECK(min_eigenvalue(s.x) > -1e-7 * (1.0 + s.x.frobenius_norm()));
    CHECK(std::abs(s.x.trace().real() - 1.0) < 1e-6);
}

TEST_CASE("zero objective returns a feasible point") {
    SdpProblem p = lambda_max_problem(ComplexMatrix(4, 4));
    const SdpSolution s = solve(p);
    CHECK(s.converged);
    CHECK(std::abs(s.objective_value) < 1e-8);
    CHECK(std::abs(s.x.trace().real() - 1.0) < 1e-6);
}

TEST_CASE("determinism: identical input, identical output") {
    Rng rng(6);
    const ComplexMatrix c = random_hermitian(5, rng);
    const SdpSolution a = solve(lambda_max_problem(c));
    const SdpSolution b = solve(lambda_max_problem(c));
    CHECK(a.objective_value == b.objective_value);
    CHECK(max_abs_diff(a.x, b.x) == 0.0);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("infeasible constraints are detected") {
    SdpProblem p;
    p.side = 2;
    p.c = ComplexMatrix(2, 2);
    Constraint c1, c2;
    c1.a.side = 2;
    c1.a.add(0, 0, 1.0);
    c1.b = 1.0;
    c2.a.side = 2;
    c2.a.add(0, 0, 1.0);
    c2.b = 2.0; // contradicts c1
    p.constraints = {c1, c2};
    CHECK_THROWS_AS(solve(p, 20000, 1e-7), InfeasibleError);
}

TEST_CASE("max_over_choi basics") {
    // W = I/in gives value 1 (any channel: Tr J = in_dim).
    const std::size_t d = 2;
    ComplexMatrix w = ComplexMatrix::identity(d * d) * cpx(0.5, 0.0);
    auto [j1, v1] = max_over_choi(w, d, d);
    CHECK(v1 == doctest::Approx(1.0).epsilon(1e-6));

    // in_dim = 1: J is a density matrix, value = lambda_max(W).
    Rng rng(7);
    const ComplexMatrix w2 = random_hermitian(3, rng);
    auto [j2, v2] = max_over_choi(w2, 3, 1);
    CHECK(v2 == doctest::Approx(herm_eig(w2).eigenvalues.back()).epsilon(1e-6));
}

TEST_CASE("max_over_choi reaches a projector objective with a replacer") {
    ComplexMatrix proj(2, 2);
    proj(0, 0) = 1.0;
    const ComplexMatrix w = kron(proj, ComplexMatrix::identity(2)) * cpx(0.5, 0.0);
    auto [j, v] = max_over_choi(w, 2, 2);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
    const ComplexMatrix marg = partial_trace(j, {2, 2}, {0});
    CHECK(max_abs_diff(marg, ComplexMatrix::identity(2)) < 1e-5);
}

TEST_CASE("longer runs do not lose accuracy on the lambda_max family") {
    Rng rng(8);
    const ComplexMatrix c = random_hermitian(6, rng);
    const double lam = herm_eig(c).eigenvalues.back();
    double prev_err = 1e9;
    for (std::size_t iters : {400, 1600, 6400, 25600}) {
        const SdpSolution s = solve(lambda_max_problem(c), iters, 1e-13);
        const double err = std::abs(s.objective_value - lam);
        CHECK(err <= prev_err * 5.0 + 1e-7);
        prev_err = std::min(prev_err, err);
    }
    CHECK(prev_err < 1e-6);
}
