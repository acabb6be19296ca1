#include <doctest.h>

#include "qgv/channels.hpp"

using namespace qgv;
using namespace qgv::channels;

namespace {

ComplexMatrix random_density(std::size_t n, Rng& rng) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.gaussian_complex();
    ComplexMatrix rho = m * m.adjoint();
    return rho * cpx(1.0 / rho.trace().real(), 0.0);
}

ChoiMatrix random_channel(std::size_t in, std::size_t out, Rng& rng) {
    return gamma_from_isometry(random_block_isometry(in, out, 1, rng),
                               ComplexMatrix::identity(1));
}

ChoiMatrix unitary_channel(const ComplexMatrix& u) { return ChoiMatrix::from_kraus({u}); }

} // namespace

TEST_CASE("identity-like isometry gives the identity channel") {
    BlockIsometry u;
    u.in_label_dim = 2;
    u.out_label_dim = 2;
    u.env_in_dim = 1;
    u.env_out_dim = 1;
    u.blocks.assign(4, ComplexMatrix(1, 1));
    u.block(0, 0)(0, 0) = 1.0;
    u.block(1, 1)(0, 0) = 1.0;
    u.require_valid();
    const ChoiMatrix c = gamma_from_isometry(u, ComplexMatrix::identity(1));
    CHECK(max_abs_diff(c.j, ChoiMatrix::identity(2).j) < 1e-12);
    // the sharp transform fixes the identity channel
    CHECK(max_abs_diff(gamma_sharp(c).j, c.j) < 1e-12);
}

TEST_CASE("gamma_from_isometry outputs are channels") {
    Rng rng(1);
    for (int t = 0; t < 5; ++t) {
        const BlockIsometry u = random_block_isometry(3, 2, 2, rng);
        const ComplexMatrix sigma = random_density(2, rng);
        const ChoiMatrix c = gamma_from_isometry(u, sigma);
        CHECK(c.is_channel());
        // trace preservation explicitly
        const ComplexMatrix marg = partial_trace(c.j, {c.out_dim, c.in_dim}, {0});
        CHECK(max_abs_diff(marg, ComplexMatrix::identity(c.in_dim)) < 1e-9);
    }
}

TEST_CASE("gamma of a Kraus stacking matches the sharp of the channel") {
    // For V the Kraus stacking of Phi, Gamma_{V,1} = Phi^#; with the
    // conjugated blocks the round trip gives Phi itself.
    Rng rng(2);
    ComplexMatrix k0(2, 2), k1(2, 2);
    // a channel with complex Choi entries so that Phi != Phi^#
    k0(0, 0) = 1.0;
    k0(1, 1) = cpx(0.0, std::sqrt(0.5));
    k1(0, 1) = std::sqrt(0.5);
    const ChoiMatrix phi = ChoiMatrix::from_kraus({k0, k1});
    REQUIRE(phi.is_channel());
    REQUIRE(max_abs_diff(phi.j, gamma_sharp(phi).j) > 1e-3);

    // Kraus stacking V_{a,x} = (<V_s e_x, e_a>)_s without conjugation.
    BlockIsometry v;
    v.in_label_dim = 2;
    v.out_label_dim = 2;
    v.env_in_dim = 1;
    v.env_out_dim = 2;
    v.blocks.assign(4, ComplexMatrix(2, 1));
    const std::vector<ComplexMatrix> kraus = {k0, k1};
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t s = 0; s < 2; ++s) v.block(a, x)(s, 0) = kraus[s](a, x);
    v.require_valid();
    const ChoiMatrix got = gamma_from_isometry(v, ComplexMatrix::identity(1));
    CHECK(max_abs_diff(got.j, gamma_sharp(phi).j) < 1e-12);
}

TEST_CASE("gamma_sharp is an involution and matches direct application") {
    Rng rng(3);
    const ChoiMatrix c = random_channel(2, 2, rng);
    CHECK(max_abs_diff(gamma_sharp(gamma_sharp(c)).j, c.j) < 1e-14);

    // Gamma^#(rho) = Gamma(rho^t)^t on random inputs
    const ChoiMatrix sharp = gamma_sharp(c);
    for (int t = 0; t < 5; ++t) {
        const ComplexMatrix rho = random_density(2, rng);
        const ComplexMatrix lhs = apply_choi(sharp, rho);
        const ComplexMatrix rhs = apply_choi(c, rho.transpose()).transpose();
        CHECK(max_abs_diff(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("isometry_from_channel round trips") {
    Rng rng(4);
    // identity channel
    {
        const ChoiMatrix id = ChoiMatrix::identity(2);
        const BlockIsometry u = isometry_from_channel(id);
        const ChoiMatrix back = gamma_from_isometry(u, ComplexMatrix::identity(1));
        CHECK((back.j - id.j).frobenius_norm() < 1e-8);
    }
    // completely depolarizing channel
    {
        const ChoiMatrix dep = ChoiMatrix::depolarizing(2, 2);
        const BlockIsometry u = isometry_from_channel(dep);
        const ChoiMatrix back = gamma_from_isometry(u, ComplexMatrix::identity(1));
        CHECK((back.j - dep.j).frobenius_norm() < 1e-8);
    }
    // random channels with in/out up to 4
    for (int t = 0; t < 4; ++t) {
        const std::size_t in = 2 + (t % 2), out = 2 + (t / 2);
        const ChoiMatrix c = random_channel(in, out, rng);
        const BlockIsometry u = isometry_from_channel(c);
        u.require_valid(1e-7);
        const ChoiMatrix back = gamma_from_isometry(u, ComplexMatrix::identity(1));
        CHECK((back.j - c.j).frobenius_norm() < 1e-7);
    }
}

TEST_CASE("stochastic_from_isometry") {
    // trivial |A| = 1, U_{1,x} = e_x (x) I into orthogonal sectors: E = I
    BlockIsometry u;
    u.in_label_dim = 2;
    u.out_label_dim = 1;
    u.env_in_dim = 2;
    u.env_out_dim = 4;
    u.blocks.assign(2, ComplexMatrix(4, 2));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t i = 0; i < 2; ++i) u.block(0, x)(x * 2 + i, i) = 1.0;
    u.require_valid();
    const StochasticOperatorMatrix e = stochastic_from_isometry(u);
    CHECK(max_abs_diff(e.e, ComplexMatrix::identity(4)) < 1e-14);

    Rng rng(5);
    const BlockIsometry v = random_block_isometry(2, 3, 2, rng);
    const StochasticOperatorMatrix s = stochastic_from_isometry(v);
    CHECK(s.positivity_defect() < 1e-9);
    CHECK(s.marginal_error() < 1e-9);

    // rank-1 environment: E is the Gram matrix of the block columns
    const BlockIsometry w = random_block_isometry(2, 2, 1, rng);
    const StochasticOperatorMatrix g = stochastic_from_isometry(w);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t xp = 0; xp < 2; ++xp)
                for (std::size_t ap = 0; ap < 2; ++ap) {
                    cpx ip = 0.0;
                    for (std::size_t i = 0; i < w.env_out_dim; ++i)
                        ip += std::conj(w.block(a, x)(i, 0)) * w.block(ap, xp)(i, 0);
                    CHECK(std::abs(g.e(x * 2 + a, xp * 2 + ap) - ip) < 1e-13);
                }
}

TEST_CASE("tensor_channels") {
    // id (x) id = id
    const ChoiMatrix id2 = ChoiMatrix::identity(2);
    const ChoiMatrix t = tensor_channels(id2, id2);
    CHECK(max_abs_diff(t.j, ChoiMatrix::identity(4).j) < 1e-14);

    // replacer (x) replacer = replacer onto the product state
    Rng rng(6);
    const ComplexMatrix s1 = random_density(2, rng);
    const ComplexMatrix s2 = random_density(2, rng);
    const ChoiMatrix r1 = ChoiMatrix::replacer(s1, 2);
    const ChoiMatrix r2 = ChoiMatrix::replacer(s2, 2);
    const ChoiMatrix rt = tensor_channels(r1, r2);
    // apply to a random product input and compare with independent applications
    const ComplexMatrix in1 = random_density(2, rng), in2 = random_density(2, rng);
    const ComplexMatrix lhs = apply_choi(rt, kron(in1, in2));
    const ComplexMatrix rhs = kron(apply_choi(r1, in1), apply_choi(r2, in2));
    CHECK(max_abs_diff(lhs, rhs) < 1e-10);

    // random pair on a random product input
    const ChoiMatrix c1 = random_channel(2, 3, rng);
    const ChoiMatrix c2 = random_channel(2, 2, rng);
    const ChoiMatrix ct = tensor_channels(c1, c2);
    const ComplexMatrix l2 = apply_choi(ct, kron(in1, in2));
    const ComplexMatrix r2b = kron(apply_choi(c1, in1), apply_choi(c2, in2));
    CHECK(max_abs_diff(l2, r2b) < 1e-10);
}

TEST_CASE("tensor_channels associativity up to factor permutation") {
    Rng rng(7);
    const ChoiMatrix a = random_channel(2, 2, rng);
    const ChoiMatrix b = random_channel(2, 2, rng);
    const ChoiMatrix c = random_channel(2, 2, rng);
    const ChoiMatrix lhs = tensor_channels(tensor_channels(a, b), c);
    const ChoiMatrix rhs = tensor_channels(a, tensor_channels(b, c));
    CHECK(max_abs_diff(lhs.j, rhs.j) < 1e-10);
}

TEST_CASE("apply_choi") {
    Rng rng(8);
    const ComplexMatrix rho = random_density(2, rng);
    // identity
    CHECK(max_abs_diff(apply_choi(ChoiMatrix::identity(2), rho), rho) < 1e-14);
    // replacer
    const ComplexMatrix sigma = random_density(3, rng);
    const ComplexMatrix out = apply_choi(ChoiMatrix::replacer(sigma, 2), rho);
    CHECK(max_abs_diff(out, sigma) < 1e-12);
    // trace preserved on random channels
    const ChoiMatrix c = random_channel(2, 3, rng);
    CHECK(apply_choi(c, rho).trace().real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("unitary channel conjugates") {
    Rng rng(9);
    const ComplexMatrix u = random_isometry(2, 2, rng);
    const ChoiMatrix c = unitary_channel(u);
    CHECK(c.is_channel());
    const ComplexMatrix rho = random_density(2, rng);
    CHECK(max_abs_diff(apply_choi(c, rho), u * rho * u.adjoint()) < 1e-12);
}
