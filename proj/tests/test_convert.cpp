#include <doctest.h>

#include "qgv/convert.hpp"

using namespace qgv;
using namespace qgv::convert;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<cpx> bell2() { return {kInvSqrt2, 0.0, 0.0, kInvSqrt2}; }

std::vector<cpx> schmidt_state(const std::vector<double>& probs, std::size_t d) {
    std::vector<cpx> v(d * d, cpx(0.0, 0.0));
    for (std::size_t i = 0; i < probs.size(); ++i) v[i * d + i] = std::sqrt(probs[i]);
    return v;
}

// random descending probability vector
std::vector<double> random_spectrum(std::size_t d, Rng& rng) {
    std::vector<double> p(d);
    double total = 0.0;
    for (auto& x : p) {
        x = rng.uniform01() + 1e-3;
        total += x;
    }
    for (auto& x : p) x /= total;
    std::sort(p.rbegin(), p.rend());
    return p;
}

std::vector<cpx> random_state(std::size_t dx, std::size_t dy, Rng& rng) {
    const ComplexMatrix v = random_isometry(dx * dy, 1, rng);
    std::vector<cpx> out(dx * dy);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = v(i, 0);
    return out;
}

double protocol_fidelity(const std::vector<cpx>& xi, const std::vector<cpx>& gamma,
                         std::size_t dx, std::size_t dy, const OneWayProtocol& proto) {
    const games::ProjectionGame g = games::conversion_game(xi, gamma, dx, dy);
    return values::evaluate_strategy(g, proto.induced_channel());
}

} // namespace

TEST_CASE("schmidt_spectra basics") {
    const SpectrumPair bell = schmidt_spectra(bell2(), bell2(), 2, 2);
    CHECK(bell.p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bell.p[1] == doctest::Approx(0.5).epsilon(1e-12));

    const SpectrumPair prod =
        schmidt_spectra({1.0, 0.0, 0.0, 0.0}, schmidt_state({0.7, 0.3}, 2), 2, 2);
    CHECK(prod.p[0] == doctest::Approx(1.0));
    CHECK(prod.p[1] == doctest::Approx(0.0));
    CHECK(prod.q[0] == doctest::Approx(0.7));
    CHECK(prod.q[1] == doctest::Approx(0.3));
}

TEST_CASE("schmidt spectra are invariant under local unitaries") {
    Rng rng(1);
    const std::vector<cpx> xi = random_state(3, 3, rng);
    const ComplexMatrix u = random_isometry(3, 3, rng);
    const ComplexMatrix v = random_isometry(3, 3, rng);
    std::vector<cpx> rotated(9, cpx(0.0, 0.0));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l)
                    rotated[i * 3 + j] += u(i, k) * v(j, l) * xi[k * 3 + l];
    const SpectrumPair sp = schmidt_spectra(xi, rotated, 3, 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(sp.p[k] == doctest::Approx(sp.q[k]).epsilon(1e-10));
}

TEST_CASE("majorizes") {
    CHECK(majorizes({{0.5, 0.5}, {1.0, 0.0}}));
    CHECK(!majorizes({{0.7, 0.3}, {0.6, 0.4}}));
    CHECK(majorizes({{0.7, 0.3}, {0.7, 0.3}})); // reflexive

    // transitivity on random triples
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const auto a = random_spectrum(4, rng);
        const auto b = random_spectrum(4, rng);
        const auto c = random_spectrum(4, rng);
        if (majorizes({a, b}) && majorizes({b, c})) CHECK(majorizes({a, c}));
    }
}

TEST_CASE("locc_convertible basics") {
    // Bell converts to any 2-qubit pure state
    CHECK(locc_convertible(bell2(), schmidt_state({0.9, 0.1}, 2), 2, 2));
    CHECK(locc_convertible(bell2(), {1.0, 0.0, 0.0, 0.0}, 2, 2));
    // |00> does not convert to Bell
    CHECK(!locc_convertible({1.0, 0.0, 0.0, 0.0}, bell2(), 2, 2));
}

TEST_CASE("transfer matrix is doubly stochastic with p = D q") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        auto q = random_spectrum(4, rng);
        auto p = random_spectrum(4, rng);
        if (!majorizes({p, q})) continue;
        const auto d = transfer_matrix(p, q);
        for (std::size_t i = 0; i < 4; ++i) {
            double row = 0.0, col = 0.0;
            for (std::size_t j = 0; j < 4; ++j) {
                CHECK(d[i][j] >= -1e-12);
                row += d[i][j];
                col += d[j][i];
            }
            CHECK(row == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(col == doctest::Approx(1.0).epsilon(1e-10));
            double pi = 0.0;
            for (std::size_t j = 0; j < 4; ++j) pi += d[i][j] * q[j];
            CHECK(pi == doctest::Approx(p[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("birkhoff decomposition reconstructs the matrix") {
    Rng rng(4);
    auto q = random_spectrum(3, rng);
    std::vector<double> p = {1.0 / 3, 1.0 / 3, 1.0 / 3}; // uniform is majorized by all
    const auto d = transfer_matrix(p, q);
    const BirkhoffDecomposition bd = birkhoff_decompose(d);
    double total = 0.0;
    std::vector<std::vector<double>> rec(3, std::vector<double>(3, 0.0));
    for (std::size_t k = 0; k < bd.weights.size(); ++k) {
        total += bd.weights[k];
        for (std::size_t r = 0; r < 3; ++r) rec[r][bd.perms[k][r]] += bd.weights[k];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) CHECK(rec[r][c] == doctest::Approx(d[r][c]).epsilon(1e-9));
}

TEST_CASE("nielsen protocol: identity conversion") {
    const auto xi = schmidt_state({0.6, 0.4}, 2);
    const OneWayProtocol proto = nielsen_protocol(xi, xi, 2, 2);
    CHECK(protocol_fidelity(xi, xi, 2, 2, proto) >= 1.0 - 1e-9);
}

TEST_CASE("nielsen protocol: Bell to |00>") {
    const std::vector<cpx> target = {1.0, 0.0, 0.0, 0.0};
    const OneWayProtocol proto = nielsen_protocol(bell2(), target, 2, 2);
    CHECK(proto.instrument.size() >= 2);
    CHECK(protocol_fidelity(bell2(), target, 2, 2, proto) >= 1.0 - 1e-9);
}

TEST_CASE("nielsen protocol: uniform 3-term Schmidt to (0.5, 0.3, 0.2)") {
    const auto xi = schmidt_state({1.0 / 3, 1.0 / 3, 1.0 / 3}, 3);
    const auto gamma = schmidt_state({0.5, 0.3, 0.2}, 3);
    const OneWayProtocol proto = nielsen_protocol(xi, gamma, 3, 3);
    CHECK(protocol_fidelity(xi, gamma, 3, 3, proto) >= 1.0 - 1e-9);
}

TEST_CASE("nielsen protocol on rotated random pairs") {
    Rng rng(5);
    int built = 0;
    for (int t = 0; t < 10 && built < 4; ++t) {
        // build a convertible pair with random local bases
        const auto p = random_spectrum(3, rng);
        std::vector<double> q = p;
        // push q up in majorization order: move mass to the top
        const double shift = 0.5 * q[2];
        q[0] += shift;
        q[2] -= shift;
        std::sort(q.rbegin(), q.rend());
        std::vector<cpx> xi = schmidt_state(p, 3), gamma = schmidt_state(q, 3);
        const ComplexMatrix u = random_isometry(3, 3, rng), v = random_isometry(3, 3, rng);
        std::vector<cpx> xi_r(9, cpx(0.0, 0.0)), gamma_r(9, cpx(0.0, 0.0));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                for (std::size_t k = 0; k < 3; ++k)
                    for (std::size_t l = 0; l < 3; ++l) {
                        xi_r[i * 3 + j] += u(i, k) * v(j, l) * xi[k * 3 + l];
                        gamma_r[i * 3 + j] += v(j, l) * u(i, k) * gamma[k * 3 + l];
                    }
        REQUIRE(locc_convertible(xi_r, gamma_r, 3, 3));
        const OneWayProtocol proto = nielsen_protocol(xi_r, gamma_r, 3, 3);
        CHECK(protocol_fidelity(xi_r, gamma_r, 3, 3, proto) >= 1.0 - 1e-9);
        ++built;
    }
    CHECK(built == 4);
}

TEST_CASE("nielsen protocol refuses inconvertible pairs") {
    CHECK_THROWS_AS(nielsen_protocol({1.0, 0.0, 0.0, 0.0}, bell2(), 2, 2), NotConvertibleError);
}

TEST_CASE("losr certify on simple pairs") {
    values::SeesawOptions o;
    o.restarts = 4;
    o.outer_iters = 60;
    // equal product states convert
    CHECK(losr_certify({1.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}, 2, 2, o) ==
          LosrVerdict::Convertible);
    // a product state cannot become entangled, certified through ns
    CHECK(losr_certify({1.0, 0.0, 0.0, 0.0}, bell2(), 2, 2, o) == LosrVerdict::NotConvertible);
}

TEST_CASE("losr Convertible implies locc convertible") {
    values::SeesawOptions o;
    o.restarts = 3;
    o.outer_iters = 40;
    Rng rng(6);
    for (int t = 0; t < 3; ++t) {
        const std::vector<cpx> xi = random_state(2, 2, rng);
        const std::vector<cpx> gamma = random_state(2, 2, rng);
        const LosrVerdict v = losr_certify(xi, gamma, 2, 2, o);
        if (v == LosrVerdict::Convertible) CHECK(locc_convertible(xi, gamma, 2, 2));
    }
}
