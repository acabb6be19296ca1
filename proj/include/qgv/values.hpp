#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgv/channels.hpp"
#include "qgv/games.hpp"
#include "qgv/sdp.hpp"

namespace qgv::values {

enum class BoundKind { Exact, Lower, Upper };

const char* to_string(BoundKind k);

struct ValueEstimate {
    double value = 0.0;
    BoundKind bound_kind = BoundKind::Exact;
    std::string solver;
    std::size_t iterations = 0;
    std::size_t restarts = 0;
    double residual = 0.0;
    std::uint64_t seed = 0;
};

struct SeesawOptions {
    std::size_t restarts = 16;
    std::size_t outer_iters = 200;
    double inner_tol = 1e-7;
    double improvement_floor = 1e-9;
    std::uint64_t seed = 0;
};

// Explicit finite-dimensional strategy (E on Alice's environment, F on
// Bob's, shared pure state psi on the product).
struct QStrategy {
    channels::StochasticOperatorMatrix e;
    channels::StochasticOperatorMatrix f;
    std::vector<cpx> psi;
};

// Objective matrix W with value(Gamma) = Re Tr(W J) over Choi matrices J on
// (A*B) (x) (X*Y) ordering; W = sum_k m_k m_k* from the game tensor.
ComplexMatrix game_objective(const games::ProjectionGame& g);
ComplexMatrix game_objective(const games::HypergraphGame& h);

// Tr((Gamma (x) id_R)(xi xi*) P), computed through apply_choi with the
// referee register carried along.
double evaluate_strategy(const games::ProjectionGame& g, const channels::ChoiMatrix& c);

// sum_n Tr(sigma Phi_n* Phi_n) with Phi_n = sum ρ_n[xy,ab] U_{(ab),(xy)}.
double evaluate_isometry_strategy(const games::ProjectionGame& g, const channels::BlockIsometry& u,
                                  const ComplexMatrix& sigma);

// QNS constraints at the Choi level (trace preservation plus both
// no-signalling marginal conditions).
std::vector<sdp::Constraint> ns_constraints(const games::RegisterDims& dims);

ValueEstimate value_ns(const games::ProjectionGame& g, double tol = 1e-7,
                       std::size_t max_iter = 100000);
ValueEstimate value_ns(const games::HypergraphGame& h, double tol = 1e-7,
                       std::size_t max_iter = 100000);

ValueEstimate value_loc_lower(const games::ProjectionGame& g, const SeesawOptions& opts = {});

// See-saw over (E, F, psi) at local dimensions d_a, d_b. When `warm` is
// given it seeds restart 0 (embedded if the dimensions grew).
ValueEstimate value_q_lower(const games::ProjectionGame& g, std::size_t d_a, std::size_t d_b,
                            const SeesawOptions& opts = {}, const QStrategy* warm = nullptr,
                            QStrategy* best_out = nullptr);

// Sweeps d = 1..d_max, warm-starting each level from the previous best.
ValueEstimate value_q_lower_sweep(const games::ProjectionGame& g, std::size_t d_max,
                                  const SeesawOptions& opts = {});

ValueEstimate value_lowc_lower(const games::ProjectionGame& g, std::size_t branches = 4,
                               const SeesawOptions& opts = {});

// Level-1 moment relaxation over the word sets
// {unit} u {(a,x)} u {(b,y)} u {(a,x,b,y)}.
struct QcMomentModel {
    std::size_t X = 0, Y = 0, A = 0, B = 0;
    std::size_t side = 0;
    ComplexMatrix c; // objective, supported on the (a,x,b,y) block
    std::vector<sdp::Constraint> constraints;

    std::size_t idx_unit() const { return 0; }
    std::size_t idx_a(std::size_t a, std::size_t x) const { return 1 + a * X + x; }
    std::size_t idx_b(std::size_t b, std::size_t y) const { return 1 + A * X + b * Y + y; }
    std::size_t idx_ab(std::size_t a, std::size_t x, std::size_t b, std::size_t y) const {
        return 1 + A * X + B * Y + (a * B + b) * (X * Y) + (x * Y + y);
    }
};

QcMomentModel build_qc_moment_model(const games::ProjectionGame& g);

// Gram matrix induced by an explicit strategy: Choi entries on the word
// block, marginal moments on the single-letter blocks, zero cross blocks.
ComplexMatrix induced_gram(const QcMomentModel& model, const QStrategy& s);

// Choi matrix of the correlation realized by an explicit strategy.
channels::ChoiMatrix choi_from_q_strategy(const QStrategy& s);

// Largest absolute violation of the model constraints at G.
double moment_constraint_residual(const QcMomentModel& model, const ComplexMatrix& g);

ValueEstimate value_qc_upper(const games::ProjectionGame& g, double tol = 1e-7,
                             std::size_t max_iter = 100000);
ValueEstimate value_qc_upper(const games::HypergraphGame& h, double tol = 1e-7,
                             std::size_t max_iter = 100000);

// Classical(-to-quantum) inputs admit the free-product matrix-unit moment
// relaxation, which carries the collision relations and is tight for
// CHSH-type objectives.
ValueEstimate value_qc_upper(const games::ClassicalGame& g, double tol = 1e-7,
                             std::size_t max_iter = 100000);
ValueEstimate value_qc_upper_cq(const std::vector<ComplexMatrix>& table,
                                const std::vector<double>& pi, const games::RegisterDims& dims,
                                double tol = 1e-7, std::size_t max_iter = 100000);

ValueEstimate value_classical_loc_exact(const games::ClassicalGame& g);

struct ChainReport {
    ValueEstimate loc, q, lowc, qc, ns;
    bool chain_ok = false;
};

struct ChainOptions {
    SeesawOptions seesaw;
    std::size_t d_a = 2, d_b = 2;
    std::size_t branches = 4;
    double tol = 1e-5;
};

ChainReport chain_report(const games::ProjectionGame& g, const ChainOptions& opts = {});
ChainReport chain_report(const games::HypergraphGame& h, const ChainOptions& opts = {});
ChainReport chain_report(const games::ClassicalGame& g, const ChainOptions& opts = {});

// The standard CHSH quantum strategy: Z/X measurements against rotated
// measurements on a shared Bell pair; wins with probability (2+sqrt 2)/4.
std::pair<channels::BlockIsometry, ComplexMatrix> chsh_tsirelson_strategy();

// Number of worker threads for independent restarts (QGV_THREADS, default
// hardware concurrency).
std::size_t restart_threads();

} // namespace qgv::values
