#pragma once

#include <vector>

#include "qgv/channels.hpp"
#include "qgv/games.hpp"
#include "qgv/values.hpp"

namespace qgv::convert {

// Schmidt spectra of source and target reduced states, sorted descending.
struct SpectrumPair {
    std::vector<double> p; // source
    std::vector<double> q; // target
};

// Alice instrument {J_i} with sum_i Tr_A J_i = I, plus per-branch Bob
// correction channels.
struct OneWayProtocol {
    std::vector<channels::ChoiMatrix> instrument;
    std::vector<channels::ChoiMatrix> corrections;

    channels::ChoiMatrix induced_channel() const; // sum_i Psi_i (x) Phi_i
    void require_valid(double cp_tol = 1e-8, double tp_tol = 1e-7) const;
};

SpectrumPair schmidt_spectra(const std::vector<cpx>& xi, const std::vector<cpx>& gamma,
                             std::size_t dim_x, std::size_t dim_y);

// p majorized by q: all descending partial sums of p bounded by those of q.
bool majorizes(const SpectrumPair& sp);

bool locc_convertible(const std::vector<cpx>& xi, const std::vector<cpx>& gamma,
                      std::size_t dim_x, std::size_t dim_y);

// One-way protocol transforming xi into gamma exactly; throws
// NotConvertibleError when the majorization test fails.
OneWayProtocol nielsen_protocol(const std::vector<cpx>& xi, const std::vector<cpx>& gamma,
                                std::size_t dim_x, std::size_t dim_y);

enum class LosrVerdict { Convertible, NotConvertible, Unknown };

const char* to_string(LosrVerdict v);

// Convertible when the local see-saw reaches 1; NotConvertible when the
// no-signalling value certifies separation from 1; Unknown otherwise.
LosrVerdict losr_certify(const std::vector<cpx>& xi, const std::vector<cpx>& gamma,
                         std::size_t dim_x, std::size_t dim_y,
                         const values::SeesawOptions& opts = {});

// Doubly stochastic matrix D with p = D q, built from T-transforms
// (requires p majorized by q; spectra descending).
std::vector<std::vector<double>> transfer_matrix(const std::vector<double>& p,
                                                 const std::vector<double>& q);

// Greedy Birkhoff decomposition: weights and permutations (perm[i] = image
// of row i) with sum_j t_j P_j = d.
struct BirkhoffDecomposition {
    std::vector<double> weights;
    std::vector<std::vector<std::size_t>> perms;
};
BirkhoffDecomposition birkhoff_decompose(std::vector<std::vector<double>> d);

} // namespace qgv::convert
