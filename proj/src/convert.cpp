#include "qgv/convert.hpp"

#include <algorithm>
#include <cmath>

namespace qgv::convert {

namespace {

// xi as a dim_x x dim_y matrix, xi = sum X(i,j) e_i (x) e_j.
ComplexMatrix as_matrix(const std::vector<cpx>& xi, std::size_t dim_x, std::size_t dim_y) {
    if (xi.size() != dim_x * dim_y) throw DimensionError("convert: vector size mismatch");
    ComplexMatrix m(dim_x, dim_y);
    for (std::size_t i = 0; i < dim_x; ++i)
        for (std::size_t j = 0; j < dim_y; ++j) m(i, j) = xi[i * dim_y + j];
    return m;
}

struct Schmidt {
    std::vector<double> spectrum; // descending eigenvalues of the X-marginal
    ComplexMatrix u;              // left unitary (columns ordered with spectrum)
    ComplexMatrix w;              // right unitary: mat(xi) = u diag(sqrt) w^T
};

// Completes the columns built from the coisometric part to a full unitary.
void complete_columns(ComplexMatrix& w, std::size_t rank) {
    const std::size_t n = w.rows();
    std::size_t have = rank;
    for (std::size_t cand = 0; cand < n && have < n; ++cand) {
        std::vector<cpx> v(n, cpx(0.0, 0.0));
        v[cand] = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t c = 0; c < have; ++c) {
                cpx ip = 0.0;
                for (std::size_t i = 0; i < n; ++i) ip += std::conj(w(i, c)) * v[i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= ip * w(i, c);
            }
        double nrm = 0.0;
        for (const auto& z : v) nrm += std::norm(z);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) continue;
        for (std::size_t i = 0; i < n; ++i) w(i, have) = v[i] / nrm;
        ++have;
    }
    if (have < n) throw InternalConsistencyError("convert: failed to complete a unitary");
}

Schmidt schmidt_decompose(const std::vector<cpx>& xi, std::size_t dim_x, std::size_t dim_y) {
    const ComplexMatrix m = as_matrix(xi, dim_x, dim_y);
    const ComplexMatrix rho = m * m.adjoint();
    const HermitianEigen eig = herm_eig(rho);

    Schmidt s;
    s.spectrum.resize(dim_x);
    s.u = ComplexMatrix(dim_x, dim_x);
    for (std::size_t c = 0; c < dim_x; ++c) {
        const std::size_t src = dim_x - 1 - c; // descending
        s.spectrum[c] = std::max(0.0, eig.eigenvalues[src]);
        for (std::size_t i = 0; i < dim_x; ++i) s.u(i, c) = eig.eigenvectors(i, src);
    }
    // w columns: w_c = conj( m^T conj(u_c) ) / sqrt(p_c) on the support.
    s.w = ComplexMatrix(dim_y, dim_y);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < std::min(dim_x, dim_y); ++c) {
        if (s.spectrum[c] < 1e-14) break;
        const double root = std::sqrt(s.spectrum[c]);
        for (std::size_t j = 0; j < dim_y; ++j) {
            cpx acc = 0.0;
            for (std::size_t i = 0; i < dim_x; ++i) acc += std::conj(s.u(i, c)) * m(i, j);
            s.w(j, rank) = acc / root;
        }
        ++rank;
    }
    complete_columns(s.w, rank);
    return s;
}

} // namespace

channels::ChoiMatrix OneWayProtocol::induced_channel() const {
    if (instrument.empty() || instrument.size() != corrections.size())
        throw ValidationError("OneWayProtocol: branch lists empty or mismatched");
    channels::ChoiMatrix total;
    bool first = true;
    for (std::size_t i = 0; i < instrument.size(); ++i) {
        channels::ChoiMatrix t = channels::tensor_channels(instrument[i], corrections[i]);
        if (first) {
            total = t;
            first = false;
        } else {
            total.j += t.j;
        }
    }
    return total;
}

void OneWayProtocol::require_valid(double cp_tol, double tp_tol) const {
    if (instrument.empty() || instrument.size() != corrections.size())
        throw ValidationError("OneWayProtocol: branch lists empty or mismatched");
    ComplexMatrix total;
    for (std::size_t i = 0; i < instrument.size(); ++i) {
        if (min_eigenvalue(instrument[i].j) < -cp_tol)
            throw ValidationError("OneWayProtocol: branch not completely positive");
        corrections[i].require_channel({cp_tol, tp_tol});
        const ComplexMatrix marg =
            partial_trace(instrument[i].j, {instrument[i].out_dim, instrument[i].in_dim}, {0});
        if (i == 0)
            total = marg;
        else
            total += marg;
    }
    if ((total - ComplexMatrix::identity(instrument[0].in_dim)).frobenius_norm() > tp_tol)
        throw ValidationError("OneWayProtocol: instrument is not trace preserving in total");
}

SpectrumPair schmidt_spectra(const std::vector<cpx>& xi, const std::vector<cpx>& gamma,
                             std::size_t dim_x, std::size_t dim_y) {
    SpectrumPair sp;
    sp.p = schmidt_decompose(xi, dim_x, dim_y).spectrum;
    sp.q = schmidt_decompose(gamma, dim_x, dim_y).spectrum;
    return sp;
}

bool majorizes(const SpectrumPair& sp) {
    if (sp.p.size() != sp.q.size()) throw DimensionError("majorizes: spectra length mismatch");
    double cp = 0.0, cq = 0.0;
    for (std::size_t k = 0; k < sp.p.size(); ++k) {
        cp += sp.p[k];
        cq += sp.q[k];
        if (cp > cq + 1e-10) return false;
    }
    return true;
}

bool locc_convertible(const std::vector<cpx>& xi, const std::vector<cpx>& gamma,
                      std::size_t dim_x, std::size_t dim_y) {
    return majorizes(schmidt_spectra(xi, gamma, dim_x, dim_y));
}

std::vector<std::vector<double>> transfer_matrix(const std::vector<double>& p,
                                                 const std::vector<double>& q) {
    const std::size_t n = p.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 1.0;
    std::vector<double> work = q;

    for (std::size_t step = 0; step < n * n; ++step) {
        // first index where work still exceeds the target
        std::size_t j = n;
        for (std::size_t i = 0; i < n; ++i)
            if (work[i] > p[i] + 1e-13) {
                j = i;
                break;
            }
        if (j == n) break;
        std::size_t k = n;
        for (std::size_t i = j + 1; i < n; ++i)
            if (work[i] < p[i] - 1e-13) {
                k = i;
                break;
            }
        if (k == n) break;
        const double delta = std::min(work[j] - p[j], p[k] - work[k]);
        const double lam = delta / (work[j] - work[k]);
        // T-transform on rows j,k applied to the accumulated matrix.
        for (std::size_t c = 0; c < n; ++c) {
            const double dj = d[j][c], dk = d[k][c];
            d[j][c] = (1.0 - lam) * dj + lam * dk;
            d[k][c] = lam * dj + (1.0 - lam) * dk;
        }
        const double wj = work[j], wk = work[k];
        work[j] = (1.0 - lam) * wj + lam * wk;
        work[k] = lam * wj + (1.0 - lam) * wk;
    }
    return d;
}

namespace {

// Perfect matching restricted to entries >= threshold, via augmenting paths.
bool perfect_matching(const std::vector<std::vector<double>>& d, double threshold,
                      std::vector<std::size_t>& match_col) {
    const std::size_t n = d.size();
    match_col.assign(n, n);
    std::vector<std::size_t> match_row(n, n);
    std::function<bool(std::size_t, std::vector<bool>&)> try_row =
        [&](std::size_t r, std::vector<bool>& seen) {
            for (std::size_t c = 0; c < n; ++c) {
                if (d[r][c] < threshold || seen[c]) continue;
                seen[c] = true;
                if (match_row[c] == n || try_row(match_row[c], seen)) {
                    match_row[c] = r;
                    match_col[r] = c;
                    return true;
                }
            }
            return false;
        };
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<bool> seen(n, false);
        if (!try_row(r, seen)) return false;
    }
    return true;
}

} // namespace

BirkhoffDecomposition birkhoff_decompose(std::vector<std::vector<double>> d) {
    const std::size_t n = d.size();
    BirkhoffDecomposition out;
    double remaining = 0.0;
    for (const auto& row : d)
        for (double v : row) remaining += v;
    remaining /= static_cast<double>(n);

    for (std::size_t iter = 0; iter < n * n && remaining > 1e-12; ++iter) {
        // Bottleneck permutation: largest threshold admitting a perfect
        // matching on the support.
        std::vector<double> levels;
        for (const auto& row : d)
            for (double v : row)
                if (v > 1e-13) levels.push_back(v);
        if (levels.empty()) break;
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

        std::vector<std::size_t> match;
        std::size_t lo = 0, hi = levels.size();
        // binary search for the largest feasible threshold
        std::vector<std::size_t> best_match;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (perfect_matching(d, levels[mid], match)) {
                best_match = match;
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if (best_match.empty()) {
            if (!perfect_matching(d, 1e-13, best_match)) break;
        }
        double t = 1.0;
        for (std::size_t r = 0; r < n; ++r) t = std::min(t, d[r][best_match[r]]);
        if (t <= 1e-13) break;
        for (std::size_t r = 0; r < n; ++r) d[r][best_match[r]] -= t;
        out.weights.push_back(t);
        out.perms.push_back(best_match);
        remaining -= t;
    }
    return out;
}

OneWayProtocol nielsen_protocol(const std::vector<cpx>& xi, const std::vector<cpx>& gamma,
                                std::size_t dim_x, std::size_t dim_y) {
    const Schmidt src = schmidt_decompose(xi, dim_x, dim_y);
    const Schmidt tgt = schmidt_decompose(gamma, dim_x, dim_y);
    {
        SpectrumPair sp{src.spectrum, tgt.spectrum};
        if (!majorizes(sp)) throw NotConvertibleError("nielsen_protocol: spectra not majorized");
    }
    std::size_t rank = 0;
    for (double v : src.spectrum)
        if (v > 1e-14) ++rank;
    if (rank == 0) throw ValidationError("nielsen_protocol: zero source state");

    // Doubly stochastic relation on the support, then its Birkhoff pieces.
    const std::vector<double> p(src.spectrum.begin(), src.spectrum.begin() + rank);
    const std::vector<double> q(tgt.spectrum.begin(), tgt.spectrum.begin() + rank);
    const auto dmat = transfer_matrix(p, q);
    const BirkhoffDecomposition bd = birkhoff_decompose(dmat);

    OneWayProtocol proto;
    const ComplexMatrix u_adj = src.u.adjoint();
    for (std::size_t j = 0; j < bd.weights.size(); ++j) {
        const double t = bd.weights[j];
        if (t <= 1e-14) continue;
        // M_j = sqrt(t) U_t diag(sqrt q) P^T diag(p)^{-1/2} U*.
        ComplexMatrix mid(dim_x, dim_x);
        for (std::size_t r = 0; r < rank; ++r) {
            const std::size_t c = bd.perms[j][r]; // P e_c = e_r on the support
            mid(c, r) = std::sqrt(tgt.spectrum[c] / src.spectrum[r]);
        }
        // mid = diag(sqrt q) P^T diag(p)^{-1/2}: entry (c, r) with c = perm(r).
        ComplexMatrix kraus = tgt.u * mid * u_adj * cpx(std::sqrt(t), 0.0);
        proto.instrument.push_back(channels::ChoiMatrix::from_kraus({kraus}));

        // Bob's correction K_j = V_t P^T W*.
        ComplexMatrix pt(dim_y, dim_y);
        for (std::size_t r = 0; r < rank; ++r) pt(r, bd.perms[j][r]) = 1.0;
        for (std::size_t r = rank; r < dim_y; ++r) pt(r, r) = 1.0;
        // pt here is P^T acting on the first `rank` coordinates: P^T e_r = e_{perm(r)}
        // column form handled below.
        ComplexMatrix k = tgt.w * pt.transpose() * src.w.adjoint();
        proto.corrections.push_back(channels::ChoiMatrix::from_kraus({k}));
    }
    // Rank-deficient sources need a junk branch so the instrument adds to a
    // trace-preserving map; it never fires on xi.
    if (rank < dim_x) {
        ComplexMatrix junk(dim_x, dim_x);
        for (std::size_t c = rank; c < dim_x; ++c)
            for (std::size_t i = 0; i < dim_x; ++i)
                for (std::size_t ip = 0; ip < dim_x; ++ip)
                    junk(i, ip) += src.u(i, c) * std::conj(src.u(ip, c));
        proto.instrument.push_back(channels::ChoiMatrix::from_kraus({junk}));
        proto.corrections.push_back(channels::ChoiMatrix::identity(dim_y));
    }
    proto.require_valid(1e-8, 1e-7);
    return proto;
}

const char* to_string(LosrVerdict v) {
    switch (v) {
        case LosrVerdict::Convertible: return "convertible";
        case LosrVerdict::NotConvertible: return "not_convertible";
        case LosrVerdict::Unknown: return "unknown";
    }
    return "?";
}

LosrVerdict losr_certify(const std::vector<cpx>& xi, const std::vector<cpx>& gamma,
                         std::size_t dim_x, std::size_t dim_y,
                         const values::SeesawOptions& opts) {
    const games::ProjectionGame game = games::conversion_game(xi, gamma, dim_x, dim_y);
    const values::ValueEstimate loc = values::value_loc_lower(game, opts);
    if (loc.value >= 1.0 - 1e-6) return LosrVerdict::Convertible;
    const values::ValueEstimate ns = values::value_ns(game);
    if (ns.value <= 1.0 - 1e-5) return LosrVerdict::NotConvertible;
    return LosrVerdict::Unknown;
}

} // namespace qgv::convert
