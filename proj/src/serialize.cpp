#include "qgv/serialize.hpp"

#include <fstream>

namespace qgv::io {

using nlohmann::json;

namespace {

json complex_json(cpx z) { return json::array({z.real(), z.imag()}); }

cpx parse_complex(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("expected [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

games::RegisterDims parse_dims(const json& j) {
    games::RegisterDims d;
    d.x = j.at("x").get<std::size_t>();
    d.y = j.at("y").get<std::size_t>();
    d.a = j.at("a").get<std::size_t>();
    d.b = j.at("b").get<std::size_t>();
    d.r = j.value("r", 1);
    if (d.x < 1 || d.y < 1 || d.a < 1 || d.b < 1 || d.r < 1)
        throw ValidationError("dims entries must be >= 1");
    return d;
}

json dims_json(const games::RegisterDims& d) {
    json j;
    j["x"] = d.x;
    j["y"] = d.y;
    j["a"] = d.a;
    j["b"] = d.b;
    j["r"] = d.r;
    return j;
}

} // namespace

nlohmann::json complex_vector_json(const std::vector<cpx>& v) {
    json a = json::array();
    for (const auto& z : v) a.push_back(complex_json(z));
    return a;
}

std::vector<cpx> parse_complex_vector(const json& j) {
    if (!j.is_array()) throw ValidationError("expected an array of [re, im] pairs");
    std::vector<cpx> v;
    for (const auto& e : j) v.push_back(parse_complex(e));
    return v;
}

nlohmann::json complex_matrix_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

ComplexMatrix parse_complex_matrix(const json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("expected a nested matrix array");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw ValidationError("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = parse_complex(j[i][c]);
    }
    return m;
}

const char* kind_name(GameFile::Kind k) {
    switch (k) {
        case GameFile::Kind::Projection: return "projection";
        case GameFile::Kind::Hypergraph: return "hypergraph";
        case GameFile::Kind::Classical: return "classical";
        case GameFile::Kind::Cq: return "cq";
    }
    return "?";
}

GameFile parse_game(const json& j) {
    GameFile g;
    const std::string kind = j.at("kind").get<std::string>();
    g.dims = parse_dims(j.at("dims"));
    if (kind == "projection") {
        g.kind = GameFile::Kind::Projection;
        games::ProjectionGame pg;
        pg.dims = g.dims;
        pg.xi = parse_complex_vector(j.at("xi"));
        pg.allow_nonorthogonal = j.value("allow_nonorthogonal", false);
        const json& p = j.at("p");
        if (p.contains("rank_terms")) {
            for (const auto& t : p.at("rank_terms")) {
                games::RankTerm term;
                term.lambda = t.at("lambda").get<double>();
                term.gamma = parse_complex_vector(t.at("gamma"));
                pg.p_terms.push_back(std::move(term));
            }
            pg.validate();
        } else if (p.contains("dense")) {
            pg = games::projection_from_dense(g.dims, pg.xi, parse_complex_matrix(p.at("dense")));
            pg.allow_nonorthogonal = j.value("allow_nonorthogonal", false);
        } else {
            throw ValidationError("projection game needs p.rank_terms or p.dense");
        }
        g.projection = std::move(pg);
    } else if (kind == "hypergraph") {
        g.kind = GameFile::Kind::Hypergraph;
        games::HypergraphGame h;
        h.dims = g.dims;
        for (const auto& a : j.at("atoms")) {
            games::HypergraphAtom at;
            at.weight = a.at("weight").get<double>();
            at.xi = parse_complex_vector(a.at("xi"));
            at.q = parse_complex_matrix(a.at("q"));
            h.atoms.push_back(std::move(at));
        }
        h.validate();
        g.hypergraph = std::move(h);
    } else if (kind == "classical") {
        g.kind = GameFile::Kind::Classical;
        games::ClassicalGame c;
        c.dims = g.dims;
        c.dims.r = 1;
        const json& rule = j.at("rule");
        const json& pi = j.at("pi");
        c.rule.assign(c.dims.xy() * c.dims.ab(), 0);
        c.pi.assign(c.dims.xy(), 0.0);
        for (std::size_t x = 0; x < c.dims.x; ++x)
            for (std::size_t y = 0; y < c.dims.y; ++y) {
                c.pi[x * c.dims.y + y] = pi.at(x).at(y).get<double>();
                for (std::size_t a = 0; a < c.dims.a; ++a)
                    for (std::size_t b = 0; b < c.dims.b; ++b)
                        c.rule[((x * c.dims.y + y) * c.dims.a + a) * c.dims.b + b] =
                            rule.at(x).at(y).at(a).at(b).get<int>() ? 1 : 0;
            }
        c.validate();
        g.classical = std::move(c);
    } else if (kind == "cq") {
        g.kind = GameFile::Kind::Cq;
        CqGame c;
        c.dims = g.dims;
        const json& table = j.at("table");
        const json& pi = j.at("pi");
        c.table.resize(c.dims.xy());
        c.pi.assign(c.dims.xy(), 0.0);
        for (std::size_t x = 0; x < c.dims.x; ++x)
            for (std::size_t y = 0; y < c.dims.y; ++y) {
                c.pi[x * c.dims.y + y] = pi.at(x).at(y).get<double>();
                c.table[x * c.dims.y + y] = parse_complex_matrix(table.at(x).at(y));
            }
        g.cq = std::move(c);
    } else {
        throw ValidationError("unknown game kind: " + kind);
    }
    return g;
}

json to_json(const GameFile& g) {
    json j;
    j["kind"] = kind_name(g.kind);
    j["dims"] = dims_json(g.dims);
    switch (g.kind) {
        case GameFile::Kind::Projection: {
            const auto& pg = *g.projection;
            j["xi"] = complex_vector_json(pg.xi);
            json terms = json::array();
            for (const auto& t : pg.p_terms) {
                json term;
                term["lambda"] = t.lambda;
                term["gamma"] = complex_vector_json(t.gamma);
                terms.push_back(term);
            }
            j["p"] = json{{"rank_terms", terms}};
            if (pg.allow_nonorthogonal) j["allow_nonorthogonal"] = true;
            break;
        }
        case GameFile::Kind::Hypergraph: {
            json atoms = json::array();
            for (const auto& at : g.hypergraph->atoms) {
                json a;
                a["weight"] = at.weight;
                a["xi"] = complex_vector_json(at.xi);
                a["q"] = complex_matrix_json(at.q);
                atoms.push_back(a);
            }
            j["atoms"] = atoms;
            break;
        }
        case GameFile::Kind::Classical: {
            const auto& c = *g.classical;
            json rule = json::array(), pi = json::array();
            for (std::size_t x = 0; x < c.dims.x; ++x) {
                json rx = json::array(), px = json::array();
                for (std::size_t y = 0; y < c.dims.y; ++y) {
                    px.push_back(c.pi[x * c.dims.y + y]);
                    json ry = json::array();
                    for (std::size_t a = 0; a < c.dims.a; ++a) {
                        json ra = json::array();
                        for (std::size_t b = 0; b < c.dims.b; ++b)
                            ra.push_back(c.rule_at(x, y, a, b) ? 1 : 0);
                        ry.push_back(ra);
                    }
                    rx.push_back(ry);
                }
                rule.push_back(rx);
                pi.push_back(px);
            }
            j["rule"] = rule;
            j["pi"] = pi;
            break;
        }
        case GameFile::Kind::Cq: {
            const auto& c = *g.cq;
            json table = json::array(), pi = json::array();
            for (std::size_t x = 0; x < c.dims.x; ++x) {
                json tx = json::array(), px = json::array();
                for (std::size_t y = 0; y < c.dims.y; ++y) {
                    px.push_back(c.pi[x * c.dims.y + y]);
                    tx.push_back(complex_matrix_json(c.table[x * c.dims.y + y]));
                }
                table.push_back(tx);
                pi.push_back(px);
            }
            j["table"] = table;
            j["pi"] = pi;
            break;
        }
    }
    return j;
}

games::ProjectionGame GameFile::to_projection() const {
    switch (kind) {
        case Kind::Projection: return *projection;
        case Kind::Hypergraph: return games::hypergraph_to_projection(*hypergraph);
        case Kind::Classical:
            return games::hypergraph_to_projection(games::classical_to_hypergraph(*classical));
        case Kind::Cq: return games::cq_to_projection(cq->table, cq->pi, cq->dims);
    }
    throw ValidationError("GameFile: bad kind");
}

GameFile load_game(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open game file: " + path);
    json j;
    in >> j;
    return parse_game(j);
}

std::string canonical_dump(const json& j) { return j.dump(); }

std::string input_digest(const json& j) {
    const std::string s = canonical_dump(j);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

json estimate_json(const values::ValueEstimate& est) {
    json j;
    j["value"] = est.value;
    j["bound_kind"] = values::to_string(est.bound_kind);
    j["solver"] = est.solver;
    j["iterations"] = est.iterations;
    j["restarts"] = est.restarts;
    j["residual"] = est.residual;
    j["seed"] = est.seed;
    return j;
}

BipartiteVector load_bipartite_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open vector file: " + path);
    json j;
    in >> j;
    BipartiteVector v;
    v.dim_x = j.at("dims").at("x").get<std::size_t>();
    v.dim_y = j.at("dims").at("y").get<std::size_t>();
    v.entries = parse_complex_vector(j.at("entries"));
    if (v.entries.size() != v.dim_x * v.dim_y)
        throw ValidationError("vector length does not match dims");
    return v;
}

json protocol_json(const convert::OneWayProtocol& p) {
    json j;
    json instr = json::array(), corr = json::array();
    for (const auto& c : p.instrument) {
        json b;
        b["in_dim"] = c.in_dim;
        b["out_dim"] = c.out_dim;
        b["choi"] = complex_matrix_json(c.j);
        instr.push_back(b);
    }
    for (const auto& c : p.corrections) {
        json b;
        b["in_dim"] = c.in_dim;
        b["out_dim"] = c.out_dim;
        b["choi"] = complex_matrix_json(c.j);
        corr.push_back(b);
    }
    j["instrument"] = instr;
    j["corrections"] = corr;
    return j;
}

} // namespace qgv::io
