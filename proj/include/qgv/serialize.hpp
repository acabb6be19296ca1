#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qgv/convert.hpp"
#include "qgv/games.hpp"
#include "qgv/values.hpp"

namespace qgv::io {

inline constexpr const char* kVersion = "0.1.0";

struct CqGame {
    games::RegisterDims dims;
    std::vector<ComplexMatrix> table; // (x*Y + y) -> projection on C^{A*B}
    std::vector<double> pi;
};

struct GameFile {
    enum class Kind { Projection, Hypergraph, Classical, Cq };
    Kind kind = Kind::Projection;
    games::RegisterDims dims;
    std::optional<games::ProjectionGame> projection;
    std::optional<games::HypergraphGame> hypergraph;
    std::optional<games::ClassicalGame> classical;
    std::optional<CqGame> cq;

    games::ProjectionGame to_projection() const;
};

const char* kind_name(GameFile::Kind k);

GameFile parse_game(const nlohmann::json& j);
nlohmann::json to_json(const GameFile& g);
GameFile load_game(const std::string& path);

// Key-sorted single-line dump; nlohmann already emits shortest round-trip
// floats, so identical documents serialize to identical bytes.
std::string canonical_dump(const nlohmann::json& j);

// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string input_digest(const nlohmann::json& j);

nlohmann::json estimate_json(const values::ValueEstimate& est);

nlohmann::json complex_matrix_json(const ComplexMatrix& m);
ComplexMatrix parse_complex_matrix(const nlohmann::json& j);
nlohmann::json complex_vector_json(const std::vector<cpx>& v);
std::vector<cpx> parse_complex_vector(const nlohmann::json& j);

// Bipartite vector file {"dims":{"x":..,"y":..},"entries":[[re,im],...]}.
struct BipartiteVector {
    std::size_t dim_x = 0, dim_y = 0;
    std::vector<cpx> entries;
};
BipartiteVector load_bipartite_vector(const std::string& path);

nlohmann::json protocol_json(const convert::OneWayProtocol& p);

} // namespace qgv::io
