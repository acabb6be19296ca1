// Command-line front end: game values, generators, convertibility checks and
// full chain reports over JSON game files.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgv/convert.hpp"
#include "qgv/serialize.hpp"

using nlohmann::json;
using namespace qgv;

namespace {

struct CommonFlags {
    std::uint64_t seed = 0;
    std::size_t restarts = 16;
    std::size_t dim_a = 2, dim_b = 2;
    std::size_t branches = 4;
    double tol = 1e-7;
    std::size_t max_iters = 100000;
    bool timings = false;
    bool verbose = false;
};

values::SeesawOptions seesaw_opts(const CommonFlags& f) {
    values::SeesawOptions o;
    o.restarts = f.restarts;
    o.seed = f.seed;
    o.inner_tol = f.tol;
    return o;
}

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--seed", f.seed, "RNG seed (default 0)");
    cmd->add_option("--restarts", f.restarts, "see-saw restarts");
    cmd->add_option("--dim-a", f.dim_a, "Alice environment dimension (q)");
    cmd->add_option("--dim-b", f.dim_b, "Bob environment dimension (q)");
    cmd->add_option("--branches", f.branches, "instrument branches (lowc)");
    cmd->add_option("--tol", f.tol, "SDP tolerance");
    cmd->add_option("--max-iters", f.max_iters, "SDP iteration cap");
    cmd->add_flag("--timings", f.timings, "include wall_time_ms in the output");
    cmd->add_flag("--verbose", f.verbose, "progress log on standard error");
}

int run_value(const std::string& kind, const std::string& path, const CommonFlags& flags) {
    const io::GameFile gf = io::load_game(path);
    const std::string digest = io::input_digest(io::to_json(gf));
    const auto t0 = std::chrono::steady_clock::now();

    values::ValueEstimate est;
    if (kind == "classical") {
        if (gf.kind != io::GameFile::Kind::Classical)
            throw ValidationError("value classical requires a classical game file");
        est = values::value_classical_loc_exact(*gf.classical);
    } else if (kind == "ns") {
        if (gf.kind == io::GameFile::Kind::Hypergraph)
            est = values::value_ns(*gf.hypergraph, flags.tol, flags.max_iters);
        else
            est = values::value_ns(gf.to_projection(), flags.tol, flags.max_iters);
    } else if (kind == "qc") {
        if (gf.kind == io::GameFile::Kind::Classical)
            est = values::value_qc_upper(*gf.classical, flags.tol, flags.max_iters);
        else if (gf.kind == io::GameFile::Kind::Cq)
            est = values::value_qc_upper_cq(gf.cq->table, gf.cq->pi, gf.cq->dims, flags.tol,
                                            flags.max_iters);
        else
            est = values::value_qc_upper(gf.to_projection(), flags.tol, flags.max_iters);
    } else if (kind == "loc") {
        est = values::value_loc_lower(gf.to_projection(), seesaw_opts(flags));
    } else if (kind == "q") {
        est = values::value_q_lower(gf.to_projection(), flags.dim_a, flags.dim_b,
                                    seesaw_opts(flags));
    } else if (kind == "lowc") {
        est = values::value_lowc_lower(gf.to_projection(), flags.branches, seesaw_opts(flags));
    } else {
        throw ValidationError("unknown value kind: " + kind);
    }

    json out = io::estimate_json(est);
    out["input_digest"] = digest;
    out["version"] = io::kVersion;
    if (flags.timings) {
        const auto t1 = std::chrono::steady_clock::now();
        out["wall_time_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    }
    std::cout << io::canonical_dump(out) << "\n";
    return 0;
}

std::vector<cpx> parse_inline_gamma(const std::vector<std::string>& tokens) {
    std::vector<cpx> v;
    for (const auto& t : tokens) {
        const auto comma = t.find(',');
        if (comma == std::string::npos) throw ValidationError("gamma entries must be re,im pairs");
        v.emplace_back(std::stod(t.substr(0, comma)), std::stod(t.substr(comma + 1)));
    }
    return v;
}

int run_gen(const std::string& name, const std::string& out_path, std::size_t n,
            const std::vector<std::string>& gamma_tokens, const std::string& gamma_file,
            const std::string& p_path, const std::string& q_path, const std::string& xi_path,
            const std::string& pi0_path, const std::string& pi1_path) {
    io::GameFile gf;
    if (name == "chsh") {
        gf.kind = io::GameFile::Kind::Classical;
        gf.classical = games::gen_chsh();
        gf.dims = gf.classical->dims;
    } else if (name == "diag") {
        std::vector<std::vector<cpx>> gammas;
        if (!gamma_file.empty()) {
            std::ifstream in(gamma_file);
            if (!in) throw ValidationError("cannot open gamma file: " + gamma_file);
            json j;
            in >> j;
            for (const auto& row : j) gammas.push_back(io::parse_complex_vector(row));
        } else {
            // tokens form one vector per ';' separator
            std::vector<std::string> current;
            for (const auto& t : gamma_tokens) {
                if (t == ";") {
                    if (!current.empty()) gammas.push_back(parse_inline_gamma(current));
                    current.clear();
                } else {
                    current.push_back(t);
                }
            }
            if (!current.empty()) gammas.push_back(parse_inline_gamma(current));
        }
        if (n == 0 || gammas.empty()) throw ValidationError("gen diag needs --n and --gamma");
        gf.kind = io::GameFile::Kind::Projection;
        gf.projection = games::gen_diag_family(n, gammas);
        gf.dims = gf.projection->dims;
    } else if (name == "implication") {
        auto load_matrix = [](const std::string& p) {
            std::ifstream in(p);
            if (!in) throw ValidationError("cannot open matrix file: " + p);
            json j;
            in >> j;
            return io::parse_complex_matrix(j);
        };
        gf.kind = io::GameFile::Kind::Hypergraph;
        gf.hypergraph = games::gen_implication(load_matrix(p_path), load_matrix(q_path));
        gf.dims = gf.hypergraph->dims;
    } else if (name == "xor") {
        std::ifstream in(xi_path);
        if (!in) throw ValidationError("cannot open xi file: " + xi_path);
        json j;
        in >> j;
        const std::size_t dx = j.at("dims").at("x").get<std::size_t>();
        const std::size_t dy = j.at("dims").at("y").get<std::size_t>();
        const std::vector<cpx> xi = io::parse_complex_vector(j.at("entries"));
        auto load_matrix = [](const std::string& p) {
            std::ifstream in2(p);
            if (!in2) throw ValidationError("cannot open matrix file: " + p);
            json jj;
            in2 >> jj;
            return io::parse_complex_matrix(jj);
        };
        gf.kind = io::GameFile::Kind::Projection;
        gf.projection = games::gen_xor_embedding(xi, dx, dy, load_matrix(pi0_path),
                                                 load_matrix(pi1_path));
        gf.dims = gf.projection->dims;
    } else {
        throw ValidationError("unknown generator: " + name);
    }

    const json out = io::to_json(gf);
    // round trip check before writing
    io::parse_game(out);
    if (out_path == "-") {
        std::cout << io::canonical_dump(out) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw ValidationError("cannot write: " + out_path);
        f << io::canonical_dump(out) << "\n";
    }
    return 0;
}

int run_convert(const std::string& mode, const std::string& xi_path, const std::string& gamma_path,
                const CommonFlags& flags) {
    const io::BipartiteVector xi = io::load_bipartite_vector(xi_path);
    const io::BipartiteVector gamma = io::load_bipartite_vector(gamma_path);
    if (xi.dim_x != gamma.dim_x || xi.dim_y != gamma.dim_y)
        throw DimensionError("convert: vectors have different bipartite shapes");

    json out;
    if (mode == "locc") {
        const bool ok = convert::locc_convertible(xi.entries, gamma.entries, xi.dim_x, xi.dim_y);
        if (ok) {
            const convert::OneWayProtocol proto =
                convert::nielsen_protocol(xi.entries, gamma.entries, xi.dim_x, xi.dim_y);
            out["verdict"] = "convertible";
            out["witness"] = io::protocol_json(proto);
        } else {
            out["verdict"] = "not_convertible";
        }
    } else if (mode == "losr") {
        const convert::LosrVerdict v = convert::losr_certify(xi.entries, gamma.entries, xi.dim_x,
                                                             xi.dim_y, seesaw_opts(flags));
        out["verdict"] = convert::to_string(v);
    } else {
        throw ValidationError("unknown convert mode: " + mode);
    }
    std::cout << io::canonical_dump(out) << "\n";
    return 0;
}

int run_report(const std::string& path, const CommonFlags& flags) {
    const io::GameFile gf = io::load_game(path);
    const std::string digest = io::input_digest(io::to_json(gf));

    values::ChainOptions copts;
    copts.seesaw = seesaw_opts(flags);
    copts.d_a = flags.dim_a;
    copts.d_b = flags.dim_b;
    copts.branches = flags.branches;

    values::ChainReport rep;
    if (gf.kind == io::GameFile::Kind::Classical)
        rep = values::chain_report(*gf.classical, copts);
    else if (gf.kind == io::GameFile::Kind::Hypergraph)
        rep = values::chain_report(*gf.hypergraph, copts);
    else
        rep = values::chain_report(gf.to_projection(), copts);

    json out;
    out["chain_ok"] = rep.chain_ok;
    out["input_digest"] = digest;
    out["version"] = io::kVersion;
    json results;
    results["loc"] = io::estimate_json(rep.loc);
    results["q"] = io::estimate_json(rep.q);
    results["lowc"] = io::estimate_json(rep.lowc);
    results["qc"] = io::estimate_json(rep.qc);
    results["ns"] = io::estimate_json(rep.ns);
    out["results"] = results;
    std::cout << io::canonical_dump(out) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum game values: solvers for the loc/q/qc/ns/lowc hierarchy"};
    app.require_subcommand(1);

    CommonFlags flags;

    // value
    auto* value_cmd = app.add_subcommand("value", "compute one game value");
    std::string value_kind, game_path;
    value_cmd->add_option("kind", value_kind, "loc|q|qc|ns|lowc|classical")->required();
    value_cmd->add_option("game", game_path, "game JSON file")->required();
    add_common(value_cmd, flags);

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate a game file");
    std::string gen_name, out_path = "-";
    std::size_t gen_n = 0;
    std::vector<std::string> gamma_tokens;
    std::string gamma_file, p_path, q_path, xi_path, pi0_path, pi1_path;
    gen_cmd->add_option("name", gen_name, "chsh|diag|implication|xor")->required();
    gen_cmd->add_option("--out", out_path, "output path ('-' for stdout)");
    gen_cmd->add_option("--n", gen_n, "diag: dimension n");
    gen_cmd->add_option("--gamma", gamma_tokens,
                        "diag: re,im entries; separate vectors with ';'")
        ->expected(-1);
    gen_cmd->add_option("--gamma-file", gamma_file, "diag: JSON file of gamma vectors");
    gen_cmd->add_option("--p", p_path, "implication: dense projection JSON");
    gen_cmd->add_option("--q", q_path, "implication: dense projection JSON");
    gen_cmd->add_option("--xi", xi_path, "xor: bipartite-with-referee vector file");
    gen_cmd->add_option("--pi0", pi0_path, "xor: referee projection 0");
    gen_cmd->add_option("--pi1", pi1_path, "xor: referee projection 1");

    // convert
    auto* conv_cmd = app.add_subcommand("convert", "pure-state convertibility");
    std::string conv_mode, conv_xi, conv_gamma;
    conv_cmd->add_option("mode", conv_mode, "losr|locc")->required();
    conv_cmd->add_option("xi", conv_xi, "source vector file")->required();
    conv_cmd->add_option("gamma", conv_gamma, "target vector file")->required();
    add_common(conv_cmd, flags);

    // report
    auto* report_cmd = app.add_subcommand("report", "full value chain for a game");
    std::string report_path;
    report_cmd->add_option("game", report_path, "game JSON file")->required();
    add_common(report_cmd, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*value_cmd) return run_value(value_kind, game_path, flags);
        if (*gen_cmd)
            return run_gen(gen_name, out_path, gen_n, gamma_tokens, gamma_file, p_path, q_path,
                           xi_path, pi0_path, pi1_path);
        if (*conv_cmd) return run_convert(conv_mode, conv_xi, conv_gamma, flags);
        if (*report_cmd) return run_report(report_path, flags);
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InternalConsistencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
