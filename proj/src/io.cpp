#include "graphpot/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "graphpot/metric.hpp"

namespace graphpot {

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const std::filesystem::path& file, const Provenance& prov,
               const std::string& header, const std::vector<std::string>& rows) {
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot open " + file.string() + " for writing");
    out << "# config_hash=" << prov.config_hash << " tool_version=" << prov.tool_version << "\n";
    out << header << "\n";
    for (const auto& r : rows) out << r << "\n";
}

void write_edge_list_csv(const std::filesystem::path& file, const Provenance& prov,
                         const WeightedGraph& g) {
    std::vector<std::string> rows;
    rows.reserve(static_cast<std::size_t>(g.edge_count()));
    for (const auto& e : g.edges())
        rows.push_back(std::to_string(g.id_of(e.u)) + "," + std::to_string(g.id_of(e.v)) + "," +
                       format_double(e.w) + "," + format_double(e.ell));
    write_csv(file, prov, "u,v,w,ell", rows);
}

void write_vertex_table_csv(const std::filesystem::path& file, const Provenance& prov,
                            const WeightedGraph& g) {
    std::vector<std::string> rows;
    rows.reserve(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i)
        rows.push_back(std::to_string(g.id_of(i)) + "," + format_double(g.mu(i)));
    write_csv(file, prov, "vertex,mu", rows);
}

void write_potential_csv(const std::filesystem::path& file, const Provenance& prov,
                         const WeightedGraph& g, const Potential& phi) {
    std::vector<std::string> rows;
    rows.reserve(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i)
        rows.push_back(std::to_string(g.id_of(i)) + "," +
                       format_double(phi.values[static_cast<std::size_t>(i)]));
    write_csv(file, prov, "vertex,value", rows);
}

void write_trace_csv(const std::filesystem::path& file, const Provenance& prov,
                     const std::vector<TraceRow>& trace) {
    std::vector<std::string> rows;
    for (const auto& t : trace)
        rows.push_back(std::to_string(t.iter) + "," + format_double(t.energy) + "," +
                       format_double(t.residual));
    write_csv(file, prov, "iteration,energy,residual", rows);
}

void write_capacity_csv(const std::filesystem::path& file, const Provenance& prov,
                        const CapacitySequence& seq) {
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < seq.levels.size(); ++i)
        rows.push_back(std::to_string(seq.levels[i]) + "," + format_double(seq.values[i]));
    write_csv(file, prov, "level,capacity", rows);
}

nlohmann::json to_json(const CapacitySequence& seq) {
    return nlohmann::json{{"levels", seq.levels},
                          {"values", seq.values},
                          {"fitted_limit", seq.fitted_limit},
                          {"fit_exponent", seq.fit_exponent},
                          {"fit_residual_rel", seq.fit_residual_rel}};
}

nlohmann::json to_json(const Classification& c) {
    return nlohmann::json{{"verdict", to_string(c.verdict)},
                          {"threshold", c.threshold},
                          {"evidence", to_json(c.evidence)}};
}

FamilySpec family_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("family spec must be an object with a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    FamilySpec s;
    if (kind == "lattice") {
        s = FamilySpec::lattice_spec(j.at("dim").get<int>());
    } else if (kind == "regular_tree") {
        s = FamilySpec::regular_tree_spec(j.at("degree").get<int>());
    } else if (kind == "cylinder") {
        s = FamilySpec::cylinder_spec(j.at("circumference").get<int>());
    } else if (kind == "model_end") {
        s = FamilySpec::model_end_spec(j.at("branching").get<std::vector<int>>());
    } else if (kind == "binary_tree") {
        s = FamilySpec::binary_tree_spec();
    } else if (kind == "glue") {
        std::vector<FamilySpec> ends;
        for (const auto& e : j.at("ends")) ends.push_back(family_from_json(e));
        s = FamilySpec::glue_spec(std::move(ends));
    } else {
        throw ConfigError("unknown family kind '" + kind + "'");
    }
    if (j.contains("mu")) s.mu = j.at("mu").get<double>();
    if (j.contains("w")) s.w = j.at("w").get<double>();
    if (j.contains("ell")) s.ell = j.at("ell").get<double>();
    s.validate();
    return s;
}

nlohmann::json family_to_json(const FamilySpec& spec) {
    nlohmann::json j;
    switch (spec.kind) {
        case FamilySpec::Kind::lattice:
            j = {{"kind", "lattice"}, {"dim", spec.dim}};
            break;
        case FamilySpec::Kind::regular_tree:
            j = {{"kind", "regular_tree"}, {"degree", spec.degree}};
            break;
        case FamilySpec::Kind::cylinder:
            j = {{"kind", "cylinder"}, {"circumference", spec.circumference}};
            break;
        case FamilySpec::Kind::model_end:
            j = {{"kind", "model_end"}, {"branching", spec.branching}};
            break;
        case FamilySpec::Kind::glue: {
            nlohmann::json ends = nlohmann::json::array();
            for (const auto& e : spec.ends) ends.push_back(family_to_json(e));
            j = {{"kind", "glue"}, {"ends", std::move(ends)}};
            break;
        }
    }
    j["mu"] = spec.mu;
    j["w"] = spec.w;
    j["ell"] = spec.ell;
    return j;
}

KSpec kspec_from_json(const nlohmann::json& j) {
    KSpec k;
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("K spec must be an object with a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "origin") {
        k.kind = KSpec::Kind::origin;
    } else if (kind == "ids") {
        k.kind = KSpec::Kind::ids;
        k.ids = normalized(j.at("ids").get<std::vector<VertexId>>());
        if (k.ids.empty()) throw ConfigError("K spec 'ids' must be nonempty");
    } else if (kind == "hub") {
        k.kind = KSpec::Kind::hub;
    } else if (kind == "ball") {
        k.kind = KSpec::Kind::ball;
        k.radius = j.at("radius").get<double>();
        if (k.radius <= 0) throw ConfigError("K spec ball radius must be positive");
    } else {
        throw ConfigError("unknown K spec kind '" + kind + "'");
    }
    return k;
}

VertexSet resolve_kspec(const KSpec& k, const FamilySpec& family, const Truncation& t) {
    switch (k.kind) {
        case KSpec::Kind::origin: return {origin_vertex(family)};
        case KSpec::Kind::ids:
            for (VertexId v : k.ids)
                if (!t.graph.contains(v))
                    throw ConfigError("K vertex " + std::to_string(v) +
                                      " is not in the truncation");
            return k.ids;
        case KSpec::Kind::hub: return hub_vertices(family);
        case KSpec::Kind::ball: return ball(t, origin_vertex(family), k.radius);
    }
    throw ConfigError("unknown K spec");
}

}  // namespace graphpot
