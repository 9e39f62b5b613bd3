#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphpot/capacity.hpp"
#include "graphpot/families.hpp"
#include "graphpot/solver.hpp"

namespace graphpot {

inline constexpr const char* kToolVersion = "0.1.0";

struct Provenance {
    std::string config_hash;
    std::string tool_version = kToolVersion;
};

// FNV-1a 64-bit, hex encoded. Deterministic provenance hash for artifacts.
std::string fnv1a_hex(std::string_view data);

// Fixed shortest-roundtrip-ish float formatting (%.17g) so artifacts are
// byte-identical across runs.
std::string format_double(double x);

// One CSV artifact: provenance comment, header row, data rows.
void write_csv(const std::filesystem::path& file, const Provenance& prov,
               const std::string& header, const std::vector<std::string>& rows);

// Edge list (u,v,w,ell) and vertex-measure table (vertex,mu).
void write_edge_list_csv(const std::filesystem::path& file, const Provenance& prov,
                         const WeightedGraph& g);
void write_vertex_table_csv(const std::filesystem::path& file, const Provenance& prov,
                            const WeightedGraph& g);

void write_potential_csv(const std::filesystem::path& file, const Provenance& prov,
                         const WeightedGraph& g, const Potential& phi);
void write_trace_csv(const std::filesystem::path& file, const Provenance& prov,
                     const std::vector<TraceRow>& trace);
void write_capacity_csv(const std::filesystem::path& file, const Provenance& prov,
                        const CapacitySequence& seq);

// JSON views of library records (for summary artifacts).
nlohmann::json to_json(const CapacitySequence& seq);
nlohmann::json to_json(const Classification& c);

// Parse a family or vertex-set spec from configuration JSON.
FamilySpec family_from_json(const nlohmann::json& j);
nlohmann::json family_to_json(const FamilySpec& spec);

// Vertex-set specs in config files:
//   {"kind":"origin"} | {"kind":"ids","ids":[...]} | {"kind":"hub"} |
//   {"kind":"ball","radius":r}  (ball around the origin in the truncation)
struct KSpec {
    enum class Kind { origin, ids, hub, ball };
    Kind kind = Kind::origin;
    VertexSet ids;
    double radius = 1.0;
};
KSpec kspec_from_json(const nlohmann::json& j);
VertexSet resolve_kspec(const KSpec& k, const FamilySpec& family, const Truncation& t);

}  // namespace graphpot
