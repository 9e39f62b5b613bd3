#include "graphpot/families.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <functional>

namespace graphpot {
namespace {

// Lattice ids are balanced base-1000 encodings of the coordinate vector, so
// the origin is id 0 and 1-d coordinates are their own ids. Supports |c| <= 499.
constexpr VertexId kLatticeBase = 1000;
constexpr int kLatticeMaxLevel = 499;

VertexId encode_lattice(const std::array<int, 4>& c, int m) {
    VertexId id = 0;
    VertexId scale = 1;
    for (int i = 0; i < m; ++i) {
        id += static_cast<VertexId>(c[static_cast<std::size_t>(i)]) * scale;
        scale *= kLatticeBase;
    }
    return id;
}

int model_branching(const std::vector<int>& b, int level) {
    if (level < static_cast<int>(b.size())) return b[static_cast<std::size_t>(level)];
    return b.back();
}

// Vertices of a rooted tree family in BFS order: ids are consecutive from 0,
// parent ids computable from the level layout.
struct TreeLayout {
    std::vector<VertexId> level_start;  // level -> first id
    std::vector<VertexId> level_size;   // level -> vertex count
};

TreeLayout tree_layout(const FamilySpec& spec, int depth) {
    TreeLayout lay;
    VertexId count = 1;
    VertexId start = 0;
    for (int l = 0; l <= depth; ++l) {
        lay.level_start.push_back(start);
        lay.level_size.push_back(count);
        start += count;
        if (start > (VertexId{1} << 26))
            throw ConfigError("tree truncation too large at depth " + std::to_string(depth));
        if (spec.kind == FamilySpec::Kind::regular_tree)
            count *= (l == 0 ? spec.degree : spec.degree - 1);
        else
            count *= model_branching(spec.branching, l);
    }
    return lay;
}

void emit_tree(const FamilySpec& spec, int depth,
               const std::function<VertexId(VertexId)>& map_id, WeightedGraph::Builder& b,
               VertexSet& horizon) {
    TreeLayout lay = tree_layout(spec, depth);
    for (int l = 0; l <= depth; ++l) {
        for (VertexId k = 0; k < lay.level_size[static_cast<std::size_t>(l)]; ++k) {
            VertexId local = lay.level_start[static_cast<std::size_t>(l)] + k;
            b.add_vertex(map_id(local), spec.mu);
            if (l == depth) horizon.push_back(map_id(local));
        }
    }
    for (int l = 1; l <= depth; ++l) {
        VertexId prev_start = lay.level_start[static_cast<std::size_t>(l - 1)];
        VertexId prev_size = lay.level_size[static_cast<std::size_t>(l - 1)];
        VertexId cur_start = lay.level_start[static_cast<std::size_t>(l)];
        VertexId fan = lay.level_size[static_cast<std::size_t>(l)] / prev_size;
        for (VertexId k = 0; k < lay.level_size[static_cast<std::size_t>(l)]; ++k) {
            VertexId parent = prev_start + k / fan;
            b.add_edge(map_id(parent), map_id(cur_start + k), spec.w, spec.ell);
        }
    }
}

Truncation generate_lattice(const FamilySpec& spec, int level) {
    if (level > kLatticeMaxLevel) throw ConfigError("lattice truncation too deep for id encoding");
    const int m = spec.dim;
    WeightedGraph::Builder b;
    VertexSet horizon;

    // Shell-by-shell so deeper truncations extend shallower ones in order.
    std::array<int, 4> c{};
    for (int shell = 0; shell <= level; ++shell) {
        // Enumerate points with sup-norm == shell, lexicographically.
        std::function<void(int, int)> rec = [&](int i, int maxabs) {
            if (i == m) {
                if (maxabs != shell) return;
                b.add_vertex(encode_lattice(c, m), spec.mu);
                if (shell == level) horizon.push_back(encode_lattice(c, m));
                return;
            }
            for (int x = -shell; x <= shell; ++x) {
                c[static_cast<std::size_t>(i)] = x;
                rec(i + 1, std::max(maxabs, std::abs(x)));
            }
        };
        rec(0, 0);
    }
    // Nearest-neighbor edges within the box.
    std::array<int, 4> p{};
    std::function<void(int)> rec_e = [&](int i) {
        if (i == m) {
            VertexId from = encode_lattice(p, m);
            for (int d = 0; d < m; ++d) {
                if (p[static_cast<std::size_t>(d)] + 1 <= level) {
                    auto q = p;
                    ++q[static_cast<std::size_t>(d)];
                    b.add_edge(from, encode_lattice(q, m), spec.w, spec.ell);
                }
            }
            return;
        }
        for (int x = -level; x <= level; ++x) {
            p[static_cast<std::size_t>(i)] = x;
            rec_e(i + 1);
        }
    };
    rec_e(0);

    return {std::move(b).build(), level, normalized(std::move(horizon))};
}

Truncation generate_cylinder(const FamilySpec& spec, int level) {
    const int c = spec.circumference;
    WeightedGraph::Builder b;
    VertexSet horizon;
    auto ring_id = [c](int k, int j) {
        return static_cast<VertexId>(k) * c + j;
    };
    // Rings in the order 0, +1, -1, +2, -2, ... so truncations nest as prefixes.
    std::vector<int> rings = {0};
    for (int k = 1; k <= level; ++k) {
        rings.push_back(k);
        rings.push_back(-k);
    }
    for (int k : rings)
        for (int j = 0; j < c; ++j) {
            b.add_vertex(ring_id(k, j), spec.mu);
            if (std::abs(k) == level) horizon.push_back(ring_id(k, j));
        }
    for (int k : rings) {
        for (int j = 0; j < c; ++j) {
            b.add_edge(ring_id(k, j), ring_id(k, (j + 1) % c), spec.w, spec.ell);
            if (k + 1 <= level && b.has_vertex(ring_id(k + 1, j)))
                b.add_edge(ring_id(k, j), ring_id(k + 1, j), spec.w, spec.ell);
        }
    }
    return {std::move(b).build(), level, normalized(std::move(horizon))};
}

Truncation generate_tree(const FamilySpec& spec, int level) {
    WeightedGraph::Builder b;
    VertexSet horizon;
    emit_tree(spec, level, [](VertexId x) { return x; }, b, horizon);
    return {std::move(b).build(), level, normalized(std::move(horizon))};
}

Truncation generate_glue(const FamilySpec& spec, int level) {
    const auto k = static_cast<VertexId>(spec.ends.size());
    WeightedGraph::Builder b;
    VertexSet horizon;
    for (VertexId i = 0; i < k; ++i) b.add_vertex(i, spec.mu);
    for (VertexId i = 0; i < k; ++i)
        for (VertexId j = i + 1; j < k; ++j) b.add_edge(i, j, spec.w, spec.ell);

    // End i's local id l maps to k + i + k*l, so ids stay stable as the
    // truncation deepens and sides stay distinguishable mod k.
    for (VertexId i = 0; i < k; ++i) {
        const FamilySpec& e = spec.ends[static_cast<std::size_t>(i)];
        auto map_id = [k, i](VertexId local) { return k + i + k * local; };
        emit_tree(e, level, map_id, b, horizon);
        b.add_edge(i, map_id(0), spec.w, spec.ell);
    }
    return {std::move(b).build(), level, normalized(std::move(horizon))};
}

}  // namespace

FamilySpec FamilySpec::lattice_spec(int m) {
    FamilySpec s;
    s.kind = Kind::lattice;
    s.dim = m;
    return s;
}

FamilySpec FamilySpec::regular_tree_spec(int degree) {
    FamilySpec s;
    s.kind = Kind::regular_tree;
    s.degree = degree;
    return s;
}

FamilySpec FamilySpec::cylinder_spec(int circumference) {
    FamilySpec s;
    s.kind = Kind::cylinder;
    s.circumference = circumference;
    return s;
}

FamilySpec FamilySpec::model_end_spec(std::vector<int> branching) {
    FamilySpec s;
    s.kind = Kind::model_end;
    s.branching = std::move(branching);
    return s;
}

FamilySpec FamilySpec::glue_spec(std::vector<FamilySpec> ends) {
    FamilySpec s;
    s.kind = Kind::glue;
    s.ends = std::move(ends);
    return s;
}

void FamilySpec::validate() const {
    if (mu <= 0 || w <= 0 || ell <= 0)
        throw ConfigError("family weights mu, w, ell must be positive");
    switch (kind) {
        case Kind::lattice:
            if (dim < 1 || dim > 4) throw ConfigError("lattice dimension must be in 1..4");
            break;
        case Kind::regular_tree:
            if (degree < 3) throw ConfigError("regular tree degree must be >= 3");
            break;
        case Kind::cylinder:
            if (circumference < 3) throw ConfigError("cylinder circumference must be >= 3");
            break;
        case Kind::model_end:
            if (branching.empty()) throw ConfigError("model end needs a branching profile");
            for (int x : branching)
                if (x < 1) throw ConfigError("model end branching counts must be >= 1");
            break;
        case Kind::glue:
            if (ends.empty()) throw ConfigError("glue needs at least one end spec");
            for (const auto& e : ends) {
                if (e.kind != Kind::regular_tree && e.kind != Kind::model_end)
                    throw ConfigError("glue supports tree-shaped end specs only");
                e.validate();
            }
            break;
    }
}

std::string FamilySpec::describe() const {
    switch (kind) {
        case Kind::lattice: return "lattice(" + std::to_string(dim) + ")";
        case Kind::regular_tree: return "regular_tree(" + std::to_string(degree) + ")";
        case Kind::cylinder: return "cylinder(" + std::to_string(circumference) + ")";
        case Kind::model_end: {
            std::string s = "model_end(";
            for (std::size_t i = 0; i < branching.size(); ++i)
                s += (i ? "," : "") + std::to_string(branching[i]);
            return s + ")";
        }
        case Kind::glue: {
            std::string s = "glue(";
            for (std::size_t i = 0; i < ends.size(); ++i)
                s += (i ? "," : "") + ends[i].describe();
            return s + ")";
        }
    }
    return "?";
}

Truncation generate(const FamilySpec& spec, int level) {
    spec.validate();
    if (level < 1) throw DomainError("truncation level must be >= 1");
    switch (spec.kind) {
        case FamilySpec::Kind::lattice: return generate_lattice(spec, level);
        case FamilySpec::Kind::regular_tree:
        case FamilySpec::Kind::model_end: return generate_tree(spec, level);
        case FamilySpec::Kind::cylinder: return generate_cylinder(spec, level);
        case FamilySpec::Kind::glue: return generate_glue(spec, level);
    }
    throw ConfigError("unknown family kind");
}

VertexId origin_vertex(const FamilySpec&) { return 0; }

VertexSet hub_vertices(const FamilySpec& spec) {
    if (spec.kind != FamilySpec::Kind::glue) throw DomainError("hub set requires a glue family");
    VertexSet hubs;
    for (VertexId i = 0; i < static_cast<VertexId>(spec.ends.size()); ++i) hubs.push_back(i);
    return hubs;
}

std::unordered_map<VertexId, VertexId> glue_swap_map(const FamilySpec& spec,
                                                     const Truncation& t) {
    if (spec.kind != FamilySpec::Kind::glue || spec.ends.size() != 2)
        throw DomainError("swap map requires a glue of exactly two ends");
    const auto& a = spec.ends[0];
    const auto& b = spec.ends[1];
    if (a.describe() != b.describe() || a.mu != b.mu || a.w != b.w || a.ell != b.ell)
        throw DomainError("swap map requires two identical end specs");
    std::unordered_map<VertexId, VertexId> m;
    for (VertexId id : t.graph.ids()) {
        if (id < 2) {
            m[id] = 1 - id;
        } else {
            VertexId local = (id - 2) / 2;
            VertexId side = (id - 2) % 2;
            m[id] = 2 + 2 * local + (1 - side);
        }
    }
    return m;
}

}  // namespace graphpot
