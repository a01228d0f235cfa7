// Copyright 2026 The qaoa-itlw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace itlw {

/// Largest vertex count accepted by the exhaustive solvers and the simulator.
inline constexpr int kMaxExhaustiveVertices = 24;

struct Edge {
    int u;
    int v;

    auto operator<=>(const Edge &) const = default;
};

enum class GraphClass { kRegular, kErdosRenyi, kCustom };

/// Where a graph came from. `degree` is meaningful for kRegular, `prob` for
/// kErdosRenyi.
struct ClassTag {
    GraphClass kind = GraphClass::kCustom;
    int degree = 0;
    double prob = 0.0;

    bool operator==(const ClassTag &) const = default;

    /// "regular-3", "erdos-renyi(0.5)" or "custom".
    std::string name() const;
    static ClassTag parse(std::string_view name);
};

/// Undirected, unweighted simple graph with edges in canonical order:
/// every edge has u < v and the list is sorted lexicographically.
class Graph {
   public:
    /// Edges may be given in either orientation; they are canonicalized.
    /// Throws InputError on self-loops, out-of-range vertices or duplicates.
    Graph(int num_vertices, std::vector<Edge> edges, ClassTag tag = {}, std::uint64_t seed = 0);

    int num_vertices() const noexcept {
        return num_vertices_;
    }
    const std::vector<Edge> &edges() const noexcept {
        return edges_;
    }
    int num_edges() const noexcept {
        return static_cast<int>(edges_.size());
    }
    const ClassTag &tag() const noexcept {
        return tag_;
    }
    std::uint64_t seed() const noexcept {
        return seed_;
    }

    std::vector<int> degrees() const;
    bool is_connected() const;

    bool operator==(const Graph &) const = default;

   private:
    int num_vertices_;
    std::vector<Edge> edges_;
    ClassTag tag_;
    std::uint64_t seed_;
};

/// One side label (0 or 1) per vertex.
using Assignment = std::vector<std::uint8_t>;

/// Parses "0101"; character i is the side of vertex i.
Assignment parse_assignment(std::string_view bits);
std::string format_assignment(std::span<const std::uint8_t> assignment);

/// Number of edges whose endpoints lie on different sides.
int cut_value(const Graph &graph, std::span<const std::uint8_t> assignment);

/// Same, with vertex q on side (basis_index >> q) & 1.
int cut_value(const Graph &graph, std::uint64_t basis_index);

struct CutSolution {
    int c_max = 0;
    Assignment witness;
};

/// Exhaustive Max-Cut. Vertex 0 is pinned to side 0; the witness is the
/// numerically smallest basis index (vertex q = bit q) achieving c_max.
CutSolution max_cut_brute_force(const Graph &graph);

/// Configuration-model d-regular graph; restarts from scratch whenever the
/// pairing produces a self-loop or a repeated edge.
Graph generate_regular(int n, int degree, std::uint64_t seed);

/// G(n, p). Connectedness is not enforced; query Graph::is_connected().
Graph generate_erdos_renyi(int n, double prob, std::uint64_t seed);

/// The 10-vertex, 15-edge Petersen graph.
Graph petersen_graph();
Graph complete_graph(int n);
Graph cycle_graph(int n);

/// Isomorphism-invariant fingerprint used to keep generated ensembles free of
/// obvious duplicates. Equal fingerprints do not prove isomorphism.
std::vector<std::int64_t> graph_fingerprint(const Graph &graph);

std::string graph_to_json(const Graph &graph);
Graph graph_from_json(std::string_view text);
void save_graph(const Graph &graph, const std::filesystem::path &path);
Graph load_graph(const std::filesystem::path &path);

}  // namespace itlw
