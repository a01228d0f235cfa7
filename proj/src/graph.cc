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

#include "itlw/graph.h"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "itlw/errors.h"
#include "itlw/random.h"
#include "json.hpp"

namespace itlw {

using nlohmann::json;

std::string ClassTag::name() const {
    switch (kind) {
        case GraphClass::kRegular:
            return "regular-" + std::to_string(degree);
        case GraphClass::kErdosRenyi: {
            std::ostringstream out;
            out << "erdos-renyi(" << prob << ")";
            return out.str();
        }
        case GraphClass::kCustom:
            break;
    }
    return "custom";
}

ClassTag ClassTag::parse(std::string_view name) {
    constexpr std::string_view kRegularPrefix = "regular-";
    constexpr std::string_view kErPrefix = "erdos-renyi(";
    if (name == "custom") {
        return {};
    }
    if (name.starts_with(kRegularPrefix)) {
        auto digits = name.substr(kRegularPrefix.size());
        int degree = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), degree);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && degree > 0) {
            return {GraphClass::kRegular, degree, 0.0};
        }
    } else if (name.starts_with(kErPrefix) && name.ends_with(")")) {
        std::string digits(name.substr(kErPrefix.size(), name.size() - kErPrefix.size() - 1));
        try {
            size_t used = 0;
            double prob = std::stod(digits, &used);
            if (used == digits.size() && prob >= 0.0 && prob <= 1.0) {
                return {GraphClass::kErdosRenyi, 0, prob};
            }
        } catch (const std::exception &) {
        }
    }
    throw InputError("unknown graph class '" + std::string(name) + "'");
}

Graph::Graph(int num_vertices, std::vector<Edge> edges, ClassTag tag, std::uint64_t seed)
    : num_vertices_(num_vertices), edges_(std::move(edges)), tag_(tag), seed_(seed) {
    if (num_vertices_ < 1) {
        throw InputError("graph needs at least one vertex");
    }
    for (auto &e : edges_) {
        if (e.u == e.v) {
            throw InputError("self-loop at vertex " + std::to_string(e.u));
        }
        if (e.u > e.v) {
            std::swap(e.u, e.v);
        }
        if (e.u < 0 || e.v >= num_vertices_) {
            throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
        }
    }
    std::sort(edges_.begin(), edges_.end());
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end()) {
        throw InputError("duplicate edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
    }
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(num_vertices_, 0);
    for (const auto &e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

bool Graph::is_connected() const {
    std::vector<int> parent(num_vertices_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    int components = num_vertices_;
    for (const auto &e : edges_) {
        int a = find(e.u), b = find(e.v);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components == 1;
}

Assignment parse_assignment(std::string_view bits) {
    Assignment out;
    out.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw InputError("assignment must contain only '0' and '1'");
        }
        out.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
}

std::string format_assignment(std::span<const std::uint8_t> assignment) {
    std::string out;
    out.reserve(assignment.size());
    for (auto side : assignment) {
        out.push_back(side ? '1' : '0');
    }
    return out;
}

int cut_value(const Graph &graph, std::span<const std::uint8_t> assignment) {
    if (assignment.size() != static_cast<size_t>(graph.num_vertices())) {
        throw InputError("assignment length " + std::to_string(assignment.size()) + " does not match " +
                         std::to_string(graph.num_vertices()) + " vertices");
    }
    int cut = 0;
    for (const auto &e : graph.edges()) {
        cut += (assignment[e.u] != 0) != (assignment[e.v] != 0);
    }
    return cut;
}

int cut_value(const Graph &graph, std::uint64_t basis_index) {
    int cut = 0;
    for (const auto &e : graph.edges()) {
        cut += static_cast<int>(((basis_index >> e.u) ^ (basis_index >> e.v)) & 1U);
    }
    return cut;
}

CutSolution max_cut_brute_force(const Graph &graph) {
    const int n = graph.num_vertices();
    if (n > kMaxExhaustiveVertices) {
        throw SizeError("brute-force Max-Cut refused for " + std::to_string(n) + " vertices (limit " +
                        std::to_string(kMaxExhaustiveVertices) + ")");
    }
    // Vertex 0 stays on side 0, so only even basis indices are scanned.
    const std::uint64_t count = std::uint64_t{1} << n;
    int best = -1;
    std::uint64_t best_index = 0;
    for (std::uint64_t z = 0; z < count; z += 2) {
        int cut = cut_value(graph, z);
        if (cut > best) {
            best = cut;
            best_index = z;
        }
    }
    CutSolution solution;
    solution.c_max = best;
    solution.witness.resize(n);
    for (int q = 0; q < n; ++q) {
        solution.witness[q] = static_cast<std::uint8_t>((best_index >> q) & 1U);
    }
    return solution;
}

Graph generate_regular(int n, int degree, std::uint64_t seed) {
    if (degree < 0 || degree >= n) {
        throw InputError("regular graph needs 0 <= degree < n");
    }
    if ((n * degree) % 2 != 0) {
        throw InputError("n * degree must be even for a regular graph");
    }
    Rng rng(seed);
    std::vector<int> stubs;
    stubs.reserve(static_cast<size_t>(n) * degree);
    for (std::uint64_t attempt = 0;; ++attempt) {
        stubs.clear();
        for (int v = 0; v < n; ++v) {
            stubs.insert(stubs.end(), degree, v);
        }
        for (size_t i = stubs.size(); i > 1; --i) {
            std::swap(stubs[i - 1], stubs[uniform_below(rng, i)]);
        }
        std::vector<Edge> edges;
        bool simple = true;
        for (size_t i = 0; i < stubs.size(); i += 2) {
            int a = std::min(stubs[i], stubs[i + 1]);
            int b = std::max(stubs[i], stubs[i + 1]);
            if (a == b) {
                simple = false;
                break;
            }
            edges.push_back({a, b});
        }
        if (simple) {
            std::sort(edges.begin(), edges.end());
            simple = std::adjacent_find(edges.begin(), edges.end()) == edges.end();
        }
        if (simple) {
            return Graph(n, std::move(edges), {GraphClass::kRegular, degree, 0.0}, seed);
        }
        if (attempt > 1'000'000) {
            throw InputError("could not draw a simple regular graph");
        }
    }
}

Graph generate_erdos_renyi(int n, double prob, std::uint64_t seed) {
    if (n < 2) {
        throw InputError("Erdos-Renyi graph needs n >= 2");
    }
    if (!(prob >= 0.0 && prob <= 1.0)) {
        throw InputError("edge probability must lie in [0, 1]");
    }
    Rng rng(seed);
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            // One draw per pair keeps the stream aligned for every prob.
            if (uniform01(rng) < prob) {
                edges.push_back({u, v});
            }
        }
    }
    return Graph(n, std::move(edges), {GraphClass::kErdosRenyi, 0, prob}, seed);
}

Graph petersen_graph() {
    std::vector<Edge> edges;
    for (int i = 0; i < 5; ++i) {
        edges.push_back({i, (i + 1) % 5});
        edges.push_back({i, i + 5});
        edges.push_back({5 + i, 5 + (i + 2) % 5});
    }
    return Graph(10, std::move(edges));
}

Graph complete_graph(int n) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            edges.push_back({u, v});
        }
    }
    return Graph(n, std::move(edges));
}

Graph cycle_graph(int n) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u) {
        edges.push_back({u, (u + 1) % n});
    }
    return Graph(n, std::move(edges));
}

std::vector<std::int64_t> graph_fingerprint(const Graph &graph) {
    const int n = graph.num_vertices();
    std::vector<std::vector<int>> adj(n);
    std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
    for (const auto &e : graph.edges()) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
        linked[e.u][e.v] = linked[e.v][e.u] = true;
    }
    // Per-vertex profile: degree, triangles through v, neighbour-degree sum,
    // size of the distance-2 shell.
    std::vector<std::array<std::int64_t, 4>> profile(n);
    for (int v = 0; v < n; ++v) {
        std::int64_t triangles = 0, neighbour_degrees = 0;
        std::vector<bool> seen(n, false);
        seen[v] = true;
        for (int a : adj[v]) {
            seen[a] = true;
        }
        std::int64_t shell2 = 0;
        for (int a : adj[v]) {
            neighbour_degrees += static_cast<std::int64_t>(adj[a].size());
            for (int b : adj[a]) {
                if (b > a && linked[v][b]) {
                    ++triangles;
                }
                if (!seen[b]) {
                    seen[b] = true;
                    ++shell2;
                }
            }
        }
        profile[v] = {static_cast<std::int64_t>(adj[v].size()), triangles, neighbour_degrees, shell2};
    }
    std::sort(profile.begin(), profile.end());
    std::vector<std::int64_t> fp{n, graph.num_edges()};
    for (const auto &row : profile) {
        fp.insert(fp.end(), row.begin(), row.end());
    }
    return fp;
}

std::string graph_to_json(const Graph &graph) {
    json edges = json::array();
    for (const auto &e : graph.edges()) {
        edges.push_back({e.u, e.v});
    }
    json doc = {
        {"n", graph.num_vertices()},
        {"edges", std::move(edges)},
        {"class", graph.tag().name()},
        {"seed", graph.seed()},
        {"connected", graph.is_connected()},
    };
    return doc.dump(2) + "\n";
}

namespace {

int line_of_offset(std::string_view text, size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line holding the n-th '[' that opens an edge pair; good enough for
// pointing a human at the bad entry.
int line_of_edge(std::string_view text, size_t edge_index) {
    auto pos = text.find("\"edges\"");
    if (pos == std::string_view::npos) {
        return 0;
    }
    pos = text.find('[', pos);
    for (size_t i = 0; i <= edge_index && pos != std::string_view::npos; ++i) {
        pos = text.find('[', pos + 1);
    }
    return pos == std::string_view::npos ? 0 : line_of_offset(text, pos);
}

}  // namespace

Graph graph_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("malformed graph JSON: ") + e.what(), "<document>",
                         line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!doc.is_object()) {
        throw ParseError("graph file must hold a JSON object", "<document>", 1);
    }
    auto require = [&](const char *key) -> const json & {
        auto it = doc.find(key);
        if (it == doc.end()) {
            throw ParseError("missing required key", key);
        }
        return *it;
    };
    const json &n_field = require("n");
    if (!n_field.is_number_integer() || n_field.get<std::int64_t>() < 1 ||
        n_field.get<std::int64_t>() > 1'000'000) {
        throw ParseError("'n' must be a positive integer", "n");
    }
    const int n = n_field.get<int>();

    const json &edge_field = require("edges");
    if (!edge_field.is_array()) {
        throw ParseError("'edges' must be an array", "edges");
    }
    std::vector<Edge> edges;
    edges.reserve(edge_field.size());
    for (size_t i = 0; i < edge_field.size(); ++i) {
        const json &pair = edge_field[i];
        std::string field = "edges[" + std::to_string(i) + "]";
        int line = line_of_edge(text, i);
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
            throw ParseError("edge must be a pair of integers", field, line);
        }
        auto u = pair[0].get<std::int64_t>();
        auto v = pair[1].get<std::int64_t>();
        if (u == v) {
            throw ParseError("self-loop", field, line);
        }
        if (u < 0 || v >= n || u > v) {
            throw ParseError("edge must satisfy 0 <= u < v < n", field, line);
        }
        edges.push_back({static_cast<int>(u), static_cast<int>(v)});
    }

    ClassTag tag;
    if (auto it = doc.find("class"); it != doc.end()) {
        if (!it->is_string()) {
            throw ParseError("'class' must be a string", "class");
        }
        try {
            tag = ClassTag::parse(it->get<std::string>());
        } catch (const InputError &e) {
            throw ParseError(e.what(), "class");
        }
    }
    std::uint64_t seed = 0;
    if (auto it = doc.find("seed"); it != doc.end()) {
        if (!it->is_number_integer()) {
            throw ParseError("'seed' must be an integer", "seed");
        }
        seed = it->get<std::uint64_t>();
    }
    try {
        return Graph(n, std::move(edges), tag, seed);
    } catch (const InputError &e) {
        throw ParseError(e.what(), "edges");
    }
}

void save_graph(const Graph &graph, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << graph_to_json(graph);
}

Graph load_graph(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return graph_from_json(buffer.str());
}

}  // namespace itlw
