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

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "itlw/errors.h"
#include "itlw/harness.h"
#include "itlw/random.h"

namespace itlw {

using nlohmann::json;

std::string_view to_string(RunMode mode) {
    return mode == RunMode::kProgressive ? "progressive" : "direct";
}

std::string_view to_string(Initializer init) {
    switch (init) {
        case Initializer::kBilinear:
            return "bilinear";
        case Initializer::kTqa:
            return "tqa";
        case Initializer::kRandom:
            return "random";
    }
    return "?";
}

std::string_view to_string(StrategyKind strategy) {
    switch (strategy) {
        case StrategyKind::kItlw:
            return "itlw";
        case StrategyKind::kFullOptimization:
            return "fo";
        case StrategyKind::kLayerwise:
            return "layerwise";
    }
    return "?";
}

Initializer parse_initializer(std::string_view name) {
    if (name == "bilinear") {
        return Initializer::kBilinear;
    }
    if (name == "tqa") {
        return Initializer::kTqa;
    }
    if (name == "random") {
        return Initializer::kRandom;
    }
    throw InputError("unknown initializer '" + std::string(name) + "'");
}

StrategyKind parse_strategy(std::string_view name) {
    if (name == "itlw") {
        return StrategyKind::kItlw;
    }
    if (name == "fo") {
        return StrategyKind::kFullOptimization;
    }
    if (name == "layerwise") {
        return StrategyKind::kLayerwise;
    }
    throw InputError("unknown strategy '" + std::string(name) + "'");
}

RunMode mode_of(Initializer init) {
    return init == Initializer::kBilinear ? RunMode::kProgressive : RunMode::kDirect;
}

namespace {

template <typename T, typename Parse>
std::vector<T> parse_list(const json &doc, const char *key, Parse parse) {
    std::vector<T> out;
    auto it = doc.find(key);
    if (it == doc.end()) {
        return out;
    }
    if (!it->is_array()) {
        throw ParseError("expected an array", key);
    }
    for (size_t i = 0; i < it->size(); ++i) {
        const json &item = (*it)[i];
        std::string field = std::string(key) + "[" + std::to_string(i) + "]";
        try {
            out.push_back(parse(item));
        } catch (const InputError &e) {
            throw ParseError(e.what(), field);
        } catch (const json::exception &e) {
            throw ParseError(e.what(), field);
        }
    }
    return out;
}

template <typename T>
T get_field(const json &doc, const char *key, T fallback) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        return fallback;
    }
    try {
        return it->get<T>();
    } catch (const json::exception &e) {
        throw ParseError(e.what(), key);
    }
}

GraphSpec parse_graph_spec(const json &item) {
    if (!item.is_object()) {
        throw InputError("graph entry must be an object");
    }
    GraphSpec spec;
    if (auto it = item.find("file"); it != item.end()) {
        spec.file = it->get<std::string>();
        spec.count = 1;
        return spec;
    }
    spec.tag = ClassTag::parse(item.at("class").get<std::string>());
    spec.n = item.at("n").get<int>();
    if (auto it = item.find("seeds"); it != item.end()) {
        spec.seeds = it->get<std::vector<std::uint64_t>>();
        spec.count = static_cast<int>(spec.seeds.size());
    }
    spec.count = item.value("count", spec.count);
    return spec;
}

json graph_spec_to_json(const GraphSpec &spec) {
    if (!spec.file.empty()) {
        return {{"file", spec.file.string()}};
    }
    json out = {{"class", spec.tag.name()}, {"n", spec.n}, {"count", spec.count}};
    if (!spec.seeds.empty()) {
        out["seeds"] = spec.seeds;
    }
    return out;
}

}  // namespace

ExperimentConfig config_from_json(const json &doc) {
    if (!doc.is_object()) {
        throw ParseError("config must be a JSON object", "<document>", 1);
    }
    static const std::set<std::string> kKnown = {"name",         "graphs",     "mode",     "p_start", "p_target",
                                                 "k",            "optimizers", "initializers", "strategies",
                                                 "restarts",     "seed",       "jobs",     "out"};
    for (const auto &[key, value] : doc.items()) {
        if (!kKnown.contains(key)) {
            throw ParseError("unknown config key", key);
        }
    }
    ExperimentConfig config;
    config.name = get_field<std::string>(doc, "name", config.name);
    config.graphs = parse_list<GraphSpec>(doc, "graphs", parse_graph_spec);
    if (auto it = doc.find("mode"); it != doc.end()) {
        auto mode = get_field<std::string>(doc, "mode", "");
        if (mode == "progressive") {
            config.mode = RunMode::kProgressive;
        } else if (mode == "direct") {
            config.mode = RunMode::kDirect;
        } else {
            throw ParseError("mode must be 'progressive' or 'direct'", "mode");
        }
    }
    config.p_start = get_field<int>(doc, "p_start", config.p_start);
    config.p_target = get_field<int>(doc, "p_target", config.p_target);
    config.k_rules = parse_list<KRule>(doc, "k", [](const json &item) {
        return item.is_number_integer() ? KRule::constant(item.get<int>()) : KRule::parse(item.get<std::string>());
    });
    config.optimizers = parse_list<OptimizerKind>(
        doc, "optimizers", [](const json &item) { return parse_optimizer(item.get<std::string>()); });
    config.initializers = parse_list<Initializer>(
        doc, "initializers", [](const json &item) { return parse_initializer(item.get<std::string>()); });
    config.strategies = parse_list<StrategyKind>(
        doc, "strategies", [](const json &item) { return parse_strategy(item.get<std::string>()); });
    config.restarts = get_field<int>(doc, "restarts", config.restarts);
    config.seed = get_field<std::uint64_t>(doc, "seed", config.seed);
    config.jobs = get_field<int>(doc, "jobs", config.jobs);
    config.out_dir = get_field<std::string>(doc, "out", config.out_dir.string());
    return config;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        int line = 1 + static_cast<int>(std::count(text.begin(),
                                                   text.begin() + static_cast<std::ptrdiff_t>(std::min<size_t>(
                                                                      e.byte > 0 ? e.byte - 1 : 0, text.size())),
                                                   '\n'));
        throw ParseError(std::string("malformed config JSON: ") + e.what(), "<document>", line);
    }
    ExperimentConfig config = config_from_json(doc);
    // Relative graph files resolve against the config's directory.
    for (auto &spec : config.graphs) {
        if (!spec.file.empty() && spec.file.is_relative()) {
            spec.file = path.parent_path() / spec.file;
        }
    }
    return config;
}

json config_to_json(const ExperimentConfig &config) {
    json graphs = json::array();
    for (const auto &spec : config.graphs) {
        graphs.push_back(graph_spec_to_json(spec));
    }
    json k = json::array();
    for (const auto &rule : config.k_rules) {
        if (rule.kind() == KRule::Kind::kConstant) {
            k.push_back(rule.resolve(1));
        } else {
            k.push_back(rule.label());
        }
    }
    auto names = [](const auto &items) {
        json out = json::array();
        for (const auto &item : items) {
            out.push_back(std::string(to_string(item)));
        }
        return out;
    };
    json doc = {
        {"name", config.name},
        {"graphs", std::move(graphs)},
        {"p_start", config.p_start},
        {"p_target", config.p_target},
        {"k", std::move(k)},
        {"optimizers", names(config.optimizers)},
        {"initializers", names(config.initializers)},
        {"strategies", names(config.strategies)},
        {"restarts", config.restarts},
        {"seed", config.seed},
        {"jobs", config.jobs},
        {"out", config.out_dir.string()},
    };
    if (config.mode) {
        doc["mode"] = std::string(to_string(*config.mode));
    }
    return doc;
}

void validate_config(const ExperimentConfig &config) {
    auto fail = [](const std::string &why) { throw ConfigError(why); };
    if (config.graphs.empty()) {
        fail("config lists no graphs");
    }
    for (size_t i = 0; i < config.graphs.size(); ++i) {
        const auto &spec = config.graphs[i];
        const std::string where = "graphs[" + std::to_string(i) + "]: ";
        if (!spec.file.empty()) {
            continue;
        }
        if (spec.count < 1) {
            fail(where + "count must be at least 1");
        }
        if (spec.n < 2 || spec.n > kMaxExhaustiveVertices) {
            fail(where + "n must lie in [2, " + std::to_string(kMaxExhaustiveVertices) + "]");
        }
        if (spec.tag.kind == GraphClass::kCustom) {
            fail(where + "generated graphs need a regular-d or erdos-renyi(p) class");
        }
        if (spec.tag.kind == GraphClass::kRegular &&
            (spec.tag.degree >= spec.n || (spec.n * spec.tag.degree) % 2 != 0)) {
            fail(where + "no " + spec.tag.name() + " graph on " + std::to_string(spec.n) + " vertices");
        }
        if (!spec.seeds.empty()) {
            if (static_cast<int>(spec.seeds.size()) != spec.count) {
                fail(where + "seed list length must equal count");
            }
            std::set<std::uint64_t> distinct(spec.seeds.begin(), spec.seeds.end());
            if (distinct.size() != spec.seeds.size()) {
                fail(where + "seeds must be distinct");
            }
        }
    }
    if (config.strategies.empty()) {
        fail("config lists no strategies");
    }
    if (config.optimizers.empty()) {
        fail("config lists no optimizers");
    }
    if (config.p_start < 1 || config.p_target < config.p_start) {
        fail("need 1 <= p_start <= p_target");
    }
    if (config.restarts < 1) {
        fail("restarts must be at least 1");
    }
    if (config.jobs < 1) {
        fail("jobs must be at least 1");
    }
    const bool needs_init = std::any_of(config.strategies.begin(), config.strategies.end(),
                                        [](StrategyKind s) { return s != StrategyKind::kLayerwise; });
    const bool has_itlw =
        std::find(config.strategies.begin(), config.strategies.end(), StrategyKind::kItlw) != config.strategies.end();
    if (has_itlw && config.k_rules.empty()) {
        fail("ITLW requested but no k values given");
    }
    if (needs_init && config.initializers.empty()) {
        fail("config lists no initializers");
    }
    for (Initializer init : config.initializers) {
        RunMode needed = mode_of(init);
        if (config.mode && *config.mode != needed) {
            fail(std::string(to_string(init)) + " initialization requires a " + std::string(to_string(needed)) +
                 " run, but mode is " + std::string(to_string(*config.mode)));
        }
        if (needed == RunMode::kProgressive && config.p_start < 3) {
            fail("bilinear depth-progressive runs need p_start >= 3");
        }
    }
}

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig config;
    config.name = std::string(name);
    config.optimizers = {OptimizerKind::kNelderMead, OptimizerKind::kLbfgsb};
    config.strategies = {StrategyKind::kItlw, StrategyKind::kFullOptimization};
    const std::vector<ClassTag> classes = {
        {GraphClass::kRegular, 3, 0.0},      {GraphClass::kRegular, 4, 0.0},
        {GraphClass::kErdosRenyi, 0, 0.3},   {GraphClass::kErdosRenyi, 0, 0.5},
        {GraphClass::kErdosRenyi, 0, 0.7},
    };
    if (name == "desk") {
        for (const auto &tag : classes) {
            config.graphs.push_back({tag, 10, 2, {}, {}});
        }
        config.mode = RunMode::kProgressive;
        config.initializers = {Initializer::kBilinear};
        config.p_start = 3;
        config.p_target = 8;
        config.k_rules = {KRule::constant(1), KRule::constant(2), KRule::constant(3), KRule::half_p()};
        config.out_dir = "results/desk";
        return config;
    }
    if (name == "paper") {
        // Six graphs per class, spread over n = 10, 11, 12 (3-regular needs even n).
        for (const auto &tag : classes) {
            if (tag.kind == GraphClass::kRegular && tag.degree == 3) {
                config.graphs.push_back({tag, 10, 3, {}, {}});
                config.graphs.push_back({tag, 12, 3, {}, {}});
            } else {
                config.graphs.push_back({tag, 10, 2, {}, {}});
                config.graphs.push_back({tag, 11, 2, {}, {}});
                config.graphs.push_back({tag, 12, 2, {}, {}});
            }
        }
        config.initializers = {Initializer::kBilinear, Initializer::kTqa};
        config.p_start = 3;
        config.p_target = 10;
        config.k_rules = {KRule::constant(1), KRule::constant(2), KRule::constant(3),     KRule::constant(4),
                          KRule::constant(5), KRule::half_p(),    KRule::half_p_minus_one()};
        config.out_dir = "results/paper";
        return config;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected desk or paper)");
}

std::vector<EnsembleGraph> build_ensemble(const ExperimentConfig &config) {
    std::vector<EnsembleGraph> out;
    std::set<std::vector<std::int64_t>> fingerprints;
    for (size_t s = 0; s < config.graphs.size(); ++s) {
        const auto &spec = config.graphs[s];
        if (!spec.file.empty()) {
            Graph g = load_graph(spec.file);
            if (g.num_edges() == 0) {
                throw ConfigError(spec.file.string() + ": graph has no edges");
            }
            std::string id = "g" + std::to_string(out.size()) + "-" + spec.file.stem().string();
            int c_max = max_cut_brute_force(g).c_max;
            fingerprints.insert(graph_fingerprint(g));
            out.push_back({std::move(id), std::move(g), c_max});
            continue;
        }
        const std::string family = spec.tag.name() + "/n" + std::to_string(spec.n);
        for (int i = 0; i < spec.count; ++i) {
            std::uint64_t base = spec.seeds.empty()
                                     ? mix64(fnv1a(family + "#" + std::to_string(i)) ^ mix64(config.seed))
                                     : spec.seeds[static_cast<size_t>(i)];
            bool placed = false;
            for (std::uint64_t attempt = 0; attempt < 1000 && !placed; ++attempt) {
                std::uint64_t seed = attempt == 0 ? base : mix64(base + attempt);
                Graph g = spec.tag.kind == GraphClass::kRegular ? generate_regular(spec.n, spec.tag.degree, seed)
                                                                : generate_erdos_renyi(spec.n, spec.tag.prob, seed);
                if (g.num_edges() == 0 || !fingerprints.insert(graph_fingerprint(g)).second) {
                    continue;
                }
                std::string id = "g" + std::to_string(out.size()) + "-" + spec.tag.name() + "-n" +
                                 std::to_string(spec.n);
                int c_max = max_cut_brute_force(g).c_max;
                out.push_back({std::move(id), std::move(g), c_max});
                placed = true;
            }
            if (!placed) {
                throw ConfigError("could not draw " + std::to_string(spec.count) + " distinct " + family + " graphs");
            }
        }
    }
    return out;
}

}  // namespace itlw
