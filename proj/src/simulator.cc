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

#include "itlw/simulator.h"

#include <cmath>

#include "itlw/errors.h"

namespace itlw {

ParameterVector::ParameterVector(std::vector<double> gammas_in, std::vector<double> betas_in)
    : gammas(std::move(gammas_in)), betas(std::move(betas_in)) {
    if (gammas.size() != betas.size()) {
        throw InputError("gamma and beta sequences must have equal length");
    }
    if (gammas.empty()) {
        throw InputError("depth must be at least 1");
    }
}

std::vector<double> ParameterVector::flat() const {
    std::vector<double> out(gammas);
    out.insert(out.end(), betas.begin(), betas.end());
    return out;
}

ParameterVector ParameterVector::from_flat(std::span<const double> flat) {
    if (flat.empty() || flat.size() % 2 != 0) {
        throw InputError("flat parameter vector must have positive even length");
    }
    const size_t p = flat.size() / 2;
    return ParameterVector(std::vector<double>(flat.begin(), flat.begin() + p),
                           std::vector<double>(flat.begin() + p, flat.end()));
}

bool ParameterVector::in_box() const {
    for (double g : gammas) {
        if (!(g >= 0.0 && g <= kGammaPeriod)) {
            return false;
        }
    }
    for (double b : betas) {
        if (!(b >= 0.0 && b <= kBetaPeriod)) {
            return false;
        }
    }
    return true;
}

double wrap_angle(double angle, double period) {
    double r = std::fmod(angle, period);
    if (r < 0.0) {
        r += period;
    }
    // fmod of a tiny negative value can round up to exactly `period`.
    return r >= period ? 0.0 : r;
}

ParameterVector ParameterVector::wrapped() const {
    ParameterVector out = *this;
    for (double &g : out.gammas) {
        g = wrap_angle(g, kGammaPeriod);
    }
    for (double &b : out.betas) {
        b = wrap_angle(b, kBetaPeriod);
    }
    return out;
}

namespace {

void check_qubits(int n) {
    if (n > kMaxExhaustiveVertices) {
        throw SizeError("statevector simulation refused for " + std::to_string(n) + " qubits (limit " +
                        std::to_string(kMaxExhaustiveVertices) + ")");
    }
}

template <typename T>
std::vector<T> fill_cut_values(const Graph &graph) {
    const int n = graph.num_vertices();
    std::vector<T> values(std::uint64_t{1} << n, 0);
    // Built edge by edge: each edge adds 1 wherever its endpoint bits differ.
    for (const auto &e : graph.edges()) {
        for (std::uint64_t z = 0; z < values.size(); ++z) {
            values[z] += static_cast<T>(((z >> e.u) ^ (z >> e.v)) & 1U);
        }
    }
    return values;
}

}  // namespace

CutTable::CutTable(const Graph &graph) : num_qubits_(graph.num_vertices()), num_edges_(graph.num_edges()) {
    check_qubits(num_qubits_);
    if (num_edges_ <= 0xFF) {
        values_ = fill_cut_values<std::uint8_t>(graph);
    } else {
        values_ = fill_cut_values<std::uint16_t>(graph);
    }
    visit([&](auto values) {
        for (auto v : values) {
            max_value_ = std::max<int>(max_value_, v);
        }
    });
}

std::uint64_t CutTable::size() const noexcept {
    return visit([](auto values) { return static_cast<std::uint64_t>(values.size()); });
}

unsigned CutTable::operator[](std::uint64_t z) const {
    return visit([z](auto values) { return static_cast<unsigned>(values[z]); });
}

CutTable build_cut_table(const Graph &graph) {
    return CutTable(graph);
}

Statevector::Statevector(int num_qubits, std::vector<std::complex<double>> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
}

Statevector Statevector::uniform(int num_qubits) {
    check_qubits(num_qubits);
    const std::uint64_t dim = std::uint64_t{1} << num_qubits;
    return Statevector(num_qubits,
                       std::vector<std::complex<double>>(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
}

void Statevector::reset_uniform() {
    const double a = 1.0 / std::sqrt(static_cast<double>(amplitudes_.size()));
    std::fill(amplitudes_.begin(), amplitudes_.end(), std::complex<double>(a, 0.0));
}

double Statevector::norm_squared() const {
    double total = 0.0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

namespace {

void fill_phases(std::vector<std::complex<double>> &phases, int num_edges, double gamma) {
    phases.resize(static_cast<size_t>(num_edges) + 1);
    for (int c = 0; c <= num_edges; ++c) {
        phases[c] = std::polar(1.0, -gamma * c);
    }
}

void apply_phases(Statevector &state, const CutTable &table, std::span<const std::complex<double>> phases) {
    auto amps = state.amplitudes();
    table.visit([&](auto values) {
        for (size_t z = 0; z < amps.size(); ++z) {
            amps[z] *= phases[values[z]];
        }
    });
}

}  // namespace

void apply_cost_layer(Statevector &state, const CutTable &table, double gamma) {
    std::vector<std::complex<double>> phases;
    fill_phases(phases, table.num_edges(), gamma);
    apply_phases(state, table, phases);
}

void apply_mixer_layer(Statevector &state, double beta) {
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    auto amps = state.amplitudes();
    const size_t dim = amps.size();
    for (int q = 0; q < state.num_qubits(); ++q) {
        const size_t stride = size_t{1} << q;
        for (size_t block = 0; block < dim; block += 2 * stride) {
            for (size_t z = block; z < block + stride; ++z) {
                const auto a = amps[z];
                const auto b = amps[z + stride];
                // (a, b) <- (c a - i s b, -i s a + c b)
                amps[z] = {c * a.real() + s * b.imag(), c * a.imag() - s * b.real()};
                amps[z + stride] = {s * a.imag() + c * b.real(), -s * a.real() + c * b.imag()};
            }
        }
    }
}

double cut_expectation(const Statevector &state, const CutTable &table) {
    auto amps = state.amplitudes();
    return table.visit([&](auto values) {
        double total = 0.0;
        for (size_t z = 0; z < amps.size(); ++z) {
            total += std::norm(amps[z]) * values[z];
        }
        return total;
    });
}

Statevector prepare_ansatz(const Graph &graph, const ParameterVector &params) {
    CutTable table(graph);
    auto state = Statevector::uniform(graph.num_vertices());
    for (int j = 0; j < params.depth(); ++j) {
        apply_cost_layer(state, table, params.gammas[j]);
        apply_mixer_layer(state, params.betas[j]);
    }
    return state;
}

double expectation(const Graph &graph, const ParameterVector &params) {
    QaoaSimulator sim(graph);
    return sim.expectation(params);
}

QaoaSimulator::QaoaSimulator(const Graph &graph)
    : graph_(graph), table_(graph), state_(Statevector::uniform(graph.num_vertices())) {
}

double QaoaSimulator::expectation(const ParameterVector &params) {
    return expectation(std::span<const double>(params.flat()));
}

double QaoaSimulator::expectation(std::span<const double> flat) {
    if (flat.empty() || flat.size() % 2 != 0) {
        throw InputError("flat parameter vector must have positive even length");
    }
    const size_t p = flat.size() / 2;
    state_.reset_uniform();
    for (size_t j = 0; j < p; ++j) {
        fill_phases(phases_, table_.num_edges(), flat[j]);
        apply_phases(state_, table_, phases_);
        apply_mixer_layer(state_, flat[p + j]);
    }
    return cut_expectation(state_, table_);
}

}  // namespace itlw
