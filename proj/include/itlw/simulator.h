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

#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

#include "itlw/graph.h"

namespace itlw {

/// Upper ends of the periodic parameter box: gamma in [0, pi), beta in [0, pi/2).
inline constexpr double kGammaPeriod = std::numbers::pi;
inline constexpr double kBetaPeriod = std::numbers::pi / 2;

/// QAOA angles for a depth-p circuit. The flat layout used by optimizers is
/// (gamma_1..gamma_p, beta_1..beta_p).
struct ParameterVector {
    std::vector<double> gammas;
    std::vector<double> betas;

    ParameterVector() = default;
    ParameterVector(std::vector<double> gammas, std::vector<double> betas);

    int depth() const noexcept {
        return static_cast<int>(gammas.size());
    }

    std::vector<double> flat() const;
    static ParameterVector from_flat(std::span<const double> flat);

    /// Flat index of gamma_l / beta_l for a 1-based layer l.
    int gamma_slot(int layer) const noexcept {
        return layer - 1;
    }
    int beta_slot(int layer) const noexcept {
        return depth() + layer - 1;
    }

    /// Within [0, pi] x [0, pi/2] (closed; optimizers may touch the upper face).
    bool in_box() const;

    /// gamma mod pi, beta mod pi/2, each landing in the half-open range.
    ParameterVector wrapped() const;

    bool operator==(const ParameterVector &) const = default;
};

/// Reduces an angle into [0, period).
double wrap_angle(double angle, double period);

/// Diagonal of the Max-Cut cost operator: entry z is the cut value of basis
/// state z. Stored as 8-bit entries when |E| fits, 16-bit otherwise.
class CutTable {
   public:
    explicit CutTable(const Graph &graph);

    std::uint64_t size() const noexcept;
    int num_qubits() const noexcept {
        return num_qubits_;
    }
    int num_edges() const noexcept {
        return num_edges_;
    }
    int max_value() const noexcept {
        return max_value_;
    }
    unsigned operator[](std::uint64_t z) const;

    /// Calls fn with the underlying span<const uint8_t> or span<const uint16_t>.
    template <typename Fn>
    decltype(auto) visit(Fn &&fn) const {
        return std::visit([&](const auto &values) { return fn(std::span(values)); }, values_);
    }

   private:
    std::variant<std::vector<std::uint8_t>, std::vector<std::uint16_t>> values_;
    int num_qubits_;
    int num_edges_;
    int max_value_ = 0;
};

CutTable build_cut_table(const Graph &graph);

class Statevector {
   public:
    /// |+>^n, every amplitude 2^(-n/2).
    static Statevector uniform(int num_qubits);

    int num_qubits() const noexcept {
        return num_qubits_;
    }
    std::span<std::complex<double>> amplitudes() noexcept {
        return amplitudes_;
    }
    std::span<const std::complex<double>> amplitudes() const noexcept {
        return amplitudes_;
    }
    double norm_squared() const;

    void reset_uniform();

   private:
    Statevector(int num_qubits, std::vector<std::complex<double>> amplitudes);

    int num_qubits_;
    std::vector<std::complex<double>> amplitudes_;
};

/// amplitude_z *= exp(-i * gamma * cut(z)).
void apply_cost_layer(Statevector &state, const CutTable &table, double gamma);

/// exp(-i * beta * X) on every qubit.
void apply_mixer_layer(Statevector &state, double beta);

/// sum_z |amplitude_z|^2 * cut(z).
double cut_expectation(const Statevector &state, const CutTable &table);

Statevector prepare_ansatz(const Graph &graph, const ParameterVector &params);
double expectation(const Graph &graph, const ParameterVector &params);

/// Reusable evaluation context for one graph: owns the cut table and a
/// scratch state. Not safe to share between concurrent optimizations.
class QaoaSimulator {
   public:
    explicit QaoaSimulator(const Graph &graph);

    const Graph &graph() const noexcept {
        return graph_;
    }
    const CutTable &cut_table() const noexcept {
        return table_;
    }

    double expectation(const ParameterVector &params);

    /// Flat (gammas..., betas...) layout; size must be even and nonzero.
    double expectation(std::span<const double> flat);

    /// State left behind by the most recent evaluation.
    const Statevector &state() const noexcept {
        return state_;
    }

   private:
    Graph graph_;
    CutTable table_;
    Statevector state_;
    std::vector<std::complex<double>> phases_;
};

}  // namespace itlw
