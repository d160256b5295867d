// Copyright 2026 The cfq Authors
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

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cfq/cqze.hpp"

namespace cfq {

/// Bob's qubit carried to Alice's photon by two counterfactual CNOT rounds.
struct CounterportResult {
    StateVector after_round1;  // photon on Port1, entangled with Bob
    StateVector after_local;   // after the Hadamards on photon and Bob
    StateVector after_round2;  // photon on Port1/Port2 after the second CNOT
    StateVector final_state;   // after Bob's Hadamard, port Hadamards, Port1 NOT
    Eigen::Matrix2cd rho_port1 = Eigen::Matrix2cd::Zero();  // normalized; zero if empty
    Eigen::Matrix2cd rho_port2 = Eigen::Matrix2cd::Zero();
    double p_port1 = 0.0;
    double p_port2 = 0.0;
    double p_lost = 0.0;
    double fidelity = 0.0;               // loss-inclusive: lost photons score 0
    double fidelity_postselected = 0.0;  // conditioned on the photon arriving
};

/// Precompiled protocol for one configuration; reusable across qubits.
class Counterporter {
   public:
    explicit Counterporter(const ProtocolConfig& cfg);
    explicit Counterporter(ModuleTransfer transfer);

    CounterportResult run(const BobQubit& bob) const;
    const ModuleTransfer& transfer() const { return transfer_; }

   private:
    ModuleTransfer transfer_;
    LinearMap round1_module_;
    Element to_port1_;
    Element back_to_s_;
    Element had_port1_;
    Element had_port2_;
    Element not_port1_;
    LinearMap bob_hadamard_;
};

CounterportResult counterport(const BobQubit& bob, const ProtocolConfig& cfg);

enum class SampleScheme { Fibonacci, SeededUniform };

std::string_view name(SampleScheme s);
std::optional<SampleScheme> parse_sample_scheme(std::string_view s);

struct BlochSample {
    std::vector<BobQubit> qubits;
    SampleScheme scheme = SampleScheme::Fibonacci;
    std::uint64_t seed = 0;

    std::size_t count() const { return qubits.size(); }
};

/// Deterministic point set on the Bloch sphere. The Fibonacci lattice runs
/// from the |0> pole to the |1> pole; the seeded scheme draws uniformly.
BlochSample sample_bloch(int count, SampleScheme scheme = SampleScheme::Fibonacci, std::uint64_t seed = 0);

/// Smallest great-circle angle between any two sample points.
double min_angular_separation(const BlochSample& s);

enum class FidelityMode { LossInclusive, PostSelected };

std::string_view name(FidelityMode m);
std::optional<FidelityMode> parse_fidelity_mode(std::string_view s);

struct GridCell {
    int M = 0;
    int N = 0;
    double avg_fidelity = 0.0;
    double avg_success_prob = 0.0;
};

struct FidelityGrid {
    int m_min = 1, m_max = 1, n_min = 1, n_max = 1;
    FidelityMode mode = FidelityMode::LossInclusive;
    std::vector<GridCell> cells;  // M-major, then N

    const GridCell& cell(int M, int N) const;
};

struct SweepRange {
    int lo = 1;
    int hi = 1;
};

struct SweepOptions {
    FidelityMode mode = FidelityMode::LossInclusive;
    unsigned workers = 1;
};

/// Average fidelity and success probability per (M, N) cell. Cells run
/// independently; each average is a pairwise sum in sample order, so results
/// do not depend on the worker count.
FidelityGrid sweep(SweepRange m, SweepRange n, const ProtocolConfig& tmpl, const BlochSample& sample,
                   const SweepOptions& opts = {});
FidelityGrid sweep(int M_max, int N_max, const ProtocolConfig& tmpl, const BlochSample& sample,
                   const SweepOptions& opts = {});

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> xs);

struct SampleAverage {
    double fidelity = 0.0;
    double fidelity_postselected = 0.0;
    double success = 0.0;
};

SampleAverage average_over(const Counterporter& engine, const BlochSample& sample);

}  // namespace cfq
