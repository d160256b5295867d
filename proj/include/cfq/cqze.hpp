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

// Chained quantum Zeno (CQZE) module and the counterfactual CNOT built from
// two of them. Bob's qubit is the control: |0> reflects the photon back from
// the channel, |1> blocks it.
//
// All evolution is literal element-by-element simulation of the unrolled
// module schedule; there is no closed-form shortcut anywhere in here.

#include <array>
#include <complex>
#include <stdexcept>

#include "cfq/optics.hpp"
#include "cfq/qstate.hpp"

namespace cfq {

class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Where the mode-mismatch reflection of a blocking Bob is applied.
enum class BlockErrorPlacement {
    PerInnerCycle,  // every time the photon meets Bob's blocking cavity
    PerOuterCycle,  // only on the first inner cycle of each outer cycle
};

struct ProtocolConfig {
    int M = 10;  // outer cycles
    int N = 20;  // inner cycles per outer cycle
    double eps_reflect = 0.0;  // loss probability per reflection when Bob reflects
    double eps_block = 0.0;    // erroneous-reflection probability when Bob blocks
    int av_rounds = 0;         // extra blocks of N inner cycles behind Alice's block
    BlockErrorPlacement block_placement = BlockErrorPlacement::PerInnerCycle;

    void validate() const;
    bool ideal() const { return eps_reflect == 0.0 && eps_block == 0.0; }
};

struct BobQubit {
    std::complex<double> alpha{1.0, 0.0};  // |0>, reflect
    std::complex<double> beta{0.0, 0.0};   // |1>, block

    /// Throws ConfigError unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
    static BobQubit make(std::complex<double> alpha, std::complex<double> beta);
    void validate() const;
    PolState as_pol() const { return PolState(alpha, beta); }
};

struct CqzeOutcome {
    StateVector joint;  // photon pol x Bob on the exit arm F, sinks included
    double p_loss_DA = 0.0;
    double p_loss_DB = 0.0;
    double p_block = 0.0;  // absorbed by Bob's blocking cavity
    double p_alice = 0.0;  // absorbed by Alice's channel block (AV extension)
    double p_success = 0.0;
};

/// Elements applied to arm C when the photon returns from Bob, per the error
/// model: the |0> branch keeps sqrt(1 - eps_reflect) (the rest is lost to
/// DB); the |1> branch is absorbed except for an erroneous reflection of
/// amplitude sqrt(eps_block).
std::vector<Element> bob_channel_elements(const ProtocolConfig& cfg, bool block_error_active = true);

/// One inner cycle on a state held on the inner feed arm D: SPR2, PBS3 split,
/// Bob's channel, recombination back onto D.
StateVector inner_cycle(const StateVector& s, const ProtocolConfig& cfg);

/// N inner cycles.
StateVector run_inner(const StateVector& s, const ProtocolConfig& cfg);

/// Adds `rounds` Alice-block extensions to a nested layout.
LayoutModifier av_extension(int rounds);
LayoutModifier av_extension(const ProtocolConfig& cfg);

/// Unrolled schedule of one CQZE module: input on S, exit on F, outer exhaust
/// to DA.
CircuitSchedule build_cqze_schedule(const ProtocolConfig& cfg);

/// Runs an arbitrary (possibly unnormalized, possibly entangled) input on S
/// through the module schedule.
CqzeOutcome run_module(const StateVector& input, const ProtocolConfig& cfg);
CqzeOutcome run_module(const StateVector& input, const CircuitSchedule& module);

/// One CQZE module with input polarization `pol_in` (the bare module takes
/// |R>) and Bob's qubit as control.
CqzeOutcome run_cqze(const PolState& pol_in, const BobQubit& bob, const ProtocolConfig& cfg);

/// Response of a module to |R> for each Bob basis state. By linearity this
/// fixes the module's action on every R-rail input.
struct ModuleTransfer {
    ProtocolConfig cfg;
    std::array<PolState, 2> out;  // indexed by Bob 0/1
    std::array<double, 2> p_DA{};
    std::array<double, 2> p_DB{};
    std::array<double, 2> p_block{};
    std::array<double, 2> p_alice{};
};

ModuleTransfer compile_module(const ProtocolConfig& cfg);

/// In-place map of a compiled module on one rail: |rail,R,b> goes to the
/// module's output polarization on the same rail; losses go to the sinks.
/// |rail,L,*> is outside the domain.
LinearMap module_map(const ModuleTransfer& t, Path rail);

/// Acts on Bob's qubit on every live path.
LinearMap bob_gate(const Eigen::Matrix2cd& u);

enum class Port { Port1, Port2, Lost };

struct CnotOutcome {
    StateVector state;  // photon on Port1/Port2, pol x Bob; sinks included
    double p_port1 = 0.0;
    double p_port2 = 0.0;
    double p_lost = 0.0;
    bool port1_z_pending = true;  // Port1 carries a phase flip on the input
};

/// Dual-module counterfactual CNOT acting on a joint (pol x Bob) state on S.
CnotOutcome apply_cnot(const StateVector& joint_on_s, const ModuleTransfer& t);

CnotOutcome counterfactual_cnot(const PolState& pol_in, const BobQubit& bob, const ProtocolConfig& cfg);

/// Joint state of photon polarization and Bob on `p`, with their entanglement
/// entropy in bits (after normalizing the block).
double entanglement_entropy(const StateVector& s, Path p);

}  // namespace cfq
