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

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfq/qstate.hpp"

namespace cfq {

enum class ElementKind { HWP, SPR, PBS, BS50, PockelsFlip, Hadamard, Mirror, Loss, Block, Sink };

std::string_view name(ElementKind k);
std::optional<ElementKind> parse_element_kind(std::string_view s);

/// One optical element with its compiled map. Copies share the map.
///
/// Arm conventions by kind:
///   HWP, SPR, PockelsFlip, Hadamard: {arm}
///   PBS: {in, transmit_h, reflect_v} or {in1, in2, out1, out2}, where in1
///        sends H to out1 and V to out2, and in2 sends V to out1, H to out2
///   BS50: {in1, in2, sum, diff}; diff carries (in1 - in2)/sqrt(2)
///   Mirror: {from, to}
///   Loss, Block, Sink: {arm}; `sink` names the absorbing detector
struct Element {
    ElementKind kind = ElementKind::Mirror;
    std::vector<Path> arms;
    double angle = 0.0;         // HWP, SPR: polarization rotation angle
    double transmission = 1.0;  // Loss: amplitude kept
    Path sink = Path::SinkD3;
    std::optional<Bob> bob;     // Loss/Block: only this Bob branch
    std::shared_ptr<const LinearMap> map;

    StateVector apply(const StateVector& s) const { return map->apply(s); }
};

/// Rotation by `angle` in the (H, V) == (R, L) plane:
/// H -> cos H + sin V, V -> cos V - sin H.
Element spr(double angle, Path arm = Path::S);
/// Half-wave plate modeled as the same polarization rotator as `spr`; the
/// argument is the rotation angle (twice the physical axis angle).
Element hwp(double angle, Path arm = Path::S);
Element pbs(Path in, Path transmit_h, Path reflect_v);
Element pbs(Path in1, Path in2, Path out1, Path out2);
Element bs50(Path in1, Path in2, Path sum, Path diff);
Element pockels_flip(Path arm);
Element hadamard(Path arm);
Element mirror(Path from, Path to);
Element loss(Path arm, double transmission, Path sink, std::optional<Bob> bob = std::nullopt);
Element block(Path arm, Path sink = Path::SinkBlock, std::optional<Bob> bob = std::nullopt);
Element sink(Path arm, Path target);

/// Rebuilds an element from its serialized description.
Element make_element(ElementKind kind, std::vector<Path> arms, double angle, double transmission, Path sink,
                     std::optional<Bob> bob);

/// Polarization rotator matrix shared by `spr` and `hwp`.
PolState rotate(const PolState& pol, double angle);

enum class StepRole { Origin, Idle, OuterSplit, InnerCycle, OuterMerge, Exit, Other };
std::string_view name(StepRole r);
std::optional<StepRole> parse_step_role(std::string_view s);

struct TimeStep {
    std::string label;
    std::vector<Element> elements;
    StepRole role = StepRole::Other;
    int outer = -1;  // outer cycle index, -1 outside any cycle
    int inner = -1;  // inner cycle index within the outer cycle
};

class ScheduleError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Any closed evolution step that does not conserve total probability.
class ConservationBreach : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kConservationTolerance = 1e-12;

/// Ordered timeline of element applications. The state at a step's label is
/// the state after that step's elements; the origin label names the input.
class CircuitSchedule {
   public:
    CircuitSchedule() = default;
    CircuitSchedule(std::string origin, std::vector<TimeStep> steps, StateVector pre = {},
                    std::optional<Projector> post = std::nullopt);

    const std::string& origin() const { return origin_; }
    const std::vector<TimeStep>& steps() const { return steps_; }
    const StateVector& pre() const { return pre_; }
    const std::optional<Projector>& post() const { return post_; }

    /// Number of time-stamps, origin included.
    std::size_t size() const { return steps_.size() + 1; }
    const std::string& label(std::size_t stamp) const;
    std::vector<std::string> labels() const;
    std::optional<std::size_t> stamp_of(std::string_view label) const;
    std::size_t require_stamp(std::string_view label) const;

   private:
    std::string origin_ = "t0";
    std::vector<TimeStep> steps_;
    StateVector pre_;
    std::optional<Projector> post_;
};

struct TrajectoryRecord {
    std::vector<std::string> labels;
    std::vector<StateVector> states;

    const StateVector& at(std::string_view label) const;
    const StateVector& final() const { return states.back(); }
};

/// Full state at every time-stamp. Throws ConservationBreach if the total
/// probability drifts from the input's by more than 1e-12 at any stamp.
TrajectoryRecord run_schedule(const CircuitSchedule& c, const StateVector& input);

/// Forward evolution from stamp `from` to stamp `to` (from <= to).
StateVector evolve(const CircuitSchedule& c, const StateVector& s, std::size_t from, std::size_t to);

/// Adjoint (backward) evolution from stamp `from` back to stamp `to` (to <= from).
StateVector evolve_adjoint(const CircuitSchedule& c, const StateVector& s, std::size_t from, std::size_t to);

/// Largest deviation from orthonormality of the schedule's live evolution
/// restricted to `columns`, each pushed through the whole schedule. Sinks keep
/// weights, not phases, so overlaps are exact only for columns that never
/// reach a sink; column norms are exact either way.
double isometry_defect(const CircuitSchedule& c, const std::vector<BasisLabel>& columns);

/// Label of stamp `index` in outer cycle `outer`: t0, t'0, t''0, ...
std::string cycle_label(int outer, int index);

/// Description of a nested Mach-Zehnder ladder: `outer_cycles` outer
/// interferometers, each wrapping `inner_cycles` inner ones, unrolled in
/// time. Arm roles: S source/return, A outer arm, D inner feed, B inner
/// (Alice-side) arm, C the channel toward Bob, J outer exhaust, F exit.
struct NestedLayout {
    int outer_cycles = 2;
    int inner_cycles = 2;
    /// Extra blocks of inner cycles, each preceded by Alice blocking the
    /// channel entrance.
    int av_rounds = 0;
    ElementKind rotator = ElementKind::HWP;
    Path exhaust_sink = Path::SinkD3;
    /// Elements applied to arm C as the photon returns from Bob's side after
    /// inner cycle `inner` (1-based) of outer cycle `outer` (0-based). Unset
    /// means an open channel and a perfect mirror.
    std::function<std::vector<Element>(int outer, int inner)> bob_action;
};

using LayoutModifier = std::function<void(NestedLayout&)>;

CircuitSchedule build_nested_interferometer(const NestedLayout& layout);

/// Two-level nested interferometer of the paradox: source |S,H> at t0, D3
/// exhausts, D0 detection on arm F. Rejects M < 1 or N < 1.
CircuitSchedule build_paradox_circuit(int M, int N, int av_rounds = 0);

}  // namespace cfq
