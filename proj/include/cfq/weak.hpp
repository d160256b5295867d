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

// Two-state vector analysis: forward and backward states, weak values, and a
// two-level pointer probe that measures them.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cfq/optics.hpp"

namespace cfq {

/// The forward and backward states are orthogonal at every time-stamp, so a
/// weak value does not exist.
class OrthogonalBoundaries : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Pre-selection at one stamp and post-selection at a later one. The post
/// side is either a normalized state or a detector projector; a projector P
/// acts as the state P|forward(post_time)>, which gives the same weak values.
struct BoundaryPair {
    std::string pre_time;
    StateVector pre;
    std::string post_time;
    std::variant<StateVector, Projector> post;

    /// Throws ScheduleError on bad stamps or ordering, std::invalid_argument
    /// on unnormalized states.
    void validate(const CircuitSchedule& c) const;
};

/// Source state at the origin to |F,H> at t_final.
BoundaryPair end_to_end(const CircuitSchedule& c);
/// Source state at the origin to any photon on F at t_final.
BoundaryPair end_to_end_detector(const CircuitSchedule& c);
/// |S,H> at the start of outer cycle `outer` (0-based) to |S,H> at its end.
BoundaryPair per_cycle(const CircuitSchedule& c, int outer, Bob bob = Bob::Absent);

/// Last stamp of outer cycle `outer`.
std::string cycle_end_label(const CircuitSchedule& c, int outer);

StateVector forward_state(const CircuitSchedule& c, std::string_view pre_time, const StateVector& pre,
                          std::string_view t);
StateVector backward_state(const CircuitSchedule& c, std::string_view post_time, const StateVector& post,
                           std::string_view t);

/// Post-selected state as seen from its own time-stamp.
StateVector post_state(const CircuitSchedule& c, const BoundaryPair& b);

std::complex<double> weak_value(const Projector& pi, const BoundaryPair& b, std::string_view t,
                                const CircuitSchedule& c);

/// Default arm set for surveys: every live arm the nested layout uses.
std::vector<Path> interferometer_arms();

struct WeakCell {
    Path arm;
    std::string time;
    std::optional<std::complex<double>> value;  // empty: orthogonal boundaries
};

struct WeakTraceMap {
    std::vector<Path> arms;
    std::vector<std::string> times;  // pre_time .. post_time
    std::vector<WeakCell> cells;     // time-major, then arm

    const WeakCell& at(Path arm, std::string_view time) const;
};

WeakTraceMap weak_trace_map(const CircuitSchedule& c, const BoundaryPair& b,
                            const std::vector<Path>& arms = interferometer_arms());

/// Pointer signal for a two-level probe rotated by `epsilon` whenever the
/// photon is on `arm` at stamp `t`, conditioned on the post-selection. To
/// first order it equals epsilon * Re(weak value).
double simulate_weak_probe(const CircuitSchedule& c, const BoundaryPair& b, Path arm, std::string_view t,
                           double epsilon);

/// Same pointer, coupled at every stamp strictly between the boundaries.
/// First order: epsilon * sum over stamps of Re(weak value).
double simulate_channel_probe(const CircuitSchedule& c, const BoundaryPair& b, Path arm, double epsilon);

struct ParadoxRow {
    std::string boundary;  // "end-to-end", "end-to-end-detector", "per-cycle"
    Path arm = Path::C;
    std::string time;
    std::optional<std::complex<double>> weak_value;
    double probe_signal = 0.0;
};

struct ParadoxReport {
    int M = 2;
    int N = 2;
    int av_rounds = 0;
    double epsilon = 1e-3;
    std::vector<ParadoxRow> rows;
    double channel_signal = 0.0;  // end-to-end, arm C, every stamp

    const ParadoxRow& row(std::string_view boundary, Path arm, std::string_view time) const;
};

ParadoxReport paradox_report(int M = 2, int N = 2, int av_rounds = 0, double epsilon = 1e-3);

}  // namespace cfq
