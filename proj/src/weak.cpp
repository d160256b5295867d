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

#include "cfq/weak.hpp"

#include <cmath>

namespace cfq {

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kOrthogonalTolerance = 1e-12;

void require_normalized(const StateVector& s, const char* what) {
    if (std::abs(s.norm_squared() - 1.0) > kNormTolerance)
        throw std::invalid_argument(std::string(what) + " state must be normalized");
}

// Pointer branches: psi[0] carries pointer |0>, psi[1] pointer |1>.
struct Branches {
    StateVector psi[2];
};

// Rotation of the pointer by epsilon, conditioned on the photon being in pi.
void couple(Branches& b, const Projector& pi, double epsilon) {
    const double c = std::cos(epsilon), s = std::sin(epsilon);
    const StateVector p0 = pi.apply(b.psi[0]);
    const StateVector p1 = pi.apply(b.psi[1]);
    b.psi[0] = b.psi[0] - (1.0 - c) * p0 - s * p1;
    b.psi[1] = b.psi[1] - (1.0 - c) * p1 + s * p0;
}

// <psi_j| P |psi_i> restricted to the post-selection.
std::complex<double> post_overlap(const BoundaryPair& b, const StateVector& post_live, const StateVector& i,
                                  const StateVector& j) {
    if (const auto* p = std::get_if<Projector>(&b.post)) return inner(p->apply(j.live_part()), p->apply(i.live_part()));
    return std::conj(inner(post_live, j)) * inner(post_live, i);
}

double pointer_signal(const CircuitSchedule& c, const BoundaryPair& b, const std::vector<std::size_t>& stamps,
                      const Projector& pi, double epsilon) {
    b.validate(c);
    const std::size_t from = c.require_stamp(b.pre_time);
    const std::size_t to = c.require_stamp(b.post_time);
    Branches br{{b.pre, StateVector{}}};
    std::size_t at = from;
    for (std::size_t t : stamps) {
        br.psi[0] = evolve(c, br.psi[0], at, t);
        br.psi[1] = evolve(c, br.psi[1], at, t);
        couple(br, pi, epsilon);
        at = t;
    }
    br.psi[0] = evolve(c, br.psi[0], at, to);
    br.psi[1] = evolve(c, br.psi[1], at, to);

    const StateVector post = std::holds_alternative<StateVector>(b.post) ? std::get<StateVector>(b.post) : StateVector{};
    const double r00 = post_overlap(b, post, br.psi[0], br.psi[0]).real();
    const double r11 = post_overlap(b, post, br.psi[1], br.psi[1]).real();
    const std::complex<double> r01 = post_overlap(b, post, br.psi[0], br.psi[1]);
    const double total = r00 + r11;
    if (total < kOrthogonalTolerance) throw OrthogonalBoundaries("post-selection never succeeds");
    return r01.real() / total;
}

}  // namespace

void BoundaryPair::validate(const CircuitSchedule& c) const {
    const std::size_t from = c.require_stamp(pre_time);
    const std::size_t to = c.require_stamp(post_time);
    if (from >= to) throw ScheduleError("pre-selection must come strictly before post-selection");
    require_normalized(pre, "pre-selected");
    if (const auto* s = std::get_if<StateVector>(&post)) require_normalized(*s, "post-selected");
}

BoundaryPair end_to_end(const CircuitSchedule& c) {
    return {c.origin(), c.pre(), "t_final", StateVector::basis({Path::F, Pol::H, Bob::Absent})};
}

BoundaryPair end_to_end_detector(const CircuitSchedule& c) {
    return {c.origin(), c.pre(), "t_final", c.post().value_or(Projector::path(Path::F))};
}

std::string cycle_end_label(const CircuitSchedule& c, int outer) {
    for (const auto& step : c.steps())
        if (step.role == StepRole::OuterMerge && step.outer == outer) return step.label;
    throw ScheduleError("schedule has no outer cycle " + std::to_string(outer));
}

BoundaryPair per_cycle(const CircuitSchedule& c, int outer, Bob bob) {
    const StateVector sh = StateVector::basis({Path::S, Pol::H, bob});
    return {cycle_label(outer, 0), sh, cycle_end_label(c, outer), sh};
}

StateVector forward_state(const CircuitSchedule& c, std::string_view pre_time, const StateVector& pre,
                          std::string_view t) {
    return evolve(c, pre, c.require_stamp(pre_time), c.require_stamp(t));
}

StateVector backward_state(const CircuitSchedule& c, std::string_view post_time, const StateVector& post,
                           std::string_view t) {
    return evolve_adjoint(c, post, c.require_stamp(post_time), c.require_stamp(t));
}

StateVector post_state(const CircuitSchedule& c, const BoundaryPair& b) {
    if (const auto* s = std::get_if<StateVector>(&b.post)) return *s;
    const StateVector arrived =
        std::get<Projector>(b.post).apply(forward_state(c, b.pre_time, b.pre, b.post_time).live_part());
    if (arrived.norm_squared() < kOrthogonalTolerance * kOrthogonalTolerance)
        throw OrthogonalBoundaries("no amplitude reaches the post-selection");
    return arrived.normalized();
}

std::complex<double> weak_value(const Projector& pi, const BoundaryPair& b, std::string_view t,
                                const CircuitSchedule& c) {
    b.validate(c);
    const std::size_t k = c.require_stamp(t);
    if (k < c.require_stamp(b.pre_time) || k > c.require_stamp(b.post_time))
        throw ScheduleError("time-stamp " + std::string(t) + " lies outside the boundaries");
    const StateVector fwd = forward_state(c, b.pre_time, b.pre, t);
    const StateVector back = backward_state(c, b.post_time, post_state(c, b), t);
    const std::complex<double> den = inner(back, fwd);
    if (std::abs(den) < kOrthogonalTolerance)
        throw OrthogonalBoundaries("forward and backward states are orthogonal at " + std::string(t));
    return inner(back, pi.apply(fwd)) / den;
}

std::vector<Path> interferometer_arms() { return {Path::S, Path::A, Path::B, Path::C, Path::D, Path::J, Path::F}; }

const WeakCell& WeakTraceMap::at(Path arm, std::string_view time) const {
    for (const auto& cell : cells)
        if (cell.arm == arm && cell.time == time) return cell;
    throw std::out_of_range("no weak-trace cell for " + std::string(name(arm)) + " at " + std::string(time));
}

WeakTraceMap weak_trace_map(const CircuitSchedule& c, const BoundaryPair& b, const std::vector<Path>& arms) {
    b.validate(c);
    WeakTraceMap map;
    map.arms = arms;
    const std::size_t from = c.require_stamp(b.pre_time);
    const std::size_t to = c.require_stamp(b.post_time);
    std::optional<StateVector> post;
    try {
        post = post_state(c, b);
    } catch (const OrthogonalBoundaries&) {
    }
    StateVector fwd = b.pre;
    for (std::size_t k = from; k <= to; ++k) {
        if (k > from) fwd = evolve(c, fwd, k - 1, k);
        const std::string& t = c.label(k);
        map.times.push_back(t);
        std::optional<StateVector> back;
        std::complex<double> den = 0.0;
        if (post) {
            back = evolve_adjoint(c, *post, to, k);
            den = inner(*back, fwd);
        }
        for (Path arm : arms) {
            WeakCell cell{arm, t, std::nullopt};
            if (back && std::abs(den) >= kOrthogonalTolerance)
                cell.value = inner(*back, Projector::path(arm).apply(fwd)) / den;
            map.cells.push_back(std::move(cell));
        }
    }
    return map;
}

double simulate_weak_probe(const CircuitSchedule& c, const BoundaryPair& b, Path arm, std::string_view t,
                           double epsilon) {
    const std::size_t k = c.require_stamp(t);
    if (k < c.require_stamp(b.pre_time) || k > c.require_stamp(b.post_time))
        throw ScheduleError("time-stamp " + std::string(t) + " lies outside the boundaries");
    return pointer_signal(c, b, {k}, Projector::path(arm), epsilon);
}

double simulate_channel_probe(const CircuitSchedule& c, const BoundaryPair& b, Path arm, double epsilon) {
    std::vector<std::size_t> stamps;
    for (std::size_t k = c.require_stamp(b.pre_time) + 1; k < c.require_stamp(b.post_time); ++k) stamps.push_back(k);
    return pointer_signal(c, b, stamps, Projector::path(arm), epsilon);
}

const ParadoxRow& ParadoxReport::row(std::string_view boundary, Path arm, std::string_view time) const {
    for (const auto& r : rows)
        if (r.boundary == boundary && r.arm == arm && r.time == time) return r;
    throw std::out_of_range("no paradox row " + std::string(boundary) + " " + std::string(name(arm)) + " " +
                            std::string(time));
}

ParadoxReport paradox_report(int M, int N, int av_rounds, double epsilon) {
    const CircuitSchedule c = build_paradox_circuit(M, N, av_rounds);
    ParadoxReport report;
    report.M = M;
    report.N = N;
    report.av_rounds = av_rounds;
    report.epsilon = epsilon;

    auto add = [&](std::string boundary, const BoundaryPair& b, Path arm, const std::string& t) {
        ParadoxRow row{std::move(boundary), arm, t, std::nullopt, 0.0};
        try {
            row.weak_value = weak_value(Projector::path(arm), b, t, c);
        } catch (const OrthogonalBoundaries&) {
        }
        row.probe_signal = simulate_weak_probe(c, b, arm, t, epsilon);
        report.rows.push_back(std::move(row));
    };

    const BoundaryPair e2e = end_to_end(c);
    const BoundaryPair detector = end_to_end_detector(c);
    add("end-to-end", e2e, Path::S, c.origin());
    for (int m = 0; m < M; ++m) {
        const std::string t = cycle_label(m, 2);
        add("end-to-end", e2e, Path::C, t);
        add("end-to-end-detector", detector, Path::C, t);
        add("per-cycle", per_cycle(c, m), Path::C, t);
    }
    report.channel_signal = simulate_channel_probe(c, e2e, Path::C, epsilon);
    return report;
}

}  // namespace cfq
