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

#include "cfq/optics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <set>

namespace cfq {

namespace {

using Entry = LinearMap::Entry;
using Route = LinearMap::Route;

constexpr std::array<Bob, 3> kBobs = {Bob::Zero, Bob::One, Bob::Absent};
constexpr std::array<Pol, 2> kPols = {Pol::H, Pol::V};

// 2x2 polarization gate on one arm, every Bob branch.
std::shared_ptr<const LinearMap> pol_gate(Path arm, const Eigen::Matrix2cd& u) {
    std::vector<Entry> entries;
    for (Bob b : kBobs)
        for (int from = 0; from < 2; ++from)
            for (int to = 0; to < 2; ++to)
                if (u(to, from) != std::complex<double>(0))
                    entries.push_back({{arm, kPols[from], b}, {arm, kPols[to], b}, u(to, from)});
    LabelSet defined;
    for (Bob b : kBobs)
        for (Pol p : kPols) defined.set(index_of({arm, p, b}));
    return std::make_shared<const LinearMap>(LinearMap::unitary(entries, defined));
}

// Product of disjoint transpositions (path, pol) <-> (path, pol), every Bob
// branch.
std::shared_ptr<const LinearMap> swaps(const std::vector<std::pair<std::pair<Path, Pol>, std::pair<Path, Pol>>>& pairs) {
    std::vector<Entry> entries;
    LabelSet defined;
    for (const auto& [x, y] : pairs) {
        for (Bob b : kBobs) {
            const BasisLabel lx{x.first, x.second, b};
            const BasisLabel ly{y.first, y.second, b};
            if (defined.test(index_of(lx)) || defined.test(index_of(ly)))
                throw ScheduleError("element routes a label twice");
            defined.set(index_of(lx));
            defined.set(index_of(ly));
            entries.push_back({lx, ly, 1.0});
            entries.push_back({ly, lx, 1.0});
        }
    }
    return std::make_shared<const LinearMap>(LinearMap::unitary(entries, defined));
}

void require_live(Path p) {
    if (is_sink(p)) throw ScheduleError("element arm " + std::string(name(p)) + " is a sink");
}

void require_distinct(const std::vector<Path>& arms) {
    std::set<Path> seen(arms.begin(), arms.end());
    if (seen.size() != arms.size()) throw ScheduleError("element arms must be distinct");
    for (Path p : arms) require_live(p);
}

Element rotator(ElementKind kind, double angle, Path arm) {
    require_live(arm);
    Eigen::Matrix2cd u;
    u << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    Element e;
    e.kind = kind;
    e.arms = {arm};
    e.angle = angle;
    e.map = pol_gate(arm, u);
    return e;
}

}  // namespace

std::string_view name(ElementKind k) {
    switch (k) {
        case ElementKind::HWP: return "HWP";
        case ElementKind::SPR: return "SPR";
        case ElementKind::PBS: return "PBS";
        case ElementKind::BS50: return "BS50";
        case ElementKind::PockelsFlip: return "PockelsFlip";
        case ElementKind::Hadamard: return "Hadamard";
        case ElementKind::Mirror: return "Mirror";
        case ElementKind::Loss: return "Loss";
        case ElementKind::Block: return "Block";
        case ElementKind::Sink: return "Sink";
    }
    return "?";
}

std::optional<ElementKind> parse_element_kind(std::string_view s) {
    for (ElementKind k : {ElementKind::HWP, ElementKind::SPR, ElementKind::PBS, ElementKind::BS50,
                          ElementKind::PockelsFlip, ElementKind::Hadamard, ElementKind::Mirror, ElementKind::Loss,
                          ElementKind::Block, ElementKind::Sink})
        if (name(k) == s) return k;
    return std::nullopt;
}

PolState rotate(const PolState& pol, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return PolState(c * pol(0) - s * pol(1), s * pol(0) + c * pol(1));
}

Element spr(double angle, Path arm) { return rotator(ElementKind::SPR, angle, arm); }
Element hwp(double angle, Path arm) { return rotator(ElementKind::HWP, angle, arm); }

Element pbs(Path in, Path transmit_h, Path reflect_v) {
    require_distinct({in, transmit_h, reflect_v});
    Element e;
    e.kind = ElementKind::PBS;
    e.arms = {in, transmit_h, reflect_v};
    e.map = swaps({{{in, Pol::H}, {transmit_h, Pol::H}}, {{in, Pol::V}, {reflect_v, Pol::V}}});
    return e;
}

Element pbs(Path in1, Path in2, Path out1, Path out2) {
    require_distinct({in1, in2, out1, out2});
    Element e;
    e.kind = ElementKind::PBS;
    e.arms = {in1, in2, out1, out2};
    e.map = swaps({{{in1, Pol::H}, {out1, Pol::H}},
                   {{in1, Pol::V}, {out2, Pol::V}},
                   {{in2, Pol::V}, {out1, Pol::V}},
                   {{in2, Pol::H}, {out2, Pol::H}}});
    return e;
}

Element bs50(Path in1, Path in2, Path sum, Path diff) {
    require_distinct({in1, in2, sum, diff});
    const double r = std::numbers::sqrt2 / 2;
    std::vector<Entry> entries;
    LabelSet defined;
    for (Bob b : kBobs) {
        for (Pol p : kPols) {
            const BasisLabel i1{in1, p, b}, i2{in2, p, b}, s{sum, p, b}, d{diff, p, b};
            for (const auto& l : {i1, i2, s, d}) defined.set(index_of(l));
            entries.push_back({i1, s, r});
            entries.push_back({i1, d, r});
            entries.push_back({i2, s, r});
            entries.push_back({i2, d, -r});
            // Reverse direction completes the map to a unitary.
            entries.push_back({s, i1, r});
            entries.push_back({s, i2, r});
            entries.push_back({d, i1, r});
            entries.push_back({d, i2, -r});
        }
    }
    Element e;
    e.kind = ElementKind::BS50;
    e.arms = {in1, in2, sum, diff};
    e.map = std::make_shared<const LinearMap>(LinearMap::unitary(entries, defined));
    return e;
}

Element pockels_flip(Path arm) {
    require_live(arm);
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    Element e;
    e.kind = ElementKind::PockelsFlip;
    e.arms = {arm};
    e.map = pol_gate(arm, x);
    return e;
}

Element hadamard(Path arm) {
    require_live(arm);
    const double r = std::numbers::sqrt2 / 2;
    Eigen::Matrix2cd h;
    h << r, r, r, -r;
    Element e;
    e.kind = ElementKind::Hadamard;
    e.arms = {arm};
    e.map = pol_gate(arm, h);
    return e;
}

Element mirror(Path from, Path to) {
    require_distinct({from, to});
    Element e;
    e.kind = ElementKind::Mirror;
    e.arms = {from, to};
    e.map = swaps({{{from, Pol::H}, {to, Pol::H}}, {{from, Pol::V}, {to, Pol::V}}});
    return e;
}

Element loss(Path arm, double transmission, Path sink_path, std::optional<Bob> bob) {
    require_live(arm);
    if (!is_sink(sink_path)) throw ScheduleError("loss must end on a sink path");
    if (!(transmission >= 0.0 && transmission <= 1.0)) throw ScheduleError("transmission must lie in [0, 1]");
    const double lost = std::sqrt(std::max(0.0, 1.0 - transmission * transmission));
    std::vector<Entry> entries;
    std::vector<Route> routes;
    LabelSet defined;
    for (Bob b : kBobs) {
        if (bob && *bob != b) continue;
        for (Pol p : kPols) {
            const BasisLabel l{arm, p, b};
            defined.set(index_of(l));
            if (transmission > 0.0) entries.push_back({l, l, transmission});
            if (lost > 0.0) routes.push_back({l, sink_path, lost});
        }
    }
    Element e;
    e.kind = ElementKind::Loss;
    e.arms = {arm};
    e.transmission = transmission;
    e.sink = sink_path;
    e.bob = bob;
    e.map = std::make_shared<const LinearMap>(routes.empty() ? LinearMap::unitary(entries, defined)
                                                             : LinearMap::lossy(entries, routes, defined));
    return e;
}

Element block(Path arm, Path sink_path, std::optional<Bob> bob) {
    Element e = loss(arm, 0.0, sink_path, bob);
    e.kind = ElementKind::Block;
    return e;
}

Element sink(Path arm, Path target) {
    Element e = loss(arm, 0.0, target, std::nullopt);
    e.kind = ElementKind::Sink;
    return e;
}

Element make_element(ElementKind kind, std::vector<Path> arms, double angle, double transmission, Path sink_path,
                     std::optional<Bob> bob) {
    auto need = [&](std::size_t n) {
        if (arms.size() != n)
            throw ScheduleError(std::string(name(kind)) + " expects " + std::to_string(n) + " arms");
    };
    switch (kind) {
        case ElementKind::HWP: need(1); return hwp(angle, arms[0]);
        case ElementKind::SPR: need(1); return spr(angle, arms[0]);
        case ElementKind::PBS:
            if (arms.size() == 3) return pbs(arms[0], arms[1], arms[2]);
            need(4);
            return pbs(arms[0], arms[1], arms[2], arms[3]);
        case ElementKind::BS50: need(4); return bs50(arms[0], arms[1], arms[2], arms[3]);
        case ElementKind::PockelsFlip: need(1); return pockels_flip(arms[0]);
        case ElementKind::Hadamard: need(1); return hadamard(arms[0]);
        case ElementKind::Mirror: need(2); return mirror(arms[0], arms[1]);
        case ElementKind::Loss: need(1); return loss(arms[0], transmission, sink_path, bob);
        case ElementKind::Block: need(1); return block(arms[0], sink_path, bob);
        case ElementKind::Sink: need(1); return sink(arms[0], sink_path);
    }
    throw ScheduleError("unknown element kind");
}

std::string_view name(StepRole r) {
    switch (r) {
        case StepRole::Origin: return "origin";
        case StepRole::Idle: return "idle";
        case StepRole::OuterSplit: return "outer-split";
        case StepRole::InnerCycle: return "inner-cycle";
        case StepRole::OuterMerge: return "outer-merge";
        case StepRole::Exit: return "exit";
        case StepRole::Other: return "other";
    }
    return "?";
}

std::optional<StepRole> parse_step_role(std::string_view s) {
    for (StepRole r : {StepRole::Origin, StepRole::Idle, StepRole::OuterSplit, StepRole::InnerCycle,
                       StepRole::OuterMerge, StepRole::Exit, StepRole::Other})
        if (name(r) == s) return r;
    return std::nullopt;
}

CircuitSchedule::CircuitSchedule(std::string origin, std::vector<TimeStep> steps, StateVector pre,
                                 std::optional<Projector> post)
    : origin_(std::move(origin)), steps_(std::move(steps)), pre_(std::move(pre)), post_(std::move(post)) {
    std::set<std::string> seen{origin_};
    for (const auto& step : steps_) {
        if (step.label.empty()) throw ScheduleError("empty time-stamp label");
        if (!seen.insert(step.label).second) throw ScheduleError("duplicate time-stamp label " + step.label);
        for (const auto& e : step.elements)
            if (!e.map) throw ScheduleError("element without a compiled map at " + step.label);
    }
}

const std::string& CircuitSchedule::label(std::size_t stamp) const {
    if (stamp == 0) return origin_;
    if (stamp > steps_.size()) throw ScheduleError("time-stamp index out of range");
    return steps_[stamp - 1].label;
}

std::vector<std::string> CircuitSchedule::labels() const {
    std::vector<std::string> out{origin_};
    for (const auto& s : steps_) out.push_back(s.label);
    return out;
}

std::optional<std::size_t> CircuitSchedule::stamp_of(std::string_view label) const {
    if (label == origin_) return 0;
    for (std::size_t i = 0; i < steps_.size(); ++i)
        if (steps_[i].label == label) return i + 1;
    return std::nullopt;
}

std::size_t CircuitSchedule::require_stamp(std::string_view label) const {
    auto s = stamp_of(label);
    if (!s) throw ScheduleError("time-stamp " + std::string(label) + " is not in the schedule");
    return *s;
}

const StateVector& TrajectoryRecord::at(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return states[i];
    throw ScheduleError("time-stamp " + std::string(label) + " is not in the trajectory");
}

namespace {

void check_conservation(double expected, const StateVector& s, const std::string& label) {
    const double got = s.norm_squared();
    if (std::abs(got - expected) > kConservationTolerance)
        throw ConservationBreach("total probability " + std::to_string(got) + " at " + label + " differs from " +
                                 std::to_string(expected));
}

}  // namespace

TrajectoryRecord run_schedule(const CircuitSchedule& c, const StateVector& input) {
    TrajectoryRecord rec;
    rec.labels.reserve(c.size());
    rec.states.reserve(c.size());
    rec.labels.push_back(c.origin());
    rec.states.push_back(input);
    const double expected = input.norm_squared();
    StateVector s = input;
    for (const auto& step : c.steps()) {
        for (const auto& e : step.elements) s = e.apply(s);
        check_conservation(expected, s, step.label);
        rec.labels.push_back(step.label);
        rec.states.push_back(s);
    }
    return rec;
}

StateVector evolve(const CircuitSchedule& c, const StateVector& input, std::size_t from, std::size_t to) {
    if (from > to || to >= c.size()) throw ScheduleError("forward evolution needs from <= to within the schedule");
    const double expected = input.norm_squared();
    StateVector s = input;
    for (std::size_t k = from; k < to; ++k) {
        const auto& step = c.steps()[k];
        for (const auto& e : step.elements) s = e.apply(s);
        check_conservation(expected, s, step.label);
    }
    return s;
}

StateVector evolve_adjoint(const CircuitSchedule& c, const StateVector& input, std::size_t from, std::size_t to) {
    if (to > from || from >= c.size()) throw ScheduleError("backward evolution needs to <= from within the schedule");
    StateVector s = input.live_part();
    for (std::size_t k = from; k > to; --k) {
        const auto& elements = c.steps()[k - 1].elements;
        for (auto it = elements.rbegin(); it != elements.rend(); ++it) s = it->map->apply_adjoint(s);
    }
    return s;
}

double isometry_defect(const CircuitSchedule& c, const std::vector<BasisLabel>& columns) {
    std::vector<StateVector> out;
    out.reserve(columns.size());
    for (const auto& l : columns) out.push_back(evolve(c, StateVector::basis(l), 0, c.size() - 1));
    double worst = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = 0; j < out.size(); ++j) {
            // Sink weights count toward each column's norm but never toward
            // overlaps between distinct columns.
            const std::complex<double> g = i == j ? std::complex<double>(out[i].norm_squared())
                                                  : inner(out[i].live_part(), out[j].live_part());
            worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

std::string cycle_label(int outer, int index) {
    return "t" + std::string(static_cast<std::size_t>(outer), '\'') + std::to_string(index);
}

CircuitSchedule build_nested_interferometer(const NestedLayout& layout) {
    if (layout.outer_cycles < 1) throw ScheduleError("outer cycle count must be at least 1");
    if (layout.inner_cycles < 1) throw ScheduleError("inner cycle count must be at least 1");
    if (layout.av_rounds < 0) throw ScheduleError("av_rounds must be non-negative");
    if (layout.rotator != ElementKind::HWP && layout.rotator != ElementKind::SPR)
        throw ScheduleError("rotator must be HWP or SPR");

    const double outer_angle = std::numbers::pi / (2.0 * layout.outer_cycles);
    const double inner_angle = std::numbers::pi / (2.0 * layout.inner_cycles);
    const Element outer_rot = rotator(layout.rotator, outer_angle, Path::S);
    const Element inner_rot = rotator(layout.rotator, inner_angle, Path::D);
    const Element outer_split = pbs(Path::S, Path::A, Path::D);
    const Element inner_split = pbs(Path::D, Path::C, Path::B);  // also the inner merge
    const Element outer_merge = pbs(Path::A, Path::D, Path::S, Path::J);
    const Element exhaust = sink(Path::J, layout.exhaust_sink);
    const Element alice_block = block(Path::C, Path::SinkAlice);

    const int inner_total = layout.inner_cycles * (1 + layout.av_rounds);
    auto returning = [&](std::vector<Element>& out, int outer, int inner) {
        if (layout.bob_action) {
            auto extra = layout.bob_action(outer, inner);
            out.insert(out.end(), extra.begin(), extra.end());
        }
    };

    std::vector<TimeStep> steps;
    steps.reserve(static_cast<std::size_t>(layout.outer_cycles) * (inner_total + 3) + 1);
    for (int m = 0; m < layout.outer_cycles; ++m) {
        if (m > 0) steps.push_back({cycle_label(m, 0), {}, StepRole::Idle, m, -1});
        steps.push_back({cycle_label(m, 1), {outer_rot, outer_split}, StepRole::OuterSplit, m, -1});
        for (int k = 1; k <= inner_total; ++k) {
            TimeStep step{cycle_label(m, k + 1), {}, StepRole::InnerCycle, m, k};
            if (k > 1) {
                returning(step.elements, m, k - 1);
                step.elements.push_back(inner_split);
            }
            step.elements.push_back(inner_rot);
            step.elements.push_back(inner_split);
            // Alice closes the channel entrance right after the rotation that
            // ends each block of inner cycles, except the last block.
            if (k % layout.inner_cycles == 0 && k < inner_total) step.elements.push_back(alice_block);
            steps.push_back(std::move(step));
        }
        TimeStep merge{cycle_label(m, inner_total + 2), {}, StepRole::OuterMerge, m, -1};
        returning(merge.elements, m, inner_total);
        merge.elements.push_back(inner_split);
        merge.elements.push_back(outer_merge);
        merge.elements.push_back(exhaust);
        steps.push_back(std::move(merge));
    }
    steps.push_back({"t_final", {mirror(Path::S, Path::F)}, StepRole::Exit, -1, -1});
    return CircuitSchedule("t0", std::move(steps), StateVector::basis({Path::S, Pol::H, Bob::Absent}),
                           Projector::path(Path::F));
}

CircuitSchedule build_paradox_circuit(int M, int N, int av_rounds) {
    if (M < 1 || N < 1) throw ScheduleError("paradox circuit needs M >= 1 and N >= 1");
    NestedLayout layout;
    layout.outer_cycles = M;
    layout.inner_cycles = N;
    layout.av_rounds = av_rounds;
    layout.rotator = ElementKind::HWP;
    layout.exhaust_sink = Path::SinkD3;
    return build_nested_interferometer(layout);
}

}  // namespace cfq
