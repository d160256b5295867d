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

#include "cfq/histories.hpp"

#include <cmath>
#include <sstream>

#include "cfq/schedule_io.hpp"

namespace cfq {

Projector ArmEvent::projector() const {
    if (pol) return Projector::on({arm}, {*pol});
    return Projector::path(arm);
}

std::string ArmEvent::to_string() const {
    std::string s(name(arm));
    if (pol) s += ":" + std::string(name(*pol));
    return s;
}

std::optional<ArmEvent> parse_arm_event(std::string_view s) {
    const auto colon = s.find(':');
    auto arm = parse_path(s.substr(0, colon));
    if (!arm || is_sink(*arm)) return std::nullopt;
    ArmEvent e{*arm, std::nullopt};
    if (colon != std::string_view::npos) {
        auto pol = parse_pol(s.substr(colon + 1));
        if (!pol) return std::nullopt;
        e.pol = *pol;
    }
    return e;
}

std::string History::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < events.size(); ++i) s += (i ? " " : "") + events[i].to_string() + "@" + times[i];
    return s;
}

void HistoryFamily::validate(const CircuitSchedule& c) const {
    if (slots.empty()) throw FamilyError("family " + name + " has no slots");
    std::size_t prev;
    try {
        prev = c.require_stamp(pre_time);
        for (const auto& slot : slots) {
            const std::size_t t = c.require_stamp(slot.time);
            if (t <= prev) throw FamilyError("slot times must increase strictly after " + pre_time);
            prev = t;
        }
        if (c.require_stamp(post_time) <= prev) throw FamilyError("post-selection must come after every slot");
    } catch (const ScheduleError& e) {
        throw FamilyError(e.what());
    }
    for (const auto& slot : slots) {
        if (slot.options.empty()) throw FamilyError("slot at " + slot.time + " offers no projectors");
        for (std::size_t i = 0; i < slot.options.size(); ++i)
            for (std::size_t j = i + 1; j < slot.options.size(); ++j)
                if (!(slot.options[i].projector() & slot.options[j].projector()).empty())
                    throw FamilyError("projectors at " + slot.time + " are not mutually orthogonal");
    }
}

std::vector<History> HistoryFamily::histories() const {
    std::vector<History> out{History{}};
    for (const auto& slot : slots) {
        std::vector<History> next;
        next.reserve(out.size() * slot.options.size());
        for (const auto& h : out) {
            for (const auto& opt : slot.options) {
                History g = h;
                g.times.push_back(slot.time);
                g.events.push_back(opt);
                next.push_back(std::move(g));
            }
        }
        out = std::move(next);
    }
    return out;
}

StateVector chain_ket(const History& h, const HistoryFamily& f, const CircuitSchedule& c) {
    std::size_t at = c.require_stamp(f.pre_time);
    StateVector s = StateVector::basis(f.pre);
    for (std::size_t i = 0; i < h.events.size(); ++i) {
        const std::size_t t = c.require_stamp(h.times[i]);
        s = h.events[i].projector().apply(evolve(c, s, at, t).live_part());
        at = t;
    }
    return f.post.projector().apply(evolve(c, s, at, c.require_stamp(f.post_time)).live_part());
}

namespace {

std::vector<StateVector> all_chain_kets(const HistoryFamily& f, const CircuitSchedule& c,
                                        const std::vector<History>& hs) {
    f.validate(c);
    std::vector<StateVector> kets;
    kets.reserve(hs.size());
    for (const auto& h : hs) kets.push_back(chain_ket(h, f, c));
    return kets;
}

ConsistencyReport consistency_of(const std::vector<StateVector>& kets) {
    ConsistencyReport r;
    for (std::size_t i = 0; i < kets.size(); ++i) {
        for (std::size_t j = i + 1; j < kets.size(); ++j) {
            const double overlap = std::abs(inner(kets[i], kets[j]));
            r.worst_overlap = std::max(r.worst_overlap, overlap);
            if (overlap >= kConsistencyTolerance) r.offending.emplace_back(i, j);
        }
    }
    r.consistent = r.offending.empty();
    return r;
}

}  // namespace

ConsistencyReport is_consistent(const HistoryFamily& f, const CircuitSchedule& c) {
    return consistency_of(all_chain_kets(f, c, f.histories()));
}

std::vector<double> history_probabilities(const HistoryFamily& f, const CircuitSchedule& c) {
    const auto kets = all_chain_kets(f, c, f.histories());
    if (!consistency_of(kets).consistent) throw InconsistentFamily("family " + f.name + " is not consistent");
    std::vector<double> p;
    double total = 0.0;
    for (const auto& k : kets) {
        p.push_back(k.norm_squared());
        total += p.back();
    }
    if (total <= 0.0) throw FamilyError("family " + f.name + " has zero total weight");
    for (double& x : p) x /= total;
    return p;
}

double history_probability(const History& h, const HistoryFamily& f, const CircuitSchedule& c) {
    const auto hs = f.histories();
    const auto p = history_probabilities(f, c);
    for (std::size_t i = 0; i < hs.size(); ++i)
        if (hs[i].times == h.times && hs[i].events == h.events) return p[i];
    throw FamilyError("history " + h.to_string() + " is not in family " + f.name);
}

namespace {

std::vector<HistorySlot> cycle_slots(const CircuitSchedule& c, int outer) {
    auto on = [](Path p) { return ArmEvent{p, std::nullopt}; };
    std::vector<HistorySlot> slots;
    for (const auto& step : c.steps()) {
        if (step.outer != outer) continue;
        if (step.role == StepRole::OuterSplit) slots.push_back({step.label, {on(Path::A), on(Path::D)}});
        if (step.role == StepRole::InnerCycle) slots.push_back({step.label, {on(Path::A), on(Path::B), on(Path::C)}});
    }
    if (slots.empty()) throw FamilyError("schedule has no outer cycle " + std::to_string(outer));
    return slots;
}

}  // namespace

HistoryFamily builtin_family(int number, const CircuitSchedule& c) {
    HistoryFamily f;
    f.name = "family-" + std::to_string(number);
    const ArmEvent sh{Path::S, Pol::H};
    const ArmEvent fh{Path::F, Pol::H};
    switch (number) {
        case 7:
        case 8: {
            const int m = number - 7;
            f.slots = cycle_slots(c, m);
            f.pre_time = cycle_label(m, 0);
            for (const auto& step : c.steps())
                if (step.role == StepRole::OuterMerge && step.outer == m) f.post_time = step.label;
            f.post = sh;
            break;
        }
        case 9:
        case 10:
            f.slots = cycle_slots(c, number == 9 ? 1 : 0);
            f.pre_time = c.origin();
            f.post_time = "t_final";
            f.post = fh;
            break;
        default: throw FamilyError("built-in families are 7, 8, 9 and 10");
    }
    f.validate(c);
    return f;
}

void write_family(std::ostream& out, const HistoryFamily& f) {
    out << "family v1\n";
    out << "name " << f.name << "\n";
    out << "pre " << f.pre_time << " " << name(f.pre.path) << " " << name(f.pre.pol) << " " << name(f.pre.bob) << "\n";
    out << "post " << f.post_time << " " << f.post.to_string() << "\n";
    for (const auto& slot : f.slots) {
        out << "slot " << slot.time;
        for (const auto& o : slot.options) out << " " << o.to_string();
        out << "\n";
    }
    out << "end\n";
}

std::string to_text(const HistoryFamily& f) {
    std::ostringstream os;
    write_family(os, f);
    return os.str();
}

HistoryFamily read_family(std::istream& in) {
    HistoryFamily f;
    std::string line;
    int lineno = 0;
    bool header = false, ended = false, have_pre = false, have_post = false;
    auto fail = [&](const std::string& msg) { return FormatError("line " + std::to_string(lineno) + ": " + msg); };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream is(line);
        std::string key;
        if (!(is >> key)) continue;
        if (ended) throw fail("content after 'end'");
        if (!header) {
            std::string version;
            is >> version;
            if (key != "family" || version != "v1") throw FormatError("missing 'family v1' header");
            header = true;
            continue;
        }
        if (key == "name") {
            if (!(is >> f.name)) throw fail("name needs a value");
        } else if (key == "pre") {
            std::string p, pol, bob;
            if (!(is >> f.pre_time >> p >> pol >> bob)) throw fail("pre needs TIME PATH POL BOB");
            auto path = parse_path(p);
            auto parsed_pol = parse_pol(pol);
            if (!path || !parsed_pol) throw fail("bad pre label");
            Bob b;
            if (bob == "0") b = Bob::Zero;
            else if (bob == "1") b = Bob::One;
            else if (bob == "-") b = Bob::Absent;
            else throw fail("bad bob token '" + bob + "'");
            f.pre = {*path, *parsed_pol, b};
            have_pre = true;
        } else if (key == "post") {
            std::string ev;
            if (!(is >> f.post_time >> ev)) throw fail("post needs TIME EVENT");
            auto e = parse_arm_event(ev);
            if (!e) throw fail("bad post event '" + ev + "'");
            f.post = *e;
            have_post = true;
        } else if (key == "slot") {
            HistorySlot slot;
            if (!(is >> slot.time)) throw fail("slot needs a time");
            std::string ev;
            while (is >> ev) {
                auto e = parse_arm_event(ev);
                if (!e) throw fail("bad event '" + ev + "'");
                slot.options.push_back(*e);
            }
            f.slots.push_back(std::move(slot));
        } else if (key == "end") {
            ended = true;
        } else {
            throw fail("unknown record '" + key + "'");
        }
    }
    if (!header) throw FormatError("missing 'family v1' header");
    if (!ended) throw FormatError("missing 'end'");
    if (!have_pre || !have_post) throw FormatError("family needs both pre and post records");
    return f;
}

HistoryFamily family_from_text(const std::string& text) {
    std::istringstream is(text);
    return read_family(is);
}

}  // namespace cfq
