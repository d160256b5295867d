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

// Consistent histories over a circuit schedule.
//
// A family fixes a pre-selected state, a post-selection projector, and a set
// of mutually orthogonal projectors at each of several intermediate times.
// Its histories are the cartesian product of those sets.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfq/optics.hpp"

namespace cfq {

class InconsistentFamily : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class FamilyError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// An arm, optionally restricted to one polarization (unset: identity).
struct ArmEvent {
    Path arm = Path::S;
    std::optional<Pol> pol;

    Projector projector() const;
    std::string to_string() const;  // "A", "S:H"
    friend bool operator==(const ArmEvent&, const ArmEvent&) = default;
};

std::optional<ArmEvent> parse_arm_event(std::string_view s);

struct HistorySlot {
    std::string time;
    std::vector<ArmEvent> options;
};

struct History {
    std::vector<std::string> times;
    std::vector<ArmEvent> events;

    std::string to_string() const;  // "D@t1 C@t2 B@t3"
};

struct HistoryFamily {
    std::string name;
    std::string pre_time;
    BasisLabel pre{Path::S, Pol::H, Bob::Absent};
    std::string post_time;
    ArmEvent post;
    std::vector<HistorySlot> slots;

    /// Throws FamilyError when a slot is empty, times are not strictly
    /// increasing inside (pre_time, post_time), or options overlap.
    void validate(const CircuitSchedule& c) const;
    std::vector<History> histories() const;
};

/// post * T * P_k * T ... P_1 * T |pre>, unnormalized.
StateVector chain_ket(const History& h, const HistoryFamily& f, const CircuitSchedule& c);

inline constexpr double kConsistencyTolerance = 1e-10;

struct ConsistencyReport {
    bool consistent = true;
    std::vector<std::pair<std::size_t, std::size_t>> offending;  // history indices
    double worst_overlap = 0.0;
};

ConsistencyReport is_consistent(const HistoryFamily& f, const CircuitSchedule& c);

/// Normalized probability of `h` within `f`. Throws InconsistentFamily.
double history_probability(const History& h, const HistoryFamily& f, const CircuitSchedule& c);

/// Probabilities of every history in family order. Throws InconsistentFamily.
std::vector<double> history_probabilities(const HistoryFamily& f, const CircuitSchedule& c);

/// The four families of the nested-interferometer analysis:
///   7: first outer cycle, |S,H> to |S,H>
///   8: second outer cycle, |S,H> to |S,H>
///   9: source to F,H with slots in the second outer cycle
///   10: source to F,H with slots in the first outer cycle
/// Slots are {A, D} at the split and {A, B, C} at every inner stamp.
HistoryFamily builtin_family(int number, const CircuitSchedule& c);

void write_family(std::ostream& out, const HistoryFamily& f);
std::string to_text(const HistoryFamily& f);
HistoryFamily read_family(std::istream& in);
HistoryFamily family_from_text(const std::string& text);

}  // namespace cfq
