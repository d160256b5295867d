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

// Writers and matching readers for every file the command-line tool emits.
// Numbers are printed with 17 significant digits so reads are exact.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "cfq/counterport.hpp"
#include "cfq/histories.hpp"
#include "cfq/weak.hpp"

namespace cfq {

using Json = nlohmann::ordered_json;

/// Columns: M,N,avg_fidelity,avg_success_prob.
void write_grid_csv(std::ostream& out, const FidelityGrid& g);
FidelityGrid read_grid_csv(std::istream& in);

Json grid_to_json(const FidelityGrid& g);
FidelityGrid grid_from_json(const Json& j);

/// Heatmap: one rect per cell carrying its values as data attributes, a
/// linear color ramp with a legend, axis labels, and the 2/3 contour drawn
/// along cell edges.
void write_grid_svg(std::ostream& out, const FidelityGrid& g);
/// Rebuilds the grid from the data attributes of a heatmap.
FidelityGrid read_grid_svg(std::istream& in);

inline constexpr double kClassicalLimit = 2.0 / 3.0;

/// Columns: time,arm,re,im,status with status "ok" or "orthogonal".
void write_weak_csv(std::ostream& out, const WeakTraceMap& m);
WeakTraceMap read_weak_csv(std::istream& in);

Json complex_to_json(std::complex<double> z);
std::complex<double> complex_from_json(const Json& j);

Json paradox_to_json(const ParadoxReport& r);
ParadoxReport paradox_from_json(const Json& j);
/// Plain-text table of the same report.
std::string paradox_table(const ParadoxReport& r);

Json state_to_json(const StateVector& s);
StateVector state_from_json(const Json& j);

Json counterport_to_json(const BobQubit& bob, const ProtocolConfig& cfg, const CounterportResult& r);

Json histories_to_json(const HistoryFamily& f, const CircuitSchedule& c);

}  // namespace cfq
