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

// Line-oriented text form of a CircuitSchedule. See docs/formats.md.
//
//   schedule v1
//   origin t0
//   pre S H - 1 0            # path pol bob re im, one line per amplitude
//   post F H -               # one line per projector label (optional)
//   stamp t1 role=outer-split outer=0 inner=-1
//   element kind=HWP arms=S angle=0.39269908169872414
//   element kind=PBS arms=S,A,D
//   end

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cfq/optics.hpp"

namespace cfq {

class FormatError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

void write_schedule(std::ostream& out, const CircuitSchedule& c);
std::string to_text(const CircuitSchedule& c);

CircuitSchedule read_schedule(std::istream& in);
CircuitSchedule schedule_from_text(const std::string& text);

}  // namespace cfq
