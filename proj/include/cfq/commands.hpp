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

// The five experiment subcommands, callable without the argument parser.

#include <exception>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfq/io.hpp"

namespace cfq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitConservation = 3;

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct ProtocolOptions {
    int M = 10;
    int N = 20;
    double eps_reflect = 0.10;
    double eps_block = 0.05;
    bool ideal = false;  // forces both error rates to zero
    int av_rounds = 0;
    BlockErrorPlacement placement = BlockErrorPlacement::PerInnerCycle;

    ProtocolConfig config() const;
};

struct SweepConfig {
    int m_min = 1, m_max = 20;
    int n_min = 1, n_max = 20;
    ProtocolOptions protocol;
    int samples = 100;
    SampleScheme scheme = SampleScheme::Fibonacci;
    std::uint64_t seed = 0;
    FidelityMode mode = FidelityMode::LossInclusive;
    unsigned workers = 1;
    std::string out_dir = ".";
    std::string prefix = "sweep";
};

/// Writes <out_dir>/<prefix>.{csv,json,svg}.
FidelityGrid cmd_sweep(const SweepConfig& cfg);

struct CounterportConfig {
    ProtocolOptions protocol;
    double alpha_re = 1.0, alpha_im = 0.0;
    double beta_re = 0.0, beta_im = 0.0;
    std::string out = "-";  // "-" is stdout
};

Json cmd_counterport(const CounterportConfig& cfg, std::ostream& stdout_stream);

struct ParadoxConfig {
    int M = 2;
    int N = 2;
    int av_rounds = 0;
    double epsilon = 1e-3;
    std::string out = "paradox.json";
};

/// Prints the table to `stdout_stream` and writes the JSON report.
ParadoxReport cmd_paradox(const ParadoxConfig& cfg, std::ostream& stdout_stream);

struct WeakValuesConfig {
    int M = 2;
    int N = 2;
    int av_rounds = 0;
    std::string boundary = "end-to-end";  // end-to-end, end-to-end-detector, per-cycle
    int cycle = 0;                        // outer cycle for per-cycle boundaries
    std::string out = "-";
};

WeakTraceMap cmd_weakvalues(const WeakValuesConfig& cfg, std::ostream& stdout_stream);

struct HistoriesConfig {
    int M = 2;
    int N = 2;
    int av_rounds = 0;
    std::vector<int> families{7, 8, 9, 10};
    std::string family_file;  // replaces the built-in list when set
    std::string out = "-";
};

Json cmd_histories(const HistoriesConfig& cfg, std::ostream& stdout_stream);

/// Maps an exception to an exit code and prints its message to `err`.
int exit_code_for(std::exception_ptr e, std::ostream& err);

/// Parses arguments, runs one subcommand, and maps failures to exit codes.
int run_cli(int argc, char** argv);

}  // namespace cfq
