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

#include "cfq/counterport.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace cfq {

namespace {

Eigen::Matrix2cd hadamard_matrix() {
    const double r = std::numbers::sqrt2 / 2;
    Eigen::Matrix2cd h;
    h << r, r, r, -r;
    return h;
}

Eigen::Matrix2cd reduced_pol(const StateVector& s, Path p) {
    const auto blk = s.block(p);
    Eigen::Matrix2cd psi;
    psi << blk(0, 0), blk(0, 1), blk(1, 0), blk(1, 1);
    const double n = psi.squaredNorm();
    if (n == 0.0) return Eigen::Matrix2cd::Zero();
    return psi * psi.adjoint() / n;
}

void check(double expected, const StateVector& s, const char* where) {
    if (std::abs(s.norm_squared() - expected) > kConservationTolerance)
        throw ConservationBreach(std::string("counterportation breaks probability conservation ") + where);
}

}  // namespace

Counterporter::Counterporter(const ProtocolConfig& cfg) : Counterporter(compile_module(cfg)) {}

Counterporter::Counterporter(ModuleTransfer transfer)
    : transfer_(std::move(transfer)),
      round1_module_(module_map(transfer_, Path::S)),
      to_port1_(mirror(Path::S, Path::Port1)),
      back_to_s_(mirror(Path::Port1, Path::S)),
      had_port1_(hadamard(Path::Port1)),
      had_port2_(hadamard(Path::Port2)),
      not_port1_(pockels_flip(Path::Port1)),
      bob_hadamard_(bob_gate(hadamard_matrix())) {}

CounterportResult Counterporter::run(const BobQubit& bob) const {
    bob.validate();
    CounterportResult r;
    StateVector s{{{Path::S, kR, Bob::Zero}, bob.alpha}, {{Path::S, kR, Bob::One}, bob.beta}};

    // Round 1: the R photon only meets the first module, then goes to Port1.
    s = round1_module_.apply(s);
    s = to_port1_.apply(s);
    check(1.0, s, "in round 1");
    r.after_round1 = s;

    s = had_port1_.apply(s);
    s = bob_hadamard_.apply(s);
    r.after_local = s;

    // Round 2: back into PBS1, full dual-module gate.
    s = back_to_s_.apply(s);
    CnotOutcome cnot = apply_cnot(s, transfer_);
    s = cnot.state;
    r.after_round2 = s;

    s = bob_hadamard_.apply(s);
    s = had_port1_.apply(s);
    s = had_port2_.apply(s);
    if (cnot.port1_z_pending) s = not_port1_.apply(s);
    check(1.0, s, "after the corrections");
    r.final_state = s;

    r.p_port1 = s.path_weight(Path::Port1);
    r.p_port2 = s.path_weight(Path::Port2);
    r.p_lost = 1.0 - r.p_port1 - r.p_port2;
    r.rho_port1 = reduced_pol(s, Path::Port1);
    r.rho_port2 = reduced_pol(s, Path::Port2);
    r.fidelity = fidelity(bob.as_pol(), s, {Path::Port1, Path::Port2});
    const double arrived = r.p_port1 + r.p_port2;
    r.fidelity_postselected = arrived > 0.0 ? r.fidelity / arrived : 0.0;
    return r;
}

CounterportResult counterport(const BobQubit& bob, const ProtocolConfig& cfg) {
    bob.validate();
    return Counterporter(cfg).run(bob);
}

std::string_view name(SampleScheme s) { return s == SampleScheme::Fibonacci ? "fibonacci" : "seeded-uniform"; }

std::optional<SampleScheme> parse_sample_scheme(std::string_view s) {
    if (s == "fibonacci") return SampleScheme::Fibonacci;
    if (s == "seeded-uniform") return SampleScheme::SeededUniform;
    return std::nullopt;
}

std::string_view name(FidelityMode m) { return m == FidelityMode::LossInclusive ? "loss-inclusive" : "post-selected"; }

std::optional<FidelityMode> parse_fidelity_mode(std::string_view s) {
    if (s == "loss-inclusive") return FidelityMode::LossInclusive;
    if (s == "post-selected") return FidelityMode::PostSelected;
    return std::nullopt;
}

namespace {

BobQubit from_bloch(double z, double phi) {
    z = std::clamp(z, -1.0, 1.0);
    const double theta = std::acos(z);
    return BobQubit{std::complex<double>(std::cos(theta / 2), 0.0), std::polar(std::sin(theta / 2), phi)};
}

Eigen::Vector3d bloch_vector(const BobQubit& q) {
    const std::complex<double> c = std::conj(q.alpha) * q.beta;
    return {2.0 * c.real(), 2.0 * c.imag(), std::norm(q.alpha) - std::norm(q.beta)};
}

}  // namespace

BlochSample sample_bloch(int count, SampleScheme scheme, std::uint64_t seed) {
    if (count < 1) throw ConfigError("sample count must be at least 1");
    BlochSample out;
    out.scheme = scheme;
    out.seed = seed;
    out.qubits.reserve(static_cast<std::size_t>(count));
    if (scheme == SampleScheme::Fibonacci) {
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < count; ++i) {
            const double z = count == 1 ? 1.0 : 1.0 - 2.0 * i / (count - 1);
            out.qubits.push_back(from_bloch(z, golden * i));
        }
    } else {
        std::mt19937_64 rng(seed);
        // 53-bit mantissa draw; the engine's output sequence is fixed by the
        // standard, unlike the distribution classes.
        auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        for (int i = 0; i < count; ++i) {
            const double z = 1.0 - 2.0 * unit();
            const double phi = 2.0 * std::numbers::pi * unit();
            out.qubits.push_back(from_bloch(z, phi));
        }
    }
    for (auto& q : out.qubits) q.validate();
    return out;
}

double min_angular_separation(const BlochSample& s) {
    double best = std::numbers::pi;
    for (std::size_t i = 0; i < s.qubits.size(); ++i) {
        const Eigen::Vector3d a = bloch_vector(s.qubits[i]);
        for (std::size_t j = i + 1; j < s.qubits.size(); ++j) {
            const double c = std::clamp(a.dot(bloch_vector(s.qubits[j])), -1.0, 1.0);
            best = std::min(best, std::acos(c));
        }
    }
    return best;
}

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

SampleAverage average_over(const Counterporter& engine, const BlochSample& sample) {
    std::vector<double> f, fp, p;
    f.reserve(sample.count());
    fp.reserve(sample.count());
    p.reserve(sample.count());
    for (const auto& q : sample.qubits) {
        const CounterportResult r = engine.run(q);
        f.push_back(r.fidelity);
        fp.push_back(r.fidelity_postselected);
        p.push_back(r.p_port1 + r.p_port2);
    }
    const double n = static_cast<double>(sample.count());
    return {pairwise_sum(f) / n, pairwise_sum(fp) / n, pairwise_sum(p) / n};
}

const GridCell& FidelityGrid::cell(int M, int N) const {
    if (M < m_min || M > m_max || N < n_min || N > n_max) throw std::out_of_range("grid cell out of range");
    return cells[static_cast<std::size_t>(M - m_min) * (n_max - n_min + 1) + (N - n_min)];
}

FidelityGrid sweep(SweepRange m, SweepRange n, const ProtocolConfig& tmpl, const BlochSample& sample,
                   const SweepOptions& opts) {
    if (m.lo < 1 || n.lo < 1 || m.hi < m.lo || n.hi < n.lo) throw ConfigError("sweep ranges must satisfy 1 <= lo <= hi");
    if (sample.qubits.empty()) throw ConfigError("sweep needs at least one sample qubit");
    ProtocolConfig base = tmpl;
    base.M = m.lo;
    base.N = n.lo;
    base.validate();

    FidelityGrid grid;
    grid.m_min = m.lo;
    grid.m_max = m.hi;
    grid.n_min = n.lo;
    grid.n_max = n.hi;
    grid.mode = opts.mode;
    const int cols = n.hi - n.lo + 1;
    const std::size_t total = static_cast<std::size_t>(m.hi - m.lo + 1) * cols;
    grid.cells.resize(total);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < total; k = next++) {
            try {
                ProtocolConfig cfg = base;
                cfg.M = m.lo + static_cast<int>(k / cols);
                cfg.N = n.lo + static_cast<int>(k % cols);
                const SampleAverage avg = average_over(Counterporter(cfg), sample);
                grid.cells[k] = {cfg.M, cfg.N,
                                 opts.mode == FidelityMode::LossInclusive ? avg.fidelity : avg.fidelity_postselected,
                                 avg.success};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(total)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return grid;
}

FidelityGrid sweep(int M_max, int N_max, const ProtocolConfig& tmpl, const BlochSample& sample,
                   const SweepOptions& opts) {
    return sweep(SweepRange{1, M_max}, SweepRange{1, N_max}, tmpl, sample, opts);
}

}  // namespace cfq
