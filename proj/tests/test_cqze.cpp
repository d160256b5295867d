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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cfq/cqze.hpp"

namespace cfq {
namespace {

BasisLabel lbl(Path p, Pol q, Bob b) { return {p, q, b}; }

constexpr long double kPi = std::numbers::pi_v<long double>;

// Blocked inner loop: each cycle keeps cos(pi/2N) of the V amplitude.
long double inner_survival(int N) { return std::pow(std::cos(kPi / (2 * N)), static_cast<long double>(N)); }

// Hand recursion for Bob = |1>: rotate by pi/2M, then the L component is
// damped by the inner survival amplitude.
std::array<long double, 2> blocked_module(int M, int N) {
    const long double th = kPi / (2 * M), damp = inner_survival(N);
    long double r = 1, l = 0;
    for (int k = 0; k < M; ++k) {
        const long double r2 = std::cos(th) * r - std::sin(th) * l;
        const long double l2 = std::sin(th) * r + std::cos(th) * l;
        r = r2;
        l = damp * l2;
    }
    return {r, l};
}

ProtocolConfig ideal(int M, int N) {
    ProtocolConfig c;
    c.M = M;
    c.N = N;
    return c;
}

TEST(InnerLoop, BlockedSurvivalMatchesClosedForm) {
    for (int N = 1; N <= 25; ++N) {
        const StateVector out = run_inner(StateVector::basis({Path::D, Pol::V, Bob::One}), ideal(1, N));
        EXPECT_NEAR(std::abs(out[lbl(Path::D, Pol::V, Bob::One)]), static_cast<double>(inner_survival(N)), 1e-12) << N;
        EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
    }
    EXPECT_NEAR(static_cast<double>(inner_survival(4)), 0.728553, 1e-6);
    EXPECT_NEAR(static_cast<double>(inner_survival(20)), 0.94012, 1e-5);
}

TEST(InnerLoop, ReflectingBobRotatesFully) {
    for (int N = 1; N <= 25; ++N) {
        const StateVector out = run_inner(StateVector::basis({Path::D, Pol::H, Bob::Zero}), ideal(1, N));
        EXPECT_NEAR(std::abs(out[lbl(Path::D, Pol::V, Bob::Zero)]), 1.0, 1e-12) << N;
    }
}

TEST(InnerLoop, SingleCycleWithErrors) {
    ProtocolConfig c = ideal(10, 4);
    c.eps_reflect = 0.1;
    c.eps_block = 0.05;
    const double co = std::cos(std::numbers::pi / 8), si = std::sin(std::numbers::pi / 8);
    const StateVector zero = inner_cycle(StateVector::basis({Path::D, Pol::H, Bob::Zero}), c);
    EXPECT_NEAR(std::abs(zero[lbl(Path::D, Pol::H, Bob::Zero)]), co * std::sqrt(0.9), 1e-14);
    EXPECT_NEAR(std::abs(zero[lbl(Path::D, Pol::V, Bob::Zero)]), si, 1e-14);
    EXPECT_NEAR(zero.sink_weight(Path::SinkDB), co * co * 0.1, 1e-14);
    const StateVector one = inner_cycle(StateVector::basis({Path::D, Pol::H, Bob::One}), c);
    EXPECT_NEAR(std::abs(one[lbl(Path::D, Pol::H, Bob::One)]), co * std::sqrt(0.05), 1e-14);
    EXPECT_NEAR(one.sink_weight(Path::SinkBlock), co * co * 0.95, 1e-14);
}

TEST(InnerLoop, FullBlockErrorActsLikeAMirror) {
    ProtocolConfig c = ideal(3, 7);
    c.eps_block = 1.0;
    const StateVector one = run_inner(StateVector::basis({Path::D, Pol::H, Bob::One}), c);
    const StateVector zero = run_inner(StateVector::basis({Path::D, Pol::H, Bob::Zero}), ideal(3, 7));
    for (Pol p : {Pol::H, Pol::V})
        EXPECT_NEAR(std::abs(one[lbl(Path::D, p, Bob::One)]), std::abs(zero[lbl(Path::D, p, Bob::Zero)]), 1e-12);
}

TEST(Module, ReflectingBobMatchesClosedForm) {
    for (int M = 1; M <= 25; ++M) {
        const auto r = run_cqze(PolState(1, 0), BobQubit::make(1, 0), ideal(M, 5));
        const double expect = std::pow(std::cos(std::numbers::pi / (2 * M)), M);
        EXPECT_NEAR(std::abs(r.joint[lbl(Path::F, kR, Bob::Zero)]), expect, 1e-12) << M;
        EXPECT_NEAR(r.p_success, expect * expect, 1e-12);
    }
    const auto r10 = run_cqze(PolState(1, 0), BobQubit::make(1, 0), ideal(10, 20));
    EXPECT_NEAR(std::abs(r10.joint[lbl(Path::F, kR, Bob::Zero)]), 0.88348, 1e-5);
    EXPECT_NEAR(r10.p_success, 0.78054, 1e-5);
}

TEST(Module, BlockingBobMatchesRecursion) {
    for (int M = 1; M <= 25; M += 3) {
        for (int N = 1; N <= 25; N += 2) {
            const auto oracle = blocked_module(M, N);
            const auto t = compile_module(ideal(M, N));
            EXPECT_NEAR(std::abs(t.out[1](0)), std::abs(static_cast<double>(oracle[0])), 1e-12) << M << "," << N;
            EXPECT_NEAR(std::abs(t.out[1](1)), std::abs(static_cast<double>(oracle[1])), 1e-12) << M << "," << N;
        }
    }
}

TEST(Module, CompiledMapMatchesSchedule) {
    ProtocolConfig c = ideal(4, 6);
    c.eps_reflect = 0.1;
    c.eps_block = 0.05;
    const ModuleTransfer t = compile_module(c);
    const LinearMap map = module_map(t, Path::S);
    for (const BobQubit& bob : {BobQubit::make(0.6, {0, 0.8}), BobQubit::make(std::sqrt(0.5), -std::sqrt(0.5))}) {
        const StateVector input{{lbl(Path::S, kR, Bob::Zero), bob.alpha}, {lbl(Path::S, kR, Bob::One), bob.beta}};
        const StateVector direct = run_cqze(PolState(1, 0), bob, c).joint;
        const StateVector compiled = map.apply(input);
        for (Pol p : {kR, kL})
            for (Bob b : {Bob::Zero, Bob::One})
                EXPECT_NEAR(std::abs(direct[lbl(Path::F, p, b)] - compiled[lbl(Path::S, p, b)]), 0.0, 1e-12);
        for (Path sink : {Path::SinkDA, Path::SinkDB, Path::SinkBlock})
            EXPECT_NEAR(direct.sink_weight(sink), compiled.sink_weight(sink), 1e-12);
    }
}

TEST(Module, ProbabilitiesSumToOne) {
    ProtocolConfig c = ideal(6, 9);
    c.eps_reflect = 0.2;
    c.eps_block = 0.07;
    for (const BobQubit& bob : {BobQubit::make(1, 0), BobQubit::make(0, 1), BobQubit::make(0.6, {0, 0.8})}) {
        const auto r = run_cqze(PolState(1, 0), bob, c);
        EXPECT_NEAR(r.p_success + r.p_loss_DA + r.p_loss_DB + r.p_block + r.p_alice, 1.0, 1e-12);
    }
}

TEST(Module, SuccessFallsWithReflectionLoss) {
    double prev = 2.0;
    for (double eps : {0.0, 0.1, 0.2, 0.5}) {
        ProtocolConfig c = ideal(10, 20);
        c.eps_reflect = eps;
        const double p = run_cqze(PolState(1, 0), BobQubit::make(1, 0), c).p_success;
        EXPECT_LT(p, prev) << eps;
        prev = p;
    }
}

TEST(Module, LongInnerLoopApproachesIdealGate) {
    const auto t = compile_module(ideal(5, 500));
    EXPECT_GT(std::abs(t.out[1](1)), 0.99);
    EXPECT_LT(std::abs(t.out[1](0)), 0.01);
    EXPECT_NEAR(std::abs(t.out[0](1)), 0.0, 1e-12);
}

TEST(Module, PerOuterPlacementLosesLess) {
    ProtocolConfig inner = ideal(4, 6);
    inner.eps_block = 0.1;
    ProtocolConfig outer = inner;
    outer.block_placement = BlockErrorPlacement::PerOuterCycle;
    const auto a = run_cqze(PolState(1, 0), BobQubit::make(0, 1), inner);
    const auto b = run_cqze(PolState(1, 0), BobQubit::make(0, 1), outer);
    EXPECT_NE(a.p_success, b.p_success);
    EXPECT_NEAR(b.p_success + b.p_loss_DA + b.p_loss_DB + b.p_block, 1.0, 1e-12);
}

TEST(Module, AliceBlockAbsorbsResidue) {
    ProtocolConfig c = ideal(2, 3);
    c.av_rounds = 1;
    const auto r = run_cqze(PolState(1, 0), BobQubit::make(0, 1), c);
    EXPECT_GE(r.p_alice, 0.0);
    EXPECT_NEAR(r.p_success + r.p_loss_DA + r.p_block + r.p_alice, 1.0, 1e-12);
}

TEST(Config, Validation) {
    ProtocolConfig c;
    c.M = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = ProtocolConfig{};
    c.eps_reflect = -0.1;
    EXPECT_THROW(c.validate(), ConfigError);
    c = ProtocolConfig{};
    c.eps_block = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(BobQubit::make(1, 1), ConfigError);
    EXPECT_NO_THROW(BobQubit::make(0.6, 0.8));
    EXPECT_THROW(av_extension(-1), ConfigError);
}

TEST(Cnot, RightPolarizationSplitsEvenly) {
    for (const BobQubit& bob : {BobQubit::make(1, 0), BobQubit::make(0, 1)}) {
        const auto r = counterfactual_cnot(PolState(1, 0), bob, ideal(10, 20));
        EXPECT_NEAR(r.p_port1, r.p_port2, 1e-12);
        EXPECT_NEAR(r.p_port1 + r.p_port2 + r.p_lost, 1.0, 1e-12);
    }
    // Near-ideal modules route almost everything to the two ports.
    const auto r = counterfactual_cnot(PolState(1, 0), BobQubit::make(0, 1), ideal(10, 2000));
    EXPECT_NEAR(r.p_port1, 0.5, 0.01);
    EXPECT_NEAR(r.p_port2, 0.5, 0.01);
}

TEST(Cnot, RejectsBadInput) {
    EXPECT_THROW(counterfactual_cnot(PolState(1, 1), BobQubit::make(1, 0), ideal(2, 2)), ConfigError);
}

TEST(Entropy, ProductAndBell) {
    const double r = std::numbers::sqrt2 / 2;
    const StateVector product{{{Path::F, kR, Bob::Zero}, r}, {{Path::F, kR, Bob::One}, r}};
    EXPECT_NEAR(entanglement_entropy(product, Path::F), 0.0, 1e-12);
    const StateVector bell{{{Path::F, kR, Bob::Zero}, r}, {{Path::F, kL, Bob::One}, r}};
    EXPECT_NEAR(entanglement_entropy(bell, Path::F), 1.0, 1e-12);
    EXPECT_THROW(entanglement_entropy(bell, Path::A), std::domain_error);
}

}  // namespace
}  // namespace cfq
