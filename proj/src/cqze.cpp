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

#include "cfq/cqze.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace cfq {

void ProtocolConfig::validate() const {
    if (M < 1) throw ConfigError("M must be at least 1");
    if (N < 1) throw ConfigError("N must be at least 1");
    if (!(eps_reflect >= 0.0 && eps_reflect <= 1.0)) throw ConfigError("eps_reflect must lie in [0, 1]");
    if (!(eps_block >= 0.0 && eps_block <= 1.0)) throw ConfigError("eps_block must lie in [0, 1]");
    if (av_rounds < 0) throw ConfigError("av_rounds must be non-negative");
}

BobQubit BobQubit::make(std::complex<double> alpha, std::complex<double> beta) {
    BobQubit q{alpha, beta};
    q.validate();
    return q;
}

void BobQubit::validate() const {
    const double n = std::norm(alpha) + std::norm(beta);
    if (std::abs(n - 1.0) > 1e-12) throw ConfigError("Bob's qubit must be normalized (|alpha|^2 + |beta|^2 = 1)");
}

std::vector<Element> bob_channel_elements(const ProtocolConfig& cfg, bool block_error_active) {
    const double eps_b = block_error_active ? cfg.eps_block : 0.0;
    return {loss(Path::C, std::sqrt(1.0 - cfg.eps_reflect), Path::SinkDB, Bob::Zero),
            loss(Path::C, std::sqrt(eps_b), Path::SinkBlock, Bob::One)};
}

namespace {

struct InnerElements {
    Element rot;
    Element split;
    std::vector<Element> channel;
};

InnerElements inner_elements(const ProtocolConfig& cfg) {
    return {spr(std::numbers::pi / (2.0 * cfg.N), Path::D), pbs(Path::D, Path::C, Path::B),
            bob_channel_elements(cfg)};
}

StateVector cycle_with(const StateVector& s, const InnerElements& e) {
    StateVector out = e.rot.apply(s);
    out = e.split.apply(out);
    for (const auto& c : e.channel) out = c.apply(out);
    return e.split.apply(out);
}

}  // namespace

StateVector inner_cycle(const StateVector& s, const ProtocolConfig& cfg) {
    cfg.validate();
    return cycle_with(s, inner_elements(cfg));
}

StateVector run_inner(const StateVector& s, const ProtocolConfig& cfg) {
    cfg.validate();
    const InnerElements e = inner_elements(cfg);
    StateVector out = s;
    for (int k = 0; k < cfg.N; ++k) out = cycle_with(out, e);
    return out;
}

LayoutModifier av_extension(int rounds) {
    if (rounds < 0) throw ConfigError("av_rounds must be non-negative");
    return [rounds](NestedLayout& layout) { layout.av_rounds += rounds; };
}

LayoutModifier av_extension(const ProtocolConfig& cfg) { return av_extension(cfg.av_rounds); }

CircuitSchedule build_cqze_schedule(const ProtocolConfig& cfg) {
    cfg.validate();
    NestedLayout layout;
    layout.outer_cycles = cfg.M;
    layout.inner_cycles = cfg.N;
    layout.rotator = ElementKind::SPR;
    layout.exhaust_sink = Path::SinkDA;
    const auto with_error = bob_channel_elements(cfg, true);
    const auto without_error = bob_channel_elements(cfg, false);
    const bool per_outer = cfg.block_placement == BlockErrorPlacement::PerOuterCycle;
    layout.bob_action = [=](int, int inner) { return (per_outer && inner > 1) ? without_error : with_error; };
    av_extension(cfg)(layout);
    return build_nested_interferometer(layout);
}

CqzeOutcome run_module(const StateVector& input, const CircuitSchedule& module) {
    const StateVector out = evolve(module, input, 0, module.size() - 1);
    CqzeOutcome r;
    r.joint = out;
    r.p_loss_DA = out.sink_weight(Path::SinkDA);
    r.p_loss_DB = out.sink_weight(Path::SinkDB);
    r.p_block = out.sink_weight(Path::SinkBlock);
    r.p_alice = out.sink_weight(Path::SinkAlice);
    r.p_success = out.path_weight(Path::F);
    return r;
}

CqzeOutcome run_module(const StateVector& input, const ProtocolConfig& cfg) {
    return run_module(input, build_cqze_schedule(cfg));
}

CqzeOutcome run_cqze(const PolState& pol_in, const BobQubit& bob, const ProtocolConfig& cfg) {
    bob.validate();
    const StateVector input{{{Path::S, Pol::H, Bob::Zero}, pol_in(0) * bob.alpha},
                            {{Path::S, Pol::V, Bob::Zero}, pol_in(1) * bob.alpha},
                            {{Path::S, Pol::H, Bob::One}, pol_in(0) * bob.beta},
                            {{Path::S, Pol::V, Bob::One}, pol_in(1) * bob.beta}};
    return run_module(input, cfg);
}

ModuleTransfer compile_module(const ProtocolConfig& cfg) {
    const CircuitSchedule module = build_cqze_schedule(cfg);
    ModuleTransfer t;
    t.cfg = cfg;
    for (int b = 0; b < 2; ++b) {
        const Bob bob = b == 0 ? Bob::Zero : Bob::One;
        const CqzeOutcome r = run_module(StateVector::basis({Path::S, kR, bob}), module);
        t.out[b] = PolState(r.joint[{Path::F, kR, bob}], r.joint[{Path::F, kL, bob}]);
        t.p_DA[b] = r.p_loss_DA;
        t.p_DB[b] = r.p_loss_DB;
        t.p_block[b] = r.p_block;
        t.p_alice[b] = r.p_alice;
    }
    return t;
}

LinearMap module_map(const ModuleTransfer& t, Path rail) {
    std::vector<LinearMap::Entry> entries;
    std::vector<LinearMap::Route> routes;
    LabelSet defined, domain;
    domain.set();
    for (int b = 0; b < 2; ++b) {
        const Bob bob = b == 0 ? Bob::Zero : Bob::One;
        const BasisLabel in{rail, kR, bob};
        defined.set(index_of(in));
        defined.set(index_of({rail, kL, bob}));
        domain.reset(index_of({rail, kL, bob}));
        entries.push_back({in, {rail, kR, bob}, t.out[b](0)});
        entries.push_back({in, {rail, kL, bob}, t.out[b](1)});
        for (auto [p, sink_path] : {std::pair{t.p_DA[b], Path::SinkDA}, std::pair{t.p_DB[b], Path::SinkDB},
                                    std::pair{t.p_block[b], Path::SinkBlock}, std::pair{t.p_alice[b], Path::SinkAlice}})
            if (p > 0.0) routes.push_back({in, sink_path, std::sqrt(p)});
    }
    // Bob absent on a rail is not a valid module input either.
    domain.reset(index_of({rail, kR, Bob::Absent}));
    domain.reset(index_of({rail, kL, Bob::Absent}));
    return LinearMap(routes.empty() ? MapKind::Unitary : MapKind::IsometryToSinks, entries, routes, domain, defined);
}

LinearMap bob_gate(const Eigen::Matrix2cd& u) {
    std::vector<LinearMap::Entry> entries;
    LabelSet defined;
    for (int i = 0; i < kBasisSize; ++i) {
        const BasisLabel l = label_at(i);
        if (is_sink(l.path) || l.bob == Bob::Absent) continue;
        defined.set(i);
        const int from = l.bob == Bob::Zero ? 0 : 1;
        for (int to = 0; to < 2; ++to)
            if (u(to, from) != std::complex<double>(0))
                entries.push_back({l, {l.path, l.pol, to == 0 ? Bob::Zero : Bob::One}, u(to, from)});
    }
    return LinearMap::unitary(entries, defined);
}

CnotOutcome apply_cnot(const StateVector& joint_on_s, const ModuleTransfer& t) {
    const Element pbs1 = pbs(Path::S, Path::Rail1, Path::Rail2);
    const Element pc = pockels_flip(Path::Rail2);
    const LinearMap module1 = module_map(t, Path::Rail1);
    const LinearMap module2 = module_map(t, Path::Rail2);
    const Element bs = bs50(Path::Rail1, Path::Rail2, Path::Port2, Path::Port1);

    const double expected = joint_on_s.norm_squared();
    StateVector s = pbs1.apply(joint_on_s);
    s = pc.apply(s);
    s = module1.apply(s);
    s = module2.apply(s);
    s = pc.apply(s);
    s = bs.apply(s);
    if (std::abs(s.norm_squared() - expected) > kConservationTolerance)
        throw ConservationBreach("counterfactual CNOT does not conserve probability");

    CnotOutcome out;
    out.p_port1 = s.path_weight(Path::Port1);
    out.p_port2 = s.path_weight(Path::Port2);
    out.p_lost = expected - out.p_port1 - out.p_port2;
    out.state = std::move(s);
    return out;
}

CnotOutcome counterfactual_cnot(const PolState& pol_in, const BobQubit& bob, const ProtocolConfig& cfg) {
    bob.validate();
    if (std::abs(pol_in.squaredNorm() - 1.0) > 1e-12) throw ConfigError("input polarization must be normalized");
    const StateVector input{{{Path::S, Pol::H, Bob::Zero}, pol_in(0) * bob.alpha},
                            {{Path::S, Pol::V, Bob::Zero}, pol_in(1) * bob.alpha},
                            {{Path::S, Pol::H, Bob::One}, pol_in(0) * bob.beta},
                            {{Path::S, Pol::V, Bob::One}, pol_in(1) * bob.beta}};
    return apply_cnot(input, compile_module(cfg));
}

double entanglement_entropy(const StateVector& s, Path p) {
    const auto blk = s.block(p);
    Eigen::Matrix2cd psi;  // rows pol, cols Bob 0/1
    psi << blk(0, 0), blk(0, 1), blk(1, 0), blk(1, 1);
    const double n = psi.squaredNorm();
    if (n == 0.0) throw std::domain_error("no amplitude on the requested path");
    const Eigen::Matrix2cd rho = psi * psi.adjoint() / n;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(rho);
    double h = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double lambda = solver.eigenvalues()(i);
        if (lambda > 1e-300) h -= lambda * std::log2(lambda);
    }
    return h;
}

}  // namespace cfq
