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
#include <random>

#include "cfq/qstate.hpp"

namespace cfq {
namespace {

BasisLabel lbl(Path p, Pol q, Bob b) { return {p, q, b}; }

StateVector random_live_state(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Amplitudes<double> a = Amplitudes<double>::Zero();
    for (int i = 0; i < kBasisSize; ++i)
        if (!is_sink(label_at(i).path)) a[i] = {g(rng), g(rng)};
    return StateVector(a).normalized();
}

TEST(Basis, IndexRoundTrip) {
    for (int i = 0; i < kBasisSize; ++i) EXPECT_EQ(index_of(label_at(i)), i);
    EXPECT_EQ(kBasisSize, 102);
}

TEST(Basis, NamesParseBack) {
    for (int p = 0; p < kPathCount; ++p) {
        const Path path = static_cast<Path>(p);
        ASSERT_TRUE(parse_path(name(path)).has_value());
        EXPECT_EQ(*parse_path(name(path)), path);
    }
    EXPECT_EQ(parse_pol("R"), Pol::H);
    EXPECT_EQ(parse_pol("L"), Pol::V);
    EXPECT_FALSE(parse_pol("X").has_value());
    EXPECT_FALSE(parse_path("Nowhere").has_value());
}

TEST(Basis, SinksAreMarked) {
    EXPECT_TRUE(is_sink(Path::SinkD3));
    EXPECT_TRUE(is_sink(Path::SinkAlice));
    EXPECT_FALSE(is_sink(Path::C));
    EXPECT_FALSE(is_sink(Path::Port2));
}

TEST(StateVector, BasisAndWeights) {
    const StateVector s{{{Path::A, Pol::H, Bob::Zero}, 0.6}, {{Path::SinkD3, Pol::V, Bob::Zero}, 0.8}};
    EXPECT_DOUBLE_EQ(s.norm_squared(), 1.0);
    EXPECT_NEAR(s.live_norm_squared(), 0.36, 1e-15);
    EXPECT_NEAR(s.sink_weight(Path::SinkD3), 0.64, 1e-15);
    EXPECT_NEAR(s.path_weight(Path::A), 0.36, 1e-15);
    EXPECT_EQ(s.live_part().sink_weight(Path::SinkD3), 0.0);
    EXPECT_EQ(s.support().count(), 2u);
}

TEST(StateVector, CombineDisjointAddsSinksInQuadrature) {
    const StateVector a{{{Path::A, Pol::H, Bob::Absent}, 0.6}, {{Path::SinkDA, Pol::H, Bob::Absent}, 0.8}};
    const StateVector b{{{Path::B, Pol::H, Bob::Absent}, 0.6}, {{Path::SinkDA, Pol::H, Bob::Absent}, 0.8}};
    const StateVector c = combine_disjoint(a, b);
    EXPECT_NEAR(c.sink_weight(Path::SinkDA), 1.28, 1e-15);
    EXPECT_NEAR(c.path_weight(Path::A), 0.36, 1e-15);
}

TEST(StateVector, NormalizeZeroThrows) { EXPECT_THROW(StateVector{}.normalized(), std::domain_error); }

TEST(StateVector, InnerIsConjugateLinearInFirst) {
    const StateVector a = StateVector::basis({Path::S, Pol::H, Bob::Absent});
    const std::complex<double> i(0, 1);
    EXPECT_EQ(inner(i * a, a), -i);
    EXPECT_EQ(inner(a, i * a), i);
}

TEST(Projector, PathProjectorsAreComplete) {
    Projector sum = Projector::none();
    for (int p = 0; p < kPathCount; ++p) sum = sum | Projector::path(static_cast<Path>(p));
    EXPECT_EQ(sum, Projector::all());
    for (int p = 0; p < kPathCount; ++p)
        for (int q = p + 1; q < kPathCount; ++q)
            EXPECT_TRUE((Projector::path(static_cast<Path>(p)) & Projector::path(static_cast<Path>(q))).empty());
}

TEST(Projector, ProjectionProbabilitiesSumToOne) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector s = random_live_state(rng);
        double total = 0.0;
        for (int p = 0; p < kPathCount; ++p)
            for (Pol pol : {Pol::H, Pol::V}) total += project(Projector::on({static_cast<Path>(p)}, {pol}), s).probability;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Projector, IsIdempotent) {
    std::mt19937_64 rng(11);
    const StateVector s = random_live_state(rng);
    const Projector p = Projector::on({Path::C, Path::D}, {Pol::V});
    const StateVector once = p.apply(s);
    EXPECT_EQ((p.apply(once) - once).norm_squared(), 0.0);
}

TEST(LinearMap, DefaultIsIdentity) {
    std::mt19937_64 rng(3);
    const StateVector s = random_live_state(rng);
    EXPECT_EQ((LinearMap().apply(s) - s).norm_squared(), 0.0);
}

TEST(LinearMap, RejectsNonUnitaryEntries) {
    const BasisLabel a{Path::A, Pol::H, Bob::Absent};
    const BasisLabel b{Path::B, Pol::H, Bob::Absent};
    EXPECT_THROW(LinearMap::unitary({{a, b, 0.9}}), NotAnIsometry);
    // Two columns mapped onto the same row.
    EXPECT_THROW(LinearMap::unitary({{a, b, 1.0}}), NotAnIsometry);
}

TEST(LinearMap, RejectsRoutesOnUnitaryAndLiveSinks) {
    const BasisLabel a{Path::A, Pol::H, Bob::Absent};
    const BasisLabel sink{Path::SinkD3, Pol::H, Bob::Absent};
    EXPECT_THROW(LinearMap(MapKind::Unitary, {{a, a, std::sqrt(0.5)}}, {{a, Path::SinkD3, std::sqrt(0.5)}},
                           LabelSet().set(), {}),
                 NotAnIsometry);
    EXPECT_THROW(LinearMap::unitary({{a, sink, 1.0}}), NotAnIsometry);
    EXPECT_THROW(LinearMap::lossy({{a, a, std::sqrt(0.5)}}, {{a, Path::B, std::sqrt(0.5)}}), NotAnIsometry);
}

TEST(LinearMap, LossyRouteKeepsNorm) {
    const BasisLabel a{Path::A, Pol::V, Bob::One};
    const LinearMap m = LinearMap::lossy({{a, a, 0.6}}, {{a, Path::SinkDB, 0.8}});
    const StateVector out = m.apply(StateVector::basis(a));
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-15);
    EXPECT_NEAR(out.sink_weight(Path::SinkDB), 0.64, 1e-15);
    EXPECT_NEAR(std::abs(out[lbl(Path::SinkDB, Pol::V, Bob::One)]), 0.8, 1e-15);
    // Backward evolution never comes out of a sink.
    EXPECT_EQ(m.apply_adjoint(out).sink_weight(Path::SinkDB), 0.0);
}

TEST(LinearMap, DomainIsEnforced) {
    LabelSet domain;
    domain.set();
    domain.reset(index_of({Path::C, Pol::V, Bob::Absent}));
    const LinearMap m(MapKind::Unitary, {}, {}, domain, {});
    EXPECT_NO_THROW(m.apply(StateVector::basis({Path::C, Pol::H, Bob::Absent})));
    EXPECT_THROW(m.apply(StateVector::basis({Path::C, Pol::V, Bob::Absent})), LabelMismatch);
}

TEST(LinearMap, AdjointMatchesInnerProduct) {
    std::mt19937_64 rng(5);
    const double c = std::cos(0.3), s = std::sin(0.3);
    const BasisLabel h{Path::D, Pol::H, Bob::Absent}, v{Path::D, Pol::V, Bob::Absent};
    const LinearMap rot = LinearMap::unitary({{h, h, c}, {h, v, s}, {v, v, c}, {v, h, -s}});
    for (int trial = 0; trial < 10; ++trial) {
        const StateVector a = random_live_state(rng), b = random_live_state(rng);
        EXPECT_NEAR(std::abs(inner(a, rot.apply(b)) - inner(rot.apply_adjoint(a), b)), 0.0, 1e-14);
    }
}

TEST(Fidelity, TracesOverBob) {
    const double r = std::numbers::sqrt2 / 2;
    // (|R,0> + |R,1>)/sqrt2 on Port1: pol is pure R, fully overlapping R.
    const StateVector s{{{Path::Port1, kR, Bob::Zero}, r}, {{Path::Port1, kR, Bob::One}, r}};
    EXPECT_NEAR(fidelity(PolState(1, 0), s, {Path::Port1}), 1.0, 1e-15);
    EXPECT_NEAR(fidelity(PolState(0, 1), s, {Path::Port1}), 0.0, 1e-15);
    EXPECT_NEAR(fidelity(PolState(1, 0), s, {Path::Port2}), 0.0, 1e-15);
    EXPECT_THROW(fidelity(PolState(1, 1), s, {Path::Port1}), std::invalid_argument);
}

TEST(LongDouble, RotationChainAgreesWithDouble) {
    // 25 small rotations built independently at both precisions.
    auto chain = [](auto zero) {
        using Real = decltype(zero);
        const Real th = std::numbers::pi_v<Real> / Real(50);
        const BasisLabel h{Path::D, Pol::H, Bob::Absent}, v{Path::D, Pol::V, Bob::Absent};
        const auto rot = BasicLinearMap<Real>::unitary(
            {{h, h, std::cos(th)}, {h, v, std::sin(th)}, {v, v, std::cos(th)}, {v, h, -std::sin(th)}});
        auto s = BasicStateVector<Real>::basis(h);
        for (int k = 0; k < 25; ++k) s = rot.apply(s);
        return s;
    };
    const auto d = chain(0.0);
    const auto ld = chain(0.0L);
    for (int i = 0; i < kBasisSize; ++i) {
        const std::complex<long double> x = ld.amplitudes()[i];
        EXPECT_NEAR(static_cast<double>(x.real()), d.amplitudes()[i].real(), 1e-14);
        EXPECT_NEAR(static_cast<double>(x.imag()), d.amplitudes()[i].imag(), 1e-14);
    }
    // 25 * pi/50 = pi/2: H goes to V exactly.
    EXPECT_NEAR(std::abs(static_cast<double>(std::abs(ld[lbl(Path::D, Pol::V, Bob::Absent)])) - 1.0), 0.0, 1e-15);
}

}  // namespace
}  // namespace cfq
