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

#include <sstream>

#include "cfq/io.hpp"
#include "cfq/schedule_io.hpp"

namespace cfq {
namespace {

FidelityGrid sample_grid() {
    FidelityGrid g;
    g.m_min = 2;
    g.m_max = 4;
    g.n_min = 1;
    g.n_max = 2;
    for (int M = 2; M <= 4; ++M)
        for (int N = 1; N <= 2; ++N) g.cells.push_back({M, N, 0.1 * M + 0.01 * N + 1.0 / 3.0, 0.9 / (M + N)});
    return g;
}

void expect_same(const FidelityGrid& a, const FidelityGrid& b) {
    EXPECT_EQ(a.m_min, b.m_min);
    EXPECT_EQ(a.m_max, b.m_max);
    EXPECT_EQ(a.n_min, b.n_min);
    EXPECT_EQ(a.n_max, b.n_max);
    EXPECT_EQ(a.mode, b.mode);
    ASSERT_EQ(a.cells.size(), b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        EXPECT_EQ(a.cells[i].M, b.cells[i].M);
        EXPECT_EQ(a.cells[i].N, b.cells[i].N);
        EXPECT_EQ(a.cells[i].avg_fidelity, b.cells[i].avg_fidelity);
        EXPECT_EQ(a.cells[i].avg_success_prob, b.cells[i].avg_success_prob);
    }
}

TEST(GridCsv, ExactRoundTrip) {
    const FidelityGrid g = sample_grid();
    std::stringstream ss;
    write_grid_csv(ss, g);
    EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "M,N,avg_fidelity,avg_success_prob");
    expect_same(g, read_grid_csv(ss));
}

TEST(GridCsv, RejectsHolesAndJunk) {
    std::stringstream holes("M,N,avg_fidelity,avg_success_prob\n1,1,0.5,0.5\n2,2,0.5,0.5\n");
    EXPECT_THROW(read_grid_csv(holes), FormatError);
    std::stringstream header("m,n,f,p\n1,1,0.5,0.5\n");
    EXPECT_THROW(read_grid_csv(header), FormatError);
    std::stringstream junk("M,N,avg_fidelity,avg_success_prob\n1,1,abc,0.5\n");
    EXPECT_THROW(read_grid_csv(junk), FormatError);
}

TEST(GridJson, ExactRoundTrip) {
    FidelityGrid g = sample_grid();
    g.mode = FidelityMode::PostSelected;
    const Json j = grid_to_json(g);
    EXPECT_EQ(j.at("fidelity_mode"), "post-selected");
    expect_same(g, grid_from_json(Json::parse(j.dump())));
    Json bad = j;
    bad["M_range"] = {1, 9};
    EXPECT_THROW(grid_from_json(bad), FormatError);
}

TEST(GridSvg, ExactRoundTripAndContour) {
    const FidelityGrid g = sample_grid();
    std::stringstream ss;
    write_grid_svg(ss, g);
    const std::string svg = ss.str();
    EXPECT_NE(svg.find("class=\"classical-limit\""), std::string::npos);
    EXPECT_NE(svg.find("<linearGradient"), std::string::npos);
    EXPECT_NE(svg.find("data-fidelity-mode=\"loss-inclusive\""), std::string::npos);
    expect_same(g, read_grid_svg(ss));
}

TEST(GridSvg, SingleCell) {
    FidelityGrid g;
    g.cells.push_back({1, 1, 0.75, 0.5});
    std::stringstream ss;
    write_grid_svg(ss, g);
    expect_same(g, read_grid_svg(ss));
}

TEST(WeakCsv, ExactRoundTrip) {
    const CircuitSchedule c = build_paradox_circuit(2, 2);
    BoundaryPair b = end_to_end(c);
    WeakTraceMap m = weak_trace_map(c, b);
    m.cells[3].value.reset();
    std::stringstream ss;
    write_weak_csv(ss, m);
    EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "time,arm,re,im,status");
    EXPECT_NE(ss.str().find("orthogonal"), std::string::npos);
    const WeakTraceMap back = read_weak_csv(ss);
    EXPECT_EQ(back.arms, m.arms);
    EXPECT_EQ(back.times, m.times);
    ASSERT_EQ(back.cells.size(), m.cells.size());
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
        EXPECT_EQ(back.cells[i].arm, m.cells[i].arm);
        EXPECT_EQ(back.cells[i].time, m.cells[i].time);
        EXPECT_EQ(back.cells[i].value, m.cells[i].value);
    }
}

TEST(ParadoxJson, ExactRoundTrip) {
    const ParadoxReport r = paradox_report();
    const ParadoxReport back = paradox_from_json(Json::parse(paradox_to_json(r).dump()));
    EXPECT_EQ(back.M, r.M);
    EXPECT_EQ(back.epsilon, r.epsilon);
    EXPECT_EQ(back.channel_signal, r.channel_signal);
    ASSERT_EQ(back.rows.size(), r.rows.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        EXPECT_EQ(back.rows[i].boundary, r.rows[i].boundary);
        EXPECT_EQ(back.rows[i].arm, r.rows[i].arm);
        EXPECT_EQ(back.rows[i].time, r.rows[i].time);
        EXPECT_EQ(back.rows[i].weak_value, r.rows[i].weak_value);
        EXPECT_EQ(back.rows[i].probe_signal, r.rows[i].probe_signal);
    }
    EXPECT_NE(paradox_table(r).find("end-to-end-detector"), std::string::npos);
}

TEST(StateJson, ExactRoundTrip) {
    const StateVector s{{{Path::F, kR, Bob::Zero}, {0.1, -0.3}},
                        {{Path::Port2, kL, Bob::One}, 1.0 / 3.0},
                        {{Path::SinkDA, kL, Bob::Absent}, {0, 0.7}}};
    const Json j = state_to_json(s);
    EXPECT_EQ(j[0].at("pol"), "R");
    const StateVector back = state_from_json(Json::parse(j.dump()));
    EXPECT_EQ((back - s).norm_squared(), 0.0);
    EXPECT_THROW(state_from_json(Json::parse(R"([{"path":"Q","pol":"R","bob":"0","re":1,"im":0}])")), FormatError);
}

TEST(ComplexJson, RoundTrip) {
    const std::complex<double> z(0.1, -1e-300);
    EXPECT_EQ(complex_from_json(Json::parse(complex_to_json(z).dump())), z);
}

TEST(CounterportJson, Fields) {
    ProtocolConfig cfg;
    cfg.M = 2;
    cfg.N = 3;
    const BobQubit bob = BobQubit::make(0.6, 0.8);
    const Json j = counterport_to_json(bob, cfg, counterport(bob, cfg));
    for (const char* key : {"rounds", "p_port1", "p_port2", "p_lost", "rho_port1", "fidelity", "fidelity_postselected"})
        EXPECT_TRUE(j.contains(key)) << key;
}

TEST(HistoriesJson, ProbabilitiesOnlyWhenConsistent) {
    const CircuitSchedule c = build_paradox_circuit(2, 2);
    const Json good = histories_to_json(builtin_family(7, c), c);
    EXPECT_TRUE(good.at("consistent").get<bool>());
    EXPECT_EQ(good.at("history_count"), 18);
    EXPECT_FALSE(good.at("histories")[0].at("probability").is_null());
    const Json bad = histories_to_json(builtin_family(10, c), c);
    EXPECT_FALSE(bad.at("consistent").get<bool>());
    EXPECT_TRUE(bad.at("histories")[0].at("probability").is_null());
    EXPECT_FALSE(bad.at("offending_pairs").empty());
}

}  // namespace
}  // namespace cfq
