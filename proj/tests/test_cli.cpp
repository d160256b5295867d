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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cfq/commands.hpp"

namespace cfq {
namespace {

namespace fs = std::filesystem;

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "counterport");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    testing::internal::CaptureStdout();
    testing::internal::CaptureStderr();
    const int code = run_cli(static_cast<int>(args.size()), argv.data());
    testing::internal::GetCapturedStdout();
    testing::internal::GetCapturedStderr();
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

class Cli : public ::testing::Test {
   protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("cfq-cli-" + std::to_string(std::random_device{}()));
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }

    fs::path dir;
};

TEST_F(Cli, SweepWritesAllFormatsDeterministically) {
    const std::vector<std::string> common{"sweep", "--m-max", "3", "--n-max", "3", "--samples", "6", "--out-dir", dir.string()};
    auto a = common, b = common;
    a.insert(a.end(), {"--prefix", "one", "--workers", "1"});
    b.insert(b.end(), {"--prefix", "four", "--workers", "4"});
    ASSERT_EQ(run(a), kExitOk);
    ASSERT_EQ(run(b), kExitOk);
    for (const char* ext : {".csv", ".json", ".svg"}) {
        EXPECT_TRUE(fs::exists(path(std::string("one") + ext)));
        EXPECT_EQ(slurp(path(std::string("one") + ext)), slurp(path(std::string("four") + ext))) << ext;
    }
}

TEST_F(Cli, IdealSweepImprovesWithCycles) {
    ASSERT_EQ(run({"sweep", "--ideal", "--m-min", "2", "--m-max", "20", "--n-min", "2", "--n-max", "20", "--samples",
                   "10", "--out-dir", dir.string()}),
              kExitOk);
    std::ifstream in(path("sweep.csv"));
    const FidelityGrid g = read_grid_csv(in);
    EXPECT_GT(g.cell(20, 20).avg_fidelity, g.cell(2, 2).avg_fidelity);
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
    write("run.ini", "[sweep]\nm-max = 2\nn-max = 2\nsamples = 4\nprefix = fromfile\n");
    ASSERT_EQ(run({"--config", path("run.ini"), "sweep", "--out-dir", dir.string(), "--n-max", "3"}), kExitOk);
    std::ifstream in(path("fromfile.csv"));
    const FidelityGrid g = read_grid_csv(in);
    EXPECT_EQ(g.m_max, 2);
    EXPECT_EQ(g.n_max, 3);
}

TEST_F(Cli, BadConfigIsAConfigError) {
    write("bad.ini", "[sweep]\nno-such-key = 1\n");
    EXPECT_EQ(run({"--config", path("bad.ini"), "sweep", "--out-dir", dir.string()}), kExitConfig);
    EXPECT_EQ(run({"sweep", "--m-min", "0", "--out-dir", dir.string()}), kExitConfig);
    EXPECT_EQ(run({"sweep", "--eps-reflect", "2", "--out-dir", dir.string()}), kExitConfig);
    EXPECT_EQ(run({"sweep", "--scheme", "grid"}), kExitConfig);
    EXPECT_EQ(run({"frobnicate"}), kExitConfig);
}

TEST_F(Cli, CounterportRejectsUnnormalizedQubit) {
    EXPECT_EQ(run({"counterport", "--alpha", "1", "--beta", "1", "-o", path("c.json")}), kExitConfig);
    ASSERT_EQ(run({"counterport", "-M", "3", "-N", "4", "--alpha", "0.6", "--beta", "0.8", "-o", path("c.json")}), kExitOk);
    const Json j = Json::parse(slurp(path("c.json")));
    EXPECT_TRUE(j.contains("fidelity"));
}

TEST_F(Cli, ParadoxWritesReport) {
    ASSERT_EQ(run({"paradox", "-o", path("p.json")}), kExitOk);
    const ParadoxReport r = paradox_from_json(Json::parse(slurp(path("p.json"))));
    EXPECT_NEAR(r.row("end-to-end", Path::C, "t2").weak_value->real(), 0.5, 1e-12);
}

TEST_F(Cli, WeakValuesCsv) {
    ASSERT_EQ(run({"weakvalues", "--boundary", "per-cycle", "--cycle", "1", "-o", path("w.csv")}), kExitOk);
    std::ifstream in(path("w.csv"));
    const WeakTraceMap m = read_weak_csv(in);
    EXPECT_EQ(m.times.front(), "t'0");
    EXPECT_EQ(run({"weakvalues", "--boundary", "sideways"}), kExitConfig);
    EXPECT_EQ(run({"weakvalues", "--boundary", "per-cycle", "--cycle", "5"}), kExitConfig);
}

TEST_F(Cli, HistoriesFromBuiltinsAndFile) {
    ASSERT_EQ(run({"histories", "-o", path("h.json")}), kExitOk);
    const Json j = Json::parse(slurp(path("h.json"))).at("families");
    ASSERT_EQ(j.size(), 4u);
    EXPECT_FALSE(j[3].at("consistent").get<bool>());

    write("fam.txt", "family v1\nname mine\npre t0 S H -\npost t4 S:H\nslot t1 A D\nend\n");
    EXPECT_EQ(run({"histories", "--family-file", path("fam.txt"), "-o", path("f.json")}), kExitOk);
    write("empty.txt", "family v1\nname none\npre t0 S H -\npost t4 S:H\nend\n");
    EXPECT_EQ(run({"histories", "--family-file", path("empty.txt"), "-o", path("e.json")}), kExitConfig);
    write("garbled.txt", "not a family\n");
    EXPECT_EQ(run({"histories", "--family-file", path("garbled.txt")}), kExitConfig);
    EXPECT_EQ(run({"histories", "-M", "1", "--family", "8"}), kExitConfig);
}

TEST_F(Cli, UnwritableOutputIsAnIoError) {
    EXPECT_EQ(run({"paradox", "-o", (dir / "missing" / "p.json").string()}), kExitIo);
}

TEST(ExitCodes, Mapping) {
    std::ostringstream err;
    EXPECT_EQ(exit_code_for(std::make_exception_ptr(ConservationBreach("leak")), err), kExitConservation);
    EXPECT_EQ(exit_code_for(std::make_exception_ptr(NotAnIsometry("bad")), err), kExitConservation);
    EXPECT_EQ(exit_code_for(std::make_exception_ptr(ConfigError("bad")), err), kExitConfig);
    EXPECT_EQ(exit_code_for(std::make_exception_ptr(FamilyError("bad")), err), kExitConfig);
    EXPECT_EQ(exit_code_for(std::make_exception_ptr(IoError("disk")), err), kExitIo);
    EXPECT_NE(err.str().find("leak"), std::string::npos);
}

TEST(Help, ExitsCleanly) { EXPECT_EQ(run({"--help"}), kExitOk); }

}  // namespace
}  // namespace cfq
