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

#include "cfq/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cfq/schedule_io.hpp"

namespace cfq {

namespace {

// Writes through a temporary string so a failed run leaves no partial file.
void write_file(const std::string& path, const std::string& content, std::ostream& stdout_stream) {
    if (path == "-") {
        stdout_stream << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << content;
    if (!f.flush()) throw IoError("failed writing " + path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

CircuitSchedule paradox_schedule(int M, int N, int av_rounds) {
    if (M < 1 || N < 1) throw ConfigError("M and N must be at least 1");
    if (av_rounds < 0) throw ConfigError("av_rounds must be non-negative");
    return build_paradox_circuit(M, N, av_rounds);
}

}  // namespace

ProtocolConfig ProtocolOptions::config() const {
    ProtocolConfig c;
    c.M = M;
    c.N = N;
    c.eps_reflect = ideal ? 0.0 : eps_reflect;
    c.eps_block = ideal ? 0.0 : eps_block;
    c.av_rounds = av_rounds;
    c.block_placement = placement;
    c.validate();
    return c;
}

FidelityGrid cmd_sweep(const SweepConfig& cfg) {
    if (cfg.m_min < 1 || cfg.n_min < 1 || cfg.m_max < cfg.m_min || cfg.n_max < cfg.n_min)
        throw ConfigError("ranges must satisfy 1 <= min <= max");
    if (cfg.samples < 1) throw ConfigError("samples must be at least 1");
    ProtocolOptions p = cfg.protocol;
    p.M = cfg.m_min;
    p.N = cfg.n_min;
    const ProtocolConfig tmpl = p.config();
    const BlochSample sample = sample_bloch(cfg.samples, cfg.scheme, cfg.seed);
    const FidelityGrid grid =
        sweep(SweepRange{cfg.m_min, cfg.m_max}, SweepRange{cfg.n_min, cfg.n_max}, tmpl, sample, {cfg.mode, cfg.workers});

    const std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + cfg.out_dir + ": " + ec.message());
    std::ostringstream csv, svg;
    write_grid_csv(csv, grid);
    write_grid_svg(svg, grid);
    Json j = grid_to_json(grid);
    j["samples"] = {{"count", cfg.samples}, {"scheme", std::string(name(cfg.scheme))}, {"seed", cfg.seed}};
    j["eps_reflect"] = tmpl.eps_reflect;
    j["eps_block"] = tmpl.eps_block;
    j["av_rounds"] = tmpl.av_rounds;
    write_file((dir / (cfg.prefix + ".csv")).string(), csv.str(), std::cout);
    write_file((dir / (cfg.prefix + ".json")).string(), dump(j), std::cout);
    write_file((dir / (cfg.prefix + ".svg")).string(), svg.str(), std::cout);
    return grid;
}

Json cmd_counterport(const CounterportConfig& cfg, std::ostream& stdout_stream) {
    const ProtocolConfig pc = cfg.protocol.config();
    const BobQubit bob = BobQubit::make({cfg.alpha_re, cfg.alpha_im}, {cfg.beta_re, cfg.beta_im});
    const CounterportResult r = counterport(bob, pc);
    Json j = counterport_to_json(bob, pc, r);
    write_file(cfg.out, dump(j), stdout_stream);
    return j;
}

ParadoxReport cmd_paradox(const ParadoxConfig& cfg, std::ostream& stdout_stream) {
    paradox_schedule(cfg.M, cfg.N, cfg.av_rounds);
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    const ParadoxReport r = paradox_report(cfg.M, cfg.N, cfg.av_rounds, cfg.epsilon);
    stdout_stream << paradox_table(r);
    write_file(cfg.out, dump(paradox_to_json(r)), stdout_stream);
    return r;
}

WeakTraceMap cmd_weakvalues(const WeakValuesConfig& cfg, std::ostream& stdout_stream) {
    const CircuitSchedule c = paradox_schedule(cfg.M, cfg.N, cfg.av_rounds);
    BoundaryPair b;
    if (cfg.boundary == "end-to-end") {
        b = end_to_end(c);
    } else if (cfg.boundary == "end-to-end-detector") {
        b = end_to_end_detector(c);
    } else if (cfg.boundary == "per-cycle") {
        if (cfg.cycle < 0 || cfg.cycle >= cfg.M) throw ConfigError("cycle must lie in [0, M)");
        b = per_cycle(c, cfg.cycle);
    } else {
        throw ConfigError("boundary must be end-to-end, end-to-end-detector or per-cycle");
    }
    const WeakTraceMap m = weak_trace_map(c, b);
    std::ostringstream csv;
    write_weak_csv(csv, m);
    write_file(cfg.out, csv.str(), stdout_stream);
    return m;
}

Json cmd_histories(const HistoriesConfig& cfg, std::ostream& stdout_stream) {
    const CircuitSchedule c = paradox_schedule(cfg.M, cfg.N, cfg.av_rounds);
    std::vector<HistoryFamily> families;
    if (!cfg.family_file.empty()) {
        std::ifstream f(cfg.family_file);
        if (!f) throw IoError("cannot open " + cfg.family_file);
        try {
            families.push_back(read_family(f));
        } catch (const FormatError& e) {
            throw FamilyError(cfg.family_file + ": " + e.what());
        }
    } else {
        if (cfg.families.empty()) throw ConfigError("no families selected");
        for (int n : cfg.families) {
            if ((n == 8 || n == 9) && cfg.M < 2) throw ConfigError("families 8 and 9 need M >= 2");
            families.push_back(builtin_family(n, c));
        }
    }
    Json out;
    out["M"] = cfg.M;
    out["N"] = cfg.N;
    out["av_rounds"] = cfg.av_rounds;
    Json list = Json::array();
    for (const auto& f : families) list.push_back(histories_to_json(f, c));
    out["families"] = std::move(list);
    write_file(cfg.out, dump(out), stdout_stream);
    return out;
}

namespace {

void add_protocol_options(CLI::App* sub, ProtocolOptions& p) {
    sub->add_option("-M,--outer", p.M, "outer cycles")->capture_default_str();
    sub->add_option("-N,--inner", p.N, "inner cycles per outer cycle")->capture_default_str();
    sub->add_option("--eps-reflect", p.eps_reflect, "loss probability per reflection off Bob")->capture_default_str();
    sub->add_option("--eps-block", p.eps_block, "erroneous reflection probability when Bob blocks")
        ->capture_default_str();
    sub->add_flag("--ideal", p.ideal, "set both error rates to zero");
    sub->add_option("--av-rounds", p.av_rounds, "Alice-block extensions per outer cycle")->capture_default_str();
    const std::map<std::string, BlockErrorPlacement> placements{
        {"per-inner-cycle", BlockErrorPlacement::PerInnerCycle}, {"per-outer-cycle", BlockErrorPlacement::PerOuterCycle}};
    sub->add_option("--block-placement", p.placement, "where the blocking error applies")
        ->transform(CLI::CheckedTransformer(placements, CLI::ignore_case))
        ->default_str("per-inner-cycle");
}

}  // namespace

int exit_code_for(std::exception_ptr e, std::ostream& err) {
    try {
        std::rethrow_exception(e);
    } catch (const ConservationBreach& ex) {
        err << "conservation violated: " << ex.what() << "\n";
        return kExitConservation;
    } catch (const NotAnIsometry& ex) {
        err << "conservation violated: " << ex.what() << "\n";
        return kExitConservation;
    } catch (const ConfigError& ex) {
        err << "config error: " << ex.what() << "\n";
    } catch (const FamilyError& ex) {
        err << "config error: " << ex.what() << "\n";
    } catch (const ScheduleError& ex) {
        err << "config error: " << ex.what() << "\n";
    } catch (const IoError& ex) {
        err << "i/o error: " << ex.what() << "\n";
        return kExitIo;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitIo;
    }
    return kExitConfig;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Counterfactual qubit transport and where-was-the-photon analysis"};
    app.set_config("--config", "", "key-value config file; command-line flags take precedence");
    app.allow_config_extras(false);
    app.fallthrough();
    app.require_subcommand(1);

    SweepConfig sweep_cfg;
    sweep_cfg.workers = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep_cmd = app.add_subcommand("sweep", "average fidelity over an (M, N) grid");
    add_protocol_options(sweep_cmd, sweep_cfg.protocol);
    sweep_cmd->add_option("--m-min", sweep_cfg.m_min)->capture_default_str();
    sweep_cmd->add_option("--m-max", sweep_cfg.m_max)->capture_default_str();
    sweep_cmd->add_option("--n-min", sweep_cfg.n_min)->capture_default_str();
    sweep_cmd->add_option("--n-max", sweep_cfg.n_max)->capture_default_str();
    sweep_cmd->add_option("--samples", sweep_cfg.samples, "Bloch-sphere sample size")->capture_default_str();
    const std::map<std::string, SampleScheme> schemes{{"fibonacci", SampleScheme::Fibonacci},
                                                      {"seeded-uniform", SampleScheme::SeededUniform}};
    sweep_cmd->add_option("--scheme", sweep_cfg.scheme)
        ->transform(CLI::CheckedTransformer(schemes, CLI::ignore_case))
        ->default_str("fibonacci");
    sweep_cmd->add_option("--seed", sweep_cfg.seed)->capture_default_str();
    const std::map<std::string, FidelityMode> modes{{"loss-inclusive", FidelityMode::LossInclusive},
                                                    {"post-selected", FidelityMode::PostSelected}};
    sweep_cmd->add_option("--fidelity-mode", sweep_cfg.mode)
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
        ->default_str("loss-inclusive");
    sweep_cmd->add_option("--workers", sweep_cfg.workers, "parallel cells (results do not depend on it)");
    sweep_cmd->add_option("--out-dir", sweep_cfg.out_dir)->capture_default_str();
    sweep_cmd->add_option("--prefix", sweep_cfg.prefix)->capture_default_str();

    CounterportConfig cp_cfg;
    auto* cp_cmd = app.add_subcommand("counterport", "single counterportation run with per-round states");
    add_protocol_options(cp_cmd, cp_cfg.protocol);
    cp_cmd->add_option("--alpha", cp_cfg.alpha_re, "real part of Bob's |0> amplitude")->capture_default_str();
    cp_cmd->add_option("--alpha-im", cp_cfg.alpha_im)->capture_default_str();
    cp_cmd->add_option("--beta", cp_cfg.beta_re, "real part of Bob's |1> amplitude")->capture_default_str();
    cp_cmd->add_option("--beta-im", cp_cfg.beta_im)->capture_default_str();
    cp_cmd->add_option("-o,--out", cp_cfg.out, "JSON output, - for stdout")->capture_default_str();

    ParadoxConfig px_cfg;
    auto* px_cmd = app.add_subcommand("paradox", "weak values and probe signals of the nested interferometer");
    px_cmd->add_option("-M,--outer", px_cfg.M)->capture_default_str();
    px_cmd->add_option("-N,--inner", px_cfg.N)->capture_default_str();
    px_cmd->add_option("--av-rounds", px_cfg.av_rounds)->capture_default_str();
    px_cmd->add_option("--epsilon", px_cfg.epsilon, "probe coupling angle")->capture_default_str();
    px_cmd->add_option("-o,--out", px_cfg.out, "JSON report, - for stdout")->capture_default_str();

    WeakValuesConfig wv_cfg;
    auto* wv_cmd = app.add_subcommand("weakvalues", "weak value of every arm at every time-stamp");
    wv_cmd->add_option("-M,--outer", wv_cfg.M)->capture_default_str();
    wv_cmd->add_option("-N,--inner", wv_cfg.N)->capture_default_str();
    wv_cmd->add_option("--av-rounds", wv_cfg.av_rounds)->capture_default_str();
    wv_cmd->add_option("--boundary", wv_cfg.boundary)
        ->check(CLI::IsMember({"end-to-end", "end-to-end-detector", "per-cycle"}))
        ->capture_default_str();
    wv_cmd->add_option("--cycle", wv_cfg.cycle, "outer cycle for per-cycle boundaries")->capture_default_str();
    wv_cmd->add_option("-o,--out", wv_cfg.out, "CSV output, - for stdout")->capture_default_str();

    HistoriesConfig hs_cfg;
    auto* hs_cmd = app.add_subcommand("histories", "chain-kets, consistency and probabilities of history families");
    hs_cmd->add_option("-M,--outer", hs_cfg.M)->capture_default_str();
    hs_cmd->add_option("-N,--inner", hs_cfg.N)->capture_default_str();
    hs_cmd->add_option("--av-rounds", hs_cfg.av_rounds)->capture_default_str();
    hs_cmd->add_option("--family", hs_cfg.families, "built-in family number (7, 8, 9, 10)")
        ->check(CLI::IsMember({7, 8, 9, 10}));
    hs_cmd->add_option("--family-file", hs_cfg.family_file, "family in the text format");
    hs_cmd->add_option("-o,--out", hs_cfg.out, "JSON output, - for stdout")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*sweep_cmd) {
            const FidelityGrid g = cmd_sweep(sweep_cfg);
            std::cout << "wrote " << g.cells.size() << " cells to " << sweep_cfg.out_dir << "/" << sweep_cfg.prefix
                      << ".{csv,json,svg}\n";
        } else if (*cp_cmd) {
            cmd_counterport(cp_cfg, std::cout);
        } else if (*px_cmd) {
            cmd_paradox(px_cfg, std::cout);
        } else if (*wv_cmd) {
            cmd_weakvalues(wv_cfg, std::cout);
        } else if (*hs_cmd) {
            cmd_histories(hs_cfg, std::cout);
        }
    } catch (...) {
        return exit_code_for(std::current_exception(), std::cerr);
    }
    return kExitOk;
}

}  // namespace cfq
