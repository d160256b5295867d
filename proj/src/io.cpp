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

#include "cfq/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>

#include "cfq/schedule_io.hpp"

namespace cfq {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError("line " + std::to_string(line) + ": bad number '" + s + "'");
    }
}

int to_int(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError("line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
}

// Fills the grid's bounds and checks every (M, N) appears exactly once.
FidelityGrid assemble(std::vector<GridCell> cells, FidelityMode mode) {
    if (cells.empty()) throw FormatError("grid has no cells");
    FidelityGrid g;
    g.mode = mode;
    g.m_min = g.m_max = cells.front().M;
    g.n_min = g.n_max = cells.front().N;
    for (const auto& c : cells) {
        g.m_min = std::min(g.m_min, c.M);
        g.m_max = std::max(g.m_max, c.M);
        g.n_min = std::min(g.n_min, c.N);
        g.n_max = std::max(g.n_max, c.N);
    }
    const std::size_t cols = static_cast<std::size_t>(g.n_max - g.n_min + 1);
    const std::size_t total = static_cast<std::size_t>(g.m_max - g.m_min + 1) * cols;
    if (cells.size() != total) throw FormatError("grid is not a full rectangle of cells");
    g.cells.assign(total, GridCell{});
    std::vector<bool> seen(total, false);
    for (const auto& c : cells) {
        const std::size_t k = static_cast<std::size_t>(c.M - g.m_min) * cols + (c.N - g.n_min);
        if (seen[k]) throw FormatError("duplicate grid cell");
        seen[k] = true;
        g.cells[k] = c;
    }
    return g;
}

struct Rgb {
    double r, g, b;
};

constexpr std::array<Rgb, 3> kRamp{{{68, 1, 84}, {33, 145, 140}, {253, 231, 37}}};

std::string ramp_color(double v) {
    v = std::clamp(v, 0.0, 1.0) * (kRamp.size() - 1);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(v), kRamp.size() - 2);
    const double t = v - static_cast<double>(i);
    auto mix = [t](double a, double b) { return static_cast<int>(std::lround(a + (b - a) * t)); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(kRamp[i].r, kRamp[i + 1].r), mix(kRamp[i].g, kRamp[i + 1].g),
                  mix(kRamp[i].b, kRamp[i + 1].b));
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

void write_grid_csv(std::ostream& out, const FidelityGrid& g) {
    out << "M,N,avg_fidelity,avg_success_prob\n";
    for (const auto& c : g.cells)
        out << c.M << "," << c.N << "," << num(c.avg_fidelity) << "," << num(c.avg_success_prob) << "\n";
}

FidelityGrid read_grid_csv(std::istream& in) {
    std::string line;
    int lineno = 1;
    if (!std::getline(in, line) || split_csv(line) != std::vector<std::string>{"M", "N", "avg_fidelity", "avg_success_prob"})
        throw FormatError("grid CSV header must be M,N,avg_fidelity,avg_success_prob");
    std::vector<GridCell> cells;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv(line);
        if (f.size() != 4) throw FormatError("line " + std::to_string(lineno) + ": expected 4 fields");
        cells.push_back({to_int(f[0], lineno), to_int(f[1], lineno), to_double(f[2], lineno), to_double(f[3], lineno)});
    }
    return assemble(std::move(cells), FidelityMode::LossInclusive);
}

Json grid_to_json(const FidelityGrid& g) {
    Json j;
    j["M_range"] = {g.m_min, g.m_max};
    j["N_range"] = {g.n_min, g.n_max};
    j["fidelity_mode"] = std::string(name(g.mode));
    Json cells = Json::array();
    for (const auto& c : g.cells)
        cells.push_back({{"M", c.M}, {"N", c.N}, {"avg_fidelity", c.avg_fidelity}, {"avg_success_prob", c.avg_success_prob}});
    j["cells"] = std::move(cells);
    return j;
}

FidelityGrid grid_from_json(const Json& j) {
    try {
        auto mode = parse_fidelity_mode(j.at("fidelity_mode").get<std::string>());
        if (!mode) throw FormatError("unknown fidelity mode");
        std::vector<GridCell> cells;
        for (const auto& c : j.at("cells"))
            cells.push_back({c.at("M").get<int>(), c.at("N").get<int>(), c.at("avg_fidelity").get<double>(),
                             c.at("avg_success_prob").get<double>()});
        FidelityGrid g = assemble(std::move(cells), *mode);
        if (j.at("M_range") != Json{g.m_min, g.m_max} || j.at("N_range") != Json{g.n_min, g.n_max})
            throw FormatError("grid ranges disagree with its cells");
        return g;
    } catch (const Json::exception& e) {
        throw FormatError(std::string("grid JSON: ") + e.what());
    }
}

void write_grid_svg(std::ostream& out, const FidelityGrid& g) {
    const int cols = g.n_max - g.n_min + 1;
    const int rows = g.m_max - g.m_min + 1;
    const int cs = 24;                 // cell size
    const int left = 56, top = 40;     // plot origin
    const int legend_w = 16, legend_gap = 28;
    const int width = left + cols * cs + legend_gap + legend_w + 56;
    const int height = top + rows * cs + 56;
    auto x_of = [&](int col) { return left + col * cs; };
    auto y_of = [&](int row) { return top + (rows - 1 - row) * cs; };  // M grows upward

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\" data-fidelity-mode=\"" << name(g.mode) << "\">\n";
    out << "<defs><linearGradient id=\"ramp\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">";
    for (std::size_t i = 0; i < kRamp.size(); ++i) {
        const double v = static_cast<double>(i) / (kRamp.size() - 1);
        out << "<stop offset=\"" << num(v) << "\" stop-color=\"" << ramp_color(v) << "\"/>";
    }
    out << "</linearGradient></defs>\n";
    out << "<text x=\"" << left << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">average fidelity ("
        << xml_escape(std::string(name(g.mode))) << ")</text>\n";

    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const GridCell& cell = g.cells[static_cast<std::size_t>(r) * cols + c];
            out << "<rect class=\"cell\" x=\"" << x_of(c) << "\" y=\"" << y_of(r) << "\" width=\"" << cs
                << "\" height=\"" << cs << "\" fill=\"" << ramp_color(cell.avg_fidelity) << "\" data-m=\"" << cell.M
                << "\" data-n=\"" << cell.N << "\" data-fidelity=\"" << num(cell.avg_fidelity) << "\" data-success=\""
                << num(cell.avg_success_prob) << "\"><title>M=" << cell.M << " N=" << cell.N
                << " F=" << num(cell.avg_fidelity) << "</title></rect>\n";
        }
    }

    // Classical limit: cell edges that separate > 2/3 from <= 2/3.
    std::ostringstream d;
    auto above = [&](int r, int c) { return g.cells[static_cast<std::size_t>(r) * cols + c].avg_fidelity > kClassicalLimit; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols && above(r, c) != above(r, c + 1))
                d << "M" << x_of(c + 1) << " " << y_of(r) << "V" << y_of(r) + cs;
            if (r + 1 < rows && above(r, c) != above(r + 1, c))
                d << "M" << x_of(c) << " " << y_of(r) << "H" << x_of(c) + cs;
        }
    }
    out << "<path class=\"classical-limit\" data-level=\"" << num(kClassicalLimit) << "\" d=\"" << d.str()
        << "\" fill=\"none\" stroke=\"#ffffff\" stroke-width=\"2\"/>\n";

    // Axes.
    const int step_n = std::max(1, cols / 10), step_m = std::max(1, rows / 10);
    for (int c = 0; c < cols; c += step_n)
        out << "<text class=\"tick-n\" x=\"" << x_of(c) + cs / 2 << "\" y=\"" << top + rows * cs + 14
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << g.n_min + c << "</text>\n";
    for (int r = 0; r < rows; r += step_m)
        out << "<text class=\"tick-m\" x=\"" << left - 6 << "\" y=\"" << y_of(r) + cs / 2 + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << g.m_min + r << "</text>\n";
    out << "<text x=\"" << left + cols * cs / 2 << "\" y=\"" << top + rows * cs + 34
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">N (inner cycles)</text>\n";
    out << "<text x=\"16\" y=\"" << top + rows * cs / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\" transform=\"rotate(-90 16 " << top + rows * cs / 2 << ")\">M (outer cycles)</text>\n";

    // Legend.
    const int lx = left + cols * cs + legend_gap;
    out << "<rect class=\"legend\" x=\"" << lx << "\" y=\"" << top << "\" width=\"" << legend_w << "\" height=\""
        << rows * cs << "\" fill=\"url(#ramp)\"/>\n";
    for (double v : {0.0, kClassicalLimit, 1.0})
        out << "<text x=\"" << lx + legend_w + 4 << "\" y=\"" << top + static_cast<int>(std::lround((1.0 - v) * rows * cs)) + 4
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << (v == kClassicalLimit ? "2/3" : num(v)) << "</text>\n";
    out << "</svg>\n";
}

FidelityGrid read_grid_svg(std::istream& in) {
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.find("<svg") == std::string::npos) throw FormatError("not an SVG document");
    std::smatch mode_match;
    static const std::regex mode_re("data-fidelity-mode=\"([a-z-]+)\"");
    if (!std::regex_search(text, mode_match, mode_re)) throw FormatError("heatmap has no fidelity mode");
    auto mode = parse_fidelity_mode(mode_match[1].str());
    if (!mode) throw FormatError("unknown fidelity mode in heatmap");

    static const std::regex cell_re(
        "<rect class=\"cell\"[^>]*data-m=\"(-?[0-9]+)\" data-n=\"(-?[0-9]+)\" data-fidelity=\"([^\"]+)\" "
        "data-success=\"([^\"]+)\"");
    std::vector<GridCell> cells;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), cell_re); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        cells.push_back({to_int(m[1].str(), 0), to_int(m[2].str(), 0), to_double(m[3].str(), 0), to_double(m[4].str(), 0)});
    }
    return assemble(std::move(cells), *mode);
}

void write_weak_csv(std::ostream& out, const WeakTraceMap& m) {
    out << "time,arm,re,im,status\n";
    for (const auto& c : m.cells) {
        out << c.time << "," << name(c.arm) << ",";
        if (c.value)
            out << num(c.value->real()) << "," << num(c.value->imag()) << ",ok\n";
        else
            out << ",,orthogonal\n";
    }
}

WeakTraceMap read_weak_csv(std::istream& in) {
    std::string line;
    int lineno = 1;
    if (!std::getline(in, line) || split_csv(line) != std::vector<std::string>{"time", "arm", "re", "im", "status"})
        throw FormatError("weak-trace CSV header must be time,arm,re,im,status");
    WeakTraceMap m;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv(line);
        if (f.size() != 5) throw FormatError("line " + std::to_string(lineno) + ": expected 5 fields");
        auto arm = parse_path(f[1]);
        if (!arm) throw FormatError("line " + std::to_string(lineno) + ": unknown arm '" + f[1] + "'");
        WeakCell cell{*arm, f[0], std::nullopt};
        if (f[4] == "ok")
            cell.value = std::complex<double>(to_double(f[2], lineno), to_double(f[3], lineno));
        else if (f[4] != "orthogonal")
            throw FormatError("line " + std::to_string(lineno) + ": bad status '" + f[4] + "'");
        if (m.times.empty() || m.times.back() != cell.time) m.times.push_back(cell.time);
        if (std::find(m.arms.begin(), m.arms.end(), cell.arm) == m.arms.end()) m.arms.push_back(cell.arm);
        m.cells.push_back(std::move(cell));
    }
    if (m.cells.size() != m.arms.size() * m.times.size()) throw FormatError("weak-trace CSV is not a full table");
    return m;
}

Json complex_to_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::complex<double> complex_from_json(const Json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

Json paradox_to_json(const ParadoxReport& r) {
    Json j;
    j["M"] = r.M;
    j["N"] = r.N;
    j["av_rounds"] = r.av_rounds;
    j["epsilon"] = r.epsilon;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"boundary", row.boundary},
                        {"arm", std::string(name(row.arm))},
                        {"time", row.time},
                        {"weak_value", row.weak_value ? complex_to_json(*row.weak_value) : Json()},
                        {"probe_signal", row.probe_signal}});
    }
    j["rows"] = std::move(rows);
    j["channel_probe_signal"] = r.channel_signal;
    return j;
}

ParadoxReport paradox_from_json(const Json& j) {
    try {
        ParadoxReport r;
        r.M = j.at("M").get<int>();
        r.N = j.at("N").get<int>();
        r.av_rounds = j.at("av_rounds").get<int>();
        r.epsilon = j.at("epsilon").get<double>();
        r.channel_signal = j.at("channel_probe_signal").get<double>();
        for (const auto& row : j.at("rows")) {
            auto arm = parse_path(row.at("arm").get<std::string>());
            if (!arm) throw FormatError("unknown arm in paradox report");
            ParadoxRow p{row.at("boundary").get<std::string>(), *arm, row.at("time").get<std::string>(), std::nullopt,
                         row.at("probe_signal").get<double>()};
            if (!row.at("weak_value").is_null()) p.weak_value = complex_from_json(row.at("weak_value"));
            r.rows.push_back(std::move(p));
        }
        return r;
    } catch (const Json::exception& e) {
        throw FormatError(std::string("paradox JSON: ") + e.what());
    }
}

std::string paradox_table(const ParadoxReport& r) {
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "paradox M=%d N=%d av_rounds=%d epsilon=%g\n", r.M, r.N, r.av_rounds, r.epsilon);
    os << buf;
    std::snprintf(buf, sizeof buf, "%-20s %-4s %-8s %-26s %s\n", "boundary", "arm", "time", "weak value", "probe signal");
    os << buf;
    for (const auto& row : r.rows) {
        std::string w = "orthogonal";
        if (row.weak_value) {
            char wb[64];
            std::snprintf(wb, sizeof wb, "%+.6e%+.6ei", row.weak_value->real(), row.weak_value->imag());
            w = wb;
        }
        std::snprintf(buf, sizeof buf, "%-20s %-4s %-8s %-26s %+.6e\n", row.boundary.c_str(),
                      std::string(name(row.arm)).c_str(), row.time.c_str(), w.c_str(), row.probe_signal);
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "channel probe (end-to-end, C, every stamp): %+.6e\n", r.channel_signal);
    os << buf;
    return os.str();
}

Json state_to_json(const StateVector& s) {
    Json out = Json::array();
    for (int i = 0; i < kBasisSize; ++i) {
        const std::complex<double> a = s.amplitudes()[i];
        if (a == std::complex<double>(0)) continue;
        const BasisLabel l = label_at(i);
        out.push_back({{"path", std::string(name(l.path))},
                       {"pol", std::string(name(l.pol, PolNaming::RL))},
                       {"bob", std::string(name(l.bob))},
                       {"re", a.real()},
                       {"im", a.imag()}});
    }
    return out;
}

StateVector state_from_json(const Json& j) {
    Amplitudes<double> amps = Amplitudes<double>::Zero();
    try {
        for (const auto& e : j) {
            auto path = parse_path(e.at("path").get<std::string>());
            auto pol = parse_pol(e.at("pol").get<std::string>());
            const std::string bob = e.at("bob").get<std::string>();
            if (!path || !pol || (bob != "0" && bob != "1" && bob != "-")) throw FormatError("bad state label");
            const Bob b = bob == "0" ? Bob::Zero : bob == "1" ? Bob::One : Bob::Absent;
            amps[index_of({*path, *pol, b})] = {e.at("re").get<double>(), e.at("im").get<double>()};
        }
    } catch (const Json::exception& e) {
        throw FormatError(std::string("state JSON: ") + e.what());
    }
    return StateVector(amps);
}

namespace {

Json matrix_to_json(const Eigen::Matrix2cd& m) {
    Json out = Json::array();
    for (int r = 0; r < 2; ++r) {
        Json row = Json::array();
        for (int c = 0; c < 2; ++c) row.push_back(complex_to_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace

Json counterport_to_json(const BobQubit& bob, const ProtocolConfig& cfg, const CounterportResult& r) {
    Json j;
    j["bob"] = {{"alpha", complex_to_json(bob.alpha)}, {"beta", complex_to_json(bob.beta)}};
    j["config"] = {{"M", cfg.M},
                   {"N", cfg.N},
                   {"eps_reflect", cfg.eps_reflect},
                   {"eps_block", cfg.eps_block},
                   {"av_rounds", cfg.av_rounds},
                   {"block_placement", cfg.block_placement == BlockErrorPlacement::PerInnerCycle ? "per-inner-cycle"
                                                                                                 : "per-outer-cycle"}};
    j["rounds"] = {{"after_round1", state_to_json(r.after_round1)},
                   {"after_local", state_to_json(r.after_local)},
                   {"after_round2", state_to_json(r.after_round2)},
                   {"final", state_to_json(r.final_state)}};
    j["p_port1"] = r.p_port1;
    j["p_port2"] = r.p_port2;
    j["p_lost"] = r.p_lost;
    j["rho_port1"] = matrix_to_json(r.rho_port1);
    j["rho_port2"] = matrix_to_json(r.rho_port2);
    j["fidelity"] = r.fidelity;
    j["fidelity_postselected"] = r.fidelity_postselected;
    return j;
}

Json histories_to_json(const HistoryFamily& f, const CircuitSchedule& c) {
    const auto hs = f.histories();
    const ConsistencyReport rep = is_consistent(f, c);
    std::vector<double> probs;
    if (rep.consistent) probs = history_probabilities(f, c);
    Json j;
    j["family"] = f.name;
    j["pre"] = {{"time", f.pre_time}, {"label", to_string(f.pre)}};
    j["post"] = {{"time", f.post_time}, {"event", f.post.to_string()}};
    j["history_count"] = hs.size();
    j["consistent"] = rep.consistent;
    j["worst_overlap"] = rep.worst_overlap;
    Json list = Json::array();
    for (std::size_t i = 0; i < hs.size(); ++i) {
        Json h;
        h["history"] = hs[i].to_string();
        h["weight"] = chain_ket(hs[i], f, c).norm_squared();
        h["probability"] = rep.consistent ? Json(probs[i]) : Json();
        list.push_back(std::move(h));
    }
    j["histories"] = std::move(list);
    Json off = Json::array();
    for (const auto& [a, b] : rep.offending) off.push_back({hs[a].to_string(), hs[b].to_string()});
    j["offending_pairs"] = std::move(off);
    return j;
}

}  // namespace cfq
