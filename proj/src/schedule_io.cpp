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

#include "cfq/schedule_io.hpp"

#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

namespace cfq {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string bob_token(Bob b) { return std::string(name(b)); }

Bob parse_bob(const std::string& s, int line) {
    if (s == "0") return Bob::Zero;
    if (s == "1") return Bob::One;
    if (s == "-") return Bob::Absent;
    throw FormatError("line " + std::to_string(line) + ": bad bob token '" + s + "'");
}

Path parse_path_or_throw(const std::string& s, int line) {
    auto p = parse_path(s);
    if (!p) throw FormatError("line " + std::to_string(line) + ": unknown path '" + s + "'");
    return *p;
}

double parse_double(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError("line " + std::to_string(line) + ": bad number '" + s + "'");
    }
}

int parse_int(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError("line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
}

std::map<std::string, std::string> parse_fields(std::istringstream& is, int line) {
    std::map<std::string, std::string> out;
    std::string tok;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw FormatError("line " + std::to_string(line) + ": expected key=value");
        out[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return out;
}

}  // namespace

void write_schedule(std::ostream& out, const CircuitSchedule& c) {
    out << "schedule v1\n";
    out << "origin " << c.origin() << "\n";
    const auto& amps = c.pre().amplitudes();
    for (int i = 0; i < kBasisSize; ++i) {
        if (amps[i] == std::complex<double>(0)) continue;
        const BasisLabel l = label_at(i);
        out << "pre " << name(l.path) << " " << name(l.pol) << " " << bob_token(l.bob) << " " << fmt(amps[i].real())
            << " " << fmt(amps[i].imag()) << "\n";
    }
    if (c.post()) {
        for (int i = 0; i < kBasisSize; ++i) {
            if (!c.post()->labels().test(i)) continue;
            const BasisLabel l = label_at(i);
            out << "post " << name(l.path) << " " << name(l.pol) << " " << bob_token(l.bob) << "\n";
        }
    }
    for (const auto& step : c.steps()) {
        out << "stamp " << step.label << " role=" << name(step.role) << " outer=" << step.outer
            << " inner=" << step.inner << "\n";
        for (const auto& e : step.elements) {
            out << "element kind=" << name(e.kind) << " arms=";
            for (std::size_t i = 0; i < e.arms.size(); ++i) out << (i ? "," : "") << name(e.arms[i]);
            switch (e.kind) {
                case ElementKind::HWP:
                case ElementKind::SPR: out << " angle=" << fmt(e.angle); break;
                case ElementKind::Loss:
                    out << " transmission=" << fmt(e.transmission) << " sink=" << name(e.sink);
                    if (e.bob) out << " bob=" << bob_token(*e.bob);
                    break;
                case ElementKind::Block:
                    out << " sink=" << name(e.sink);
                    if (e.bob) out << " bob=" << bob_token(*e.bob);
                    break;
                case ElementKind::Sink: out << " sink=" << name(e.sink); break;
                default: break;
            }
            out << "\n";
        }
    }
    out << "end\n";
}

std::string to_text(const CircuitSchedule& c) {
    std::ostringstream os;
    write_schedule(os, c);
    return os.str();
}

CircuitSchedule read_schedule(std::istream& in) {
    std::string line;
    int lineno = 0;
    std::string origin = "t0";
    Amplitudes<double> pre = Amplitudes<double>::Zero();
    std::optional<LabelSet> post;
    std::vector<TimeStep> steps;
    bool header = false, ended = false;
    // Many elements repeat; share compiled maps between identical records.
    std::map<std::string, Element> cache;

    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream is(line);
        std::string key;
        if (!(is >> key)) continue;
        if (ended) throw FormatError("line " + std::to_string(lineno) + ": content after 'end'");
        if (!header) {
            std::string version;
            is >> version;
            if (key != "schedule" || version != "v1") throw FormatError("missing 'schedule v1' header");
            header = true;
            continue;
        }
        if (key == "origin") {
            if (!(is >> origin)) throw FormatError("line " + std::to_string(lineno) + ": origin needs a label");
        } else if (key == "pre" || key == "post") {
            std::string p, pol, bob;
            if (!(is >> p >> pol >> bob)) throw FormatError("line " + std::to_string(lineno) + ": short record");
            auto parsed_pol = parse_pol(pol);
            if (!parsed_pol) throw FormatError("line " + std::to_string(lineno) + ": bad polarization '" + pol + "'");
            const BasisLabel l{parse_path_or_throw(p, lineno), *parsed_pol, parse_bob(bob, lineno)};
            if (key == "pre") {
                std::string re, im;
                if (!(is >> re >> im)) throw FormatError("line " + std::to_string(lineno) + ": pre needs re im");
                pre[index_of(l)] = {parse_double(re, lineno), parse_double(im, lineno)};
            } else {
                if (!post) post = LabelSet();
                post->set(index_of(l));
            }
        } else if (key == "stamp") {
            TimeStep step;
            if (!(is >> step.label)) throw FormatError("line " + std::to_string(lineno) + ": stamp needs a label");
            auto fields = parse_fields(is, lineno);
            if (fields.count("role")) {
                auto r = parse_step_role(fields["role"]);
                if (!r) throw FormatError("line " + std::to_string(lineno) + ": bad role");
                step.role = *r;
            }
            if (fields.count("outer")) step.outer = parse_int(fields["outer"], lineno);
            if (fields.count("inner")) step.inner = parse_int(fields["inner"], lineno);
            steps.push_back(std::move(step));
        } else if (key == "element") {
            if (steps.empty()) throw FormatError("line " + std::to_string(lineno) + ": element before any stamp");
            std::string rest;
            std::getline(is, rest);
            if (auto hit = cache.find(rest); hit != cache.end()) {
                steps.back().elements.push_back(hit->second);
                continue;
            }
            std::istringstream fs(rest);
            auto fields = parse_fields(fs, lineno);
            auto kind = parse_element_kind(fields["kind"]);
            if (!kind) throw FormatError("line " + std::to_string(lineno) + ": unknown element kind");
            std::vector<Path> arms;
            for (const auto& a : split(fields["arms"], ',')) arms.push_back(parse_path_or_throw(a, lineno));
            double angle = fields.count("angle") ? parse_double(fields["angle"], lineno) : 0.0;
            double transmission = fields.count("transmission") ? parse_double(fields["transmission"], lineno) : 0.0;
            Path sink_path = fields.count("sink") ? parse_path_or_throw(fields["sink"], lineno) : Path::SinkD3;
            std::optional<Bob> bob;
            if (fields.count("bob")) bob = parse_bob(fields["bob"], lineno);
            try {
                Element e = make_element(*kind, arms, angle, transmission, sink_path, bob);
                cache.emplace(rest, e);
                steps.back().elements.push_back(std::move(e));
            } catch (const std::exception& ex) {
                throw FormatError("line " + std::to_string(lineno) + ": " + ex.what());
            }
        } else if (key == "end") {
            ended = true;
        } else {
            throw FormatError("line " + std::to_string(lineno) + ": unknown record '" + key + "'");
        }
    }
    if (!header) throw FormatError("missing 'schedule v1' header");
    if (!ended) throw FormatError("missing 'end'");
    std::optional<Projector> post_projector;
    if (post) post_projector = Projector(*post);
    return CircuitSchedule(origin, std::move(steps), StateVector(pre), post_projector);
}

CircuitSchedule schedule_from_text(const std::string& text) {
    std::istringstream is(text);
    return read_schedule(is);
}

}  // namespace cfq
