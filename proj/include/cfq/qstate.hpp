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

// Dense complex linear algebra over one fixed, explicitly labeled basis:
// path mode x polarization x Bob's qubit. Every state in the library lives in
// this space. Sink paths are detectors: amplitude that reaches a sink is
// frozen, and later arrivals on the same sink add in quadrature (they are
// distinct time bins and never interfere).

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <bitset>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cfq {

enum class Path : std::uint8_t {
    S,
    A,
    B,
    C,
    D,
    F,
    J,  // outer-cycle exhaust wire toward D3 / DA
    Rail1,
    Rail2,
    Port1,
    Port2,
    SinkD3,
    SinkD0,
    SinkDA,
    SinkDB,
    SinkBlock,
    SinkAlice,  // Alice's channel-entrance block (AV extension)
};
inline constexpr int kPathCount = 17;

/// One two-level polarization basis. H/V and R/L are display aliases of the
/// same pair: H == R, V == L.
enum class Pol : std::uint8_t { H, V };
inline constexpr Pol kR = Pol::H;
inline constexpr Pol kL = Pol::V;

enum class Bob : std::uint8_t { Zero, One, Absent };

enum class PolNaming { HV, RL };

inline constexpr bool is_sink(Path p) { return static_cast<int>(p) >= static_cast<int>(Path::SinkD3); }

inline constexpr std::array<std::string_view, kPathCount> kPathNames = {
    "S",     "A",     "B",      "C",      "D",      "F",      "J",      "Rail1",     "Rail2",
    "Port1", "Port2", "SinkD3", "SinkD0", "SinkDA", "SinkDB", "SinkBlock", "SinkAlice"};

inline constexpr std::string_view name(Path p) { return kPathNames[static_cast<int>(p)]; }
inline constexpr std::string_view name(Pol p, PolNaming n = PolNaming::HV) {
    if (n == PolNaming::HV) return p == Pol::H ? "H" : "V";
    return p == Pol::H ? "R" : "L";
}
inline constexpr std::string_view name(Bob b) {
    switch (b) {
        case Bob::Zero: return "0";
        case Bob::One: return "1";
        default: return "-";
    }
}

inline std::optional<Path> parse_path(std::string_view s) {
    for (int i = 0; i < kPathCount; ++i)
        if (kPathNames[i] == s) return static_cast<Path>(i);
    return std::nullopt;
}

/// Accepts either naming convention.
inline std::optional<Pol> parse_pol(std::string_view s) {
    if (s == "H" || s == "R") return Pol::H;
    if (s == "V" || s == "L") return Pol::V;
    return std::nullopt;
}

struct BasisLabel {
    Path path = Path::S;
    Pol pol = Pol::H;
    Bob bob = Bob::Absent;

    friend constexpr bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

inline constexpr int kBasisSize = kPathCount * 2 * 3;

inline constexpr int index_of(BasisLabel l) {
    return (static_cast<int>(l.path) * 2 + static_cast<int>(l.pol)) * 3 + static_cast<int>(l.bob);
}

inline constexpr BasisLabel label_at(int i) {
    return {static_cast<Path>(i / 6), static_cast<Pol>((i / 3) % 2), static_cast<Bob>(i % 3)};
}

inline std::string to_string(BasisLabel l, PolNaming n = PolNaming::HV) {
    std::string out = "|";
    out += name(l.path);
    out += ",";
    out += name(l.pol, n);
    if (l.bob != Bob::Absent) {
        out += ",";
        out += name(l.bob);
    }
    out += ">";
    return out;
}

class LabelMismatch : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class NotAnIsometry : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Amplitudes = Eigen::Matrix<Complex<Real>, kBasisSize, 1>;

/// Polarization qubit in the (H, V) == (R, L) basis.
template <typename Real>
using BasicPolState = Eigen::Matrix<Complex<Real>, 2, 1>;
using PolState = BasicPolState<double>;

using LabelSet = std::bitset<kBasisSize>;

inline constexpr double kPruneThreshold = 1e-15;

/// Immutable state over the labeled basis.
template <typename Real>
class BasicStateVector {
   public:
    using Scalar = Complex<Real>;

    BasicStateVector() : amps_(Amplitudes<Real>::Zero()) {}
    explicit BasicStateVector(const Amplitudes<Real>& amps) : amps_(amps) {}
    BasicStateVector(std::initializer_list<std::pair<BasisLabel, Scalar>> entries)
        : amps_(Amplitudes<Real>::Zero()) {
        for (const auto& [label, amp] : entries) amps_[index_of(label)] += amp;
    }

    static BasicStateVector basis(BasisLabel l) { return BasicStateVector{{l, Scalar(1)}}; }

    const Amplitudes<Real>& amplitudes() const { return amps_; }
    Scalar amplitude(BasisLabel l) const { return amps_[index_of(l)]; }
    Scalar operator[](BasisLabel l) const { return amplitude(l); }

    Real norm_squared() const { return amps_.squaredNorm(); }

    Real live_norm_squared() const {
        Real total = 0;
        for (int i = 0; i < kBasisSize; ++i)
            if (!is_sink(label_at(i).path)) total += std::norm(amps_[i]);
        return total;
    }

    /// Absorbed probability on one sink path.
    Real sink_weight(Path sink) const {
        Real total = 0;
        for (int i = 0; i < kBasisSize; ++i)
            if (label_at(i).path == sink) total += std::norm(amps_[i]);
        return total;
    }

    Real path_weight(Path p) const { return sink_weight(p); }

    LabelSet support(Real threshold = 0) const {
        LabelSet s;
        for (int i = 0; i < kBasisSize; ++i)
            if (std::abs(amps_[i]) > threshold) s.set(i);
        return s;
    }

    /// Zeroes amplitudes below `threshold` in magnitude.
    BasicStateVector pruned(Real threshold = Real(kPruneThreshold)) const {
        Amplitudes<Real> out = amps_;
        for (int i = 0; i < kBasisSize; ++i)
            if (std::abs(out[i]) < threshold) out[i] = Scalar(0);
        return BasicStateVector(out);
    }

    /// Same live amplitudes with every sink entry cleared.
    BasicStateVector live_part() const {
        Amplitudes<Real> out = amps_;
        for (int i = 0; i < kBasisSize; ++i)
            if (is_sink(label_at(i).path)) out[i] = Scalar(0);
        return BasicStateVector(out);
    }

    BasicStateVector normalized() const {
        const Real n = std::sqrt(norm_squared());
        if (n == Real(0)) throw std::domain_error("cannot normalize the zero vector");
        return BasicStateVector(amps_ / n);
    }

    /// Amplitudes on path `p` as a (pol x bob) block, bob index 0/1/absent.
    Eigen::Matrix<Scalar, 2, 3> block(Path p) const {
        Eigen::Matrix<Scalar, 2, 3> out;
        for (int pol = 0; pol < 2; ++pol)
            for (int b = 0; b < 3; ++b)
                out(pol, b) = amps_[index_of({p, static_cast<Pol>(pol), static_cast<Bob>(b)})];
        return out;
    }

    /// Live sum of two states in disjoint modes. Sink weights add
    /// incoherently.
    friend BasicStateVector combine_disjoint(const BasicStateVector& a, const BasicStateVector& b) {
        Amplitudes<Real> out = a.amps_ + b.amps_;
        for (int i = 0; i < kBasisSize; ++i)
            if (is_sink(label_at(i).path))
                out[i] = Scalar(std::sqrt(std::norm(a.amps_[i]) + std::norm(b.amps_[i])));
        return BasicStateVector(out);
    }

    friend BasicStateVector operator+(const BasicStateVector& a, const BasicStateVector& b) {
        return BasicStateVector(Amplitudes<Real>(a.amps_ + b.amps_));
    }
    friend BasicStateVector operator-(const BasicStateVector& a, const BasicStateVector& b) {
        return BasicStateVector(Amplitudes<Real>(a.amps_ - b.amps_));
    }
    friend BasicStateVector operator*(Scalar c, const BasicStateVector& s) {
        return BasicStateVector(Amplitudes<Real>(c * s.amps_));
    }

   private:
    Amplitudes<Real> amps_;
};

using StateVector = BasicStateVector<double>;

/// Tensor-product style projector: any union of basis labels.
class Projector {
   public:
    Projector() = default;
    explicit Projector(LabelSet labels) : labels_(labels) {}

    static Projector all() { return Projector(LabelSet().set()); }
    static Projector none() { return Projector(); }
    static Projector label(BasisLabel l) {
        LabelSet s;
        s.set(index_of(l));
        return Projector(s);
    }

    /// Product projector paths x pols x bobs. Empty pol/bob lists mean identity
    /// on that factor.
    static Projector on(std::initializer_list<Path> paths, std::initializer_list<Pol> pols = {},
                        std::initializer_list<Bob> bobs = {}) {
        return on(std::span<const Path>(paths.begin(), paths.size()),
                  std::span<const Pol>(pols.begin(), pols.size()),
                  std::span<const Bob>(bobs.begin(), bobs.size()));
    }
    static Projector on(std::span<const Path> paths, std::span<const Pol> pols = {},
                        std::span<const Bob> bobs = {}) {
        LabelSet s;
        for (int i = 0; i < kBasisSize; ++i) {
            const BasisLabel l = label_at(i);
            const bool path_ok = contains(paths, l.path);
            const bool pol_ok = pols.empty() || contains(pols, l.pol);
            const bool bob_ok = bobs.empty() || contains(bobs, l.bob);
            if (path_ok && pol_ok && bob_ok) s.set(i);
        }
        return Projector(s);
    }
    static Projector path(Path p) { return on({p}); }

    const LabelSet& labels() const { return labels_; }
    bool contains(BasisLabel l) const { return labels_.test(index_of(l)); }
    bool empty() const { return labels_.none(); }

    friend Projector operator|(const Projector& a, const Projector& b) { return Projector(a.labels_ | b.labels_); }
    friend Projector operator&(const Projector& a, const Projector& b) { return Projector(a.labels_ & b.labels_); }
    friend bool operator==(const Projector&, const Projector&) = default;

    template <typename Real>
    BasicStateVector<Real> apply(const BasicStateVector<Real>& s) const {
        Amplitudes<Real> out = s.amplitudes();
        for (int i = 0; i < kBasisSize; ++i)
            if (!labels_.test(i)) out[i] = Complex<Real>(0);
        return BasicStateVector<Real>(out);
    }

   private:
    template <typename T>
    static bool contains(std::span<const T> xs, T x) {
        for (const T& y : xs)
            if (y == x) return true;
        return false;
    }

    LabelSet labels_;
};

enum class MapKind { Unitary, IsometryToSinks };

/// Sparse linear map over the labeled basis.
///
/// Columns outside the declared domain must not carry amplitude when the map
/// is applied. A map of kind IsometryToSinks also carries loss routes: the
/// fraction `coefficient` of a source amplitude is absorbed by a sink, whose
/// stored weight grows in quadrature. Construction verifies that the domain
/// columns of [live; routes] are orthonormal.
template <typename Real>
class BasicLinearMap {
   public:
    using Scalar = Complex<Real>;
    using Sparse = Eigen::SparseMatrix<Scalar>;

    struct Entry {
        BasisLabel from;
        BasisLabel to;
        Scalar value;
    };
    struct Route {
        BasisLabel from;
        Path sink;
        Real coefficient;
    };

    /// Identity everywhere.
    BasicLinearMap() : BasicLinearMap(MapKind::Unitary, {}, {}, LabelSet().set(), LabelSet()) {}

    /// Builds a map from explicit column entries. Every column listed in
    /// `defined` takes exactly the entries given for it (possibly none);
    /// every other column is the identity.
    BasicLinearMap(MapKind kind, const std::vector<Entry>& entries, std::vector<Route> routes,
                   LabelSet domain, LabelSet defined)
        : kind_(kind), routes_(std::move(routes)), domain_(domain) {
        for (const auto& e : entries) defined.set(index_of(e.from));
        for (const auto& r : routes_) defined.set(index_of(r.from));
        std::vector<Eigen::Triplet<Scalar>> triplets;
        for (int i = 0; i < kBasisSize; ++i)
            if (!defined.test(i)) triplets.emplace_back(i, i, Scalar(1));
        for (const auto& e : entries) {
            if (is_sink(e.from.path) || is_sink(e.to.path))
                throw NotAnIsometry("live entries may not touch sink labels");
            triplets.emplace_back(index_of(e.to), index_of(e.from), e.value);
        }
        for (const auto& r : routes_)
            if (!is_sink(r.sink)) throw NotAnIsometry("loss route must end on a sink path");
        if (kind_ == MapKind::Unitary && !routes_.empty())
            throw NotAnIsometry("a unitary map cannot carry loss routes");
        live_.resize(kBasisSize, kBasisSize);
        live_.setFromTriplets(triplets.begin(), triplets.end());
        live_.makeCompressed();
        adjoint_ = live_.adjoint();
        verify();
    }

    static BasicLinearMap unitary(const std::vector<Entry>& entries, LabelSet defined = {}) {
        return BasicLinearMap(MapKind::Unitary, entries, {}, LabelSet().set(), defined);
    }
    static BasicLinearMap lossy(const std::vector<Entry>& entries, std::vector<Route> routes,
                                LabelSet defined = {}) {
        return BasicLinearMap(MapKind::IsometryToSinks, entries, std::move(routes), LabelSet().set(), defined);
    }

    MapKind kind() const { return kind_; }
    const Sparse& live() const { return live_; }
    const std::vector<Route>& routes() const { return routes_; }
    const LabelSet& domain() const { return domain_; }

    BasicStateVector<Real> apply(const BasicStateVector<Real>& s) const {
        const LabelSet outside = s.support() & ~domain_;
        if (outside.any()) {
            for (int i = 0; i < kBasisSize; ++i)
                if (outside.test(i))
                    throw LabelMismatch("state has support on " + to_string(label_at(i)) +
                                        " outside the map's domain");
        }
        Amplitudes<Real> out = live_ * s.amplitudes();
        for (const auto& r : routes_) {
            const Real lost = std::norm(r.coefficient * s.amplitudes()[index_of(r.from)]);
            if (lost == Real(0)) continue;
            // The sink entry with the same pol/bob as the source keeps the
            // absorbed weight.
            const int k = index_of({r.sink, r.from.pol, r.from.bob});
            out[k] = Scalar(std::sqrt(std::norm(out[k]) + lost));
        }
        return BasicStateVector<Real>(out);
    }

    /// Adjoint of the live part; sinks contribute no backward amplitude.
    BasicStateVector<Real> apply_adjoint(const BasicStateVector<Real>& s) const {
        Amplitudes<Real> out = adjoint_ * s.live_part().amplitudes();
        for (int i = 0; i < kBasisSize; ++i)
            if (is_sink(label_at(i).path)) out[i] = Scalar(0);
        return BasicStateVector<Real>(out);
    }

   private:
    void verify() const {
        const Real tol = Real(1e-12);
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram = Sparse(adjoint_ * live_).toDense();
        for (const auto& r : routes_) gram(index_of(r.from), index_of(r.from)) += r.coefficient * r.coefficient;
        for (int j = 0; j < kBasisSize; ++j) {
            if (!domain_.test(j)) continue;
            for (int i = 0; i < kBasisSize; ++i) {
                if (!domain_.test(i)) continue;
                const Scalar expected = i == j ? Scalar(1) : Scalar(0);
                if (std::abs(gram(i, j) - expected) > tol)
                    throw NotAnIsometry("column " + to_string(label_at(j)) + " fails the " +
                                        (kind_ == MapKind::Unitary ? "unitarity" : "isometry") + " check against " +
                                        to_string(label_at(i)));
            }
        }
    }

    MapKind kind_;
    std::vector<Route> routes_;
    LabelSet domain_;
    Sparse live_;
    Sparse adjoint_;
};

using LinearMap = BasicLinearMap<double>;

template <typename Real>
BasicStateVector<Real> apply(const BasicLinearMap<Real>& map, const BasicStateVector<Real>& s) {
    return map.apply(s);
}

template <typename Real>
struct Projection {
    BasicStateVector<Real> state;  // unnormalized
    Real probability;
};

template <typename Real>
Projection<Real> project(const Projector& p, const BasicStateVector<Real>& s) {
    BasicStateVector<Real> out = p.apply(s);
    const Real prob = out.norm_squared();
    return {std::move(out), prob};
}

/// <a|b>, conjugate-linear in `a`.
template <typename Real>
Complex<Real> inner(const BasicStateVector<Real>& a, const BasicStateVector<Real>& b) {
    return a.amplitudes().dot(b.amplitudes());
}

/// Weight of `target` in the polarization state carried on `paths`, summed
/// over Bob's basis (the trace over Bob's qubit). For a normalized `s` this is
/// sum_path p_path * <target| rho_path |target>, so photons elsewhere score 0.
template <typename Real>
Real fidelity(const BasicPolState<Real>& target, const BasicStateVector<Real>& s, std::span<const Path> paths) {
    if (std::abs(target.squaredNorm() - Real(1)) > Real(1e-9))
        throw std::invalid_argument("fidelity target must be normalized");
    Real total = 0;
    for (Path p : paths) {
        const auto blk = s.block(p);
        for (int b = 0; b < 3; ++b) total += std::norm(std::conj(target(0)) * blk(0, b) + std::conj(target(1)) * blk(1, b));
    }
    return total;
}

template <typename Real>
Real fidelity(const BasicPolState<Real>& target, const BasicStateVector<Real>& s, std::initializer_list<Path> paths) {
    return fidelity(target, s, std::span<const Path>(paths.begin(), paths.size()));
}

/// Embeds a polarization state (and optional Bob factor) on one path.
template <typename Real>
BasicStateVector<Real> on_path(Path p, const BasicPolState<Real>& pol, Bob bob = Bob::Absent) {
    return BasicStateVector<Real>{{{p, Pol::H, bob}, pol(0)}, {{p, Pol::V, bob}, pol(1)}};
}

}  // namespace cfq
