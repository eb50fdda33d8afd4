#pragma once

// Residue classes, finite systems of them, and exact verification of the
// covering property by sieving one period of the system.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "covnum/errors.hpp"
#include "covnum/numtheory.hpp"
#include "covnum/rational.hpp"

namespace covnum {

// Largest period the verifier will sieve.
inline constexpr u64 kSieveBound = u64{1} << 31;

// a (mod n) with 0 <= a < n.
class ResidueClass {
public:
    ResidueClass(i64 a, u64 n) : n_(n) {
        if (n == 0 || n > kMaxValue) throw RangeError("modulus must lie in [1, 2^63)");
        i64 sn = static_cast<i64>(n);
        a_ = static_cast<u64>(((a % sn) + sn) % sn);
    }

    u64 residue() const noexcept { return a_; }
    u64 modulus() const noexcept { return n_; }

    bool contains(i64 x) const noexcept {
        i64 sn = static_cast<i64>(n_);
        return static_cast<u64>(((x % sn) + sn) % sn) == a_;
    }

    std::string str() const { return std::to_string(a_) + "(mod " + std::to_string(n_) + ")"; }

    friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
    // Canonical order: by modulus, then residue.
    friend auto operator<=>(const ResidueClass& x, const ResidueClass& y) {
        if (auto c = x.n_ <=> y.n_; c != 0) return c;
        return x.a_ <=> y.a_;
    }

private:
    u64 a_ = 0;
    u64 n_ = 1;
};

// A nonempty finite system of residue classes.  The period N is derived on
// demand, so it can never go stale.
class CoverSystem {
public:
    explicit CoverSystem(std::vector<ResidueClass> classes) : classes_(std::move(classes)) {
        if (classes_.empty()) throw PreconditionError("a system needs at least one class");
        (void)period();  // rejects systems whose lcm overflows
    }

    const std::vector<ResidueClass>& classes() const noexcept { return classes_; }
    std::size_t size() const noexcept { return classes_.size(); }
    const ResidueClass& operator[](std::size_t i) const { return classes_[i]; }

    // N = lcm of the moduli.
    u64 period() const {
        u64 n = 1;
        for (const auto& c : classes_) n = checked_lcm(n, c.modulus());
        return n;
    }

    std::vector<u64> moduli() const {
        std::vector<u64> m;
        m.reserve(classes_.size());
        for (const auto& c : classes_) m.push_back(c.modulus());
        return m;
    }

    bool moduli_distinct() const {
        auto m = moduli();
        std::sort(m.begin(), m.end());
        return std::adjacent_find(m.begin(), m.end()) == m.end();
    }

    std::set<u64> moduli_set() const {
        auto m = moduli();
        return {m.begin(), m.end()};
    }

    // Same classes in canonical (modulus, residue) order.
    CoverSystem canonical() const {
        auto c = classes_;
        std::sort(c.begin(), c.end());
        return CoverSystem(std::move(c));
    }

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < classes_.size(); ++i) {
            if (i) s += ", ";
            s += classes_[i].str();
        }
        return s + "}";
    }

    friend bool operator==(const CoverSystem&, const CoverSystem&) = default;

private:
    std::vector<ResidueClass> classes_;
};

struct CoverReport {
    u64 period = 1;
    bool is_cover = false;
    std::optional<u64> witness;  // least uncovered residue in [0, N)
    bool is_minimal = false;
    std::vector<std::size_t> redundant_indices;
    std::vector<std::uint32_t> multiplicity;  // w(r) for r in [0, N)
};

inline CoverReport verify_cover(const CoverSystem& sys) {
    CoverReport rep;
    rep.period = sys.period();
    const u64 N = rep.period;
    if (N > kSieveBound) {
        throw SieveBoundError("period " + std::to_string(N) + " exceeds sieve bound 2^31");
    }
    rep.multiplicity.assign(N, 0);
    for (const auto& c : sys.classes()) {
        for (u64 r = c.residue(); r < N; r += c.modulus()) ++rep.multiplicity[r];
    }
    auto hole = std::find(rep.multiplicity.begin(), rep.multiplicity.end(), 0u);
    rep.is_cover = hole == rep.multiplicity.end();
    if (!rep.is_cover) {
        rep.witness = static_cast<u64>(hole - rep.multiplicity.begin());
        return rep;
    }
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const auto& c = sys[i];
        bool removable = true;
        for (u64 r = c.residue(); r < N && removable; r += c.modulus()) {
            removable = rep.multiplicity[r] >= 2;
        }
        if (removable) rep.redundant_indices.push_back(i);
    }
    rep.is_minimal = rep.redundant_indices.empty();
    return rep;
}

// Sum of 1/phi(n_i) over the classes with gcd(x + a_i, n_i) = 1.  For a cover
// this is at least 1 for every integer x.
inline Rational phi_inequality(const CoverSystem& sys, i64 x) {
    Rational sum;
    for (const auto& c : sys.classes()) {
        i64 sn = static_cast<i64>(c.modulus());
        u64 shifted = static_cast<u64>((((x % sn) + sn) % sn + static_cast<i64>(c.residue())) % sn);
        if (std::gcd(shifted, c.modulus()) == 1) {
            sum += Rational(1, static_cast<i64>(phi(c.modulus())));
        }
    }
    return sum;
}

// Sum of 1/n_i over all classes.
inline Rational density(const CoverSystem& sys) {
    Rational sum;
    for (const auto& c : sys.classes()) sum += Rational(1, static_cast<i64>(c.modulus()));
    return sum;
}

// Sum of 1/n_i over every class except the one with the (unique) largest
// modulus.  For a cover this is at least 1.
inline Rational distinct_top_density(const CoverSystem& sys) {
    if (sys.size() < 2) throw PreconditionError("distinct_top_density needs at least two classes");
    auto m = sys.moduli();
    u64 top = *std::max_element(m.begin(), m.end());
    if (std::count(m.begin(), m.end(), top) != 1) {
        throw PreconditionError("largest modulus " + std::to_string(top) + " is not unique");
    }
    Rational sum;
    for (u64 n : m) {
        if (n != top) sum += Rational(1, static_cast<i64>(n));
    }
    return sum;
}

// Erdos-Selfridge property on a concrete system: a cover with distinct moduli
// all greater than one has an even modulus.  Returns false only for a
// counterexample; systems outside the hypothesis are vacuously fine.
inline bool erdos_selfridge_holds(const CoverSystem& sys, const CoverReport& rep) {
    if (!rep.is_cover || !sys.moduli_distinct()) return true;
    auto m = sys.moduli();
    if (std::any_of(m.begin(), m.end(), [](u64 n) { return n == 1; })) return true;
    return std::any_of(m.begin(), m.end(), [](u64 n) { return n % 2 == 0; });
}

}  // namespace covnum
