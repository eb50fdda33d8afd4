#pragma once

// Explicit covering-number constructions: exponent plans, the cover built
// from a plan whose divisor counts dominate the primes, and a few families
// of primitive covering numbers.

#include <optional>
#include <string>
#include <vector>

#include "covnum/cover.hpp"
#include "covnum/errors.hpp"
#include "covnum/numtheory.hpp"

namespace covnum {

enum class Claim { unclaimed, covering, primitive_covering };

inline const char* claim_name(Claim c) {
    switch (c) {
        case Claim::covering: return "covering";
        case Claim::primitive_covering: return "primitive-covering";
        default: return "unclaimed";
    }
}

// The product condition: prod_{t<s} (a_t + 1) >= p_s - [s != r] for every s.
// Empty products are 1.
inline bool condition_holds(const std::vector<u64>& primes, const std::vector<unsigned>& exps) {
    const std::size_t r = primes.size();
    if (r == 0 || exps.size() != r) return false;
    u64 prod = 1;
    for (std::size_t s = 0; s < r; ++s) {
        u64 need = primes[s] - (s + 1 == r ? 0 : 1);
        if (prod < need) return false;
        prod = checked_mul(prod, exps[s] + 1);
    }
    return true;
}

// p_1 < ... < p_r with exponents; n is their product.
class ExponentPlan {
public:
    ExponentPlan(std::vector<u64> primes, std::vector<unsigned> exponents,
                 Claim claimed = Claim::unclaimed)
        : primes_(std::move(primes)), exps_(std::move(exponents)), claim_(claimed) {
        if (primes_.empty()) throw PreconditionError("plan needs at least one prime");
        if (primes_.size() != exps_.size()) {
            throw PreconditionError("plan has " + std::to_string(primes_.size()) + " primes but " +
                                    std::to_string(exps_.size()) + " exponents");
        }
        std::vector<PrimePower> pairs;
        for (std::size_t i = 0; i < primes_.size(); ++i) pairs.push_back({primes_[i], exps_[i]});
        fact_ = Factorization::from_pairs(std::move(pairs));
        if (claim_ != Claim::unclaimed && !condition_holds(primes_, exps_)) {
            throw PreconditionError("plan " + str() + " claims " + claim_name(claim_) +
                                    " but fails the product condition");
        }
    }

    const std::vector<u64>& primes() const noexcept { return primes_; }
    const std::vector<unsigned>& exponents() const noexcept { return exps_; }
    Claim claimed() const noexcept { return claim_; }
    std::size_t size() const noexcept { return primes_.size(); }
    u64 value() const noexcept { return fact_.value(); }
    const Factorization& factorization() const noexcept { return fact_; }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            if (i) s += "*";
            s += std::to_string(primes_[i]);
            if (exps_[i] != 1) s += "^" + std::to_string(exps_[i]);
        }
        return s;
    }

    friend bool operator==(const ExponentPlan& a, const ExponentPlan& b) {
        return a.primes_ == b.primes_ && a.exps_ == b.exps_ && a.claim_ == b.claim_;
    }

private:
    std::vector<u64> primes_;
    std::vector<unsigned> exps_;
    Claim claim_;
    Factorization fact_;
};

inline bool check_condition_13(const ExponentPlan& plan) {
    return condition_holds(plan.primes(), plan.exponents());
}

// For each s, a = 1..a_s and j = 1..p_s - 1 the class
//     j * P_{s-1} * p_s^(a-1)  (mod d_j * p_s^a),
// where P_{s-1} = prod_{t<s} p_t^(a_t) and d_j is its j-th smallest divisor,
// plus 0 (mod d_{p_r} * p_r^(a_r)).
inline CoverSystem theorem11_cover(const ExponentPlan& plan) {
    if (!check_condition_13(plan)) {
        throw PreconditionError("plan " + plan.str() + " fails the product condition");
    }
    const auto& ps = plan.primes();
    const auto& es = plan.exponents();
    const std::size_t r = ps.size();
    std::vector<ResidueClass> classes;
    std::vector<u64> prefix_divs{1};
    u64 prefix = 1;
    for (std::size_t s = 0; s < r; ++s) {
        const u64 p = ps[s];
        u64 pa = 1;  // p^(a-1)
        for (unsigned a = 1; a <= es[s]; ++a) {
            for (u64 j = 1; j < p; ++j) {
                u64 res = checked_mul(checked_mul(j, prefix), pa);
                u64 mod = checked_mul(prefix_divs[j - 1], checked_mul(pa, p));
                classes.emplace_back(static_cast<i64>(res % mod), mod);
            }
            pa = checked_mul(pa, p);
        }
        if (s + 1 == r) {
            classes.emplace_back(0, checked_mul(prefix_divs[p - 1], pa));
        }
        prefix = checked_mul(prefix, pa);
        prefix_divs = divisors(prefix);
    }
    CoverSystem sys(std::move(classes));
    if (!sys.moduli_distinct()) {
        throw Error("internal: construction for " + plan.str() + " repeated a modulus");
    }
    return sys;
}

namespace detail {

inline void require_two_first(const std::vector<u64>& primes, const char* what) {
    if (primes.size() < 2) throw PreconditionError(std::string(what) + " needs at least two primes");
    if (primes[0] != 2) throw PreconditionError(std::string(what) + " needs p_1 = 2");
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (!is_prime(primes[i])) {
            throw PreconditionError(std::to_string(primes[i]) + " is not prime");
        }
        if (i && primes[i] <= primes[i - 1]) {
            throw PreconditionError("primes must be strictly increasing");
        }
    }
}

}  // namespace detail

// a_t = ceil((p_{t+1} - [t != r-1]) / (p_t - 1)) - 1 for t < r, and a_r = 1.
inline ExponentPlan corollary11_exponents(const std::vector<u64>& primes) {
    detail::require_two_first(primes, "corollary plan");
    const std::size_t r = primes.size();
    std::vector<unsigned> exps(r, 1);
    for (std::size_t t = 0; t + 1 < r; ++t) {
        u64 num = primes[t + 1] - (t + 2 == r ? 0 : 1);
        u64 den = primes[t] - 1;
        exps[t] = static_cast<unsigned>((num + den - 1) / den - 1);
    }
    return ExponentPlan(primes, std::move(exps), Claim::covering);
}

inline ExponentPlan theorem13_plan(const std::vector<u64>& primes) {
    detail::require_two_first(primes, "primitive plan");
    const std::size_t r = primes.size();
    for (std::size_t t = 0; t + 2 < r; ++t) {
        if ((primes[t + 1] - 1) % (primes[t] - 1) != 0) {
            throw DivisibilityPreconditionError(
                std::to_string(primes[t] - 1) + " does not divide " + std::to_string(primes[t + 1] - 1));
        }
    }
    const i64 q = static_cast<i64>(primes[r - 2]);
    const i64 floor_size = (q - 2) * (q - 3);
    if (static_cast<i64>(primes[r - 1]) < floor_size) {
        throw SizePreconditionError("largest prime " + std::to_string(primes[r - 1]) + " is below (" +
                                    std::to_string(q) + "-2)(" + std::to_string(q) +
                                    "-3) = " + std::to_string(floor_size));
    }
    std::vector<unsigned> exps(r, 1);
    for (std::size_t t = 0; t + 2 < r; ++t) {
        exps[t] = static_cast<unsigned>((primes[t + 1] - 1) / (primes[t] - 1) - 1);
    }
    exps[r - 2] = static_cast<unsigned>((primes[r - 1] - 1) / (primes[r - 2] - 1));
    return ExponentPlan(primes, std::move(exps), Claim::primitive_covering);
}

// A plan on the first r primes realizing the exponent shape, or none when no
// choice of primes can make the product a covering number.
inline std::optional<ExponentPlan> theorem12_witness(const std::vector<unsigned>& alphas) {
    const std::size_t r = alphas.size();
    if (r == 0) throw PreconditionError("exponent list is empty");
    for (unsigned a : alphas) {
        if (a == 0) throw PreconditionError("exponents must be positive");
    }
    if (r == 1) return std::nullopt;
    if (r == 2 && alphas[0] == 1) return std::nullopt;
    if (r == 3 && alphas[0] == 1 && alphas[1] == 1) return std::nullopt;
    return ExponentPlan(first_primes(r), alphas, Claim::covering);
}

enum class Family { i, ii, iii_a, iii_b, iii_c, iii_d };

inline std::optional<Family> parse_family(const std::string& s) {
    if (s == "i") return Family::i;
    if (s == "ii") return Family::ii;
    if (s == "iii-a") return Family::iii_a;
    if (s == "iii-b") return Family::iii_b;
    if (s == "iii-c") return Family::iii_c;
    if (s == "iii-d") return Family::iii_d;
    return std::nullopt;
}

inline u64 theorem14_family(Family kind, u64 p) {
    if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
    auto need = [&](bool ok, const std::string& what) {
        if (!ok) throw PreconditionError("family needs " + what + ", got p=" + std::to_string(p));
    };
    switch (kind) {
        case Family::i:
            need(p > 2, "an odd prime");
            return checked_mul(checked_pow(2, static_cast<unsigned>(p - 1)), p);
        case Family::ii:
            need(p > 3, "p > 3");
            return checked_mul(checked_mul(2, checked_pow(3, static_cast<unsigned>((p - 1) / 2))), p);
        case Family::iii_a:
            need(p > 5, "p > 5");
            return checked_mul(checked_mul(8, checked_pow(5, static_cast<unsigned>((p - 1) / 4))), p);
        case Family::iii_b:
            need(p > 5, "p > 5");
            return checked_mul(checked_mul(6, checked_pow(5, static_cast<unsigned>((p - 1) / 4))), p);
        case Family::iii_c:
            need(p > 7, "p > 7");
            return checked_mul(checked_mul(18, checked_pow(7, static_cast<unsigned>((p - 1) / 6))), p);
        case Family::iii_d:
            need(p > 7, "p > 7");
            need(p != 13 && p != 19, "p other than 13 and 19 (primitivity unknown there)");
            return checked_mul(checked_mul(32, checked_pow(7, static_cast<unsigned>((p - 1) / 6))), p);
    }
    throw PreconditionError("unknown family");
}

}  // namespace covnum
