#pragma once

// Exact 64-bit integer arithmetic: factorization, divisors, multiplicative
// functions and a generalized Chinese remainder solver.  Every value handled
// here is bounded by kMaxValue; anything larger is rejected, never wrapped.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "covnum/errors.hpp"

namespace covnum {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 kMaxValue = (u64{1} << 63) - 1;

inline u64 checked_mul(u64 a, u64 b) {
    u128 p = static_cast<u128>(a) * b;
    if (p > kMaxValue) {
        throw RangeError("product " + std::to_string(a) + "*" + std::to_string(b) +
                         " exceeds 2^63-1");
    }
    return static_cast<u64>(p);
}

inline u64 checked_add(u64 a, u64 b) {
    if (a > kMaxValue || b > kMaxValue - a) {
        throw RangeError("sum exceeds 2^63-1");
    }
    return a + b;
}

inline u64 checked_pow(u64 base, unsigned exp) {
    u64 r = 1;
    for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

inline u64 checked_lcm(u64 a, u64 b) {
    if (a == 0 || b == 0) return 0;
    return checked_mul(a / std::gcd(a, b), b);
}

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

}  // namespace detail

// Deterministic Miller-Rabin; the first twelve prime bases are exact below 2^64.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        u64 x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < s; ++i) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// The first `count` primes in ascending order.
inline std::vector<u64> first_primes(std::size_t count) {
    std::vector<u64> out;
    for (u64 c = 2; out.size() < count; ++c) {
        if (is_prime(c)) out.push_back(c);
    }
    return out;
}

struct PrimePower {
    u64 prime;
    unsigned exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime-exponent representation of a positive integer.  Primes are strictly
// increasing, exponents positive; the empty factorization is 1.
class Factorization {
public:
    Factorization() = default;

    static Factorization from_pairs(std::vector<PrimePower> pairs) {
        u64 value = 1;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& pp = pairs[i];
            if (!is_prime(pp.prime)) {
                throw PreconditionError("factorization entry " + std::to_string(pp.prime) +
                                        " is not prime");
            }
            if (pp.exponent == 0) throw PreconditionError("factorization exponent must be >= 1");
            if (i > 0 && pairs[i - 1].prime >= pp.prime) {
                throw PreconditionError("factorization primes must be strictly increasing");
            }
            value = checked_mul(value, checked_pow(pp.prime, pp.exponent));
        }
        Factorization f;
        f.pairs_ = std::move(pairs);
        f.value_ = value;
        return f;
    }

    const std::vector<PrimePower>& pairs() const noexcept { return pairs_; }
    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }
    u64 value() const noexcept { return value_; }

    auto begin() const noexcept { return pairs_.begin(); }
    auto end() const noexcept { return pairs_.end(); }

    friend bool operator==(const Factorization& a, const Factorization& b) {
        return a.pairs_ == b.pairs_;
    }

private:
    std::vector<PrimePower> pairs_;
    u64 value_ = 1;
};

// Trial division by 2, 3 and then 6k +/- 1 up to sqrt(n).
inline Factorization factor(u64 n) {
    if (n == 0 || n > kMaxValue) {
        throw RangeError("factor: n=" + std::to_string(n) + " outside [1, 2^63)");
    }
    std::vector<PrimePower> pairs;
    auto strip = [&](u64 p) {
        if (n % p != 0) return;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        pairs.push_back({p, e});
    };
    strip(2);
    strip(3);
    for (u64 p = 5; p <= n / p; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (n > 1) pairs.push_back({n, 1});
    return Factorization::from_pairs(std::move(pairs));
}

inline std::vector<u64> divisors(const Factorization& f) {
    std::vector<u64> out{1};
    for (const auto& [p, e] : f) {
        const std::size_t base = out.size();
        u64 pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<u64> divisors(u64 n) { return divisors(factor(n)); }

// D_n: the divisors of n that are at least 2, ascending.
inline std::vector<u64> proper_moduli(u64 n) {
    auto d = divisors(n);
    d.erase(d.begin());
    return d;
}

inline u64 num_divisors(const Factorization& f) {
    u64 r = 1;
    for (const auto& pp : f) r *= pp.exponent + 1;
    return r;
}

inline u64 sigma(const Factorization& f) {
    u64 r = 1;
    for (const auto& [p, e] : f) {
        u64 term = 1, pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk = checked_mul(pk, p);
            term = checked_add(term, pk);
        }
        r = checked_mul(r, term);
    }
    return r;
}

inline u64 phi(const Factorization& f) {
    u64 r = 1;
    for (const auto& [p, e] : f) r *= checked_pow(p, e - 1) * (p - 1);
    return r;
}

// Mycielski's function: sum of exponent * (p - 1).
inline u64 mycielski_f(const Factorization& f) {
    u64 r = 0;
    for (const auto& [p, e] : f) r += static_cast<u64>(e) * (p - 1);
    return r;
}

inline u64 num_divisors(u64 n) { return num_divisors(factor(n)); }
inline u64 sigma(u64 n) { return sigma(factor(n)); }
inline u64 phi(u64 n) { return phi(factor(n)); }
inline u64 mycielski_f(u64 n) { return mycielski_f(factor(n)); }

struct Congruence {
    i64 residue;
    u64 modulus;
};

// Solves x = r_i (mod m_i) for arbitrary (not necessarily coprime) moduli.
// Returns the class (x mod lcm, lcm), or nullopt when inconsistent.
inline std::optional<std::pair<u64, u64>> crt_solve(std::span<const Congruence> system) {
    u64 x = 0, m = 1;
    for (const auto& [res, mod] : system) {
        if (mod == 0 || mod > kMaxValue) throw RangeError("crt_solve: modulus outside [1, 2^63)");
        i64 sm = static_cast<i64>(mod);
        u64 r = static_cast<u64>(((res % sm) + sm) % sm);

        // x + m*t = r (mod mod)  <=>  (m/g) t = (r-x)/g  (mod mod/g)
        u64 g = std::gcd(m, mod);
        i128 diff = static_cast<i128>(r) - static_cast<i128>(x);
        if (diff % static_cast<i128>(g) != 0) return std::nullopt;
        u64 new_m = checked_lcm(m, mod);
        u64 mg = m / g, modg = mod / g;

        // inverse of mg modulo modg by extended Euclid
        i128 old_r = static_cast<i128>(mg % modg), cur_r = static_cast<i128>(modg);
        i128 old_s = 1, cur_s = 0;
        while (cur_r != 0) {
            i128 q = old_r / cur_r;
            std::tie(old_r, cur_r) = std::pair{cur_r, old_r - q * cur_r};
            std::tie(old_s, cur_s) = std::pair{cur_s, old_s - q * cur_s};
        }
        i128 inv = modg == 1 ? 0 : ((old_s % static_cast<i128>(modg)) + modg) % modg;
        i128 t = ((diff / static_cast<i128>(g)) % static_cast<i128>(modg) + modg) % modg;
        t = t * inv % static_cast<i128>(modg);
        i128 nx = (static_cast<i128>(x) + static_cast<i128>(m) * t) % static_cast<i128>(new_m);
        x = static_cast<u64>(nx);
        m = new_m;
    }
    return std::pair{x, m};
}

inline std::optional<std::pair<u64, u64>> crt_solve(std::initializer_list<Congruence> system) {
    return crt_solve(std::span<const Congruence>(system.begin(), system.size()));
}

}  // namespace covnum
