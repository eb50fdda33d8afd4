#pragma once

// Exact decisions: is n a covering number, is it primitive, and the minimal
// covers with a prescribed lcm.  Answers are never guessed; a search that
// runs out of budget raises BudgetExceeded.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "covnum/cover.hpp"
#include "covnum/cover_json.hpp"
#include "covnum/errors.hpp"
#include "covnum/numtheory.hpp"
#include "covnum/rational.hpp"
#include "covnum/search.hpp"
#include "json.hpp"

namespace covnum {

// sigma(n) >= 2n + 1.  False rules n out.
inline bool density_filter(u64 n) {
    if (n < 2) throw PreconditionError("density_filter needs n >= 2");
    return sigma(n) >= checked_add(checked_mul(2, n), 1);
}

// Sum of 1/phi(d) over composite d | n.
inline Rational totient_sum(u64 n) {
    Rational sum;
    for (u64 d : divisors(n)) {
        if (d > 1 && !is_prime(d)) sum += Rational(1, static_cast<i64>(phi(d)));
    }
    return sum;
}

// totient_sum(n) >= 1.  False rules n out.
inline bool totient_filter(u64 n) {
    if (n < 2) throw PreconditionError("totient_filter needs n >= 2");
    return totient_sum(n) >= Rational(1);
}

enum class Rejection { density_filter, totient_filter, search_exhausted };

inline const char* rejection_name(Rejection r) {
    switch (r) {
        case Rejection::density_filter: return "density-filter";
        case Rejection::totient_filter: return "totient-filter";
        case Rejection::search_exhausted: return "search-exhausted";
    }
    return "?";
}

inline std::optional<Rejection> parse_rejection(const std::string& s) {
    if (s == "density-filter") return Rejection::density_filter;
    if (s == "totient-filter") return Rejection::totient_filter;
    if (s == "search-exhausted") return Rejection::search_exhausted;
    return std::nullopt;
}

struct DecisionRecord {
    u64 n = 0;
    bool is_covering = false;
    std::optional<CoverSystem> certificate;
    std::optional<Rejection> rejection;
    std::uint64_t nodes_explored = 0;
    std::chrono::nanoseconds elapsed{0};
    bool from_cache = false;
};

// Distinct moduli > 1 dividing n that cover Z.
inline bool certifies(const CoverSystem& sys, u64 n) {
    for (u64 m : sys.moduli()) {
        if (m < 2 || n % m != 0) return false;
    }
    return sys.moduli_distinct() && verify_cover(sys).is_cover;
}

struct RawSearchResult {
    std::optional<CoverSystem> cover;
    std::uint64_t nodes = 0;
};

// Plain search over D_n with no filters and no reduction to divisors.
inline RawSearchResult search_covering(u64 n, SearchBudget budget = {}) {
    if (n < 1) throw RangeError("n must be positive");
    if (n > kSieveBound) throw SieveBoundError("n exceeds the sieve bound 2^31");
    RawSearchResult out;
    detail::CoverSearch s(n, proper_moduli(n), budget, n);
    s.run([&](const std::vector<ResidueClass>& classes) {
        out.cover = CoverSystem(classes).canonical();
        return false;
    });
    out.nodes = s.nodes();
    return out;
}

// Every minimal cover whose moduli are distinct pool elements and whose lcm
// is lcm_target, in canonical form and canonical order.
inline std::vector<CoverSystem> enumerate_minimal_covers(const std::set<u64>& pool, u64 lcm_target,
                                                         SearchBudget budget = {}) {
    if (lcm_target == 0 || lcm_target > kSieveBound) {
        throw SieveBoundError("lcm target " + std::to_string(lcm_target) + " outside [1, 2^31]");
    }
    for (u64 d : pool) {
        if (d < 2 || lcm_target % d != 0) {
            throw PreconditionError("pool element " + std::to_string(d) + " must exceed 1 and divide " +
                                    std::to_string(lcm_target));
        }
    }
    std::vector<CoverSystem> out;
    if (pool.empty()) return out;
    detail::CoverSearch s(lcm_target, {pool.begin(), pool.end()}, budget, lcm_target,
                          SearchOptions{.exact_period = true});
    s.run([&](const std::vector<ResidueClass>& classes) {
        out.push_back(CoverSystem(classes).canonical());
        return true;
    });
    std::sort(out.begin(), out.end(), [](const CoverSystem& a, const CoverSystem& b) {
        return a.classes() < b.classes();
    });
    return out;
}

// k >= 1 + f(N) for a minimal cover with distinct moduli > 1.
inline bool simpson_bound_holds(const CoverSystem& sys) {
    for (u64 m : sys.moduli()) {
        if (m < 2) throw PreconditionError("Simpson bound needs every modulus > 1");
    }
    if (!sys.moduli_distinct()) throw PreconditionError("Simpson bound needs distinct moduli");
    if (!verify_cover(sys).is_minimal) throw PreconditionError("Simpson bound needs a minimal cover");
    return sys.size() >= 1 + mycielski_f(sys.period());
}

// One JSON object per line: {"n":..,"covering":..,"certificate":..,"rejection":..}
class DecisionCache {
public:
    explicit DecisionCache(std::filesystem::path path) : path_(std::move(path)) {
        std::ifstream in(path_);
        if (!in) return;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            try {
                auto rec = parse_line(line);
                records_[rec.n] = std::move(rec);
            } catch (const Error& e) {
                throw ParseError(path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
    }

    const std::filesystem::path& path() const noexcept { return path_; }
    std::size_t size() const noexcept { return records_.size(); }

    const DecisionRecord* find(u64 n) const {
        auto it = records_.find(n);
        return it == records_.end() ? nullptr : &it->second;
    }

    void store(const DecisionRecord& rec) {
        if (records_.count(rec.n)) return;
        std::ofstream out(path_, std::ios::app);
        if (!out) throw Error("cannot write decision cache " + path_.string());
        out << format_line(rec) << '\n';
        records_[rec.n] = rec;
        records_[rec.n].from_cache = true;
    }

    static std::string format_line(const DecisionRecord& rec) {
        nlohmann::json j;
        j["n"] = rec.n;
        j["covering"] = rec.is_covering;
        j["certificate"] = rec.certificate ? to_json(*rec.certificate) : nlohmann::json(nullptr);
        j["rejection"] = rec.rejection ? nlohmann::json(rejection_name(*rec.rejection))
                                       : nlohmann::json(nullptr);
        return j.dump();
    }

    static DecisionRecord parse_line(const std::string& line) {
        auto j = nlohmann::json::parse(line);
        if (!j.is_object() || !j.contains("n") || !j.at("n").is_number_unsigned() ||
            !j.contains("covering") || !j.at("covering").is_boolean()) {
            throw ParseError("record needs unsigned \"n\" and boolean \"covering\"");
        }
        DecisionRecord rec;
        rec.n = j.at("n").get<u64>();
        rec.is_covering = j.at("covering").get<bool>();
        rec.from_cache = true;
        if (rec.is_covering) {
            if (!j.contains("certificate") || j.at("certificate").is_null()) {
                throw ParseError("covering record without certificate");
            }
            rec.certificate = cover_from_json(j.at("certificate"));
            if (!certifies(*rec.certificate, rec.n)) {
                throw ParseError("certificate for n=" + std::to_string(rec.n) + " does not verify");
            }
        } else {
            if (!j.contains("rejection") || !j.at("rejection").is_string()) {
                throw ParseError("non-covering record without rejection tag");
            }
            rec.rejection = parse_rejection(j.at("rejection").get<std::string>());
            if (!rec.rejection) throw ParseError("unknown rejection tag");
        }
        return rec;
    }

private:
    std::filesystem::path path_;
    std::map<u64, DecisionRecord> records_;
};

// Memoizing decision procedure.  n is covering iff some n/p is, or a minimal
// cover by divisors of n has lcm exactly n; the second search is run with
// the class-count floor 1 + f(n).
class Decider {
public:
    explicit Decider(SearchBudget budget = {}, std::optional<std::filesystem::path> cache = std::nullopt)
        : budget_(budget) {
        budget_.validate();
        if (cache) cache_.emplace(*cache);
    }

    const SearchBudget& budget() const noexcept { return budget_; }

    const DecisionRecord& decide_covering(u64 n) {
        if (n < 2) throw RangeError("decide: n=" + std::to_string(n) + " is below 2");
        if (n > kSieveBound) {
            throw SieveBoundError("decide: n=" + std::to_string(n) + " exceeds the sieve bound 2^31");
        }
        if (auto it = memo_.find(n); it != memo_.end()) return it->second;
        if (cache_) {
            if (const auto* hit = cache_->find(n)) return memo_[n] = *hit;
        }
        auto start = std::chrono::steady_clock::now();
        DecisionRecord rec;
        rec.n = n;
        if (!density_filter(n)) {
            rec.rejection = Rejection::density_filter;
        } else if (!totient_filter(n)) {
            rec.rejection = Rejection::totient_filter;
        } else {
            for (const auto& [p, e] : factor(n)) {
                if (n / p < 2) continue;
                const auto& sub = decide_covering(n / p);
                if (sub.is_covering) {
                    rec.is_covering = true;
                    rec.certificate = sub.certificate;
                    break;
                }
            }
            if (!rec.is_covering) {
                SearchOptions opts{.exact_period = true, .min_classes = 1 + mycielski_f(n)};
                detail::CoverSearch s(n, proper_moduli(n), budget_, n, opts);
                s.run([&](const std::vector<ResidueClass>& classes) {
                    rec.certificate = CoverSystem(classes).canonical();
                    return false;
                });
                rec.nodes_explored = s.nodes();
                rec.is_covering = rec.certificate.has_value();
                if (!rec.is_covering) rec.rejection = Rejection::search_exhausted;
            }
        }
        if (rec.is_covering && !certifies(*rec.certificate, n)) {
            throw Error("internal: certificate for n=" + std::to_string(n) + " does not verify");
        }
        rec.elapsed = std::chrono::steady_clock::now() - start;
        if (cache_) cache_->store(rec);
        return memo_[n] = rec;
    }

    bool is_covering(u64 n) { return n >= 2 && decide_covering(n).is_covering; }

    // Covering, and no n/p is (any covering proper divisor divides some n/p).
    bool is_primitive_covering(u64 n) {
        if (!decide_covering(n).is_covering) return false;
        for (const auto& [p, e] : factor(n)) {
            if (is_covering(n / p)) return false;
        }
        return true;
    }

    // If n is covering but n / p_r^{a_r} is not, then prod_{t<r} (a_t + 1) >= p_r.
    bool lemma21_check(const Factorization& f) {
        if (f.empty()) throw PreconditionError("lemma check needs at least one prime");
        const auto& last = f.pairs().back();
        const u64 rest = f.value() / checked_pow(last.prime, last.exponent);
        if (!is_covering(f.value()) || is_covering(rest)) return true;
        u64 prod = 1;
        for (std::size_t t = 0; t + 1 < f.size(); ++t) prod *= f.pairs()[t].exponent + 1;
        return prod >= last.prime;
    }

private:
    SearchBudget budget_;
    std::optional<DecisionCache> cache_;
    std::map<u64, DecisionRecord> memo_;
};

}  // namespace covnum
