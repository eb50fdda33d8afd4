#pragma once

// Catalogs of primitive covering numbers and the empirical checks run on
// them: the prime-ordering shape and the full divisor set of moduli.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "covnum/cover.hpp"
#include "covnum/cover_json.hpp"
#include "covnum/decider.hpp"
#include "covnum/errors.hpp"
#include "covnum/numtheory.hpp"
#include "json.hpp"

namespace covnum {

// An ordering of the primes of n with prod_{t<s} (a_t + 1) >= p_s - 1 for all
// s and strict at s = r.  All r! orders are tried; the first in lexicographic
// order of primes is returned.
inline std::optional<std::vector<u64>> conjecture11_check(const Factorization& f) {
    if (f.empty()) throw PreconditionError("ordering check needs at least one prime");
    std::vector<std::size_t> idx(f.size());
    std::iota(idx.begin(), idx.end(), 0);
    const auto& pp = f.pairs();
    do {
        bool ok = true;
        u64 prod = 1;
        for (std::size_t s = 0; s < idx.size() && ok; ++s) {
            const u64 p = pp[idx[s]].prime;
            ok = s + 1 == idx.size() ? prod > p - 1 : prod >= p - 1;
            prod = checked_mul(prod, pp[idx[s]].exponent + 1);
        }
        if (ok) {
            std::vector<u64> order;
            for (std::size_t i : idx) order.push_back(pp[i].prime);
            return order;
        }
    } while (std::next_permutation(idx.begin(), idx.end()));
    return std::nullopt;
}

struct CatalogEntry {
    u64 n = 0;
    Factorization factorization;
    std::optional<std::vector<u64>> ordering;
    CoverSystem certificate;
};

// How each candidate was settled.
enum class Outcome { density_filter, totient_filter, covering_divisor, not_covering, primitive };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::density_filter: return "density-filter";
        case Outcome::totient_filter: return "totient-filter";
        case Outcome::covering_divisor: return "covering-divisor";
        case Outcome::not_covering: return "search-exhausted";
        case Outcome::primitive: return "primitive";
    }
    return "?";
}

struct CandidateTrace {
    u64 n;
    Outcome outcome;
    std::uint64_t nodes;
};

struct PrimitiveCatalog {
    u64 bound = 0;
    std::vector<CatalogEntry> entries;
    std::vector<CandidateTrace> provenance;

    std::vector<u64> values() const {
        std::vector<u64> v;
        for (const auto& e : entries) v.push_back(e.n);
        return v;
    }

    std::size_t count(Outcome o) const {
        return static_cast<std::size_t>(std::count_if(provenance.begin(), provenance.end(),
                                                       [&](const auto& t) { return t.outcome == o; }));
    }
};

// Every primitive covering number <= bound.  A candidate the budget cannot
// settle aborts the run with BudgetExceeded naming it.
inline PrimitiveCatalog enumerate_primitive(u64 bound, Decider& decider) {
    if (bound > kSieveBound) throw RangeError("catalog bound exceeds 2^31");
    PrimitiveCatalog cat;
    cat.bound = bound;
    for (u64 n = 2; n <= bound; ++n) {
        const auto& rec = decider.decide_covering(n);
        CandidateTrace trace{n, Outcome::not_covering, rec.nodes_explored};
        if (!rec.is_covering) {
            if (rec.rejection == Rejection::density_filter) trace.outcome = Outcome::density_filter;
            if (rec.rejection == Rejection::totient_filter) trace.outcome = Outcome::totient_filter;
        } else if (!decider.is_primitive_covering(n)) {
            trace.outcome = Outcome::covering_divisor;
        } else {
            trace.outcome = Outcome::primitive;
            auto f = factor(n);
            cat.entries.push_back({n, f, conjecture11_check(f), *rec.certificate});
        }
        cat.provenance.push_back(trace);
    }
    return cat;
}

inline PrimitiveCatalog enumerate_primitive(u64 bound, SearchBudget budget = {}) {
    Decider d(budget);
    return enumerate_primitive(bound, d);
}

inline nlohmann::json catalog_json(const PrimitiveCatalog& cat) {
    auto arr = nlohmann::json::array();
    for (const auto& e : cat.entries) {
        auto fac = nlohmann::json::array();
        for (const auto& [p, a] : e.factorization) fac.push_back({p, a});
        arr.push_back({{"n", e.n},
                       {"factorization", fac},
                       {"ordering", e.ordering ? nlohmann::json(*e.ordering) : nlohmann::json(nullptr)},
                       {"certificate", to_json(e.certificate)}});
    }
    return arr;
}

struct FullDivisorResult {
    bool holds = true;
    std::size_t covers_seen = 0;
    std::optional<CoverSystem> counterexample;  // a minimal cover whose moduli miss part of D_n
};

// Every minimal cover with distinct moduli in D_n uses all of D_n.  Walks the
// lcm targets d | n and stops at the first cover whose moduli set differs.
inline FullDivisorResult full_divisor_set_report(u64 n, Decider& decider) {
    if (!decider.is_covering(n)) {
        throw PreconditionError(std::to_string(n) + " is not a covering number");
    }
    const auto dn = proper_moduli(n);
    const std::set<u64> full(dn.begin(), dn.end());
    FullDivisorResult res;
    for (u64 d : dn) {
        if (d != n && !decider.is_covering(d)) continue;
        auto pool = proper_moduli(d);
        detail::CoverSearch s(d, pool, decider.budget(), n, SearchOptions{.exact_period = true});
        s.run([&](const std::vector<ResidueClass>& classes) {
            ++res.covers_seen;
            CoverSystem sys(classes);
            if (sys.moduli_set() != full) {
                res.holds = false;
                res.counterexample = sys.canonical();
                return false;
            }
            return true;
        });
        if (!res.holds) break;
    }
    return res;
}

inline bool full_divisor_set_check(u64 n, Decider& decider) {
    return full_divisor_set_report(n, decider).holds;
}

inline bool full_divisor_set_check(u64 n, SearchBudget budget = {}) {
    Decider d(budget);
    return full_divisor_set_check(n, d);
}

}  // namespace covnum
