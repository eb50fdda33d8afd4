#pragma once

// Backtracking engine shared by the decision procedure and the minimal-cover
// enumerator.  The working period is L; candidate moduli (the pool) are
// divisors of L greater than one, each usable at most once.
//
// Every node picks an uncovered residue x with the fewest remaining options
// (ties: least x).  Some class through x must be chosen, and for a modulus d
// that class is x (mod d), so the children are the unused moduli in pool
// order.  After the child for d is exhausted, x (mod d) is forbidden for the
// later siblings: any cover containing it was reachable from the earlier
// child.  Each cover reachable by the search is therefore produced once.
//
// Pruning, all sound for minimal covers:
//   * capacity: the uncovered residues must fit into the best allowed class
//     of each unused modulus;
//   * redundancy: once every residue of a chosen class is covered twice the
//     class stays redundant;
//   * prime levels: if p^b is the highest power of p dividing a modulus of a
//     minimal cover, at least p of its moduli are divisible by p^b.  (The
//     residues x + jN/p, j < p, lie in a class of every modulus not divisible
//     by p^b together, and in at most one class of every other modulus.)
//     In exact-period mode b is the full exponent of p in L.
//   * fibers: for a prime p with p^e || L, call a modulus "top" if p^e divides
//     it and "lower" otherwise.  A lower class contains each fiber
//     {y + jL/p : j < p} entirely or not at all; a top class meets a fiber in
//     at most one residue.  A fiber missed by every lower class therefore
//     needs p distinct top classes, and the number of such fibers the top
//     moduli can serve bounds how much the lower moduli may leave open.
//     That number is found once per prime by a small exhaustive search over
//     the projections of the top classes to Z_{L/p}; a counting bound stands
//     in when that search is too large.  Before searching, the best the lower
//     moduli can do on Z_{L/p} is compared with it, which alone settles some
//     periods (700 needs 97 of 100 fibers closed, and 93 is the most).
//   * optional class-count floor (used by the decider with the Znam-Simpson
//     bound k >= 1 + f(L) for minimal covers of period exactly L).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "covnum/cover.hpp"
#include "covnum/errors.hpp"
#include "covnum/numtheory.hpp"

namespace covnum {

struct SearchOptions {
    // Only report covers whose moduli have lcm exactly L.
    bool exact_period = false;
    // Prune when fewer than this many classes can still take part.
    std::size_t min_classes = 0;
};

struct SearchBudget {
    std::uint64_t max_nodes = 100'000'000;
    std::chrono::milliseconds max_elapsed{60'000};

    void validate() const {
        if (max_nodes == 0 || max_elapsed.count() <= 0) {
            throw PreconditionError("search budget fields must be positive");
        }
    }
};

namespace detail {

class CoverSearch {
public:
    // Receives the classes of each complete cover; returning false stops the search.
    using Visitor = std::function<bool(const std::vector<ResidueClass>&)>;

    CoverSearch(u64 period, std::vector<u64> pool, SearchBudget budget, u64 subject,
                SearchOptions options = {})
        : L_(period), pool_(std::move(pool)), budget_(budget), subject_(subject), opts_(options) {
        budget_.validate();
        if (L_ == 0 || L_ > kSieveBound) {
            throw SieveBoundError("working period " + std::to_string(L_) + " outside [1, 2^31]");
        }
        for (u64 d : pool_) {
            if (d < 2 || L_ % d != 0) {
                throw PreconditionError("pool modulus " + std::to_string(d) +
                                        " must exceed 1 and divide " + std::to_string(L_));
            }
        }
        const std::size_t k = pool_.size();
        w_.assign(L_, 0);
        options_.assign(L_, static_cast<std::uint32_t>(k));
        uncovered_ = L_;
        used_.assign(k, false);
        residue_.assign(k, 0);
        priv_.assign(k, 0);
        best_.assign(k, 0);
        cnt_.resize(k);
        forbidden_.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            cnt_[i].assign(pool_[i], static_cast<std::uint32_t>(L_ / pool_[i]));
            forbidden_[i].assign(pool_[i], 0);
        }
        for (const auto& [p, e] : factor(L_)) {
            PrimeLevels pl{p, e, {}};
            for (u64 d : pool_) {
                unsigned v = 0;
                for (u64 m = d; m % p == 0; m /= p) ++v;
                pl.valuation.push_back(v);
            }
            pl.fibers = L_ / p;
            pl.open = pl.fibers;
            pl.lower_hits.assign(pl.fibers, 0);
            pl.open_fibers.resize(k);
            for (std::size_t i = 0; i < k; ++i) {
                if (!pl.top(i)) {
                    pl.open_fibers[i].assign(pool_[i], static_cast<std::uint32_t>(pl.fibers / pool_[i]));
                }
            }
            pl.serve_cap = pl.fibers;
            primes_.push_back(std::move(pl));
        }
    }

    // Calls `visit` on every minimal cover of Z_L by pool moduli.
    void run(const Visitor& visit) {
        visit_ = &visit;
        start_ = std::chrono::steady_clock::now();
        stopped_ = false;
        if (uncovered_ > 0 && capacity_ok() && counts_ok()) {
            for (auto& pl : primes_) {
                pl.serve_cap = max_served(pl);
                if (lower_falls_short(pl)) {
                    tick();
                    return;
                }
            }
        }
        dfs();
    }

    std::uint64_t nodes() const noexcept { return nodes_; }

private:
    struct PrimeLevels {
        u64 prime;
        unsigned exponent;               // in L
        std::vector<unsigned> valuation;  // v_p of each pool modulus
        bool top(std::size_t i) const { return valuation[i] == exponent; }

        // Fiber bookkeeping over Z_{L/p}.
        u64 fibers = 0;
        std::vector<std::uint32_t> lower_hits;                 // used lower classes per fiber
        std::vector<std::vector<std::uint32_t>> open_fibers;  // per lower modulus and class
        u64 open = 0;                                          // fibers with no lower class
        u64 serve_cap = 0;  // most fibers that can each meet p top classes
    };

    static constexpr u64 kStaticSteps = 200'000;

    // Most points of Z_{L/p} covered at least p times by one class of each
    // top modulus projected mod d/p.  Translation lets the first class sit at 0.
    u64 max_served(const PrimeLevels& pl) const {
        const u64 M = pl.fibers;
        std::vector<u64> mods;
        for (std::size_t i = 0; i < pool_.size(); ++i) {
            if (pl.top(i)) mods.push_back(pool_[i] / pl.prime);
        }
        if (mods.size() < pl.prime) return 0;
        std::sort(mods.begin(), mods.end());
        const u64 fallback = M;
        if (M > 4096) return fallback;
        std::vector<std::uint32_t> hits(M, 0);
        u64 best = 0, steps = 0;
        bool gave_up = false;
        std::function<void(std::size_t)> go = [&](std::size_t t) {
            if (gave_up) return;
            if (++steps > kStaticSteps) {
                gave_up = true;
                return;
            }
            const u64 rest = mods.size() - t;
            u64 reachable = 0;
            for (u64 y = 0; y < M; ++y) reachable += hits[y] + rest >= pl.prime;
            if (reachable <= best) return;
            if (t == mods.size()) {
                best = reachable;
                return;
            }
            const u64 m = mods[t];
            const u64 choices = t == 0 ? 1 : m;
            for (u64 b = 0; b < choices; ++b) {
                for (u64 y = b; y < M; y += m) ++hits[y];
                go(t + 1);
                for (u64 y = b; y < M; y += m) --hits[y];
            }
        };
        go(0);
        return gave_up ? fallback : best;
    }

    // True when no choice of one class per lower modulus leaves at most
    // serve_cap fibers open.
    bool lower_falls_short(const PrimeLevels& pl) const {
        const u64 M = pl.fibers;
        if (M > 4096) return false;
        if (pl.serve_cap >= M) return false;
        const u64 need = M - pl.serve_cap;
        std::vector<u64> mods;
        for (std::size_t i = 0; i < pool_.size(); ++i) {
            if (!pl.top(i)) mods.push_back(pool_[i]);
        }
        std::sort(mods.begin(), mods.end());
        std::vector<u64> tail(mods.size() + 1, 0);
        for (std::size_t t = mods.size(); t-- > 0;) tail[t] = tail[t + 1] + M / mods[t];
        std::vector<std::uint8_t> hit(M, 0);
        u64 steps = 0;
        bool reached = false, gave_up = false;
        std::function<void(std::size_t, u64)> go = [&](std::size_t t, u64 covered) {
            if (reached || gave_up) return;
            if (covered >= need) {
                reached = true;
                return;
            }
            if (t == mods.size() || covered + tail[t] < need) return;
            if (++steps > kStaticSteps) {
                gave_up = true;
                return;
            }
            const u64 m = mods[t];
            const u64 choices = t == 0 ? 1 : m;
            std::vector<u64> fresh;
            for (u64 b = 0; b < choices && !reached; ++b) {
                fresh.clear();
                for (u64 y = b; y < M; y += m) {
                    if (!hit[y]) fresh.push_back(y);
                }
                if (fresh.empty()) continue;
                for (u64 y : fresh) hit[y] = 1;
                go(t + 1, covered + fresh.size());
                for (u64 y : fresh) hit[y] = 0;
            }
            go(t + 1, covered);
        };
        go(0, 0);
        return !reached && !gave_up;
    }

    void tick() {
        ++nodes_;
        if (nodes_ > budget_.max_nodes) {
            throw BudgetExceeded(subject_, "node limit " + std::to_string(budget_.max_nodes));
        }
        if ((nodes_ & 0x3ff) == 0 &&
            std::chrono::steady_clock::now() - start_ > budget_.max_elapsed) {
            throw BudgetExceeded(subject_,
                                 "time limit " + std::to_string(budget_.max_elapsed.count()) + " ms");
        }
    }

    // Fills best_ for unused moduli; false when the uncovered residues cannot
    // be absorbed.
    bool capacity_ok() {
        u64 loose = 0;
        for (std::size_t i = 0; i < pool_.size(); ++i) {
            if (!used_[i]) loose += L_ / pool_[i];
        }
        if (loose < uncovered_) return false;
        u64 tight = 0;
        for (std::size_t i = 0; i < pool_.size(); ++i) {
            if (used_[i]) continue;
            std::uint32_t best = 0;
            const auto& c = cnt_[i];
            const auto& f = forbidden_[i];
            for (std::size_t a = 0; a < c.size(); ++a) {
                if (!f[a] && c[a] > best) best = c[a];
            }
            best_[i] = best;
            tight += best;
        }
        return tight >= uncovered_;
    }

    bool live(std::size_t i) const { return used_[i] || best_[i] > 0; }

    bool counts_ok() const {
        if (opts_.min_classes > 0) {
            std::size_t n = 0;
            for (std::size_t i = 0; i < pool_.size(); ++i) n += live(i);
            if (n < opts_.min_classes) return false;
        }
        for (const auto& pl : primes_) {
            unsigned top = opts_.exact_period ? pl.exponent : 0;
            for (std::size_t i = 0; i < pool_.size() && !opts_.exact_period; ++i) {
                if (used_[i]) top = std::max(top, pl.valuation[i]);
            }
            if (top == 0) continue;
            u64 count = 0;
            for (std::size_t i = 0; i < pool_.size(); ++i) {
                if (live(i) && pl.valuation[i] >= top) ++count;
            }
            if (count < pl.prime) return false;
        }
        for (const auto& pl : primes_) {
            if (!fibers_ok(pl)) return false;
        }
        return true;
    }

    bool fibers_ok(const PrimeLevels& pl) const {
        // fibers the unused lower moduli can still close
        u64 closable = 0;
        for (std::size_t i = 0; i < pool_.size(); ++i) {
            if (used_[i] || best_[i] == 0 || pl.top(i)) continue;
            std::uint32_t best = 0;
            const auto& c = pl.open_fibers[i];
            const auto& f = forbidden_[i];
            for (std::size_t a = 0; a < c.size(); ++a) {
                if (!f[a] && c[a] > best) best = c[a];
            }
            closable += best;
        }
        if (closable >= pl.open) return true;
        const u64 must_serve = pl.open - closable;

        // Largest P such that P fibers can each receive p top classes, where a
        // top class of modulus d meets L/d fibers.
        std::vector<u64> spans;
        for (std::size_t i = 0; i < pool_.size(); ++i) {
            if (pl.top(i) && live(i)) spans.push_back(L_ / pool_[i]);
        }
        if (spans.size() < pl.prime) return false;
        std::sort(spans.begin(), spans.end(), std::greater<>());
        // sum_t min(P, span_t) >= p * P fails for good once fewer than p spans exceed P.
        u64 served = 0;
        for (u64 P = 1;; ++P) {
            u64 incidences = 0;
            for (u64 s : spans) incidences += std::min(P, s);
            if (incidences < pl.prime * P) break;
            served = P;
            if (served >= must_serve && pl.serve_cap >= must_serve) return true;
        }
        return std::min(served, pl.serve_cap) >= must_serve;
    }

    // Index of the chosen class other than `skip` that contains r.
    std::size_t owner(u64 r, std::size_t skip) const {
        for (std::size_t j = 0; j < pool_.size(); ++j) {
            if (j != skip && used_[j] && r % pool_[j] == residue_[j]) return j;
        }
        return skip;
    }

    void set_forbidden(std::size_t i, u64 a, bool on) {
        forbidden_[i][a] = on ? 1 : 0;
        for (u64 r = a; r < L_; r += pool_[i]) {
            if (on) {
                --options_[r];
            } else {
                ++options_[r];
            }
        }
    }

    // Uses class (residue mod pool_[i]).  Returns false if some chosen class
    // became redundant; the state is valid for remove() either way.
    bool add(std::size_t i, u64 residue) {
        const u64 d = pool_[i];
        const auto& f = forbidden_[i];
        for (u64 r = 0; r < L_; ++r) {
            if (!f[r % d]) --options_[r];
        }
        used_[i] = true;
        residue_[i] = residue;
        for (auto& pl : primes_) {
            if (pl.top(i)) continue;
            for (u64 y = residue % d; y < pl.fibers; y += d) {
                if (pl.lower_hits[y]++ == 0) {
                    --pl.open;
                    for (std::size_t j = 0; j < pool_.size(); ++j) {
                        if (!pl.top(j)) --pl.open_fibers[j][y % pool_[j]];
                    }
                }
            }
        }
        bool ok = true;
        for (u64 r = residue; r < L_; r += d) {
            std::uint32_t before = w_[r]++;
            if (before == 0) {
                --uncovered_;
                ++priv_[i];
                for (std::size_t j = 0; j < pool_.size(); ++j) --cnt_[j][r % pool_[j]];
            } else if (before == 1) {
                if (--priv_[owner(r, i)] == 0) ok = false;
            }
        }
        return ok;
    }

    void remove(std::size_t i) {
        const u64 d = pool_[i];
        const u64 residue = residue_[i];
        for (u64 r = residue; r < L_; r += d) {
            std::uint32_t after = --w_[r];
            if (after == 0) {
                ++uncovered_;
                --priv_[i];
                for (std::size_t j = 0; j < pool_.size(); ++j) ++cnt_[j][r % pool_[j]];
            } else if (after == 1) {
                ++priv_[owner(r, i)];
            }
        }
        for (auto& pl : primes_) {
            if (pl.top(i)) continue;
            for (u64 y = residue % d; y < pl.fibers; y += d) {
                if (--pl.lower_hits[y] == 0) {
                    ++pl.open;
                    for (std::size_t j = 0; j < pool_.size(); ++j) {
                        if (!pl.top(j)) ++pl.open_fibers[j][y % pool_[j]];
                    }
                }
            }
        }
        used_[i] = false;
        const auto& f = forbidden_[i];
        for (u64 r = 0; r < L_; ++r) {
            if (!f[r % d]) ++options_[r];
        }
    }

    void emit() {
        std::vector<ResidueClass> classes;
        u64 lcm = 1;
        for (std::size_t i = 0; i < pool_.size(); ++i) {
            if (!used_[i]) continue;
            classes.emplace_back(static_cast<i64>(residue_[i]), pool_[i]);
            lcm = std::lcm(lcm, pool_[i]);
        }
        if (opts_.exact_period && lcm != L_) return;
        if (!(*visit_)(classes)) stopped_ = true;
    }

    void dfs() {
        tick();
        if (uncovered_ == 0) {
            emit();
            return;
        }
        if (!capacity_ok() || !counts_ok()) return;

        u64 x = L_;
        std::uint32_t fewest = UINT32_MAX;
        for (u64 r = 0; r < L_; ++r) {
            if (w_[r] == 0 && options_[r] < fewest) {
                fewest = options_[r];
                x = r;
                if (fewest == 0) return;
            }
        }

        std::vector<std::size_t> banned;
        for (std::size_t i = 0; i < pool_.size() && !stopped_; ++i) {
            if (used_[i]) continue;
            const u64 a = x % pool_[i];
            if (forbidden_[i][a]) continue;
            if (add(i, a)) dfs();
            remove(i);
            set_forbidden(i, a, true);
            banned.push_back(i);
        }
        for (std::size_t i : banned) set_forbidden(i, x % pool_[i], false);
    }

    u64 L_;
    std::vector<u64> pool_;
    SearchBudget budget_;
    u64 subject_;
    SearchOptions opts_;
    std::vector<PrimeLevels> primes_;

    std::vector<std::uint32_t> w_;        // multiplicity per residue
    std::vector<std::uint32_t> options_;  // unused, allowed moduli per residue
    u64 uncovered_ = 0;
    std::vector<bool> used_;
    std::vector<u64> residue_;
    std::vector<std::uint32_t> priv_;  // residues covered only by this class
    std::vector<std::uint32_t> best_;
    std::vector<std::vector<std::uint32_t>> cnt_;  // uncovered residues per class
    std::vector<std::vector<std::uint8_t>> forbidden_;

    const Visitor* visit_ = nullptr;
    bool stopped_ = false;
    std::uint64_t nodes_ = 0;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail
}  // namespace covnum
