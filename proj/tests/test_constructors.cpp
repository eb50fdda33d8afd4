#include <gtest/gtest.h>

#include "covnum/constructors.hpp"

using namespace covnum;

namespace {

ExponentPlan plan_of(u64 n, Claim c = Claim::unclaimed) {
    std::vector<u64> ps;
    std::vector<unsigned> es;
    for (const auto& [p, e] : factor(n)) {
        ps.push_back(p);
        es.push_back(e);
    }
    return ExponentPlan(ps, es, c);
}

// All increasing prime tuples starting at 2 with product <= limit.
void prime_tuples(std::vector<u64>& cur, u64 prod, u64 limit, const std::vector<u64>& primes,
                  std::size_t from, std::vector<std::vector<u64>>& out) {
    if (cur.size() >= 2) out.push_back(cur);
    for (std::size_t i = from; i < primes.size(); ++i) {
        if (prod > limit / primes[i]) break;
        cur.push_back(primes[i]);
        prime_tuples(cur, prod * primes[i], limit, primes, i + 1, out);
        cur.pop_back();
    }
}

}  // namespace

TEST(Condition, Examples) {
    EXPECT_TRUE(check_condition_13(ExponentPlan({2, 3}, {2, 1})));
    EXPECT_FALSE(check_condition_13(ExponentPlan({3, 5}, {1, 1})));
    EXPECT_FALSE(check_condition_13(ExponentPlan({3, 5}, {4, 4})));
    EXPECT_FALSE(check_condition_13(ExponentPlan({2}, {1})));
    EXPECT_FALSE(check_condition_13(ExponentPlan({2}, {9})));
    EXPECT_TRUE(check_condition_13(ExponentPlan({2, 3, 5}, {1, 2, 1})));
}

TEST(Plan, Validation) {
    EXPECT_THROW(ExponentPlan({2, 3}, {1}), PreconditionError);
    EXPECT_THROW(ExponentPlan({3, 2}, {1, 1}), PreconditionError);
    EXPECT_THROW(ExponentPlan({2, 4}, {1, 1}), PreconditionError);
    EXPECT_THROW(ExponentPlan({2, 3}, {1, 1}, Claim::covering), PreconditionError);
    EXPECT_THROW(ExponentPlan({2}, {70}), RangeError);
    EXPECT_EQ(ExponentPlan({2, 3}, {2, 1}).value(), 12u);
}

TEST(Theorem11, TwelveExactClasses) {
    auto sys = theorem11_cover(ExponentPlan({2, 3}, {2, 1}));
    CoverSystem want({{1, 2}, {2, 4}, {1, 3}, {2, 6}, {0, 12}});
    EXPECT_EQ(sys, want);
    auto rep = verify_cover(sys);
    EXPECT_TRUE(rep.is_cover);
    EXPECT_EQ(rep.period, 12u);
}

TEST(Theorem11, Ninety) {
    auto sys = theorem11_cover(ExponentPlan({2, 3, 5}, {1, 2, 1}));
    EXPECT_EQ(sys.size(), 10u);
    EXPECT_TRUE(verify_cover(sys).is_cover);
    for (u64 m : sys.moduli()) EXPECT_EQ(90 % m, 0u);
}

TEST(Theorem11, RejectsPrimePower) {
    EXPECT_THROW(theorem11_cover(ExponentPlan({2}, {5})), PreconditionError);
}

TEST(Theorem11, EveryValidPlanUpTo10000) {
    int plans = 0;
    for (u64 n = 2; n <= 10'000; ++n) {
        auto plan = plan_of(n);
        if (!check_condition_13(plan)) continue;
        ++plans;
        auto sys = theorem11_cover(plan);
        u64 want = 1;
        for (const auto& [p, e] : factor(n)) want += e * (p - 1);
        ASSERT_EQ(sys.size(), want) << n;
        ASSERT_TRUE(sys.moduli_distinct()) << n;
        for (u64 m : sys.moduli()) {
            ASSERT_GT(m, 1u);
            ASSERT_EQ(n % m, 0u);
        }
        ASSERT_TRUE(verify_cover(sys).is_cover) << n;
    }
    EXPECT_GT(plans, 100);
}

TEST(Corollary11, Examples) {
    auto a = corollary11_exponents({2, 3});
    EXPECT_EQ(a.exponents(), (std::vector<unsigned>{2, 1}));
    EXPECT_EQ(a.claimed(), Claim::covering);
    EXPECT_EQ(corollary11_exponents({2, 3, 5}).exponents(), (std::vector<unsigned>{1, 2, 1}));
    EXPECT_EQ(corollary11_exponents({2, 5, 7}).exponents(), (std::vector<unsigned>{3, 1, 1}));
    EXPECT_THROW(corollary11_exponents({3, 5}), PreconditionError);
    EXPECT_THROW(corollary11_exponents({2}), PreconditionError);
    EXPECT_THROW(corollary11_exponents({2, 9}), PreconditionError);
}

TEST(Corollary11, AlwaysSatisfiesCondition) {
    std::vector<u64> primes;
    for (u64 p = 2; p <= 500'000; ++p) {
        if (is_prime(p)) primes.push_back(p);
    }
    std::vector<std::vector<u64>> tuples;
    std::vector<u64> cur{2};
    prime_tuples(cur, 2, 1'000'000, primes, 1, tuples);
    int checked = 0;
    for (const auto& t : tuples) {
        ExponentPlan plan = [&] {
            try {
                return corollary11_exponents(t);
            } catch (const RangeError&) {
                return ExponentPlan({2, 3}, {2, 1});
            }
        }();
        ASSERT_TRUE(check_condition_13(plan));
        ++checked;
    }
    EXPECT_GT(checked, 1000);
}

TEST(Theorem13, Examples) {
    auto p210 = theorem13_plan({2, 3, 5, 7});
    EXPECT_EQ(p210.exponents(), (std::vector<unsigned>{1, 1, 1, 1}));
    EXPECT_EQ(p210.value(), 210u);
    EXPECT_EQ(p210.claimed(), Claim::primitive_covering);
    for (u64 p : {3, 5, 7, 11, 13}) {
        auto pl = theorem13_plan({2, p});
        EXPECT_EQ(pl.exponents(), (std::vector<unsigned>{static_cast<unsigned>(p - 1), 1}));
    }
    for (u64 p : {5, 7, 11, 13}) {
        auto pl = theorem13_plan({2, 3, p});
        EXPECT_EQ(pl.exponents(), (std::vector<unsigned>{1, static_cast<unsigned>((p - 1) / 2), 1}));
    }
}

TEST(Theorem13, DistinctPreconditionErrors) {
    EXPECT_THROW(theorem13_plan({2, 7, 11}), SizePreconditionError);
    EXPECT_THROW(theorem13_plan({2, 5, 7, 29}), DivisibilityPreconditionError);
    EXPECT_THROW(theorem13_plan({3, 7}), PreconditionError);
}

TEST(Theorem13, ProductIdentity) {
    std::vector<u64> primes;
    for (u64 p = 2; p < 400; ++p) {
        if (is_prime(p)) primes.push_back(p);
    }
    int plans = 0;
    std::vector<std::vector<u64>> tuples;
    std::vector<u64> cur{2};
    prime_tuples(cur, 2, 1'000'000'000ULL, primes, 1, tuples);
    for (const auto& t : tuples) {
        std::optional<ExponentPlan> pl;
        try {
            pl.emplace(theorem13_plan(t));
        } catch (const PreconditionError&) {
            continue;
        } catch (const RangeError&) {
            continue;
        }
        ++plans;
        u64 prod = 1;
        const std::size_t r = t.size();
        for (std::size_t s = 0; s < r; ++s) {
            if (s + 1 < r) {
                ASSERT_EQ(prod, t[s] - 1);
            } else {
                ASSERT_GT(prod, t[s] - 1);
            }
            prod *= pl->exponents()[s] + 1;
        }
        ASSERT_TRUE(check_condition_13(*pl));
    }
    EXPECT_GT(plans, 20);
}

TEST(Theorem12, Witnesses) {
    auto w = theorem12_witness({2, 1});
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->value(), 12u);
    EXPECT_FALSE(theorem12_witness({1, 1}).has_value());
    EXPECT_FALSE(theorem12_witness({1, 7}).has_value());
    EXPECT_FALSE(theorem12_witness({5}).has_value());
    EXPECT_FALSE(theorem12_witness({1, 1, 1}).has_value());
    EXPECT_FALSE(theorem12_witness({1, 1, 4}).has_value());
    auto v = theorem12_witness({1, 2, 1});
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->value(), 90u);
    EXPECT_THROW(theorem12_witness({}), PreconditionError);
}

TEST(Theorem12, ExactlyTheExcludedShapesFail) {
    // all exponent shapes with r <= 6 and exponents <= 3
    for (std::size_t r = 1; r <= 6; ++r) {
        std::vector<unsigned> a(r, 1);
        while (true) {
            bool excluded = r == 1 || (r == 2 && a[0] == 1) || (r == 3 && a[0] == 1 && a[1] == 1);
            std::optional<ExponentPlan> w;
            try {
                w = theorem12_witness(a);
            } catch (const RangeError&) {
                ASSERT_FALSE(excluded);
                goto next;
            }
            ASSERT_EQ(w.has_value(), !excluded);
            if (w) {
                ASSERT_TRUE(check_condition_13(*w));
                ASSERT_EQ(w->primes(), first_primes(r));
                if (w->value() <= 100'000) ASSERT_TRUE(verify_cover(theorem11_cover(*w)).is_cover);
            }
        next:
            std::size_t i = 0;
            while (i < r && a[i] == 3) a[i++] = 1;
            if (i == r) break;
            ++a[i];
        }
    }
}

TEST(Theorem14, Families) {
    EXPECT_EQ(theorem14_family(Family::i, 3), 12u);
    EXPECT_EQ(theorem14_family(Family::i, 5), 80u);
    EXPECT_EQ(theorem14_family(Family::ii, 5), 90u);
    EXPECT_EQ(theorem14_family(Family::iii_a, 7), 280u);
    EXPECT_EQ(theorem14_family(Family::iii_b, 7), 210u);
    EXPECT_EQ(theorem14_family(Family::iii_c, 11), 2u * 9 * 7 * 11);
    EXPECT_EQ(theorem14_family(Family::iii_d, 11), 32u * 7 * 11);
    EXPECT_EQ(theorem14_family(Family::iii_d, 23), 32u * 343 * 23);
}

TEST(Theorem14, Preconditions) {
    EXPECT_THROW(theorem14_family(Family::i, 2), PreconditionError);
    EXPECT_THROW(theorem14_family(Family::ii, 3), PreconditionError);
    EXPECT_THROW(theorem14_family(Family::iii_a, 5), PreconditionError);
    EXPECT_THROW(theorem14_family(Family::iii_b, 5), PreconditionError);
    EXPECT_THROW(theorem14_family(Family::iii_c, 7), PreconditionError);
    EXPECT_THROW(theorem14_family(Family::iii_d, 13), PreconditionError);
    EXPECT_THROW(theorem14_family(Family::iii_d, 19), PreconditionError);
    EXPECT_THROW(theorem14_family(Family::i, 9), PreconditionError);
    EXPECT_TRUE(parse_family("iii-c").has_value());
    EXPECT_FALSE(parse_family("iv").has_value());
}

TEST(Theorem14, FamiliesSatisfyCondition) {
    for (u64 p = 3; p < 60; ++p) {
        if (!is_prime(p)) continue;
        for (auto k : {Family::i, Family::ii, Family::iii_a, Family::iii_b, Family::iii_c, Family::iii_d}) {
            u64 n = 0;
            try {
                n = theorem14_family(k, p);
            } catch (const PreconditionError&) {
                continue;
            } catch (const RangeError&) {
                continue;
            }
            EXPECT_TRUE(check_condition_13(plan_of(n))) << n;
        }
    }
}
