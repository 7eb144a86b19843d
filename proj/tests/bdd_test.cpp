#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "gr1/bdd.hpp"
#include "support/truth_table.hpp"

using namespace gr1::bdd;
using gr1::testing::TernaryCube;
using gr1::testing::TruthTable;

namespace {

// A manager with n propositions; tests use only the unprimed slots 0,2,4,...
struct Fixture {
    explicit Fixture(int n, ManagerOptions options = {}) : mgr(options) {
        for (int i = 0; i < n; ++i) {
            mgr.new_proposition("x" + std::to_string(i));
            vars.push_back(unprimed_var(i));
        }
    }
    Bdd x(int i) { return mgr.var(unprimed_var(i)); }

    Manager mgr;
    VarSet vars;
};

TruthTable table_of(Manager& mgr, const Bdd& f, int n) {
    TruthTable t(std::size_t{1} << n);
    std::vector<bool> assignment(static_cast<std::size_t>(2 * n));
    for (std::uint32_t m = 0; m < t.size(); ++m) {
        for (int i = 0; i < n; ++i) assignment[static_cast<std::size_t>(2 * i)] = (m >> i) & 1u;
        t[m] = mgr.eval(f, assignment);
    }
    return t;
}

// Builds a BDD from a truth table by Shannon expansion; independent of the
// expression that produced the table.
Bdd from_table_rec(Fixture& fx, const TruthTable& t, int var, std::uint32_t prefix) {
    if (var < 0) return t[prefix] ? fx.mgr.bdd_true() : fx.mgr.bdd_false();
    Bdd lo = from_table_rec(fx, t, var - 1, prefix);
    Bdd hi = from_table_rec(fx, t, var - 1, prefix | (1u << var));
    return (!fx.x(var) & lo) | (fx.x(var) & hi);
}

Bdd from_table(Fixture& fx, const TruthTable& t, int n) { return from_table_rec(fx, t, n - 1, 0); }

Bdd random_dnf(Fixture& fx, std::mt19937& rng, int n, int terms, int max_lits) {
    Bdd f = fx.mgr.bdd_false();
    std::uniform_int_distribution<int> var_dist(0, n - 1);
    std::uniform_int_distribution<int> lit_dist(1, max_lits);
    for (int t = 0; t < terms; ++t) {
        Bdd term = fx.mgr.bdd_true();
        int lits = lit_dist(rng);
        for (int l = 0; l < lits; ++l) {
            Bdd v = fx.x(var_dist(rng));
            term &= (rng() & 1u) ? v : !v;
        }
        f |= term;
    }
    return f;
}

Bdd random_expr(Fixture& fx, std::mt19937& rng, int n, int depth) {
    if (depth == 0 || rng() % 4 == 0) {
        Bdd v = fx.x(static_cast<int>(rng() % static_cast<unsigned>(n)));
        return (rng() & 1u) ? v : !v;
    }
    Bdd a = random_expr(fx, rng, n, depth - 1);
    Bdd b = random_expr(fx, rng, n, depth - 1);
    switch (rng() % 6) {
        case 0: return a & b;
        case 1: return a | b;
        case 2: return a ^ b;
        case 3: return a.implies(b);
        case 4: return a.iff(b);
        default: return a.diff(b);
    }
}

TernaryCube to_ternary(const Cube& c) {
    TernaryCube t{0, 0};
    for (auto [var, value] : c) {
        int i = var / 2;
        t.second |= 1u << i;
        if (value) t.first |= 1u << i;
    }
    return t;
}

}  // namespace

TEST(BddApply, ContradictionAbsorptionSelfInverse) {
    Fixture fx(2);
    Bdd x = fx.x(0);
    EXPECT_TRUE((x & !x).is_false());
    EXPECT_TRUE((x | fx.mgr.bdd_true()).is_true());
    EXPECT_TRUE((x ^ x).is_false());
    EXPECT_EQ(x.implies(fx.x(1)), !x | fx.x(1));
    EXPECT_EQ(x.diff(fx.x(1)), x & !fx.x(1));
}

TEST(BddApply, ManagerMismatchThrows) {
    Fixture a(1), b(1);
    EXPECT_THROW(a.mgr.apply(Op::And, a.x(0), b.x(0)), std::invalid_argument);
}

TEST(BddQuantify, Examples) {
    Fixture fx(2);
    Bdd x = fx.x(0), y = fx.x(1);
    EXPECT_EQ(fx.mgr.exists({unprimed_var(0)}, x & y), y);
    EXPECT_EQ(fx.mgr.forall({unprimed_var(0)}, x | y), y);
    EXPECT_EQ(fx.mgr.exists({}, x ^ y), x ^ y);
    EXPECT_EQ(fx.mgr.and_exists(x, y, {unprimed_var(0)}), y);
}

TEST(BddRename, PrimeUnprime) {
    Fixture fx(2);
    Bdd f = fx.x(0) & fx.x(1);
    Bdd primed = fx.mgr.prime(f);
    EXPECT_EQ(primed, fx.mgr.var(primed_var(0)) & fx.mgr.var(primed_var(1)));
    EXPECT_EQ(fx.mgr.unprime(primed), f);
    EXPECT_TRUE(fx.mgr.prime(fx.mgr.bdd_true()).is_true());
    EXPECT_THROW(fx.mgr.prime(primed), std::invalid_argument);
    EXPECT_THROW(fx.mgr.unprime(f), std::invalid_argument);
}

TEST(BddCount, Examples) {
    Fixture fx(3);
    EXPECT_EQ(fx.mgr.count_models(fx.mgr.bdd_true(), fx.vars), 8);
    VarSet xy{unprimed_var(0), unprimed_var(1)};
    EXPECT_EQ(fx.mgr.count_models(fx.x(0) & fx.x(1), xy), 1);
    EXPECT_EQ(fx.mgr.count_models(fx.x(0), xy), 2);
    EXPECT_THROW(fx.mgr.count_models(fx.x(2), xy), std::invalid_argument);
}

TEST(BddCount, ArbitraryPrecision) {
    Fixture fx(80);
    BigInt expected = BigInt(1) << 79;
    EXPECT_EQ(fx.mgr.count_models(fx.x(3), fx.vars), expected);
}

TEST(BddCount, AgreesWithTruthTable) {
    std::mt19937 rng(7);
    for (int round = 0; round < 40; ++round) {
        int n = 4 + round % 13;  // up to 16 variables
        Fixture fx(n);
        Bdd f = random_dnf(fx, rng, n, 6, 4);
        EXPECT_EQ(fx.mgr.count_models(f, fx.vars), gr1::testing::count_ones(table_of(fx.mgr, f, n)));
    }
}

TEST(BddCanonicity, EquivalentExpressionsShareNodes) {
    std::mt19937 rng(11);
    for (int round = 0; round < 100; ++round) {
        int n = 2 + round % 9;  // up to 10 variables
        Fixture fx(n);
        Bdd f = random_expr(fx, rng, n, 5);
        Bdd g = from_table(fx, table_of(fx.mgr, f, n), n);
        EXPECT_EQ(f.id(), g.id());
    }
}

TEST(BddCanonicity, OrderingRespected) {
    std::mt19937 rng(3);
    Fixture fx(8);
    Bdd f = random_expr(fx, rng, 8, 6);
    std::vector<Bdd> stack{f};
    while (!stack.empty()) {
        Bdd n = stack.back();
        stack.pop_back();
        if (n.is_constant()) continue;
        for (const Bdd& c : {n.low(), n.high()}) {
            if (!c.is_constant()) EXPECT_LT(n.var(), c.var());
            stack.push_back(c);
        }
    }
}

TEST(BddGarbage, CollectionKeepsReferencedFunctions) {
    ManagerOptions options;
    options.gc_threshold = 64;
    Fixture fx(10, options);
    std::mt19937 rng(5);
    std::vector<std::pair<Bdd, TruthTable>> kept;
    for (int i = 0; i < 50; ++i) {
        Bdd f = random_expr(fx, rng, 10, 6);
        kept.emplace_back(f, table_of(fx.mgr, f, 10));
        for (int j = 0; j < 5; ++j) random_expr(fx, rng, 10, 6);
    }
    fx.mgr.collect_garbage();
    for (auto& [f, t] : kept) {
        EXPECT_EQ(table_of(fx.mgr, f, 10), t);
        EXPECT_EQ(from_table(fx, t, 10).id(), f.id());
    }
}

TEST(BddBudget, NodeBudgetRaisesResourceLimit) {
    ManagerOptions options;
    options.node_budget = 40;
    Fixture fx(16, options);
    std::mt19937 rng(1);
    EXPECT_THROW(
        {
            for (int i = 0; i < 100; ++i) random_dnf(fx, rng, 16, 10, 6);
        },
        gr1::ResourceLimit);
}

TEST(BddMinAssignment, PicksSmallestInVariableOrder) {
    Fixture fx(3);
    Bdd f = (fx.x(0) | fx.x(1)) & fx.x(2);
    auto a = fx.mgr.min_assignment(f, fx.vars);
    ASSERT_TRUE(a);
    Cube expected{{0, false}, {2, true}, {4, true}};
    EXPECT_EQ(*a, expected);
    EXPECT_FALSE(fx.mgr.min_assignment(fx.mgr.bdd_false(), fx.vars));
}

TEST(BddDot, NamesAndEdgeStyles) {
    Fixture fx(2);
    std::ostringstream out;
    fx.mgr.write_dot(out, fx.x(0) & fx.x(1));
    EXPECT_NE(out.str().find("label=\"x0\""), std::string::npos);
    EXPECT_NE(out.str().find("style=dashed"), std::string::npos);
}

TEST(PrimeCubes, Examples) {
    Fixture fx(3);
    auto all = [&](const Bdd& f) {
        std::vector<Cube> out;
        auto e = fx.mgr.prime_cubes(f, fx.vars);
        while (auto c = e.next()) out.push_back(*c);
        return out;
    };
    std::vector<Cube> or_and{{{0, true}}, {{2, true}, {4, true}}};
    EXPECT_EQ(all(fx.x(0) | (fx.x(1) & fx.x(2))), or_and);
    EXPECT_EQ(all(fx.mgr.bdd_true()), std::vector<Cube>{Cube{}});
    std::vector<Cube> xor_cubes{{{0, false}, {2, true}}, {{0, true}, {2, false}}};
    EXPECT_EQ(all(fx.x(0) ^ fx.x(1)), xor_cubes);
    EXPECT_TRUE(all(fx.mgr.bdd_false()).empty());
}

TEST(PrimeCubes, AgreeWithTruthTableOracle) {
    std::mt19937 rng(19);
    for (int round = 0; round < 60; ++round) {
        int n = 2 + round % 11;  // up to 12 variables
        Fixture fx(n);
        Bdd f = random_dnf(fx, rng, n, 1 + round % 6, 4);
        std::set<TernaryCube> emitted;
        Bdd cover = fx.mgr.bdd_false();
        std::size_t last_size = 0;
        auto e = fx.mgr.prime_cubes(f, fx.vars);
        while (auto c = e.next()) {
            EXPECT_GE(c->size(), last_size) << "largest cubes must come first";
            last_size = c->size();
            Bdd cube = fx.mgr.cube(*c);
            EXPECT_TRUE((cube & !f).is_false()) << "emitted cube is not an implicant";
            cover |= cube;
            emitted.insert(to_ternary(*c));
        }
        EXPECT_EQ(cover, f);
        for (const auto& a : emitted) {
            for (const auto& b : emitted) {
                bool a_in_b = a != b && (a.second & b.second) == b.second &&
                              (a.first & b.second) == b.first;
                EXPECT_FALSE(a_in_b) << "cube contained in another emitted cube";
            }
        }
        EXPECT_EQ(emitted, gr1::testing::prime_implicants(table_of(fx.mgr, f, n), n));
    }
}

TEST(PrimeCubes, SixteenVariableOracle) {
    std::mt19937 rng(23);
    Fixture fx(16);
    Bdd f = random_dnf(fx, rng, 16, 5, 5);
    std::set<TernaryCube> emitted;
    auto e = fx.mgr.prime_cubes(f, fx.vars);
    while (auto c = e.next()) emitted.insert(to_ternary(*c));
    EXPECT_EQ(emitted, gr1::testing::prime_implicants(table_of(fx.mgr, f, 16), 16));
}
