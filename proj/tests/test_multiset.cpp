#include "cosm/oracle.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace cosm;

namespace {

Multiset ms(const CombinationalSystem& sys, std::initializer_list<std::pair<const char*, std::size_t>> items) {
    Multiset s;
    for (const auto& [id, count] : items) s.counts[sys.entity_index(id)] = count;
    return s;
}

}  // namespace

TEST_CASE("toy1 plan costs") {
    const CombinationalSystem sys = make_toy1();
    SECTION("singleton with no sharing opportunity equals simplicity") {
        const MultisetResult r = multiset_simplicity(sys, 0, ms(sys, {{"ab", 1}}));
        CHECK(r.value.str() == "3");
        CHECK(!r.approximate);
    }
    SECTION("shared plan pays the ab production once") {
        // Applications cat(a,b) and cat(ab,a): operator costs 1+1, atom uses
        // a,b,a: total 5.
        const MultisetResult r = multiset_simplicity(sys, 0, ms(sys, {{"ab", 1}, {"aba", 1}}));
        CHECK(r.value.str() == "5");
        CHECK(r.plan.size() == 2);
        CHECK(r.normalized.str() == "5/2");
    }
    SECTION("duplicates are free under sharing") {
        const MultisetResult r = multiset_simplicity(sys, 0, ms(sys, {{"ab", 2}}));
        CHECK(r.value.str() == "3");
        CHECK(r.free_duplicates == 1);
        CHECK(r.normalized.str() == "3/2");
    }
    SECTION("atom and identity targets") {
        CHECK(multiset_simplicity(sys, 0, ms(sys, {{"a", 1}})).value.str() == "1");
        CHECK(multiset_simplicity(sys, 0, ms(sys, {{"a", 3}})).value.str() == "1");
        CHECK(multiset_simplicity(sys, 0, ms(sys, {{"e", 1}})).value.is_zero());
    }
}

TEST_CASE("plan sharing beats tree simplicity when intermediates repeat") {
    StringConcatParams p;
    p.alphabet = "a";
    p.max_length = 4;
    const CombinationalSystem sys = generate_string_concat(p);
    SimplicityEngine eng(sys);
    // Tree cost pays aa twice; the plan builds it once.
    CHECK(eng.simplicity(0, sys.entity_index("aaaa")).str() == "7");
    CHECK(multiset_simplicity(sys, 0, ms(sys, {{"aaaa", 1}})).value.str() == "4");
}

TEST_CASE("underivable support yields infinity") {
    SystemBuilder b;
    b.entity("e");
    b.entity("a", true);
    const EntityIndex orphan = b.entity("orphan");
    const std::size_t f = b.op("f");
    const std::size_t m = b.measure("m1", {f});
    b.atom_cost(m, b.entity("a"), Cost(Rational(1)));
    b.op_cost(m, f, Cost(Rational(1)));
    const CombinationalSystem sys = b.build();
    Multiset s;
    s.counts[orphan] = 1;
    CHECK(multiset_simplicity(sys, 0, s).value.is_infinite());
}

TEST_CASE("exact solver cap") {
    const CombinationalSystem sys = make_str1();  // 17 entities
    MultisetOptions options;
    Multiset s;
    s.counts[sys.entity_index("aa")] = 1;
    CHECK_THROWS_AS(multiset_simplicity(sys, 0, s, options), Error);
    options.exact_entity_cap = 24;
    CHECK(multiset_simplicity(sys, 0, s, options).value.str() == "3");
}

TEST_CASE("exact solver agrees with the plan-enumeration oracle") {
    SECTION("fixtures") {
        for (const CombinationalSystem& sys : {make_toy1(), make_toy2()}) {
            std::mt19937_64 rng(55);
            for (int i = 0; i < 60; ++i) {
                Multiset s;
                const std::size_t size = 1 + rng() % 4;
                for (std::size_t k = 0; k < size; ++k)
                    s.counts[testing::random_entity(sys, rng)] = 1 + rng() % 3;
                CHECK(multiset_simplicity(sys, 0, s).value == oracle::multiset_plan(sys, 0, s));
            }
        }
    }
    SECTION("random systems") {
        std::mt19937_64 rng(123);
        int done = 0;
        while (done < 15) {
            testing::RandomSystemOptions opt;
            opt.max_entities = 8;
            const CombinationalSystem sys = testing::random_system(rng, opt);
            if (sys.reactions.size() > 16) continue;
            ++done;
            for (int i = 0; i < 10; ++i) {
                Multiset s;
                const std::size_t size = 1 + rng() % 3;
                for (std::size_t k = 0; k < size; ++k)
                    s.counts[testing::random_entity(sys, rng)] = 1;
                for (std::size_t j = 0; j < sys.measures.size(); ++j)
                    REQUIRE(multiset_simplicity(sys, j, s).value ==
                            oracle::multiset_plan(sys, j, s));
            }
        }
    }
}

TEST_CASE("subadditivity under multiset union") {
    std::mt19937_64 rng(99);
    for (const CombinationalSystem& sys : {make_toy1(), make_toy2()}) {
        for (int i = 0; i < 80; ++i) {
            Multiset s, t;
            const std::size_t ns = 1 + rng() % 3, nt = 1 + rng() % 3;
            for (std::size_t k = 0; k < ns; ++k) s.counts[testing::random_entity(sys, rng)] = 1 + rng() % 2;
            for (std::size_t k = 0; k < nt; ++k) t.counts[testing::random_entity(sys, rng)] = 1 + rng() % 2;
            const Cost both = multiset_simplicity(sys, 0, s.union_with(t)).value;
            const Cost parts = multiset_simplicity(sys, 0, s).value +
                               multiset_simplicity(sys, 0, t).value;
            REQUIRE(both <= parts);
        }
    }
}

TEST_CASE("greedy is an upper bound and flagged approximate") {
    std::mt19937_64 rng(404);
    MultisetOptions greedy;
    greedy.solver = MultisetSolver::Greedy;
    for (const CombinationalSystem& sys : {make_toy1(), make_toy2()}) {
        for (int i = 0; i < 40; ++i) {
            Multiset s;
            const std::size_t size = 1 + rng() % 4;
            for (std::size_t k = 0; k < size; ++k)
                s.counts[testing::random_entity(sys, rng)] = 1 + rng() % 2;
            const MultisetResult g = multiset_simplicity(sys, 0, s, greedy);
            const MultisetResult x = multiset_simplicity(sys, 0, s);
            CHECK(g.approximate);
            CHECK(!x.approximate);
            REQUIRE(x.value <= g.value);
        }
    }
}
