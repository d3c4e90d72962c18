#include "cosm/oracle.hpp"
#include "cosm/pattern.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace cosm;

namespace {

Intensity intensity_of(const CombinationalSystem& sys, const SimplicityEngine& eng, const char* y,
                       const char* z, const char* op, const char* x) {
    return pattern_intensity(sys, eng, sys.entity_index(y), sys.entity_index(z),
                             sys.operator_index(op), sys.entity_index(x));
}

}  // namespace

TEST_CASE("str1 worked intensities") {
    const CombinationalSystem sys = make_str1();
    SimplicityEngine eng(sys);
    SECTION("squaring decomposition of a^4") {
        const Intensity i = intensity_of(sys, eng, "aa", "aa", "sq", "aaaa");
        REQUIRE(i.is_value());
        CHECK(to_string(i.value) == "1/14");  // (7 - 13/2) / 7
        CHECK(i.positive());
    }
    SECTION("cat decomposition saves nothing: boundary of strictness") {
        const Intensity i = intensity_of(sys, eng, "aaa", "a", "cat", "aaaa");
        REQUIRE(i.is_value());
        CHECK(i.value == 0);
        CHECK(!i.positive());  // zero intensity is not a pattern
    }
    SECTION("identity decomposition scores exactly zero") {
        const Intensity i = intensity_of(sys, eng, "aaaa", "e", "cat", "aaaa");
        REQUIRE(i.is_value());
        CHECK(i.value == 0);
    }
    SECTION("per-measure denominator differs from the base intensity") {
        const auto v = pattern_vector(sys, eng, sys.entity_index("aa"), sys.entity_index("aa"),
                                      sys.operator_index("sq"), sys.entity_index("aaaa"));
        REQUIRE(v.size() == 1);
        REQUIRE(v[0].is_value());
        CHECK(to_string(v[0].value) == "1/11");  // (7 - 13/2) / (11/2)
        const auto base = pattern_vector(sys, eng, sys.entity_index("aa"), sys.entity_index("aa"),
                                         sys.operator_index("sq"), sys.entity_index("aaaa"),
                                         kNoEntity, DenominatorMode::Base);
        REQUIRE(base[0].is_value());
        CHECK(to_string(base[0].value) == "1/14");
    }
}

TEST_CASE("intensity preconditions") {
    const CombinationalSystem sys = make_str1();
    SimplicityEngine eng(sys);
    SECTION("zero-cost target is undefined") {
        CHECK_THROWS_AS(intensity_of(sys, eng, "e", "e", "cat", "e"), Error);
    }
    SECTION("non-decomposition rejected") {
        CHECK_THROWS_AS(intensity_of(sys, eng, "aa", "a", "sq", "aaaa"), Error);
    }
}

TEST_CASE("multipattern classification") {
    auto val = [](const char* text) { return Intensity::of(*parse_rational(text)); };
    SECTION("all positive: full with exact geometric mean") {
        const auto [cls, mean] = classify_multipattern({val("1/14"), val("1/11")});
        CHECK(cls == MultipatternClass::Full);
        REQUIRE(mean.has_value());
        CHECK(to_string(mean->radicand) == "1/154");
        CHECK(mean->degree == 2);
    }
    SECTION("sign split: mixed") {
        const auto [cls, mean] = classify_multipattern({val("1/14"), val("-1/7")});
        CHECK(cls == MultipatternClass::Mixed);
        CHECK(!mean.has_value());
    }
    SECTION("all nonpositive: none") {
        const auto [cls, mean] = classify_multipattern({val("-1"), val("-1")});
        CHECK(cls == MultipatternClass::None);
        CHECK(!mean.has_value());
    }
    SECTION("unreachable pricing counts as nonpositive") {
        const auto [cls, mean] = classify_multipattern({val("1/2"), Intensity::neg_infinite()});
        CHECK(cls == MultipatternClass::Mixed);
        CHECK(!mean.has_value());
    }
}

TEST_CASE("multipattern frontiers") {
    const CombinationalSystem sys = make_str1();
    SimplicityEngine eng(sys);
    SECTION("atoms have no decompositions") {
        CHECK(multipattern_frontier(sys, eng, sys.entity_index("a")).records.empty());
    }
    SECTION("a^4 frontier keeps the squaring record and drops dominated cats") {
        const FrontierSet f = multipattern_frontier(sys, eng, sys.entity_index("aaaa"));
        REQUIRE(f.records.size() == 1);
        CHECK(sys.entities[f.records[0].y] == "aa");
        CHECK(sys.entities[f.records[0].z] == "aa");
        CHECK(sys.operators[f.records[0].op].id == "sq");
        CHECK(f.records[0].classification == MultipatternClass::Full);
    }
    SECTION("single decomposition is its own frontier") {
        const FrontierSet f = multipattern_frontier(sys, eng, sys.entity_index("aa"));
        // aa has decompositions cat(a,a) and sq(a,a); sq is cheaper in m2.
        REQUIRE(!f.records.empty());
        for (const auto& rec : f.records) CHECK(rec.target == sys.entity_index("aa"));
    }
    SECTION("frontier members stay stable when others are removed") {
        const FrontierSet f = multipattern_frontier(sys, eng, sys.entity_index("aaaa"));
        const FrontierSet refiltered = frontier_filter(f.records);
        CHECK(refiltered.records.size() == f.records.size());
    }
}

TEST_CASE("frontier agrees with the oracle") {
    std::mt19937_64 rng(321);
    int done = 0;
    while (done < 25) {
        testing::RandomSystemOptions opt;
        opt.max_entities = 9;
        opt.max_measures = 2;
        const CombinationalSystem sys = testing::random_system(rng, opt);
        if (sys.measures.size() < 2) continue;
        ++done;
        SimplicityEngine eng(sys);
        for (EntityIndex x = 0; x < sys.entities.size(); ++x) {
            const FrontierSet got = multipattern_frontier(sys, eng, x);
            const FrontierSet expect = oracle::multipattern_frontier(sys, x);
            REQUIRE(got.records.size() == expect.records.size());
            for (const auto& rec : got.records) {
                bool found = false;
                for (const auto& other : expect.records)
                    if (other.reaction == rec.reaction) found = true;
                REQUIRE(found);
            }
        }
    }
}

TEST_CASE("intensity never exceeds one") {
    std::mt19937_64 rng(654);
    int checked = 0;
    while (checked < 300) {
        testing::RandomSystemOptions opt;
        opt.max_entities = 8;
        opt.max_measures = 2;
        const CombinationalSystem sys = testing::random_system(rng, opt);
        if (sys.measures.size() < 2) continue;
        SimplicityEngine eng(sys);
        for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
            const Reaction& rx = sys.reactions[r];
            for (EntityIndex x : rx.products) {
                const Cost sx = eng.simplicity(0, x);
                if (!sx.is_finite() || sx.is_zero()) continue;
                const Intensity i = pattern_intensity(sys, eng, rx.left, rx.right, rx.op, x);
                if (i.is_value()) {
                    REQUIRE(i.value <= 1);
                    ++checked;
                }
            }
        }
    }
}

TEST_CASE("intensities are invariant under uniform cost scaling") {
    const Rational lambda(7, 2);
    const CombinationalSystem sys = make_str1();
    CombinationalSystem scaled = sys;
    for (auto& m : scaled.measures) {
        for (auto& [k, v] : m.atom_costs) v = Cost(v.value() * lambda);
        for (auto& [k, v] : m.op_default_costs) v = Cost(v.value() * lambda);
        for (auto& [k, v] : m.reaction_cost_overrides) v = Cost(v.value() * lambda);
    }
    scaled.index();
    SimplicityEngine eng(sys), scaled_eng(scaled);
    for (EntityIndex x = 0; x < sys.entities.size(); ++x) {
        for (std::size_t r : sys.reactions_producing(x)) {
            const Reaction& rx = sys.reactions[r];
            const Cost sx = eng.simplicity(0, x);
            if (!sx.is_finite() || sx.is_zero()) continue;
            const Intensity a = pattern_intensity(sys, eng, rx.left, rx.right, rx.op, x);
            const Intensity b = pattern_intensity(scaled, scaled_eng, rx.left, rx.right, rx.op, x);
            REQUIRE(a.kind == b.kind);
            if (a.is_value()) REQUIRE(a.value == b.value);
        }
    }
}

TEST_CASE("a measure adding nothing usable scores nonpositive coordinates") {
    // Third measure duplicates the base: h_13 >= sigma_1 minimum, so every
    // decomposition's extra coordinate is <= 0.
    SystemBuilder b;
    b.entity("e");
    const EntityIndex a = b.entity("a", true);
    const EntityIndex aa = b.entity("aa");
    const EntityIndex a4 = b.entity("aaaa");
    const std::size_t cat = b.op("cat");
    const std::size_t sq = b.op("sq");
    b.reaction(cat, a, a, {aa});
    b.reaction(cat, aa, aa, {a4});
    b.reaction(sq, aa, aa, {a4});
    const std::size_t m1 = b.measure("m1", {cat});
    const std::size_t m2 = b.measure("m2", {cat, sq});
    const std::size_t m3 = b.measure("m3", {cat});
    for (std::size_t j : {m1, m2, m3}) {
        b.atom_cost(j, a, Cost(Rational(1)));
        b.op_cost(j, cat, Cost(Rational(1)));
    }
    b.op_cost(m2, sq, Cost(Rational(1, 2)));
    const CombinationalSystem sys = b.build();
    SimplicityEngine eng(sys);
    for (std::size_t r : sys.reactions_producing(a4)) {
        const Reaction& rx = sys.reactions[r];
        const auto v = pattern_vector(sys, eng, rx.left, rx.right, rx.op, a4);
        REQUIRE(v.size() == 2);
        if (v[1].is_value()) CHECK(v[1].value <= 0);  // coordinate for m3
    }
}

TEST_CASE("records with undefined coordinates are excluded from frontiers") {
    // Target underivable in the extended measure denominator: per-measure
    // mode flags the coordinate undefined and the record is dropped.
    SystemBuilder b;
    b.entity("e");
    const EntityIndex a = b.entity("a", true);
    const EntityIndex p = b.entity("p");
    const std::size_t f = b.op("f");
    const std::size_t g = b.op("g");
    b.reaction(f, a, a, {p});
    const std::size_t m1 = b.measure("m1", {f});
    const std::size_t m2 = b.measure("m2", {f, g});
    b.atom_cost(m1, a, Cost(Rational(1)));
    b.atom_cost(m2, a, Cost::infinity());  // p underivable at finite cost in m2
    b.op_cost(m1, f, Cost(Rational(1)));
    b.op_cost(m2, f, Cost(Rational(1)));
    b.op_cost(m2, g, Cost(Rational(1)));
    const CombinationalSystem sys = b.build();
    SimplicityEngine eng(sys);
    CHECK(multipattern_frontier(sys, eng, p).records.empty());
}
