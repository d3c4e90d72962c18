#include "cosm/metric.hpp"
#include "cosm/oracle.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace cosm;

namespace {

std::vector<bool> mask(std::size_t n, std::initializer_list<std::size_t> members) {
    std::vector<bool> m(n, false);
    for (std::size_t i : members) m[i] = true;
    return m;
}

void check_pseudometric(const MetricTable& t) {
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
        REQUIRE(t.d[i][i] == 0);
        for (std::size_t j = 0; j < n; ++j) {
            REQUIRE(t.d[i][j] == t.d[j][i]);
            REQUIRE(t.d[i][j] >= 0);
            for (std::size_t k = 0; k < n; ++k) REQUIRE(t.d[i][j] <= t.d[i][k] + t.d[k][j]);
        }
    }
}

}  // namespace

TEST_CASE("tanimoto distance on sets") {
    CHECK(tanimoto_distance(mask(4, {0, 1}), mask(4, {1, 2})) == Rational(2, 3));
    CHECK(tanimoto_distance(mask(4, {0, 1}), mask(4, {0, 1})) == 0);
    CHECK(tanimoto_distance(mask(4, {}), mask(4, {})) == 0);
    CHECK(tanimoto_distance(mask(4, {}), mask(4, {2})) == 1);
}

TEST_CASE("intension and extension from the graph") {
    const CombinationalSystem sys = make_str1();
    SimplicityEngine eng(sys);
    const SubpatternGraph graph = build_subpattern_graph(sys, eng);
    SECTION("worked membership: a^4 lies in ext(a^8)") {
        const IntExt ie = intension_extension(graph, sys.entity_index("aaaaaaaa"));
        CHECK(ie.extension[sys.entity_index("aaaa")]);
        CHECK(ie.extension[sys.entity_index("aaaaaaaa")]);  // reflexive
    }
    SECTION("identity is isolated") {
        const IntExt ie = intension_extension(graph, sys.identity);
        for (EntityIndex y = 0; y < sys.entities.size(); ++y) {
            CHECK(ie.intension[y] == (y == sys.identity));
            CHECK(ie.extension[y] == (y == sys.identity));
        }
    }
    SECTION("isolated entities carry only themselves") {
        const CombinationalSystem toy = make_toy2();
        SimplicityEngine toy_eng(toy);
        const SubpatternGraph toy_graph = build_subpattern_graph(toy, toy_eng);
        const IntExt ie = intension_extension(toy_graph, toy.entity_index("b"));
        std::size_t in_count = 0, ext_count = 0;
        for (EntityIndex y = 0; y < toy.entities.size(); ++y) {
            in_count += ie.intension[y];
            ext_count += ie.extension[y];
        }
        CHECK(in_count == 1);
        CHECK(ext_count == 1);
    }
}

TEST_CASE("tanimoto metric tables") {
    const CombinationalSystem sys = make_str1();
    SimplicityEngine eng(sys);
    const SubpatternGraph graph = build_subpattern_graph(sys, eng);
    SECTION("alpha endpoints") {
        const TanimotoMetrics at_one = tanimoto_metrics(graph, Rational(1));
        const TanimotoMetrics at_zero = tanimoto_metrics(graph, Rational(0));
        CHECK(at_one.composite.d == at_one.intensional.d);
        CHECK(at_zero.composite.d == at_zero.extensional.d);
    }
    SECTION("pseudometric properties, exhaustively") {
        const TanimotoMetrics tm = tanimoto_metrics(graph, Rational(1, 2));
        check_pseudometric(tm.intensional);
        check_pseudometric(tm.extensional);
        check_pseudometric(tm.composite);
        for (std::size_t i = 0; i < tm.composite.size(); ++i)
            for (std::size_t j = 0; j < tm.composite.size(); ++j)
                CHECK(tm.composite.d[i][j] <= 1);
    }
    SECTION("composite is monotone in alpha pointwise") {
        const TanimotoMetrics lo = tanimoto_metrics(graph, Rational(1, 4));
        const TanimotoMetrics hi = tanimoto_metrics(graph, Rational(3, 4));
        for (std::size_t i = 0; i < lo.composite.size(); ++i) {
            for (std::size_t j = 0; j < lo.composite.size(); ++j) {
                const Rational di = lo.intensional.d[i][j], de = lo.extensional.d[i][j];
                if (di >= de)
                    CHECK(lo.composite.d[i][j] <= hi.composite.d[i][j]);
                else
                    CHECK(lo.composite.d[i][j] >= hi.composite.d[i][j]);
            }
        }
    }
    SECTION("alpha outside [0,1] rejected") {
        CHECK_THROWS_AS(tanimoto_metrics(graph, Rational(3, 2)), Error);
    }
}

TEST_CASE("q distributions over pattern extensions") {
    const CombinationalSystem sys = make_str1();
    SimplicityEngine eng(sys);
    const SubpatternGraph graph = build_subpattern_graph(sys, eng);
    SECTION("masses normalize to one") {
        const QDistribution q = q_distribution(graph, sys.entity_index("aaaaaaaa"));
        Rational total(0);
        for (const auto& [y, v] : q.mass) total += v;
        CHECK(total == 1);
        CHECK(!q.degenerate);
    }
    SECTION("reflexive-only extension degenerates to uniform") {
        const QDistribution q = q_distribution(graph, sys.identity);
        REQUIRE(q.mass.size() == 1);
        CHECK(q.degenerate);
        CHECK(q.mass[0].second == 1);
    }
    SECTION("two equal witnesses split evenly") {
        // Symmetric system: two subpatterns with identical intensities.
        SystemBuilder b;
        b.entity("e");
        const EntityIndex a = b.entity("a", true);
        const EntityIndex c = b.entity("c", true);
        const EntityIndex p = b.entity("p");
        const std::size_t f = b.op("f");
        const std::size_t g = b.op("g");
        b.reaction(f, a, c, {p});
        b.reaction(f, c, a, {p});
        const std::size_t m1 = b.measure("m1", {f});
        const std::size_t m2 = b.measure("m2", {f, g});
        for (std::size_t j : {m1, m2}) {
            b.atom_cost(j, a, Cost(Rational(1)));
            b.atom_cost(j, c, Cost(Rational(1)));
            b.op_cost(j, f, Cost(Rational(1)));
        }
        b.op_cost(m2, g, Cost(Rational(1)));
        CombinationalSystem sym = b.build();
        sym.measures[1].reaction_cost_overrides[0] = Cost(Rational(1, 2));
        sym.measures[1].reaction_cost_overrides[1] = Cost(Rational(1, 2));
        sym.index();
        SimplicityEngine sym_eng(sym);
        const SubpatternGraph sg = build_subpattern_graph(sym, sym_eng);
        const QDistribution q = q_distribution(sg, p);
        REQUIRE(q.mass.size() == 3);  // a, c, p itself
        Rational qa(0), qc(0);
        for (const auto& [y, v] : q.mass) {
            if (y == a) qa = v;
            if (y == c) qc = v;
        }
        CHECK(qa == Rational(1, 2));
        CHECK(qc == Rational(1, 2));
    }
}

TEST_CASE("transport distance") {
    MetricTable ground = zero_table(3, "fixture");
    ground.d[0][1] = ground.d[1][0] = Rational(2, 3);
    ground.d[0][2] = ground.d[2][0] = Rational(1);
    ground.d[1][2] = ground.d[2][1] = Rational(1);
    auto dist = [](std::initializer_list<std::pair<EntityIndex, const char*>> masses) {
        QDistribution q;
        for (const auto& [e, v] : masses) q.mass.push_back({e, *parse_rational(v)});
        return q;
    };
    SECTION("identical distributions") {
        const QDistribution p = dist({{0, "1/2"}, {1, "1/2"}});
        CHECK(hutchinson_distance(p, p, ground) == 0);
    }
    SECTION("point masses pay the ground distance") {
        CHECK(hutchinson_distance(dist({{0, "1"}}), dist({{1, "1"}}), ground) == Rational(2, 3));
    }
    SECTION("worked half-mass move") {
        const Rational d =
            hutchinson_distance(dist({{0, "1/2"}, {1, "1/2"}}), dist({{0, "1"}}), ground);
        CHECK(d == Rational(1, 3));
    }
    SECTION("missing ground coverage rejected") {
        CHECK_THROWS_AS(hutchinson_distance(dist({{5, "1"}}), dist({{0, "1"}}), ground), Error);
    }
}

TEST_CASE("transport simplex agrees with coupling enumeration on small supports") {
    std::mt19937_64 rng(271);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t m = 1 + rng() % 4, n = 1 + rng() % 4;
        // Random balanced rational supplies/demands with denominator 12.
        std::vector<Rational> supply(m), demand(n);
        std::vector<unsigned> su(m, 1), de(n, 1);
        for (std::size_t i = 0; i < m; ++i) su[i] = 1 + rng() % 6;
        for (std::size_t j = 0; j < n; ++j) de[j] = 1 + rng() % 6;
        unsigned ts = 0, td = 0;
        for (unsigned x : su) ts += x;
        for (unsigned x : de) td += x;
        for (std::size_t i = 0; i < m; ++i) supply[i] = Rational(su[i], ts);
        for (std::size_t j = 0; j < n; ++j) demand[j] = Rational(de[j], td);
        std::vector<std::vector<Rational>> cost(m, std::vector<Rational>(n));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) cost[i][j] = Rational(rng() % 8, 1 + rng() % 4);
        const Rational via_simplex = detail::transport_simplex(supply, demand, cost);
        const Rational via_enumeration = oracle::transport(supply, demand, cost);
        REQUIRE(via_simplex == via_enumeration);
    }
}

TEST_CASE("hutchinson table is a pseudometric on fixtures") {
    for (const CombinationalSystem& sys : {make_toy2(), make_str1()}) {
        SimplicityEngine eng(sys);
        const SubpatternGraph graph = build_subpattern_graph(sys, eng);
        const TanimotoMetrics tm = tanimoto_metrics(graph, Rational(1, 2));
        const MetricTable transport = hutchinson_metrics(graph, tm.composite);
        check_pseudometric(transport);
    }
}

TEST_CASE("locality: removing an unrelated entity leaves distances unchanged") {
    const CombinationalSystem with = make_toy2();
    SimplicityEngine weng(with);
    const TanimotoMetrics wm = tanimoto_metrics(build_subpattern_graph(with, weng), Rational(1, 2));

    // Rebuild toy2 without the isolated atoms b/ab (absent from every
    // intension/extension of the a-side entities).
    SystemBuilder b;
    b.entity("e");
    const EntityIndex a = b.entity("a", true);
    const EntityIndex aa = b.entity("aa");
    const EntityIndex aaa = b.entity("aaa");
    const EntityIndex aaaa = b.entity("aaaa");
    const std::size_t cat = b.op("cat");
    const std::size_t sq = b.op("sq");
    b.reaction(cat, a, a, {aa});
    b.reaction(cat, a, aa, {aaa});
    b.reaction(cat, aa, a, {aaa});
    b.reaction(cat, a, aaa, {aaaa});
    b.reaction(cat, aaa, a, {aaaa});
    b.reaction(cat, aa, aa, {aaaa});
    b.reaction(sq, aa, aa, {aaaa});
    const std::size_t m1 = b.measure("m1", {cat, sq});
    const std::size_t m2 = b.measure("m2", {cat, sq});
    for (std::size_t j : {m1, m2}) b.atom_cost(j, a, Cost(Rational(1)));
    b.op_cost(m1, cat, Cost(Rational(1)));
    b.op_cost(m1, sq, Cost(Rational(3)));
    b.op_cost(m2, cat, Cost(Rational(2)));
    b.op_cost(m2, sq, Cost(Rational(1)));
    const CombinationalSystem without = b.build();
    SimplicityEngine oeng(without);
    const TanimotoMetrics om =
        tanimoto_metrics(build_subpattern_graph(without, oeng), Rational(1, 2));

    for (const char* x : {"a", "aa", "aaa", "aaaa"}) {
        for (const char* y : {"a", "aa", "aaa", "aaaa"}) {
            CHECK(wm.composite.d[with.entity_index(x)][with.entity_index(y)] ==
                  om.composite.d[without.entity_index(x)][without.entity_index(y)]);
        }
    }
}

TEST_CASE("correlation statistics are rational and bounded") {
    const CombinationalSystem sys = make_str1();
    SimplicityEngine eng(sys);
    const SubpatternGraph graph = build_subpattern_graph(sys, eng);
    const TanimotoMetrics tm = tanimoto_metrics(graph, Rational(1, 2));
    const MetricTable transport = hutchinson_metrics(graph, tm.composite);
    const CorrelationStats stats = correlation_stats(tm.composite, transport);
    REQUIRE(stats.kendall_tau.has_value());
    CHECK(*stats.kendall_tau >= -1);
    CHECK(*stats.kendall_tau <= 1);
    if (stats.pearson_r2) {
        CHECK(*stats.pearson_r2 >= 0);
        CHECK(*stats.pearson_r2 <= 1);
    }
}
