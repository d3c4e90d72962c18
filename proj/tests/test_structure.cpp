#include "cosm/structure.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace cosm;

TEST_CASE("str1 subpattern graph") {
    const CombinationalSystem sys = make_str1();
    SimplicityEngine eng(sys);
    const SubpatternGraph graph = build_subpattern_graph(sys, eng);
    const EntityIndex a4 = sys.entity_index("aaaa");
    const EntityIndex a8 = sys.entity_index("aaaaaaaa");

    SECTION("worked edge a^4 <= a^8 via squaring") {
        REQUIRE(graph.has_edge(a4, a8));
        const PairQ& cell = graph.q[a4][a8];
        CHECK(to_string(cell.best.value) == "1/30");  // (15 - 29/2) / 15
        const Reaction& rx = sys.reactions[cell.reaction];
        CHECK(sys.operators[rx.op].id == "sq");
        CHECK(rx.right == a4);  // witness z = a^4
    }
    SECTION("no self edges; reflexive closure instead") {
        for (EntityIndex x = 0; x < sys.entities.size(); ++x) {
            CHECK(!graph.has_edge(x, x));
            CHECK(graph.leq(x, x));
        }
    }
    SECTION("an exact partial order at this cost structure") {
        const OrderDiagnostics diag = order_diagnostics(graph);
        CHECK(diag.antisymmetry_violations.empty());
        CHECK(diag.transitivity_defect == 0);
        CHECK(diag.unwitnessed_chains == 0);
        CHECK(!diag.chains.empty());
    }
    SECTION("construction is deterministic and schedule-independent") {
        const SubpatternGraph again = build_subpattern_graph(sys, eng);
        const SubpatternGraph threaded =
            build_subpattern_graph(sys, eng, kNoEntity, PositionPolicy::LeftOnly, 0, 1, 4);
        for (EntityIndex x = 0; x < sys.entities.size(); ++x) {
            REQUIRE(graph.successors[x] == again.successors[x]);
            REQUIRE(graph.successors[x] == threaded.successors[x]);
            for (EntityIndex y = 0; y < sys.entities.size(); ++y) {
                REQUIRE(graph.q[x][y].state == threaded.q[x][y].state);
                if (graph.q[x][y].state == PairQ::State::Value)
                    REQUIRE(intensity_eq(graph.q[x][y].best, threaded.q[x][y].best));
            }
        }
    }
}

TEST_CASE("position policy widens the witness scan") {
    // x only ever appears as a right operand: LeftOnly finds nothing.
    SystemBuilder b;
    b.entity("e");
    const EntityIndex a = b.entity("a", true);
    const EntityIndex bb = b.entity("b", true);
    const EntityIndex p = b.entity("p");
    const std::size_t f = b.op("f");
    const std::size_t g = b.op("g");
    b.reaction(f, a, bb, {p});
    const std::size_t m1 = b.measure("m1", {f});
    const std::size_t m2 = b.measure("m2", {f, g});
    for (std::size_t j : {m1, m2}) {
        b.atom_cost(j, a, Cost(Rational(1)));
        b.atom_cost(j, bb, Cost(Rational(1)));
        b.op_cost(j, f, Cost(Rational(1)));
    }
    b.op_cost(m2, g, Cost(Rational(1)));
    // Cheaper in the extended measure so the intensity is positive.
    const CombinationalSystem sys = [&] {
        auto s = b.build();
        s.measures[1].reaction_cost_overrides[0] = Cost(Rational(1, 2));
        s.index();
        return s;
    }();
    SimplicityEngine eng(sys);
    const SubpatternGraph left = build_subpattern_graph(sys, eng);
    const SubpatternGraph both =
        build_subpattern_graph(sys, eng, kNoEntity, PositionPolicy::Both);
    CHECK(left.has_edge(a, p));
    CHECK(!left.has_edge(bb, p));
    CHECK(both.has_edge(bb, p));
}

TEST_CASE("string-concat: flat costs are exactly cost-associative") {
    StringConcatParams p;
    const CombinationalSystem sys = generate_string_concat(p);
    SimplicityEngine eng(sys);
    const AssociativityReport rep = cost_associativity(sys);
    CHECK(rep.is_associative);
    CHECK(rep.defect == 0);
    CHECK(rep.defect_base == 0);
    CHECK(rep.defect_extended == 0);
    CHECK(rep.triples_checked > 0);
    const OrderDiagnostics diag = order_diagnostics(build_subpattern_graph(sys, eng));
    CHECK(diag.antisymmetry_violations.empty());
    CHECK(diag.transitivity_defect == 0);
}

TEST_CASE("perturbed-concat: defect bounded, transitivity within the proof bound") {
    StringConcatParams p;
    p.amplitude = Rational(1, 4);
    p.seed = 42;
    const CombinationalSystem sys = generate_string_concat(p);
    SimplicityEngine eng(sys);
    const AssociativityReport rep = cost_associativity(sys);
    CHECK(rep.is_associative);
    CHECK(rep.defect_base == 0);                 // measure 1 stays flat
    CHECK(rep.defect <= Rational(1, 2));         // each C within amplitude of 2*flat
    CHECK(rep.defect > 0);
    const SubpatternGraph graph = build_subpattern_graph(sys, eng);
    const OrderDiagnostics diag = order_diagnostics(graph);
    CHECK(diag.antisymmetry_violations.empty());
    CHECK(diag.unwitnessed_chains == 0);
    CHECK(!diag.chains.empty());                 // the bound check is not vacuous
    CHECK(diag.transitivity_defect <= 2 * rep.defect);
}

TEST_CASE("non-associative tables are rejected with a counterexample") {
    const CombinationalSystem sys = make_gamma_fixture();
    try {
        cost_associativity(sys);
        FAIL("expected associativity-violation");
    } catch (const Error& e) {
        CHECK(e.code == "associativity-violation");
        CHECK(e.message.find("(") != std::string::npos);  // names the failing triple
    }
}

TEST_CASE("gamma machinery: law, premise, conclusion") {
    SECTION("zero-cost gamma gives exact transitivity") {
        const CombinationalSystem sys = make_gamma_fixture();
        SimplicityEngine eng(sys);
        const GammaReport rep = gamma_check(sys, eng);
        CHECK(rep.machinery_present);
        CHECK(rep.triples_checked > 0);
        CHECK(rep.law_failures == 0);
        CHECK(rep.premise_failures == 0);
        CHECK(rep.bound.is_zero());  // sigma(G)=0, zero-cost alpha/beta
        CHECK(rep.conclusion_holds);
        // c = 0 boundary: every witnessed chain intensity is >= 0 exactly.
        const SubpatternGraph graph = build_subpattern_graph(sys, eng);
        for (EntityIndex x = 0; x < sys.entities.size(); ++x)
            for (EntityIndex y : graph.successors[x])
                for (EntityIndex z : graph.successors[y]) {
                    if (z == x) continue;
                    REQUIRE(graph.q[x][z].state == PairQ::State::Value);
                    REQUIRE(graph.q[x][z].best.is_value());
                    REQUIRE(graph.q[x][z].best.value >= 0);
                }
    }
    SECTION("priced gamma still satisfies the stated bound") {
        GammaParams params;
        params.gamma_cost = Cost(Rational(1, 2));
        params.gamma_op_cost = Cost(Rational(1, 4));
        const CombinationalSystem sys = generate_gamma_system(params);
        SimplicityEngine eng(sys);
        const GammaReport rep = gamma_check(sys, eng);
        CHECK(rep.law_failures == 0);
        CHECK(rep.bound.str() == "1");  // 1/2 + 1/4 + 1/4
        CHECK(rep.conclusion_holds);
    }
    SECTION("bigger universe: law still holds on every applicable triple") {
        GammaParams params;
        params.max_leaves = 5;
        const CombinationalSystem sys = generate_gamma_system(params);
        SimplicityEngine eng(sys);
        const GammaReport rep = gamma_check(sys, eng);
        CHECK(rep.triples_checked > 20);
        CHECK(rep.law_failures == 0);
        CHECK(rep.conclusion_holds);
    }
    SECTION("missing machinery is an error") {
        const CombinationalSystem sys = make_toy1();
        SimplicityEngine eng(sys);
        CHECK_THROWS_AS(gamma_check(sys, eng), Error);
    }
}

namespace {

// Two-output reaction feeding a second step, with a conclusion route whose
// extended-measure price decides transitivity.
CombinationalSystem composition_system(const Rational& conclusion_price) {
    SystemBuilder b;
    b.entity("e");
    const EntityIndex u = b.entity("u", true);
    const EntityIndex v = b.entity("v", true);
    const EntityIndex p1 = b.entity("p1");
    const EntityIndex p2 = b.entity("p2");
    const EntityIndex z = b.entity("z");
    const std::size_t f = b.op("f");
    const std::size_t g = b.op("g");
    b.reaction(f, u, v, {p1, p2});
    b.reaction(f, p1, p2, {z});
    std::size_t gz = b.reaction(g, u, v, {z});
    const std::size_t m1 = b.measure("m1", {f, g});
    const std::size_t m2 = b.measure("m2", {f, g});
    for (std::size_t j : {m1, m2}) {
        b.atom_cost(j, u, Cost(Rational(5)));
        b.atom_cost(j, v, Cost(Rational(5)));
    }
    b.op_cost(m1, f, Cost(Rational(10)));
    b.op_cost(m1, g, Cost(Rational(50)));
    b.op_cost(m2, f, Cost(Rational(1)));
    b.op_cost(m2, g, Cost(Rational(1)));
    b.reaction_override(m2, gz, Cost(conclusion_price));
    return b.build();
}

}  // namespace

TEST_CASE("pattern transitivity through product sets") {
    SECTION("vacuous systems produce an empty report") {
        const CombinationalSystem sys = generate_string_concat({});
        SimplicityEngine eng(sys);
        const CompositionReport rep = transitivity_composition_check(sys, eng);
        CHECK(rep.premises_found == 0);
        CHECK(rep.counterexamples.empty());
    }
    SECTION("constructed chain is confirmed") {
        const CombinationalSystem sys = composition_system(Rational(1));
        SimplicityEngine eng(sys);
        MultisetOptions opt;
        const CompositionReport rep = transitivity_composition_check(sys, eng, 0, 1, opt);
        CHECK(rep.premises_found >= 1);
        CHECK(rep.confirmed >= 1);
        CHECK(rep.counterexamples.empty());
    }
    SECTION("cost anomaly produces a counterexample trace") {
        // The only route from (u,v) to z is priced at 45 in the extended
        // measure: dearer than the base optimum, so the conclusion fails.
        const CombinationalSystem sys = composition_system(Rational(45));
        SimplicityEngine eng(sys);
        const CompositionReport rep = transitivity_composition_check(sys, eng);
        CHECK(rep.premises_found >= 1);
        REQUIRE(!rep.counterexamples.empty());
        const CompositionInstance& inst = rep.counterexamples.front();
        CHECK(sys.entities[inst.z] == "z");
        CHECK(inst.set_intensity > 0);
        CHECK(inst.step_intensity > 0);
        CHECK(!inst.conclusion_holds);
    }
}

TEST_CASE("dot export draws the reduction with intensity labels") {
    const CombinationalSystem sys = make_str1();
    SimplicityEngine eng(sys);
    const SubpatternGraph graph = build_subpattern_graph(sys, eng);
    const std::string dot = to_dot(sys, graph);
    CHECK(dot.find("digraph subpattern") != std::string::npos);
    CHECK(dot.find("label=\"") != std::string::npos);
    // A reduced edge: a->aa->aaaa implies a->aaaa is not drawn when redundant.
    CHECK(dot.find("\"a\" -> \"aa\"") != std::string::npos);
}

TEST_CASE("antisymmetry holds exhaustively on the fixtures") {
    for (const CombinationalSystem& sys :
         {make_toy2(), make_str1(), make_gamma_fixture()}) {
        SimplicityEngine eng(sys);
        const SubpatternGraph graph = build_subpattern_graph(sys, eng);
        for (EntityIndex x = 0; x < sys.entities.size(); ++x)
            for (EntityIndex y = 0; y < sys.entities.size(); ++y)
                if (x != y && graph.has_edge(x, y)) REQUIRE(!graph.has_edge(y, x));
    }
}
