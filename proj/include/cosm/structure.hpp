#pragma once

#include "cosm/multiset.hpp"
#include "cosm/pattern.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

namespace cosm {

enum class PositionPolicy { LeftOnly, Both };

// Best witnessed intensity for an ordered pair (x, y): max over witnesses z
// (and operators) of I_{x,z}(y|w).
struct PairQ {
    enum class State { NoWitness, Undefined, Value } state = State::NoWitness;
    Intensity best;                                           // Value or NegInfinite
    std::size_t reaction = CombinationalSystem::kNoReaction;  // argmax witness
};

// x <= y iff Q(x,y) > 0, taken as the reflexive closure of that strict
// relation. The full Q matrix is kept for transitivity diagnostics.
struct SubpatternGraph {
    EntityIndex context = kNoEntity;
    PositionPolicy policy = PositionPolicy::LeftOnly;
    std::vector<std::vector<PairQ>> q;  // [from][to]
    std::vector<std::vector<EntityIndex>> successors;  // positive-intensity edges, sorted

    bool has_edge(EntityIndex x, EntityIndex y) const {
        return x != y && q[x][y].state == PairQ::State::Value && q[x][y].best.positive();
    }
    bool leq(EntityIndex x, EntityIndex y) const { return x == y || has_edge(x, y); }
};

// Builds the subpattern relation for the measure pair (base, extended) in
// context w. positionPolicy LeftOnly scans x as left operand only (the
// literal max_z I_{x,z} form); Both also admits x on the right. Targets are
// processed independently, so the per-target work parallelizes; results are
// schedule-independent.
inline SubpatternGraph build_subpattern_graph(const CombinationalSystem& sys,
                                              const SimplicityEngine& engine,
                                              EntityIndex context = kNoEntity,
                                              PositionPolicy policy = PositionPolicy::LeftOnly,
                                              std::size_t base_measure = 0,
                                              std::size_t extended_measure = 1,
                                              std::size_t threads = 1) {
    if (base_measure >= sys.measures.size() || extended_measure >= sys.measures.size())
        throw Error("unknown-measure", "subpattern graphs need the configured measure pair");
    const std::size_t n = sys.entities.size();
    SubpatternGraph graph;
    graph.context = context;
    graph.policy = policy;
    graph.q.assign(n, std::vector<PairQ>(n));
    graph.successors.assign(n, {});

    const CostTable& base = engine.relative_table(base_measure, context);
    auto fill_target = [&](EntityIndex y) {
        const Cost sy = base.value[y];
        const bool undefined = !sy.is_finite() || sy.is_zero();
        for (std::size_t r : sys.reactions_producing(y)) {
            const Reaction& rx = sys.reactions[r];
            for (int side = 0; side < (policy == PositionPolicy::Both ? 2 : 1); ++side) {
                const EntityIndex x = side == 0 ? rx.left : rx.right;
                const EntityIndex z = side == 0 ? rx.right : rx.left;
                PairQ& cell = graph.q[x][y];
                if (undefined) {
                    cell.state = PairQ::State::Undefined;
                    continue;
                }
                const Cost h = detail::h_cost(sys, engine, base_measure, extended_measure,
                                              x, z, r, context);
                Intensity cand = detail::intensity_from(sy, h, sy);
                if (cand.is_undefined()) continue;
                if (cell.state != PairQ::State::Value ||
                    (intensity_ge(cand, cell.best) && !intensity_eq(cand, cell.best))) {
                    cell.state = PairQ::State::Value;
                    cell.best = cand;
                    cell.reaction = r;
                }
            }
        }
    };
    if (threads <= 1 || n < 2) {
        for (EntityIndex y = 0; y < n; ++y) fill_target(y);
    } else {
        std::vector<std::thread> pool;
        const std::size_t count = std::min(threads, n);
        for (std::size_t t = 0; t < count; ++t) {
            pool.emplace_back([&, t] {
                for (EntityIndex y = t; y < n; y += count) fill_target(y);
            });
        }
        for (auto& th : pool) th.join();
    }
    for (EntityIndex x = 0; x < n; ++x)
        for (EntityIndex y = 0; y < n; ++y)
            if (graph.has_edge(x, y)) graph.successors[x].push_back(y);
    return graph;
}

struct ChainDefect {
    EntityIndex x, y, z;
    bool witnessed = false;   // some decomposition (x, *) of z exists with defined intensity
    Rational defect;          // max(0, -Q(x,z)) when witnessed
};

struct OrderDiagnostics {
    std::vector<std::pair<EntityIndex, EntityIndex>> antisymmetry_violations;
    std::vector<ChainDefect> chains;
    Rational transitivity_defect = Rational(0);  // c_obs over witnessed chains
    std::size_t unwitnessed_chains = 0;          // chains with no candidate witness at all
    std::string reflexive_note =
        "x <= x holds by reflexive closure; witnessed self-intensity is identically 0";
};

inline OrderDiagnostics order_diagnostics(const SubpatternGraph& graph) {
    OrderDiagnostics diag;
    const std::size_t n = graph.q.size();
    for (EntityIndex x = 0; x < n; ++x)
        for (EntityIndex y = x + 1; y < n; ++y)
            if (graph.has_edge(x, y) && graph.has_edge(y, x))
                diag.antisymmetry_violations.push_back({x, y});
    for (EntityIndex x = 0; x < n; ++x) {
        for (EntityIndex y : graph.successors[x]) {
            for (EntityIndex z : graph.successors[y]) {
                if (z == x) continue;
                ChainDefect chain{x, y, z, false, Rational(0)};
                const PairQ& cell = graph.q[x][z];
                if (cell.state == PairQ::State::Value && cell.best.is_value()) {
                    chain.witnessed = true;
                    chain.defect = rational_max(Rational(0), Rational(-cell.best.value));
                    diag.transitivity_defect = rational_max(diag.transitivity_defect, chain.defect);
                } else {
                    ++diag.unwitnessed_chains;
                }
                diag.chains.push_back(std::move(chain));
            }
        }
    }
    return diag;
}

struct TripleDefect {
    EntityIndex x, y, z;
    Rational c1, c2;
};

struct AssociativityReport {
    bool is_associative = false;
    std::size_t triples_checked = 0;
    // Max |C1 - C2| per measure of the pair, then the headline max of the two.
    Rational defect_base = Rational(0);
    Rational defect_extended = Rational(0);
    Rational defect = Rational(0);
    std::vector<TripleDefect> nonzero_triples;  // extended-measure defects > 0
};

namespace detail {

// First product of (op, a, b), or kNoEntity when undefined. Implicit identity
// reactions apply.
inline EntityIndex first_product(const CombinationalSystem& sys, std::size_t op, EntityIndex a,
                                 EntityIndex b) {
    if (a == sys.identity) return b;
    if (b == sys.identity) return a;
    const std::size_t r = sys.find_reaction(op, a, b);
    if (r == CombinationalSystem::kNoReaction) return kNoEntity;
    return sys.reactions[r].products[0];
}

}  // namespace detail

// Exact cost-associativity defect over all composable triples for the measure
// pair. Requires the scoped operator family to be mutually associative on the
// reaction table; otherwise throws listing the first failing triple.
inline AssociativityReport cost_associativity(const CombinationalSystem& sys,
                                              std::size_t base_measure = 0,
                                              std::size_t extended_measure = 1) {
    const std::size_t n = sys.entities.size();
    std::vector<std::size_t> scope;
    for (std::size_t op = 0; op < sys.operators.size(); ++op)
        if (sys.measures[base_measure].operator_set[op] ||
            sys.measures[extended_measure].operator_set[op])
            scope.push_back(op);

    for (std::size_t i : scope) {
        for (std::size_t j : scope) {
            for (EntityIndex x = 0; x < n; ++x) {
                if (x == sys.identity) continue;
                for (EntityIndex y = 0; y < n; ++y) {
                    if (y == sys.identity) continue;
                    for (EntityIndex z = 0; z < n; ++z) {
                        if (z == sys.identity) continue;
                        const EntityIndex xy = detail::first_product(sys, i, x, y);
                        const EntityIndex left =
                            xy == kNoEntity ? kNoEntity : detail::first_product(sys, j, xy, z);
                        const EntityIndex yz = detail::first_product(sys, j, y, z);
                        const EntityIndex right =
                            yz == kNoEntity ? kNoEntity : detail::first_product(sys, i, x, yz);
                        if (left != right)
                            throw Error("associativity-violation",
                                        "reaction table is not associative at (" + sys.entities[x] +
                                            "," + sys.entities[y] + "," + sys.entities[z] +
                                            ") via (" + sys.operators[i].id + "," +
                                            sys.operators[j].id + ")");
                    }
                }
            }
        }
    }

    AssociativityReport report;
    report.is_associative = true;
    auto measure_defect = [&](std::size_t m, bool record) {
        Rational worst(0);
        for (EntityIndex x = 0; x < n; ++x) {
            if (x == sys.identity) continue;
            for (EntityIndex y = 0; y < n; ++y) {
                if (y == sys.identity) continue;
                for (EntityIndex z = 0; z < n; ++z) {
                    if (z == sys.identity) continue;
                    // C1: combine (y,z) first; C2: combine (x,y) first.
                    Cost c1 = Cost::infinity(), c2 = Cost::infinity();
                    for (std::size_t i : scope) {
                        const std::size_t ryz = sys.find_reaction(i, y, z);
                        if (ryz == CombinationalSystem::kNoReaction) continue;
                        const EntityIndex yz = sys.reactions[ryz].products[0];
                        for (std::size_t jo : scope) {
                            const std::size_t router = sys.find_reaction(jo, x, yz);
                            if (router == CombinationalSystem::kNoReaction) continue;
                            c1 = min(c1, sys.op_cost(m, ryz) + sys.op_cost(m, router));
                        }
                    }
                    for (std::size_t jo : scope) {
                        const std::size_t rxy = sys.find_reaction(jo, x, y);
                        if (rxy == CombinationalSystem::kNoReaction) continue;
                        const EntityIndex xy = sys.reactions[rxy].products[0];
                        for (std::size_t i : scope) {
                            const std::size_t router = sys.find_reaction(i, xy, z);
                            if (router == CombinationalSystem::kNoReaction) continue;
                            c2 = min(c2, sys.op_cost(m, rxy) + sys.op_cost(m, router));
                        }
                    }
                    if (!c1.is_finite() || !c2.is_finite()) continue;
                    if (m == base_measure) ++report.triples_checked;
                    const Rational diff = rational_abs(c1.value() - c2.value());
                    worst = rational_max(worst, diff);
                    if (record && diff != 0)
                        report.nonzero_triples.push_back({x, y, z, c1.value(), c2.value()});
                }
            }
        }
        return worst;
    };
    report.defect_base = measure_defect(base_measure, false);
    report.defect_extended = measure_defect(extended_measure, true);
    report.defect = rational_max(report.defect_base, report.defect_extended);
    return report;
}

struct GammaTriple {
    EntityIndex x, w, v;
    bool law_holds = false;
    bool premise_holds = false;
};

struct GammaReport {
    bool machinery_present = false;
    Cost bound = Cost::zero();            // c = sigma_1(Gamma) + alpha + beta default costs
    std::size_t triples_checked = 0;
    std::size_t law_failures = 0;
    std::size_t premise_failures = 0;
    std::vector<GammaTriple> failures;
    // Conclusion over the built subpattern graph: every chain x<=y<=z has a
    // witnessed intensity >= -c.
    bool conclusion_holds = true;
    std::size_t chains_checked = 0;
};

// Verifies the rebracketing law ap(x, beta(alpha(G,w), v)) = ap(ap(x,w), v)
// through the reaction table, evaluates the theorem premise per triple, and
// confirms the approximate-transitivity conclusion on the subpattern graph.
inline GammaReport gamma_check(const CombinationalSystem& sys, const SimplicityEngine& engine,
                               std::size_t base_measure = 0, std::size_t extended_measure = 1) {
    GammaReport report;
    std::size_t ap = static_cast<std::size_t>(-1), alpha = ap, beta = ap;
    for (std::size_t op = 0; op < sys.operators.size(); ++op) {
        switch (sys.operators[op].tag) {
            case OperatorTag::GammaApply: ap = op; break;
            case OperatorTag::GammaAlpha: alpha = op; break;
            case OperatorTag::GammaBeta: beta = op; break;
            default: break;
        }
    }
    if (sys.gamma_entity == kNoEntity || ap == static_cast<std::size_t>(-1) ||
        alpha == static_cast<std::size_t>(-1) || beta == static_cast<std::size_t>(-1))
        throw Error("gamma-missing", "system declares no gamma entity or alpha/beta operators");
    report.machinery_present = true;

    const Cost alpha_cost = sys.measures[base_measure].op_default_costs.count(alpha)
                                ? sys.measures[base_measure].op_default_costs.at(alpha)
                                : Cost::infinity();
    const Cost beta_cost = sys.measures[base_measure].op_default_costs.count(beta)
                               ? sys.measures[base_measure].op_default_costs.at(beta)
                               : Cost::infinity();
    report.bound = engine.simplicity(base_measure, sys.gamma_entity) + alpha_cost + beta_cost;

    const CostTable& base = engine.plain_table(base_measure);
    for (std::size_t ra = 0; ra < sys.reactions.size(); ++ra) {
        const Reaction& alpha_rx = sys.reactions[ra];
        if (alpha_rx.op != alpha || alpha_rx.left != sys.gamma_entity) continue;
        const EntityIndex w = alpha_rx.right;
        const EntityIndex lifted = alpha_rx.products[0];
        for (std::size_t rb : sys.reactions_using(lifted)) {
            const Reaction& beta_rx = sys.reactions[rb];
            if (beta_rx.op != beta || beta_rx.left != lifted) continue;
            const EntityIndex v = beta_rx.right;
            const EntityIndex hooked = beta_rx.products[0];
            for (std::size_t rx_index : sys.reactions_using(w)) {
                const Reaction& xw = sys.reactions[rx_index];
                if (xw.op != ap || xw.right != w) continue;
                const EntityIndex x = xw.left;
                const EntityIndex y = xw.products[0];
                const EntityIndex z = detail::first_product(sys, ap, y, v);
                if (z == kNoEntity) continue;  // rebracketed result out of range
                ++report.triples_checked;
                GammaTriple triple{x, w, v, false, false};
                triple.law_holds = detail::first_product(sys, ap, x, hooked) == z;
                // Premise with sigma(x) cancelled from both sides: the display
                // carries it on the left only, which no cost assignment can
                // satisfy; the surrounding chain arithmetic needs it on both.
                //   sigma(w#) + sigma_2*(ap, x, w#)
                //     <= sigma(w) + sigma(v) + sigma_2*(ap,x,w) + sigma_2*(ap,y,v) + c
                const std::size_t direct = sys.find_reaction(ap, x, hooked);
                Cost lhs = Cost::infinity();
                if (direct != CombinationalSystem::kNoReaction)
                    lhs = base.value[hooked] + sys.op_cost(extended_measure, direct);
                const std::size_t ryv = sys.find_reaction(ap, y, v);
                Cost rhs = base.value[w] + base.value[v] + sys.op_cost(extended_measure, rx_index) +
                           (ryv == CombinationalSystem::kNoReaction
                                ? Cost::infinity()
                                : sys.op_cost(extended_measure, ryv)) +
                           report.bound;
                triple.premise_holds = lhs <= rhs;
                if (!triple.law_holds) ++report.law_failures;
                if (!triple.premise_holds) ++report.premise_failures;
                if (!triple.law_holds || !triple.premise_holds) report.failures.push_back(triple);
            }
        }
    }

    const SubpatternGraph graph =
        build_subpattern_graph(sys, engine, kNoEntity, PositionPolicy::LeftOnly, base_measure,
                               extended_measure);
    for (EntityIndex x = 0; x < sys.entities.size(); ++x) {
        for (EntityIndex y : graph.successors[x]) {
            for (EntityIndex z : graph.successors[y]) {
                if (z == x) continue;
                ++report.chains_checked;
                const PairQ& cell = graph.q[x][z];
                bool ok = false;
                if (cell.state == PairQ::State::Value && cell.best.is_value() &&
                    report.bound.is_finite()) {
                    ok = cell.best.value >= -report.bound.value();
                }
                if (!ok) report.conclusion_holds = false;
            }
        }
    }
    return report;
}

struct CompositionInstance {
    std::size_t first_reaction;   // (op1, x, y) -> products P
    std::size_t second_reaction;  // (op2, a, b) -> z with {a,b} drawn from P
    EntityIndex z;
    Rational set_intensity;       // intensity of (x,y) in the product set
    Rational step_intensity;      // intensity of (a,b) in z
    bool conclusion_holds = false;
    std::size_t conclusion_reaction = CombinationalSystem::kNoReaction;
};

struct CompositionReport {
    std::size_t premises_found = 0;
    std::size_t confirmed = 0;
    // Product sets too large for the exact solver where the greedy upper
    // bound could not rule the premise out either way.
    std::size_t inconclusive = 0;
    std::vector<CompositionInstance> counterexamples;
};

// Empirical scan of pattern transitivity through product sets: when (x,y) is
// a pattern in the product set of a reaction and a pair drawn from that set
// is a pattern in z, is (x,y) a pattern in z? Reports confirmations and full
// counterexample traces; asserts nothing.
inline CompositionReport transitivity_composition_check(const CombinationalSystem& sys,
                                                        const SimplicityEngine& engine,
                                                        std::size_t base_measure = 0,
                                                        std::size_t extended_measure = 1,
                                                        MultisetOptions ms_options = {}) {
    CompositionReport report;
    for (std::size_t r1 = 0; r1 < sys.reactions.size(); ++r1) {
        const Reaction& rx1 = sys.reactions[r1];
        Multiset products;
        for (EntityIndex p : rx1.products) products.counts[p] += 1;
        const Cost h1 = detail::h_cost(sys, engine, base_measure, extended_measure, rx1.left,
                                       rx1.right, r1, kNoEntity);
        if (!h1.is_finite()) continue;
        Cost set_value = Cost::infinity();
        bool exact = true;
        try {
            set_value = multiset_simplicity(sys, base_measure, products, ms_options).value;
        } catch (const Error&) {
            // Oversize for the exact solver: the greedy upper bound can still
            // rule the premise out (the premise needs set cost > h).
            MultisetOptions greedy = ms_options;
            greedy.solver = MultisetSolver::Greedy;
            set_value = multiset_simplicity(sys, base_measure, products, greedy).value;
            exact = false;
        }
        if (!set_value.is_finite() || set_value.is_zero()) continue;
        if (!exact && h1 < set_value) {
            ++report.inconclusive;
            continue;
        }
        const Rational i1 = (set_value.value() - h1.value()) / set_value.value();
        if (!(i1 > 0)) continue;
        // Ordered pairs drawn from the product list (the pair itself for
        // single-output reactions).
        std::vector<std::pair<EntityIndex, EntityIndex>> pairs;
        if (rx1.products.size() == 1) {
            pairs.push_back({rx1.products[0], rx1.products[0]});
        } else {
            for (EntityIndex a : rx1.products)
                for (EntityIndex b : rx1.products)
                    if (a != b) pairs.push_back({a, b});
        }
        for (const auto& [a, b] : pairs) {
            for (std::size_t op2 = 0; op2 < sys.operators.size(); ++op2) {
                const std::size_t r2 = sys.find_reaction(op2, a, b);
                if (r2 == CombinationalSystem::kNoReaction) continue;
                for (EntityIndex z : sys.reactions[r2].products) {
                    const Cost sz = engine.simplicity(base_measure, z);
                    if (!sz.is_finite() || sz.is_zero()) continue;
                    const Cost h2 =
                        detail::h_cost(sys, engine, base_measure, extended_measure, a, b, r2, kNoEntity);
                    if (!h2.is_finite()) continue;
                    const Rational i2 = (sz.value() - h2.value()) / sz.value();
                    if (!(i2 > 0)) continue;
                    ++report.premises_found;
                    CompositionInstance inst{r1, r2, z, i1, i2, false,
                                             CombinationalSystem::kNoReaction};
                    for (std::size_t op3 = 0; op3 < sys.operators.size(); ++op3) {
                        const std::size_t r3 = sys.find_reaction(op3, rx1.left, rx1.right);
                        if (r3 == CombinationalSystem::kNoReaction) continue;
                        bool produces = false;
                        for (EntityIndex p : sys.reactions[r3].products) produces |= (p == z);
                        if (!produces) continue;
                        const Cost h3 = detail::h_cost(sys, engine, base_measure, extended_measure,
                                                       rx1.left, rx1.right, r3, kNoEntity);
                        if (h3.is_finite() && (sz.value() - h3.value()) / sz.value() > 0) {
                            inst.conclusion_holds = true;
                            inst.conclusion_reaction = r3;
                            break;
                        }
                    }
                    if (inst.conclusion_holds)
                        ++report.confirmed;
                    else
                        report.counterexamples.push_back(inst);
                }
            }
        }
    }
    return report;
}

// DOT rendering of the subpattern hierarchy; draws the transitive reduction
// with intensity labels when the edge relation is acyclic.
inline std::string to_dot(const CombinationalSystem& sys, const SubpatternGraph& graph) {
    const std::size_t n = sys.entities.size();
    // Reachability over edges for the reduction.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (EntityIndex x = 0; x < n; ++x) {
        std::vector<EntityIndex> stack{x};
        std::vector<bool> seen(n, false);
        while (!stack.empty()) {
            const EntityIndex u = stack.back();
            stack.pop_back();
            for (EntityIndex v : graph.successors[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    reach[x][v] = true;
                    stack.push_back(v);
                }
            }
        }
    }
    bool cyclic = false;
    for (EntityIndex x = 0; x < n; ++x) cyclic |= reach[x][x];

    std::ostringstream os;
    os << "digraph subpattern {\n  rankdir=BT;\n";
    for (EntityIndex x = 0; x < n; ++x) {
        bool touched = !graph.successors[x].empty();
        for (EntityIndex y = 0; y < n && !touched; ++y) touched = graph.has_edge(y, x);
        if (touched) os << "  \"" << sys.entities[x] << "\";\n";
    }
    for (EntityIndex x = 0; x < n; ++x) {
        for (EntityIndex y : graph.successors[x]) {
            if (!cyclic) {
                bool redundant = false;
                for (EntityIndex mid : graph.successors[x])
                    if (mid != y && reach[mid][y]) redundant = true;
                if (redundant) continue;
            }
            os << "  \"" << sys.entities[x] << "\" -> \"" << sys.entities[y] << "\" [label=\""
               << graph.q[x][y].best.str() << "\"];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace cosm
