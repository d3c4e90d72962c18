#pragma once

#include "cosm/expression.hpp"
#include "cosm/system.hpp"

#include <map>
#include <optional>
#include <queue>
#include <tuple>
#include <vector>

namespace cosm {

// Relative-simplicity semantics. FreeContext: cost of the cheapest derivation
// tree in which one leaf occurrence of the context entity is free (the
// starting copy) and context-discounted operator costs apply throughout.
// Literal: the three-way minimum exactly as displayed, where direct use of
// the context is charged its absolute simplicity.
enum class RelativeMode { FreeContext, Literal };

// A solved least-fixpoint table plus enough backpointers to rebuild one
// optimal derivation tree per entity.
struct CostTable {
    enum class From { Unreached, Atom, Identity, ContextCopy, Fallback, Reaction, Offer };
    struct Parent {
        From from = From::Unreached;
        std::size_t reaction = 0;
        std::size_t product = 0;
        int free_branch = -1;  // chain relaxation: which operand carries the free copy
    };
    std::vector<Cost> value;
    std::vector<Parent> parent;

    explicit CostTable(std::size_t n) : value(n, Cost::infinity()), parent(n) {}
};

namespace detail {

struct QueueItem {
    Cost cost;
    EntityIndex entity;
    bool operator>(const QueueItem& o) const {
        if (cost != o.cost) return o.cost < cost;
        return entity > o.entity;
    }
};
using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<QueueItem>>;

// Knuth-style priority-driven least fixpoint over the derivation hypergraph:
// X[p] = min(seed[p], min over measure-legal reactions of X[l]+X[r]+opcost).
// Correct for nonnegative costs; a reaction relaxes once both operands are
// settled.
inline CostTable hyper_fixpoint(const CombinationalSystem& sys, std::size_t measure,
                                EntityIndex discount_context, const CostTable& seed) {
    const std::size_t n = sys.entities.size();
    CostTable table(n);
    std::vector<bool> settled(n, false);
    MinQueue queue;
    for (EntityIndex x = 0; x < n; ++x) {
        if (seed.value[x].is_finite()) {
            table.value[x] = seed.value[x];
            table.parent[x] = seed.parent[x];
            queue.push({table.value[x], x});
        }
    }
    while (!queue.empty()) {
        const auto [cost, x] = queue.top();
        queue.pop();
        if (settled[x] || cost != table.value[x]) continue;
        settled[x] = true;
        for (std::size_t r : sys.reactions_using(x)) {
            const Reaction& rx = sys.reactions[r];
            if (!sys.op_in_measure(measure, rx.op)) continue;
            if (!settled[rx.left] || !settled[rx.right]) continue;
            const Cost oc = sys.op_cost(measure, r, discount_context);
            const Cost candidate = table.value[rx.left] + table.value[rx.right] + oc;
            if (candidate.is_infinite()) continue;
            for (std::size_t p = 0; p < rx.products.size(); ++p) {
                const EntityIndex out = rx.products[p];
                if (candidate < table.value[out]) {
                    table.value[out] = candidate;
                    table.parent[out] = {CostTable::From::Reaction, r, p, -1};
                    queue.push({candidate, out});
                }
            }
        }
    }
    return table;
}

inline CostTable base_seed(const CombinationalSystem& sys, std::size_t measure) {
    CostTable seed(sys.entities.size());
    seed.value[sys.identity] = Cost::zero();
    seed.parent[sys.identity] = {CostTable::From::Identity, 0, 0, -1};
    for (EntityIndex x = 0; x < sys.entities.size(); ++x) {
        if (sys.is_atom[x]) {
            seed.value[x] = sys.atom_cost(measure, x);
            seed.parent[x] = {CostTable::From::Atom, 0, 0, -1};
        }
    }
    return seed;
}

// Single-free-copy layer: G[x] = min(plain[x], cheapest derivation chain that
// threads the one free context copy up to x). Ordinary Dijkstra because the
// non-free operand of every chain step uses the precomputed plain table.
inline CostTable one_free_copy(const CombinationalSystem& sys, std::size_t measure,
                               EntityIndex context, const CostTable& plain) {
    const std::size_t n = sys.entities.size();
    CostTable table(n);
    MinQueue queue;
    for (EntityIndex x = 0; x < n; ++x) {
        if (plain.value[x].is_finite()) {
            table.value[x] = plain.value[x];
            table.parent[x] = {CostTable::From::Fallback, 0, 0, -1};
        }
    }
    if (Cost::zero() < table.value[context] || table.value[context].is_infinite()) {
        table.value[context] = Cost::zero();
        table.parent[context] = {CostTable::From::ContextCopy, 0, 0, -1};
    }
    for (EntityIndex x = 0; x < n; ++x) {
        if (table.value[x].is_finite()) queue.push({table.value[x], x});
    }
    std::vector<bool> settled(n, false);
    while (!queue.empty()) {
        const auto [cost, x] = queue.top();
        queue.pop();
        if (settled[x] || cost != table.value[x]) continue;
        settled[x] = true;
        for (std::size_t r : sys.reactions_using(x)) {
            const Reaction& rx = sys.reactions[r];
            if (!sys.op_in_measure(measure, rx.op)) continue;
            const Cost oc = sys.op_cost(measure, r, context);
            for (int side = 0; side < 2; ++side) {
                const EntityIndex chained = side == 0 ? rx.left : rx.right;
                const EntityIndex other = side == 0 ? rx.right : rx.left;
                if (chained != x) continue;
                if (!plain.value[other].is_finite()) continue;
                const Cost candidate = table.value[x] + plain.value[other] + oc;
                if (candidate.is_infinite()) continue;
                for (std::size_t p = 0; p < rx.products.size(); ++p) {
                    const EntityIndex out = rx.products[p];
                    if (candidate < table.value[out]) {
                        table.value[out] = candidate;
                        table.parent[out] = {CostTable::From::Reaction, r, p, side};
                        queue.push({candidate, out});
                    }
                }
            }
        }
    }
    return table;
}

}  // namespace detail

// Per-system lazy solver for all single-measure simplicity queries. Pure and
// immutable inputs; memoized tables are keyed by (measure, context, mode).
class SimplicityEngine {
public:
    explicit SimplicityEngine(const CombinationalSystem& sys) : sys_(sys) {}

    const CombinationalSystem& system() const { return sys_; }

    // sigma_j over all entities at once.
    const CostTable& plain_table(std::size_t measure) const {
        auto it = plain_.find(measure);
        if (it != plain_.end()) return it->second;
        auto seed = detail::base_seed(sys_, measure);
        auto table = detail::hyper_fixpoint(sys_, measure, kNoEntity, seed);
        return plain_.emplace(measure, std::move(table)).first->second;
    }

    Cost simplicity(std::size_t measure, EntityIndex x) const {
        check_measure(measure);
        return plain_table(measure).value[x];
    }

    Cost relative_simplicity(std::size_t measure, EntityIndex x, EntityIndex context,
                             RelativeMode mode = RelativeMode::FreeContext) const {
        check_measure(measure);
        return relative_table(measure, context, mode).value[x];
    }

    const CostTable& relative_table(std::size_t measure, EntityIndex context,
                                    RelativeMode mode = RelativeMode::FreeContext) const {
        if (context == sys_.identity || context == kNoEntity) {
            // sigma(x|e) = sigma(x) in both modes; context-e discounts are not
            // declarable, so the plain table is exact.
            return plain_table(measure);
        }
        const Key key{measure, context, mode};
        auto it = relative_.find(key);
        if (it != relative_.end()) return it->second.result;
        RelativeTables tables = solve_relative(measure, context, mode);
        return relative_.emplace(key, std::move(tables)).first->second.result;
    }

    // Optimal derivation tree backing the reported value; nullopt when the
    // entity is underivable.
    std::optional<Expression> witness(std::size_t measure, EntityIndex x) const {
        const CostTable& t = plain_table(measure);
        if (!t.value[x].is_finite()) return std::nullopt;
        return build_plain(t, x);
    }

    std::optional<Expression> relative_witness(std::size_t measure, EntityIndex x, EntityIndex context,
                                               RelativeMode mode = RelativeMode::FreeContext) const {
        if (context == sys_.identity || context == kNoEntity) return witness(measure, x);
        relative_table(measure, context, mode);  // force
        const Key key{measure, context, mode};
        const RelativeTables& tabs = relative_.at(key);
        if (!tabs.result.value[x].is_finite()) return std::nullopt;
        if (mode == RelativeMode::FreeContext) return build_free(tabs, x);
        return build_literal(tabs, x);
    }

private:
    struct Key {
        std::size_t measure;
        EntityIndex context;
        RelativeMode mode;
        bool operator<(const Key& o) const {
            return std::tie(measure, context, mode) < std::tie(o.measure, o.context, o.mode);
        }
    };
    struct RelativeTables {
        CostTable support;  // FreeContext: discounted plain; Literal: absolute plain
        CostTable result;
        RelativeTables(CostTable s, CostTable r) : support(std::move(s)), result(std::move(r)) {}
    };

    void check_measure(std::size_t measure) const {
        if (measure >= sys_.measures.size())
            throw Error("unknown-measure", "measure index out of range");
    }

    RelativeTables solve_relative(std::size_t measure, EntityIndex context, RelativeMode mode) const {
        if (mode == RelativeMode::FreeContext) {
            auto seed = detail::base_seed(sys_, measure);
            CostTable discounted = detail::hyper_fixpoint(sys_, measure, context, seed);
            CostTable result = detail::one_free_copy(sys_, measure, context, discounted);
            return RelativeTables(std::move(discounted), std::move(result));
        }
        // Literal: seed with the direct h(w,y) = sigma(w)+sigma(y)+sigma* offers
        // for reactions touching the context, then recurse with context
        // discounts applied inside.
        const CostTable& absolute = plain_table(measure);
        CostTable seed = detail::base_seed(sys_, measure);
        for (std::size_t r : sys_.reactions_using(context)) {
            const Reaction& rx = sys_.reactions[r];
            if (rx.left != context && rx.right != context) continue;
            if (!sys_.op_in_measure(measure, rx.op)) continue;
            const Cost oc = sys_.op_cost(measure, r, kNoEntity);
            const Cost offer = absolute.value[rx.left] + absolute.value[rx.right] + oc;
            if (offer.is_infinite()) continue;
            for (std::size_t p = 0; p < rx.products.size(); ++p) {
                const EntityIndex out = rx.products[p];
                if (offer < seed.value[out]) {
                    seed.value[out] = offer;
                    seed.parent[out] = {CostTable::From::Offer, r, p, -1};
                }
            }
        }
        CostTable result = detail::hyper_fixpoint(sys_, measure, context, seed);
        return RelativeTables(CostTable(absolute), std::move(result));
    }

    Expression build_plain(const CostTable& t, EntityIndex x) const {
        const auto& p = t.parent[x];
        switch (p.from) {
            case CostTable::From::Atom:
            case CostTable::From::Identity:
                return Expression::leaf(x);
            case CostTable::From::Reaction: {
                const Reaction& r = sys_.reactions[p.reaction];
                return Expression::apply(r.op, build_plain(t, r.left), build_plain(t, r.right), p.product);
            }
            default:
                throw Error("no-witness", "entity has no derivation");
        }
    }

    Expression build_free(const RelativeTables& tabs, EntityIndex x) const {
        const auto& p = tabs.result.parent[x];
        switch (p.from) {
            case CostTable::From::ContextCopy:
                return Expression::leaf(x);
            case CostTable::From::Fallback:
                return build_plain(tabs.support, x);
            case CostTable::From::Reaction: {
                const Reaction& r = sys_.reactions[p.reaction];
                Expression left = p.free_branch == 0 ? build_free(tabs, r.left)
                                                     : build_plain(tabs.support, r.left);
                Expression right = p.free_branch == 1 ? build_free(tabs, r.right)
                                                      : build_plain(tabs.support, r.right);
                return Expression::apply(r.op, std::move(left), std::move(right), p.product);
            }
            default:
                throw Error("no-witness", "entity has no derivation");
        }
    }

    Expression build_literal(const RelativeTables& tabs, EntityIndex x) const {
        const auto& p = tabs.result.parent[x];
        switch (p.from) {
            case CostTable::From::Atom:
            case CostTable::From::Identity:
                return Expression::leaf(x);
            case CostTable::From::Offer: {
                const Reaction& r = sys_.reactions[p.reaction];
                return Expression::apply(r.op, build_plain(tabs.support, r.left),
                                         build_plain(tabs.support, r.right), p.product);
            }
            case CostTable::From::Reaction: {
                const Reaction& r = sys_.reactions[p.reaction];
                return Expression::apply(r.op, build_literal(tabs, r.left), build_literal(tabs, r.right),
                                         p.product);
            }
            default:
                throw Error("no-witness", "entity has no derivation");
        }
    }

    const CombinationalSystem& sys_;
    mutable std::map<std::size_t, CostTable> plain_;
    mutable std::map<Key, RelativeTables> relative_;
};

// sigma!_j(E): sums sigma_j over leaf instances and sigma*_j over operator
// instances, counted with repetition. Implicit identity applications cost 0.
inline Cost expression_cost(const CombinationalSystem& sys, const SimplicityEngine& engine,
                            std::size_t measure, const Expression::Node& n) {
    if (n.is_leaf) return engine.simplicity(measure, n.entity);
    const EntityIndex l = detail::evaluate_node(sys, *n.left);
    const EntityIndex r = detail::evaluate_node(sys, *n.right);
    Cost op_cost = Cost::zero();
    if (l != sys.identity && r != sys.identity) {
        const std::size_t reaction = sys.find_reaction(n.op, l, r);
        if (reaction == CombinationalSystem::kNoReaction)
            throw Error("missing-reaction", "expression node not backed by a reaction");
        op_cost = sys.op_cost(measure, reaction, kNoEntity);
    }
    return expression_cost(sys, engine, measure, *n.left) +
           expression_cost(sys, engine, measure, *n.right) + op_cost;
}

inline Cost expression_cost(const CombinationalSystem& sys, const SimplicityEngine& engine,
                            std::size_t measure, const Expression& e) {
    return expression_cost(sys, engine, measure, *e.root);
}

// Flattens a witness tree into the auto-op application sequence: children
// before parents, identical applications listed once (addresses coincide).
inline std::vector<AutoOp> derivation_steps(const CombinationalSystem& sys, const Expression& e) {
    std::vector<AutoOp> steps;
    std::map<std::string, bool> seen;
    auto walk = [&](auto&& self, const Expression::Node& n) -> std::string {
        if (n.is_leaf) return sys.entities[n.entity];
        const std::string left = self(self, *n.left);
        const std::string right = self(self, *n.right);
        const std::string address = make_address(sys.operators[n.op].id, left, right, n.product_index);
        if (!seen[address]) {
            seen[address] = true;
            AutoOp op;
            op.op = sys.operators[n.op].id;
            op.left_address = left;
            op.right_address = right;
            const EntityIndex l = detail::evaluate_node(sys, *n.left);
            const EntityIndex r = detail::evaluate_node(sys, *n.right);
            std::size_t nproducts = 1;
            if (l != sys.identity && r != sys.identity) {
                const std::size_t reaction = sys.find_reaction(n.op, l, r);
                if (reaction != CombinationalSystem::kNoReaction)
                    nproducts = sys.reactions[reaction].products.size();
            }
            for (std::size_t p = 0; p < nproducts; ++p)
                op.output_addresses.push_back(make_address(sys.operators[n.op].id, left, right, p));
            steps.push_back(std::move(op));
        }
        return address;
    };
    walk(walk, *e.root);
    return steps;
}

}  // namespace cosm
