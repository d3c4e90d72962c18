#pragma once

// Deterministic generators for property-style tests. All randomness flows
// through raw mt19937_64 draws (no distribution objects), so corpora are
// reproducible across standard libraries.

#include "cosm/builtins.hpp"
#include "cosm/expression.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace cosm::testing {

struct RandomSystemOptions {
    std::size_t max_entities = 12;
    std::size_t max_operators = 3;
    std::size_t max_measures = 3;
    unsigned denominator_cap = 16;
    unsigned numerator_cap = 32;
    bool context_overrides = false;
};

inline Rational random_cost_value(std::mt19937_64& rng, const RandomSystemOptions& opt) {
    const unsigned q = 1 + static_cast<unsigned>(rng() % opt.denominator_cap);
    const unsigned p = static_cast<unsigned>(rng() % opt.numerator_cap);
    return Rational(p, q);
}

inline CombinationalSystem random_system(std::mt19937_64& rng,
                                         const RandomSystemOptions& opt = {}) {
    SystemBuilder b;
    b.entity("e");
    const std::size_t n = 3 + rng() % (opt.max_entities - 2);  // including e
    const std::size_t atom_count = 1 + rng() % (n - 1);
    std::vector<EntityIndex> ids;
    for (std::size_t i = 1; i < n; ++i)
        ids.push_back(b.entity("x" + std::to_string(i), i <= atom_count));
    std::vector<EntityIndex> atoms(ids.begin(), ids.begin() + atom_count);
    std::vector<EntityIndex> compounds(ids.begin() + atom_count, ids.end());

    CombinationalSystem probe;  // only for sizes below
    const std::size_t n_ops = 1 + rng() % opt.max_operators;
    std::vector<std::size_t> ops;
    for (std::size_t i = 0; i < n_ops; ++i) ops.push_back(b.op("f" + std::to_string(i + 1)));

    std::vector<std::size_t> reactions;
    if (!compounds.empty()) {
        const std::size_t target_count = rng() % (2 * n);
        std::set<std::tuple<std::size_t, EntityIndex, EntityIndex>> used;
        for (std::size_t i = 0; i < target_count; ++i) {
            const std::size_t op = ops[rng() % ops.size()];
            const EntityIndex left = ids[rng() % ids.size()];
            const EntityIndex right = ids[rng() % ids.size()];
            if (!used.insert({op, left, right}).second) continue;
            std::vector<EntityIndex> products{compounds[rng() % compounds.size()]};
            if (rng() % 4 == 0) products.push_back(compounds[rng() % compounds.size()]);
            reactions.push_back(b.reaction(op, left, right, products));
        }
    }

    const std::size_t n_measures = 1 + rng() % opt.max_measures;
    // Base operator set, contained in every other measure's set.
    std::vector<std::size_t> base_ops;
    for (std::size_t op : ops)
        if (rng() % 2 == 0) base_ops.push_back(op);
    if (base_ops.empty()) base_ops.push_back(ops[0]);
    for (std::size_t j = 0; j < n_measures; ++j) {
        std::vector<std::size_t> mset = base_ops;
        if (j > 0) {
            for (std::size_t op : ops) {
                if (rng() % 2 == 0 &&
                    std::find(mset.begin(), mset.end(), op) == mset.end())
                    mset.push_back(op);
            }
        }
        const std::size_t m = b.measure("m" + std::to_string(j + 1), mset);
        for (EntityIndex a : atoms) b.atom_cost(m, a, Cost(random_cost_value(rng, opt)));
        for (std::size_t op : ops) b.op_cost(m, op, Cost(random_cost_value(rng, opt)));
        for (std::size_t r : reactions) {
            if (rng() % 4 == 0) b.reaction_override(m, r, Cost(random_cost_value(rng, opt)));
            if (opt.context_overrides && rng() % 8 == 0 && !ids.empty())
                b.context_override(m, r, ids[rng() % ids.size()], Cost(random_cost_value(rng, opt)));
        }
    }
    (void)probe;
    return b.build();
}

// Random well-formed expression evaluating to `target`: either the bare leaf
// or a producing reaction with recursively generated operand expressions.
inline Expression random_expression(const CombinationalSystem& sys, std::mt19937_64& rng,
                                    EntityIndex target, std::size_t depth) {
    const auto& producers = sys.reactions_producing(target);
    if (depth == 0 || producers.empty() || rng() % 3 == 0) return Expression::leaf(target);
    const std::size_t r = producers[rng() % producers.size()];
    const Reaction& rx = sys.reactions[r];
    std::size_t product = 0;
    for (std::size_t p = 0; p < rx.products.size(); ++p)
        if (rx.products[p] == target) product = p;
    return Expression::apply(rx.op, random_expression(sys, rng, rx.left, depth - 1),
                             random_expression(sys, rng, rx.right, depth - 1), product);
}

inline EntityIndex random_entity(const CombinationalSystem& sys, std::mt19937_64& rng) {
    return static_cast<EntityIndex>(rng() % sys.entities.size());
}

// Derivation-complete expression: every leaf is an atom or the identity, so
// the expression is itself a recipe and its syntactic cost vector is the cost
// of an actual derivation. Compound leaves would contribute per-measure
// minima drawn from different derivations, an unachievable ideal point.
inline std::optional<Expression> random_derivation_expression(const CombinationalSystem& sys,
                                                              std::mt19937_64& rng,
                                                              EntityIndex target,
                                                              std::size_t depth) {
    if (sys.is_atom[target] || target == sys.identity) return Expression::leaf(target);
    const auto& producers = sys.reactions_producing(target);
    if (producers.empty() || depth == 0) return std::nullopt;
    const std::size_t start = rng() % producers.size();
    for (std::size_t k = 0; k < producers.size(); ++k) {
        const std::size_t r = producers[(start + k) % producers.size()];
        const Reaction& rx = sys.reactions[r];
        auto left = random_derivation_expression(sys, rng, rx.left, depth - 1);
        if (!left) continue;
        auto right = random_derivation_expression(sys, rng, rx.right, depth - 1);
        if (!right) continue;
        std::size_t product = 0;
        for (std::size_t p = 0; p < rx.products.size(); ++p)
            if (rx.products[p] == target) product = p;
        return Expression::apply(rx.op, std::move(*left), std::move(*right), product);
    }
    return std::nullopt;
}

}  // namespace cosm::testing
