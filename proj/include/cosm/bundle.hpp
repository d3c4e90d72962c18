#pragma once

#include "cosm/simplicity.hpp"

#include <algorithm>
#include <vector>

namespace cosm {

// Canonical Pareto-nondominated set of per-measure cost vectors, sorted
// lexicographically with equal vectors deduplicated.
struct SimplicityBundle {
    std::vector<CostVector> vectors;

    bool operator==(const SimplicityBundle& o) const { return vectors == o.vectors; }
};

// Inserts unless dominated-or-equal by an existing member; evicts members the
// candidate strictly dominates. Returns true when the set changed.
inline bool insert_nondominated(std::vector<CostVector>& set, const CostVector& candidate) {
    for (const auto& s : set) {
        if (dominates_or_equal(s, candidate)) return false;
    }
    std::erase_if(set, [&](const CostVector& s) { return strictly_dominates(candidate, s); });
    set.push_back(candidate);
    return true;
}

// Removes every vector strictly dominated by another and deduplicates;
// canonical lexicographic order. Idempotent and order-independent.
inline SimplicityBundle pareto_filter(const std::vector<CostVector>& vectors) {
    for (const auto& v : vectors) {
        if (!vectors.empty() && v.size() != vectors.front().size())
            throw Error("mixed-lengths", "cost vectors of mixed lengths");
    }
    std::vector<CostVector> keep;
    for (const auto& v : vectors) insert_nondominated(keep, v);
    std::sort(keep.begin(), keep.end(), lex_less);
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    return SimplicityBundle{std::move(keep)};
}

// Set-level dominance: every member of B is dominated-or-equal by some member
// of A, i.e. A's frontier covers B from below in every coordinate.
inline bool bundle_dominates(const SimplicityBundle& a, const std::vector<CostVector>& b) {
    for (const auto& t : b) {
        bool covered = false;
        for (const auto& s : a.vectors) {
            if (s.size() != t.size()) throw Error("mixed-lengths", "cost vectors of mixed lengths");
            if (dominates_or_equal(s, t)) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

inline SimplicityBundle minkowski_sum(const SimplicityBundle& a, const SimplicityBundle& b) {
    std::vector<CostVector> sums;
    for (const auto& x : a.vectors)
        for (const auto& y : b.vectors) sums.push_back(x + y);
    return pareto_filter(sums);
}

// mu-vec!(E): coordinate j sums measure-j costs over leaf and operator
// instances, infinite wherever an operator falls outside O_j.
inline CostVector vector_expression_cost(const CombinationalSystem& sys,
                                         const SimplicityEngine& engine, const Expression& e) {
    CostVector out;
    for (std::size_t j = 0; j < sys.measures.size(); ++j)
        out.push_back(expression_cost(sys, engine, j, e));
    return out;
}

struct BundleOptions {
    std::size_t label_cap = 64;   // per entity; exceeding it is a hard failure
    std::size_t max_rounds = 4096;
};

// Nondominated cost vectors achievable by derivations of x from context w
// (single-free-copy semantics), coordinate j scoring infinity for derivations
// using operators outside O_j. Label-correcting with dominance pruning.
inline SimplicityBundle bundle(const CombinationalSystem& sys, EntityIndex x,
                               EntityIndex context = kNoEntity,
                               const BundleOptions& options = {}) {
    const std::size_t n = sys.entities.size();
    const std::size_t m = sys.measures.size();
    const bool use_context = context != kNoEntity && context != sys.identity;
    const int flags = use_context ? 2 : 1;

    auto op_vector = [&](std::size_t reaction) {
        CostVector v;
        v.reserve(m);
        for (std::size_t j = 0; j < m; ++j)
            v.push_back(sys.op_cost(j, reaction, use_context ? context : kNoEntity));
        return v;
    };
    auto all_infinite = [](const CostVector& v) {
        return std::all_of(v.begin(), v.end(), [](const Cost& c) { return c.is_infinite(); });
    };

    // labels[entity][flag]: flag marks that the free context copy is spent.
    std::vector<std::vector<std::vector<CostVector>>> labels(
        n, std::vector<std::vector<CostVector>>(flags));
    const CostVector zero(m, Cost::zero());
    labels[sys.identity][0].push_back(zero);
    for (EntityIndex a = 0; a < n; ++a) {
        if (!sys.is_atom[a]) continue;
        CostVector v;
        for (std::size_t j = 0; j < m; ++j) v.push_back(sys.atom_cost(j, a));
        insert_nondominated(labels[a][0], v);
    }
    if (use_context) insert_nondominated(labels[context][1], zero);

    std::size_t rounds = 0;
    bool changed = true;
    while (changed) {
        if (++rounds > options.max_rounds)
            throw Error("bundle-divergence", "label correction failed to stabilize");
        changed = false;
        for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
            const Reaction& rx = sys.reactions[r];
            const CostVector opv = op_vector(r);
            if (all_infinite(opv)) continue;
            for (int fl = 0; fl < flags; ++fl) {
                for (int fr = 0; fr < flags; ++fr) {
                    if (fl + fr > 1) continue;
                    // Combine over snapshots: products may feed back into their
                    // own operands, and inserts must not disturb this pass.
                    const std::vector<CostVector> left = labels[rx.left][fl];
                    const std::vector<CostVector> right = labels[rx.right][fr];
                    for (const auto& la : left) {
                        for (const auto& lb : right) {
                            CostVector cand = la + lb + opv;
                            if (all_infinite(cand)) continue;
                            const int fo = fl | fr;
                            for (EntityIndex p : rx.products) {
                                if (insert_nondominated(labels[p][fo], cand)) {
                                    changed = true;
                                    if (labels[p][fo].size() > options.label_cap)
                                        throw Error("bundle-cap",
                                                    "label set for '" + sys.entities[p] +
                                                        "' exceeds the configured cap");
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    std::vector<CostVector> result = labels[x][0];
    if (use_context)
        for (const auto& v : labels[x][1]) result.push_back(v);
    return pareto_filter(result);
}

}  // namespace cosm
