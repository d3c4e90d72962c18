#pragma once

#include "cosm/simplicity.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <vector>

namespace cosm {

// Finite-support multiset of entities with positive multiplicities.
struct Multiset {
    std::map<EntityIndex, std::size_t> counts;

    std::size_t total() const {
        std::size_t n = 0;
        for (const auto& [e, c] : counts) n += c;
        return n;
    }
    Multiset union_with(const Multiset& other) const {
        Multiset out = *this;
        for (const auto& [e, c] : other.counts) out.counts[e] += c;
        return out;
    }
};

enum class MultisetSolver { Exact, Greedy };

struct MultisetOptions {
    MultisetSolver solver = MultisetSolver::Exact;
    std::size_t exact_entity_cap = 14;  // exact mode refuses larger systems
};

// A shared derivation plan: reaction applications paid once each, atom
// operand uses paid per use, produced entities reusable for free. Duplicate
// multiplicities beyond the first are free under sharing.
struct MultisetResult {
    Cost value = Cost::infinity();
    Cost normalized = Cost::infinity();  // value / total multiplicity
    bool approximate = false;
    std::vector<std::size_t> plan;       // applied reactions, application order
    std::size_t free_duplicates = 0;     // total multiplicity minus distinct support
};

namespace detail {

// Cost of one application given the set of already-produced entities:
// operator cost plus declared costs of atom operands not otherwise produced.
inline Cost application_cost(const CombinationalSystem& sys, std::size_t measure, std::size_t r,
                             const std::vector<bool>& produced) {
    const Reaction& rx = sys.reactions[r];
    Cost c = sys.op_cost(measure, r, kNoEntity);
    for (EntityIndex operand : {rx.left, rx.right}) {
        if (sys.is_atom[operand] && !produced[operand]) c += sys.atom_cost(measure, operand);
    }
    return c;
}

inline bool operand_available(const CombinationalSystem& sys, EntityIndex x,
                              const std::vector<bool>& produced) {
    return sys.is_atom[x] || x == sys.identity || produced[x];
}

}  // namespace detail

inline Cost finalize_normalized(const Cost& value, const Multiset& s) {
    if (!value.is_finite() || s.total() == 0) return Cost::infinity();
    return Cost(value.value() / Rational(static_cast<long long>(s.total())));
}

// Minimum total cost of a shared derivation plan whose closure contains the
// support. Exact mode: uniform-cost search over produced-entity subsets,
// exact because application costs are nonnegative and re-applying a reaction
// never changes the state.
inline MultisetResult multiset_simplicity(const CombinationalSystem& sys, std::size_t measure,
                                          const Multiset& s, const MultisetOptions& options = {}) {
    if (measure >= sys.measures.size()) throw Error("unknown-measure", "measure index out of range");
    for (const auto& [e, c] : s.counts) {
        if (e >= sys.entities.size()) throw Error("unknown-entity", "multiset entity out of range");
        if (c == 0) throw Error("bad-multiset", "multiplicities must be positive");
    }

    MultisetResult result;
    std::size_t distinct = s.counts.size();
    result.free_duplicates = s.total() - distinct;

    // Entities that can ever be produced get a bit in the search state.
    std::vector<int> bit_of(sys.entities.size(), -1);
    std::vector<EntityIndex> bit_entity;
    for (const auto& r : sys.reactions) {
        for (EntityIndex p : r.products) {
            if (p != sys.identity && bit_of[p] < 0) {
                bit_of[p] = static_cast<int>(bit_entity.size());
                bit_entity.push_back(p);
            }
        }
    }

    // Fixed payment for support atoms (never producible unless a reaction
    // passes them through) and the covering mask for the rest.
    Cost atom_targets = Cost::zero();
    std::uint64_t goal_mask = 0;
    for (const auto& [x, c] : s.counts) {
        if (x == sys.identity) continue;
        if (bit_of[x] >= 0) {
            goal_mask |= (1ull << bit_of[x]);
        } else if (sys.is_atom[x]) {
            atom_targets += sys.atom_cost(measure, x);
        } else {
            return result;  // non-atom entity no reaction produces: infinite
        }
    }

    if (options.solver == MultisetSolver::Greedy) {
        // Derive each covered target in turn, reusing everything already
        // produced; the final plan is costed exactly, so this is a sound
        // upper bound, flagged approximate.
        result.approximate = true;
        std::vector<bool> produced(sys.entities.size(), false);
        Cost total = atom_targets;
        for (const auto& [x, c] : s.counts) {
            if (x == sys.identity || sys.is_atom[x] || produced[x]) continue;
            // Fixpoint with every produced entity as a free source.
            CostTable seed = detail::base_seed(sys, measure);
            std::vector<std::size_t> order;
            for (EntityIndex p = 0; p < sys.entities.size(); ++p) {
                if (produced[p]) {
                    seed.value[p] = Cost::zero();
                    seed.parent[p] = {CostTable::From::ContextCopy, 0, 0, -1};
                }
            }
            CostTable table = detail::hyper_fixpoint(sys, measure, kNoEntity, seed);
            if (!table.value[x].is_finite()) return MultisetResult{};
            // Collect the application set of the witness tree.
            auto collect = [&](auto&& self, EntityIndex node) -> void {
                const auto& par = table.parent[node];
                if (par.from != CostTable::From::Reaction) return;
                const Reaction& rx = sys.reactions[par.reaction];
                self(self, rx.left);
                self(self, rx.right);
                if (std::find(order.begin(), order.end(), par.reaction) == order.end())
                    order.push_back(par.reaction);
            };
            collect(collect, x);
            for (std::size_t r : order) {
                if (std::find(result.plan.begin(), result.plan.end(), r) != result.plan.end()) continue;
                total += detail::application_cost(sys, measure, r, produced);
                result.plan.push_back(r);
                for (EntityIndex p : sys.reactions[r].products) produced[p] = true;
            }
        }
        result.value = total;
        result.normalized = finalize_normalized(total, s);
        return result;
    }

    if (sys.entities.size() > options.exact_entity_cap)
        throw Error("cap-exceeded", "exact multiset solver limited to " +
                                        std::to_string(options.exact_entity_cap) + " entities");
    if (bit_entity.size() > 60) throw Error("cap-exceeded", "too many producible entities");

    // Lazily-allocated state space: only masks actually reached get storage.
    std::map<std::uint64_t, Cost> dist;
    std::map<std::uint64_t, std::pair<std::uint64_t, std::size_t>> parent;
    std::set<std::uint64_t> settled;
    struct Item {
        Cost cost;
        std::uint64_t mask;
        bool operator>(const Item& o) const {
            if (cost != o.cost) return o.cost < cost;
            return mask > o.mask;
        }
    };
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    dist[0] = atom_targets;
    queue.push({atom_targets, 0});
    Cost best = Cost::infinity();
    std::uint64_t best_mask = 0;
    while (!queue.empty()) {
        const auto [cost, mask] = queue.top();
        queue.pop();
        if (settled.count(mask) || cost != dist.at(mask)) continue;
        settled.insert(mask);
        if (best < cost) break;  // every remaining state costs at least as much
        if ((mask & goal_mask) == goal_mask && cost < best) {
            best = cost;
            best_mask = mask;
            continue;
        }
        std::vector<bool> produced(sys.entities.size(), false);
        for (std::size_t b = 0; b < bit_entity.size(); ++b)
            if (mask & (1ull << b)) produced[bit_entity[b]] = true;
        for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
            const Reaction& rx = sys.reactions[r];
            if (!sys.op_in_measure(measure, rx.op)) continue;
            if (!detail::operand_available(sys, rx.left, produced) ||
                !detail::operand_available(sys, rx.right, produced))
                continue;
            std::uint64_t next = mask;
            for (EntityIndex p : rx.products)
                if (bit_of[p] >= 0) next |= (1ull << bit_of[p]);
            if (next == mask) continue;
            const Cost step = detail::application_cost(sys, measure, r, produced);
            const Cost cand = cost + step;
            auto it = dist.find(next);
            if (cand.is_finite() && (it == dist.end() || cand < it->second)) {
                dist[next] = cand;
                parent[next] = {mask, r};
                queue.push({cand, next});
            }
        }
    }
    if (!best.is_finite()) return result;
    result.value = best;
    result.normalized = finalize_normalized(best, s);
    std::uint64_t cursor = best_mask;
    while (cursor != 0 && parent.count(cursor) &&
           parent.at(cursor).second != CombinationalSystem::kNoReaction) {
        result.plan.push_back(parent.at(cursor).second);
        cursor = parent.at(cursor).first;
    }
    std::reverse(result.plan.begin(), result.plan.end());
    return result;
}

}  // namespace cosm
