#pragma once

#include "cosm/bundle.hpp"
#include "cosm/multiset.hpp"
#include "cosm/pattern.hpp"

#include <vector>

namespace cosm {

// Exhaustive enumeration oracles. These recompute every quantity by direct
// enumeration of derivation trees or plans, sharing no code path with the
// fixpoint/label-correcting engines they check. Trees repeating an entity on
// a root-to-leaf path are skipped: with nonnegative costs such a tree never
// beats the copy rooted at the inner occurrence, so the minimum (and every
// nondominated vector) is unaffected.
struct OracleOptions {
    std::size_t max_entities = 14;
    std::size_t max_reactions_for_plans = 20;
};

namespace oracle {

namespace detail {

// Recursive enumeration over (entity, on-path set) states. The memo shares
// identical subproblems but the recursion remains a structural walk over
// derivation trees, independent of the priority-driven engines.
struct Enumerator {
    const CombinationalSystem& sys;
    std::size_t measure;
    EntityIndex discount_ctx;  // operator-cost discounts; kNoEntity for none
    std::map<std::pair<EntityIndex, std::uint64_t>, Cost> paid_memo;
    std::map<std::pair<EntityIndex, std::uint64_t>, Cost> free_memo;

    Cost paid(EntityIndex x, std::uint64_t mask) {
        if (x == sys.identity) return Cost::zero();
        Cost best = Cost::infinity();
        if (sys.is_atom[x]) best = sys.atom_cost(measure, x);
        if (mask & (1ull << x)) return best;
        const auto key = std::make_pair(x, mask);
        if (auto it = paid_memo.find(key); it != paid_memo.end()) return it->second;
        const std::uint64_t inner = mask | (1ull << x);
        for (std::size_t r : sys.reactions_producing(x)) {
            const Reaction& rx = sys.reactions[r];
            if (!sys.op_in_measure(measure, rx.op)) continue;
            const Cost c = paid(rx.left, inner) + paid(rx.right, inner) +
                           sys.op_cost(measure, r, discount_ctx);
            best = min(best, c);
        }
        paid_memo.emplace(key, best);
        return best;
    }

    // Minimum over trees with at most one free occurrence of the context leaf.
    Cost free_copy(EntityIndex x, EntityIndex ctx, std::uint64_t mask) {
        if (x == ctx) return Cost::zero();
        if (x == sys.identity) return Cost::zero();
        Cost best = paid(x, mask);
        if (mask & (1ull << x)) return best;
        const auto key = std::make_pair(x, mask);
        if (auto it = free_memo.find(key); it != free_memo.end()) return it->second;
        const std::uint64_t inner = mask | (1ull << x);
        for (std::size_t r : sys.reactions_producing(x)) {
            const Reaction& rx = sys.reactions[r];
            if (!sys.op_in_measure(measure, rx.op)) continue;
            const Cost oc = sys.op_cost(measure, r, discount_ctx);
            const Cost via_left = free_copy(rx.left, ctx, inner) + paid(rx.right, inner) + oc;
            const Cost via_right = paid(rx.left, inner) + free_copy(rx.right, ctx, inner) + oc;
            best = min(best, min(via_left, via_right));
        }
        free_memo.emplace(key, best);
        return best;
    }
};

struct LiteralEnumerator {
    const CombinationalSystem& sys;
    std::size_t measure;
    EntityIndex ctx;
    Enumerator absolute;  // no discounts, for the direct h(w,y) offers
    std::map<std::pair<EntityIndex, std::uint64_t>, Cost> memo;

    LiteralEnumerator(const CombinationalSystem& s, std::size_t m, EntityIndex c)
        : sys(s), measure(m), ctx(c), absolute{s, m, kNoEntity} {}

    Cost value(EntityIndex x, std::uint64_t mask) {
        if (x == sys.identity) return Cost::zero();
        Cost best = Cost::infinity();
        if (sys.is_atom[x]) best = sys.atom_cost(measure, x);
        if (mask & (1ull << x)) return best;
        const auto key = std::make_pair(x, mask);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const std::uint64_t inner = mask | (1ull << x);
        for (std::size_t r : sys.reactions_producing(x)) {
            const Reaction& rx = sys.reactions[r];
            if (!sys.op_in_measure(measure, rx.op)) continue;
            if (ctx != kNoEntity && (rx.left == ctx || rx.right == ctx)) {
                const Cost direct = absolute.paid(rx.left, 0) + absolute.paid(rx.right, 0) +
                                    sys.op_cost(measure, r, kNoEntity);
                best = min(best, direct);
            }
            const Cost rec =
                value(rx.left, inner) + value(rx.right, inner) + sys.op_cost(measure, r, ctx);
            best = min(best, rec);
        }
        memo.emplace(key, best);
        return best;
    }
};

}  // namespace detail

inline void check_cap(const CombinationalSystem& sys, const OracleOptions& options) {
    if (sys.entities.size() > options.max_entities)
        throw Error("cap-exceeded", "oracle limited to " + std::to_string(options.max_entities) +
                                        " entities");
    if (sys.entities.size() > 60) throw Error("cap-exceeded", "oracle mask limited to 60 entities");
}

inline Cost simplicity(const CombinationalSystem& sys, std::size_t measure, EntityIndex x,
                       const OracleOptions& options = {}) {
    check_cap(sys, options);
    detail::Enumerator e{sys, measure, kNoEntity};
    return e.paid(x, 0);
}

inline Cost relative_simplicity(const CombinationalSystem& sys, std::size_t measure, EntityIndex x,
                                EntityIndex ctx, RelativeMode mode = RelativeMode::FreeContext,
                                const OracleOptions& options = {}) {
    check_cap(sys, options);
    if (mode == RelativeMode::Literal) {
        detail::LiteralEnumerator lit(sys, measure,
                                      ctx == sys.identity ? kNoEntity : ctx);
        return lit.value(x, 0);
    }
    if (ctx == kNoEntity || ctx == sys.identity) {
        detail::Enumerator e{sys, measure, kNoEntity};
        return e.paid(x, 0);
    }
    detail::Enumerator e{sys, measure, ctx};
    return e.free_copy(x, ctx, 0);
}

namespace detail {

inline CostVector op_vector(const CombinationalSystem& sys, std::size_t r, EntityIndex ctx) {
    CostVector v;
    for (std::size_t j = 0; j < sys.measures.size(); ++j) v.push_back(sys.op_cost(j, r, ctx));
    return v;
}

struct VectorEnumerator {
    const CombinationalSystem& sys;
    EntityIndex ctx;
    std::map<std::pair<EntityIndex, std::uint64_t>, std::vector<CostVector>> paid_memo;
    std::map<std::pair<EntityIndex, std::uint64_t>, std::vector<CostVector>> free_memo;

    std::vector<CostVector> paid(EntityIndex x, std::uint64_t mask) {
        const std::size_t m = sys.measures.size();
        if (x == sys.identity) return {CostVector(m, Cost::zero())};
        std::vector<CostVector> out;
        if (sys.is_atom[x]) {
            CostVector v;
            for (std::size_t j = 0; j < m; ++j) v.push_back(sys.atom_cost(j, x));
            out.push_back(std::move(v));
        }
        if (mask & (1ull << x)) return out;
        const auto key = std::make_pair(x, mask);
        if (auto it = paid_memo.find(key); it != paid_memo.end()) return it->second;
        const std::uint64_t inner = mask | (1ull << x);
        for (std::size_t r : sys.reactions_producing(x)) {
            const Reaction& rx = sys.reactions[r];
            const CostVector opv = op_vector(sys, r, ctx);
            for (const auto& lv : paid(rx.left, inner)) {
                for (const auto& rv : paid(rx.right, inner)) {
                    CostVector cand = lv + rv + opv;
                    if (std::all_of(cand.begin(), cand.end(),
                                    [](const Cost& c) { return c.is_infinite(); }))
                        continue;
                    insert_nondominated(out, cand);
                }
            }
        }
        paid_memo.emplace(key, out);
        return out;
    }

    std::vector<CostVector> free_vectors(EntityIndex x, std::uint64_t mask) {
        const std::size_t m = sys.measures.size();
        if (x == ctx) return {CostVector(m, Cost::zero())};
        if (x == sys.identity) return {CostVector(m, Cost::zero())};
        std::vector<CostVector> out = paid(x, mask);
        if (mask & (1ull << x)) return out;
        const auto key = std::make_pair(x, mask);
        if (auto it = free_memo.find(key); it != free_memo.end()) return it->second;
        const std::uint64_t inner = mask | (1ull << x);
        for (std::size_t r : sys.reactions_producing(x)) {
            const Reaction& rx = sys.reactions[r];
            const CostVector opv = op_vector(sys, r, ctx);
            for (const auto& lv : free_vectors(rx.left, inner))
                for (const auto& rv : paid(rx.right, inner))
                    insert_nondominated(out, lv + rv + opv);
            for (const auto& lv : paid(rx.left, inner))
                for (const auto& rv : free_vectors(rx.right, inner))
                    insert_nondominated(out, lv + rv + opv);
        }
        std::erase_if(out, [](const CostVector& v) {
            return std::all_of(v.begin(), v.end(), [](const Cost& c) { return c.is_infinite(); });
        });
        free_memo.emplace(key, out);
        return out;
    }
};

}  // namespace detail

inline SimplicityBundle bundle(const CombinationalSystem& sys, EntityIndex x,
                               EntityIndex ctx = kNoEntity, const OracleOptions& options = {}) {
    check_cap(sys, options);
    if (ctx == kNoEntity || ctx == sys.identity) {
        detail::VectorEnumerator e{sys, kNoEntity};
        return pareto_filter(e.paid(x, 0));
    }
    detail::VectorEnumerator e{sys, ctx};
    return pareto_filter(e.free_vectors(x, 0));
}

// Frontier recomputed from oracle simplicities with a direct double-loop
// dominance filter.
inline FrontierSet multipattern_frontier(const CombinationalSystem& sys, EntityIndex x,
                                         EntityIndex ctx = kNoEntity,
                                         DenominatorMode mode = DenominatorMode::PerMeasure,
                                         const OracleOptions& options = {}) {
    check_cap(sys, options);
    std::vector<PatternRecord> records;
    auto sigma = [&](std::size_t j, EntityIndex y) {
        return relative_simplicity(sys, j, y, ctx, RelativeMode::FreeContext, options);
    };
    const Cost base_cost = sigma(0, x);
    for (std::size_t r : sys.reactions_producing(x)) {
        const Reaction& rx = sys.reactions[r];
        PatternRecord rec;
        rec.y = rx.left;
        rec.z = rx.right;
        rec.op = rx.op;
        rec.reaction = r;
        rec.target = x;
        rec.context = ctx;
        for (std::size_t j = 1; j < sys.measures.size(); ++j) {
            const Cost h = sigma(0, rx.left) + sigma(0, rx.right) +
                           sys.op_cost(j, r, ctx == sys.identity ? kNoEntity : ctx);
            const Cost denom = mode == DenominatorMode::PerMeasure ? sigma(j, x) : base_cost;
            if (!denom.is_finite() || denom.is_zero() || !base_cost.is_finite()) {
                rec.intensities.push_back(Intensity::undefined());
            } else if (!h.is_finite()) {
                rec.intensities.push_back(Intensity::neg_infinite());
            } else {
                rec.intensities.push_back(Intensity::of((base_cost.value() - h.value()) / denom.value()));
            }
        }
        rec.classification = classify_intensities(rec.intensities);
        records.push_back(std::move(rec));
    }
    std::erase_if(records, [](const PatternRecord& r) {
        for (const auto& i : r.intensities)
            if (i.is_undefined()) return true;
        return false;
    });
    std::vector<PatternRecord> keep;
    for (const auto& cand : records) {
        bool dominated = false;
        for (const auto& other : records) {
            bool ge_all = true, strict = false;
            for (std::size_t i = 0; i < cand.intensities.size(); ++i) {
                if (!intensity_ge(other.intensities[i], cand.intensities[i])) ge_all = false;
                if (!intensity_eq(other.intensities[i], cand.intensities[i])) strict = true;
            }
            if (ge_all && strict) {
                dominated = true;
                break;
            }
        }
        if (!dominated) keep.push_back(cand);
    }
    return FrontierSet{std::move(keep)};
}

// Minimum plan cost by enumerating reaction subsets; every subset must fire
// completely and cover the support. Assumes no reaction produces an atom.
inline Cost multiset_plan(const CombinationalSystem& sys, std::size_t measure, const Multiset& s,
                          const OracleOptions& options = {}) {
    if (sys.reactions.size() > options.max_reactions_for_plans)
        throw Error("cap-exceeded", "plan oracle limited to " +
                                        std::to_string(options.max_reactions_for_plans) + " reactions");
    for (const auto& r : sys.reactions)
        for (EntityIndex p : r.products)
            if (sys.is_atom[p])
                throw Error("cap-exceeded", "plan oracle does not support atom-producing reactions");

    Cost atom_part = Cost::zero();
    std::vector<EntityIndex> targets;
    for (const auto& [x, c] : s.counts) {
        if (x == sys.identity) continue;
        if (sys.is_atom[x])
            atom_part += sys.atom_cost(measure, x);
        else
            targets.push_back(x);
    }

    Cost best = Cost::infinity();
    const std::size_t nr = sys.reactions.size();
    for (std::uint64_t subset = 0; subset < (1ull << nr); ++subset) {
        Cost cost = atom_part;
        bool legal = true;
        for (std::size_t r = 0; r < nr; ++r) {
            if (!(subset & (1ull << r))) continue;
            if (!sys.op_in_measure(measure, sys.reactions[r].op)) {
                legal = false;
                break;
            }
            const Reaction& rx = sys.reactions[r];
            cost += sys.op_cost(measure, r, kNoEntity);
            if (sys.is_atom[rx.left]) cost += sys.atom_cost(measure, rx.left);
            if (sys.is_atom[rx.right]) cost += sys.atom_cost(measure, rx.right);
        }
        if (!legal || !(cost < best)) continue;
        // Closure: all selected reactions must fire.
        std::vector<bool> produced(sys.entities.size(), false);
        std::vector<bool> fired(nr, false);
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t r = 0; r < nr; ++r) {
                if (!(subset & (1ull << r)) || fired[r]) continue;
                const Reaction& rx = sys.reactions[r];
                if (cosm::detail::operand_available(sys, rx.left, produced) &&
                    cosm::detail::operand_available(sys, rx.right, produced)) {
                    fired[r] = true;
                    progress = true;
                    for (EntityIndex p : rx.products) produced[p] = true;
                }
            }
        }
        bool ok = true;
        for (std::size_t r = 0; r < nr; ++r)
            if ((subset & (1ull << r)) && !fired[r]) ok = false;
        for (EntityIndex t : targets)
            if (!produced[t]) ok = false;
        if (ok) best = cost;
    }
    return best;
}

// Exact transport distance by recursive enumeration of saturating shipments;
// complete over the vertices of the transportation polytope.
inline Rational transport(const std::vector<Rational>& supply, const std::vector<Rational>& demand,
                          const std::vector<std::vector<Rational>>& ground) {
    std::vector<Rational> s = supply, d = demand;
    Rational best(-1);
    auto recurse = [&](auto&& self, Rational acc) -> void {
        bool any_supply = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == 0) continue;
            any_supply = true;
            for (std::size_t j = 0; j < d.size(); ++j) {
                if (d[j] == 0) continue;
                const Rational t = rational_min(s[i], d[j]);
                s[i] -= t;
                d[j] -= t;
                self(self, acc + t * ground[i][j]);
                s[i] += t;
                d[j] += t;
            }
        }
        if (!any_supply) {
            if (best < 0 || acc < best) best = acc;
        }
    };
    recurse(recurse, Rational(0));
    if (best < 0) throw Error("bad-transport", "no feasible coupling");
    return best;
}

}  // namespace oracle
}  // namespace cosm
