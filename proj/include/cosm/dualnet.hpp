#pragma once

#include "cosm/metric.hpp"

#include <map>
#include <optional>
#include <vector>

namespace cosm {

// One candidate decomposition scored jointly: pattern intensities toward the
// target and proximity k/(k+d) of its output to the target per metric.
struct LossyMember {
    std::size_t reaction = 0;
    std::size_t product = 0;  // output = reactions[reaction].products[product]
    EntityIndex output = kNoEntity;
    std::vector<Intensity> intensity_objectives;
    std::vector<Rational> proximity_objectives;
};

struct LossyFrontier {
    EntityIndex target = kNoEntity;
    EntityIndex context = kNoEntity;
    Rational personality;  // k
    std::vector<LossyMember> members;
    bool empty_objectives = false;  // no record had fully-defined objectives
};

namespace detail {

inline bool lossy_dominates(const LossyMember& a, const LossyMember& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.intensity_objectives.size(); ++i) {
        if (!intensity_ge(a.intensity_objectives[i], b.intensity_objectives[i])) return false;
        if (!intensity_eq(a.intensity_objectives[i], b.intensity_objectives[i])) strict = true;
    }
    for (std::size_t i = 0; i < a.proximity_objectives.size(); ++i) {
        if (a.proximity_objectives[i] < b.proximity_objectives[i]) return false;
        if (a.proximity_objectives[i] != b.proximity_objectives[i]) strict = true;
    }
    return strict;
}

}  // namespace detail

// Every reaction-product pair in the system is a candidate (outputs need not
// equal the target; distant outputs are dominated away by the proximity
// objectives). Maximization Pareto frontier over the joint objective vector.
inline LossyFrontier lossy_frontier(const CombinationalSystem& sys, const SimplicityEngine& engine,
                                    EntityIndex x, EntityIndex context, const Rational& k,
                                    const std::vector<const MetricTable*>& metrics,
                                    DenominatorMode mode = DenominatorMode::PerMeasure) {
    if (!(k > 0)) throw Error("bad-params", "personality parameter k must be positive");
    LossyFrontier frontier;
    frontier.target = x;
    frontier.context = context;
    frontier.personality = k;

    std::vector<LossyMember> records;
    for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
        const Reaction& rx = sys.reactions[r];
        std::vector<Intensity> intensities;
        bool undefined = false;
        {
            const Cost base_cost = engine.relative_simplicity(0, x, context);
            for (std::size_t j = 1; j < sys.measures.size(); ++j) {
                const Cost h =
                    detail::h_cost(sys, engine, 0, j, rx.left, rx.right, r, context);
                const Cost denom = mode == DenominatorMode::PerMeasure
                                       ? engine.relative_simplicity(j, x, context)
                                       : base_cost;
                Intensity coord = base_cost.is_finite() ? detail::intensity_from(base_cost, h, denom)
                                                        : Intensity::undefined();
                if (coord.is_undefined()) undefined = true;
                intensities.push_back(std::move(coord));
            }
        }
        if (undefined) continue;
        for (std::size_t p = 0; p < rx.products.size(); ++p) {
            LossyMember member;
            member.reaction = r;
            member.product = p;
            member.output = rx.products[p];
            member.intensity_objectives = intensities;
            for (const MetricTable* table : metrics) {
                if (member.output >= table->size() || x >= table->size())
                    throw Error("missing-ground", "metric does not cover a reaction output");
                member.proximity_objectives.push_back(k / (k + table->d[member.output][x]));
            }
            records.push_back(std::move(member));
        }
    }
    if (records.empty()) {
        frontier.empty_objectives = true;
        return frontier;
    }
    std::vector<LossyMember> keep;
    for (const auto& cand : records) {
        bool dominated = false;
        for (const auto& existing : keep) {
            if (detail::lossy_dominates(existing, cand)) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        std::erase_if(keep, [&](const LossyMember& e) { return detail::lossy_dominates(cand, e); });
        keep.push_back(cand);
    }
    frontier.members = std::move(keep);
    return frontier;
}

// Membership polarity for the fuzzy intension. Similarity (default): 1 minus
// distance to the closest frontier output, floored at 0. RawDistance: the
// distance itself, kept available because the source text reads both ways.
enum class MembershipPolarity { Similarity, RawDistance };

struct FuzzySet {
    // Keyed by (reaction, product); missing keys carry membership 0.
    std::map<std::pair<std::size_t, std::size_t>, Rational> membership;
    bool empty_frontier = false;
};

inline FuzzySet lmi_intension(const CombinationalSystem& sys, const LossyFrontier& frontier,
                              const MetricTable& base,
                              MembershipPolarity polarity = MembershipPolarity::Similarity) {
    FuzzySet out;
    if (frontier.members.empty()) {
        out.empty_frontier = true;
        return out;
    }
    for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
        const Reaction& rx = sys.reactions[r];
        for (std::size_t p = 0; p < rx.products.size(); ++p) {
            const EntityIndex output = rx.products[p];
            std::optional<Rational> nearest;
            for (const auto& f : frontier.members) {
                const Rational d = base.d[output][f.output];
                if (!nearest || d < *nearest) nearest = d;
            }
            Rational value = polarity == MembershipPolarity::Similarity
                                 ? rational_max(Rational(0), Rational(1) - *nearest)
                                 : *nearest;
            if (value != 0) out.membership[{r, p}] = std::move(value);
        }
    }
    return out;
}

// Fuzzy Tanimoto distance between fuzzy sets: 1 - sum(min)/sum(max), 0/0 -> 0.
inline Rational fuzzy_tanimoto(const FuzzySet& a, const FuzzySet& b) {
    Rational mins(0), maxs(0);
    auto ia = a.membership.begin();
    auto ib = b.membership.begin();
    while (ia != a.membership.end() || ib != b.membership.end()) {
        if (ib == b.membership.end() || (ia != a.membership.end() && ia->first < ib->first)) {
            maxs += ia->second;
            ++ia;
        } else if (ia == a.membership.end() || ib->first < ia->first) {
            maxs += ib->second;
            ++ib;
        } else {
            mins += rational_min(ia->second, ib->second);
            maxs += rational_max(ia->second, ib->second);
            ++ia;
            ++ib;
        }
    }
    if (maxs == 0) return Rational(0);
    return Rational(1) - mins / maxs;
}

struct LmiOptions {
    Rational k = Rational(1);
    DenominatorMode denominator = DenominatorMode::PerMeasure;
    MembershipPolarity polarity = MembershipPolarity::Similarity;
};

struct LmiResult {
    MetricTable table;                   // d_LMI
    std::vector<FuzzySet> intensions;    // per entity
    std::vector<LossyFrontier> frontiers;
};

// d_LMI over all entities given the metric vector (proximity objectives) and
// the base metric (memberships).
inline LmiResult lmi_distance(const CombinationalSystem& sys, const SimplicityEngine& engine,
                              const std::vector<const MetricTable*>& metrics,
                              const MetricTable& base, const LmiOptions& options = {}) {
    const std::size_t n = sys.entities.size();
    LmiResult result;
    result.table = zero_table(n, "lmi");
    for (EntityIndex x = 0; x < n; ++x) {
        result.frontiers.push_back(lossy_frontier(sys, engine, x, kNoEntity, options.k, metrics,
                                                  options.denominator));
        result.intensions.push_back(
            lmi_intension(sys, result.frontiers.back(), base, options.polarity));
    }
    for (EntityIndex x = 0; x < n; ++x)
        for (EntityIndex y = x + 1; y < n; ++y) {
            const Rational d = fuzzy_tanimoto(result.intensions[x], result.intensions[y]);
            result.table.d[x][y] = result.table.d[y][x] = d;
        }
    return result;
}

// 1 - integral(|a-b|)/integral(max(a,b)) under the pair measure m; uniform
// over ordered off-diagonal pairs by default (the diagonal is identically
// zero in both tables and would only inflate the degree).
inline Rational coherence_degree(const MetricTable& a, const MetricTable& b,
                                 const std::vector<std::vector<Rational>>* weights = nullptr) {
    if (a.size() != b.size()) throw Error("bad-params", "coherence tables differ in size");
    Rational num(0), den(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (i == j && weights == nullptr) continue;
            const Rational w = weights ? (*weights)[i][j] : Rational(1);
            num += w * rational_abs(a.d[i][j] - b.d[i][j]);
            den += w * rational_max(a.d[i][j], b.d[i][j]);
        }
    }
    if (den == 0) return Rational(1);
    return Rational(1) - num / den;
}

struct CoherenceStep {
    Rational degree;
    Rational sup_change;
};

struct CoherenceReport {
    std::vector<CoherenceStep> trajectory;
    bool converged = false;
    Rational final_degree = Rational(1);
    MetricTable final_lmi;
    MetricTable residual;  // |d_LMI - d_I| per pair at the last step
};

// Iterates d_I -> d_LMI from the Tanimoto intensional metric, with d_E frozen
// and the membership metric alpha*d_I + (1-alpha)*d_E recomputed each step.
// Convergence is observed and reported, never assumed.
inline CoherenceReport fixed_point_iteration(const CombinationalSystem& sys,
                                             const SimplicityEngine& engine, const Rational& alpha,
                                             std::size_t max_iterations, const Rational& tolerance,
                                             const LmiOptions& options = {}) {
    if (max_iterations < 1) throw Error("bad-params", "at least one iteration required");
    if (tolerance < 0) throw Error("bad-params", "tolerance must be nonnegative");
    const SubpatternGraph graph = build_subpattern_graph(sys, engine);
    const TanimotoMetrics tm = tanimoto_metrics(graph, alpha);
    MetricTable d_i = tm.intensional;
    const MetricTable& d_e = tm.extensional;
    const std::size_t n = sys.entities.size();

    CoherenceReport report;
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        MetricTable base = zero_table(n, "composite");
        base.alpha = alpha;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                base.d[i][j] = alpha * d_i.d[i][j] + (Rational(1) - alpha) * d_e.d[i][j];
        const std::vector<const MetricTable*> metric_vec{&d_i, &d_e};
        LmiResult lmi = lmi_distance(sys, engine, metric_vec, base, options);

        CoherenceStep step;
        step.degree = coherence_degree(lmi.table, d_i);
        Rational sup(0);
        MetricTable residual = zero_table(n, "residual");
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                residual.d[i][j] = rational_abs(lmi.table.d[i][j] - d_i.d[i][j]);
                sup = rational_max(sup, residual.d[i][j]);
            }
        }
        step.sup_change = sup;
        report.trajectory.push_back(step);
        report.final_degree = step.degree;
        report.final_lmi = lmi.table;
        report.residual = residual;
        d_i = lmi.table;
        if (sup <= tolerance) {
            report.converged = true;
            break;
        }
    }
    return report;
}

}  // namespace cosm
