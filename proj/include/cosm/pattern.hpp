#pragma once

#include "cosm/simplicity.hpp"

#include <optional>
#include <vector>

namespace cosm {

// Intensity coordinate: an exact rational, negative infinity (the candidate
// decomposition is unreachable in the pricing measure), or undefined (the
// normalizing denominator is zero or infinite).
struct Intensity {
    enum class Kind { Value, NegInfinite, Undefined };
    Kind kind = Kind::Undefined;
    Rational value;

    static Intensity of(Rational v) { return {Kind::Value, std::move(v)}; }
    static Intensity neg_infinite() { return {Kind::NegInfinite, Rational(0)}; }
    static Intensity undefined() { return {Kind::Undefined, Rational(0)}; }

    bool is_value() const { return kind == Kind::Value; }
    bool is_undefined() const { return kind == Kind::Undefined; }
    bool positive() const { return kind == Kind::Value && value > 0; }

    std::string str() const {
        switch (kind) {
            case Kind::Value: return to_string(value);
            case Kind::NegInfinite: return "-inf";
            default: return "undefined";
        }
    }
};

// Maximization comparison; undefined coordinates never reach dominance code.
inline bool intensity_ge(const Intensity& a, const Intensity& b) {
    if (b.kind == Intensity::Kind::NegInfinite) return true;
    if (a.kind == Intensity::Kind::NegInfinite) return false;
    return a.value >= b.value;
}
inline bool intensity_eq(const Intensity& a, const Intensity& b) {
    if (a.kind != b.kind) return false;
    return a.kind != Intensity::Kind::Value || a.value == b.value;
}

enum class MultipatternClass { None, Mixed, Full };

// Exact geometric mean of n positive rationals, kept as the n-th root of
// their product (the mean itself is irrational in general).
struct GeometricMean {
    Rational radicand;
    std::size_t degree = 0;
};

// One decomposition (y,z,op) of target x in context w with its per-measure
// intensities (extended measures j >= 2, i.e. measure indices 1..).
struct PatternRecord {
    EntityIndex y = kNoEntity;
    EntityIndex z = kNoEntity;
    std::size_t op = 0;
    std::size_t reaction = CombinationalSystem::kNoReaction;  // kNoReaction: implicit identity
    std::size_t product_index = 0;
    EntityIndex target = kNoEntity;
    EntityIndex context = kNoEntity;
    std::vector<Intensity> intensities;
    MultipatternClass classification = MultipatternClass::None;
};

enum class DenominatorMode {
    PerMeasure,  // divide coordinate j by mu_j(x|w)
    Base,        // divide every coordinate by mu_1(x|w)
};

namespace detail {

// sigma_1(y|w) + sigma_1(z|w) + sigma_j*|(op,y,z|w); the operand terms use the
// base measure, the operator term the pricing measure.
inline Cost h_cost(const CombinationalSystem& sys, const SimplicityEngine& engine,
                   std::size_t base_measure, std::size_t pricing_measure, EntityIndex y,
                   EntityIndex z, std::size_t reaction, EntityIndex context) {
    const Cost sy = engine.relative_simplicity(base_measure, y, context);
    const Cost sz = engine.relative_simplicity(base_measure, z, context);
    Cost oc = Cost::zero();  // implicit identity reactions cost 0
    if (reaction != CombinationalSystem::kNoReaction)
        oc = sys.op_cost(pricing_measure, reaction, context);
    return sy + sz + oc;
}

inline Intensity intensity_from(const Cost& target_cost, const Cost& h, const Cost& denominator) {
    if (!denominator.is_finite() || denominator.is_zero()) return Intensity::undefined();
    if (!h.is_finite() || !target_cost.is_finite()) {
        // target_cost infinite makes the record meaningless; caller screens it.
        return h.is_finite() ? Intensity::undefined() : Intensity::neg_infinite();
    }
    return Intensity::of((target_cost.value() - h.value()) / denominator.value());
}

}  // namespace detail

// Resolves a queried decomposition: the explicit reaction carrying (op,y,z)
// with x among its products, or the implicit identity reactions x op e = x /
// e op x = x.
inline std::size_t resolve_decomposition(const CombinationalSystem& sys, EntityIndex y, EntityIndex z,
                                         std::size_t op, EntityIndex x) {
    if ((z == sys.identity && y == x) || (y == sys.identity && z == x))
        return CombinationalSystem::kNoReaction;
    const std::size_t r = sys.find_reaction(op, y, z);
    if (r != CombinationalSystem::kNoReaction) {
        for (EntityIndex p : sys.reactions[r].products)
            if (p == x) return r;
    }
    throw Error("no-such-decomposition", "(" + sys.operators[op].id + "," + sys.entities[y] + "," +
                                             sys.entities[z] + ") does not produce '" +
                                             sys.entities[x] + "'");
}

// Two-measure pattern intensity I = (sigma_1(x|w) - h_12(y,z|w)) / sigma_1(x|w).
// (y,z) is a pattern in x exactly when the result is positive.
inline Intensity pattern_intensity(const CombinationalSystem& sys, const SimplicityEngine& engine,
                                   EntityIndex y, EntityIndex z, std::size_t op, EntityIndex x,
                                   EntityIndex context = kNoEntity, std::size_t base_measure = 0,
                                   std::size_t extended_measure = 1) {
    if (base_measure >= sys.measures.size() || extended_measure >= sys.measures.size())
        throw Error("unknown-measure", "pattern intensity needs two configured measures");
    for (std::size_t o = 0; o < sys.operators.size(); ++o) {
        if (sys.measures[base_measure].operator_set[o] &&
            !sys.measures[extended_measure].operator_set[o])
            throw Error("base-measure-containment",
                        "base operator set not contained in the extended measure");
    }
    const std::size_t reaction = resolve_decomposition(sys, y, z, op, x);
    const Cost sx = engine.relative_simplicity(base_measure, x, context);
    if (!sx.is_finite() || sx.is_zero())
        throw Error("undefined-intensity",
                    "sigma_1(x|w) must be finite and positive for '" + sys.entities[x] + "'");
    const Cost h = detail::h_cost(sys, engine, base_measure, extended_measure, y, z, reaction, context);
    return detail::intensity_from(sx, h, sx);
}

// Pattern vector over the extended measures: coordinate j divides by the
// per-measure denominator mu_j(x|w) by default; Base mode divides by
// mu_1(x|w) instead.
inline std::vector<Intensity> pattern_vector(const CombinationalSystem& sys,
                                             const SimplicityEngine& engine, EntityIndex y,
                                             EntityIndex z, std::size_t op, EntityIndex x,
                                             EntityIndex context = kNoEntity,
                                             DenominatorMode mode = DenominatorMode::PerMeasure) {
    if (sys.measures.size() < 2)
        throw Error("unknown-measure", "pattern vectors need at least two measures");
    const std::size_t reaction = resolve_decomposition(sys, y, z, op, x);
    const Cost base_cost = engine.relative_simplicity(0, x, context);
    std::vector<Intensity> out;
    for (std::size_t j = 1; j < sys.measures.size(); ++j) {
        const Cost h = detail::h_cost(sys, engine, 0, j, y, z, reaction, context);
        const Cost denom =
            mode == DenominatorMode::PerMeasure ? engine.relative_simplicity(j, x, context) : base_cost;
        if (!base_cost.is_finite()) {
            out.push_back(Intensity::undefined());
            continue;
        }
        out.push_back(detail::intensity_from(base_cost, h, denom));
    }
    return out;
}

inline MultipatternClass classify_intensities(const std::vector<Intensity>& intensities) {
    std::size_t positive = 0;
    for (const auto& i : intensities)
        if (i.positive()) ++positive;
    if (positive == 0) return MultipatternClass::None;
    if (positive == intensities.size()) return MultipatternClass::Full;
    return MultipatternClass::Mixed;
}

// Full multipatterns additionally get the geometric mean of their coordinates,
// reported exactly as (product, root degree).
inline std::pair<MultipatternClass, std::optional<GeometricMean>> classify_multipattern(
    const std::vector<Intensity>& intensities) {
    const MultipatternClass cls = classify_intensities(intensities);
    if (cls != MultipatternClass::Full) return {cls, std::nullopt};
    GeometricMean mean;
    mean.radicand = Rational(1);
    mean.degree = intensities.size();
    for (const auto& i : intensities) mean.radicand *= i.value;
    return {cls, mean};
}

struct FrontierSet {
    std::vector<PatternRecord> records;  // mutually nondominated, canonical order
};

namespace detail {

inline bool record_dominates(const PatternRecord& a, const PatternRecord& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.intensities.size(); ++i) {
        if (!intensity_ge(a.intensities[i], b.intensities[i])) return false;
        if (!intensity_eq(a.intensities[i], b.intensities[i])) strict = true;
    }
    return strict;
}

}  // namespace detail

// Maximization Pareto filter over intensity vectors; records with any
// undefined coordinate are excluded rather than defaulted.
inline FrontierSet frontier_filter(std::vector<PatternRecord> records) {
    std::erase_if(records, [](const PatternRecord& r) {
        for (const auto& i : r.intensities)
            if (i.is_undefined()) return true;
        return false;
    });
    std::vector<PatternRecord> keep;
    for (const auto& cand : records) {
        bool dominated = false;
        for (const auto& k : keep) {
            if (detail::record_dominates(k, cand)) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        std::erase_if(keep, [&](const PatternRecord& k) { return detail::record_dominates(cand, k); });
        keep.push_back(cand);
    }
    return FrontierSet{std::move(keep)};
}

// Builds the intensity record for one explicit decomposition of x.
inline PatternRecord make_pattern_record(const CombinationalSystem& sys,
                                         const SimplicityEngine& engine, std::size_t reaction,
                                         EntityIndex x, EntityIndex context,
                                         DenominatorMode mode = DenominatorMode::PerMeasure) {
    const Reaction& rx = sys.reactions[reaction];
    PatternRecord rec;
    rec.y = rx.left;
    rec.z = rx.right;
    rec.op = rx.op;
    rec.reaction = reaction;
    for (std::size_t p = 0; p < rx.products.size(); ++p)
        if (rx.products[p] == x) rec.product_index = p;
    rec.target = x;
    rec.context = context;
    rec.intensities = pattern_vector(sys, engine, rx.left, rx.right, rx.op, x, context, mode);
    rec.classification = classify_intensities(rec.intensities);
    return rec;
}

// All decompositions of x (explicit reactions with x among products), filtered
// to the maximization Pareto frontier in intensity space. Atoms and other
// non-products yield an empty frontier.
inline FrontierSet multipattern_frontier(const CombinationalSystem& sys,
                                         const SimplicityEngine& engine, EntityIndex x,
                                         EntityIndex context = kNoEntity,
                                         DenominatorMode mode = DenominatorMode::PerMeasure) {
    std::vector<PatternRecord> records;
    for (std::size_t r : sys.reactions_producing(x))
        records.push_back(make_pattern_record(sys, engine, r, x, context, mode));
    return frontier_filter(std::move(records));
}

}  // namespace cosm
