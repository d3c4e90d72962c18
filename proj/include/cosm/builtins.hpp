#pragma once

#include "cosm/system.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace cosm {

// Incremental construction helper; build() indexes and validates.
class SystemBuilder {
public:
    EntityIndex entity(const EntityId& id, bool atom = false) {
        auto it = lookup_.find(id);
        if (it != lookup_.end()) return it->second;
        sys_.entities.push_back(id);
        sys_.is_atom.push_back(atom);
        const EntityIndex idx = sys_.entities.size() - 1;
        lookup_[id] = idx;
        if (id == "e") sys_.identity = idx;
        return idx;
    }
    std::size_t op(const OperatorId& id, OperatorTag tag = OperatorTag::None) {
        sys_.operators.push_back({id, tag});
        return sys_.operators.size() - 1;
    }
    std::size_t reaction(std::size_t op, EntityIndex left, EntityIndex right,
                         std::vector<EntityIndex> products) {
        sys_.reactions.push_back({op, left, right, std::move(products)});
        return sys_.reactions.size() - 1;
    }
    std::size_t measure(const std::string& id, const std::vector<std::size_t>& ops) {
        MeasureSpec m;
        m.id = id;
        m.operator_set.assign(sys_.operators.size(), false);
        for (std::size_t o : ops) m.operator_set[o] = true;
        sys_.measures.push_back(std::move(m));
        return sys_.measures.size() - 1;
    }
    void atom_cost(std::size_t measure, EntityIndex atom, Cost c) {
        sys_.measures[measure].atom_costs[atom] = std::move(c);
    }
    void op_cost(std::size_t measure, std::size_t op, Cost c) {
        sys_.measures[measure].op_default_costs[op] = std::move(c);
    }
    void reaction_override(std::size_t measure, std::size_t reaction, Cost c) {
        sys_.measures[measure].reaction_cost_overrides[reaction] = std::move(c);
    }
    void context_override(std::size_t measure, std::size_t reaction, EntityIndex ctx, Cost c) {
        sys_.measures[measure].context_cost_overrides[{reaction, ctx}] = std::move(c);
    }
    void gamma_entity(EntityIndex g) { sys_.gamma_entity = g; }

    CombinationalSystem build() {
        CombinationalSystem out = std::move(sys_);
        // Operator sets may have been sized before later op() calls.
        for (auto& m : out.measures) m.operator_set.resize(out.operators.size(), false);
        out.index();
        out.validate();
        return out;
    }

private:
    CombinationalSystem sys_;
    std::map<EntityId, EntityIndex> lookup_;
};

struct StringConcatParams {
    std::string alphabet = "ab";
    std::size_t max_length = 4;
    Cost atom_cost = Cost(Rational(1));
    Cost op_cost = Cost(Rational(1));
    // perturbed-concat only: per-reaction jitter on the second measure's
    // costs, each within +/- amplitude/2 (quantized to amplitude/16 steps).
    Rational amplitude = Rational(0);
    std::uint64_t seed = 0;
    std::size_t entity_cap = 4096;
};

namespace detail {

inline std::vector<std::string> strings_up_to(const std::string& alphabet, std::size_t max_length,
                                              std::size_t cap) {
    std::vector<std::string> out;
    std::vector<std::string> layer{""};
    for (std::size_t len = 1; len <= max_length; ++len) {
        std::vector<std::string> next;
        for (const auto& s : layer)
            for (char c : alphabet) next.push_back(s + c);
        for (const auto& s : next) {
            out.push_back(s);
            if (out.size() > cap) throw Error("entity-cap", "generated universe exceeds the entity cap");
        }
        layer = std::move(next);
    }
    return out;
}

}  // namespace detail

// Strings up to max_length over the alphabet under one associative
// concatenation operator, flat costs, two identical measures. Exactly
// associative and cost-associative with defect 0.
inline CombinationalSystem generate_string_concat(const StringConcatParams& params) {
    if (params.alphabet.empty() || params.max_length == 0)
        throw Error("bad-params", "alphabet and max length must be non-empty");
    if (params.amplitude < 0) throw Error("bad-params", "amplitude must be nonnegative");
    if (params.amplitude > 0 && !params.op_cost.is_finite())
        throw Error("bad-params", "perturbation needs a finite op cost");
    if (params.amplitude > 0 && params.op_cost.value() < params.amplitude / 2)
        throw Error("bad-params", "amplitude too large for the op cost");

    SystemBuilder b;
    b.entity("e");
    const auto strings = detail::strings_up_to(params.alphabet, params.max_length, params.entity_cap);
    for (const auto& s : strings) b.entity(s, s.size() == 1);
    const std::size_t cat = b.op("cat");
    std::vector<std::size_t> reactions;
    for (const auto& s : strings) {
        for (const auto& t : strings) {
            if (s.size() + t.size() > params.max_length) continue;
            reactions.push_back(b.reaction(cat, b.entity(s), b.entity(t), {b.entity(s + t)}));
        }
    }
    for (const char* id : {"m1", "m2"}) {
        const std::size_t j = b.measure(id, {cat});
        for (const auto& s : strings)
            if (s.size() == 1) b.atom_cost(j, b.entity(s), params.atom_cost);
        b.op_cost(j, cat, params.op_cost);
    }
    if (params.amplitude > 0) {
        std::mt19937_64 gen(params.seed);
        for (std::size_t r : reactions) {
            // k in [-8, 8]; delta = k * amplitude / 16, so |delta| <= amplitude/2.
            const int k = static_cast<int>(gen() % 17) - 8;
            const Rational delta = params.amplitude * k / 16;
            b.reaction_override(1, r, Cost(params.op_cost.value() + delta));
        }
    }
    return b.build();
}

inline CombinationalSystem generate_perturbed_concat(const StringConcatParams& params) {
    return generate_string_concat(params);
}

struct GammaParams {
    std::size_t max_leaves = 4;   // plain application trees up to this many leaves
    Cost atom_cost = Cost(Rational(1));
    Cost apply_cost_base = Cost(Rational(1));
    Cost apply_cost_extended = Cost(Rational(1, 2));
    Cost gamma_cost = Cost(Rational(0));
    Cost gamma_op_cost = Cost(Rational(0));
    std::size_t entity_cap = 4096;
};

namespace detail {

// Plain binary application trees over one atom, named in prefix code:
// leaf "a", node "p"+left+right. Returned grouped by leaf count (1-based).
inline std::vector<std::vector<std::string>> gamma_trees(std::size_t max_leaves, std::size_t cap) {
    std::vector<std::vector<std::string>> by_leaves(max_leaves + 1);
    std::size_t total = 0;
    if (max_leaves >= 1) by_leaves[1] = {"a"};
    for (std::size_t n = 2; n <= max_leaves; ++n) {
        for (std::size_t l = 1; l < n; ++l) {
            for (const auto& left : by_leaves[l])
                for (const auto& right : by_leaves[n - l]) {
                    by_leaves[n].push_back("p" + left + right);
                    if (++total > cap)
                        throw Error("entity-cap", "generated universe exceeds the entity cap");
                }
        }
    }
    return by_leaves;
}

}  // namespace detail

// A non-associative application system plus the rebracketing machinery:
// gamma-loaded entities l<w> = alpha(G, w), h<w><v> = beta(l<w>, v), and the
// law ap(x, h<w><v>) = ap(ap(x, w), v) realized by the reaction table. The
// operand space is closed: hooked entities are themselves liftable within the
// leaf cap, so every two-step chain has its own rebracketing witness.
inline CombinationalSystem generate_gamma_system(const GammaParams& params) {
    if (params.max_leaves < 3)
        throw Error("bad-params", "gamma systems need at least 3 leaves of room");
    const std::size_t cap = params.max_leaves;

    // Right-operand universe: plain trees and hooked entities, by leaf footprint.
    struct Operand {
        std::string name;
        std::size_t footprint;
        bool plain;
        std::size_t w = 0, v = 0;  // components when hooked
    };
    std::vector<Operand> operands;
    std::vector<std::vector<std::size_t>> by_fp(cap);  // operand indices, footprint 1..cap-1
    const auto trees = detail::gamma_trees(cap, params.entity_cap);
    for (std::size_t f = 1; f < cap; ++f) {
        for (const auto& t : trees[f]) {
            operands.push_back({t, f, true});
            by_fp[f].push_back(operands.size() - 1);
        }
        if (f >= 2) {
            for (std::size_t fw = 1; fw < f; ++fw) {
                // Snapshot: operands of footprint < f are already complete.
                const auto ws = by_fp[fw];
                const auto vs = by_fp[f - fw];
                for (std::size_t wi : ws) {
                    for (std::size_t vi : vs) {
                        operands.push_back(
                            {"h" + operands[wi].name + operands[vi].name, f, false, wi, vi});
                        by_fp[f].push_back(operands.size() - 1);
                        if (operands.size() > params.entity_cap)
                            throw Error("entity-cap", "generated universe exceeds the entity cap");
                    }
                }
            }
        }
    }

    // eval(x, o): the plain tree ap(x, o) reduces to.
    auto eval = [&](auto&& self, const std::string& x, std::size_t oi) -> std::string {
        const Operand& o = operands[oi];
        if (o.plain) return "p" + x + o.name;
        return self(self, self(self, x, o.w), o.v);
    };

    SystemBuilder b;
    b.entity("e");
    const EntityIndex gamma = b.entity("G", true);
    for (std::size_t n = 1; n < trees.size(); ++n)
        for (const auto& t : trees[n]) b.entity(t, n == 1);
    for (const auto& o : operands)
        if (!o.plain) b.entity(o.name);
    const std::size_t ap = b.op("ap", OperatorTag::GammaApply);
    const std::size_t alpha = b.op("alpha", OperatorTag::GammaAlpha);
    const std::size_t beta = b.op("beta", OperatorTag::GammaBeta);

    // Application: plain left operand, any operand on the right.
    for (std::size_t nx = 1; nx < trees.size(); ++nx) {
        for (const auto& x : trees[nx]) {
            for (std::size_t f = 1; nx + f <= cap && f < cap; ++f) {
                for (std::size_t oi : by_fp[f]) {
                    const std::string result = eval(eval, x, oi);
                    b.reaction(ap, b.entity(x), b.entity(operands[oi].name), {b.entity(result)});
                }
            }
        }
    }
    // Lifting: l<w> for every operand that can still take a partner and an
    // applicand; h<w><v> per generated pair.
    std::vector<EntityIndex> lifted(operands.size(), kNoEntity);
    for (std::size_t oi = 0; oi < operands.size(); ++oi) {
        if (operands[oi].footprint <= cap - 2) {
            lifted[oi] = b.entity("l" + operands[oi].name);
            b.reaction(alpha, gamma, b.entity(operands[oi].name), {lifted[oi]});
        }
    }
    for (const auto& o : operands) {
        if (o.plain) continue;
        b.reaction(beta, lifted[o.w], b.entity(operands[o.v].name), {b.entity(o.name)});
    }

    for (const char* id : {"m1", "m2"}) {
        const std::size_t j = b.measure(id, {ap, alpha, beta});
        b.atom_cost(j, b.entity("a"), params.atom_cost);
        b.atom_cost(j, gamma, params.gamma_cost);
        b.op_cost(j, ap, std::string(id) == "m1" ? params.apply_cost_base : params.apply_cost_extended);
        b.op_cost(j, alpha, params.gamma_op_cost);
        b.op_cost(j, beta, params.gamma_op_cost);
    }
    b.gamma_entity(gamma);
    return b.build();
}

// Six entities over one concatenation operator; the smallest fixture with a
// two-way derivation choice (aba via ab+a or a+ba).
inline CombinationalSystem make_toy1() {
    SystemBuilder b;
    b.entity("e");
    const EntityIndex a = b.entity("a", true);
    const EntityIndex bb = b.entity("b", true);
    const EntityIndex ab = b.entity("ab");
    const EntityIndex ba = b.entity("ba");
    const EntityIndex aba = b.entity("aba");
    const std::size_t cat = b.op("cat");
    b.reaction(cat, a, bb, {ab});
    b.reaction(cat, bb, a, {ba});
    b.reaction(cat, ab, a, {aba});
    b.reaction(cat, a, ba, {aba});
    const std::size_t m1 = b.measure("m1", {cat});
    b.atom_cost(m1, a, Cost(Rational(1)));
    b.atom_cost(m1, bb, Cost(Rational(1)));
    b.op_cost(m1, cat, Cost(Rational(1)));
    return b.build();
}

// Two measures trading off cat (1 vs 2) against sq (3 vs 1); aaaa has a
// two-point Pareto bundle.
inline CombinationalSystem make_toy2() {
    SystemBuilder b;
    b.entity("e");
    const EntityIndex a = b.entity("a", true);
    const EntityIndex bb = b.entity("b", true);
    const EntityIndex aa = b.entity("aa");
    const EntityIndex ab = b.entity("ab");
    const EntityIndex aaa = b.entity("aaa");
    const EntityIndex aaaa = b.entity("aaaa");
    const std::size_t cat = b.op("cat");
    const std::size_t sq = b.op("sq");
    b.reaction(cat, a, a, {aa});
    b.reaction(cat, a, bb, {ab});
    b.reaction(cat, a, aa, {aaa});
    b.reaction(cat, aa, a, {aaa});
    b.reaction(cat, a, aaa, {aaaa});
    b.reaction(cat, aaa, a, {aaaa});
    b.reaction(cat, aa, aa, {aaaa});
    b.reaction(sq, aa, aa, {aaaa});
    const std::size_t m1 = b.measure("m1", {cat, sq});
    const std::size_t m2 = b.measure("m2", {cat, sq});
    for (std::size_t j : {m1, m2}) {
        b.atom_cost(j, a, Cost(Rational(1)));
        b.atom_cost(j, bb, Cost(Rational(1)));
    }
    b.op_cost(m1, cat, Cost(Rational(1)));
    b.op_cost(m1, sq, Cost(Rational(3)));
    b.op_cost(m2, cat, Cost(Rational(2)));
    b.op_cost(m2, sq, Cost(Rational(1)));
    return b.build();
}

// Unary-alphabet strings up to a^16: the base measure builds literally by
// concatenation, the extended measure adds a half-price squaring operator.
inline CombinationalSystem make_str1() {
    constexpr std::size_t kMaxLength = 16;
    SystemBuilder b;
    b.entity("e");
    auto name = [](std::size_t n) { return std::string(n, 'a'); };
    for (std::size_t n = 1; n <= kMaxLength; ++n) b.entity(name(n), n == 1);
    const std::size_t cat = b.op("cat");
    const std::size_t sq = b.op("sq");
    for (std::size_t i = 1; i < kMaxLength; ++i)
        for (std::size_t j = 1; i + j <= kMaxLength; ++j)
            b.reaction(cat, b.entity(name(i)), b.entity(name(j)), {b.entity(name(i + j))});
    for (std::size_t i = 1; 2 * i <= kMaxLength; ++i)
        b.reaction(sq, b.entity(name(i)), b.entity(name(i)), {b.entity(name(2 * i))});
    const std::size_t m1 = b.measure("m1", {cat});
    const std::size_t m2 = b.measure("m2", {cat, sq});
    for (std::size_t j : {m1, m2}) {
        b.atom_cost(j, b.entity("a"), Cost(Rational(1)));
        b.op_cost(j, cat, Cost(Rational(1)));
    }
    b.op_cost(m2, sq, Cost(Rational(1, 2)));
    return b.build();
}

inline CombinationalSystem make_gamma_fixture() { return generate_gamma_system(GammaParams{}); }

}  // namespace cosm
