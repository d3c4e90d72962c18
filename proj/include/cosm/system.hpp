#pragma once

#include "cosm/cost.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace cosm {

// Domain error carrying a machine-readable code and a path into the
// offending document (or query) when one exists.
struct Error : std::runtime_error {
    Error(std::string code_, std::string message_, std::string path_ = "")
        : std::runtime_error(path_.empty() ? message_ : message_ + " at " + path_),
          code(std::move(code_)),
          message(std::move(message_)),
          path(std::move(path_)) {}
    std::string code;
    std::string message;
    std::string path;
};

using EntityId = std::string;
using OperatorId = std::string;

// Dense index of an entity within a system; assigned in declaration order.
using EntityIndex = std::size_t;
constexpr EntityIndex kNoEntity = static_cast<EntityIndex>(-1);

enum class OperatorTag { None, Filtration, GammaAlpha, GammaBeta, GammaApply };

struct OperatorDecl {
    OperatorId id;
    OperatorTag tag = OperatorTag::None;
};

struct Reaction {
    std::size_t op;                      // index into operators
    EntityIndex left;
    EntityIndex right;
    std::vector<EntityIndex> products;   // ordered, never empty
};

// (sigma_j, sigma_j*) over an operator subset. Atom costs are the recursion
// base; operator costs come from the default table unless a per-reaction or
// per-context override applies.
struct MeasureSpec {
    std::string id;
    std::vector<bool> operator_set;                    // by operator index
    std::map<EntityIndex, Cost> atom_costs;            // covers every atom
    std::map<std::size_t, Cost> op_default_costs;      // by operator index
    std::map<std::size_t, Cost> reaction_cost_overrides;  // by reaction index
    std::map<std::pair<std::size_t, EntityIndex>, Cost> context_cost_overrides;
};

struct FiltrationReport {
    bool has_filtration_operator = false;
    // Each violation: human-readable description of the deviating pair.
    std::vector<std::string> violations;
    std::size_t pairs_checked = 0;
};

// A finite, closed, immutable combinational system: every entity declared,
// every reaction explicit except the implicit zero-cost identity reactions
// x op e = x and e op x = x.
class CombinationalSystem {
public:
    std::vector<EntityId> entities;           // declaration order
    std::vector<bool> is_atom;                // by entity index
    EntityIndex identity = kNoEntity;
    std::vector<OperatorDecl> operators;
    std::vector<Reaction> reactions;
    std::vector<MeasureSpec> measures;        // index 0 is the base measure
    EntityIndex gamma_entity = kNoEntity;     // optional gamma machinery

    EntityIndex entity_index(const EntityId& id) const {
        auto it = entity_lookup_.find(id);
        if (it == entity_lookup_.end())
            throw Error("unknown-entity", "unknown entity '" + id + "'");
        return it->second;
    }
    bool has_entity(const EntityId& id) const { return entity_lookup_.count(id) > 0; }

    std::size_t operator_index(const OperatorId& id) const {
        auto it = operator_lookup_.find(id);
        if (it == operator_lookup_.end())
            throw Error("unknown-operator", "unknown operator '" + id + "'");
        return it->second;
    }
    bool has_operator(const OperatorId& id) const { return operator_lookup_.count(id) > 0; }

    std::size_t measure_index(const std::string& id) const {
        for (std::size_t j = 0; j < measures.size(); ++j)
            if (measures[j].id == id) return j;
        throw Error("unknown-measure", "unknown measure '" + id + "'");
    }

    // Reaction lookup by (op, left, right); at most one per triple.
    std::size_t find_reaction(std::size_t op, EntityIndex left, EntityIndex right) const {
        auto it = reaction_lookup_.find(std::make_tuple(op, left, right));
        return it == reaction_lookup_.end() ? kNoReaction : it->second;
    }
    static constexpr std::size_t kNoReaction = static_cast<std::size_t>(-1);

    const std::vector<std::size_t>& reactions_producing(EntityIndex x) const {
        return producers_[x];
    }
    const std::vector<std::size_t>& reactions_using(EntityIndex x) const {
        return users_[x];
    }

    // Operator cost sigma*_j(op, left, right | context); the context is an
    // entity index or kNoEntity meaning "no context" (same as identity e).
    Cost op_cost(std::size_t measure, std::size_t reaction_index,
                 EntityIndex context = kNoEntity) const {
        const MeasureSpec& m = measures[measure];
        const Reaction& r = reactions[reaction_index];
        if (!m.operator_set[r.op]) return Cost::infinity();
        if (context != kNoEntity && context != identity) {
            auto it = m.context_cost_overrides.find({reaction_index, context});
            if (it != m.context_cost_overrides.end()) return it->second;
        }
        auto it = m.reaction_cost_overrides.find(reaction_index);
        if (it != m.reaction_cost_overrides.end()) return it->second;
        auto dt = m.op_default_costs.find(r.op);
        if (dt == m.op_default_costs.end()) return Cost::infinity();
        return dt->second;
    }

    Cost atom_cost(std::size_t measure, EntityIndex atom) const {
        auto it = measures[measure].atom_costs.find(atom);
        if (it == measures[measure].atom_costs.end())
            throw Error("missing-atom-cost", "no declared cost for atom '" + entities[atom] + "'");
        return it->second;
    }

    bool op_in_measure(std::size_t measure, std::size_t op) const {
        return measures[measure].operator_set[op];
    }

    // Validates every invariant; called once after construction. Throws Error
    // with a path into the (conceptual) document on the first violation.
    void validate() const {
        if (identity == kNoEntity) throw Error("missing-identity", "no identity entity", "/identity");
        if (entities[identity] != "e")
            throw Error("identity-id", "the identity entity must have the reserved id 'e'", "/identity");
        if (is_atom[identity])
            throw Error("identity-atom", "identity e cannot be an atom", "/atoms");
        for (std::size_t i = 0; i < reactions.size(); ++i) {
            const Reaction& r = reactions[i];
            const std::string where = "/reactions/" + std::to_string(i);
            if (r.products.empty())
                throw Error("empty-products", "reaction has no products", where + "/products");
            if (r.left == identity || r.right == identity)
                throw Error("identity-in-reaction",
                            "identity e appears as an operand of an explicit reaction "
                            "(identity reactions are implicit)",
                            where);
            const bool filtration = operators[r.op].tag == OperatorTag::Filtration;
            for (std::size_t p = 0; p < r.products.size(); ++p) {
                const std::string ppath = where + "/products/" + std::to_string(p);
                if (!filtration && is_atom[r.products[p]])
                    throw Error("atom-producible",
                                "atom '" + entities[r.products[p]] + "' appears as a product", ppath);
                if (!filtration && r.products[p] == identity)
                    throw Error("identity-in-reaction",
                                "identity e appears as a product of a non-filtration reaction", ppath);
            }
        }
        if (measures.empty()) throw Error("no-measures", "at least one measure required", "/measures");
        for (std::size_t j = 0; j < measures.size(); ++j) {
            const MeasureSpec& m = measures[j];
            const std::string where = "/measures/" + std::to_string(j);
            for (EntityIndex a = 0; a < entities.size(); ++a) {
                if (is_atom[a] && m.atom_costs.find(a) == m.atom_costs.end())
                    throw Error("missing-atom-cost",
                                "measure '" + m.id + "' declares no cost for atom '" + entities[a] + "'",
                                where + "/atom_costs");
            }
            for (std::size_t op = 0; op < operators.size(); ++op) {
                if (m.operator_set[op] && m.op_default_costs.find(op) == m.op_default_costs.end())
                    throw Error("missing-op-cost",
                                "measure '" + m.id + "' declares no default cost for operator '" +
                                    operators[op].id + "'",
                                where + "/op_costs");
            }
            for (const auto& [key, cost] : m.context_cost_overrides) {
                if (key.second == identity)
                    throw Error("context-e-override",
                                "context cost overrides for context e are not declarable",
                                where + "/context_cost_overrides");
            }
            if (j > 0) {
                for (std::size_t op = 0; op < operators.size(); ++op) {
                    if (measures[0].operator_set[op] && !m.operator_set[op])
                        throw Error("base-measure-containment",
                                    "base measure operator set is not contained in measure '" + m.id + "'",
                                    where + "/operators");
                }
            }
        }
    }

    // Checks that the filtration-tagged operator realizes x f y = y when x=y
    // and x f y = e otherwise, over all pairs of non-identity entities.
    FiltrationReport validate_filtration() const {
        FiltrationReport report;
        std::size_t fop = static_cast<std::size_t>(-1);
        for (std::size_t op = 0; op < operators.size(); ++op)
            if (operators[op].tag == OperatorTag::Filtration) fop = op;
        if (fop == static_cast<std::size_t>(-1)) return report;
        report.has_filtration_operator = true;
        for (EntityIndex x = 0; x < entities.size(); ++x) {
            if (x == identity) continue;
            for (EntityIndex y = 0; y < entities.size(); ++y) {
                if (y == identity) continue;
                ++report.pairs_checked;
                const std::size_t r = find_reaction(fop, x, y);
                if (r == kNoReaction) {
                    report.violations.push_back("incomplete filtration: missing (" + entities[x] +
                                                "," + entities[y] + ")");
                    continue;
                }
                const EntityIndex expected = (x == y) ? y : identity;
                const auto& products = reactions[r].products;
                if (products.size() != 1 || products[0] != expected) {
                    report.violations.push_back("wrong filtration product for (" + entities[x] + "," +
                                                entities[y] + "): expected " + entities[expected]);
                }
            }
        }
        return report;
    }

    // Rebuilds the lookup tables; must be called after the public fields are
    // populated and before any query.
    void index() {
        entity_lookup_.clear();
        for (EntityIndex i = 0; i < entities.size(); ++i) {
            if (!entity_lookup_.emplace(entities[i], i).second)
                throw Error("duplicate-id", "duplicate entity id '" + entities[i] + "'",
                            "/entities/" + std::to_string(i));
        }
        operator_lookup_.clear();
        for (std::size_t i = 0; i < operators.size(); ++i) {
            if (!operator_lookup_.emplace(operators[i].id, i).second)
                throw Error("duplicate-id", "duplicate operator id '" + operators[i].id + "'",
                            "/operators/" + std::to_string(i));
        }
        reaction_lookup_.clear();
        producers_.assign(entities.size(), {});
        users_.assign(entities.size(), {});
        for (std::size_t i = 0; i < reactions.size(); ++i) {
            const Reaction& r = reactions[i];
            auto key = std::make_tuple(r.op, r.left, r.right);
            if (!reaction_lookup_.emplace(key, i).second)
                throw Error("duplicate-reaction",
                            "more than one reaction for (" + operators[r.op].id + "," +
                                entities[r.left] + "," + entities[r.right] + ")",
                            "/reactions/" + std::to_string(i));
            for (EntityIndex p : r.products) producers_[p].push_back(i);
            users_[r.left].push_back(i);
            if (r.right != r.left) users_[r.right].push_back(i);
        }
    }

private:
    std::map<EntityId, EntityIndex> entity_lookup_;
    std::map<OperatorId, std::size_t> operator_lookup_;
    std::map<std::tuple<std::size_t, EntityIndex, EntityIndex>, std::size_t> reaction_lookup_;
    std::vector<std::vector<std::size_t>> producers_;
    std::vector<std::vector<std::size_t>> users_;
};

}  // namespace cosm
