#pragma once

#include "cosm/system.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace cosm {

using Json = nlohmann::json;

inline Json cost_to_json(const Cost& c) {
    if (c.is_infinite()) return Json("inf");
    const Rational& v = c.value();
    if (denominator(v) == 1 && numerator(v) >= 0 && numerator(v) <= 1000000000)
        return Json(static_cast<std::int64_t>(numerator(v)));
    return Json(to_string(v));
}

inline Cost cost_from_json(const Json& j, const std::string& path) {
    if (j.is_number_integer() || j.is_number_unsigned()) {
        const std::int64_t v = j.get<std::int64_t>();
        if (v < 0) throw Error("negative-cost", "cost must be nonnegative", path);
        return Cost(Rational(v));
    }
    if (j.is_string()) {
        auto c = Cost::parse(j.get<std::string>());
        if (!c) throw Error("bad-cost", "cannot parse cost '" + j.get<std::string>() + "'", path);
        return *c;
    }
    throw Error("bad-cost", "cost must be an integer or a 'p/q' string", path);
}

namespace detail {

inline const Json& require(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        throw Error("schema", std::string("missing key '") + key + "'", path);
    return j.at(key);
}

inline std::string tag_name(OperatorTag t) {
    switch (t) {
        case OperatorTag::Filtration: return "filtration";
        case OperatorTag::GammaAlpha: return "gamma-alpha";
        case OperatorTag::GammaBeta: return "gamma-beta";
        case OperatorTag::GammaApply: return "gamma-apply";
        default: return "";
    }
}

inline OperatorTag tag_from_name(const std::string& s, const std::string& path) {
    if (s == "filtration") return OperatorTag::Filtration;
    if (s == "gamma-alpha") return OperatorTag::GammaAlpha;
    if (s == "gamma-beta") return OperatorTag::GammaBeta;
    if (s == "gamma-apply") return OperatorTag::GammaApply;
    throw Error("schema", "unknown operator tag '" + s + "'", path);
}

}  // namespace detail

// Parses, indexes and validates a system document. Every failure is an Error
// whose path points into the document.
inline CombinationalSystem load_system_json(const Json& doc) {
    if (!doc.is_object()) throw Error("schema", "system document must be a JSON object", "/");
    CombinationalSystem sys;

    const Json& ents = detail::require(doc, "entities", "/");
    if (!ents.is_array() || ents.empty())
        throw Error("schema", "'entities' must be a non-empty array", "/entities");
    for (std::size_t i = 0; i < ents.size(); ++i) {
        if (!ents[i].is_string() || ents[i].get<std::string>().empty())
            throw Error("schema", "entity ids must be non-empty strings", "/entities/" + std::to_string(i));
        const std::string id = ents[i].get<std::string>();
        if (id.find_first_of(" \t\n\r(),#:") != std::string::npos)
            throw Error("schema", "entity id '" + id + "' contains reserved characters",
                        "/entities/" + std::to_string(i));
        sys.entities.push_back(id);
    }
    sys.is_atom.assign(sys.entities.size(), false);

    const Json& ops = detail::require(doc, "operators", "/");
    if (!ops.is_array() || ops.empty())
        throw Error("schema", "'operators' must be a non-empty array", "/operators");
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const std::string path = "/operators/" + std::to_string(i);
        OperatorDecl decl;
        if (ops[i].is_string()) {
            decl.id = ops[i].get<std::string>();
        } else if (ops[i].is_object()) {
            decl.id = detail::require(ops[i], "id", path).get<std::string>();
            if (ops[i].contains("tag"))
                decl.tag = detail::tag_from_name(ops[i].at("tag").get<std::string>(), path);
        } else {
            throw Error("schema", "operator entries must be strings or {id,tag} objects", path);
        }
        if (decl.id.empty() || decl.id.find_first_of(" \t\n\r(),#:") != std::string::npos)
            throw Error("schema", "operator id '" + decl.id + "' is empty or reserved", path);
        sys.operators.push_back(decl);
    }

    sys.index();  // entity/operator lookup needed below; reactions indexed again later

    const Json& identity = detail::require(doc, "identity", "/");
    if (!identity.is_string() || !sys.has_entity(identity.get<std::string>()))
        throw Error("schema", "'identity' must name a declared entity", "/identity");
    sys.identity = sys.entity_index(identity.get<std::string>());

    const Json& atoms = detail::require(doc, "atoms", "/");
    if (!atoms.is_array()) throw Error("schema", "'atoms' must be an array", "/atoms");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const std::string path = "/atoms/" + std::to_string(i);
        if (!atoms[i].is_string() || !sys.has_entity(atoms[i].get<std::string>()))
            throw Error("schema", "atom must name a declared entity", path);
        sys.is_atom[sys.entity_index(atoms[i].get<std::string>())] = true;
    }

    const Json& reactions = detail::require(doc, "reactions", "/");
    if (!reactions.is_array()) throw Error("schema", "'reactions' must be an array", "/reactions");
    for (std::size_t i = 0; i < reactions.size(); ++i) {
        const std::string path = "/reactions/" + std::to_string(i);
        const Json& r = reactions[i];
        Reaction out;
        const std::string op = detail::require(r, "op", path).get<std::string>();
        if (!sys.has_operator(op)) throw Error("schema", "unknown operator '" + op + "'", path + "/op");
        out.op = sys.operator_index(op);
        for (const char* side : {"left", "right"}) {
            const std::string id = detail::require(r, side, path).get<std::string>();
            if (!sys.has_entity(id))
                throw Error("schema", "unknown entity '" + id + "'", path + "/" + side);
            (std::string(side) == "left" ? out.left : out.right) = sys.entity_index(id);
        }
        const Json& products = detail::require(r, "products", path);
        if (!products.is_array() || products.empty())
            throw Error("schema", "'products' must be a non-empty array", path + "/products");
        for (std::size_t p = 0; p < products.size(); ++p) {
            const std::string id = products[p].get<std::string>();
            if (!sys.has_entity(id))
                throw Error("schema", "unknown entity '" + id + "'",
                            path + "/products/" + std::to_string(p));
            out.products.push_back(sys.entity_index(id));
        }
        sys.reactions.push_back(out);
    }

    const Json& measures = detail::require(doc, "measures", "/");
    if (!measures.is_array() || measures.empty())
        throw Error("schema", "'measures' must be a non-empty array", "/measures");
    for (std::size_t j = 0; j < measures.size(); ++j) {
        const std::string path = "/measures/" + std::to_string(j);
        const Json& m = measures[j];
        MeasureSpec spec;
        spec.id = detail::require(m, "id", path).get<std::string>();
        spec.operator_set.assign(sys.operators.size(), false);
        const Json& mops = detail::require(m, "operators", path);
        for (std::size_t i = 0; i < mops.size(); ++i) {
            const std::string id = mops[i].get<std::string>();
            if (!sys.has_operator(id))
                throw Error("schema", "unknown operator '" + id + "'",
                            path + "/operators/" + std::to_string(i));
            spec.operator_set[sys.operator_index(id)] = true;
        }
        const Json& acosts = detail::require(m, "atom_costs", path);
        for (auto it = acosts.begin(); it != acosts.end(); ++it) {
            if (!sys.has_entity(it.key()))
                throw Error("schema", "unknown entity '" + it.key() + "'", path + "/atom_costs");
            spec.atom_costs[sys.entity_index(it.key())] =
                cost_from_json(it.value(), path + "/atom_costs/" + it.key());
        }
        const Json& ocosts = detail::require(m, "op_costs", path);
        for (auto it = ocosts.begin(); it != ocosts.end(); ++it) {
            if (!sys.has_operator(it.key()))
                throw Error("schema", "unknown operator '" + it.key() + "'", path + "/op_costs");
            spec.op_default_costs[sys.operator_index(it.key())] =
                cost_from_json(it.value(), path + "/op_costs/" + it.key());
        }
        if (m.contains("reaction_cost_overrides")) {
            const Json& rov = m.at("reaction_cost_overrides");
            for (std::size_t i = 0; i < rov.size(); ++i) {
                const std::string rpath = path + "/reaction_cost_overrides/" + std::to_string(i);
                const Json& o = rov[i];
                const std::size_t op = sys.operator_index(detail::require(o, "op", rpath).get<std::string>());
                const EntityIndex left = sys.entity_index(detail::require(o, "left", rpath).get<std::string>());
                const EntityIndex right = sys.entity_index(detail::require(o, "right", rpath).get<std::string>());
                std::size_t found = CombinationalSystem::kNoReaction;
                for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
                    if (sys.reactions[r].op == op && sys.reactions[r].left == left &&
                        sys.reactions[r].right == right)
                        found = r;
                }
                if (found == CombinationalSystem::kNoReaction)
                    throw Error("schema", "override names no declared reaction", rpath);
                spec.reaction_cost_overrides[found] =
                    cost_from_json(detail::require(o, "cost", rpath), rpath + "/cost");
            }
        }
        if (m.contains("context_cost_overrides")) {
            const Json& cov = m.at("context_cost_overrides");
            for (std::size_t i = 0; i < cov.size(); ++i) {
                const std::string cpath = path + "/context_cost_overrides/" + std::to_string(i);
                const Json& o = cov[i];
                const std::size_t op = sys.operator_index(detail::require(o, "op", cpath).get<std::string>());
                const EntityIndex left = sys.entity_index(detail::require(o, "left", cpath).get<std::string>());
                const EntityIndex right = sys.entity_index(detail::require(o, "right", cpath).get<std::string>());
                const EntityIndex ctx = sys.entity_index(detail::require(o, "context", cpath).get<std::string>());
                std::size_t found = CombinationalSystem::kNoReaction;
                for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
                    if (sys.reactions[r].op == op && sys.reactions[r].left == left &&
                        sys.reactions[r].right == right)
                        found = r;
                }
                if (found == CombinationalSystem::kNoReaction)
                    throw Error("schema", "override names no declared reaction", cpath);
                spec.context_cost_overrides[{found, ctx}] =
                    cost_from_json(detail::require(o, "cost", cpath), cpath + "/cost");
            }
        }
        sys.measures.push_back(std::move(spec));
    }

    if (doc.contains("gamma")) {
        const Json& g = doc.at("gamma");
        const std::string id = detail::require(g, "entity", "/gamma").get<std::string>();
        if (!sys.has_entity(id)) throw Error("schema", "unknown entity '" + id + "'", "/gamma/entity");
        sys.gamma_entity = sys.entity_index(id);
    }

    sys.index();
    sys.validate();
    return sys;
}

inline CombinationalSystem load_system(const std::string& text) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw Error("schema", "document is not valid JSON", "/");
    return load_system_json(doc);
}

// Canonical serialization: object keys sorted lexicographically, arrays in
// declaration order, rationals as integers where integral and "p/q" strings
// otherwise. Reloading the output yields an identical system.
inline Json system_to_json(const CombinationalSystem& sys) {
    Json doc = Json::object();
    doc["entities"] = Json::array();
    for (const auto& e : sys.entities) doc["entities"].push_back(e);
    doc["atoms"] = Json::array();
    for (EntityIndex i = 0; i < sys.entities.size(); ++i)
        if (sys.is_atom[i]) doc["atoms"].push_back(sys.entities[i]);
    doc["identity"] = sys.entities[sys.identity];
    doc["operators"] = Json::array();
    for (const auto& op : sys.operators) {
        if (op.tag == OperatorTag::None) {
            doc["operators"].push_back(op.id);
        } else {
            doc["operators"].push_back(Json{{"id", op.id}, {"tag", detail::tag_name(op.tag)}});
        }
    }
    doc["reactions"] = Json::array();
    for (const auto& r : sys.reactions) {
        Json jr = Json::object();
        jr["op"] = sys.operators[r.op].id;
        jr["left"] = sys.entities[r.left];
        jr["right"] = sys.entities[r.right];
        jr["products"] = Json::array();
        for (EntityIndex p : r.products) jr["products"].push_back(sys.entities[p]);
        doc["reactions"].push_back(jr);
    }
    doc["measures"] = Json::array();
    for (const auto& m : sys.measures) {
        Json jm = Json::object();
        jm["id"] = m.id;
        jm["operators"] = Json::array();
        for (std::size_t op = 0; op < sys.operators.size(); ++op)
            if (m.operator_set[op]) jm["operators"].push_back(sys.operators[op].id);
        jm["atom_costs"] = Json::object();
        for (const auto& [a, c] : m.atom_costs) jm["atom_costs"][sys.entities[a]] = cost_to_json(c);
        jm["op_costs"] = Json::object();
        for (const auto& [op, c] : m.op_default_costs)
            jm["op_costs"][sys.operators[op].id] = cost_to_json(c);
        jm["reaction_cost_overrides"] = Json::array();
        for (const auto& [r, c] : m.reaction_cost_overrides) {
            const Reaction& rx = sys.reactions[r];
            jm["reaction_cost_overrides"].push_back(Json{{"op", sys.operators[rx.op].id},
                                                         {"left", sys.entities[rx.left]},
                                                         {"right", sys.entities[rx.right]},
                                                         {"cost", cost_to_json(c)}});
        }
        jm["context_cost_overrides"] = Json::array();
        for (const auto& [key, c] : m.context_cost_overrides) {
            const Reaction& rx = sys.reactions[key.first];
            jm["context_cost_overrides"].push_back(Json{{"op", sys.operators[rx.op].id},
                                                        {"left", sys.entities[rx.left]},
                                                        {"right", sys.entities[rx.right]},
                                                        {"context", sys.entities[key.second]},
                                                        {"cost", cost_to_json(c)}});
        }
        doc["measures"].push_back(jm);
    }
    if (sys.gamma_entity != kNoEntity) {
        doc["gamma"] = Json{{"entity", sys.entities[sys.gamma_entity]}};
    }
    return doc;
}

inline std::string serialize_canonical(const CombinationalSystem& sys) {
    return system_to_json(sys).dump(2) + "\n";
}

// FNV-1a 64 over the canonical serialization; memoization key component.
inline std::string system_fingerprint(const CombinationalSystem& sys) {
    const std::string text = serialize_canonical(sys);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace cosm
