#pragma once

#include "cosm/system.hpp"

#include <memory>
#include <string>
#include <vector>

namespace cosm {

// Canonical address of a derivation position: atoms and leaf entities use
// their id, applications use "op(leftAddr,rightAddr)#n" for the n-th product
// (1-based). Distinct positions always get distinct addresses.
inline std::string make_address(const OperatorId& op, const std::string& left,
                                const std::string& right, std::size_t product_index) {
    return op + "(" + left + "," + right + ")#" + std::to_string(product_index + 1);
}

// One operator application with addressed arguments and addressed outputs.
struct AutoOp {
    OperatorId op;
    std::string left_address;
    std::string right_address;
    std::vector<std::string> output_addresses;
};

// Expression in the free operator algebra: leaves are entities, internal
// nodes are binary operator applications with a selected product index.
struct Expression {
    struct Node {
        bool is_leaf = true;
        EntityIndex entity = kNoEntity;       // leaves
        std::size_t op = 0;                   // internal nodes
        std::size_t product_index = 0;        // 0-based; textual form is 1-based
        std::unique_ptr<Node> left, right;
    };
    std::unique_ptr<Node> root;

    static Expression leaf(EntityIndex e) {
        Expression out;
        out.root = std::make_unique<Node>();
        out.root->entity = e;
        return out;
    }
    static Expression apply(std::size_t op, Expression l, Expression r, std::size_t product_index = 0) {
        Expression out;
        out.root = std::make_unique<Node>();
        out.root->is_leaf = false;
        out.root->op = op;
        out.root->product_index = product_index;
        out.root->left = std::move(l.root);
        out.root->right = std::move(r.root);
        return out;
    }
};

namespace detail {

inline EntityIndex evaluate_node(const CombinationalSystem& sys, const Expression::Node& n) {
    if (n.is_leaf) return n.entity;
    const EntityIndex l = evaluate_node(sys, *n.left);
    const EntityIndex r = evaluate_node(sys, *n.right);
    // Implicit identity reactions: x op e = x, e op x = x, single product.
    if (r == sys.identity || l == sys.identity) {
        if (n.product_index != 0)
            throw Error("missing-reaction", "identity reactions have a single product");
        return r == sys.identity ? l : r;
    }
    const std::size_t reaction = sys.find_reaction(n.op, l, r);
    if (reaction == CombinationalSystem::kNoReaction)
        throw Error("missing-reaction", "no reaction for (" + sys.operators[n.op].id + "," +
                                            sys.entities[l] + "," + sys.entities[r] + ")");
    const auto& products = sys.reactions[reaction].products;
    if (n.product_index >= products.size())
        throw Error("bad-product-index", "reaction has only " + std::to_string(products.size()) +
                                             " products");
    return products[n.product_index];
}

inline std::string address_node(const CombinationalSystem& sys, const Expression::Node& n) {
    if (n.is_leaf) return sys.entities[n.entity];
    return make_address(sys.operators[n.op].id, address_node(sys, *n.left),
                        address_node(sys, *n.right), n.product_index);
}

}  // namespace detail

// Bottom-up evaluation through the reaction table.
inline EntityIndex evaluate(const CombinationalSystem& sys, const Expression& e) {
    return detail::evaluate_node(sys, *e.root);
}

inline std::string address_of(const CombinationalSystem& sys, const Expression& e) {
    return detail::address_node(sys, *e.root);
}

// Textual form: entity ids as leaves, `op(child,child)` applications with an
// optional `#n` product selector (default #1).
inline std::string format_expression(const CombinationalSystem& sys, const Expression::Node& n) {
    if (n.is_leaf) return sys.entities[n.entity];
    std::string out = sys.operators[n.op].id + "(" + format_expression(sys, *n.left) + "," +
                      format_expression(sys, *n.right) + ")";
    if (n.product_index != 0) out += "#" + std::to_string(n.product_index + 1);
    return out;
}
inline std::string format_expression(const CombinationalSystem& sys, const Expression& e) {
    return format_expression(sys, *e.root);
}

namespace detail {

struct ExprParser {
    const CombinationalSystem& sys;
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    std::string token() {
        skip_ws();
        const std::size_t start = pos;
        while (pos < text.size() && text.find_first_of("(),#", pos) != pos &&
               text[pos] != ' ' && text[pos] != '\t')
            ++pos;
        if (pos == start) throw Error("parse", "expected identifier", "@" + std::to_string(pos));
        return text.substr(start, pos - start);
    }
    void expect(char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c)
            throw Error("parse", std::string("expected '") + c + "'", "@" + std::to_string(pos));
        ++pos;
    }
    std::unique_ptr<Expression::Node> parse() {
        const std::string id = token();
        skip_ws();
        if (pos < text.size() && text[pos] == '(') {
            if (!sys.has_operator(id))
                throw Error("parse", "unknown operator '" + id + "'", "@" + std::to_string(pos));
            expect('(');
            auto left = parse();
            expect(',');
            auto right = parse();
            expect(')');
            std::size_t product_index = 0;
            skip_ws();
            if (pos < text.size() && text[pos] == '#') {
                ++pos;
                const std::size_t start = pos;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                if (pos == start) throw Error("parse", "expected product number", "@" + std::to_string(pos));
                const unsigned long n = std::stoul(text.substr(start, pos - start));
                if (n == 0) throw Error("parse", "product numbers are 1-based", "@" + std::to_string(start));
                product_index = n - 1;
            }
            auto node = std::make_unique<Expression::Node>();
            node->is_leaf = false;
            node->op = sys.operator_index(id);
            node->product_index = product_index;
            node->left = std::move(left);
            node->right = std::move(right);
            return node;
        }
        if (!sys.has_entity(id))
            throw Error("parse", "unknown entity '" + id + "'", "@" + std::to_string(pos));
        auto node = std::make_unique<Expression::Node>();
        node->entity = sys.entity_index(id);
        return node;
    }
};

}  // namespace detail

inline Expression parse_expression(const CombinationalSystem& sys, const std::string& text) {
    detail::ExprParser p{sys, text};
    Expression out;
    out.root = p.parse();
    p.skip_ws();
    if (p.pos != text.size())
        throw Error("parse", "trailing characters", "@" + std::to_string(p.pos));
    return out;
}

}  // namespace cosm
