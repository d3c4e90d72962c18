#pragma once

#include "cosm/rational.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace cosm {

// Nonnegative extended rational: a finite value or infinity. Infinity marks
// underivable entities and absorbs addition. Total order with inf greatest.
class Cost {
public:
    Cost() : finite_(true), value_(0) {}
    explicit Cost(Rational v) : finite_(true), value_(std::move(v)) {
        if (value_ < 0) throw std::invalid_argument("Cost must be nonnegative");
    }
    static Cost infinity() {
        Cost c;
        c.finite_ = false;
        return c;
    }
    static Cost zero() { return Cost(); }

    bool is_finite() const { return finite_; }
    bool is_infinite() const { return !finite_; }
    bool is_zero() const { return finite_ && value_ == 0; }

    // Precondition: is_finite().
    const Rational& value() const {
        if (!finite_) throw std::logic_error("value() on infinite Cost");
        return value_;
    }

    Cost operator+(const Cost& other) const {
        if (!finite_ || !other.finite_) return infinity();
        return Cost(value_ + other.value_);
    }
    Cost& operator+=(const Cost& other) { return *this = *this + other; }

    bool operator==(const Cost& other) const {
        if (finite_ != other.finite_) return false;
        return !finite_ || value_ == other.value_;
    }
    bool operator!=(const Cost& other) const { return !(*this == other); }
    bool operator<(const Cost& other) const {
        if (finite_ && other.finite_) return value_ < other.value_;
        return finite_ && !other.finite_;
    }
    bool operator<=(const Cost& other) const { return *this < other || *this == other; }
    bool operator>(const Cost& other) const { return other < *this; }
    bool operator>=(const Cost& other) const { return other <= *this; }

    std::string str() const { return finite_ ? to_string(value_) : "inf"; }

    // Parses "inf" or a rational literal; rejects negatives.
    static std::optional<Cost> parse(const std::string& text) {
        if (text == "inf") return infinity();
        auto r = parse_rational(text);
        if (!r || *r < 0) return std::nullopt;
        return Cost(std::move(*r));
    }

private:
    bool finite_;
    Rational value_;
};

inline Cost min(const Cost& a, const Cost& b) { return a < b ? a : b; }
inline Cost max(const Cost& a, const Cost& b) { return a < b ? b : a; }

// One Cost per declared measure, measure order matching the system.
using CostVector = std::vector<Cost>;

inline CostVector operator+(const CostVector& a, const CostVector& b) {
    CostVector out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
    return out;
}

// Reflexive Pareto dominance for minimization: every coordinate <=.
inline bool dominates_or_equal(const CostVector& a, const CostVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] <= b[i])) return false;
    }
    return true;
}

inline bool strictly_dominates(const CostVector& a, const CostVector& b) {
    return dominates_or_equal(a, b) && a != b;
}

// Lexicographic order used for canonical bundle layout (inf sorts last).
inline bool lex_less(const CostVector& a, const CostVector& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return a.size() < b.size();
}

inline std::string to_string(const CostVector& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += v[i].str();
    }
    return out + "]";
}

}  // namespace cosm
