#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cosm {

// Exact arbitrary-precision rational. All engine arithmetic is exact;
// floating point never enters any computation or output.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// Renders "p/q", or just "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) {
        os << '/' << denominator(r);
    }
    return os.str();
}

// Accepts "p", "-p", "p/q" with optional sign on the numerator.
inline std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(Integer(text));
        }
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty()) return std::nullopt;
        Integer q(den);
        if (q == 0) return std::nullopt;
        return Rational(Integer(num), q);
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
}

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Rational rational_min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rational_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace cosm
