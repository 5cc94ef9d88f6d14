#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pba {

/// Exact rational scalar used by all certificate-bearing paths. Expression
/// templates are off so arithmetic composes like a builtin scalar.
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// Arithmetic contract. Exact scalars compare literally; float scalars
/// compare within an absolute tolerance.
template <class Q>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
    static constexpr bool is_exact = true;
    static Rat tolerance() { return Rat(0); }
    static bool is_zero(const Rat& x) { return x == 0; }
    static bool eq(const Rat& a, const Rat& b) { return a == b; }
    static bool leq(const Rat& a, const Rat& b) { return a <= b; }
    static bool nonneg(const Rat& x) { return x >= 0; }
};

/// Absolute tolerance for float-mode comparisons; adjustable per process.
inline double& float_tolerance() {
    static double tol = 1e-9;
    return tol;
}

template <>
struct scalar_traits<double> {
    static constexpr bool is_exact = false;
    static double tolerance() { return float_tolerance(); }
    static bool is_zero(double x) { return std::abs(x) <= tolerance(); }
    static bool eq(double a, double b) { return std::abs(a - b) <= tolerance(); }
    static bool leq(double a, double b) { return a <= b + tolerance(); }
    static bool nonneg(double x) { return x >= -tolerance(); }
};

inline double to_double(const Rat& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

template <class Q>
Q from_rat(const Rat& r);
template <>
inline Rat from_rat<Rat>(const Rat& r) { return r; }
template <>
inline double from_rat<double>(const Rat& r) { return to_double(r); }

/// Parses "num/den", plain integers and decimal strings ("0.25") exactly.
inline Rat parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        return Rat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(BigInt(s));
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (neg) head = head.substr(1);
    if (head.empty()) head = "0";
    for (char c : tail)
        if (c < '0' || c > '9') throw std::invalid_argument("bad decimal literal: " + s);
    BigInt den = 1;
    for (std::size_t i = 0; i < tail.size(); ++i) den *= 10;
    BigInt num = BigInt(head) * den + (tail.empty() ? BigInt(0) : BigInt(tail));
    Rat r(num, den);
    return neg ? Rat(-r) : r;
}

inline std::string rational_to_string(const Rat& x) {
    if (denominator(x) == 1) return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

/// Best rational approximation with denominator <= max_den (continued
/// fractions). Used only when a caller explicitly opts into snapping
/// float-mode data onto exact-mode consumers.
inline Rat snap_to_rational(double x, std::uint64_t max_den) {
    if (max_den == 0) throw std::invalid_argument("max_den must be positive");
    if (!std::isfinite(x)) throw std::invalid_argument("cannot snap non-finite value");
    bool neg = x < 0;
    double v = neg ? -x : x;
    // Convergents h/k of the continued fraction of v; (h0,k0) is the latest,
    // (h1,k1) the one before it.
    std::uint64_t h0 = 1, k0 = 0, h1 = 0, k1 = 1;
    bool bounded_out = false;
    double frac = v;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(frac);
        if (fl > 9e18) break;
        auto a = static_cast<std::uint64_t>(fl);
        if (k0 != 0 && (a > (max_den - k1) / k0)) {
            bounded_out = true;
            break;
        }
        std::uint64_t h2 = a * h0 + h1, k2 = a * k0 + k1;
        h1 = h0; k1 = k0; h0 = h2; k0 = k2;
        double rem = frac - fl;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
    }
    Rat best(BigInt(h0), BigInt(k0 == 0 ? 1 : k0));
    if (bounded_out && k0 != 0) {
        // Largest admissible semiconvergent toward the next convergent.
        std::uint64_t a_max = (max_den - k1) / k0;
        if (a_max > 0) {
            Rat semi(BigInt(a_max) * h0 + h1, BigInt(a_max) * k0 + k1);
            if (std::abs(to_double(semi) - v) < std::abs(to_double(best) - v)) best = semi;
        }
    }
    return neg ? Rat(-best) : best;
}

}  // namespace pba
