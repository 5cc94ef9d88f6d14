#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pba/element.hpp"
#include "pba/errors.hpp"
#include "pba/scalar.hpp"

namespace pba {

/// A {0,1}-valued (multiplicative) measure on the free algebra: the
/// homomorphism selecting the atom `eps`.
struct MultiplicativeState {
    int arity;
    std::uint32_t eps;

    template <class Q>
    Q value(const Element& e) const {
        if (e.arity() != arity) throw ArityMismatch("multiplicative state arity mismatch");
        return e.contains_atom(eps) ? Q(1) : Q(0);
    }
};

inline std::vector<MultiplicativeState> enumerate_multiplicative_measures(int arity) {
    if (arity < 0 || arity > Element::kMaxArity) throw LimitExceeded("arity out of range");
    std::vector<MultiplicativeState> out;
    out.reserve(std::size_t(1) << arity);
    for (std::uint32_t e = 0; e < (std::uint32_t(1) << arity); ++e) out.push_back({arity, e});
    return out;
}

/// A normalized measure on the free Boolean algebra over `arity` generators,
/// stored as nonnegative atom weights summing to 1. Equivalently the convex
/// combination of multiplicative states with coefficients weight(eps).
template <class Q>
class Measure {
public:
    using traits = scalar_traits<Q>;

    static Measure uniform(int arity) {
        Measure m(arity);
        Q w = Q(1) / Q(static_cast<long>(std::size_t(1) << arity));
        for (auto& x : m.w_) x = w;
        return m;
    }

    static Measure point(int arity, std::uint32_t eps) {
        Measure m(arity);
        m.w_[eps] = Q(1);
        return m;
    }

    /// Validates nonnegativity (within tolerance in float mode) and
    /// normalization before accepting the weights.
    static Measure from_weights(int arity, std::vector<Q> weights) {
        if (weights.size() != (std::size_t(1) << arity))
            throw ArityMismatch("weight vector size does not match arity");
        Q sum = Q(0);
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (!traits::nonneg(weights[i]))
                throw NotAMeasure("negative atom weight at atom " + std::to_string(i));
            if (!traits::is_exact && weights[i] < Q(0)) weights[i] = Q(0);
            sum += weights[i];
        }
        if (!traits::eq(sum, Q(1))) throw NotAMeasure("atom weights do not sum to 1");
        Measure m(arity);
        m.w_ = std::move(weights);
        return m;
    }

    int arity() const { return arity_; }
    std::uint32_t atom_capacity() const { return std::uint32_t(1) << arity_; }
    const std::vector<Q>& weights() const { return w_; }
    Q weight(std::uint32_t eps) const { return w_[eps]; }

    /// Value on an element: the sum of its atoms' weights.
    Q value(const Element& e) const {
        if (e.arity() != arity_) throw ArityMismatch("measure/element arity mismatch");
        Q v = Q(0);
        for (std::uint32_t a = 0; a < atom_capacity(); ++a)
            if (e.contains_atom(a)) v += w_[a];
        return v;
    }

    /// Marginal onto the local generators `kept` (strictly increasing). The
    /// result's generator j is kept[j].
    Measure restrict_to(const std::vector<int>& kept) const {
        if (kept.empty()) throw EmptyKeptSet("restrict: kept set must be nonempty");
        for (std::size_t j = 0; j < kept.size(); ++j) {
            if (kept[j] < 0 || kept[j] >= arity_) throw IndexOutOfRange("restrict: generator out of range");
            if (j > 0 && kept[j] <= kept[j - 1]) throw IndexOutOfRange("restrict: kept not strictly increasing");
        }
        Measure out(static_cast<int>(kept.size()));
        for (std::uint32_t a = 0; a < atom_capacity(); ++a) {
            std::uint32_t small = 0;
            for (std::size_t j = 0; j < kept.size(); ++j) small |= ((a >> kept[j]) & 1u) << j;
            out.w_[small] += w_[a];
        }
        return out;
    }

    bool operator==(const Measure& other) const {
        if (arity_ != other.arity_) return false;
        for (std::uint32_t a = 0; a < atom_capacity(); ++a)
            if (!traits::eq(w_[a], other.w_[a])) return false;
        return true;
    }
    bool operator!=(const Measure& other) const { return !(*this == other); }

private:
    explicit Measure(int arity) : arity_(arity), w_(std::size_t(1) << arity, Q(0)) {
        if (arity < 0 || arity > Element::kMaxArity) throw LimitExceeded("measure arity out of range");
    }

    int arity_;
    std::vector<Q> w_;

    template <class R>
    friend Measure<R> measure_from_intersections(int, const std::vector<R>&);
};

/// Reads off the intersection values f(⋂_{i in S} A_i) for every nonempty
/// subset mask S; index 0 is the empty intersection (the unit) with value 1.
template <class Q>
std::vector<Q> intersection_values(const Measure<Q>& m) {
    int k = m.arity();
    std::vector<Q> v(std::size_t(1) << k, Q(0));
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << k); ++mask) {
        Q sum = Q(0);
        for (std::uint32_t a = 0; a < m.atom_capacity(); ++a)
            if ((a & mask) == mask) sum += m.weight(a);
        v[mask] = sum;
    }
    return v;
}

/// The unique measure whose intersection values are `values` (indexed by
/// subset mask; values[0] must be 1), recovered atom by atom through
/// inclusion–exclusion. Throws NotAMeasure if any atom weight comes out
/// negative.
template <class Q>
Measure<Q> measure_from_intersections(int arity, const std::vector<Q>& values) {
    using traits = scalar_traits<Q>;
    if (arity < 0 || arity > Element::kMaxArity) throw LimitExceeded("arity out of range");
    std::uint32_t full = (std::uint32_t(1) << arity) - 1;
    if (values.size() != std::size_t(full) + 1) throw MissingValue("intersection value table incomplete");
    if (!traits::eq(values[0], Q(1))) throw NotAMeasure("f(1) must be 1");

    Measure<Q> m(arity);
    for (std::uint32_t eps = 0; eps <= full; ++eps) {
        std::uint32_t zeros = full & ~eps;
        Q w = Q(0);
        // sum over subsets T of the zero positions, sign (-1)^|T|
        std::uint32_t t = zeros;
        while (true) {
            Q term = values[eps | t];
            if (std::popcount(t) % 2 == 1) term = -term;
            w += term;
            if (t == 0) break;
            t = (t - 1) & zeros;
        }
        if (!traits::nonneg(w))
            throw NotAMeasure("intersection values are not monotone-consistent: atom " + std::to_string(eps) +
                              " gets negative weight");
        if (!traits::is_exact && w < Q(0)) w = Q(0);
        m.w_[eps] = w;
    }
    return m;
}

template <class Q>
Q evaluate(const Measure<Q>& m, const Element& e) {
    return m.value(e);
}

template <class Q>
Measure<Q> restrict(const Measure<Q>& m, const std::vector<int>& kept) {
    return m.restrict_to(kept);
}

}  // namespace pba
