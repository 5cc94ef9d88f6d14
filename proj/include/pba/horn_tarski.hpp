#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pba/element.hpp"
#include "pba/errors.hpp"
#include "pba/measure.hpp"
#include "pba/simplex.hpp"

namespace pba {

/// The k-th elementary symmetric combination of a sequence: the union over
/// all (k+1)-element position subsets of the intersection of the picked
/// elements.
inline Element symmetric_union(const std::vector<Element>& seq, int k) {
    int n = static_cast<int>(seq.size());
    Element out = Element::zero(seq[0].arity());
    std::vector<int> pick(k + 1);
    // iterate strictly increasing position tuples
    std::function<void(int, int)> rec = [&](int depth, int start) {
        if (depth == k + 1) {
            Element inter = Element::one(seq[0].arity());
            for (int d = 0; d <= k; ++d) inter = meet(inter, seq[pick[d]]);
            out = join(out, inter);
            return;
        }
        for (int i = start; i < n; ++i) {
            pick[depth] = i;
            rec(depth + 1, i + 1);
        }
    };
    rec(0, 0);
    return out;
}

/// Sequence preorder: <A_0..A_{m-1}> <= <B_0..B_{n-1}> iff for every k < m
/// the k-th symmetric union of the A's is contained in that of the B's
/// (an empty union on the right forces an empty left side).
inline bool seq_leq(const std::vector<Element>& a, const std::vector<Element>& b) {
    if (a.empty()) return true;
    if (!b.empty() && a[0].arity() != b[0].arity())
        throw ArityMismatch("seq_leq: sequences over different algebras");
    for (const auto& e : a)
        if (e.arity() != a[0].arity()) throw ArityMismatch("seq_leq: mixed arities on the left");
    for (const auto& e : b)
        if (e.arity() != a[0].arity()) throw ArityMismatch("seq_leq: mixed arities on the right");
    int m = static_cast<int>(a.size()), n = static_cast<int>(b.size());
    for (int k = 0; k < m; ++k) {
        Element lhs = symmetric_union(a, k);
        Element rhs = k < n ? symmetric_union(b, k) : Element::zero(a[0].arity());
        if (!lhs.subset_of(rhs)) return false;
    }
    return true;
}

/// A nonnegative function on a finite element set containing the unit with
/// value 1.
template <class Q>
struct PartialFunction {
    int arity = 0;
    std::vector<std::pair<Element, Q>> entries;

    static PartialFunction make(int arity, std::vector<std::pair<Element, Q>> entries) {
        using traits = scalar_traits<Q>;
        PartialFunction f;
        f.arity = arity;
        bool has_unit = false;
        for (auto& [e, v] : entries) {
            if (e.arity() != arity) throw ArityMismatch("partial function entry arity mismatch");
            if (!traits::nonneg(v)) throw NotPartialMeasure("negative value in partial function");
            if (e.is_one()) {
                has_unit = true;
                if (!traits::eq(v, Q(1))) throw NotPartialMeasure("f(1) must be 1");
            }
        }
        if (!has_unit) throw NotPartialMeasure("the unit element must be in the domain");
        f.entries = std::move(entries);
        return f;
    }

    const Q* find(const Element& e) const {
        for (const auto& [d, v] : entries)
            if (d == e) return &v;
        return nullptr;
    }

    std::vector<Element> domain() const {
        std::vector<Element> out;
        out.reserve(entries.size());
        for (const auto& [d, v] : entries) out.push_back(d);
        return out;
    }
};

struct SequenceWitness {
    std::vector<Element> lhs, rhs;
};

template <class Q>
struct PartialMeasureVerdict {
    bool pass_bounded = true;
    int max_len = 0;
    std::optional<SequenceWitness> witness;  // violating pair when failing
};

namespace detail {

inline void multisets(int count, int size, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(size);
    std::function<void(int, int)> rec = [&](int depth, int start) {
        if (depth == size) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < count; ++i) {
            cur[depth] = i;
            rec(depth + 1, i);  // repetition allowed
        }
    };
    rec(0, 0);
}

}  // namespace detail

/// Checks the sequence-sum condition over all domain multiset pairs with
/// lengths up to max_len. A pass is explicitly bounded; a failure carries the
/// violating pair and is authoritative.
template <class Q>
PartialMeasureVerdict<Q> is_partial_measure(const PartialFunction<Q>& f, int max_len = 4) {
    using traits = scalar_traits<Q>;
    if (max_len < 1) throw Error("max_len must be at least 1");
    PartialMeasureVerdict<Q> verdict;
    verdict.max_len = max_len;

    int s = static_cast<int>(f.entries.size());
    struct Seq {
        std::vector<int> idx;
        std::vector<Element> sym;  // symmetric unions, one per k < len
        Q sum;
    };
    std::vector<Seq> seqs;
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::vector<int>> ms;
        detail::multisets(s, len, ms);
        for (auto& m : ms) {
            Seq q;
            q.idx = m;
            std::vector<Element> elems;
            q.sum = Q(0);
            for (int i : m) {
                elems.push_back(f.entries[i].first);
                q.sum += f.entries[i].second;
            }
            for (int k = 0; k < len; ++k) q.sym.push_back(symmetric_union(elems, k));
            seqs.push_back(std::move(q));
        }
    }
    for (const auto& a : seqs)
        for (const auto& b : seqs) {
            bool leq = true;
            for (std::size_t k = 0; k < a.sym.size() && leq; ++k) {
                const Element rhs =
                    k < b.sym.size() ? b.sym[k] : Element::zero(f.arity);
                leq = a.sym[k].subset_of(rhs);
            }
            if (!leq) continue;
            if (!traits::leq(a.sum, b.sum)) {
                verdict.pass_bounded = false;
                SequenceWitness w;
                for (int i : a.idx) w.lhs.push_back(f.entries[i].first);
                for (int i : b.idx) w.rhs.push_back(f.entries[i].first);
                verdict.witness = std::move(w);
                return verdict;
            }
        }
    return verdict;
}

template <class Q>
struct Band {
    Q inner, outer;
    bool exact = false;  // true on subalgebra domains (sup/inf formulas)
};

namespace detail {

inline bool domain_is_subalgebra(const std::vector<Element>& dom) {
    auto has = [&](const Element& e) { return std::find(dom.begin(), dom.end(), e) != dom.end(); };
    for (const auto& e : dom) {
        if (!has(e.complement())) return false;
        for (const auto& g : dom)
            if (!has(meet(e, g))) return false;
    }
    return true;
}

}  // namespace detail

/// Interior/exterior values of x: on a subalgebra domain the sup/inf of
/// domain values below/above x (exact); otherwise the bounded
/// quotient-of-sums search, whose band contains the true one.
template <class Q>
Band<Q> interior_exterior(const PartialFunction<Q>& f, const Element& x, int max_len = 4) {
    if (x.arity() != f.arity) throw ArityMismatch("interior_exterior: element arity mismatch");
    Band<Q> band;
    auto dom = f.domain();
    if (detail::domain_is_subalgebra(dom)) {
        band.exact = true;
        bool has_i = false, has_e = false;
        for (const auto& [d, v] : f.entries) {
            if (d.subset_of(x) && (!has_i || v > band.inner)) { band.inner = v; has_i = true; }
            if (x.subset_of(d) && (!has_e || v < band.outer)) { band.outer = v; has_e = true; }
        }
        // a subalgebra contains the zero and unit elements, so both exist
        return band;
    }

    band.exact = false;
    band.inner = Q(0);
    band.outer = Q(1);
    int s = static_cast<int>(f.entries.size());
    // xi = (sum f(A) - sum f(B)) / m over <B...,x^m> <= <A...> (outer) or
    // <A...> <= <B...,x^m> (inner), with |A| <= max_len, |B| + m <= max_len
    for (int m = 1; m <= max_len; ++m) {
        for (int pb = 0; pb + m <= max_len; ++pb) {
            std::vector<std::vector<int>> bs;
            if (pb == 0)
                bs.push_back({});
            else
                detail::multisets(s, pb, bs);
            for (int na = 0; na <= max_len; ++na) {
                std::vector<std::vector<int>> as;
                if (na == 0)
                    as.push_back({});
                else
                    detail::multisets(s, na, as);
                for (const auto& bi : bs)
                    for (const auto& ai : as) {
                        std::vector<Element> bseq;
                        Q bsum(0);
                        for (int i : bi) {
                            bseq.push_back(f.entries[i].first);
                            bsum += f.entries[i].second;
                        }
                        for (int r = 0; r < m; ++r) bseq.push_back(x);
                        std::vector<Element> aseq;
                        Q asum(0);
                        for (int i : ai) {
                            aseq.push_back(f.entries[i].first);
                            asum += f.entries[i].second;
                        }
                        Q xi = (asum - bsum) / Q(m);
                        if (seq_leq(bseq, aseq) && xi < band.outer) band.outer = xi;
                        if (seq_leq(aseq, bseq) && xi > band.inner) band.inner = xi;
                    }
            }
        }
    }
    return band;
}

/// Adds a single value, enforcing the interior/exterior band and re-checking
/// the bounded sequence condition.
template <class Q>
PartialFunction<Q> extend_one(const PartialFunction<Q>& f, const Element& x, const Q& v,
                              int max_len = 4) {
    using traits = scalar_traits<Q>;
    auto pre = is_partial_measure(f, max_len);
    if (!pre.pass_bounded) throw NotPartialMeasure("input fails the sequence condition");
    auto band = interior_exterior(f, x, max_len);
    if (!traits::leq(band.inner, v) || !traits::leq(v, band.outer))
        throw ValueOutOfBand("value outside the interior/exterior band");
    auto entries = f.entries;
    entries.emplace_back(x, v);
    auto g = PartialFunction<Q>::make(f.arity, std::move(entries));
    if (!is_partial_measure(g, max_len).pass_bounded)
        throw NotPartialMeasure("extended function fails the sequence condition");
    return g;
}

/// Extends to a full measure by sweeping the atoms in index order and fixing
/// each to the midpoint of its exact admissible interval, computed by LP over
/// the set of measures consistent with everything fixed so far. Infeasibility
/// of the initial system certifies the input was not a partial measure.
template <class Q>
Measure<Q> extend_full(const PartialFunction<Q>& f) {
    int n = f.arity;
    std::size_t cols = std::size_t(1) << n;
    std::vector<std::vector<Q>> A;
    std::vector<Q> b;
    for (const auto& [e, v] : f.entries) {
        std::vector<Q> row(cols, Q(0));
        for (std::uint32_t atom = 0; atom < cols; ++atom)
            if (e.contains_atom(atom)) row[atom] = Q(1);
        A.push_back(std::move(row));
        b.push_back(v);
    }
    {
        std::vector<Q> norm(cols, Q(1));
        A.push_back(std::move(norm));
        b.push_back(Q(1));
    }
    if (solve_feasibility(A, b).status != LpStatus::Optimal)
        throw NotExtensible("no measure is consistent with the given values");

    std::vector<Q> fixed(cols);
    for (std::uint32_t atom = 0; atom < cols; ++atom) {
        std::vector<Q> c(cols, Q(0));
        c[atom] = Q(1);
        auto lo = solve_lp(A, b, c);
        std::vector<Q> neg(cols, Q(0));
        neg[atom] = Q(-1);
        auto hi = solve_lp(A, b, neg);
        if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
            throw InternalInconsistency("atom band vanished during the sweep");
        fixed[atom] = (lo.objective + (-hi.objective)) / 2;
        std::vector<Q> row(cols, Q(0));
        row[atom] = Q(1);
        A.push_back(std::move(row));
        b.push_back(fixed[atom]);
    }
    return Measure<Q>::from_weights(n, std::move(fixed));
}

}  // namespace pba
