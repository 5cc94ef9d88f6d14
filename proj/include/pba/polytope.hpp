#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pba/errors.hpp"
#include "pba/measure.hpp"
#include "pba/scalar.hpp"
#include "pba/simplex.hpp"

namespace pba {

/// Monomial coordinates of a correlation polytope: singletons for every
/// generator plus whichever higher intersections are observed.
struct CorrelationSpec {
    int n = 0;
    std::vector<std::uint32_t> monomials;  // nonempty generator subsets, as bitmasks

    static constexpr int kMembershipLimit = 20;
    static constexpr int kFacetLimit = 12;

    CorrelationSpec() = default;

    CorrelationSpec(int n_gens, std::vector<std::uint32_t> monos) : n(n_gens), monomials(std::move(monos)) {
        if (n < 0 || n > kMembershipLimit) throw LimitExceeded("correlation spec: generator count out of range");
        std::set<std::uint32_t> seen;
        for (auto m : monomials) {
            if (m == 0 || (m >> n) != 0) throw Error("correlation spec: bad monomial mask");
            if (!seen.insert(m).second) throw Error("correlation spec: duplicate monomial");
        }
        for (int i = 0; i < n; ++i)
            if (!seen.count(std::uint32_t(1) << i))
                throw Error("correlation spec: singleton {" + std::to_string(i) + "} missing");
    }

    std::size_t dim() const { return monomials.size(); }

    int index_of(std::uint32_t mask) const {
        for (std::size_t i = 0; i < monomials.size(); ++i)
            if (monomials[i] == mask) return static_cast<int>(i);
        return -1;
    }
};

/// Vertex u_eps: coordinate per monomial S is the product of eps over S.
template <class Q>
std::vector<Q> vertex_vector(const CorrelationSpec& spec, std::uint32_t eps) {
    std::vector<Q> v(spec.dim());
    for (std::size_t j = 0; j < spec.dim(); ++j)
        v[j] = ((eps & spec.monomials[j]) == spec.monomials[j]) ? Q(1) : Q(0);
    return v;
}

/// All 2^n vertices, in eps order; duplicates retained.
template <class Q>
std::vector<std::vector<Q>> vertices(const CorrelationSpec& spec) {
    if (spec.n > CorrelationSpec::kMembershipLimit) throw LimitExceeded("vertex enumeration limit");
    std::vector<std::vector<Q>> out;
    out.reserve(std::size_t(1) << spec.n);
    for (std::uint32_t eps = 0; eps < (std::uint32_t(1) << spec.n); ++eps)
        out.push_back(vertex_vector<Q>(spec, eps));
    return out;
}

/// Either a convex decomposition over the vertices (feasible) or a separating
/// affine functional c, c0 with c.u <= c0 on every vertex and c.p > c0.
template <class Q>
struct FeasibilityCertificate {
    bool feasible = false;
    std::vector<Q> lambda;     // size 2^n when feasible
    std::vector<Q> separator;  // c, size dim(), when infeasible
    Q separator_rhs = Q(0);    // c0
};

template <class Q>
std::vector<std::vector<Q>> membership_constraint_matrix(const CorrelationSpec& spec) {
    std::size_t cols = std::size_t(1) << spec.n;
    std::vector<std::vector<Q>> A(spec.dim() + 1, std::vector<Q>(cols, Q(0)));
    for (std::uint32_t eps = 0; eps < cols; ++eps) {
        for (std::size_t r = 0; r < spec.dim(); ++r)
            if ((eps & spec.monomials[r]) == spec.monomials[r]) A[r][eps] = Q(1);
        A[spec.dim()][eps] = Q(1);
    }
    return A;
}

/// Exact LP membership of p in conv{u_eps}; certificates in both directions.
template <class Q>
FeasibilityCertificate<Q> membership(const std::vector<Q>& p, const CorrelationSpec& spec) {
    if (p.size() != spec.dim()) throw Error("membership: vector length does not match spec");
    if (spec.n > CorrelationSpec::kMembershipLimit) throw LimitExceeded("membership limit");
    auto A = membership_constraint_matrix<Q>(spec);
    std::vector<Q> b = p;
    b.push_back(Q(1));
    auto sol = solve_feasibility(A, b);
    FeasibilityCertificate<Q> cert;
    if (sol.status == LpStatus::Optimal) {
        cert.feasible = true;
        cert.lambda = std::move(sol.x);
    } else {
        cert.feasible = false;
        cert.separator.assign(sol.farkas.begin(), sol.farkas.begin() + spec.dim());
        cert.separator_rhs = -sol.farkas[spec.dim()];
    }
    return cert;
}

/// Re-verifies a certificate by direct substitution over all vertices.
template <class Q>
bool verify_certificate(const std::vector<Q>& p, const CorrelationSpec& spec,
                        const FeasibilityCertificate<Q>& cert) {
    using traits = scalar_traits<Q>;
    if (cert.feasible) {
        if (cert.lambda.size() != (std::size_t(1) << spec.n)) return false;
        Q total = Q(0);
        std::vector<Q> recon(spec.dim(), Q(0));
        for (std::uint32_t eps = 0; eps < cert.lambda.size(); ++eps) {
            const Q& l = cert.lambda[eps];
            if (!traits::nonneg(l)) return false;
            total += l;
            for (std::size_t j = 0; j < spec.dim(); ++j)
                if ((eps & spec.monomials[j]) == spec.monomials[j]) recon[j] += l;
        }
        if (!traits::eq(total, Q(1))) return false;
        for (std::size_t j = 0; j < spec.dim(); ++j)
            if (!traits::eq(recon[j], p[j])) return false;
        return true;
    }
    if (cert.separator.size() != spec.dim()) return false;
    Q at_p = Q(0);
    for (std::size_t j = 0; j < spec.dim(); ++j) at_p += cert.separator[j] * p[j];
    if (!(at_p > cert.separator_rhs + traits::tolerance())) return false;
    for (std::uint32_t eps = 0; eps < (std::uint32_t(1) << spec.n); ++eps) {
        Q at_u = Q(0);
        for (std::size_t j = 0; j < spec.dim(); ++j)
            if ((eps & spec.monomials[j]) == spec.monomials[j]) at_u += cert.separator[j];
        if (!traits::leq(at_u, cert.separator_rhs)) return false;
    }
    return true;
}

/// Exact range of a target monomial over all measures consistent with p.
/// Throws InfeasibleBase when p itself is not in the polytope.
template <class Q>
std::pair<Q, Q> bounds_missing_term(const std::vector<Q>& p, const CorrelationSpec& spec,
                                    std::uint32_t target_mask) {
    if (p.size() != spec.dim()) throw Error("bounds: vector length does not match spec");
    if (target_mask == 0 || (target_mask >> spec.n) != 0) throw Error("bounds: bad target monomial");
    if (spec.index_of(target_mask) >= 0) throw Error("bounds: target already in spec");
    auto A = membership_constraint_matrix<Q>(spec);
    std::vector<Q> b = p;
    b.push_back(Q(1));
    std::size_t cols = std::size_t(1) << spec.n;
    std::vector<Q> c(cols, Q(0));
    for (std::uint32_t eps = 0; eps < cols; ++eps)
        if ((eps & target_mask) == target_mask) c[eps] = Q(1);
    auto lo = solve_lp(A, b, c);
    if (lo.status == LpStatus::Infeasible) throw InfeasibleBase("bounds: base vector not in polytope");
    std::vector<Q> neg(c);
    for (auto& x : neg) x = -x;
    auto hi = solve_lp(A, b, neg);
    return {lo.objective, -hi.objective};
}

// ---------------------------------------------------------------------------
// Facet enumeration (double description on the cone of valid inequalities).

/// A facet-defining inequality sum_j coeffs[j]*p[j] (sense) rhs, with integer
/// coprime coefficients and the first nonzero coefficient positive.
struct Facet {
    std::vector<Rat> coeffs;
    Rat rhs = 0;
    bool less_equal = true;  // orientation: true for <=, false for >=

    template <class Q>
    bool satisfied_by(const std::vector<Q>& p) const {
        Q lhs = Q(0);
        for (std::size_t j = 0; j < coeffs.size(); ++j) lhs += from_rat<Q>(coeffs[j]) * p[j];
        Q r = from_rat<Q>(rhs);
        return less_equal ? scalar_traits<Q>::leq(lhs, r) : scalar_traits<Q>::leq(r, lhs);
    }

    std::string to_string(const std::vector<std::string>& coord_names) const {
        std::string s;
        bool first = true;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j] == 0) continue;
            Rat a = coeffs[j];
            if (first) {
                if (a < 0) { s += "-"; a = -a; }
            } else {
                s += a < 0 ? " - " : " + ";
                if (a < 0) a = -a;
            }
            if (a != 1) s += rational_to_string(a) + "*";
            s += coord_names[j];
            first = false;
        }
        if (first) s += "0";
        s += less_equal ? " <= " : " >= ";
        s += rational_to_string(rhs);
        return s;
    }

    bool operator<(const Facet& other) const {
        if (coeffs != other.coeffs) return coeffs < other.coeffs;
        if (rhs != other.rhs) return rhs < other.rhs;
        return less_equal < other.less_equal;
    }
    bool operator==(const Facet& other) const {
        return coeffs == other.coeffs && rhs == other.rhs && less_equal == other.less_equal;
    }
};

namespace detail {

inline void make_primitive(std::vector<Rat>& v) {
    BigInt l = 1;
    for (const auto& x : v) l = lcm(l, denominator(x));
    BigInt g = 0;
    std::vector<BigInt> ints(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        ints[i] = numerator(v[i]) * (l / denominator(v[i]));
        g = gcd(g, ints[i]);
    }
    if (g == 0) return;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = Rat(ints[i] / g);
}

inline int rank_of(std::vector<std::vector<Rat>> rows) {
    int rank = 0;
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0) continue;
            Rat f = rows[r][c] / rows[rank][c];
            for (std::size_t j = c; j < cols; ++j) rows[r][j] -= f * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

/// Extreme rays of the pointed full-rank cone {y : rows.y >= 0}, by
/// incremental double description with the algebraic adjacency test.
inline std::vector<std::vector<Rat>> extreme_rays(const std::vector<std::vector<Rat>>& rows) {
    const std::size_t d = rows[0].size();
    if (rows.size() > 64) throw LimitExceeded("double description: more than 64 constraints");

    // Initial simplicial cone from d linearly independent rows.
    std::vector<std::size_t> base;
    {
        std::vector<std::vector<Rat>> elim;
        for (std::size_t r = 0; r < rows.size() && base.size() < d; ++r) {
            elim.push_back(rows[r]);
            if (rank_of(elim) == static_cast<int>(elim.size()))
                base.push_back(r);
            else
                elim.pop_back();
        }
    }
    if (base.size() < d) throw Error("double description: constraint rows not full rank");

    // Invert the base matrix; its columns generate the initial cone.
    std::vector<std::vector<Rat>> M(d, std::vector<Rat>(2 * d, Rat(0)));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) M[i][j] = rows[base[i]][j];
        M[i][d + i] = 1;
    }
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t piv = c;
        while (M[piv][c] == 0) ++piv;
        std::swap(M[piv], M[c]);
        Rat inv = Rat(1) / M[c][c];
        for (auto& x : M[c]) x *= inv;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == c || M[r][c] == 0) continue;
            Rat f = M[r][c];
            for (std::size_t j = 0; j < 2 * d; ++j) M[r][j] -= f * M[c][j];
        }
    }

    struct Ray {
        std::vector<Rat> y;
        std::uint64_t tight = 0;  // over processed row indices
    };
    std::vector<Ray> rays;
    for (std::size_t j = 0; j < d; ++j) {
        Ray r;
        r.y.resize(d);
        for (std::size_t i = 0; i < d; ++i) r.y[i] = M[i][d + j];
        make_primitive(r.y);
        rays.push_back(std::move(r));
    }

    std::vector<std::size_t> processed(base);
    auto recompute_tight = [&](Ray& r) {
        r.tight = 0;
        for (std::size_t t = 0; t < processed.size(); ++t) {
            Rat dot = 0;
            for (std::size_t j = 0; j < d; ++j) dot += rows[processed[t]][j] * r.y[j];
            if (dot == 0) r.tight |= std::uint64_t(1) << t;
        }
    };
    for (auto& r : rays) recompute_tight(r);

    auto adjacent = [&](const Ray& a, const Ray& b) {
        std::uint64_t common = a.tight & b.tight;
        std::vector<std::vector<Rat>> sub;
        for (std::size_t t = 0; t < processed.size(); ++t)
            if ((common >> t) & 1u) sub.push_back(rows[processed[t]]);
        if (sub.size() < d - 2) return false;
        return rank_of(std::move(sub)) == static_cast<int>(d) - 2;
    };

    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (std::find(base.begin(), base.end(), r) != base.end()) continue;
        std::vector<Rat> dots(rays.size());
        for (std::size_t i = 0; i < rays.size(); ++i) {
            Rat dot = 0;
            for (std::size_t j = 0; j < d; ++j) dot += rows[r][j] * rays[i].y[j];
            dots[i] = dot;
        }
        std::vector<Ray> next;
        for (std::size_t i = 0; i < rays.size(); ++i)
            if (dots[i] >= 0) next.push_back(rays[i]);
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (dots[i] <= 0) continue;
            for (std::size_t k = 0; k < rays.size(); ++k) {
                if (dots[k] >= 0) continue;
                if (!adjacent(rays[i], rays[k])) continue;
                Ray fresh;
                fresh.y.resize(d);
                for (std::size_t j = 0; j < d; ++j)
                    fresh.y[j] = dots[i] * rays[k].y[j] - dots[k] * rays[i].y[j];
                make_primitive(fresh.y);
                next.push_back(std::move(fresh));
            }
        }
        processed.push_back(r);
        rays = std::move(next);
        for (auto& ray : rays) recompute_tight(ray);
        // dedup (a fresh ray can coincide with a kept tight one)
        std::sort(rays.begin(), rays.end(), [](const Ray& a, const Ray& b) { return a.y < b.y; });
        rays.erase(std::unique(rays.begin(), rays.end(),
                               [](const Ray& a, const Ray& b) { return a.y == b.y; }),
                   rays.end());
    }

    std::vector<std::vector<Rat>> out;
    out.reserve(rays.size());
    for (auto& r : rays) out.push_back(std::move(r.y));
    return out;
}

}  // namespace detail

/// Complete irredundant facet list of conv{u_eps} by double description in
/// exact arithmetic, in canonical order.
inline std::vector<Facet> enumerate_facets(const CorrelationSpec& spec) {
    if (spec.dim() > CorrelationSpec::kFacetLimit) throw LimitExceeded("facet enumeration dimension limit");
    auto verts = vertices<Rat>(spec);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    if (verts.size() > 64) throw LimitExceeded("facet enumeration vertex limit");

    // Valid inequalities a0 + a.x >= 0 form the cone {y : [1|V] y >= 0}.
    std::vector<std::vector<Rat>> rows;
    rows.reserve(verts.size());
    for (const auto& v : verts) {
        std::vector<Rat> row(spec.dim() + 1);
        row[0] = 1;
        for (std::size_t j = 0; j < spec.dim(); ++j) row[j + 1] = v[j];
        rows.push_back(std::move(row));
    }
    auto rays = detail::extreme_rays(rows);

    std::vector<Facet> facets;
    facets.reserve(rays.size());
    for (const auto& y : rays) {
        // a0 + a.x >= 0  ==  (-a).x <= a0
        Facet f;
        f.rhs = y[0];
        f.coeffs.assign(y.begin() + 1, y.end());
        for (auto& cval : f.coeffs) cval = -cval;
        f.less_equal = true;
        for (auto& cval : f.coeffs) {
            if (cval == 0) continue;
            if (cval < 0) {
                for (auto& x : f.coeffs) x = -x;
                f.rhs = -f.rhs;
                f.less_equal = false;
            }
            break;
        }
        facets.push_back(std::move(f));
    }
    std::sort(facets.begin(), facets.end());
    return facets;
}

}  // namespace pba
