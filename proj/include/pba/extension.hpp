#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <type_traits>
#include <optional>
#include <vector>

#include "pba/errors.hpp"
#include "pba/measure.hpp"
#include "pba/polytope.hpp"
#include "pba/ppt.hpp"

namespace pba {

// ---------------------------------------------------------------------------
// Three observables with two compatible pairs {1,3} and {2,3}.

template <class Q>
struct ThreeSpec {
    Q p1, p2, p3, p13, p23;

    void validate() const {
        using traits = scalar_traits<Q>;
        auto in_unit = [](const Q& x) {
            return scalar_traits<Q>::leq(Q(0), x) && scalar_traits<Q>::leq(x, Q(1));
        };
        for (const Q& x : {p1, p2, p3, p13, p23})
            if (!in_unit(x)) throw InvalidThreeSpec("values must lie in [0,1]");
        if (!traits::leq(p13, p1) || !traits::leq(p13, p3) || !traits::leq(p23, p2) ||
            !traits::leq(p23, p3))
            throw InvalidThreeSpec("pair value exceeds a marginal");
        if (!traits::leq(p1 + p3 - p13, Q(1)) || !traits::leq(p2 + p3 - p23, Q(1)))
            throw InvalidThreeSpec("union value exceeds 1");
    }
};

/// The admissible rectangle for the two free atom weights:
/// eta = mu(A1&A2&A3), chi = mu(A1&A2&~A3).
template <class Q>
struct ChiEtaBox {
    Q eta_lo, eta_hi, chi_lo, chi_hi;

    bool contains(const Q& chi, const Q& eta) const {
        using traits = scalar_traits<Q>;
        return traits::leq(chi_lo, chi) && traits::leq(chi, chi_hi) && traits::leq(eta_lo, eta) &&
               traits::leq(eta, eta_hi);
    }
};

template <class Q>
ChiEtaBox<Q> chi_eta_intervals(const ThreeSpec<Q>& s) {
    s.validate();
    ChiEtaBox<Q> box;
    box.eta_hi = std::min(s.p13, s.p23);
    box.eta_lo = std::max(Q(0), s.p13 + s.p23 - s.p3);
    box.chi_hi = std::min(s.p1 - s.p13, s.p2 - s.p23);
    box.chi_lo = std::max(Q(0), s.p1 + s.p2 + s.p3 - s.p13 - s.p23 - Q(1));
    return box;
}

/// Explicit extension to a measure on the free algebra over {A1,A2,A3};
/// defaults pick the box midpoint.
template <class Q>
Measure<Q> extend_three(const ThreeSpec<Q>& s,
                        std::optional<std::type_identity_t<Q>> chi_opt = std::nullopt,
                        std::optional<std::type_identity_t<Q>> eta_opt = std::nullopt) {
    auto box = chi_eta_intervals(s);
    Q chi = chi_opt ? *chi_opt : (box.chi_lo + box.chi_hi) / 2;
    Q eta = eta_opt ? *eta_opt : (box.eta_lo + box.eta_hi) / 2;
    if (!box.contains(chi, eta)) throw ChiEtaOutOfBox("chosen (chi,eta) outside the admissible box");
    std::vector<Q> w(8);
    w[0b000] = Q(1) - (s.p1 + s.p2 + s.p3 - s.p13 - s.p23) + chi;
    w[0b001] = s.p1 - s.p13 - chi;
    w[0b010] = s.p2 - s.p23 - chi;
    w[0b100] = eta + s.p3 - s.p13 - s.p23;
    w[0b011] = chi;
    w[0b101] = s.p13 - eta;
    w[0b110] = s.p23 - eta;
    w[0b111] = eta;
    return Measure<Q>::from_weights(3, std::move(w));
}

/// Exact range of the unobserved pair value p12 over all extensions:
/// p12 = chi + eta and the two range independently over the box.
template <class Q>
std::pair<Q, Q> missing_pair_interval(const ThreeSpec<Q>& s) {
    auto box = chi_eta_intervals(s);
    return {box.chi_lo + box.eta_lo, box.chi_hi + box.eta_hi};
}

// ---------------------------------------------------------------------------
// Gluing along a shared block (conditional-probability product).

/// Glues measures over generator sets g1, g2 (sorted ascending) that agree on
/// the overlap: f(eps) = f1(eps|g1) * f2(eps|g2) / overlap-marginal(eps),
/// zero where the overlap marginal vanishes. Restricts exactly to both inputs.
template <class Q>
std::pair<Measure<Q>, std::vector<GeneratorId>> glue_pair(const Measure<Q>& m1,
                                                          const std::vector<GeneratorId>& g1,
                                                          const Measure<Q>& m2,
                                                          const std::vector<GeneratorId>& g2) {
    if (static_cast<int>(g1.size()) != m1.arity() || static_cast<int>(g2.size()) != m2.arity())
        throw ArityMismatch("glue_pair: generator lists do not match measure arities");
    for (std::size_t i = 1; i < g1.size(); ++i)
        if (g1[i] <= g1[i - 1]) throw Error("glue_pair: g1 not strictly increasing");
    for (std::size_t i = 1; i < g2.size(); ++i)
        if (g2[i] <= g2[i - 1]) throw Error("glue_pair: g2 not strictly increasing");

    std::vector<GeneratorId> overlap, all;
    std::set_intersection(g1.begin(), g1.end(), g2.begin(), g2.end(), std::back_inserter(overlap));
    std::set_union(g1.begin(), g1.end(), g2.begin(), g2.end(), std::back_inserter(all));
    if (all.size() > Element::kMaxArity) throw LimitExceeded("glued arity exceeds the limit");

    auto positions_in = [](const std::vector<GeneratorId>& sub, const std::vector<GeneratorId>& super) {
        std::vector<int> pos;
        pos.reserve(sub.size());
        for (auto g : sub)
            pos.push_back(static_cast<int>(std::lower_bound(super.begin(), super.end(), g) - super.begin()));
        return pos;
    };

    std::optional<Measure<Q>> overlap_marginal;
    std::vector<int> o_in_all;
    if (!overlap.empty()) {
        auto marg1 = m1.restrict_to(positions_in(overlap, g1));
        auto marg2 = m2.restrict_to(positions_in(overlap, g2));
        if (marg1 != marg2) throw OverlapMismatch("glue_pair: marginals differ on the shared block");
        overlap_marginal = marg1;
        o_in_all = positions_in(overlap, all);
    }
    auto p1 = positions_in(g1, all);
    auto p2 = positions_in(g2, all);

    auto project = [](std::uint32_t eps, const std::vector<int>& pos) {
        std::uint32_t out = 0;
        for (std::size_t j = 0; j < pos.size(); ++j) out |= ((eps >> pos[j]) & 1u) << j;
        return out;
    };

    std::size_t size = std::size_t(1) << all.size();
    std::vector<Q> w(size, Q(0));
    for (std::uint32_t eps = 0; eps < size; ++eps) {
        Q a = m1.weight(project(eps, p1));
        Q b = m2.weight(project(eps, p2));
        if (!overlap_marginal) {
            w[eps] = a * b;
            continue;
        }
        Q den = overlap_marginal->weight(project(eps, o_in_all));
        w[eps] = scalar_traits<Q>::is_zero(den) ? Q(0) : a * b / den;
    }
    return {Measure<Q>::from_weights(static_cast<int>(all.size()), std::move(w)), all};
}

/// Product measure over disjoint generator blocks.
template <class Q>
std::pair<Measure<Q>, std::vector<GeneratorId>> product_disjoint(const Measure<Q>& m1,
                                                                 const std::vector<GeneratorId>& g1,
                                                                 const Measure<Q>& m2,
                                                                 const std::vector<GeneratorId>& g2) {
    std::vector<GeneratorId> overlap;
    std::set_intersection(g1.begin(), g1.end(), g2.begin(), g2.end(), std::back_inserter(overlap));
    if (!overlap.empty()) throw BlocksOverlap("product_disjoint: generator blocks intersect");
    return glue_pair(m1, g1, m2, g2);
}

/// Fuses extensions over {A1,A2,A3} and {A1,A2,A4} that agree on {A1,A2}.
template <class Q>
Measure<Q> glue_four(const Measure<Q>& f123, const Measure<Q>& f124) {
    if (f123.arity() != 3 || f124.arity() != 3) throw ArityMismatch("glue_four expects arity-3 measures");
    return glue_pair(f123, {0, 1, 2}, f124, {0, 1, 3}).first;
}

// ---------------------------------------------------------------------------
// Tree gluing.

/// Glues a PPT whose node compatibility graph is a forest, visiting each tree
/// in BFS order and checking the running-intersection condition at every
/// attach step. Generators outside every node are padded independently with
/// fair-coin weights. The result restricts to every node measure.
template <class Q>
Measure<Q> extend_tree(const Ppt<Q>& ppt, const std::vector<Context>& nodes) {
    auto g = compatibility_graph(ppt, nodes);

    // cycle detection by union-find over the edge list
    std::vector<int> parent(nodes.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    for (auto [i, j] : g.edges) {
        int a = find(i), b = find(j);
        if (a == b) throw NotAForest("compatibility graph contains a cycle");
        parent[a] = b;
    }

    std::vector<std::vector<int>> adj(nodes.size());
    for (auto [i, j] : g.edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }

    std::optional<Measure<Q>> acc;
    std::vector<GeneratorId> acc_gens;
    std::vector<bool> visited(nodes.size(), false);
    for (std::size_t root = 0; root < nodes.size(); ++root) {
        if (visited[root]) continue;
        // BFS-glue one tree component
        Measure<Q> comp = ppt.measure_on(nodes[root].gens);
        std::vector<GeneratorId> comp_gens = nodes[root].gens;
        visited[root] = true;
        std::vector<std::pair<int, int>> queue;  // (node, parent)
        for (int nb : adj[root]) queue.emplace_back(nb, static_cast<int>(root));
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            auto [v, par] = queue[qi];
            if (visited[v]) continue;
            visited[v] = true;
            std::vector<GeneratorId> ovl;
            std::set_intersection(nodes[v].gens.begin(), nodes[v].gens.end(), comp_gens.begin(),
                                  comp_gens.end(), std::back_inserter(ovl));
            if (!std::includes(nodes[par].gens.begin(), nodes[par].gens.end(), ovl.begin(), ovl.end()))
                throw NoRunningIntersectionOrder(
                    "node {" + nodes[v].label() +
                    "} overlaps earlier nodes outside its tree parent {" + nodes[par].label() + "}");
            auto glued = glue_pair(comp, comp_gens, ppt.measure_on(nodes[v].gens), nodes[v].gens);
            comp = std::move(glued.first);
            comp_gens = std::move(glued.second);
            for (int nb : adj[v]) queue.emplace_back(nb, v);
        }
        if (!acc) {
            acc = std::move(comp);
            acc_gens = std::move(comp_gens);
        } else {
            auto prod = product_disjoint(*acc, acc_gens, comp, comp_gens);
            acc = std::move(prod.first);
            acc_gens = std::move(prod.second);
        }
    }

    std::vector<GeneratorId> missing;
    for (int gid = 0; gid < ppt.pba.n; ++gid)
        if (!std::binary_search(acc_gens.begin(), acc_gens.end(), gid)) missing.push_back(gid);
    if (!acc) return Measure<Q>::uniform(ppt.pba.n);
    if (!missing.empty()) {
        auto prod = product_disjoint(*acc, acc_gens, Measure<Q>::uniform(static_cast<int>(missing.size())),
                                     missing);
        acc = std::move(prod.first);
    }
    return *acc;
}

// ---------------------------------------------------------------------------
// Topology detection for the bipartite fixtures.

/// Splits a PPT whose contexts are exactly the cross pairs of a complete
/// bipartite compatibility pattern into (left, right) generator sides.
inline std::pair<std::vector<GeneratorId>, std::vector<GeneratorId>> detect_bipartite(
    const Pba& pba, std::size_t left, std::size_t right) {
    if (pba.n != static_cast<int>(left + right))
        throw WrongTopology("expected " + std::to_string(left + right) + " generators");
    if (pba.contexts.size() != left * right)
        throw WrongTopology("expected " + std::to_string(left * right) + " two-generator contexts");
    for (const auto& c : pba.contexts)
        if (c.arity() != 2) throw WrongTopology("contexts must be generator pairs");
    // 2-color by BFS over the context pairs
    std::vector<int> color(pba.n, -1);
    std::vector<std::vector<int>> adj(pba.n);
    for (const auto& c : pba.contexts) {
        adj[c.gens[0]].push_back(c.gens[1]);
        adj[c.gens[1]].push_back(c.gens[0]);
    }
    std::vector<int> queue = {0};
    color[0] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (int u : adj[v]) {
            if (color[u] < 0) {
                color[u] = 1 - color[v];
                queue.push_back(u);
            } else if (color[u] == color[v]) {
                throw WrongTopology("compatibility pattern is not bipartite");
            }
        }
    }
    std::vector<GeneratorId> side0, side1;
    for (int v = 0; v < pba.n; ++v) {
        if (color[v] < 0) throw WrongTopology("generator belongs to no context");
        (color[v] == 0 ? side0 : side1).push_back(v);
    }
    if (side0.size() != left && side0.size() != right) throw WrongTopology("side sizes do not match");
    if (side0.size() != left) std::swap(side0, side1);
    if (side0.size() != left || side1.size() != right) throw WrongTopology("side sizes do not match");
    // completeness of the bipartite pattern
    for (auto a : side0)
        for (auto b : side1)
            if (pba.containing_context({a, b}) < 0)
                throw WrongTopology("missing context for a cross pair");
    return {side0, side1};
}

// ---------------------------------------------------------------------------
// CH condition for the Bell square.

template <class Q>
struct ChshReport {
    bool representable = false;
    std::vector<GeneratorId> left, right;
    std::vector<Q> alphas, betas;  // per right-side generator, in order
    Q alpha_max = Q(0), beta_min = Q(0);
};

namespace detail {

/// Bell-Wigner block data for left pair (l1,l2) against right generator s.
template <class Q>
struct BwBlock {
    CorrelationSpec spec;    // singletons {0},{1},{2} = l1,l2,s and pairs {02},{12}
    std::vector<Q> p;        // p_l1, p_l2, p_s, q_l1s, q_l2s
};

template <class Q>
BwBlock<Q> bw_block(const Ppt<Q>& ppt, GeneratorId l1, GeneratorId l2, GeneratorId s) {
    BwBlock<Q> out;
    out.spec = CorrelationSpec(3, {0b001, 0b010, 0b100, 0b101, 0b110});
    auto pair_value = [&](GeneratorId a, GeneratorId b) {
        auto m = ppt.measure_on({a, b});
        int pos = a < b ? 0 : 1;  // measure_on sorts its generator list
        return m.value(meet(generator_element(pos, 2), generator_element(1 - pos, 2)));
    };
    auto single_value = [&](GeneratorId a) {
        auto m = ppt.measure_on({a});
        return m.value(generator_element(0, 1));
    };
    out.p = {single_value(l1), single_value(l2), single_value(s), pair_value(l1, s), pair_value(l2, s)};
    return out;
}

}  // namespace detail

/// Interval-overlap condition for the Bell square: the unobserved pair value
/// p12 must admit a common choice across both right-side blocks. True iff the
/// PPT is classically representable.
template <class Q>
ChshReport<Q> chsh_condition(const Ppt<Q>& ppt) {
    auto [left, right] = detect_bipartite(ppt.pba, 2, 2);
    ChshReport<Q> rep;
    rep.left = left;
    rep.right = right;
    for (auto s : right) {
        auto block = detail::bw_block(ppt, left[0], left[1], s);
        auto [alpha, beta] = bounds_missing_term(block.p, block.spec, 0b011);
        rep.alphas.push_back(alpha);
        rep.betas.push_back(beta);
    }
    rep.alpha_max = *std::max_element(rep.alphas.begin(), rep.alphas.end());
    rep.beta_min = *std::min_element(rep.betas.begin(), rep.betas.end());
    rep.representable = scalar_traits<Q>::leq(rep.alpha_max, rep.beta_min);
    return rep;
}

/// Constructive route for the Bell square: pick a common p12 inside the
/// interval overlap, extend both three-generator blocks and glue them. Empty
/// optional when no common value exists.
template <class Q>
std::optional<Measure<Q>> bell_glue_extension(const Ppt<Q>& ppt) {
    auto [left, right] = detect_bipartite(ppt.pba, 2, 2);
    std::vector<ThreeSpec<Q>> specs;
    Q lo, hi;
    bool first = true;
    for (auto s : right) {
        auto block = detail::bw_block(ppt, left[0], left[1], s);
        ThreeSpec<Q> ts{block.p[0], block.p[1], block.p[2], block.p[3], block.p[4]};
        auto [a, b] = missing_pair_interval(ts);
        specs.push_back(ts);
        if (first) { lo = a; hi = b; first = false; }
        else { lo = std::max(lo, a); hi = std::min(hi, b); }
    }
    if (!scalar_traits<Q>::leq(lo, hi)) return std::nullopt;
    Q p12 = (lo + hi) / 2;
    std::vector<Measure<Q>> parts;
    for (const auto& ts : specs) {
        auto box = chi_eta_intervals(ts);
        Q eta = std::max(box.eta_lo, p12 - box.chi_hi);
        Q chi = p12 - eta;
        parts.push_back(extend_three(ts, chi, eta));
    }
    // local generator order inside each part is (l1, l2, s)
    auto glued = glue_pair(parts[0], {left[0], left[1], right[0]}, parts[1],
                           {left[0], left[1], right[1]});
    return glued.first;
}

// ---------------------------------------------------------------------------
// The 3x3 bipartite condition.

template <class Q>
struct ExpressionBound {
    std::array<Rat, 4> pattern;  // coefficients over (p12, p13, p23, p123) of the left triple
    int type = 0;                // 1..4
    Q lo, hi;                    // max over s of the LP minimum / min over s of the LP maximum
};

template <class Q>
struct ThreeByThreeReport {
    bool feasible = false;
    std::vector<GeneratorId> left, right;
    std::vector<ExpressionBound<Q>> system;  // 11 two-sided constraints
    std::vector<Q> solution;                 // (p12, p13, p23, p123) when feasible
    std::optional<Measure<Q>> extension;     // glued measure over all six generators
};

namespace detail {

inline const std::vector<std::pair<std::array<int, 4>, int>>& expression_patterns() {
    static const std::vector<std::pair<std::array<int, 4>, int>> pats = {
        {{1, 0, 0, 0}, 1},  {{0, 1, 0, 0}, 1},  {{0, 0, 1, 0}, 1},  {{0, 0, 0, 1}, 1},
        {{1, 0, 0, -1}, 2}, {{0, 1, 0, -1}, 2}, {{0, 0, 1, -1}, 2},
        {{1, 1, 0, -1}, 3}, {{1, 0, 1, -1}, 3}, {{0, 1, 1, -1}, 3},
        {{1, 1, 1, -1}, 4},
    };
    return pats;
}

}  // namespace detail

/// Feasibility of lo <= pattern.x <= hi over the four nonnegative unknowns,
/// by LP with slack and surplus variables.
template <class Q>
std::pair<bool, std::vector<Q>> solve_interval_system(const std::vector<ExpressionBound<Q>>& system) {
    std::size_t rows = 2 * system.size(), vars = 4 + rows;
    std::vector<std::vector<Q>> M(rows, std::vector<Q>(vars, Q(0)));
    std::vector<Q> rhs(rows);
    for (std::size_t e = 0; e < system.size(); ++e) {
        for (int j = 0; j < 4; ++j) {
            M[2 * e][j] = from_rat<Q>(system[e].pattern[j]);
            M[2 * e + 1][j] = from_rat<Q>(system[e].pattern[j]);
        }
        M[2 * e][4 + 2 * e] = Q(1);
        rhs[2 * e] = system[e].hi;
        M[2 * e + 1][4 + 2 * e + 1] = Q(-1);
        rhs[2 * e + 1] = system[e].lo;
    }
    auto sol = solve_feasibility(M, rhs);
    if (sol.status != LpStatus::Optimal) return {false, {}};
    return {true, std::vector<Q>(sol.x.begin(), sol.x.begin() + 4)};
}

/// Decides extensibility of the 3x3 bipartite PPT through the 11-expression
/// system in the left-triple unknowns (p12, p13, p23, p123): per right-side
/// generator the exact LP range of each expression is computed over the
/// observed block, the ranges are intersected across s, and feasibility of
/// the resulting 4-variable system is decided by LP. When feasible, the
/// partial extensions are glued into a measure over all six generators.
template <class Q>
ThreeByThreeReport<Q> three_by_three_condition(const Ppt<Q>& ppt) {
    auto [left, right] = detect_bipartite(ppt.pba, 3, 3);
    ThreeByThreeReport<Q> rep;
    rep.left = left;
    rep.right = right;

    // Observed block for each s: generators (left[0],left[1],left[2],s) as
    // local 0..3; monomials: singletons + cross pairs {03},{13},{23}.
    CorrelationSpec base(4, {0b0001, 0b0010, 0b0100, 0b1000, 0b1001, 0b1010, 0b1100});
    const std::array<std::uint32_t, 4> unknown_masks = {0b0011, 0b0101, 0b0110, 0b0111};

    auto block_vector = [&](GeneratorId s) {
        std::vector<Q> p(7);
        auto single_value = [&](GeneratorId a) {
            return ppt.measure_on({a}).value(generator_element(0, 1));
        };
        auto pair_value = [&](GeneratorId a, GeneratorId b) {
            auto m = ppt.measure_on({a, b});
            int pos = a < b ? 0 : 1;
            return m.value(meet(generator_element(pos, 2), generator_element(1 - pos, 2)));
        };
        for (int i = 0; i < 3; ++i) p[i] = single_value(left[i]);
        p[3] = single_value(s);
        for (int i = 0; i < 3; ++i) p[4 + i] = pair_value(left[i], s);
        return p;
    };

    auto A = membership_constraint_matrix<Q>(base);
    const auto& pats = detail::expression_patterns();
    for (const auto& [pat, type] : pats) {
        ExpressionBound<Q> eb;
        for (int j = 0; j < 4; ++j) eb.pattern[j] = pat[j];
        eb.type = type;
        bool first = true;
        for (auto s : right) {
            std::vector<Q> b = block_vector(s);
            b.push_back(Q(1));
            std::vector<Q> c(std::size_t(1) << 4, Q(0));
            for (std::uint32_t eps = 0; eps < c.size(); ++eps)
                for (int j = 0; j < 4; ++j)
                    if ((eps & unknown_masks[j]) == unknown_masks[j]) c[eps] += Q(pat[j]);
            auto lo_sol = solve_lp(A, b, c);
            if (lo_sol.status == LpStatus::Infeasible)
                throw InfeasibleBase("observed block for one right-side generator is not a measure");
            std::vector<Q> neg(c);
            for (auto& x : neg) x = -x;
            auto hi_sol = solve_lp(A, b, neg);
            Q lo = lo_sol.objective, hi = -hi_sol.objective;
            if (first) { eb.lo = lo; eb.hi = hi; first = false; }
            else { eb.lo = std::max(eb.lo, lo); eb.hi = std::min(eb.hi, hi); }
        }
        rep.system.push_back(eb);
    }

    auto [feasible, solution] = solve_interval_system(rep.system);
    rep.feasible = feasible;
    if (!rep.feasible) return rep;
    rep.solution = std::move(solution);

    // Build the glued extension: one partial extension per s with the common
    // left-triple values, chained along the shared left block.
    CorrelationSpec full(4, {0b0001, 0b0010, 0b0100, 0b1000, 0b1001, 0b1010, 0b1100, 0b0011, 0b0101,
                             0b0110, 0b0111});
    std::optional<Measure<Q>> acc;
    std::vector<GeneratorId> acc_gens;
    for (auto s : right) {
        std::vector<Q> p = block_vector(s);
        for (int j = 0; j < 4; ++j) p.push_back(rep.solution[j]);
        auto cert = membership(p, full);
        if (!cert.feasible)
            throw InternalInconsistency("system feasible but a per-s block refused the common values");
        auto part = Measure<Q>::from_weights(4, cert.lambda);
        // local order (l1,l2,l3,s): sort into global generator order
        std::vector<GeneratorId> gens = {left[0], left[1], left[2], s};
        std::vector<GeneratorId> sorted_gens(gens);
        std::sort(sorted_gens.begin(), sorted_gens.end());
        std::vector<int> perm(4);
        for (int j = 0; j < 4; ++j)
            perm[j] = static_cast<int>(std::find(gens.begin(), gens.end(), sorted_gens[j]) - gens.begin());
        std::vector<Q> rew(16, Q(0));
        for (std::uint32_t eps = 0; eps < 16; ++eps) {
            std::uint32_t to = 0;
            for (int j = 0; j < 4; ++j) to |= ((eps >> perm[j]) & 1u) << j;
            rew[to] = part.weight(eps);
        }
        auto sorted_part = Measure<Q>::from_weights(4, std::move(rew));
        if (!acc) {
            acc = sorted_part;
            acc_gens = sorted_gens;
        } else {
            auto glued = glue_pair(*acc, acc_gens, sorted_part, sorted_gens);
            acc = std::move(glued.first);
            acc_gens = std::move(glued.second);
        }
    }
    rep.extension = std::move(acc);
    return rep;
}

/// Groups facets of the per-s block polytope by the 11 expression patterns
/// over the unknown coordinates. Facets touching no unknown coordinate are
/// counted as given-only.
struct FacetTypeCount {
    std::array<int, 4> per_type = {0, 0, 0, 0};
    int typed = 0;
    int given_only = 0;
    int unmatched = 0;
};

inline FacetTypeCount classify_facet_types(const std::vector<Facet>& facets,
                                           const std::array<int, 4>& unknown_indices) {
    FacetTypeCount out;
    for (const auto& f : facets) {
        std::array<Rat, 4> u;
        bool zero = true;
        for (int j = 0; j < 4; ++j) {
            u[j] = f.coeffs[unknown_indices[j]];
            if (u[j] != 0) zero = false;
        }
        if (zero) {
            ++out.given_only;
            continue;
        }
        bool matched = false;
        for (const auto& [pat, type] : detail::expression_patterns()) {
            int pivot = -1;
            for (int j = 0; j < 4 && pivot < 0; ++j)
                if (pat[j] != 0) pivot = j;
            if (u[pivot] == 0) continue;
            Rat kappa = u[pivot] / pat[pivot];
            bool ok = kappa != 0;
            for (int j = 0; j < 4 && ok; ++j) ok = (u[j] == kappa * pat[j]);
            if (ok) {
                ++out.per_type[type - 1];
                ++out.typed;
                matched = true;
                break;
            }
        }
        if (!matched) ++out.unmatched;
    }
    return out;
}

}  // namespace pba
