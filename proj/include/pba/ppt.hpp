#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pba/element.hpp"
#include "pba/errors.hpp"
#include "pba/measure.hpp"

namespace pba {

using GeneratorId = int;

/// A maximal set of jointly measurable generators, identifying the free
/// Boolean algebra over them.
struct Context {
    std::vector<GeneratorId> gens;  // sorted, unique, nonempty

    Context() = default;
    explicit Context(std::vector<GeneratorId> g) : gens(std::move(g)) {
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        if (gens.empty()) throw Error("context must be nonempty");
    }

    int arity() const { return static_cast<int>(gens.size()); }

    bool contains(GeneratorId g) const { return std::binary_search(gens.begin(), gens.end(), g); }

    int local_index(GeneratorId g) const {
        auto it = std::lower_bound(gens.begin(), gens.end(), g);
        if (it == gens.end() || *it != g) throw IndexOutOfRange("generator not in context");
        return static_cast<int>(it - gens.begin());
    }

    bool subset_of(const Context& other) const {
        return std::includes(other.gens.begin(), other.gens.end(), gens.begin(), gens.end());
    }

    std::vector<GeneratorId> shared_with(const Context& other) const {
        std::vector<GeneratorId> out;
        std::set_intersection(gens.begin(), gens.end(), other.gens.begin(), other.gens.end(),
                              std::back_inserter(out));
        return out;
    }

    std::vector<GeneratorId> union_with(const Context& other) const {
        std::vector<GeneratorId> out;
        std::set_union(gens.begin(), gens.end(), other.gens.begin(), other.gens.end(),
                       std::back_inserter(out));
        return out;
    }

    bool operator==(const Context& other) const { return gens == other.gens; }
    bool operator<(const Context& other) const { return gens < other.gens; }

    std::string label(const std::vector<std::string>* names = nullptr) const {
        std::string s;
        for (auto g : gens) {
            if (!s.empty()) s += ",";
            s += names ? (*names)[g] : "A" + std::to_string(g + 1);
        }
        return s;
    }
};

/// A partial Boolean algebra presented by its maximal contexts over n global
/// generators. Subalgebras are implicit.
struct Pba {
    int n = 0;
    std::vector<Context> contexts;

    Pba() = default;
    Pba(int n_gens, std::vector<Context> ctxs) : n(n_gens), contexts(std::move(ctxs)) {
        if (n < 0) throw Error("negative generator count");
        for (const auto& c : contexts)
            for (auto g : c.gens)
                if (g < 0 || g >= n) throw IndexOutOfRange("context generator outside 0..n-1");
        for (std::size_t i = 0; i < contexts.size(); ++i)
            for (std::size_t j = 0; j < contexts.size(); ++j)
                if (i != j && contexts[i].subset_of(contexts[j]))
                    throw Error("contexts must be maximal: " + contexts[i].label() + " is inside " +
                                contexts[j].label());
    }

    /// Index of some context containing every generator in `gens`, or -1.
    int containing_context(const std::vector<GeneratorId>& gens) const {
        for (std::size_t i = 0; i < contexts.size(); ++i) {
            bool ok = true;
            for (auto g : gens)
                if (!contexts[i].contains(g)) { ok = false; break; }
            if (ok) return static_cast<int>(i);
        }
        return -1;
    }

    bool compatible(GeneratorId a, GeneratorId b) const {
        return containing_context({a, b}) >= 0;
    }
};

/// One measure per maximal context, agreeing on shared generators.
template <class Q>
struct State {
    std::vector<Measure<Q>> measures;  // aligned with Pba::contexts
};

template <class Q>
struct Ppt {
    Pba pba;
    State<Q> state;

    const Measure<Q>& measure_of(std::size_t ctx_index) const { return state.measures[ctx_index]; }

    /// Measure induced on any generator set contained in some context.
    Measure<Q> measure_on(const std::vector<GeneratorId>& gens) const {
        int ci = pba.containing_context(gens);
        if (ci < 0) throw NodeNotInPba("generator set lies in no context");
        const Context& c = pba.contexts[ci];
        std::vector<int> kept;
        std::vector<GeneratorId> sorted(gens);
        std::sort(sorted.begin(), sorted.end());
        for (auto g : sorted) kept.push_back(c.local_index(g));
        return state.measures[ci].restrict_to(kept);
    }
};

// ---------------------------------------------------------------------------
// Validation

struct ValidationIssue {
    std::string what;
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> issues;

    void fail(std::string msg) {
        ok = false;
        issues.push_back({std::move(msg)});
    }
};

/// Checks normalization per context and pairwise marginal agreement on
/// shared generators; reports every violating pair.
template <class Q>
ValidationReport validate_ppt(const Ppt<Q>& ppt) {
    using traits = scalar_traits<Q>;
    ValidationReport rep;
    const auto& ctxs = ppt.pba.contexts;
    if (ppt.state.measures.size() != ctxs.size()) {
        rep.fail("state carries " + std::to_string(ppt.state.measures.size()) + " measures for " +
                 std::to_string(ctxs.size()) + " contexts");
        return rep;
    }
    for (std::size_t i = 0; i < ctxs.size(); ++i) {
        const auto& m = ppt.state.measures[i];
        if (m.arity() != ctxs[i].arity()) {
            rep.fail("measure arity mismatch on context {" + ctxs[i].label() + "}");
            continue;
        }
        Q total(0);
        for (std::uint32_t a = 0; a < m.atom_capacity(); ++a) {
            if (!traits::nonneg(m.weight(a)))
                rep.fail("negative weight on context {" + ctxs[i].label() + "}");
            total += m.weight(a);
        }
        if (!traits::eq(total, Q(1))) rep.fail("measure on {" + ctxs[i].label() + "} not normalized");
    }
    if (!rep.ok) return rep;
    for (std::size_t i = 0; i < ctxs.size(); ++i)
        for (std::size_t j = i + 1; j < ctxs.size(); ++j) {
            auto shared = ctxs[i].shared_with(ctxs[j]);
            if (shared.empty()) continue;
            std::vector<int> ki, kj;
            for (auto g : shared) {
                ki.push_back(ctxs[i].local_index(g));
                kj.push_back(ctxs[j].local_index(g));
            }
            auto mi = ppt.state.measures[i].restrict_to(ki);
            auto mj = ppt.state.measures[j].restrict_to(kj);
            if (mi != mj)
                rep.fail("marginals disagree on {" + Context(shared).label() + "} between contexts {" +
                         ctxs[i].label() + "} and {" + ctxs[j].label() + "}");
        }
    return rep;
}

// ---------------------------------------------------------------------------
// (K-S): pairwise compatibility implies joint compatibility

struct KsResult {
    bool holds = true;
    std::vector<GeneratorId> witness;  // pairwise-compatible set inside no context
};

namespace detail {

// Bron-Kerbosch maximal cliques over an adjacency matrix.
inline void bron_kerbosch(std::vector<int> r, std::vector<int> p, std::vector<int> x,
                          const std::vector<std::vector<bool>>& adj,
                          std::vector<std::vector<int>>& out) {
    if (p.empty() && x.empty()) {
        out.push_back(r);
        return;
    }
    std::vector<int> p_copy = p;
    for (int v : p_copy) {
        std::vector<int> r2 = r;
        r2.push_back(v);
        std::vector<int> p2, x2;
        for (int u : p)
            if (adj[u][v]) p2.push_back(u);
        for (int u : x)
            if (adj[u][v]) x2.push_back(u);
        bron_kerbosch(std::move(r2), std::move(p2), std::move(x2), adj, out);
        p.erase(std::find(p.begin(), p.end(), v));
        x.push_back(v);
    }
}

inline std::vector<std::vector<int>> maximal_cliques(const std::vector<std::vector<bool>>& adj) {
    std::vector<int> p(adj.size());
    for (std::size_t i = 0; i < adj.size(); ++i) p[i] = static_cast<int>(i);
    std::vector<std::vector<int>> out;
    bron_kerbosch({}, std::move(p), {}, adj, out);
    return out;
}

}  // namespace detail

inline KsResult check_ks_property(const Pba& pba) {
    std::vector<std::vector<bool>> adj(pba.n, std::vector<bool>(pba.n, false));
    for (int a = 0; a < pba.n; ++a)
        for (int b = a + 1; b < pba.n; ++b)
            adj[a][b] = adj[b][a] = pba.compatible(a, b);
    for (auto& clique : detail::maximal_cliques(adj)) {
        if (clique.size() < 3) continue;  // pairs are compatible by construction
        std::sort(clique.begin(), clique.end());
        if (pba.containing_context(clique) < 0) return {false, clique};
    }
    return {true, {}};
}

// ---------------------------------------------------------------------------
// Completeness and separation of state collections

struct CompletenessResult {
    bool holds = true;
    int context = -1;
    std::optional<Element> witness;  // a nonzero element with all state values zero
};

template <class Q>
CompletenessResult check_complete(const Pba& pba, const std::vector<State<Q>>& states) {
    using traits = scalar_traits<Q>;
    for (std::size_t ci = 0; ci < pba.contexts.size(); ++ci) {
        int k = pba.contexts[ci].arity();
        for (std::uint32_t a = 0; a < (std::uint32_t(1) << k); ++a) {
            bool hit = false;
            for (const auto& s : states)
                if (!traits::is_zero(s.measures[ci].weight(a))) { hit = true; break; }
            if (!hit) return {false, static_cast<int>(ci), Element::atom(k, a)};
        }
    }
    return {true, -1, std::nullopt};
}

struct SeparationResult {
    bool holds = true;
    int context = -1;
    std::optional<std::pair<Element, Element>> witness;
};

/// Exhaustive per-context signature comparison; contexts above 4 generators
/// exceed the 2^(2^k) element budget and are rejected.
template <class Q>
SeparationResult check_separating(const Pba& pba, const std::vector<State<Q>>& states) {
    using traits = scalar_traits<Q>;
    for (std::size_t ci = 0; ci < pba.contexts.size(); ++ci) {
        int k = pba.contexts[ci].arity();
        if (k > 4) throw LimitExceeded("separation check needs contexts with at most 4 generators");
        std::uint32_t atom_count = std::uint32_t(1) << k;
        std::map<std::vector<Q>, std::uint32_t> seen;
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << atom_count); ++mask) {
            std::vector<Q> sig;
            sig.reserve(states.size());
            for (const auto& s : states) {
                Q v(0);
                for (std::uint32_t a = 0; a < atom_count; ++a)
                    if ((mask >> a) & 1u) v += s.measures[ci].weight(a);
                sig.push_back(v);
            }
            auto [it, fresh] = seen.emplace(std::move(sig), mask);
            if (!fresh) {
                Element e1(k), e2(k);
                for (std::uint32_t a = 0; a < atom_count; ++a) {
                    if ((it->second >> a) & 1u) e1.add_atom(a);
                    if ((mask >> a) & 1u) e2.add_atom(a);
                }
                return {false, static_cast<int>(ci), std::make_pair(e1, e2)};
            }
        }
    }
    return {true, -1, std::nullopt};
}

// ---------------------------------------------------------------------------
// Compatibility graphs

struct CompatibilityGraph {
    std::vector<Context> nodes;
    std::vector<std::pair<int, int>> edges;  // i < j, sorted

    bool has_edge(int i, int j) const {
        if (i > j) std::swap(i, j);
        return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
    }
};

/// Nodes are measured subalgebras (generator sets inside some context).
/// An edge joins two nodes whose union is jointly measurable (contained in a
/// context) or whose generator sets overlap (they share measured observables).
template <class Q>
CompatibilityGraph compatibility_graph(const Ppt<Q>& ppt, const std::vector<Context>& nodes) {
    CompatibilityGraph g;
    g.nodes = nodes;
    for (const auto& node : nodes)
        if (ppt.pba.containing_context(node.gens) < 0)
            throw NodeNotInPba("node {" + node.label() + "} lies in no context");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            bool joint = ppt.pba.containing_context(nodes[i].union_with(nodes[j])) >= 0;
            bool overlap = !nodes[i].shared_with(nodes[j]).empty();
            if (joint || overlap) g.edges.emplace_back(i, j);
        }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

/// Collapses every maximal clique whose node-union lies in a context into a
/// single node, repeatedly until stable. Requires (K-S).
inline CompatibilityGraph merge_cliques_once(const CompatibilityGraph& g, const Pba& pba, bool* changed) {
    std::vector<std::vector<bool>> adj(g.nodes.size(), std::vector<bool>(g.nodes.size(), false));
    for (auto [i, j] : g.edges) adj[i][j] = adj[j][i] = true;
    std::set<Context> merged;
    *changed = false;
    for (auto& clique : detail::maximal_cliques(adj)) {
        std::vector<GeneratorId> u;
        for (int idx : clique)
            for (auto gid : g.nodes[idx].gens) u.push_back(gid);
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        if (clique.size() >= 2 && pba.containing_context(u) >= 0) {
            merged.insert(Context(u));
            *changed = true;
        } else {
            for (int idx : clique) merged.insert(g.nodes[idx]);
        }
    }
    CompatibilityGraph out;
    out.nodes.assign(merged.begin(), merged.end());
    for (std::size_t i = 0; i < out.nodes.size(); ++i)
        for (std::size_t j = i + 1; j < out.nodes.size(); ++j) {
            bool joint = pba.containing_context(out.nodes[i].union_with(out.nodes[j])) >= 0;
            bool overlap = !out.nodes[i].shared_with(out.nodes[j]).empty();
            if (joint || overlap) out.edges.emplace_back(i, j);
        }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

inline CompatibilityGraph merge_cliques(const CompatibilityGraph& g, const Pba& pba) {
    auto ks = check_ks_property(pba);
    if (!ks.holds)
        throw KsPropertyRequired("merge_cliques requires the joint-compatibility property; witness {" +
                                 Context(ks.witness).label() + "}");
    CompatibilityGraph cur = g;
    bool changed = true;
    int guard = 0;
    while (changed) {
        cur = merge_cliques_once(cur, pba, &changed);
        if (++guard > 64) throw InternalInconsistency("clique merging did not stabilize");
    }
    return cur;
}

/// Undirected DOT rendering, nodes labeled by generator lists.
inline std::string export_dot(const CompatibilityGraph& g,
                              const std::vector<std::string>* names = nullptr) {
    std::ostringstream os;
    os << "graph compatibility {\n";
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        os << "  n" << i << " [label=\"{" << g.nodes[i].label(names) << "}\"];\n";
    for (auto [i, j] : g.edges) os << "  n" << i << " -- n" << j << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace pba
