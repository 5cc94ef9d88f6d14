#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "pba/errors.hpp"
#include "pba/measure.hpp"
#include "pba/ppt.hpp"

namespace pba {

constexpr double kQuantumTol = 1e-9;
constexpr double kDedupTol = 1e-7;

/// Small dense complex matrix, row-major.
struct CMatrix {
    int dim = 0;
    std::vector<std::complex<double>> a;

    CMatrix() = default;
    explicit CMatrix(int d) : dim(d), a(std::size_t(d) * d, {0.0, 0.0}) {}

    static CMatrix identity(int d) {
        CMatrix m(d);
        for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
        return m;
    }

    std::complex<double>& at(int r, int c) { return a[std::size_t(r) * dim + c]; }
    const std::complex<double>& at(int r, int c) const { return a[std::size_t(r) * dim + c]; }

    CMatrix operator*(const CMatrix& o) const {
        check_dim(o);
        CMatrix out(dim);
        for (int i = 0; i < dim; ++i)
            for (int k = 0; k < dim; ++k) {
                auto v = at(i, k);
                if (v == std::complex<double>(0.0, 0.0)) continue;
                for (int j = 0; j < dim; ++j) out.at(i, j) += v * o.at(k, j);
            }
        return out;
    }

    CMatrix operator+(const CMatrix& o) const {
        check_dim(o);
        CMatrix out = *this;
        for (std::size_t i = 0; i < a.size(); ++i) out.a[i] += o.a[i];
        return out;
    }

    CMatrix operator-(const CMatrix& o) const {
        check_dim(o);
        CMatrix out = *this;
        for (std::size_t i = 0; i < a.size(); ++i) out.a[i] -= o.a[i];
        return out;
    }

    CMatrix adjoint() const {
        CMatrix out(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) out.at(i, j) = std::conj(at(j, i));
        return out;
    }

    double max_abs_diff(const CMatrix& o) const {
        check_dim(o);
        double m = 0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - o.a[i]));
        return m;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& v : a) m = std::max(m, std::abs(v));
        return m;
    }

    /// Tensor product, left factor on the high-order index.
    CMatrix kron(const CMatrix& o) const {
        CMatrix out(dim * o.dim);
        for (int i1 = 0; i1 < dim; ++i1)
            for (int j1 = 0; j1 < dim; ++j1)
                for (int i2 = 0; i2 < o.dim; ++i2)
                    for (int j2 = 0; j2 < o.dim; ++j2)
                        out.at(i1 * o.dim + i2, j1 * o.dim + j2) = at(i1, j1) * o.at(i2, j2);
        return out;
    }

private:
    void check_dim(const CMatrix& o) const {
        if (dim != o.dim) throw DimMismatch("matrix dimensions differ");
    }
};

inline bool check_projection(const CMatrix& p, double tol = kQuantumTol) {
    return p.max_abs_diff(p.adjoint()) <= tol && (p * p).max_abs_diff(p) <= tol;
}

inline bool commutes(const CMatrix& p, const CMatrix& q, double tol = kQuantumTol) {
    return (p * q).max_abs_diff(q * p) <= tol;
}

/// Pure vector state or density matrix.
class QuantumState {
public:
    static QuantumState pure(std::vector<std::complex<double>> psi) {
        double norm = 0;
        for (const auto& c : psi) norm += std::norm(c);
        if (std::abs(norm - 1.0) > 1e-6) throw Error("state vector is not normalized");
        QuantumState s;
        s.psi_ = std::move(psi);
        return s;
    }

    static QuantumState density(CMatrix rho, double tol = kQuantumTol) {
        if (rho.max_abs_diff(rho.adjoint()) > tol) throw Error("density matrix not hermitian");
        std::complex<double> tr = 0;
        for (int i = 0; i < rho.dim; ++i) tr += rho.at(i, i);
        if (std::abs(tr - 1.0) > 1e-6) throw Error("density matrix trace must be 1");
        QuantumState s;
        s.rho_ = std::move(rho);
        return s;
    }

    int dim() const { return rho_.dim ? rho_.dim : static_cast<int>(psi_.size()); }

    /// (psi, P psi) or tr(rho P); the imaginary part vanishes for hermitian P.
    double expectation(const CMatrix& p) const {
        if (p.dim != dim()) throw DimMismatch("state/operator dimension mismatch");
        std::complex<double> v = 0;
        if (!psi_.empty()) {
            for (int i = 0; i < p.dim; ++i)
                for (int j = 0; j < p.dim; ++j) v += std::conj(psi_[i]) * p.at(i, j) * psi_[j];
        } else {
            for (int i = 0; i < p.dim; ++i)
                for (int j = 0; j < p.dim; ++j) v += rho_.at(i, j) * p.at(j, i);
        }
        return v.real();
    }

private:
    std::vector<std::complex<double>> psi_;
    CMatrix rho_;
};

/// A finite projection algebra: labeled generator projections, maximal
/// commuting generator subsets as contexts, and the per-context closure
/// under meet/join/complement.
struct ProjectionPba {
    std::vector<std::string> labels;
    std::vector<CMatrix> gens;
    std::vector<std::vector<int>> contexts;           // maximal commuting index sets
    std::vector<std::vector<CMatrix>> context_closure; // deduplicated, per context
    std::vector<CMatrix> closure;                     // union, deduplicated

    int dim() const { return gens.empty() ? 0 : gens[0].dim; }

    Pba abstract_pba() const {
        std::vector<Context> ctxs;
        for (const auto& c : contexts) ctxs.push_back(Context(c));
        return Pba(static_cast<int>(gens.size()), ctxs);
    }

    bool contains(const CMatrix& p, double tol = kDedupTol) const {
        for (const auto& q : closure)
            if (p.max_abs_diff(q) <= tol) return true;
        return false;
    }
};

namespace detail {

inline void insert_unique(std::vector<CMatrix>& set, const CMatrix& p, double tol) {
    for (const auto& q : set)
        if (q.max_abs_diff(p) <= tol) return;
    set.push_back(p);
}

/// Closure of a commuting family under P*Q, P+Q-PQ and 1-P.
inline std::vector<CMatrix> boolean_closure(const std::vector<CMatrix>& seed, double tol) {
    int d = seed.empty() ? 1 : seed[0].dim;
    std::vector<CMatrix> set;
    insert_unique(set, CMatrix(d), tol);
    insert_unique(set, CMatrix::identity(d), tol);
    for (const auto& p : seed) insert_unique(set, p, tol);
    bool grew = true;
    while (grew) {
        grew = false;
        std::size_t size = set.size();
        for (std::size_t i = 0; i < size; ++i) {
            CMatrix comp = CMatrix::identity(d) - set[i];
            if (!std::any_of(set.begin(), set.end(),
                             [&](const CMatrix& q) { return q.max_abs_diff(comp) <= tol; })) {
                set.push_back(comp);
                grew = true;
            }
            for (std::size_t j = i; j < size; ++j) {
                CMatrix m = set[i] * set[j];
                CMatrix u = set[i] + set[j] - m;
                for (const CMatrix* cand : {&m, &u}) {
                    if (!std::any_of(set.begin(), set.end(), [&](const CMatrix& q) {
                            return q.max_abs_diff(*cand) <= tol;
                        })) {
                        set.push_back(*cand);
                        grew = true;
                    }
                }
            }
        }
        if (set.size() > 4096) throw LimitExceeded("projection closure did not stabilize at desk scale");
    }
    return set;
}

}  // namespace detail

/// Builds the projection PBA of a labeled generator list: contexts are the
/// maximal commuting subsets, each closed under the Boolean operations.
inline ProjectionPba build_projection_pba(std::vector<std::string> labels, std::vector<CMatrix> gens,
                                          double tol = kQuantumTol, double dedup_tol = kDedupTol) {
    if (labels.size() != gens.size()) throw Error("label/generator count mismatch");
    if (gens.empty()) throw Error("at least one projection required");
    if (gens.size() > 16) throw LimitExceeded("generator count above the desk-scale limit");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].dim != gens[0].dim) throw DimMismatch("projections on different spaces");
        if (!check_projection(gens[i], tol))
            throw NotAProjection("input '" + labels[i] + "' is not a projection");
    }
    ProjectionPba out;
    out.labels = std::move(labels);
    out.gens = std::move(gens);

    int n = static_cast<int>(out.gens.size());
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) adj[i][j] = adj[j][i] = commutes(out.gens[i], out.gens[j], tol);
    for (auto& clique : detail::maximal_cliques(adj)) {
        std::sort(clique.begin(), clique.end());
        out.contexts.push_back(clique);
    }
    std::sort(out.contexts.begin(), out.contexts.end());

    for (const auto& ctx : out.contexts) {
        std::vector<CMatrix> seed;
        for (int i : ctx) seed.push_back(out.gens[i]);
        out.context_closure.push_back(detail::boolean_closure(seed, dedup_tol));
        for (const auto& p : out.context_closure.back()) detail::insert_unique(out.closure, p, dedup_tol);
    }
    return out;
}

/// Projection attached to an abstract element of a context's free algebra:
/// the orthogonal sum of its atoms' projectors.
inline CMatrix element_projection(const ProjectionPba& ppba, int ctx_index, const Element& e) {
    const auto& ctx = ppba.contexts[ctx_index];
    int k = static_cast<int>(ctx.size());
    if (e.arity() != k) throw ArityMismatch("element arity does not match the context");
    int d = ppba.dim();
    CMatrix out(d);
    for (std::uint32_t atom = 0; atom < (std::uint32_t(1) << k); ++atom) {
        if (!e.contains_atom(atom)) continue;
        CMatrix prod = CMatrix::identity(d);
        for (int j = 0; j < k; ++j) {
            const CMatrix& p = ppba.gens[ctx[j]];
            prod = ((atom >> j) & 1u) ? prod * p : prod * (CMatrix::identity(d) - p);
        }
        out = out + prod;
    }
    return out;
}

/// The state each context inherits from a quantum state: intersection values
/// (psi, P_S psi) expanded into atom weights. Tiny negative weights within
/// tolerance are clamped; anything worse is an inconsistency.
template <class S>
State<double> quantum_state_on_pba(const S& state, const ProjectionPba& ppba) {
    State<double> out;
    for (std::size_t ci = 0; ci < ppba.contexts.size(); ++ci) {
        const auto& ctx = ppba.contexts[ci];
        int k = static_cast<int>(ctx.size());
        std::vector<double> values(std::size_t(1) << k);
        values[0] = 1.0;
        for (std::uint32_t mask = 1; mask < (std::uint32_t(1) << k); ++mask) {
            CMatrix prod = CMatrix::identity(ppba.dim());
            for (int j = 0; j < k; ++j)
                if ((mask >> j) & 1u) prod = prod * ppba.gens[ctx[j]];
            values[mask] = state.expectation(prod);
        }
        try {
            out.measures.push_back(measure_from_intersections<double>(k, values));
        } catch (const NotAMeasure& e) {
            throw InternalInconsistency(std::string("quantum state broke tolerance: ") + e.what());
        }
    }
    return out;
}

/// The free PPT of a projection family under one quantum state: contexts are
/// the maximal commuting subsets, no algebraic identifications are imposed.
inline Ppt<double> free_state_from_projections(const ProjectionPba& ppba, const QuantumState& state) {
    return Ppt<double>{ppba.abstract_pba(), quantum_state_on_pba(state, ppba)};
}

inline Ppt<double> free_state_from_projections(std::vector<std::string> labels,
                                               std::vector<CMatrix> projs, const QuantumState& state) {
    auto ppba = build_projection_pba(std::move(labels), std::move(projs));
    return free_state_from_projections(ppba, state);
}

// ---------------------------------------------------------------------------
// Spin-1/2 fixtures over one or two particles.

/// Projector onto spin-up along the direction at `angle` (radians) in the
/// x-z plane: (I + cos sz + sin sx)/2.
inline CMatrix spin_up_projector(double angle) {
    CMatrix p(2);
    double c = std::cos(angle), s = std::sin(angle);
    p.at(0, 0) = (1.0 + c) / 2.0;
    p.at(0, 1) = s / 2.0;
    p.at(1, 0) = s / 2.0;
    p.at(1, 1) = (1.0 - c) / 2.0;
    return p;
}

/// The two-particle singlet vector (|01> - |10>)/sqrt(2).
inline QuantumState singlet_state() {
    double r = 1.0 / std::sqrt(2.0);
    return QuantumState::pure({0.0, r, -r, 0.0});
}

/// CHSH projector family: first-particle analyzers at angles_a, second at
/// angles_b, as 4x4 tensor products.
inline std::pair<std::vector<std::string>, std::vector<CMatrix>> chsh_projectors(
    const std::vector<double>& angles_a, const std::vector<double>& angles_b) {
    std::vector<std::string> labels;
    std::vector<CMatrix> projs;
    CMatrix id2 = CMatrix::identity(2);
    for (std::size_t i = 0; i < angles_a.size(); ++i) {
        labels.push_back("A" + std::to_string(i + 1));
        projs.push_back(spin_up_projector(angles_a[i]).kron(id2));
    }
    for (std::size_t j = 0; j < angles_b.size(); ++j) {
        labels.push_back("B" + std::to_string(j + 1));
        projs.push_back(id2.kron(spin_up_projector(angles_b[j])));
    }
    return {labels, projs};
}

}  // namespace pba
