#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pba/errors.hpp"
#include "pba/scalar.hpp"

namespace pba {

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class Q>
struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    Q objective = Q(0);
    std::vector<Q> x;       // primal solution when Optimal
    std::vector<Q> farkas;  // y with A^T y <= 0 and b^T y > 0 when Infeasible
};

/// Dense two-phase simplex for  min c.x  s.t.  A x = b, x >= 0,
/// with Bland's rule throughout (anti-cycling; exact termination for
/// rational scalars, tolerance pivoting for float scalars).
template <class Q>
class SimplexSolver {
public:
    SimplexSolver(std::vector<std::vector<Q>> A, std::vector<Q> b, std::vector<Q> c)
        : m_(A.size()), n_(c.size()), A_(std::move(A)), b_(std::move(b)), c_(std::move(c)) {
        for (const auto& row : A_)
            if (row.size() != n_) throw Error("lp: ragged constraint matrix");
        if (b_.size() != m_) throw Error("lp: rhs size mismatch");
    }

    LpSolution<Q> solve() {
        build_tableau();
        run_phase1();
        if (phase1_objective() > tol()) return infeasible_solution();
        prepare_phase2();
        return run_phase2();
    }

private:
    using traits = scalar_traits<Q>;
    static Q tol() { return traits::tolerance(); }

    std::size_t m_, n_;
    std::vector<std::vector<Q>> A_;
    std::vector<Q> b_, c_;

    // tableau: m_ rows of (n_ originals + m_ artificials + rhs)
    std::vector<std::vector<Q>> T_;
    std::vector<Q> red_;  // reduced cost row, size cols
    Q obj_ = Q(0);        // current objective value (phase-dependent)
    std::vector<std::size_t> basis_;
    std::size_t cols_ = 0;
    bool phase2_ = false;

    void build_tableau() {
        cols_ = n_ + m_;
        T_.assign(m_, std::vector<Q>(cols_ + 1, Q(0)));
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            bool flip = b_[i] < Q(0);
            for (std::size_t j = 0; j < n_; ++j) T_[i][j] = flip ? Q(-A_[i][j]) : A_[i][j];
            T_[i][n_ + i] = Q(1);
            T_[i][cols_] = flip ? Q(-b_[i]) : b_[i];
            basis_[i] = n_ + i;
        }
        // Phase-1 reduced costs: minimize the sum of artificials.
        red_.assign(cols_ + 1, Q(0));
        obj_ = Q(0);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) red_[j] -= T_[i][j];
            obj_ += T_[i][cols_];
        }
        phase2_ = false;
    }

    Q phase1_objective() const { return obj_; }

    bool column_allowed(std::size_t j) const { return !phase2_ || j < n_; }

    void pivot(std::size_t row, std::size_t col) {
        Q inv = Q(1) / T_[row][col];
        for (std::size_t j = 0; j <= cols_; ++j) T_[row][j] *= inv;
        T_[row][col] = Q(1);  // exact for rationals; renormalizes float noise
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            Q f = T_[i][col];
            if (f == Q(0)) continue;
            for (std::size_t j = 0; j <= cols_; ++j) T_[i][j] -= f * T_[row][j];
            T_[i][col] = Q(0);
        }
        Q f = red_[col];
        if (f != Q(0)) {
            for (std::size_t j = 0; j < cols_; ++j) red_[j] -= f * T_[row][j];
            obj_ += f * T_[row][cols_];  // entering at level t changes z by red*t
            red_[col] = Q(0);
        }
        basis_[row] = col;
    }

    // Bland: entering column = smallest index with negative reduced cost;
    // leaving row = min ratio, ties broken by smallest basis index.
    bool simplex_step(bool* unbounded) {
        std::size_t enter = cols_;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (!column_allowed(j)) continue;
            if (red_[j] < -tol()) { enter = j; break; }
        }
        if (enter == cols_) return false;  // optimal
        std::size_t leave = m_;
        Q best_ratio = Q(0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (T_[i][enter] <= tol()) continue;
            Q ratio = T_[i][cols_] / T_[i][enter];
            if (leave == m_ || ratio < best_ratio ||
                (ratio == best_ratio && basis_[i] < basis_[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == m_) {
            *unbounded = true;
            return false;
        }
        pivot(leave, enter);
        return true;
    }

    void run_phase1() {
        bool unbounded = false;
        while (simplex_step(&unbounded)) {}
        // phase 1 is never unbounded (objective bounded below by 0)
    }

    LpSolution<Q> infeasible_solution() {
        LpSolution<Q> sol;
        sol.status = LpStatus::Infeasible;
        sol.objective = obj_;
        // Optimal phase-1 dual: artificial column j = n_+i has cost 1 and
        // constraint column e_i, so its reduced cost is 1 - y_i.
        std::vector<Q> y(m_);
        for (std::size_t i = 0; i < m_; ++i) y[i] = Q(1) - red_[n_ + i];
        // Undo the row sign flips applied for b >= 0.
        for (std::size_t i = 0; i < m_; ++i)
            if (b_[i] < Q(0)) y[i] = -y[i];
        sol.farkas = std::move(y);
        return sol;
    }

    void prepare_phase2() {
        // Drive artificials out of the basis; drop rows that are redundant.
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t col = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (T_[i][j] > tol() || T_[i][j] < -tol()) { col = j; break; }
            }
            if (col < n_) pivot(i, col);
            // else: zero row; the artificial stays basic at level 0, harmless.
        }
        // Recompute reduced costs for the real objective.
        red_.assign(cols_ + 1, Q(0));
        for (std::size_t j = 0; j < n_; ++j) red_[j] = c_[j];
        obj_ = Q(0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= n_) continue;
            Q cb = c_[basis_[i]];
            if (cb == Q(0)) continue;
            for (std::size_t j = 0; j < cols_; ++j) red_[j] -= cb * T_[i][j];
            obj_ += cb * T_[i][cols_];
        }
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) red_[basis_[i]] = Q(0);
        phase2_ = true;
    }

    LpSolution<Q> run_phase2() {
        bool unbounded = false;
        while (simplex_step(&unbounded)) {}
        LpSolution<Q> sol;
        if (unbounded) {
            sol.status = LpStatus::Unbounded;
            return sol;
        }
        sol.status = LpStatus::Optimal;
        sol.objective = obj_;
        sol.x.assign(n_, Q(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) sol.x[basis_[i]] = T_[i][cols_];
        return sol;
    }
};

/// min c.x s.t. A x = b, x >= 0.
template <class Q>
LpSolution<Q> solve_lp(const std::vector<std::vector<Q>>& A, const std::vector<Q>& b,
                       const std::vector<Q>& c) {
    return SimplexSolver<Q>(A, b, c).solve();
}

/// Feasibility of A x = b, x >= 0 (zero objective).
template <class Q>
LpSolution<Q> solve_feasibility(const std::vector<std::vector<Q>>& A, const std::vector<Q>& b) {
    return solve_lp(A, b, std::vector<Q>(A.empty() ? 0 : A[0].size(), Q(0)));
}

}  // namespace pba
