#include "railcg/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace railcg::solver {

int LinearProgram::add_column(double cost, double lo, double hi) {
    cost_.push_back(cost);
    lo_.push_back(lo);
    hi_.push_back(hi);
    cols_.emplace_back();
    return num_cols() - 1;
}

int LinearProgram::add_column(double cost, double lo, double hi,
                              const std::vector<std::pair<int, double>>& entries) {
    int c = add_column(cost, lo, hi);
    for (auto [row, coef] : entries) {
        if (row < 0 || row >= num_rows()) throw std::out_of_range("column entry row");
        cols_[c].emplace_back(row, coef);
    }
    return c;
}

int LinearProgram::add_row(RowSense sense, double rhs) {
    if (!std::isfinite(rhs)) throw std::invalid_argument("row rhs must be finite");
    sense_.push_back(sense);
    rhs_.push_back(rhs);
    return num_rows() - 1;
}

int LinearProgram::add_row(RowSense sense, double rhs,
                           const std::vector<std::pair<int, double>>& entries) {
    int r = add_row(sense, rhs);
    for (auto [col, coef] : entries) {
        if (col < 0 || col >= num_cols()) throw std::out_of_range("row entry column");
        cols_[col].emplace_back(r, coef);
    }
    return r;
}

void LinearProgram::add_entry(int row, int col, double coef) {
    if (row < 0 || row >= num_rows() || col < 0 || col >= num_cols())
        throw std::out_of_range("matrix entry");
    cols_[col].emplace_back(row, coef);
}

void LinearProgram::set_cost(int col, double cost) { cost_.at(col) = cost; }

void LinearProgram::set_bounds(int col, double lo, double hi) {
    lo_.at(col) = lo;
    hi_.at(col) = hi;
}

void MipModel::mark_integral(int col) {
    if (integral.size() < static_cast<std::size_t>(lp.num_cols()))
        integral.resize(lp.num_cols(), 0);
    integral.at(col) = 1;
}

namespace {

enum VStat : std::uint8_t { kAtLower = 0, kAtUpper = 1, kBasic = 2, kFree = 3 };

// Bounded-variable revised simplex over a dense LU of the basis with
// product-form updates. Variables are the structural columns, then one
// slack per row, then one artificial per row (phase 1 only).
class Simplex {
public:
    Simplex(const LinearProgram& lp, const SolverConfig& cfg, WorkClock* clock)
        : lp_(lp), cfg_(cfg), clock_(clock), m_(lp.num_rows()), n_(lp.num_cols()) {
        total_ = n_ + 2 * m_;
        cost_.assign(total_, 0.0);
        lo_.assign(total_, 0.0);
        hi_.assign(total_, 0.0);
        for (int j = 0; j < n_; ++j) {
            cost_[j] = lp.cost(j);
            lo_[j] = lp.lower(j);
            hi_[j] = lp.upper(j);
        }
        for (int i = 0; i < m_; ++i) {
            int s = n_ + i;
            switch (lp.sense(i)) {
                case RowSense::le: lo_[s] = 0.0; hi_[s] = kInfinity; break;
                case RowSense::ge: lo_[s] = -kInfinity; hi_[s] = 0.0; break;
                case RowSense::eq: lo_[s] = 0.0; hi_[s] = 0.0; break;
            }
            lo_[n_ + m_ + i] = 0.0;
            hi_[n_ + m_ + i] = 0.0;  // artificials opened only in phase 1
        }
        art_sign_.assign(m_, 1.0);
        val_.assign(total_, 0.0);
        vstat_.assign(total_, kAtLower);
        basic_.assign(m_, -1);
        rhs_norm_ = 1.0;
        for (int i = 0; i < m_; ++i) rhs_norm_ = std::max(rhs_norm_, std::abs(lp.rhs(i)));
    }

    LpStatus solve_from_scratch() {
        iterations_ = 0;  // a cold start deserves a fresh budget
        // Nonbasics at their nearest finite bound.
        for (int j = 0; j < n_ + m_; ++j) set_nonbasic_start(j);
        // Phase 1 basis: artificials sized to the residuals.
        Eigen::VectorXd resid = residual();
        for (int i = 0; i < m_; ++i) {
            int a = n_ + m_ + i;
            art_sign_[i] = resid[i] >= 0.0 ? 1.0 : -1.0;
            lo_[a] = 0.0;
            hi_[a] = kInfinity;
            basic_[i] = a;
            vstat_[a] = kBasic;
            val_[a] = std::abs(resid[i]);
        }
        factorize();
        std::vector<double> phase1(total_, 0.0);
        for (int i = 0; i < m_; ++i) phase1[n_ + m_ + i] = 1.0;
        LpStatus st = primal(phase1);
        if (st != LpStatus::optimal) return st == LpStatus::unbounded ? LpStatus::infeasible : st;
        if (objective(phase1) > cfg_.feas_tol * (1.0 + rhs_norm_) * 10.0)
            return LpStatus::infeasible;
        retire_artificials();
        std::vector<double> phase2(cost_.begin(), cost_.end());
        for (int i = 0; i < m_; ++i) phase2[n_ + m_ + i] = 0.0;
        return primal(phase2);
    }

    // Warm start from a basis over columns+slacks. Returns false when the
    // basis cannot be used and a cold start is required.
    bool try_warm(const Basis& warm) {
        if (static_cast<int>(warm.basic.size()) != m_ ||
            static_cast<int>(warm.vstat.size()) != n_ + m_)
            return false;
        for (int v : warm.basic)
            if (v < 0 || v >= n_ + m_) return false;
        for (int j = 0; j < n_ + m_; ++j) {
            vstat_[j] = static_cast<VStat>(warm.vstat[j]);
            if (vstat_[j] != kBasic) set_nonbasic_start(j, vstat_[j] == kAtUpper);
        }
        for (int i = 0; i < m_; ++i) {
            basic_[i] = warm.basic[i];
            vstat_[basic_[i]] = kBasic;
        }
        if (!factorize()) return false;
        recompute_basics();
        return true;
    }

    LpStatus solve_warmed() {
        std::vector<double> phase2(cost_.begin(), cost_.end());
        for (int i = 0; i < m_; ++i) phase2[n_ + m_ + i] = 0.0;
        if (primal_feasible()) return primal(phase2);
        if (dual_feasible(phase2)) {
            LpStatus st = dual(phase2);
            if (st == LpStatus::optimal) return primal(phase2);  // polish
            if (st == LpStatus::infeasible) return LpStatus::infeasible;
        }
        return solve_from_scratch();
    }

    LpSolution extract(LpStatus status) {
        LpSolution out;
        out.status = status;
        out.iterations = iterations_;
        if (status != LpStatus::optimal) return out;
        out.x.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) out.x[j] = val_[j];
        out.objective = 0.0;
        for (int j = 0; j < n_; ++j) out.objective += lp_.cost(j) * val_[j];
        std::vector<double> phase2(cost_.begin(), cost_.end());
        for (int i = 0; i < m_; ++i) phase2[n_ + m_ + i] = 0.0;
        Eigen::VectorXd y = duals(phase2);
        out.duals.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) out.duals[i] = y[i];
        out.reduced_costs.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j)
            out.reduced_costs[j] = vstat_[j] == kBasic ? 0.0 : phase2[j] - dot_column(j, y);
        bool artificial_basic = false;
        for (int i = 0; i < m_; ++i)
            if (basic_[i] >= n_ + m_) artificial_basic = true;
        if (!artificial_basic) {
            out.basis.basic = basic_;
            out.basis.vstat.assign(n_ + m_, 0);
            for (int j = 0; j < n_ + m_; ++j)
                out.basis.vstat[j] = vstat_[j] == kFree ? kAtLower : vstat_[j];
        }
        if (cfg_.self_check) self_check(out, y);
        return out;
    }

private:
    void charge(std::uint64_t u) const {
        if (clock_) clock_->charge(u);
    }

    void set_nonbasic_start(int j, bool prefer_upper = false) {
        bool lo_fin = std::isfinite(lo_[j]);
        bool hi_fin = std::isfinite(hi_[j]);
        if (!lo_fin && !hi_fin) {
            vstat_[j] = kFree;
            val_[j] = 0.0;
        } else if (prefer_upper && hi_fin) {
            vstat_[j] = kAtUpper;
            val_[j] = hi_[j];
        } else if (lo_fin) {
            vstat_[j] = kAtLower;
            val_[j] = lo_[j];
        } else {
            vstat_[j] = kAtUpper;
            val_[j] = hi_[j];
        }
    }

    double dot_column(int j, const Eigen::VectorXd& y) const {
        double s = 0.0;
        if (j < n_) {
            for (auto [r, c] : lp_.column(j)) s += y[r] * c;
        } else if (j < n_ + m_) {
            s = y[j - n_];
        } else {
            s = art_sign_[j - n_ - m_] * y[j - n_ - m_];
        }
        return s;
    }

    Eigen::VectorXd column_vec(int j) const {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(m_);
        if (j < n_) {
            for (auto [r, c] : lp_.column(j)) a[r] += c;
        } else if (j < n_ + m_) {
            a[j - n_] = 1.0;
        } else {
            a[j - n_ - m_] = art_sign_[j - n_ - m_];
        }
        return a;
    }

    Eigen::VectorXd residual() const {
        Eigen::VectorXd r(m_);
        for (int i = 0; i < m_; ++i) r[i] = lp_.rhs(i);
        for (int j = 0; j < n_ + m_; ++j) {
            if (vstat_[j] == kBasic || val_[j] == 0.0) continue;
            if (j < n_) {
                for (auto [row, c] : lp_.column(j)) r[row] -= c * val_[j];
            } else {
                r[j - n_] -= val_[j];
            }
        }
        return r;
    }

    bool factorize() {
        Eigen::MatrixXd B(m_, m_);
        for (int i = 0; i < m_; ++i) B.col(i) = column_vec(basic_[i]);
        lu_.compute(B);
        etas_.clear();
        charge(1 + static_cast<std::uint64_t>(m_) * m_ * m_ / 4096);
        Eigen::VectorXd d = lu_.matrixLU().diagonal().cwiseAbs();
        double dmax = std::max(1e-300, d.maxCoeff());
        return d.minCoeff() > 1e-12 * dmax;
    }

    void recompute_basics() {
        Eigen::VectorXd r = residual();
        Eigen::VectorXd xb = ftran(r);
        for (int i = 0; i < m_; ++i) val_[basic_[i]] = xb[i];
    }

    Eigen::VectorXd ftran(Eigen::VectorXd v) const {
        charge(1 + static_cast<std::uint64_t>(m_) * m_ / 128);
        Eigen::VectorXd y = lu_.solve(v);
        for (const auto& [r, eta] : etas_) {
            double yr = y[r] / eta[r];
            y -= eta * yr;
            y[r] = yr;
        }
        return y;
    }

    Eigen::VectorXd btran(Eigen::VectorXd c) const {
        charge(1 + static_cast<std::uint64_t>(m_) * m_ / 128);
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            const auto& [r, eta] = *it;
            double cr = (c[r] - eta.dot(c) + eta[r] * c[r]) / eta[r];
            c[r] = cr;
        }
        return lu_.adjointSolve(c);
    }

    Eigen::VectorXd duals(const std::vector<double>& cost) const {
        Eigen::VectorXd cb(m_);
        for (int i = 0; i < m_; ++i) cb[i] = cost[basic_[i]];
        return btran(cb);
    }

    double objective(const std::vector<double>& cost) const {
        double s = 0.0;
        for (int j = 0; j < total_; ++j)
            if (val_[j] != 0.0) s += cost[j] * val_[j];
        return s;
    }

    bool primal_feasible() const {
        for (int i = 0; i < m_; ++i) {
            int b = basic_[i];
            double tol = cfg_.feas_tol * (1.0 + rhs_norm_);
            if (val_[b] < lo_[b] - tol || val_[b] > hi_[b] + tol) return false;
        }
        return true;
    }

    bool dual_feasible(const std::vector<double>& cost) const {
        Eigen::VectorXd y = duals(cost);
        double tol = cfg_.duality_tol;
        for (int j = 0; j < total_; ++j) {
            if (vstat_[j] == kBasic) continue;
            if (lo_[j] == hi_[j]) continue;  // fixed: any sign
            double d = cost[j] - dot_column(j, y);
            if (vstat_[j] == kAtLower && d < -tol) return false;
            if (vstat_[j] == kAtUpper && d > tol) return false;
            if (vstat_[j] == kFree && std::abs(d) > tol) return false;
        }
        return true;
    }

    // Primal simplex with Dantzig pricing and a Bland fallback against
    // cycling. `cost` covers every engine variable.
    LpStatus primal(const std::vector<double>& cost) {
        int degenerate_streak = 0;
        int spent = 0;
        bool bland = false;
        while (true) {
            if (++iterations_ > cfg_.iteration_limit) return LpStatus::limit;
            if (++spent > 16 * (m_ + total_) + 1000) bland = true;
            Eigen::VectorXd y = duals(cost);
            int enter = -1, dir = 0;
            double best = cfg_.duality_tol;
            for (int j = 0; j < total_; ++j) {
                if (vstat_[j] == kBasic) continue;
                if (lo_[j] == hi_[j]) continue;
                double d = cost[j] - dot_column(j, y);
                int cand_dir = 0;
                if ((vstat_[j] == kAtLower || vstat_[j] == kFree) && d < -cfg_.duality_tol)
                    cand_dir = +1;
                else if ((vstat_[j] == kAtUpper || vstat_[j] == kFree) && d > cfg_.duality_tol)
                    cand_dir = -1;
                if (!cand_dir) continue;
                if (bland) {
                    enter = j;
                    dir = cand_dir;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    enter = j;
                    dir = cand_dir;
                }
            }
            if (enter < 0) return LpStatus::optimal;

            Eigen::VectorXd w = ftran(column_vec(enter));
            // Ratio test: the entering variable moves by theta in direction
            // dir; basics move by -dir * w.
            double theta = std::isfinite(hi_[enter]) && std::isfinite(lo_[enter])
                               ? hi_[enter] - lo_[enter]
                               : kInfinity;
            int leave_row = -1;
            int leave_var = -1;
            for (int i = 0; i < m_; ++i) {
                double delta = -dir * w[i];
                if (std::abs(delta) <= cfg_.pivot_tol) continue;
                int b = basic_[i];
                double room, t;
                if (delta > 0) {
                    if (!std::isfinite(hi_[b])) continue;
                    room = hi_[b] - val_[b];
                    t = std::max(0.0, room) / delta;
                } else {
                    if (!std::isfinite(lo_[b])) continue;
                    room = val_[b] - lo_[b];
                    t = std::max(0.0, room) / (-delta);
                }
                bool better = t < theta - 1e-12;
                bool tie = std::abs(t - theta) <= 1e-12 && leave_row >= 0;
                if (better || (tie && (bland ? b < leave_var : i < leave_row))) {
                    theta = t;
                    leave_row = i;
                    leave_var = b;
                }
            }
            if (!std::isfinite(theta)) return LpStatus::unbounded;

            if (theta <= 1e-11) {
                if (++degenerate_streak > 64) bland = true;
            } else {
                degenerate_streak = 0;
            }

            val_[enter] += dir * theta;
            for (int i = 0; i < m_; ++i) val_[basic_[i]] -= dir * theta * w[i];
            if (leave_row < 0) {
                // Bound flip.
                vstat_[enter] = dir > 0 ? kAtUpper : kAtLower;
                val_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
                continue;
            }
            if (std::abs(w[leave_row]) < cfg_.pivot_tol) {
                factorize();
                recompute_basics();
                continue;
            }
            int out_var = basic_[leave_row];
            double delta = -dir * w[leave_row];
            vstat_[out_var] = delta > 0 ? kAtUpper : kAtLower;
            val_[out_var] = delta > 0 ? hi_[out_var] : lo_[out_var];
            basic_[leave_row] = enter;
            vstat_[enter] = kBasic;
            etas_.emplace_back(leave_row, w);
            if (etas_.size() > 48) {
                factorize();
                recompute_basics();
            }
        }
    }

    // Dual simplex used after bound tightenings: keeps reduced-cost signs
    // valid while restoring primal feasibility. Expected to finish within a
    // few pivots; a short leash hands stubborn cases back to the cold start.
    LpStatus dual(const std::vector<double>& cost) {
        int budget = 4 * (m_ + total_) + 200;
        while (true) {
            ++iterations_;
            if (--budget < 0) return LpStatus::limit;
            double tol = cfg_.feas_tol * (1.0 + rhs_norm_);
            int row = -1;
            double viol = tol;
            bool above = false;
            for (int i = 0; i < m_; ++i) {
                int b = basic_[i];
                if (val_[b] < lo_[b] - viol) {
                    viol = lo_[b] - val_[b];
                    row = i;
                    above = false;
                } else if (val_[b] > hi_[b] + viol) {
                    viol = val_[b] - hi_[b];
                    row = i;
                    above = true;
                }
            }
            if (row < 0) return LpStatus::optimal;

            Eigen::VectorXd y = duals(cost);
            Eigen::VectorXd er = Eigen::VectorXd::Zero(m_);
            er[row] = 1.0;
            Eigen::VectorXd alpha = btran(er);
            charge(static_cast<std::uint64_t>(total_) / 4 + 1);

            int enter = -1;
            double best_ratio = kInfinity;
            for (int j = 0; j < total_; ++j) {
                if (vstat_[j] == kBasic) continue;
                if (lo_[j] == hi_[j]) continue;
                double arj = dot_column(j, alpha);
                if (std::abs(arj) <= cfg_.pivot_tol) continue;
                bool can_increase = vstat_[j] == kAtLower || vstat_[j] == kFree;
                bool can_decrease = vstat_[j] == kAtUpper || vstat_[j] == kFree;
                // Effect of the allowed move on the leaving basic value.
                bool helps = false;
                if (!above && can_increase && arj < 0) helps = true;
                if (!above && can_decrease && arj > 0) helps = true;
                if (above && can_increase && arj > 0) helps = true;
                if (above && can_decrease && arj < 0) helps = true;
                if (!helps) continue;
                double d = cost[j] - dot_column(j, y);
                double ratio = std::abs(d) / std::abs(arj);
                if (ratio < best_ratio - 1e-12 || (std::abs(ratio - best_ratio) <= 1e-12 &&
                                                   (enter < 0 || j < enter))) {
                    best_ratio = ratio;
                    enter = j;
                }
            }
            if (enter < 0) return LpStatus::infeasible;

            int out_var = basic_[row];
            double target = above ? hi_[out_var] : lo_[out_var];
            double arj = dot_column(enter, alpha);
            double t = (val_[out_var] - target) / arj;  // signed move of entering
            double range = hi_[enter] - lo_[enter];
            if (std::isfinite(range) && std::abs(t) > range + 1e-12) {
                // Bound flip of the entering variable; row stays violated.
                double step = vstat_[enter] == kAtLower ? range : -range;
                Eigen::VectorXd w = ftran(column_vec(enter));
                for (int i = 0; i < m_; ++i) val_[basic_[i]] -= step * w[i];
                vstat_[enter] = vstat_[enter] == kAtLower ? kAtUpper : kAtLower;
                val_[enter] = vstat_[enter] == kAtUpper ? hi_[enter] : lo_[enter];
                continue;
            }
            Eigen::VectorXd w = ftran(column_vec(enter));
            if (std::abs(w[row]) < cfg_.pivot_tol) {
                factorize();
                recompute_basics();
                continue;
            }
            for (int i = 0; i < m_; ++i) val_[basic_[i]] -= t * w[i];
            val_[enter] += t;
            vstat_[out_var] = above ? kAtUpper : kAtLower;
            val_[out_var] = target;
            basic_[row] = enter;
            vstat_[enter] = kBasic;
            etas_.emplace_back(row, w);
            if (etas_.size() > 48) {
                factorize();
                recompute_basics();
            }
        }
    }

    // Pivot zero-valued artificials out of the basis where possible; fix the
    // rest (redundant rows) at zero.
    void retire_artificials() {
        for (int i = 0; i < m_; ++i) {
            int a = n_ + m_ + i;
            lo_[a] = 0.0;
            hi_[a] = 0.0;
        }
        for (int r = 0; r < m_; ++r) {
            if (basic_[r] < n_ + m_) continue;
            Eigen::VectorXd er = Eigen::VectorXd::Zero(m_);
            er[r] = 1.0;
            Eigen::VectorXd alpha = btran(er);
            int enter = -1;
            for (int j = 0; j < n_ + m_; ++j) {
                if (vstat_[j] == kBasic) continue;
                if (std::abs(dot_column(j, alpha)) > 1e-7) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) continue;  // redundant row; artificial stays at 0
            Eigen::VectorXd w = ftran(column_vec(enter));
            int out_var = basic_[r];
            vstat_[out_var] = kAtLower;
            val_[out_var] = 0.0;
            basic_[r] = enter;
            vstat_[enter] = kBasic;
            etas_.emplace_back(r, w);
            recompute_basics();
        }
    }

    void self_check(const LpSolution& sol, const Eigen::VectorXd& y) const {
        // Primal feasibility.
        Eigen::VectorXd ax = Eigen::VectorXd::Zero(m_);
        for (int j = 0; j < n_; ++j)
            for (auto [r, c] : lp_.column(j)) ax[r] += c * sol.x[j];
        double ftol = cfg_.feas_tol * (1.0 + rhs_norm_) * 100.0;
        for (int i = 0; i < m_; ++i) {
            double diff = ax[i] - lp_.rhs(i);
            bool ok = true;
            switch (lp_.sense(i)) {
                case RowSense::le: ok = diff <= ftol; break;
                case RowSense::ge: ok = diff >= -ftol; break;
                case RowSense::eq: ok = std::abs(diff) <= ftol; break;
            }
            if (!ok) throw std::logic_error("simplex self-check: primal residual");
        }
        // Strong duality including bound contributions.
        double dual_obj = 0.0;
        for (int i = 0; i < m_; ++i) dual_obj += y[i] * lp_.rhs(i);
        for (int j = 0; j < n_; ++j) {
            double d = sol.reduced_costs[j];
            if (d > cfg_.duality_tol && std::isfinite(lp_.lower(j)))
                dual_obj += d * lp_.lower(j);
            else if (d < -cfg_.duality_tol && std::isfinite(lp_.upper(j)))
                dual_obj += d * lp_.upper(j);
        }
        double scale = 1.0 + std::abs(sol.objective);
        if (std::abs(sol.objective - dual_obj) > 1e-5 * scale)
            throw std::logic_error("simplex self-check: duality gap");
    }

    class AdjointLu {
    public:
        void compute(const Eigen::MatrixXd& B) { lu_.compute(B); }
        Eigen::VectorXd solve(const Eigen::VectorXd& v) const { return lu_.solve(v); }
        Eigen::VectorXd adjointSolve(const Eigen::VectorXd& v) const {
            return lu_.adjoint().solve(v);
        }
        const Eigen::MatrixXd& matrixLU() const { return lu_.matrixLU(); }

    private:
        Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    };

    const LinearProgram& lp_;
    SolverConfig cfg_;
    WorkClock* clock_;
    int m_, n_, total_;
    std::vector<double> cost_, lo_, hi_, val_;
    std::vector<VStat> vstat_;
    std::vector<int> basic_;
    std::vector<double> art_sign_;
    AdjointLu lu_;
    std::vector<std::pair<int, Eigen::VectorXd>> etas_;
    double rhs_norm_ = 1.0;
    int iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SolverConfig& cfg, WorkClock* clock,
                    const Basis* warm) {
    if (lp.num_rows() == 0) {
        // Bound-only problem: every column sits at its cheaper bound.
        LpSolution out;
        out.status = LpStatus::optimal;
        out.x.assign(lp.num_cols(), 0.0);
        out.reduced_costs.assign(lp.num_cols(), 0.0);
        for (int j = 0; j < lp.num_cols(); ++j) {
            double c = lp.cost(j);
            double v = c >= 0 ? lp.lower(j) : lp.upper(j);
            if (!std::isfinite(v)) {
                if (c != 0.0) {
                    out.status = LpStatus::unbounded;
                    return out;
                }
                v = std::isfinite(lp.lower(j)) ? lp.lower(j)
                                               : (std::isfinite(lp.upper(j)) ? lp.upper(j) : 0.0);
            }
            out.x[j] = v;
            out.objective += c * v;
            out.reduced_costs[j] = c;
        }
        return out;
    }
    Simplex s(lp, cfg, clock);
    LpStatus st;
    if (warm && !warm->empty() && s.try_warm(*warm))
        st = s.solve_warmed();
    else
        st = s.solve_from_scratch();
    return s.extract(st);
}

namespace {

struct BbNode {
    double bound = 0.0;
    int id = 0;
    std::vector<std::pair<int, std::pair<double, double>>> bounds;  // col -> (lo, hi)
    Basis basis;
};

struct BbOrder {
    bool operator()(const BbNode& a, const BbNode& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
        return a.id > b.id;
    }
};

}  // namespace

MipSolution solve_mip(const MipModel& mip, const MipLimits& limits, const SolverConfig& cfg,
                      WorkClock* clock) {
    MipSolution out;
    const int n = mip.lp.num_cols();
    std::vector<std::uint8_t> integral = mip.integral;
    integral.resize(n, 0);

    WorkClock local;
    WorkClock* wc = clock ? clock : &local;
    const std::uint64_t work_start = wc->units();
    auto out_of_budget = [&] { return wc->units() - work_start > limits.work_limit; };

    LinearProgram work_lp = mip.lp;
    std::priority_queue<BbNode, std::vector<BbNode>, BbOrder> open;
    int next_id = 0;

    double incumbent = limits.cutoff;
    std::vector<double> best_x;
    double best_bound = -kInfinity;
    double dropped_bound = kInfinity;
    bool any_node_cut_by_limit = false;

    BbNode root;
    root.id = next_id++;
    root.bound = -kInfinity;
    open.push(root);

    while (!open.empty()) {
        if (out_of_budget() || out.nodes >= limits.node_limit) {
            any_node_cut_by_limit = true;
            break;
        }
        BbNode node = open.top();
        open.pop();
        if (node.bound >= incumbent - cfg.duality_tol * (1.0 + std::abs(incumbent))) continue;
        best_bound = std::max(best_bound, node.bound);
        out.node_bound_trace.push_back(best_bound);

        for (auto [col, b] : node.bounds) work_lp.set_bounds(col, b.first, b.second);
        LpSolution rel = solve_lp(work_lp, cfg, wc, node.basis.empty() ? nullptr : &node.basis);
        for (auto [col, b] : node.bounds) work_lp.set_bounds(col, mip.lp.lower(col), mip.lp.upper(col));
        ++out.nodes;
        wc->charge(16);

        if (rel.status == LpStatus::unbounded) throw std::logic_error("unbounded relaxation");
        if (rel.status == LpStatus::limit) {
            any_node_cut_by_limit = true;
            dropped_bound = std::min(dropped_bound, node.bound);
            continue;
        }
        if (rel.status != LpStatus::optimal) continue;  // infeasible: prune
        if (rel.objective >= incumbent - cfg.duality_tol * (1.0 + std::abs(incumbent))) continue;

        int branch = -1;
        double most_frac = cfg.int_tol;
        for (int j = 0; j < n; ++j) {
            if (!integral[j]) continue;
            double f = std::abs(rel.x[j] - std::round(rel.x[j]));
            if (f > most_frac + 1e-12) {
                most_frac = f;
                branch = j;
            }
        }
        if (branch < 0) {
            incumbent = rel.objective;
            best_x = rel.x;
            for (int j = 0; j < n; ++j)
                if (integral[j]) best_x[j] = std::round(best_x[j]);
            continue;
        }
        double v = rel.x[branch];
        for (int side = 0; side < 2; ++side) {
            BbNode child;
            child.id = next_id++;
            child.bound = rel.objective;
            child.bounds = node.bounds;
            if (side == 0)
                child.bounds.emplace_back(branch,
                                          std::make_pair(mip.lp.lower(branch), std::floor(v)));
            else
                child.bounds.emplace_back(branch,
                                          std::make_pair(std::ceil(v), mip.lp.upper(branch)));
            child.basis = rel.basis;
            open.push(child);
        }
    }

    // Unexplored or dropped nodes may hide better solutions; the reported
    // bound must account for them.
    double open_bound = dropped_bound;
    if (!open.empty()) open_bound = std::min(open_bound, open.top().bound);
    if (!open.empty()) any_node_cut_by_limit = true;

    if (!best_x.empty()) {
        out.objective = incumbent;
        out.x = std::move(best_x);
        out.best_bound = any_node_cut_by_limit ? std::min(incumbent, open_bound) : incumbent;
        out.status = any_node_cut_by_limit ? MipStatus::feasible : MipStatus::optimal;
        out.gap = std::abs(out.objective - out.best_bound) / std::max(1.0, std::abs(out.objective));
        if (!any_node_cut_by_limit) out.gap = 0.0;
    } else if (any_node_cut_by_limit) {
        out.status = MipStatus::limit;
        out.best_bound = open_bound;
    } else {
        out.status = MipStatus::infeasible;
    }
    return out;
}

void write_mps(const LinearProgram& lp, const std::vector<std::uint8_t>* integral,
               std::ostream& os, const std::string& name) {
    auto row_name = [](int i) {
        std::ostringstream o;
        o << "R" << std::setw(7) << std::setfill('0') << i;
        return o.str();
    };
    auto col_name = [](int j) {
        std::ostringstream o;
        o << "C" << std::setw(7) << std::setfill('0') << j;
        return o.str();
    };
    os << "NAME          " << name << "\n";
    os << "ROWS\n";
    os << " N  COST\n";
    for (int i = 0; i < lp.num_rows(); ++i) {
        char s = lp.sense(i) == RowSense::le ? 'L' : (lp.sense(i) == RowSense::ge ? 'G' : 'E');
        os << " " << s << "  " << row_name(i) << "\n";
    }
    os << "COLUMNS\n";
    os << std::setprecision(12);
    bool in_int = false;
    for (int j = 0; j < lp.num_cols(); ++j) {
        bool is_int = integral && j < static_cast<int>(integral->size()) && (*integral)[j];
        if (is_int && !in_int) {
            os << "    MARKER                 'MARKER'                 'INTORG'\n";
            in_int = true;
        } else if (!is_int && in_int) {
            os << "    MARKER                 'MARKER'                 'INTEND'\n";
            in_int = false;
        }
        if (lp.cost(j) != 0.0)
            os << "    " << col_name(j) << "  COST      " << lp.cost(j) << "\n";
        for (auto [r, c] : lp.column(j))
            os << "    " << col_name(j) << "  " << row_name(r) << "  " << c << "\n";
    }
    if (in_int) os << "    MARKER                 'MARKER'                 'INTEND'\n";
    os << "RHS\n";
    for (int i = 0; i < lp.num_rows(); ++i)
        if (lp.rhs(i) != 0.0) os << "    RHS       " << row_name(i) << "  " << lp.rhs(i) << "\n";
    os << "BOUNDS\n";
    for (int j = 0; j < lp.num_cols(); ++j) {
        double lo = lp.lower(j), hi = lp.upper(j);
        if (lo == 0.0 && !std::isfinite(hi)) continue;  // default bound
        if (lo == hi) {
            os << " FX BND       " << col_name(j) << "  " << lo << "\n";
            continue;
        }
        if (std::isfinite(lo) && lo != 0.0)
            os << " LO BND       " << col_name(j) << "  " << lo << "\n";
        if (!std::isfinite(lo)) os << " MI BND       " << col_name(j) << "\n";
        if (std::isfinite(hi)) os << " UP BND       " << col_name(j) << "  " << hi << "\n";
    }
    os << "ENDATA\n";
}

}  // namespace railcg::solver
