#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "railcg/work_clock.hpp"

namespace railcg::solver {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { le, eq, ge };
enum class LpStatus { optimal, infeasible, unbounded, limit };
enum class MipStatus { optimal, feasible, infeasible, limit };

/// Central numeric tolerances (feasibility, duality, integrality).
struct SolverConfig {
    double feas_tol = 1e-7;
    double duality_tol = 1e-6;
    double int_tol = 1e-6;
    double pivot_tol = 1e-9;
    int iteration_limit = 500000;
    bool self_check = true;  // verify strong duality on every optimal solve
};

/// Minimization LP in build order; rows and columns can be appended.
class LinearProgram {
public:
    int add_column(double cost, double lo, double hi);
    int add_column(double cost, double lo, double hi,
                   const std::vector<std::pair<int, double>>& entries);
    int add_row(RowSense sense, double rhs);
    int add_row(RowSense sense, double rhs,
                const std::vector<std::pair<int, double>>& entries);
    void add_entry(int row, int col, double coef);
    void set_cost(int col, double cost);
    void set_bounds(int col, double lo, double hi);

    int num_cols() const { return static_cast<int>(cost_.size()); }
    int num_rows() const { return static_cast<int>(rhs_.size()); }
    double cost(int col) const { return cost_[col]; }
    double lower(int col) const { return lo_[col]; }
    double upper(int col) const { return hi_[col]; }
    RowSense sense(int row) const { return sense_[row]; }
    double rhs(int row) const { return rhs_[row]; }
    const std::vector<std::pair<int, double>>& column(int col) const {
        return cols_[col];
    }

private:
    std::vector<double> cost_, lo_, hi_;
    std::vector<std::vector<std::pair<int, double>>> cols_;  // (row, coef)
    std::vector<RowSense> sense_;
    std::vector<double> rhs_;
};

/// Basis snapshot for warm starts across incremental model edits.
struct Basis {
    std::vector<int> basic;            // per row: variable index (cols then slacks)
    std::vector<std::uint8_t> vstat;   // per variable: 0 lower, 1 upper, 2 basic
    bool empty() const { return basic.empty(); }
};

struct LpSolution {
    LpStatus status = LpStatus::limit;
    double objective = 0.0;
    std::vector<double> x;
    std::vector<double> duals;          // per row
    std::vector<double> reduced_costs;  // per column
    int iterations = 0;
    Basis basis;
};

LpSolution solve_lp(const LinearProgram& lp, const SolverConfig& cfg = {},
                    WorkClock* clock = nullptr, const Basis* warm = nullptr);

struct MipModel {
    LinearProgram lp;
    std::vector<std::uint8_t> integral;  // per column

    void mark_integral(int col);
};

struct MipSolution {
    MipStatus status = MipStatus::infeasible;
    double objective = kInfinity;   // incumbent value
    double best_bound = -kInfinity;
    double gap = kInfinity;
    std::vector<double> x;
    int nodes = 0;
    std::vector<double> node_bound_trace;  // running bound, per processed node
};

struct MipLimits {
    double gap_target = 0.0;
    std::uint64_t work_limit = std::numeric_limits<std::uint64_t>::max();
    int node_limit = std::numeric_limits<int>::max();
    double cutoff = kInfinity;  // prune nodes at or above this objective
};

/// Branch and bound over the bundled simplex: best-bound node selection,
/// most-fractional branching, deterministic tie-breaks.
MipSolution solve_mip(const MipModel& mip, const MipLimits& limits = {},
                      const SolverConfig& cfg = {}, WorkClock* clock = nullptr);

/// Fixed-column MPS export for cross-checking with external tools.
void write_mps(const LinearProgram& lp, const std::vector<std::uint8_t>* integral,
               std::ostream& os, const std::string& name);

}  // namespace railcg::solver
