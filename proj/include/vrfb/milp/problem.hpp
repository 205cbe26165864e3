// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vrfb::milp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : std::uint8_t { LessEqual, GreaterEqual, Equal };

enum class Status : std::uint8_t { Optimal, FeasibleGap, Infeasible, Unbounded };

/// Generic sparse linear program, objective always maximized.
/// Binary columns must be bounded inside [0, 1].
class Problem {
public:
    int add_col(double lo, double hi, double obj, bool binary = false,
                std::string name = {}) {
        lo_.push_back(lo);
        hi_.push_back(hi);
        obj_.push_back(obj);
        binary_.push_back(binary ? 1 : 0);
        names_.push_back(std::move(name));
        return static_cast<int>(lo_.size()) - 1;
    }

    int add_row(std::vector<std::pair<int, double>> entries, RowSense sense,
                double rhs) {
        rows_.push_back(std::move(entries));
        sense_.push_back(sense);
        rhs_.push_back(rhs);
        return static_cast<int>(rows_.size()) - 1;
    }

    int num_cols() const { return static_cast<int>(lo_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }

    int num_binaries() const {
        int n = 0;
        for (char b : binary_) n += b;
        return n;
    }

    const std::vector<double>& objective() const { return obj_; }
    const std::vector<double>& lower() const { return lo_; }
    const std::vector<double>& upper() const { return hi_; }
    const std::vector<char>& binary_flags() const { return binary_; }
    const std::vector<std::pair<int, double>>& row(int i) const { return rows_[i]; }
    RowSense row_sense(int i) const { return sense_[i]; }
    double row_rhs(int i) const { return rhs_[i]; }
    const std::string& col_name(int j) const { return names_[j]; }

    void set_col_name(int j, std::string name) { names_[j] = std::move(name); }
    void set_bounds(int j, double lo, double hi) {
        lo_[j] = lo;
        hi_[j] = hi;
    }

    /// Throws if coefficients are non-finite, indices out of range, or a
    /// binary column is not contained in [0, 1].
    void validate() const {
        const int n = num_cols();
        for (int j = 0; j < n; ++j) {
            if (!std::isfinite(obj_[j]))
                throw std::invalid_argument("non-finite objective coefficient");
            if (std::isnan(lo_[j]) || std::isnan(hi_[j]) || lo_[j] > hi_[j])
                throw std::invalid_argument("invalid bounds on column " +
                                            std::to_string(j));
            if (binary_[j] && (lo_[j] < -1e-12 || hi_[j] > 1.0 + 1e-12))
                throw std::invalid_argument("binary column outside [0,1]");
        }
        for (int i = 0; i < num_rows(); ++i) {
            if (!std::isfinite(rhs_[i]))
                throw std::invalid_argument("non-finite rhs");
            for (const auto& [col, val] : rows_[i]) {
                if (col < 0 || col >= n)
                    throw std::invalid_argument("row entry column out of range");
                if (!std::isfinite(val))
                    throw std::invalid_argument("non-finite row coefficient");
            }
        }
    }

private:
    std::vector<double> obj_, lo_, hi_, rhs_;
    std::vector<char> binary_;
    std::vector<std::string> names_;
    std::vector<std::vector<std::pair<int, double>>> rows_;
    std::vector<RowSense> sense_;
};

struct Solution {
    Status status = Status::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    double bound = 0.0;   // best dual / tree bound (maximization: bound >= objective)
    double gap = 0.0;
    long nodes = 0;
    long iterations = 0;
    double wall_seconds = 0.0;

    bool has_solution() const {
        return status == Status::Optimal || status == Status::FeasibleGap;
    }
};

}  // namespace vrfb::milp
