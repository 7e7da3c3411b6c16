#include "stabnet/simplex.hpp"

#include "stabnet/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace stabnet {

int LinearProgram::add_variable(std::optional<Rational> lo, std::optional<Rational> hi,
                                Rational objective_coeff) {
    if (lo && hi && *lo > *hi) throw InvalidInput("variable with lo > hi");
    lower.push_back(std::move(lo));
    upper.push_back(std::move(hi));
    objective.push_back(std::move(objective_coeff));
    for (auto& row : rows) row.coeffs.emplace_back(0);
    return num_vars++;
}

void LinearProgram::add_row(const std::vector<std::pair<int, Rational>>& terms,
                            Relation rel, Rational rhs) {
    LpRow row;
    row.coeffs.assign(static_cast<std::size_t>(num_vars), Rational(0));
    for (const auto& [var, coeff] : terms) {
        if (var < 0 || var >= num_vars) throw InvalidInput("row references unknown variable");
        row.coeffs[static_cast<std::size_t>(var)] += coeff;
    }
    row.rel = rel;
    row.rhs = std::move(rhs);
    rows.push_back(std::move(row));
}

namespace {

// Substitution that maps an original variable to the nonnegative
// standard-form columns: x = shift + sign*y[col] (+ optionally -y[col2]
// for free variables split as y+ - y-).
struct VarMap {
    Rational shift;
    int col_pos = -1; // coefficient +1
    int col_neg = -1; // coefficient -1
};

struct Tableau {
    // rows 0..m-1 are constraints, row m is the active cost row
    std::vector<std::vector<Rational>> t;
    std::vector<int> basis;
    int m = 0;
    int n = 0; // columns excluding rhs

    Rational& at(int i, int j) { return t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    Rational& rhs(int i) { return t[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)]; }

    void pivot(int r, int c) {
        auto& row = t[static_cast<std::size_t>(r)];
        Rational inv = row[static_cast<std::size_t>(c)];
        for (auto& x : row) x /= inv;
        for (int i = 0; i <= m; ++i) {
            if (i == r) continue;
            auto& other = t[static_cast<std::size_t>(i)];
            const Rational factor = other[static_cast<std::size_t>(c)];
            if (factor == 0) continue;
            for (int j = 0; j <= n; ++j)
                other[static_cast<std::size_t>(j)] -= factor * row[static_cast<std::size_t>(j)];
        }
        basis[static_cast<std::size_t>(r)] = c;
    }

    // Bland: entering = lowest-index eligible column, leaving = lowest
    // basic index among minimum ratios. Returns false on unbounded.
    bool run(int allowed_cols) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < allowed_cols; ++j) {
                if (at(m, j) < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            Rational best_ratio;
            for (int i = 0; i < m; ++i) {
                if (at(i, enter) <= 0) continue;
                Rational ratio = rhs(i) / at(i, enter);
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis[static_cast<std::size_t>(i)] <
                                                basis[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

} // namespace

LpOutcome solve(const LinearProgram& lp) {
    if (static_cast<int>(lp.objective.size()) != lp.num_vars ||
        static_cast<int>(lp.lower.size()) != lp.num_vars ||
        static_cast<int>(lp.upper.size()) != lp.num_vars)
        throw InvalidInput("malformed LP");
    for (const auto& row : lp.rows)
        if (static_cast<int>(row.coeffs.size()) != lp.num_vars)
            throw InvalidInput("row width does not match variable count");

    // Map variables onto nonnegative columns.
    std::vector<VarMap> vmap(static_cast<std::size_t>(lp.num_vars));
    int cols = 0;
    std::vector<std::pair<int, Rational>> upper_rows; // (var, residual ub) for lo&hi vars
    for (int i = 0; i < lp.num_vars; ++i) {
        const auto& lo = lp.lower[static_cast<std::size_t>(i)];
        const auto& hi = lp.upper[static_cast<std::size_t>(i)];
        auto& m = vmap[static_cast<std::size_t>(i)];
        if (lo && hi && *lo > *hi) return {LpStatus::infeasible, std::nullopt};
        if (lo && hi && *lo == *hi) {
            m.shift = *lo; // fixed variable, no column
        } else if (lo) {
            m.shift = *lo;
            m.col_pos = cols++;
            if (hi) upper_rows.push_back({i, *hi - *lo});
        } else if (hi) {
            m.shift = *hi;
            m.col_neg = cols++; // x = hi - y
        } else {
            m.col_pos = cols++;
            m.col_neg = cols++;
        }
    }

    // Build equality rows over the y columns with rhs >= 0.
    struct EqRow {
        std::vector<Rational> a;
        Rational b;
        Relation rel;
    };
    std::vector<EqRow> eq;
    auto add_source_row = [&](const std::vector<Rational>& coeffs, Relation rel,
                              const Rational& rhs) {
        EqRow r;
        r.a.assign(static_cast<std::size_t>(cols), Rational(0));
        r.b = rhs;
        r.rel = rel;
        for (int i = 0; i < static_cast<int>(coeffs.size()); ++i) {
            const Rational& c = coeffs[static_cast<std::size_t>(i)];
            if (c == 0) continue;
            const auto& m = vmap[static_cast<std::size_t>(i)];
            r.b -= c * m.shift;
            if (m.col_pos >= 0) r.a[static_cast<std::size_t>(m.col_pos)] += c;
            if (m.col_neg >= 0) r.a[static_cast<std::size_t>(m.col_neg)] -= c;
        }
        eq.push_back(std::move(r));
    };
    for (const auto& row : lp.rows) add_source_row(row.coeffs, row.rel, row.rhs);
    for (const auto& [var, residual] : upper_rows) {
        EqRow r;
        r.a.assign(static_cast<std::size_t>(cols), Rational(0));
        r.a[static_cast<std::size_t>(vmap[static_cast<std::size_t>(var)].col_pos)] = 1;
        r.b = residual;
        r.rel = Relation::le;
        eq.push_back(std::move(r));
    }

    // Drop empty rows, checking their feasibility directly.
    {
        std::vector<EqRow> kept;
        for (auto& r : eq) {
            bool empty = std::all_of(r.a.begin(), r.a.end(),
                                     [](const Rational& c) { return c == 0; });
            if (!empty) {
                kept.push_back(std::move(r));
                continue;
            }
            bool ok = (r.rel == Relation::le && r.b >= 0) ||
                      (r.rel == Relation::ge && r.b <= 0) ||
                      (r.rel == Relation::eq && r.b == 0);
            if (!ok) return {LpStatus::infeasible, std::nullopt};
        }
        eq = std::move(kept);
    }

    // Normalize rhs >= 0, then append slack/surplus and artificial columns.
    const int m = static_cast<int>(eq.size());
    int slack_count = 0;
    for (const auto& r : eq)
        if (r.rel != Relation::eq) ++slack_count;
    Tableau tab;
    tab.m = m;
    std::vector<int> artificial_of(static_cast<std::size_t>(m), -1);
    int artificial_count = 0;
    {
        // first pass to count artificials
        for (int i = 0; i < m; ++i) {
            auto& r = eq[static_cast<std::size_t>(i)];
            bool flip = r.b < 0;
            Relation rel = r.rel;
            if (flip && rel == Relation::le) rel = Relation::ge;
            else if (flip && rel == Relation::ge) rel = Relation::le;
            if (rel != Relation::le) ++artificial_count;
        }
    }
    tab.n = cols + slack_count + artificial_count;
    tab.t.assign(static_cast<std::size_t>(m + 1),
                 std::vector<Rational>(static_cast<std::size_t>(tab.n + 1), Rational(0)));
    tab.basis.assign(static_cast<std::size_t>(m), -1);
    int next_slack = cols;
    int next_artificial = cols + slack_count;
    for (int i = 0; i < m; ++i) {
        auto& r = eq[static_cast<std::size_t>(i)];
        bool flip = r.b < 0;
        if (flip) {
            for (auto& c : r.a) c = -c;
            r.b = -r.b;
            if (r.rel == Relation::le) r.rel = Relation::ge;
            else if (r.rel == Relation::ge) r.rel = Relation::le;
        }
        for (int j = 0; j < cols; ++j) tab.at(i, j) = r.a[static_cast<std::size_t>(j)];
        tab.rhs(i) = r.b;
        if (r.rel == Relation::le) {
            tab.at(i, next_slack) = 1;
            tab.basis[static_cast<std::size_t>(i)] = next_slack;
            ++next_slack;
        } else if (r.rel == Relation::ge) {
            tab.at(i, next_slack) = -1;
            ++next_slack;
        }
        if (r.rel != Relation::le) {
            tab.at(i, next_artificial) = 1;
            tab.basis[static_cast<std::size_t>(i)] = next_artificial;
            artificial_of[static_cast<std::size_t>(i)] = next_artificial;
            ++next_artificial;
        }
    }

    const int real_cols = cols + slack_count;

    // Phase 1: minimize the sum of artificials.
    if (artificial_count > 0) {
        for (int i = 0; i < m; ++i) {
            if (artificial_of[static_cast<std::size_t>(i)] < 0) continue;
            for (int j = 0; j <= tab.n; ++j) tab.at(m, j) -= tab.at(i, j);
        }
        if (!tab.run(tab.n))
            throw std::logic_error("phase-1 simplex reported unbounded");
        if (tab.rhs(m) != 0) return {LpStatus::infeasible, std::nullopt};
        // Pivot remaining artificials out of the basis.
        for (int i = 0; i < m; ++i) {
            if (tab.basis[static_cast<std::size_t>(i)] < real_cols) continue;
            int enter = -1;
            for (int j = 0; j < real_cols; ++j) {
                if (tab.at(i, j) != 0) {
                    enter = j;
                    break;
                }
            }
            if (enter >= 0) tab.pivot(i, enter);
            // else: redundant row; leave the zero-valued artificial basic,
            // phase 2 never pivots on artificial columns.
        }
    }

    // Phase 2 cost row: original objective over the y columns.
    Rational objective_shift = 0;
    for (int j = 0; j <= tab.n; ++j) tab.at(m, j) = 0;
    for (int i = 0; i < lp.num_vars; ++i) {
        const Rational& c = lp.objective[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        const auto& vm = vmap[static_cast<std::size_t>(i)];
        objective_shift += c * vm.shift;
        if (vm.col_pos >= 0) tab.at(m, vm.col_pos) += c;
        if (vm.col_neg >= 0) tab.at(m, vm.col_neg) -= c;
    }
    for (int i = 0; i < m; ++i) {
        int b = tab.basis[static_cast<std::size_t>(i)];
        const Rational factor = tab.at(m, b);
        if (factor == 0) continue;
        for (int j = 0; j <= tab.n; ++j) tab.at(m, j) -= factor * tab.at(i, j);
    }
    if (!tab.run(real_cols)) return {LpStatus::unbounded, std::nullopt};

    // Recover x from the y solution.
    std::vector<Rational> y(static_cast<std::size_t>(tab.n), Rational(0));
    for (int i = 0; i < m; ++i) y[static_cast<std::size_t>(tab.basis[static_cast<std::size_t>(i)])] = tab.rhs(i);
    LpOptimal result;
    result.assignment.resize(static_cast<std::size_t>(lp.num_vars));
    for (int i = 0; i < lp.num_vars; ++i) {
        const auto& vm = vmap[static_cast<std::size_t>(i)];
        Rational x = vm.shift;
        if (vm.col_pos >= 0) x += y[static_cast<std::size_t>(vm.col_pos)];
        if (vm.col_neg >= 0) x -= y[static_cast<std::size_t>(vm.col_neg)];
        result.assignment[static_cast<std::size_t>(i)] = x;
    }
    result.value = 0;
    for (int i = 0; i < lp.num_vars; ++i)
        result.value += lp.objective[static_cast<std::size_t>(i)] *
                        result.assignment[static_cast<std::size_t>(i)];

    // Exact feasibility audit of the returned point.
    for (int i = 0; i < lp.num_vars; ++i) {
        const auto& lo = lp.lower[static_cast<std::size_t>(i)];
        const auto& hi = lp.upper[static_cast<std::size_t>(i)];
        const Rational& x = result.assignment[static_cast<std::size_t>(i)];
        if ((lo && x < *lo) || (hi && x > *hi))
            throw std::logic_error("simplex returned a bound-infeasible point");
    }
    for (const auto& row : lp.rows) {
        Rational lhs = 0;
        for (int i = 0; i < lp.num_vars; ++i)
            lhs += row.coeffs[static_cast<std::size_t>(i)] *
                   result.assignment[static_cast<std::size_t>(i)];
        bool ok = (row.rel == Relation::le && lhs <= row.rhs) ||
                  (row.rel == Relation::ge && lhs >= row.rhs) ||
                  (row.rel == Relation::eq && lhs == row.rhs);
        if (!ok) throw std::logic_error("simplex returned a row-infeasible point");
    }
    return {LpStatus::optimal, std::move(result)};
}

} // namespace stabnet
