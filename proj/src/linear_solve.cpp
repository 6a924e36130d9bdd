#include "foliation/linear_solve.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace foliation {

int SparseSystem::add_row(SparseRow row, GaussianRational rhs) {
    std::sort(row.begin(), row.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
    SparseRow merged;
    for (auto& e : row) {
        if (e.col < 0 || e.col >= ncols_) throw std::out_of_range("sparse column out of range");
        if (!merged.empty() && merged.back().col == e.col)
            merged.back().value += e.value;
        else
            merged.push_back(std::move(e));
    }
    std::erase_if(merged, [](const SparseEntry& e) { return e.value.is_zero(); });
    rows_.push_back(std::move(merged));
    rhs_.push_back(std::move(rhs));
    return nrows() - 1;
}

namespace {

const GaussianRational* find_entry(const SparseRow& row, int col) {
    auto it = std::lower_bound(row.begin(), row.end(), col, [](const SparseEntry& e, int c) { return e.col < c; });
    return (it != row.end() && it->col == col) ? &it->value : nullptr;
}

class Eliminator {
public:
    explicit Eliminator(const SparseSystem& sys)
        : ncols_(sys.ncols()), rows_(sys.rows()), rhs_(sys.rhs()),
          col_rows_(static_cast<std::size_t>(sys.ncols())),
          row_active_(static_cast<std::size_t>(sys.nrows()), true),
          col_done_(static_cast<std::size_t>(sys.ncols()), false) {
        for (int r = 0; r < sys.nrows(); ++r)
            for (const auto& e : rows_[static_cast<std::size_t>(r)]) col_rows_[static_cast<std::size_t>(e.col)].insert(r);
    }

    void run() {
        while (true) {
            int best_col = -1;
            std::size_t best_count = std::numeric_limits<std::size_t>::max();
            for (int c = 0; c < ncols_; ++c) {
                if (col_done_[static_cast<std::size_t>(c)]) continue;
                std::size_t cnt = col_rows_[static_cast<std::size_t>(c)].size();
                if (cnt > 0 && cnt < best_count) {
                    best_count = cnt;
                    best_col = c;
                    if (cnt == 1) break;
                }
            }
            if (best_col < 0) break;
            int best_row = -1;
            std::size_t best_len = std::numeric_limits<std::size_t>::max();
            for (int r : col_rows_[static_cast<std::size_t>(best_col)]) {
                std::size_t len = rows_[static_cast<std::size_t>(r)].size();
                if (len < best_len) {
                    best_len = len;
                    best_row = r;
                }
            }
            pivot(best_row, best_col);
        }
    }

    void pivot(int prow, int pcol) {
        const SparseRow& p = rows_[static_cast<std::size_t>(prow)];
        const GaussianRational pval = *find_entry(p, pcol);
        row_active_[static_cast<std::size_t>(prow)] = false;
        col_done_[static_cast<std::size_t>(pcol)] = true;
        for (const auto& e : p) col_rows_[static_cast<std::size_t>(e.col)].erase(prow);
        std::vector<int> targets(col_rows_[static_cast<std::size_t>(pcol)].begin(),
                                 col_rows_[static_cast<std::size_t>(pcol)].end());
        for (int r : targets) {
            SparseRow& row = rows_[static_cast<std::size_t>(r)];
            GaussianRational factor = *find_entry(row, pcol) / pval;
            SparseRow out;
            out.reserve(row.size() + p.size());
            std::size_t i = 0, j = 0;
            while (i < row.size() || j < p.size()) {
                if (j == p.size() || (i < row.size() && row[i].col < p[j].col)) {
                    out.push_back(std::move(row[i++]));
                } else if (i == row.size() || p[j].col < row[i].col) {
                    out.push_back({p[j].col, -(factor * p[j].value)});
                    col_rows_[static_cast<std::size_t>(p[j].col)].insert(r);
                    ++j;
                } else {
                    GaussianRational v = row[i].value - factor * p[j].value;
                    if (v.is_zero())
                        col_rows_[static_cast<std::size_t>(row[i].col)].erase(r);
                    else
                        out.push_back({row[i].col, std::move(v)});
                    ++i;
                    ++j;
                }
            }
            row = std::move(out);
            if (!rhs_[static_cast<std::size_t>(prow)].is_zero())
                rhs_[static_cast<std::size_t>(r)] -= factor * rhs_[static_cast<std::size_t>(prow)];
        }
        pivots_.push_back({prow, pcol});
    }

    // Back substitution with the given values on non-pivot columns.
    std::vector<GaussianRational> back_substitute(const std::vector<GaussianRational>& rhs,
                                                  std::vector<GaussianRational> x) const {
        for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
            const SparseRow& row = rows_[static_cast<std::size_t>(it->first)];
            GaussianRational acc = rhs[static_cast<std::size_t>(it->first)];
            const GaussianRational* diag = nullptr;
            for (const auto& e : row) {
                if (e.col == it->second) {
                    diag = &e.value;
                    continue;
                }
                const auto& xv = x[static_cast<std::size_t>(e.col)];
                if (!xv.is_zero()) acc -= e.value * xv;
            }
            x[static_cast<std::size_t>(it->second)] = acc / *diag;
        }
        return x;
    }

    int ncols_;
    std::vector<SparseRow> rows_;
    std::vector<GaussianRational> rhs_;
    std::vector<std::set<int>> col_rows_;
    std::vector<bool> row_active_;
    std::vector<bool> col_done_;
    std::vector<std::pair<int, int>> pivots_;
};

int last_nonzero(const std::vector<GaussianRational>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
        if (!v[static_cast<std::size_t>(i)].is_zero()) return i;
    return -1;
}

}  // namespace

SparseSolution solve_sparse(const SparseSystem& system, const SolveOptions& options) {
    Eliminator el(system);
    el.run();

    SparseSolution sol;
    sol.rank = static_cast<int>(el.pivots_.size());
    for (int r = 0; r < system.nrows(); ++r) {
        if (!el.row_active_[static_cast<std::size_t>(r)]) continue;
        const auto& v = el.rhs_[static_cast<std::size_t>(r)];
        sol.residual_class.push_back(v);
        if (!v.is_zero()) sol.consistent = false;
    }

    std::vector<int> free_cols;
    for (int c = 0; c < system.ncols(); ++c)
        if (!el.col_done_[static_cast<std::size_t>(c)]) free_cols.push_back(c);

    const std::size_t n = static_cast<std::size_t>(system.ncols());
    std::vector<std::vector<GaussianRational>> kernel;
    bool need_kernel = options.want_kernel || (options.lexicographic_normal_form && !free_cols.empty());
    if (need_kernel) {
        std::vector<GaussianRational> zero_rhs(static_cast<std::size_t>(system.nrows()));
        for (int f : free_cols) {
            std::vector<GaussianRational> x(n);
            x[static_cast<std::size_t>(f)] = GaussianRational(1);
            kernel.push_back(el.back_substitute(zero_rhs, std::move(x)));
        }
    }

    if (sol.consistent) sol.x = el.back_substitute(el.rhs_, std::vector<GaussianRational>(n));

    if (options.lexicographic_normal_form && !kernel.empty()) {
        // Reduce the kernel basis so each vector owns a distinct last
        // nonzero column and vanishes on the others' last columns.
        std::vector<std::vector<GaussianRational>> pending = std::move(kernel);
        std::vector<std::vector<GaussianRational>> basis;
        std::vector<int> lead;
        while (!pending.empty()) {
            auto it = std::max_element(pending.begin(), pending.end(),
                                       [](const auto& a, const auto& b) { return last_nonzero(a) < last_nonzero(b); });
            std::vector<GaussianRational> v = std::move(*it);
            pending.erase(it);
            int L = last_nonzero(v);
            GaussianRational inv = GaussianRational(1) / v[static_cast<std::size_t>(L)];
            for (auto& e : v)
                if (!e.is_zero()) e *= inv;
            auto eliminate = [&](std::vector<GaussianRational>& w) {
                GaussianRational f = w[static_cast<std::size_t>(L)];
                if (f.is_zero()) return;
                for (std::size_t i = 0; i < n; ++i)
                    if (!v[i].is_zero()) w[i] -= f * v[i];
            };
            for (auto& w : pending) eliminate(w);
            for (auto& w : basis) eliminate(w);
            basis.push_back(std::move(v));
            lead.push_back(L);
        }
        if (sol.consistent) {
            for (std::size_t k = 0; k < basis.size(); ++k) {
                GaussianRational f = sol.x[static_cast<std::size_t>(lead[k])];
                if (f.is_zero()) continue;
                for (std::size_t i = 0; i < n; ++i)
                    if (!basis[k][i].is_zero()) sol.x[i] -= f * basis[k][i];
            }
        }
        std::sort(lead.begin(), lead.end());
        sol.free_columns = lead;
        if (options.want_kernel) sol.kernel = std::move(basis);
    } else {
        sol.free_columns = free_cols;
        if (options.want_kernel) sol.kernel = std::move(kernel);
    }
    return sol;
}

}  // namespace foliation
