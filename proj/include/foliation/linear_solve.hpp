#pragma once

// Exact sparse Gaussian elimination over Q(i).
//
// Pivots are chosen for sparsity (fewest entries per column, then per
// row), but the returned particular solution is the one a column-order
// reduced row echelon form gives with every free variable set to zero:
// a column is free iff it lies in the span of the columns before it.
// That solution does not depend on the pivot sequence.

#include <vector>

#include "foliation/scalar.hpp"

namespace foliation {

struct SparseEntry {
    int col;
    GaussianRational value;
};

using SparseRow = std::vector<SparseEntry>;

class SparseSystem {
public:
    explicit SparseSystem(int ncols) : ncols_(ncols) {}

    int ncols() const noexcept { return ncols_; }
    int nrows() const noexcept { return static_cast<int>(rows_.size()); }

    // Entries may be unsorted and repeated; zeros are dropped.
    int add_row(SparseRow row, GaussianRational rhs);

    const std::vector<SparseRow>& rows() const noexcept { return rows_; }
    const std::vector<GaussianRational>& rhs() const noexcept { return rhs_; }

private:
    int ncols_;
    std::vector<SparseRow> rows_;
    std::vector<GaussianRational> rhs_;
};

struct SolveOptions {
    // Enforce the column-order normalization (zero on lexicographically
    // free columns). Costs a dense pass over the kernel.
    bool lexicographic_normal_form = true;
    bool want_kernel = false;
};

struct SparseSolution {
    bool consistent = true;
    int rank = 0;
    std::vector<GaussianRational> x;  // valid when consistent
    // Free columns of the column-order echelon form (only when
    // lexicographic_normal_form); otherwise the free columns of the
    // elimination actually performed.
    std::vector<int> free_columns;
    // Reduced right-hand sides of the rows left without pivots, in row
    // order. All zero iff consistent.
    std::vector<GaussianRational> residual_class;
    std::vector<std::vector<GaussianRational>> kernel;  // when want_kernel
};

SparseSolution solve_sparse(const SparseSystem& system, const SolveOptions& options = {});

}  // namespace foliation
