#include "foliation/errors.hpp"
#include "foliation/first_integral.hpp"
#include "foliation/linear_solve.hpp"

#include <unordered_map>

namespace foliation {

int hessian_rank(const TruncatedSeries& f) {
    const int n = f.nvars();
    SparseSystem sys(n);
    for (int i = 0; i < n; ++i) {
        SparseRow row;
        TruncatedSeries di = partial_derivative(f, i);
        for (int j = 0; j < n; ++j) {
            auto c = di.coefficient(MultiIndex::unit(j));
            if (!c.is_zero()) row.push_back({j, c});
        }
        sys.add_row(std::move(row), GaussianRational(0));
    }
    return solve_sparse(sys, {.lexicographic_normal_form = false}).rank;
}

namespace {

// Solves sum_i dQ_i * phi^i = target for homogeneous phi^i of degree k.
std::vector<TruncatedSeries> solve_ideal_stage(const std::vector<TruncatedSeries>& dQ, const Bucket& target, int k,
                                               int order, Field field) {
    const int n = static_cast<int>(dQ.size());
    auto cols = monomials_of_degree(n, k);
    auto rows = monomials_of_degree(n, k + 1);
    std::unordered_map<std::uint64_t, int> row_of;
    for (std::size_t r = 0; r < rows.size(); ++r) row_of.emplace(rows[r].packed(), static_cast<int>(r));
    const int nc = static_cast<int>(cols.size());
    std::vector<SparseRow> data(rows.size());
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < nc; ++c)
            for (const auto& t : dQ[static_cast<std::size_t>(i)].bucket(1))
                data[static_cast<std::size_t>(row_of.at((t.index + cols[static_cast<std::size_t>(c)]).packed()))]
                    .push_back({i * nc + c, t.coeff});
    std::vector<GaussianRational> rhs(rows.size());
    for (const auto& t : target) rhs[static_cast<std::size_t>(row_of.at(t.index.packed()))] = t.coeff;
    SparseSystem sys(n * nc);
    for (std::size_t r = 0; r < rows.size(); ++r) sys.add_row(std::move(data[r]), rhs[r]);
    auto sol = solve_sparse(sys);
    if (!sol.consistent) throw NumericalError("Morse stage unexpectedly inconsistent");
    std::vector<TruncatedSeries> out;
    for (int i = 0; i < n; ++i) {
        std::vector<Term> terms;
        for (int c = 0; c < nc; ++c) {
            const auto& v = sol.x[static_cast<std::size_t>(i * nc + c)];
            if (!v.is_zero()) terms.push_back({cols[static_cast<std::size_t>(c)], v});
        }
        out.push_back(TruncatedSeries::from_terms(n, order, field, std::move(terms)));
    }
    return out;
}

}  // namespace

CoordinateChange morse_normalize(const TruncatedSeries& f, int order) {
    check_user_order(order);
    const int n = f.nvars();
    if (f.order() < order) throw PreconditionError("f known through a lower order than requested");
    if (!f.bucket(0).empty() || !f.bucket(1).empty()) throw PreconditionError("f must vanish to second order at 0");
    int rank = hessian_rank(f);
    if (rank < n) throw RankDeficiencyError(rank, n);

    const Field field = f.field();
    TruncatedSeries fN = f.truncate(order);
    TruncatedSeries Q(n, order, field);
    Q.set_bucket(2, f.bucket(2));
    std::vector<TruncatedSeries> dQ;
    for (int i = 0; i < n; ++i) dQ.push_back(partial_derivative(Q, i));

    std::vector<TruncatedSeries> phi;
    for (int i = 0; i < n; ++i) phi.push_back(TruncatedSeries::variable(n, order, i, field));
    for (int k = 2; k + 1 <= order; ++k) {
        TruncatedSeries comp = substitute(fN, phi);
        Bucket target;
        for (const auto& t : comp.bucket(k + 1)) target.push_back({t.index, -t.coeff});
        if (target.empty()) continue;
        auto step = solve_ideal_stage(dQ, target, k, order, field);
        for (int i = 0; i < n; ++i) phi[static_cast<std::size_t>(i)] += step[static_cast<std::size_t>(i)];
    }

    // psi = id - (phi - id) o psi, one order gained per sweep
    std::vector<TruncatedSeries> psi;
    for (int i = 0; i < n; ++i) psi.push_back(TruncatedSeries::variable(n, order, i, field));
    for (int sweep = 0; sweep < order; ++sweep) {
        std::vector<TruncatedSeries> next;
        for (int i = 0; i < n; ++i) {
            TruncatedSeries hot = phi[static_cast<std::size_t>(i)] - TruncatedSeries::variable(n, order, i, field);
            next.push_back(TruncatedSeries::variable(n, order, i, field) - substitute(hot, psi));
        }
        if (next == psi) break;
        psi = std::move(next);
    }
    return {std::move(phi), std::move(psi), order};
}

KForm restrict_hyperplane(const KForm& omega, std::span<const Rational> coeffs) {
    const int n = omega.nvars();
    if (n < 2) throw PreconditionError("restriction needs at least two variables");
    if (coeffs.size() != static_cast<std::size_t>(n - 1))
        throw StructuralError("restriction needs " + std::to_string(n - 1) + " coefficients");
    const int m = n - 1;
    const int order = omega.order() + 1;
    std::vector<TruncatedSeries> images;
    TruncatedSeries last(m, order);
    for (int j = 0; j < m; ++j) {
        images.push_back(TruncatedSeries::variable(m, order, j));
        last += scale(TruncatedSeries::variable(m, order, j), GaussianRational(coeffs[static_cast<std::size_t>(j)]));
    }
    images.push_back(std::move(last));
    return pullback(omega, images);
}

bool complexify_restrict_commutes(const KForm& omega, std::span<const Rational> coeffs) {
    return restrict_hyperplane(omega, coeffs).complexify() == restrict_hyperplane(omega.complexify(), coeffs);
}

}  // namespace foliation
