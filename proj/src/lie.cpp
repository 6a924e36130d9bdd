#include <unordered_map>

#include "foliation/errors.hpp"
#include "foliation/first_integral.hpp"
#include "foliation/linear_solve.hpp"

namespace foliation {

namespace {

struct LieRun {
    std::optional<int> obstruction;
    TruncatedSeries F{1, 0};
    std::vector<std::pair<int, Rational>> focal;
};

// Degree-D part of X(F).
Bucket apply_field(std::span<const TruncatedSeries> X, const std::vector<TruncatedSeries>& dF, int D) {
    const int n = static_cast<int>(X.size());
    TruncatedSeries acc(X[0].nvars(), D, X[0].field());
    for (int p = 0; p < n; ++p) {
        TruncatedSeries t(X[0].nvars(), D, X[0].field());
        t.set_bucket(D, homogeneous_product(X[static_cast<std::size_t>(p)], dF[static_cast<std::size_t>(p)], D));
        acc += t;
    }
    return acc.bucket(D);
}

LieRun run_lie(std::span<const TruncatedSeries> X, const TruncatedSeries& Q_in, int N, bool with_complement) {
    const int n = static_cast<int>(X.size());
    if (n < 1 || X[0].nvars() != n) throw StructuralError("vector field needs nvars components");
    check_user_order(N);
    Field field = Q_in.field();
    for (const auto& c : X) {
        if (c.nvars() != n) throw StructuralError("field components differ in nvars");
        if (c.order() < N) throw PreconditionError("field known through a lower order than requested");
        if (c.field() == Field::gaussian) field = Field::gaussian;
    }
    std::vector<TruncatedSeries> Xs;
    std::optional<int> nu;
    for (const auto& c : X) {
        Xs.push_back(field == Field::gaussian ? c.complexify().truncate(N) : c.truncate(N));
        auto v = c.truncate(N).valuation();
        if (v && (!nu || *v < *nu)) nu = v;
    }
    if (!nu || *nu < 1) throw PreconditionError("field must vanish at the origin and be nonzero");
    auto qv = Q_in.valuation();
    if (!qv || !Q_in.is_homogeneous() || *qv != *nu + 1)
        throw PreconditionError("Q must be homogeneous of degree one above the field's leading degree");

    TruncatedSeries F = Q_in.as_polynomial(N + 1);
    if (field == Field::gaussian) F = F.complexify();
    std::vector<TruncatedSeries> dF;
    for (int p = 0; p < n; ++p) dF.push_back(partial_derivative(F, p));
    if (!apply_field(Xs, dF, 2 * *nu).empty()) throw PreconditionError("leading field does not annihilate Q");

    std::vector<Bucket> lead;
    for (const auto& c : Xs) lead.push_back(c.bucket(*nu));
    const bool rotation_center = with_complement && n == 2 && *nu == 1;

    LieRun run;
    for (int m = *nu + 1; m <= N; ++m) {
        const int D = *nu + m;
        Bucket known = apply_field(Xs, dF, D);
        auto cols = monomials_of_degree(n, m + 1);
        auto rows = monomials_of_degree(n, D);
        std::unordered_map<std::uint64_t, int> row_of;
        for (std::size_t r = 0; r < rows.size(); ++r) row_of.emplace(rows[r].packed(), static_cast<int>(r));
        const int nc = static_cast<int>(cols.size());
        const bool comp = rotation_center && D % 2 == 0;
        std::vector<SparseRow> data(rows.size());
        for (int c = 0; c < nc; ++c) {
            const MultiIndex& beta = cols[static_cast<std::size_t>(c)];
            for (int p = 0; p < n; ++p) {
                if (beta[p] == 0) continue;
                MultiIndex base = beta - MultiIndex::unit(p);
                for (const auto& t : lead[static_cast<std::size_t>(p)])
                    data[static_cast<std::size_t>(row_of.at((base + t.index).packed()))].push_back(
                        {c, t.coeff * GaussianRational(beta[p])});
            }
        }
        if (comp) {
            auto x = TruncatedSeries::variable(2, D, 0, field);
            auto y = TruncatedSeries::variable(2, D, 1, field);
            const TruncatedSeries qk = power(x * x + y * y, D / 2);
            for (const auto& t : qk.bucket(D))
                data[static_cast<std::size_t>(row_of.at(t.index.packed()))].push_back({nc, -t.coeff});
        }
        std::vector<GaussianRational> rhs(rows.size());
        for (const auto& t : known) rhs[static_cast<std::size_t>(row_of.at(t.index.packed()))] = -t.coeff;
        SparseSystem sys(nc + (comp ? 1 : 0));
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (!data[r].empty() || !rhs[r].is_zero()) sys.add_row(std::move(data[r]), rhs[r]);
        auto sol = solve_sparse(sys);
        if (!sol.consistent) {
            run.obstruction = m;
            run.F = F.truncate(m);
            return run;
        }
        if (comp) run.focal.emplace_back(D, sol.x[static_cast<std::size_t>(nc)].re());
        std::vector<Term> terms;
        for (int c = 0; c < nc; ++c)
            if (!sol.x[static_cast<std::size_t>(c)].is_zero())
                terms.push_back({cols[static_cast<std::size_t>(c)], sol.x[static_cast<std::size_t>(c)]});
        TruncatedSeries Fm = TruncatedSeries::from_terms(n, N + 1, field, std::move(terms));
        F += Fm;
        for (int p = 0; p < n; ++p) dF[static_cast<std::size_t>(p)] += partial_derivative(Fm, p);
    }
    run.F = std::move(F);
    return run;
}

}  // namespace

FocalValueSequence solve_lie(std::span<const TruncatedSeries> field, int order) {
    if (field.size() != 2 || field[0].nvars() != 2) throw PreconditionError("solve_lie needs a planar field");
    const auto& X = field[0];
    const auto& Y = field[1];
    if (!X.bucket(0).empty() || !Y.bucket(0).empty()) throw PreconditionError("field does not vanish at the origin");
    auto x = TruncatedSeries::variable(2, 1, 0, X.field());
    auto y = TruncatedSeries::variable(2, 1, 1, X.field());
    if (Y.field() != X.field() || X.truncate(1) != -y || Y.truncate(1) != x)
        throw PreconditionError("linear part is not the rotation -y d/dx + x d/dy");
    auto Q = TruncatedSeries::variable(2, 2, 0, X.field());
    Q = Q * Q + TruncatedSeries::variable(2, 2, 1, X.field()) * TruncatedSeries::variable(2, 2, 1, X.field());
    LieRun run = run_lie(field, Q, order, true);
    FocalValueSequence seq;
    seq.method = FocalMethod::lyapunov_recursion;
    for (auto& [idx, v] : run.focal) {
        seq.indices.push_back(idx);
        seq.values.push_back(v);
    }
    seq.continued_modulo_earlier = seq.first_nonzero_index().has_value();
    return seq;
}

LieOutcome lie_first_integral(std::span<const TruncatedSeries> field, const TruncatedSeries& Q, int order) {
    LieRun run = run_lie(field, Q, order, false);
    LieOutcome out;
    out.status = run.obstruction ? SolveStatus::obstructed : SolveStatus::solved;
    out.F = std::move(run.F);
    out.obstruction_degree = run.obstruction;
    return out;
}

std::vector<TruncatedSeries> dual_field(const KForm& omega) {
    if (omega.degree() != 1 || omega.nvars() != 2) throw PreconditionError("dual field needs a planar 1-form");
    return {omega.component(1), -omega.component(0)};
}

KForm form_of_field(std::span<const TruncatedSeries> field) {
    if (field.size() != 2) throw PreconditionError("form_of_field needs a planar field");
    std::vector<TruncatedSeries> comps{scale(field[1], GaussianRational(2)), scale(field[0], GaussianRational(-2))};
    return KForm::one_form(comps);
}

std::vector<TruncatedSeries> field_of_form(const KForm& omega) {
    if (omega.degree() != 1 || omega.nvars() != 2) throw PreconditionError("field_of_form needs a planar 1-form");
    const GaussianRational half(Rational(1, 2));
    return {scale(omega.component(1), -half), scale(omega.component(0), half)};
}

}  // namespace foliation
