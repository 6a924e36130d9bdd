#include "foliation/first_integral.hpp"

#include <unordered_map>

#include "foliation/errors.hpp"
#include "foliation/linear_solve.hpp"

namespace foliation {

const char* status_name(SolveStatus s) noexcept { return s == SolveStatus::solved ? "solved" : "obstructed"; }

namespace {

// Row numbering for a homogeneous degree-m 1-form equation: (variable, monomial).
class RowIndex {
public:
    RowIndex(int nvars, int degree) {
        auto mons = monomials_of_degree(nvars, degree);
        count_ = static_cast<int>(mons.size());
        for (int k = 0; k < count_; ++k) pos_.emplace(mons[static_cast<std::size_t>(k)].packed(), k);
    }
    int row(int var, const MultiIndex& a) const { return var * count_ + pos_.at(a.packed()); }
    int count() const { return count_; }

private:
    int count_ = 0;
    std::unordered_map<std::uint64_t, int> pos_;
};

struct StageResult {
    bool consistent = true;
    Bucket f_next;
    Bucket g_next;
    std::optional<GaussianRational> complement;
    std::vector<GaussianRational> residual_class;
};

// d f_{m+1} + g_{m-nu} dQ [+ c * eta] = R, all homogeneous of degree m.
StageResult solve_stage(int n, int m, int nu, const std::vector<Bucket>& dQ, const std::vector<Bucket>& rhs,
                        const std::vector<Bucket>* eta) {
    const auto fmons = monomials_of_degree(n, m + 1);
    const auto gmons = monomials_of_degree(n, m - nu);
    const int nf = static_cast<int>(fmons.size());
    const int ng = static_cast<int>(gmons.size());
    const int ncols = nf + ng + (eta ? 1 : 0);
    RowIndex rows(n, m);
    std::vector<SparseRow> data(static_cast<std::size_t>(n * rows.count()));
    std::vector<GaussianRational> b(data.size());

    for (int c = 0; c < nf; ++c) {
        const MultiIndex& beta = fmons[static_cast<std::size_t>(c)];
        for (int i = 0; i < n; ++i)
            if (beta[i] > 0)
                data[static_cast<std::size_t>(rows.row(i, beta - MultiIndex::unit(i)))].push_back(
                    {c, GaussianRational(beta[i])});
    }
    for (int c = 0; c < ng; ++c) {
        const MultiIndex& gamma = gmons[static_cast<std::size_t>(c)];
        for (int i = 0; i < n; ++i)
            for (const auto& t : dQ[static_cast<std::size_t>(i)])
                data[static_cast<std::size_t>(rows.row(i, gamma + t.index))].push_back({nf + c, t.coeff});
    }
    if (eta)
        for (int i = 0; i < n; ++i)
            for (const auto& t : (*eta)[static_cast<std::size_t>(i)])
                data[static_cast<std::size_t>(rows.row(i, t.index))].push_back({ncols - 1, t.coeff});
    for (int i = 0; i < n; ++i)
        for (const auto& t : rhs[static_cast<std::size_t>(i)]) b[static_cast<std::size_t>(rows.row(i, t.index))] = t.coeff;

    SparseSystem sys(ncols);
    for (std::size_t r = 0; r < data.size(); ++r)
        if (!data[r].empty() || !b[r].is_zero()) sys.add_row(std::move(data[r]), b[r]);
    auto sol = solve_sparse(sys);

    StageResult out;
    out.consistent = sol.consistent;
    out.residual_class = sol.residual_class;
    if (!sol.consistent) return out;
    for (int c = 0; c < nf; ++c)
        if (!sol.x[static_cast<std::size_t>(c)].is_zero())
            out.f_next.push_back({fmons[static_cast<std::size_t>(c)], sol.x[static_cast<std::size_t>(c)]});
    for (int c = 0; c < ng; ++c)
        if (!sol.x[static_cast<std::size_t>(nf + c)].is_zero())
            out.g_next.push_back({gmons[static_cast<std::size_t>(c)], sol.x[static_cast<std::size_t>(nf + c)]});
    if (eta) out.complement = sol.x[static_cast<std::size_t>(ncols - 1)];
    return out;
}

bool is_plane_center(const TruncatedSeries& Q) {
    if (Q.nvars() != 2) return false;
    auto x = TruncatedSeries::variable(2, Q.order(), 0, Q.field());
    auto y = TruncatedSeries::variable(2, Q.order(), 1, Q.field());
    return Q == x * x + y * y;
}

// (x^2+y^2)^{k-1} (y dx - x dy) as per-variable buckets of degree 2k-1.
std::vector<Bucket> center_complement(int k, Field field) {
    const int deg = 2 * k - 1;
    auto x = TruncatedSeries::variable(2, deg, 0, field);
    auto y = TruncatedSeries::variable(2, deg, 1, field);
    auto qk = power(x * x + y * y, k - 1);
    return {(qk * y).bucket(deg), (-(qk * x)).bucket(deg)};
}

struct Run {
    FirstIntegralOutcome outcome;
    std::vector<std::pair<int, Rational>> focal;
};

Run run_stages(const KForm& omega_in, const TruncatedSeries& Q_in, int N, bool with_complement) {
    if (omega_in.degree() != 1) throw PreconditionError("first integral solver needs a 1-form");
    const int n = omega_in.nvars();
    if (Q_in.nvars() != n) throw StructuralError("Q and omega have different nvars");
    check_user_order(N);
    if (omega_in.order() < N)
        throw PreconditionError("omega known through order " + std::to_string(omega_in.order()) + " < " + std::to_string(N));
    auto qv = Q_in.valuation();
    if (!qv || !Q_in.is_homogeneous() || *qv < 1) throw PreconditionError("Q must be a nonzero homogeneous polynomial of degree >= 1");
    const int nu = *qv - 1;
    if (N < nu) throw PreconditionError("order below the leading index");

    const Field field = (omega_in.field() == Field::gaussian || Q_in.field() == Field::gaussian) ? Field::gaussian : Field::rational;
    KForm omega = omega_in.truncate(N);
    if (field == Field::gaussian) omega = omega.complexify();
    TruncatedSeries Q = Q_in.as_polynomial(N + 1);
    if (field == Field::gaussian) Q = Q.complexify();

    if (n >= 3 && !integrability_residual(omega).is_zero())
        throw PreconditionError("omega is not integrable (omega ^ d omega != 0)");
    for (int m = 0; m < nu; ++m)
        if (!omega.homogeneous_part(m).is_zero())
            throw PreconditionError("omega has a nonzero part of degree " + std::to_string(m) + " below deg Q - 1");
    KForm dQ = exterior_derivative(KForm::function(Q));
    if (omega.homogeneous_part(nu) != dQ.homogeneous_part(nu).truncate(N))
        throw PreconditionError("leading part of omega differs from dQ");

    std::vector<Bucket> dQb;
    for (int i = 0; i < n; ++i) dQb.push_back(dQ.component(i).bucket(nu));

    TruncatedSeries f_tail(n, N + 1, field);  // f - Q
    TruncatedSeries g_tail(n, N - nu, field);  // g - 1
    std::vector<TruncatedSeries> df_tail(static_cast<std::size_t>(n), TruncatedSeries(n, N, field));

    Run run;
    FirstIntegralOutcome& out = run.outcome;
    out.order = N;

    const bool plane = is_plane_center(Q_in);
    for (int m = nu + 1; m <= N; ++m) {
        std::vector<Bucket> rhs;
        for (int i = 0; i < n; ++i) {
            TruncatedSeries r(n, m, field);
            r.set_bucket(m, omega.component(i).bucket(m));
            TruncatedSeries cross(n, m, field);
            cross.set_bucket(m, homogeneous_product(g_tail, df_tail[static_cast<std::size_t>(i)], m));
            rhs.push_back((r - cross).bucket(m));
        }
        std::optional<std::vector<Bucket>> eta;
        if (with_complement && plane && m % 2 == 1) eta = center_complement((m + 1) / 2, field);

        StageResult st = solve_stage(n, m, nu, dQb, rhs, eta ? &*eta : nullptr);
        if (st.consistent && eta) {
            run.focal.emplace_back(m + 1, st.complement->re());
            if (!st.complement->is_zero()) {
                // project the obstruction out: subtract V * eta from omega
                for (int i = 0; i < n; ++i) {
                    TruncatedSeries corr(n, N, field);
                    corr.set_bucket(m, (*eta)[static_cast<std::size_t>(i)]);
                    corr *= *st.complement;
                    KForm piece = KForm::basis_form({i}, corr);
                    omega -= piece;
                }
            }
        }
        if (!st.consistent) {
            out.status = SolveStatus::obstructed;
            Obstruction ob;
            ob.degree = m;
            KForm res(1, n, m, field);
            for (int i = 0; i < n; ++i) {
                TruncatedSeries r(n, m, field);
                r.set_bucket(m, rhs[static_cast<std::size_t>(i)]);
                res.add({i}, r);
            }
            ob.residual = std::move(res);
            ob.residual_class = std::move(st.residual_class);
            if (plane && m % 2 == 1) {
                auto eta_m = center_complement((m + 1) / 2, field);
                StageResult with = solve_stage(n, m, nu, dQb, rhs, &eta_m);
                if (with.consistent) ob.focal_values.push_back(with.complement->re());
            }
            out.obstruction = std::move(ob);
            out.f = (f_tail.truncate(m) + Q.truncate(m));
            out.g = (g_tail.truncate(m - nu - 1) + TruncatedSeries::constant(n, m - nu - 1, GaussianRational(1), field));
            return run;
        }
        TruncatedSeries fn(n, N + 1, field);
        fn.set_bucket(m + 1, std::move(st.f_next));
        f_tail += fn;
        for (int i = 0; i < n; ++i) {
            TruncatedSeries dfi(n, N, field);
            dfi.set_bucket(m, partial_derivative(fn, i).bucket(m));
            df_tail[static_cast<std::size_t>(i)] += dfi;
        }
        TruncatedSeries gn(n, N - nu, field);
        gn.set_bucket(m - nu, std::move(st.g_next));
        g_tail += gn;
    }
    out.status = SolveStatus::solved;
    out.f = f_tail + Q;
    out.g = g_tail + TruncatedSeries::constant(n, N - nu, GaussianRational(1), field);
    out.residual_zero = gdf_residual(omega, out.f, out.g, N).is_zero();
    return run;
}

}  // namespace

KForm gdf_residual(const KForm& omega, const TruncatedSeries& f, const TruncatedSeries& g, int order) {
    const int n = omega.nvars();
    KForm df = exterior_derivative(KForm::function(f));
    Field field = omega.field();
    KForm out(1, n, order, field);
    for (int i = 0; i < n; ++i) {
        TruncatedSeries a = omega.component(i).truncate(order);
        TruncatedSeries dfi = df.component(i);
        TruncatedSeries gi = g;
        if (dfi.field() != field) dfi = dfi.complexify();
        if (gi.field() != field) gi = gi.complexify();
        out.add({i}, a - product_through(gi, dfi, order));
    }
    return out;
}

FirstIntegralOutcome solve_gdf(const KForm& omega, const TruncatedSeries& Q, int order) {
    return run_stages(omega, Q, order, false).outcome;
}

FocalValueSequence focal_values_from_obstructions(const KForm& omega, int order) {
    if (omega.nvars() != 2) throw PreconditionError("focal values need a planar form");
    auto x = TruncatedSeries::variable(2, order + 1, 0);
    auto y = TruncatedSeries::variable(2, order + 1, 1);
    Run run = run_stages(omega, x * x + y * y, order, true);
    FocalValueSequence seq;
    seq.method = FocalMethod::solver_obstruction;
    for (auto& [idx, v] : run.focal) {
        seq.indices.push_back(idx);
        seq.values.push_back(v);
    }
    seq.continued_modulo_earlier = seq.first_nonzero_index().has_value();
    return seq;
}

const char* method_name(FocalMethod m) noexcept {
    switch (m) {
        case FocalMethod::solver_obstruction: return "solver-obstruction";
        case FocalMethod::lyapunov_recursion: return "lyapunov-recursion";
        case FocalMethod::returnmap_fit: return "returnmap-fit";
    }
    return "?";
}

std::optional<int> FocalValueSequence::first_nonzero_index() const {
    for (std::size_t k = 0; k < values.size(); ++k)
        if (sgn(values[k]) != 0) return indices[k];
    return std::nullopt;
}

std::optional<Rational> FocalValueSequence::value_at(int index) const {
    for (std::size_t k = 0; k < indices.size(); ++k)
        if (indices[k] == index) return values[k];
    return std::nullopt;
}

}  // namespace foliation
