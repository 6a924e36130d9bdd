#pragma once

// Degree-by-degree first integrals: omega = g df, Lyapunov recursion,
// focal values, formal Morse normalization, hyperplane restriction.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foliation/forms.hpp"

namespace foliation {

enum class SolveStatus { solved, obstructed };

const char* status_name(SolveStatus s) noexcept;

struct Obstruction {
    // Stage m: the homogeneous degree-m part of the equation.
    int degree = 0;
    // Right-hand side of the failing stage (homogeneous of degree m).
    KForm residual{1, 1, 0};
    // Reduced right-hand sides of the dependent equations.
    std::vector<GaussianRational> residual_class;
    // For the plane center d(x^2+y^2): the focal value at this stage.
    std::vector<Rational> focal_values;
};

struct FirstIntegralOutcome {
    SolveStatus status = SolveStatus::solved;
    int order = 0;  // N
    // Solved: f through degree N+1, g through degree N-nu. Obstructed:
    // the partial solution known before the failing stage.
    TruncatedSeries f{1, 0};
    TruncatedSeries g{1, 0};
    std::optional<Obstruction> obstruction;
    // omega - g df recomputed from scratch and exactly zero through N.
    bool residual_zero = false;
};

// Solves omega = g df with f = Q + ..., g = 1 + ... through order N.
// Preconditions: Q homogeneous, omega has no part below deg Q - 1 and its
// leading part equals dQ; omega integrable (checked when n >= 3).
// Among the solutions of each stage, the one vanishing on the columns of
// the column-order echelon complement is returned (unknowns ordered:
// coefficients of f_{m+1}, then of g_{m-nu}, each lexicographically
// descending).
FirstIntegralOutcome solve_gdf(const KForm& omega, const TruncatedSeries& Q, int order);

// omega - g df through `order`, computed independently of the solver.
KForm gdf_residual(const KForm& omega, const TruncatedSeries& f, const TruncatedSeries& g, int order);

enum class FocalMethod { solver_obstruction, lyapunov_recursion, returnmap_fit };

const char* method_name(FocalMethod m) noexcept;

struct FocalValueSequence {
    FocalMethod method = FocalMethod::solver_obstruction;
    // indices[k] = 2j for the value V_{2j} in values[k]; ascending from 4.
    std::vector<int> indices;
    std::vector<Rational> values;
    // Values after the first nonzero one are defined modulo the earlier ones.
    bool continued_modulo_earlier = false;

    std::optional<int> first_nonzero_index() const;
    std::optional<Rational> value_at(int index) const;
};

// Planar field with linear part -y d/dx + x d/dy. Builds
// F = x^2 + y^2 + ... with X(F) = sum_k V_{2k} (x^2+y^2)^k.
FocalValueSequence solve_lie(std::span<const TruncatedSeries> field, int order);

// Plane center d(x^2+y^2) + ...: runs the stage solver with the
// complement form (x^2+y^2)^{k-1}(y dx - x dy) adjoined at stage 2k-1 and
// reports its coefficient as V_{2k}.
FocalValueSequence focal_values_from_obstructions(const KForm& omega, int order);

struct LieOutcome {
    SolveStatus status = SolveStatus::solved;
    // Solved: F through degree N+1. Obstructed: F through degree m.
    TruncatedSeries F{1, 0};
    std::optional<int> obstruction_degree;  // stage m, F_{m+1} unsolvable
};

// Formal first integral F = Q + F_{nu+2} + ... of a field whose leading
// homogeneous part X_nu annihilates Q; stops at the first stage where
// X_nu(F_{m+1}) = -(known terms) has no solution.
LieOutcome lie_first_integral(std::span<const TruncatedSeries> field, const TruncatedSeries& Q, int order);

// Plane: omega = a dx + b dy  <->  X = b d/dx - a d/dy.
std::vector<TruncatedSeries> dual_field(const KForm& omega);
// Inverse convention used by generators: 2 X^y dx - 2 X^x dy, so that the
// rotation -y d/dx + x d/dy maps to d(x^2 + y^2).
KForm form_of_field(std::span<const TruncatedSeries> field);
// Inverse of form_of_field: a dx + b dy -> -b/2 d/dx + a/2 d/dy.
std::vector<TruncatedSeries> field_of_form(const KForm& omega);

struct CoordinateChange {
    std::vector<TruncatedSeries> images;
    std::vector<TruncatedSeries> inverse_images;
    int order = 0;
};

// phi with f o phi = Q (the quadratic part of f) exactly through `order`.
// Throws RankDeficiencyError when the Hessian is degenerate.
CoordinateChange morse_normalize(const TruncatedSeries& f, int order);

// Rank of the Hessian of f at the origin (exact).
int hessian_rank(const TruncatedSeries& f);

// x_n = sum_j coeffs[j] x_j substituted into coefficients and dx_n.
KForm restrict_hyperplane(const KForm& omega, std::span<const Rational> coeffs);

bool complexify_restrict_commutes(const KForm& omega, std::span<const Rational> coeffs);

}  // namespace foliation
