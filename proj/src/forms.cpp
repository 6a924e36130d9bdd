#include "foliation/forms.hpp"

#include <algorithm>

#include "foliation/errors.hpp"

namespace foliation {

namespace {

// Sorts basis in place; returns the permutation sign, 0 on a repeated index.
int sort_basis(Basis& b) {
    int sign = 1;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j + 1 < b.size() - i; ++j) {
            if (b[j] == b[j + 1]) return 0;
            if (b[j] > b[j + 1]) {
                std::swap(b[j], b[j + 1]);
                sign = -sign;
            }
        }
    for (std::size_t j = 0; j + 1 < b.size(); ++j)
        if (b[j] == b[j + 1]) return 0;
    return sign;
}

void check_degree(int k) {
    if (k < 0 || k > kMaxFormDegree)
        throw UnsupportedDegreeError("forms of degree " + std::to_string(k) + " are not supported (0..3)");
}

}  // namespace

KForm::KForm(int degree, int nvars, int order, Field field)
    : degree_(degree), nvars_(nvars), order_(order), field_(field) {
    check_degree(degree);
    if (nvars < 1 || nvars > kMaxVars) throw PreconditionError("nvars out of range");
}

KForm KForm::function(const TruncatedSeries& f) {
    KForm k(0, f.nvars(), f.order(), f.field());
    k.add({}, f);
    return k;
}

KForm KForm::one_form(std::span<const TruncatedSeries> components) {
    if (components.empty()) throw StructuralError("one_form needs at least one component");
    int order = components[0].order();
    for (const auto& c : components) order = std::min(order, c.order());
    if (components.size() != static_cast<std::size_t>(components[0].nvars()))
        throw StructuralError("one_form needs exactly nvars components");
    KForm k(1, components[0].nvars(), order, components[0].field());
    for (std::size_t i = 0; i < components.size(); ++i) k.add({static_cast<int>(i)}, components[i]);
    return k;
}

KForm KForm::basis_form(const Basis& basis, const TruncatedSeries& c) {
    KForm k(static_cast<int>(basis.size()), c.nvars(), c.order(), c.field());
    k.add(basis, c);
    return k;
}

TruncatedSeries KForm::coefficient(const Basis& basis) const {
    auto it = coeffs_.find(basis);
    if (it != coeffs_.end()) return it->second;
    return TruncatedSeries(nvars_, order_, field_);
}

TruncatedSeries KForm::component(int i) const {
    if (degree_ == 0) return coefficient({});
    if (degree_ != 1) throw UnsupportedDegreeError("component() is defined for 0- and 1-forms");
    if (i < 0 || i >= nvars_) throw std::out_of_range("component index out of range");
    return coefficient({i});
}

std::vector<TruncatedSeries> KForm::components() const {
    std::vector<TruncatedSeries> out;
    for (int i = 0; i < nvars_; ++i) out.push_back(component(i));
    return out;
}

void KForm::add(Basis basis, const TruncatedSeries& c) {
    if (static_cast<int>(basis.size()) != degree_) throw StructuralError("basis length differs from form degree");
    for (int b : basis)
        if (b < 0 || b >= nvars_) throw StructuralError("basis index out of range");
    if (c.nvars() != nvars_) throw StructuralError("coefficient nvars differs from form nvars");
    if (c.field() != field_) throw StructuralError("coefficient field differs from form field");
    int sign = sort_basis(basis);
    if (sign == 0 || c.is_zero()) {
        if (c.order() < order_) {
            order_ = c.order();
            *this = truncate(order_);
        }
        return;
    }
    if (c.order() < order_) {
        // the form is only known through the smallest coefficient order
        *this = truncate(c.order());
    }
    TruncatedSeries term = c.order() > order_ ? c.truncate(order_) : c;
    if (sign < 0) term = -term;
    auto it = coeffs_.find(basis);
    if (it == coeffs_.end()) {
        if (!term.is_zero()) coeffs_.emplace(std::move(basis), std::move(term));
    } else {
        it->second += term;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

KForm KForm::truncate(int order) const {
    if (order > order_) throw PreconditionError("truncate cannot raise the order");
    KForm k(degree_, nvars_, order, field_);
    for (const auto& [b, c] : coeffs_) {
        TruncatedSeries t = c.truncate(order);
        if (!t.is_zero()) k.coeffs_.emplace(b, std::move(t));
    }
    return k;
}

KForm KForm::complexify() const {
    KForm k(degree_, nvars_, order_, Field::gaussian);
    for (const auto& [b, c] : coeffs_) k.coeffs_.emplace(b, c.complexify());
    return k;
}

KForm KForm::homogeneous_part(int degree) const {
    KForm k(degree_, nvars_, order_, field_);
    for (const auto& [b, c] : coeffs_) {
        TruncatedSeries h = c.homogeneous_part(degree);
        if (!h.is_zero()) k.coeffs_.emplace(b, std::move(h));
    }
    return k;
}

std::optional<int> KForm::valuation() const noexcept {
    std::optional<int> v;
    for (const auto& [b, c] : coeffs_) {
        auto cv = c.valuation();
        if (cv && (!v || *cv < *v)) v = cv;
    }
    return v;
}

KForm KForm::operator-() const {
    KForm k = *this;
    for (auto& [b, c] : k.coeffs_) c = -c;
    return k;
}

void KForm::check_compatible(const KForm& o) const {
    if (degree_ != o.degree_) throw StructuralError("forms of different degree do not add");
    if (nvars_ != o.nvars_) throw StructuralError("forms over different nvars do not combine");
    if (field_ != o.field_) throw StructuralError("forms over different fields do not combine");
}

KForm& KForm::operator+=(const KForm& o) {
    check_compatible(o);
    if (o.order_ < order_) *this = truncate(o.order_);
    for (const auto& [b, c] : o.coeffs_) add(b, c);
    return *this;
}

KForm& KForm::operator-=(const KForm& o) { return *this += -o; }

bool operator==(const KForm& a, const KForm& b) {
    return a.degree_ == b.degree_ && a.nvars_ == b.nvars_ && a.order_ == b.order_ && a.field_ == b.field_ &&
           a.coeffs_ == b.coeffs_;
}

std::string KForm::str(std::span<const std::string> names) const {
    std::vector<std::string> fallback;
    if (names.size() < static_cast<std::size_t>(nvars_)) {
        fallback = default_variable_names(nvars_);
        names = fallback;
    }
    if (coeffs_.empty()) return "0";
    std::string out;
    for (const auto& [b, c] : coeffs_) {
        std::string basis;
        for (int i : b) basis += (basis.empty() ? "d" : "^d") + names[static_cast<std::size_t>(i)];
        std::string piece = "(" + c.str(names) + ")";
        if (!basis.empty()) piece += " " + basis;
        out += out.empty() ? piece : " + " + piece;
    }
    return out;
}

KForm multiply(const TruncatedSeries& f, const KForm& a) {
    if (f.nvars() != a.nvars() || f.field() != a.field()) throw StructuralError("function and form do not combine");
    KForm out(a.degree(), a.nvars(), std::min(f.order(), a.order()), a.field());
    for (const auto& [b, c] : a.coefficients()) out.add(b, series_mul(f, c));
    return out;
}

KForm scale(const KForm& a, const Scalar& c) {
    KForm out(a.degree(), a.nvars(), a.order(), a.field());
    if (c.is_zero()) return out;
    for (const auto& [b, s] : a.coefficients()) out.add(b, scale(s, c));
    return out;
}

KForm exterior_derivative(const KForm& a) {
    if (a.degree() >= kMaxFormDegree)
        throw UnsupportedDegreeError("d of a " + std::to_string(a.degree()) + "-form would need degree-4 forms");
    int order = std::max(a.order() - 1, 0);
    KForm out(a.degree() + 1, a.nvars(), order, a.field());
    for (const auto& [b, c] : a.coefficients()) {
        for (int j = 0; j < a.nvars(); ++j) {
            if (std::find(b.begin(), b.end(), j) != b.end()) continue;
            TruncatedSeries dc = partial_derivative(c, j);
            if (dc.is_zero()) continue;
            Basis nb;
            nb.push_back(j);
            nb.insert(nb.end(), b.begin(), b.end());
            out.add(nb, dc.truncate(std::min(order, dc.order())));
        }
    }
    return out;
}

KForm wedge(const KForm& a, const KForm& b) {
    int k = a.degree() + b.degree();
    if (k > kMaxFormDegree) throw UnsupportedDegreeError("wedge product of degree " + std::to_string(k) + " > 3");
    if (a.nvars() != b.nvars() || a.field() != b.field()) throw StructuralError("forms do not combine");
    KForm out(k, a.nvars(), std::min(a.order(), b.order()), a.field());
    for (const auto& [ba, ca] : a.coefficients())
        for (const auto& [bb, cb] : b.coefficients()) {
            Basis nb = ba;
            nb.insert(nb.end(), bb.begin(), bb.end());
            out.add(nb, series_mul(ca, cb));
        }
    return out;
}

KForm integrability_residual(const KForm& omega) {
    if (omega.degree() != 1) throw PreconditionError("integrability residual needs a 1-form");
    return wedge(omega, exterior_derivative(omega));
}

KForm euler_contract(const KForm& a) {
    if (a.degree() == 0) throw UnsupportedDegreeError("interior product of a 0-form");
    KForm out(a.degree() - 1, a.nvars(), a.order() + 1, a.field());
    for (const auto& [b, c] : a.coefficients()) {
        for (std::size_t p = 0; p < b.size(); ++p) {
            Basis rest;
            for (std::size_t q = 0; q < b.size(); ++q)
                if (q != p) rest.push_back(b[q]);
            TruncatedSeries term = multiply_by_variable(c, b[p]);
            if (p % 2 == 1) term = -term;
            out.add(rest, term);
        }
    }
    return out;
}

const KForm* HomogeneousDecomposition::part(int degree) const {
    for (const auto& [m, f] : parts)
        if (m == degree) return &f;
    return nullptr;
}

HomogeneousDecomposition homogeneous_parts(const KForm& a) {
    HomogeneousDecomposition dec;
    for (int m = 0; m <= a.order(); ++m) {
        KForm p = a.homogeneous_part(m);
        if (p.is_zero()) continue;
        if (!dec.leading_index) dec.leading_index = m;
        dec.parts.emplace_back(m, std::move(p));
    }
    return dec;
}

DivisionResult divide(const TruncatedSeries& a, const TruncatedSeries& divisor) {
    if (a.nvars() != divisor.nvars() || a.field() != divisor.field()) throw StructuralError("division operands do not combine");
    auto dv = divisor.valuation();
    if (!dv || !divisor.is_homogeneous()) throw PreconditionError("divisor must be homogeneous and nonzero");
    const int ddeg = *dv;
    const Term& lead = divisor.bucket(ddeg).front();  // lexicographic leading term
    TruncatedSeries quotient(a.nvars(), std::max(a.order() - ddeg, 0), a.field());
    TruncatedSeries remainder(a.nvars(), a.order(), a.field());
    for (int m = 0; m <= a.order(); ++m) {
        Bucket work = a.bucket(m);
        Bucket rem;
        std::vector<Term> quot;
        while (!work.empty()) {
            const Term top = work.front();
            if (m >= ddeg && top.index.divisible_by(lead.index)) {
                Term q{top.index - lead.index, top.coeff / lead.coeff};
                // work -= q * divisor (homogeneous of degree m)
                std::vector<Term> sub;
                for (const auto& t : divisor.bucket(ddeg)) sub.push_back({t.index + q.index, t.coeff * q.coeff});
                TruncatedSeries w = TruncatedSeries::from_terms(a.nvars(), m, a.field(), work);
                w -= TruncatedSeries::from_terms(a.nvars(), m, a.field(), sub);
                work = w.bucket(m);
                quot.push_back(std::move(q));
            } else {
                rem.push_back(top);
                work.erase(work.begin());
            }
        }
        remainder.set_bucket(m, std::move(rem));
        if (!quot.empty() && m - ddeg <= quotient.order()) {
            TruncatedSeries qs = TruncatedSeries::from_terms(a.nvars(), quotient.order(), a.field(), quot);
            quotient += qs;
        }
    }
    return {std::move(quotient), std::move(remainder)};
}

KForm divisibility_residual(const KForm& a, const TruncatedSeries& divisor) {
    KForm out(a.degree(), a.nvars(), a.order(), a.field());
    for (const auto& [b, c] : a.coefficients()) {
        TruncatedSeries d = divisor.field() == c.field() ? divisor : divisor.complexify();
        out.add(b, divide(c, d).remainder);
    }
    return out;
}

KForm pullback(const KForm& a, std::span<const TruncatedSeries> images, const SubstituteOptions& options) {
    if (images.size() != static_cast<std::size_t>(a.nvars())) throw StructuralError("pullback needs one image per variable");
    const int nv = images[0].nvars();
    std::vector<KForm> differentials;
    for (const auto& im : images) differentials.push_back(exterior_derivative(KForm::function(im)));
    int order = -1;
    KForm out(a.degree(), nv, kMaxInternalOrder, images[0].field() == Field::gaussian ? Field::gaussian : a.field());
    for (const auto& [b, c] : a.coefficients()) {
        TruncatedSeries cs = substitute(c, images, options);
        KForm term = KForm::function(cs);
        if (term.field() != out.field()) term = term.complexify();
        for (int i : b) {
            KForm di = differentials[static_cast<std::size_t>(i)];
            if (di.field() != term.field()) di = di.complexify();
            term = wedge(term, di);
        }
        order = order < 0 ? term.order() : std::min(order, term.order());
        out += term;
    }
    if (order < 0) {
        // zero form: order of the substituted zero coefficient
        TruncatedSeries z(a.nvars(), a.order(), a.field());
        order = substitute(z, images, options).order();
        if (a.degree() > 0) order = std::max(order - 1, 0);
        out = KForm(a.degree(), nv, order, out.field());
    }
    return out;
}

std::vector<std::complex<double>> evaluate(const KForm& one_form, std::span<const std::complex<double>> point) {
    if (one_form.degree() != 1) throw PreconditionError("covector evaluation needs a 1-form");
    std::vector<std::complex<double>> out;
    for (int i = 0; i < one_form.nvars(); ++i) out.push_back(evaluate(one_form.component(i), point));
    return out;
}

}  // namespace foliation
