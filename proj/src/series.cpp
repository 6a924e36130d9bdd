#include "foliation/series.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "foliation/errors.hpp"

namespace foliation {

void check_user_order(int order) {
    if (order < 0 || order > kMaxUserOrder)
        throw PreconditionError("truncation order " + std::to_string(order) + " outside 0.." +
                                std::to_string(kMaxUserOrder));
}

namespace {

void check_order(int order) {
    if (order < 0 || order > kMaxInternalOrder)
        throw PreconditionError("series order " + std::to_string(order) + " outside 0.." +
                                std::to_string(kMaxInternalOrder));
}

// Sums products into a degree bucket keyed by packed index.
class Accumulator {
public:
    void add(const MultiIndex& idx, const Scalar& c) { map_[idx.packed()] += c; }
    void add_product(const MultiIndex& idx, const Scalar& a, const Scalar& b) {
        map_[idx.packed()].add_product(a, b);
    }
    Bucket take() {
        Bucket out;
        out.reserve(map_.size());
        for (auto& [k, v] : map_)
            if (!v.is_zero()) out.push_back({MultiIndex::from_packed(k), std::move(v)});
        std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return a.index > b.index; });
        map_.clear();
        return out;
    }

private:
    std::unordered_map<std::uint64_t, Scalar> map_;
};

Bucket merge(const Bucket& a, const Bucket& b, bool subtract) {
    Bucket out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].index > b[j].index)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].index > a[i].index) {
            out.push_back({b[j].index, subtract ? -b[j].coeff : b[j].coeff});
            ++j;
        } else {
            Scalar c = a[i].coeff;
            if (subtract)
                c -= b[j].coeff;
            else
                c += b[j].coeff;
            if (!c.is_zero()) out.push_back({a[i].index, std::move(c)});
            ++i;
            ++j;
        }
    }
    return out;
}

Field join_field(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.nvars() != b.nvars())
        throw StructuralError("series over " + std::to_string(a.nvars()) + " and " + std::to_string(b.nvars()) +
                              " variables do not combine");
    if (a.field() != b.field())
        throw StructuralError(std::string("series over ") + field_name(a.field()) + " and " +
                              field_name(b.field()) + " do not combine");
    return a.field();
}

}  // namespace

TruncatedSeries::TruncatedSeries(int nvars, int order, Field field)
    : nvars_(nvars), order_(order), field_(field) {
    if (nvars < 1 || nvars > kMaxVars)
        throw PreconditionError("nvars " + std::to_string(nvars) + " outside 1.." + std::to_string(kMaxVars));
    check_order(order);
    buckets_.resize(static_cast<std::size_t>(order) + 1);
}

TruncatedSeries TruncatedSeries::constant(int nvars, int order, const Scalar& c, Field field) {
    return monomial(nvars, order, MultiIndex{}, c, field);
}

TruncatedSeries TruncatedSeries::variable(int nvars, int order, int var, Field field) {
    if (var < 0 || var >= nvars) throw std::out_of_range("variable index out of range");
    return monomial(nvars, order, MultiIndex::unit(var), Scalar(1), field);
}

TruncatedSeries TruncatedSeries::monomial(int nvars, int order, const MultiIndex& idx, const Scalar& c, Field field) {
    return from_terms(nvars, order, field, {Term{idx, c}});
}

TruncatedSeries TruncatedSeries::from_terms(int nvars, int order, Field field, std::vector<Term> terms) {
    TruncatedSeries s(nvars, order, field);
    std::vector<Accumulator> acc(static_cast<std::size_t>(order) + 1);
    for (auto& t : terms) {
        for (int v = nvars; v < kMaxVars; ++v)
            if (t.index[v] != 0) throw StructuralError("monomial uses a variable beyond nvars");
        if (field == Field::rational && !t.coeff.is_real())
            throw StructuralError("non-real coefficient in a rational series");
        int d = t.index.degree();
        if (d > order || t.coeff.is_zero()) continue;
        acc[static_cast<std::size_t>(d)].add(t.index, t.coeff);
    }
    for (int d = 0; d <= order; ++d) s.buckets_[static_cast<std::size_t>(d)] = acc[static_cast<std::size_t>(d)].take();
    return s;
}

const Bucket& TruncatedSeries::bucket(int degree) const {
    static const Bucket empty;
    if (degree < 0 || degree > order_) return empty;
    return buckets_[static_cast<std::size_t>(degree)];
}

void TruncatedSeries::set_bucket(int degree, Bucket terms) {
    if (degree < 0 || degree > order_) throw std::out_of_range("bucket degree beyond order");
    buckets_[static_cast<std::size_t>(degree)] = std::move(terms);
}

Scalar TruncatedSeries::coefficient(const MultiIndex& idx) const {
    const Bucket& b = bucket(idx.degree());
    auto it = std::lower_bound(b.begin(), b.end(), idx, [](const Term& t, const MultiIndex& m) { return t.index > m; });
    if (it != b.end() && it->index == idx) return it->coeff;
    return Scalar(0);
}

std::vector<Term> TruncatedSeries::terms() const {
    std::vector<Term> out;
    for (const auto& b : buckets_) out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::size_t TruncatedSeries::term_count() const noexcept {
    std::size_t n = 0;
    for (const auto& b : buckets_) n += b.size();
    return n;
}

bool TruncatedSeries::is_zero() const noexcept {
    return std::all_of(buckets_.begin(), buckets_.end(), [](const Bucket& b) { return b.empty(); });
}

std::optional<int> TruncatedSeries::valuation() const noexcept {
    for (int d = 0; d <= order_; ++d)
        if (!buckets_[static_cast<std::size_t>(d)].empty()) return d;
    return std::nullopt;
}

std::optional<int> TruncatedSeries::max_degree() const noexcept {
    for (int d = order_; d >= 0; --d)
        if (!buckets_[static_cast<std::size_t>(d)].empty()) return d;
    return std::nullopt;
}

bool TruncatedSeries::is_homogeneous() const noexcept { return valuation() == max_degree(); }

bool TruncatedSeries::is_real() const {
    for (const auto& b : buckets_)
        for (const auto& t : b)
            if (!t.coeff.is_real()) return false;
    return true;
}

TruncatedSeries TruncatedSeries::homogeneous_part(int degree) const {
    TruncatedSeries s(nvars_, order_, field_);
    if (degree >= 0 && degree <= order_) s.buckets_[static_cast<std::size_t>(degree)] = bucket(degree);
    return s;
}

TruncatedSeries TruncatedSeries::truncate(int order) const {
    if (order > order_) throw PreconditionError("truncate cannot raise the order");
    TruncatedSeries s(nvars_, order, field_);
    for (int d = 0; d <= order; ++d) s.buckets_[static_cast<std::size_t>(d)] = buckets_[static_cast<std::size_t>(d)];
    return s;
}

TruncatedSeries TruncatedSeries::as_polynomial(int order) const {
    if (order >= order_) {
        TruncatedSeries s(nvars_, order, field_);
        for (int d = 0; d <= order_; ++d) s.buckets_[static_cast<std::size_t>(d)] = buckets_[static_cast<std::size_t>(d)];
        return s;
    }
    return truncate(order);
}

TruncatedSeries TruncatedSeries::complexify() const {
    TruncatedSeries s = *this;
    s.field_ = Field::gaussian;
    return s;
}

TruncatedSeries TruncatedSeries::real_part() const {
    TruncatedSeries s(nvars_, order_, Field::rational);
    for (int d = 0; d <= order_; ++d) {
        Bucket b;
        for (const auto& t : bucket(d))
            if (sgn(t.coeff.re()) != 0) b.push_back({t.index, Scalar(t.coeff.re())});
        s.buckets_[static_cast<std::size_t>(d)] = std::move(b);
    }
    return s;
}

TruncatedSeries TruncatedSeries::imag_part() const {
    TruncatedSeries s(nvars_, order_, Field::rational);
    for (int d = 0; d <= order_; ++d) {
        Bucket b;
        for (const auto& t : bucket(d))
            if (sgn(t.coeff.im()) != 0) b.push_back({t.index, Scalar(t.coeff.im())});
        s.buckets_[static_cast<std::size_t>(d)] = std::move(b);
    }
    return s;
}

TruncatedSeries TruncatedSeries::conj() const {
    TruncatedSeries s = *this;
    for (auto& b : s.buckets_)
        for (auto& t : b) t.coeff = t.coeff.conj();
    return s;
}

TruncatedSeries TruncatedSeries::operator-() const {
    TruncatedSeries s = *this;
    for (auto& b : s.buckets_)
        for (auto& t : b) t.coeff = -t.coeff;
    return s;
}

void TruncatedSeries::check_compatible(const TruncatedSeries& o) const { join_field(*this, o); }

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
    check_compatible(o);
    int order = std::min(order_, o.order_);
    buckets_.resize(static_cast<std::size_t>(order) + 1);
    order_ = order;
    for (int d = 0; d <= order; ++d) {
        if (o.bucket(d).empty()) continue;
        buckets_[static_cast<std::size_t>(d)] = merge(buckets_[static_cast<std::size_t>(d)], o.bucket(d), false);
    }
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
    check_compatible(o);
    int order = std::min(order_, o.order_);
    buckets_.resize(static_cast<std::size_t>(order) + 1);
    order_ = order;
    for (int d = 0; d <= order; ++d) {
        if (o.bucket(d).empty()) continue;
        buckets_[static_cast<std::size_t>(d)] = merge(buckets_[static_cast<std::size_t>(d)], o.bucket(d), true);
    }
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const Scalar& c) {
    if (field_ == Field::rational && !c.is_real()) throw StructuralError("non-real scalar on a rational series");
    if (c.is_zero()) {
        for (auto& b : buckets_) b.clear();
        return *this;
    }
    for (auto& b : buckets_)
        for (auto& t : b) t.coeff *= c;
    return *this;
}

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.nvars_ != b.nvars_ || a.order_ != b.order_ || a.field_ != b.field_) return false;
    for (int d = 0; d <= a.order_; ++d) {
        const Bucket& x = a.bucket(d);
        const Bucket& y = b.bucket(d);
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].index != y[i].index || x[i].coeff != y[i].coeff) return false;
    }
    return true;
}

std::string TruncatedSeries::str(std::span<const std::string> names) const {
    std::vector<std::string> fallback;
    if (names.size() < static_cast<std::size_t>(nvars_)) {
        fallback = default_variable_names(nvars_);
        names = fallback;
    }
    std::string out;
    for (int d = 0; d <= order_; ++d) {
        for (const auto& t : bucket(d)) {
            std::string mono;
            for (int v = 0; v < nvars_; ++v) {
                int e = t.index[v];
                if (e == 0) continue;
                if (!mono.empty()) mono += '*';
                mono += names[static_cast<std::size_t>(v)];
                if (e > 1) mono += "^" + std::to_string(e);
            }
            std::string c = t.coeff.str();
            bool negative = t.coeff.is_real() && sgn(t.coeff.re()) < 0;
            if (negative) c = (-t.coeff).str();
            std::string piece;
            if (mono.empty())
                piece = c;
            else if (c == "1")
                piece = mono;
            else
                piece = c + "*" + mono;
            if (out.empty())
                out = negative ? "-" + piece : piece;
            else
                out += (negative ? " - " : " + ") + piece;
        }
    }
    return out.empty() ? "0" : out;
}

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) { return a + b; }

TruncatedSeries series_sub(const TruncatedSeries& a, const TruncatedSeries& b) { return a - b; }

Bucket homogeneous_product(const TruncatedSeries& a, const TruncatedSeries& b, int degree) {
    join_field(a, b);
    Accumulator acc;
    bool any = false;
    for (int i = 0; i <= degree; ++i) {
        const Bucket& x = a.bucket(i);
        const Bucket& y = b.bucket(degree - i);
        if (x.empty() || y.empty()) continue;
        any = true;
        for (const auto& s : x)
            for (const auto& t : y) acc.add_product(s.index + t.index, s.coeff, t.coeff);
    }
    return any ? acc.take() : Bucket{};
}

TruncatedSeries product_through(const TruncatedSeries& a, const TruncatedSeries& b, int order) {
    Field f = join_field(a, b);
    auto va = a.valuation();
    auto vb = b.valuation();
    if (!va || !vb) return TruncatedSeries(a.nvars(), order, f);
    int limit = std::min(a.order() + *vb, b.order() + *va);
    if (order > limit)
        throw PreconditionError("product requested through order " + std::to_string(order) +
                                " but inputs determine only " + std::to_string(limit));
    TruncatedSeries out(a.nvars(), order, f);
    for (int m = *va + *vb; m <= order; ++m) out.set_bucket(m, homogeneous_product(a, b, m));
    return out;
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    join_field(a, b);
    int order = std::min(a.order(), b.order());
    TruncatedSeries out(a.nvars(), order, a.field());
    auto va = a.valuation();
    auto vb = b.valuation();
    if (!va || !vb) return out;
    for (int m = *va + *vb; m <= order; ++m) out.set_bucket(m, homogeneous_product(a, b, m));
    return out;
}

TruncatedSeries scale(const TruncatedSeries& a, const Scalar& c) {
    TruncatedSeries s = a;
    s *= c;
    return s;
}

TruncatedSeries multiply_by_variable(const TruncatedSeries& a, int var) {
    if (var < 0 || var >= a.nvars()) throw std::out_of_range("variable index out of range");
    TruncatedSeries out(a.nvars(), a.order() + 1, a.field());
    MultiIndex u = MultiIndex::unit(var);
    for (int d = 0; d <= a.order(); ++d) {
        Bucket b;
        b.reserve(a.bucket(d).size());
        for (const auto& t : a.bucket(d)) b.push_back({t.index + u, t.coeff});
        // multiplying by a fixed monomial preserves lexicographic order
        out.set_bucket(d + 1, std::move(b));
    }
    return out;
}

TruncatedSeries partial_derivative(const TruncatedSeries& a, int var) {
    if (var < 0 || var >= a.nvars())
        throw std::out_of_range("partial derivative index " + std::to_string(var) + " outside 0.." +
                                std::to_string(a.nvars() - 1));
    int order = std::max(a.order() - 1, 0);
    TruncatedSeries out(a.nvars(), order, a.field());
    if (a.order() == 0) return out;
    MultiIndex u = MultiIndex::unit(var);
    for (int d = 1; d <= a.order(); ++d) {
        Bucket b;
        for (const auto& t : a.bucket(d)) {
            int e = t.index[var];
            if (e == 0) continue;
            b.push_back({t.index - u, t.coeff * Scalar(e)});
        }
        std::sort(b.begin(), b.end(), [](const Term& x, const Term& y) { return x.index > y.index; });
        out.set_bucket(d - 1, std::move(b));
    }
    return out;
}

TruncatedSeries power(const TruncatedSeries& a, int exponent) {
    if (exponent < 0) throw PreconditionError("negative power");
    TruncatedSeries result = TruncatedSeries::constant(a.nvars(), a.order(), Scalar(1), a.field());
    TruncatedSeries base = a;
    while (exponent > 0) {
        if (exponent & 1) result = series_mul(result, base);
        exponent >>= 1;
        if (exponent) base = series_mul(base, base);
    }
    return result;
}

namespace {

struct SubstitutionContext {
    std::span<const TruncatedSeries> images;
    int order;
    int nvars;
    Field field;
    // powers[v][e] = images[v]^e truncated at order, filled lazily.
    std::vector<std::vector<TruncatedSeries>> powers;

    const TruncatedSeries& pow(int v, int e) {
        auto& p = powers[static_cast<std::size_t>(v)];
        if (p.empty()) p.push_back(TruncatedSeries::constant(nvars, order, Scalar(1), field));
        while (static_cast<int>(p.size()) <= e) p.push_back(series_mul(p.back(), images[static_cast<std::size_t>(v)]));
        return p[static_cast<std::size_t>(e)];
    }

    // Horner scheme on the lexicographic structure: terms sorted by
    // descending index, grouped by exponent of variable v.
    TruncatedSeries compose(std::span<const Term> terms, int v, int nsource) {
        if (v == nsource) {
            Scalar c(0);
            for (const auto& t : terms) c += t.coeff;
            return TruncatedSeries::constant(nvars, order, c, field);
        }
        TruncatedSeries acc(nvars, order, field);
        std::size_t i = 0;
        while (i < terms.size()) {
            int e = terms[i].index[v];
            std::size_t j = i;
            while (j < terms.size() && terms[j].index[v] == e) ++j;
            TruncatedSeries inner = compose(terms.subspan(i, j - i), v + 1, nsource);
            if (!inner.is_zero()) acc += (e == 0) ? inner : series_mul(pow(v, e), inner);
            i = j;
        }
        return acc;
    }
};

}  // namespace

TruncatedSeries substitute(const TruncatedSeries& a, std::span<const TruncatedSeries> images,
                           const SubstituteOptions& options) {
    if (images.size() != static_cast<std::size_t>(a.nvars()))
        throw StructuralError("substitute needs one image per variable (" + std::to_string(a.nvars()) + "), got " +
                              std::to_string(images.size()));
    const int nv = images[0].nvars();
    const Field field = (a.field() == Field::gaussian) ? Field::gaussian : images[0].field();
    int image_order = images[0].order();
    bool constant_terms = false;
    for (const auto& im : images) {
        if (im.nvars() != nv || im.field() != images[0].field())
            throw StructuralError("substitution images disagree in nvars/field");
        image_order = std::min(image_order, im.order());
        if (!im.bucket(0).empty()) constant_terms = true;
    }
    if (constant_terms && !options.allow_constant_terms)
        throw PreconditionError("substitution image with nonzero constant term (set allow_constant_terms)");

    int order = std::min(options.result_order.value_or(a.order()), image_order);
    check_order(order);

    std::vector<Term> terms;
    bool polynomial = options.result_order.has_value() || constant_terms;
    for (int d = 0; d <= a.order(); ++d) {
        // in formal mode only degrees <= order can contribute
        if (!polynomial && d > order) break;
        for (const auto& t : a.bucket(d)) terms.push_back(t);
    }
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.index > y.index; });

    std::vector<TruncatedSeries> truncated;
    truncated.reserve(images.size());
    for (const auto& im : images) {
        TruncatedSeries t = im.truncate(order);
        truncated.push_back(field == t.field() ? std::move(t) : t.complexify());
    }

    SubstitutionContext ctx{truncated, order, nv, field, std::vector<std::vector<TruncatedSeries>>(images.size())};
    return ctx.compose(terms, 0, a.nvars());
}

std::complex<double> evaluate(const TruncatedSeries& a, std::span<const std::complex<double>> point) {
    if (point.size() != static_cast<std::size_t>(a.nvars()))
        throw StructuralError("evaluation point has dimension " + std::to_string(point.size()) + ", series has " +
                              std::to_string(a.nvars()) + " variables");
    int maxdeg = a.max_degree().value_or(0);
    std::vector<std::vector<std::complex<double>>> pw(point.size());
    for (std::size_t v = 0; v < point.size(); ++v) {
        pw[v].resize(static_cast<std::size_t>(maxdeg) + 1);
        pw[v][0] = 1.0;
        for (int e = 1; e <= maxdeg; ++e) pw[v][static_cast<std::size_t>(e)] = pw[v][static_cast<std::size_t>(e) - 1] * point[v];
    }
    std::complex<double> sum = 0.0;
    for (int d = maxdeg; d >= 0; --d) {
        for (const auto& t : a.bucket(d)) {
            std::complex<double> m = t.coeff.to_complex();
            for (std::size_t v = 0; v < point.size(); ++v) m *= pw[v][static_cast<std::size_t>(t.index[static_cast<int>(v)])];
            sum += m;
        }
    }
    return sum;
}

Scalar evaluate_exact(const TruncatedSeries& a, std::span<const Scalar> point) {
    if (point.size() != static_cast<std::size_t>(a.nvars())) throw StructuralError("evaluation point dimension mismatch");
    Scalar sum(0);
    for (int d = 0; d <= a.order(); ++d) {
        for (const auto& t : a.bucket(d)) {
            Scalar m = t.coeff;
            for (int v = 0; v < a.nvars(); ++v)
                for (int e = 0; e < t.index[v]; ++e) m *= point[static_cast<std::size_t>(v)];
            sum += m;
        }
    }
    return sum;
}

std::vector<std::string> default_variable_names(int nvars) {
    std::vector<std::string> names;
    for (int v = 0; v < nvars; ++v) names.push_back("x" + std::to_string(v + 1));
    return names;
}

}  // namespace foliation
