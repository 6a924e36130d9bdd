#include "foliation/scalar.hpp"

#include <stdexcept>

#include "foliation/errors.hpp"

namespace foliation {

Rational make_rational(long num, long den) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational parse_rational(const std::string& text) {
    Rational q;
    if (text.empty() || q.set_str(text, 10) != 0) throw std::invalid_argument("not a rational literal: '" + text + "'");
    if (q.get_den() == 0) throw std::domain_error("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

const char* field_name(Field f) noexcept { return f == Field::rational ? "rational" : "gaussian-rational"; }

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
    re_ += o.re_;
    if (!o.is_real()) im_ += o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    if (!o.is_real()) im_ -= o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
    if (is_real() && o.is_real()) {
        re_ *= o.re_;
        return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero in Q(i)");
    if (o.is_real()) {
        re_ /= o.re_;
        if (!is_real()) im_ /= o.re_;
        return *this;
    }
    Rational n = o.norm();
    *this *= o.conj();
    re_ /= n;
    im_ /= n;
    return *this;
}

void GaussianRational::add_product(const GaussianRational& a, const GaussianRational& b) {
    if (a.is_real() && b.is_real()) {
        mpq_class t = a.re_ * b.re_;
        re_ += t;
        return;
    }
    *this += a * b;
}

std::string GaussianRational::str() const {
    if (is_real()) return re_.get_str();
    if (sgn(re_) == 0) return im_.get_str() + "*i";
    std::string im = im_.get_str();
    return "(" + re_.get_str() + (sgn(im_) < 0 ? "" : "+") + im + "*i)";
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.str(); }

}  // namespace foliation
