#include "mroot/scalar.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace mroot {

namespace {
thread_local Tolerance g_tolerance{};
}

const Tolerance& ambient_tolerance() { return g_tolerance; }

ToleranceScope::ToleranceScope(Tolerance t) : saved_(g_tolerance) {
    g_tolerance = t;
}

ToleranceScope::~ToleranceScope() { g_tolerance = saved_; }

Scalar Scalar::ratio(long num, long den) {
    if (den == 0) throw SingularityError("division by zero");
    Rational q(num, den);
    q.canonicalize();
    return Scalar(q);
}

const Rational& Scalar::exact() const {
    if (!is_exact()) throw Error("float scalar has no exact representation");
    return std::get<Rational>(v_);
}

double Scalar::to_double() const {
    if (is_exact()) return std::get<Rational>(v_).get_d();
    return std::get<double>(v_);
}

double Scalar::abs_double() const { return std::fabs(to_double()); }

bool Scalar::is_zero_strict() const {
    if (is_exact()) return sgn(std::get<Rational>(v_)) == 0;
    return std::get<double>(v_) == 0.0;
}

int Scalar::sign() const {
    if (is_exact()) return sgn(std::get<Rational>(v_));
    double d = std::get<double>(v_);
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
}

Scalar Scalar::operator-() const {
    if (is_exact()) return Scalar(Rational(-std::get<Rational>(v_)));
    return of_double(-std::get<double>(v_));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact())
        return Scalar(Rational(a.exact() + b.exact()));
    return Scalar::of_double(a.to_double() + b.to_double());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact())
        return Scalar(Rational(a.exact() - b.exact()));
    return Scalar::of_double(a.to_double() - b.to_double());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact())
        return Scalar(Rational(a.exact() * b.exact()));
    return Scalar::of_double(a.to_double() * b.to_double());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero_strict()) throw SingularityError("division by zero");
    if (a.is_exact() && b.is_exact())
        return Scalar(Rational(a.exact() / b.exact()));
    return Scalar::of_double(a.to_double() / b.to_double());
}

bool Scalar::equals(const Scalar& b) const {
    if (is_exact() != b.is_exact()) return false;
    if (is_exact()) return cmp(exact(), b.exact()) == 0;
    return std::get<double>(v_) == std::get<double>(b.v_);
}

std::string Scalar::str() const {
    if (is_exact()) return exact().get_str();
    return double_str(std::get<double>(v_));
}

std::string double_str(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool try_rational_sqrt(const Rational& q, Rational* out) {
    if (sgn(q) < 0) return false;
    if (!mpz_perfect_square_p(q.get_num().get_mpz_t()) ||
        !mpz_perfect_square_p(q.get_den().get_mpz_t()))
        return false;
    Rational r;
    mpz_sqrt(r.get_num_mpz_t(), q.get_num().get_mpz_t());
    mpz_sqrt(r.get_den_mpz_t(), q.get_den().get_mpz_t());
    r.canonicalize();
    *out = r;
    return true;
}

}  // namespace mroot
