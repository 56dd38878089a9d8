#ifndef MROOT_SCALAR_HPP
#define MROOT_SCALAR_HPP

#include <gmpxx.h>

#include <string>
#include <variant>

#include "mroot/errors.hpp"

namespace mroot {

using Rational = mpq_class;

enum class Mode { exact, floating };

// Zero-test thresholds for float-mode coefficients.  A float value c is
// treated as zero inside a polynomial when |c| <= eps_abs + eps_rel * scale,
// where scale is the magnitude of the enclosing computation.
struct Tolerance {
    double eps_abs = 1e-12;
    double eps_rel = 1e-9;

    double threshold(double scale) const { return eps_abs + eps_rel * scale; }
};

// Ambient per-thread tolerance, consulted by Poly/RationalFn float cleanup.
const Tolerance& ambient_tolerance();

// RAII override of the ambient tolerance for the current thread.
class ToleranceScope {
  public:
    explicit ToleranceScope(Tolerance t);
    ~ToleranceScope();
    ToleranceScope(const ToleranceScope&) = delete;
    ToleranceScope& operator=(const ToleranceScope&) = delete;

  private:
    Tolerance saved_;
};

// A field element: an exact arbitrary-precision rational, or a double.
// Arithmetic promotes to double as soon as either operand is a double.
class Scalar {
  public:
    Scalar() : v_(Rational(0)) {}
    Scalar(int n) : v_(Rational(n)) {}
    Scalar(long n) : v_(Rational(static_cast<signed long>(n))) {}
    Scalar(const Rational& q) : v_(q) { get_exact().canonicalize(); }
    static Scalar of_double(double d) { return Scalar(d, FloatTag{}); }
    static Scalar ratio(long num, long den);

    bool is_exact() const { return std::holds_alternative<Rational>(v_); }
    const Rational& exact() const;
    double to_double() const;
    double abs_double() const;

    // True zero: exact 0, or float bit-equal 0.0.  Tolerance-based zero
    // decisions live at the polynomial level where a scale is known.
    bool is_zero_strict() const;
    int sign() const;

    Scalar operator-() const;
    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
    Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
    Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

    // Exact structural equality (same representation, same value).
    bool equals(const Scalar& b) const;

    std::string str() const;

  private:
    struct FloatTag {};
    Scalar(double d, FloatTag) : v_(d) {}
    Rational& get_exact() { return std::get<Rational>(v_); }

    std::variant<Rational, double> v_;
};

// Shortest round-tripping decimal form of a double.
std::string double_str(double v);

// sqrt of a nonnegative rational when the result is rational again.
bool try_rational_sqrt(const Rational& q, Rational* out);

}  // namespace mroot

#endif
