#ifndef MROOT_RATIONAL_FN_HPP
#define MROOT_RATIONAL_FN_HPP

#include <optional>
#include <span>
#include <string>

#include "mroot/poly.hpp"

namespace mroot {

// Quotient of two polynomials in the fiber variables.  Kept unreduced (no
// multivariate gcd anywhere); equality and zero tests go through
// cross-multiplication, which is exact.  In float mode the pair is
// rescaled so the denominator's largest coefficient is 1.
class RationalFn {
  public:
    RationalFn() = default;
    explicit RationalFn(Poly num);  // denominator 1
    RationalFn(Poly num, Poly den);
    static RationalFn zero(int nvars);
    static RationalFn constant(int nvars, const Scalar& c);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    int nvars() const { return num_.nvars(); }

    bool is_effectively_zero() const { return num_.is_effectively_zero(); }
    bool equals(const RationalFn& g) const;

    RationalFn operator-() const;
    friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator/(const RationalFn& a, const RationalFn& b);
    RationalFn& operator+=(const RationalFn& b) { return *this = *this + b; }
    RationalFn& operator-=(const RationalFn& b) { return *this = *this - b; }
    RationalFn scaled(const Scalar& c) const;

    // Quotient-rule derivative (P'Q - PQ')/Q^2.
    RationalFn diff(int index) const;

    Scalar eval(std::span<const Scalar> y) const;
    double eval_double(std::span<const double> y) const;

    std::string str(std::string_view var_prefix = "y") const;

  private:
    Poly num_;
    Poly den_;
};

RationalFn operator*(const Poly& p, const RationalFn& f);

// Decides whether f coincides with a polynomial of total degree <= max_deg.
// Primary route: single-divisor exact division of numerator by denominator.
// Cross-validated by dense interpolation on a sample grid plus verification
// at extra points; a disagreement between the two routes throws
// InvariantViolationError.
std::optional<Poly> as_polynomial(const RationalFn& f, int max_deg);

}  // namespace mroot

#endif
