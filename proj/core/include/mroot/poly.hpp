#ifndef MROOT_POLY_HPP
#define MROOT_POLY_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mroot/scalar.hpp"

namespace mroot {

// Exponent vector for up to kMaxVars fiber variables.
class Monomial {
  public:
    static constexpr int kMaxVars = 8;

    Monomial() = default;
    explicit Monomial(int nvars);

    int nvars() const { return nvars_; }
    int exponent(int i) const { return e_[i]; }  // 0-based slot
    void set_exponent(int i, int d);
    int total_degree() const;
    bool is_unit() const { return total_degree() == 0; }

    bool divides(const Monomial& m) const;
    Monomial times(const Monomial& m) const;
    Monomial divided_by(const Monomial& m) const;

    // Graded lexicographic: higher total degree first, lexicographic on
    // exponents to break ties.
    static int compare(const Monomial& a, const Monomial& b);

    bool operator==(const Monomial& b) const;

  private:
    std::array<std::uint16_t, kMaxVars> e_{};
    std::int8_t nvars_ = 0;
};

struct MonomialGradedLexDesc {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::compare(a, b) > 0;
    }
};

// Sparse multivariate polynomial in the fiber variables y1..yn.  Terms are
// kept in descending graded-lex order, so begin() is the leading term and
// printing is canonical.  Exact (rational) and float coefficients may not
// be mixed within one polynomial in normal use; float coefficients below
// the ambient tolerance (scaled by the magnitude of the operands that
// produced them) are dropped after every arithmetic operation.
class Poly {
  public:
    using TermMap = std::map<Monomial, Scalar, MonomialGradedLexDesc>;

    Poly() = default;
    explicit Poly(int nvars) : nvars_(nvars) {}
    static Poly zero(int nvars) { return Poly(nvars); }
    static Poly constant(int nvars, const Scalar& c);
    static Poly variable(int nvars, int index);  // y_index, 1-based

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    // -1 for the zero polynomial.
    int total_degree() const;
    bool is_zero() const;
    bool is_constant() const;
    Scalar constant_value() const;
    const Monomial& leading_monomial() const;
    const Scalar& leading_coefficient() const;

    bool has_float() const;
    double max_abs_coeff() const;

    // Accumulate c * mono into the polynomial (exact zero coefficients are
    // removed; no tolerance cleanup here).
    void add_term(const Monomial& mono, const Scalar& c);

    Poly operator-() const;
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator+=(const Poly& b) { return *this = *this + b; }
    Poly& operator-=(const Poly& b) { return *this = *this - b; }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }
    Poly scaled(const Scalar& c) const;

    Poly diff(int index) const;  // d/dy_index, 1-based

    Scalar eval(std::span<const Scalar> y) const;
    double eval_double(std::span<const double> y) const;

    // Zero test: no terms, or every float coefficient under the ambient
    // threshold scaled by this polynomial's largest coefficient.
    bool is_effectively_zero() const;
    bool equals(const Poly& b) const { return (*this - b).is_effectively_zero(); }

    // Drop float coefficients below tolerance.threshold(scale).
    void cleanup(double scale);

    std::string str(std::string_view var_prefix = "y") const;

  private:
    int nvars_ = 0;
    TermMap terms_;
};

// Single-divisor exact division: returns p / q when q divides p exactly
// (graded-lex long division with zero remainder), std::nullopt otherwise.
// On failure *remainder, when given, receives the first irreducible
// remainder state as a witness.
std::optional<Poly> exact_divide(const Poly& p, const Poly& q,
                                 Poly* remainder = nullptr);

}  // namespace mroot

#endif
