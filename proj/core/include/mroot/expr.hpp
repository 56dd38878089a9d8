#ifndef MROOT_EXPR_HPP
#define MROOT_EXPR_HPP

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mroot/scalar.hpp"

namespace mroot {

// Immutable scalar expression in the base coordinates x1..xn: rational
// constants, variables, + - * /, integer powers, exp/ln/sin/cos/sqrt.
// Values share subtrees freely; all operations are pure.
class Expr {
  public:
    enum class Kind {
        constant,
        var,
        add,
        sub,
        mul,
        div,
        neg,
        pow,  // integer exponent
        exp,
        ln,
        sin,
        cos,
        sqrt
    };

    Expr() : Expr(constant(Rational(0))) {}

    // Node factories.  Binary/unary factories fold constant operands and
    // the usual 0/1 identities, nothing further.
    static Expr constant(const Rational& q);
    static Expr var(int index);  // 1-based
    static Expr add(Expr a, Expr b);
    static Expr sub(Expr a, Expr b);
    static Expr mul(Expr a, Expr b);
    static Expr div(Expr a, Expr b);
    static Expr neg(Expr a);
    static Expr pow(Expr a, long k);
    static Expr apply(Kind fn, Expr a);  // exp/ln/sin/cos/sqrt

    Kind kind() const { return node_->kind; }

    // Exact symbolic partial derivative with respect to x^i (1-based).
    Expr diff(int i) const;

    // Largest variable index appearing in the tree (0 for constants).
    int max_var() const;

    // Exact evaluation; throws TranscendentalError when the result has no
    // rational representation and SingularityError at analytic poles.
    Rational eval_exact(std::span<const Rational> x) const;
    // Double evaluation; throws SingularityError at analytic poles.
    double eval_double(std::span<const double> x) const;

    // Canonical printing; parse(str(), n) evaluates identically.
    std::string str() const;

    bool is_constant() const { return node_->kind == Kind::constant; }
    const Rational& constant_value() const;

  private:
    struct Node {
        Kind kind;
        Rational value;                 // constant
        int var = 0;                    // var
        long ipow = 0;                  // pow
        std::shared_ptr<const Node> a;  // left / unary operand
        std::shared_ptr<const Node> b;  // right operand
    };

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(Node n);

    std::shared_ptr<const Node> node_;
};

// Parses an infix expression over x1..xn with standard precedence,
// ^ binding tightest and restricted to integer exponents.  Decimal
// literals become exact rationals.  Throws ParseError with the byte
// offset of the offending token.
Expr parse_expr(std::string_view text, int n);

}  // namespace mroot

#endif
