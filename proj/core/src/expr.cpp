#include "mroot/expr.hpp"

#include <cctype>
#include <cmath>
#include <utility>

namespace mroot {

namespace {

Rational rational_ipow(const Rational& base, long k) {
    if (k == 0) return Rational(1);
    bool invert = k < 0;
    unsigned long e = invert ? static_cast<unsigned long>(-k)
                             : static_cast<unsigned long>(k);
    if (invert && sgn(base) == 0)
        throw SingularityError("zero raised to a negative power");
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), e);
    r.canonicalize();
    if (invert) r = 1 / r;
    return r;
}

double double_ipow(double base, long k) {
    bool invert = k < 0;
    unsigned long e = invert ? static_cast<unsigned long>(-k)
                             : static_cast<unsigned long>(k);
    double r = 1.0;
    double acc = base;
    while (e != 0) {
        if (e & 1) r *= acc;
        acc *= acc;
        e >>= 1;
    }
    if (invert) {
        if (r == 0.0) throw SingularityError("zero raised to a negative power");
        r = 1.0 / r;
    }
    return r;
}

}  // namespace

Expr Expr::make(Node n) {
    return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::constant(const Rational& q) {
    Node n;
    n.kind = Kind::constant;
    n.value = q;
    n.value.canonicalize();
    return make(std::move(n));
}

Expr Expr::var(int index) {
    if (index < 1) throw Error("variable index must be positive");
    Node n;
    n.kind = Kind::var;
    n.var = index;
    return make(std::move(n));
}

const Rational& Expr::constant_value() const {
    if (!is_constant()) throw Error("not a constant expression");
    return node_->value;
}

Expr Expr::add(Expr a, Expr b) {
    if (a.is_constant() && b.is_constant())
        return constant(a.constant_value() + b.constant_value());
    if (a.is_constant() && sgn(a.constant_value()) == 0) return b;
    if (b.is_constant() && sgn(b.constant_value()) == 0) return a;
    Node n;
    n.kind = Kind::add;
    n.a = a.node_;
    n.b = b.node_;
    return make(std::move(n));
}

Expr Expr::sub(Expr a, Expr b) {
    if (a.is_constant() && b.is_constant())
        return constant(a.constant_value() - b.constant_value());
    if (b.is_constant() && sgn(b.constant_value()) == 0) return a;
    if (a.is_constant() && sgn(a.constant_value()) == 0) return neg(b);
    Node n;
    n.kind = Kind::sub;
    n.a = a.node_;
    n.b = b.node_;
    return make(std::move(n));
}

Expr Expr::mul(Expr a, Expr b) {
    if (a.is_constant() && b.is_constant())
        return constant(a.constant_value() * b.constant_value());
    if (a.is_constant()) {
        if (sgn(a.constant_value()) == 0) return constant(Rational(0));
        if (a.constant_value() == 1) return b;
    }
    if (b.is_constant()) {
        if (sgn(b.constant_value()) == 0) return constant(Rational(0));
        if (b.constant_value() == 1) return a;
    }
    Node n;
    n.kind = Kind::mul;
    n.a = a.node_;
    n.b = b.node_;
    return make(std::move(n));
}

Expr Expr::div(Expr a, Expr b) {
    if (b.is_constant() && sgn(b.constant_value()) != 0) {
        if (a.is_constant())
            return constant(a.constant_value() / b.constant_value());
        if (b.constant_value() == 1) return a;
    }
    if (a.is_constant() && sgn(a.constant_value()) == 0 && !b.is_constant())
        return constant(Rational(0));
    Node n;
    n.kind = Kind::div;
    n.a = a.node_;
    n.b = b.node_;
    return make(std::move(n));
}

Expr Expr::neg(Expr a) {
    if (a.is_constant()) return constant(-a.constant_value());
    if (a.kind() == Kind::neg) return Expr(a.node_->a);
    Node n;
    n.kind = Kind::neg;
    n.a = a.node_;
    return make(std::move(n));
}

Expr Expr::pow(Expr a, long k) {
    if (k == 0) return constant(Rational(1));
    if (k == 1) return a;
    if (a.is_constant() && !(k < 0 && sgn(a.constant_value()) == 0))
        return constant(rational_ipow(a.constant_value(), k));
    Node n;
    n.kind = Kind::pow;
    n.a = a.node_;
    n.ipow = k;
    return make(std::move(n));
}

Expr Expr::apply(Kind fn, Expr a) {
    if (a.is_constant()) {
        const Rational& c = a.constant_value();
        switch (fn) {
            case Kind::exp:
                if (sgn(c) == 0) return constant(Rational(1));
                break;
            case Kind::ln:
                if (c == 1) return constant(Rational(0));
                break;
            case Kind::sin:
                if (sgn(c) == 0) return constant(Rational(0));
                break;
            case Kind::cos:
                if (sgn(c) == 0) return constant(Rational(1));
                break;
            case Kind::sqrt: {
                Rational r;
                if (try_rational_sqrt(c, &r)) return constant(r);
                break;
            }
            default:
                throw Error("apply: not a unary function kind");
        }
    }
    Node n;
    n.kind = fn;
    n.a = a.node_;
    return make(std::move(n));
}

Expr Expr::diff(int i) const {
    const Node& n = *node_;
    Expr a = n.a ? Expr(n.a) : Expr();
    Expr b = n.b ? Expr(n.b) : Expr();
    switch (n.kind) {
        case Kind::constant:
            return constant(Rational(0));
        case Kind::var:
            return constant(Rational(n.var == i ? 1 : 0));
        case Kind::add:
            return add(a.diff(i), b.diff(i));
        case Kind::sub:
            return sub(a.diff(i), b.diff(i));
        case Kind::mul:
            return add(mul(a.diff(i), b), mul(a, b.diff(i)));
        case Kind::div:
            return div(sub(mul(a.diff(i), b), mul(a, b.diff(i))), mul(b, b));
        case Kind::neg:
            return neg(a.diff(i));
        case Kind::pow:
            return mul(mul(constant(Rational(n.ipow)), pow(a, n.ipow - 1)),
                       a.diff(i));
        case Kind::exp:
            return mul(apply(Kind::exp, a), a.diff(i));
        case Kind::ln:
            return div(a.diff(i), a);
        case Kind::sin:
            return mul(apply(Kind::cos, a), a.diff(i));
        case Kind::cos:
            return neg(mul(apply(Kind::sin, a), a.diff(i)));
        case Kind::sqrt:
            return div(a.diff(i),
                       mul(constant(Rational(2)), apply(Kind::sqrt, a)));
    }
    throw Error("diff: unreachable");
}

int Expr::max_var() const {
    const Node& n = *node_;
    int m = n.kind == Kind::var ? n.var : 0;
    if (n.a) m = std::max(m, Expr(n.a).max_var());
    if (n.b) m = std::max(m, Expr(n.b).max_var());
    return m;
}

Rational Expr::eval_exact(std::span<const Rational> x) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::constant:
            return n.value;
        case Kind::var:
            if (n.var > static_cast<int>(x.size()))
                throw Error("evaluation point has too few coordinates");
            return x[n.var - 1];
        case Kind::add:
            return Expr(n.a).eval_exact(x) + Expr(n.b).eval_exact(x);
        case Kind::sub:
            return Expr(n.a).eval_exact(x) - Expr(n.b).eval_exact(x);
        case Kind::mul:
            return Expr(n.a).eval_exact(x) * Expr(n.b).eval_exact(x);
        case Kind::div: {
            Rational den = Expr(n.b).eval_exact(x);
            if (sgn(den) == 0) throw SingularityError("division by zero");
            return Expr(n.a).eval_exact(x) / den;
        }
        case Kind::neg:
            return -Expr(n.a).eval_exact(x);
        case Kind::pow:
            return rational_ipow(Expr(n.a).eval_exact(x), n.ipow);
        case Kind::exp: {
            Rational v = Expr(n.a).eval_exact(x);
            if (sgn(v) == 0) return Rational(1);
            throw TranscendentalError("exp of a nonzero value is not rational");
        }
        case Kind::ln: {
            Rational v = Expr(n.a).eval_exact(x);
            if (sgn(v) <= 0)
                throw SingularityError("ln of a non-positive value");
            if (v == 1) return Rational(0);
            throw TranscendentalError("ln value is not rational");
        }
        case Kind::sin: {
            Rational v = Expr(n.a).eval_exact(x);
            if (sgn(v) == 0) return Rational(0);
            throw TranscendentalError("sin of a nonzero value is not rational");
        }
        case Kind::cos: {
            Rational v = Expr(n.a).eval_exact(x);
            if (sgn(v) == 0) return Rational(1);
            throw TranscendentalError("cos of a nonzero value is not rational");
        }
        case Kind::sqrt: {
            Rational v = Expr(n.a).eval_exact(x);
            if (sgn(v) < 0)
                throw SingularityError("sqrt of a negative value");
            Rational r;
            if (try_rational_sqrt(v, &r)) return r;
            throw TranscendentalError("sqrt value is not rational");
        }
    }
    throw Error("eval_exact: unreachable");
}

double Expr::eval_double(std::span<const double> x) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::constant:
            return n.value.get_d();
        case Kind::var:
            if (n.var > static_cast<int>(x.size()))
                throw Error("evaluation point has too few coordinates");
            return x[n.var - 1];
        case Kind::add:
            return Expr(n.a).eval_double(x) + Expr(n.b).eval_double(x);
        case Kind::sub:
            return Expr(n.a).eval_double(x) - Expr(n.b).eval_double(x);
        case Kind::mul:
            return Expr(n.a).eval_double(x) * Expr(n.b).eval_double(x);
        case Kind::div: {
            double den = Expr(n.b).eval_double(x);
            if (den == 0.0) throw SingularityError("division by zero");
            return Expr(n.a).eval_double(x) / den;
        }
        case Kind::neg:
            return -Expr(n.a).eval_double(x);
        case Kind::pow:
            return double_ipow(Expr(n.a).eval_double(x), n.ipow);
        case Kind::exp:
            return std::exp(Expr(n.a).eval_double(x));
        case Kind::ln: {
            double v = Expr(n.a).eval_double(x);
            if (v <= 0.0) throw SingularityError("ln of a non-positive value");
            return std::log(v);
        }
        case Kind::sin:
            return std::sin(Expr(n.a).eval_double(x));
        case Kind::cos:
            return std::cos(Expr(n.a).eval_double(x));
        case Kind::sqrt: {
            double v = Expr(n.a).eval_double(x);
            if (v < 0.0) throw SingularityError("sqrt of a negative value");
            return std::sqrt(v);
        }
    }
    throw Error("eval_double: unreachable");
}

namespace {

int precedence(Expr::Kind k) {
    switch (k) {
        case Expr::Kind::add:
        case Expr::Kind::sub:
            return 1;
        case Expr::Kind::mul:
        case Expr::Kind::div:
            return 2;
        case Expr::Kind::neg:
            return 3;
        case Expr::Kind::pow:
            return 4;
        default:
            return 5;
    }
}

}  // namespace

std::string Expr::str() const {
    const Node& n = *node_;
    auto wrap = [](const Expr& e, int min_prec) {
        std::string s = e.str();
        bool neg_const = e.is_constant() && sgn(e.constant_value()) < 0;
        if (precedence(e.kind()) < min_prec || neg_const)
            return "(" + s + ")";
        return s;
    };
    Expr a = n.a ? Expr(n.a) : Expr();
    Expr b = n.b ? Expr(n.b) : Expr();
    switch (n.kind) {
        case Kind::constant:
            return n.value.get_str();
        case Kind::var:
            return "x" + std::to_string(n.var);
        case Kind::add:
            return wrap(a, 1) + " + " + wrap(b, 2);
        case Kind::sub:
            return wrap(a, 1) + " - " + wrap(b, 2);
        case Kind::mul:
            return wrap(a, 2) + "*" + wrap(b, 3);
        case Kind::div:
            return wrap(a, 2) + "/" + wrap(b, 3);
        case Kind::neg:
            return "-" + wrap(a, 3);
        case Kind::pow:
            return wrap(a, 5) +
                   (n.ipow < 0 ? "^(" + std::to_string(n.ipow) + ")"
                               : "^" + std::to_string(n.ipow));
        case Kind::exp:
            return "exp(" + a.str() + ")";
        case Kind::ln:
            return "ln(" + a.str() + ")";
        case Kind::sin:
            return "sin(" + a.str() + ")";
        case Kind::cos:
            return "cos(" + a.str() + ")";
        case Kind::sqrt:
            return "sqrt(" + a.str() + ")";
    }
    throw Error("str: unreachable");
}

// ---------------------------------------------------------------------------
// Parser: recursive descent with standard precedence.

namespace {

class ExprParser {
  public:
    ExprParser(std::string_view text, int n) : text_(text), n_(n) {}

    Expr parse() {
        skip_ws();
        if (at_end()) throw ParseError("empty expression", 0);
        Expr e = parse_sum();
        skip_ws();
        if (!at_end()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    char get() { return text_[pos_++]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
            ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (!at_end() && peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+'))
                e = Expr::add(e, parse_term());
            else if (accept('-'))
                e = Expr::sub(e, parse_term());
            else
                return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (accept('*'))
                e = Expr::mul(e, parse_unary());
            else if (accept('/'))
                e = Expr::div(e, parse_unary());
            else
                return e;
        }
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::neg(parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (accept('^')) return Expr::pow(base, parse_exponent());
        return base;
    }

    long parse_exponent() {
        skip_ws();
        bool parens = accept('(');
        skip_ws();
        bool negative = accept('-');
        skip_ws();
        std::size_t start = pos_;
        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError("exponent must be an integer", pos_);
        long v = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (get() - '0');
            if (v > 1000000) throw ParseError("exponent too large", start);
        }
        if (parens) expect(')');
        return negative ? -v : v;
    }

    Expr parse_atom() {
        skip_ws();
        if (at_end()) throw ParseError("unexpected end of expression", pos_);
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_ident();
        throw ParseError("unexpected character", pos_);
    }

    Expr parse_number() {
        std::size_t start = pos_;
        std::string digits;
        long frac_digits = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            digits.push_back(get());
        if (!at_end() && peek() == '.') {
            ++pos_;
            while (!at_end() &&
                   std::isdigit(static_cast<unsigned char>(peek()))) {
                digits.push_back(get());
                ++frac_digits;
            }
        }
        if (digits.empty()) throw ParseError("malformed number", start);
        long exp10 = 0;
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            bool eneg = false;
            if (!at_end() && (peek() == '+' || peek() == '-'))
                eneg = get() == '-';
            if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
                pos_ = save;  // not an exponent, e.g. "2exp(..)" typo
            } else {
                while (!at_end() &&
                       std::isdigit(static_cast<unsigned char>(peek())))
                    exp10 = exp10 * 10 + (get() - '0');
                if (eneg) exp10 = -exp10;
            }
        }
        Rational q(digits, 10);
        long down = frac_digits - exp10;
        if (down != 0) {
            Rational p;
            mpz_ui_pow_ui(p.get_num_mpz_t(), 10,
                          static_cast<unsigned long>(std::labs(down)));
            if (down > 0)
                q /= p;
            else
                q *= p;
        }
        q.canonicalize();
        return Expr::constant(q);
    }

    Expr parse_ident() {
        std::size_t start = pos_;
        std::string name;
        while (!at_end() &&
               (std::isalnum(static_cast<unsigned char>(peek())) ||
                peek() == '_'))
            name.push_back(get());
        if (name.size() >= 2 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(), [](char d) {
                return std::isdigit(static_cast<unsigned char>(d));
            })) {
            int idx = std::stoi(name.substr(1));
            if (idx < 1 || idx > n_)
                throw ParseError("variable index out of range: " + name,
                                 start);
            return Expr::var(idx);
        }
        Expr::Kind fn;
        if (name == "exp")
            fn = Expr::Kind::exp;
        else if (name == "ln" || name == "log")
            fn = Expr::Kind::ln;
        else if (name == "sin")
            fn = Expr::Kind::sin;
        else if (name == "cos")
            fn = Expr::Kind::cos;
        else if (name == "sqrt")
            fn = Expr::Kind::sqrt;
        else
            throw ParseError("unknown identifier '" + name + "'", start);
        expect('(');
        Expr arg = parse_sum();
        expect(')');
        return Expr::apply(fn, arg);
    }

    std::string_view text_;
    int n_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, int n) {
    return ExprParser(text, n).parse();
}

}  // namespace mroot
