#include "mroot/poly.hpp"

#include <algorithm>
#include <cmath>

#include "mroot/errors.hpp"

namespace mroot {

Monomial::Monomial(int nvars) : nvars_(static_cast<std::int8_t>(nvars)) {
    if (nvars < 0 || nvars > kMaxVars)
        throw Error("monomial: unsupported variable count");
}

void Monomial::set_exponent(int i, int d) {
    if (i < 0 || i >= nvars_) throw Error("monomial: variable slot out of range");
    if (d < 0 || d > 0xffff) throw Error("monomial: exponent out of range");
    e_[i] = static_cast<std::uint16_t>(d);
}

int Monomial::total_degree() const {
    int s = 0;
    for (int i = 0; i < nvars_; ++i) s += e_[i];
    return s;
}

bool Monomial::divides(const Monomial& m) const {
    for (int i = 0; i < nvars_; ++i)
        if (e_[i] > m.e_[i]) return false;
    return true;
}

Monomial Monomial::times(const Monomial& m) const {
    Monomial r(nvars_);
    for (int i = 0; i < nvars_; ++i)
        r.e_[i] = static_cast<std::uint16_t>(e_[i] + m.e_[i]);
    return r;
}

Monomial Monomial::divided_by(const Monomial& m) const {
    Monomial r(nvars_);
    for (int i = 0; i < nvars_; ++i) {
        if (m.e_[i] > e_[i]) throw Error("monomial: quotient undefined");
        r.e_[i] = static_cast<std::uint16_t>(e_[i] - m.e_[i]);
    }
    return r;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db ? -1 : 1;
    for (int i = 0; i < std::max(a.nvars_, b.nvars_); ++i) {
        if (a.e_[i] != b.e_[i]) return a.e_[i] < b.e_[i] ? -1 : 1;
    }
    return 0;
}

bool Monomial::operator==(const Monomial& b) const {
    return compare(*this, b) == 0;
}

Poly Poly::constant(int nvars, const Scalar& c) {
    Poly p(nvars);
    p.add_term(Monomial(nvars), c);
    return p;
}

Poly Poly::variable(int nvars, int index) {
    if (index < 1 || index > nvars)
        throw Error("poly: variable index out of range");
    Poly p(nvars);
    Monomial m(nvars);
    m.set_exponent(index - 1, 1);
    p.add_term(m, Scalar(1));
    return p;
}

int Poly::total_degree() const {
    if (terms_.empty()) return -1;
    return terms_.begin()->first.total_degree();
}

bool Poly::is_zero() const { return terms_.empty(); }

bool Poly::is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.begin()->first.is_unit());
}

Scalar Poly::constant_value() const {
    if (terms_.empty()) return Scalar(0);
    if (!is_constant()) throw Error("poly: not a constant");
    return terms_.begin()->second;
}

const Monomial& Poly::leading_monomial() const {
    if (terms_.empty()) throw Error("poly: zero polynomial has no leading term");
    return terms_.begin()->first;
}

const Scalar& Poly::leading_coefficient() const {
    if (terms_.empty()) throw Error("poly: zero polynomial has no leading term");
    return terms_.begin()->second;
}

bool Poly::has_float() const {
    for (const auto& [m, c] : terms_)
        if (!c.is_exact()) return true;
    return false;
}

double Poly::max_abs_coeff() const {
    double s = 0.0;
    for (const auto& [m, c] : terms_) s = std::max(s, c.abs_double());
    return s;
}

void Poly::add_term(const Monomial& mono, const Scalar& c) {
    if (mono.nvars() != nvars_) throw Error("poly: variable count mismatch");
    if (c.is_zero_strict()) return;
    auto [it, inserted] = terms_.emplace(mono, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero_strict()) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Poly operator+(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_) throw Error("poly: variable count mismatch");
    Poly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    if (r.has_float())
        r.cleanup(std::max(a.max_abs_coeff(), b.max_abs_coeff()));
    return r;
}

Poly operator-(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_) throw Error("poly: variable count mismatch");
    Poly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    if (r.has_float())
        r.cleanup(std::max(a.max_abs_coeff(), b.max_abs_coeff()));
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_) throw Error("poly: variable count mismatch");
    Poly r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            r.add_term(ma.times(mb), ca * cb);
    if (r.has_float()) r.cleanup(a.max_abs_coeff() * b.max_abs_coeff());
    return r;
}

Poly Poly::scaled(const Scalar& c) const {
    Poly r(nvars_);
    if (c.is_zero_strict()) return r;
    for (const auto& [m, v] : terms_) r.add_term(m, v * c);
    if (r.has_float()) r.cleanup(max_abs_coeff() * c.abs_double());
    return r;
}

Poly Poly::diff(int index) const {
    if (index < 1 || index > nvars_)
        throw Error("poly: variable index out of range");
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(index - 1);
        if (e == 0) continue;
        Monomial d = m;
        d.set_exponent(index - 1, e - 1);
        r.add_term(d, c * Scalar(e));
    }
    return r;
}

Scalar Poly::eval(std::span<const Scalar> y) const {
    if (static_cast<int>(y.size()) < nvars_)
        throw Error("poly: evaluation point has too few coordinates");
    Scalar acc(0);
    for (const auto& [m, c] : terms_) {
        Scalar t = c;
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < m.exponent(i); ++k) t *= y[i];
        acc += t;
    }
    return acc;
}

double Poly::eval_double(std::span<const double> y) const {
    if (static_cast<int>(y.size()) < nvars_)
        throw Error("poly: evaluation point has too few coordinates");
    double acc = 0.0;
    for (const auto& [m, c] : terms_) {
        double t = c.to_double();
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < m.exponent(i); ++k) t *= y[i];
        acc += t;
    }
    return acc;
}

bool Poly::is_effectively_zero() const {
    if (terms_.empty()) return true;
    if (!has_float()) return false;  // exact nonzero terms survive insertion
    double tol = ambient_tolerance().threshold(max_abs_coeff());
    for (const auto& [m, c] : terms_)
        if (c.abs_double() > tol) return false;
    return true;
}

void Poly::cleanup(double scale) {
    double tol = ambient_tolerance().threshold(scale);
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (!it->second.is_exact() && it->second.abs_double() <= tol)
            it = terms_.erase(it);
        else
            ++it;
    }
}

std::string Poly::str(std::string_view var_prefix) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        bool negative = c.sign() < 0;
        Scalar mag = negative ? -c : c;
        if (first) {
            if (negative) out += "-";
            first = false;
        } else {
            out += negative ? " - " : " + ";
        }
        std::string coeff = mag.str();
        bool unit_coeff = coeff == "1" && !m.is_unit();
        if (!unit_coeff) out += coeff;
        bool printed_var = false;
        for (int i = 0; i < nvars_; ++i) {
            int e = m.exponent(i);
            if (e == 0) continue;
            if (!unit_coeff || printed_var) out += "*";
            out += var_prefix;
            out += std::to_string(i + 1);
            if (e > 1) out += "^" + std::to_string(e);
            printed_var = true;
        }
    }
    return out;
}

std::optional<Poly> exact_divide(const Poly& p, const Poly& q,
                                 Poly* remainder) {
    if (q.is_zero()) throw SingularityError("division by the zero polynomial");
    if (p.nvars() != q.nvars()) throw Error("poly: variable count mismatch");
    Poly rem = p;
    Poly quot(p.nvars());
    const Monomial& lm_q = q.leading_monomial();
    const Scalar& lc_q = q.leading_coefficient();
    // Track the magnitude of everything subtracted so float-mode
    // cancellation noise is cleaned against the right scale.
    double scale = p.max_abs_coeff();
    bool floats = p.has_float() || q.has_float();
    for (;;) {
        if (floats) rem.cleanup(scale);
        if (rem.is_zero()) break;
        const Monomial& lm_r = rem.leading_monomial();
        if (!lm_q.divides(lm_r)) {
            if (remainder) *remainder = rem;
            return std::nullopt;
        }
        Monomial m = lm_r.divided_by(lm_q);
        Scalar c = rem.leading_coefficient() / lc_q;
        Poly t(p.nvars());
        t.add_term(m, c);
        quot.add_term(m, c);
        Poly tq = t * q;
        scale = std::max(scale, tq.max_abs_coeff());
        rem = rem - tq;
    }
    return quot;
}

}  // namespace mroot
