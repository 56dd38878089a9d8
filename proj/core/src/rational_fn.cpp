#include "mroot/rational_fn.hpp"

#include <cmath>
#include <random>

#include "mroot/errors.hpp"
#include "mroot/linalg.hpp"

namespace mroot {

namespace {

bool identical(const Poly& a, const Poly& b) {
    if (a.nvars() != b.nvars() || a.term_count() != b.term_count())
        return false;
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    for (; ia != a.terms().end(); ++ia, ++ib) {
        if (!(ia->first == ib->first) || !ia->second.equals(ib->second))
            return false;
    }
    return true;
}

}  // namespace

RationalFn::RationalFn(Poly num)
    : num_(std::move(num)), den_(Poly::constant(num_.nvars(), Scalar(1))) {}

RationalFn::RationalFn(Poly num, Poly den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (num_.nvars() != den_.nvars())
        throw Error("rational fn: variable count mismatch");
    if (den_.is_effectively_zero())
        throw SingularityError("rational fn: zero denominator");
    if (num_.is_zero()) {
        den_ = Poly::constant(num_.nvars(), Scalar(1));
        return;
    }
    if (num_.has_float() || den_.has_float()) {
        double s = den_.max_abs_coeff();
        if (s > 0 && std::isfinite(s) && s != 1.0) {
            Scalar inv = Scalar::of_double(1.0 / s);
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }
}

RationalFn RationalFn::zero(int nvars) { return RationalFn(Poly::zero(nvars)); }

RationalFn RationalFn::constant(int nvars, const Scalar& c) {
    return RationalFn(Poly::constant(nvars, c));
}

bool RationalFn::equals(const RationalFn& g) const {
    return (num_ * g.den_ - g.num_ * den_).is_effectively_zero();
}

RationalFn RationalFn::operator-() const {
    RationalFn r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    if (a.is_effectively_zero()) return b;
    if (b.is_effectively_zero()) return a;
    if (identical(a.den_, b.den_)) return RationalFn(a.num_ + b.num_, a.den_);
    return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFn operator-(const RationalFn& a, const RationalFn& b) {
    if (b.is_effectively_zero()) return a;
    if (a.is_effectively_zero()) return -b;
    if (identical(a.den_, b.den_)) return RationalFn(a.num_ - b.num_, a.den_);
    return RationalFn(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    if (a.is_effectively_zero() || b.is_effectively_zero())
        return RationalFn::zero(a.nvars());
    return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFn operator/(const RationalFn& a, const RationalFn& b) {
    if (b.is_effectively_zero())
        throw SingularityError("rational fn: division by zero");
    if (a.is_effectively_zero()) return RationalFn::zero(a.nvars());
    return RationalFn(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFn operator*(const Poly& p, const RationalFn& f) {
    return RationalFn(p) * f;
}

RationalFn RationalFn::scaled(const Scalar& c) const {
    return RationalFn(num_.scaled(c), den_);
}

RationalFn RationalFn::diff(int index) const {
    if (num_.is_zero()) return zero(nvars());
    if (den_.is_constant())
        return RationalFn(num_.diff(index), den_);
    return RationalFn(num_.diff(index) * den_ - num_ * den_.diff(index),
                      den_ * den_);
}

Scalar RationalFn::eval(std::span<const Scalar> y) const {
    Scalar d = den_.eval(y);
    if (d.is_zero_strict())
        throw SingularityError("rational fn: denominator vanishes at point");
    return num_.eval(y) / d;
}

double RationalFn::eval_double(std::span<const double> y) const {
    double d = den_.eval_double(y);
    if (d == 0.0)
        throw SingularityError("rational fn: denominator vanishes at point");
    return num_.eval_double(y) / d;
}

std::string RationalFn::str(std::string_view var_prefix) const {
    if (num_.is_zero()) return "0";
    if (den_.is_constant()) {
        Scalar c = den_.constant_value();
        if (c.equals(Scalar(1))) return num_.str(var_prefix);
        return num_.scaled(Scalar(1) / c).str(var_prefix);
    }
    return "(" + num_.str(var_prefix) + ") / (" + den_.str(var_prefix) + ")";
}

// ---------------------------------------------------------------------------
// as_polynomial: division route cross-validated by interpolation.

namespace {

std::vector<Monomial> monomials_up_to(int nvars, int max_deg) {
    std::vector<Monomial> out;
    Monomial m(nvars);
    // Odometer over exponent vectors with total degree <= max_deg.
    std::vector<int> e(nvars, 0);
    for (;;) {
        int total = 0;
        for (int v : e) total += v;
        if (total <= max_deg) {
            Monomial mm(nvars);
            for (int i = 0; i < nvars; ++i) mm.set_exponent(i, e[i]);
            out.push_back(mm);
        }
        int i = 0;
        for (; i < nvars; ++i) {
            if (++e[i] <= max_deg) break;
            e[i] = 0;
        }
        if (i == nvars) break;
    }
    return out;
}

Scalar monomial_value(const Monomial& m, std::span<const Scalar> pt) {
    Scalar v(1);
    for (int i = 0; i < m.nvars(); ++i)
        for (int k = 0; k < m.exponent(i); ++k) v *= pt[i];
    return v;
}

std::optional<Poly> interpolate_polynomial(const RationalFn& f, int max_deg) {
    const int n = f.nvars();
    const bool exact = !f.num().has_float() && !f.den().has_float();
    auto monos = monomials_up_to(n, max_deg);
    const std::size_t m = monos.size();
    std::mt19937 rng(0x5eedu);
    std::uniform_int_distribution<int> num_dist(-9, 9);
    std::uniform_int_distribution<int> den_dist(1, 4);
    auto random_point = [&] {
        std::vector<Scalar> pt;
        pt.reserve(n);
        for (int i = 0; i < n; ++i) {
            Scalar v = Scalar::ratio(num_dist(rng), den_dist(rng));
            pt.push_back(exact ? v : Scalar::of_double(v.to_double()));
        }
        return pt;
    };
    auto safe_eval = [&](std::span<const Scalar> pt, Scalar* out) {
        Scalar d = f.den().eval(pt);
        if (exact) {
            if (d.is_zero_strict()) return false;
        } else {
            double tol =
                ambient_tolerance().threshold(f.den().max_abs_coeff());
            if (d.abs_double() <= std::max(tol, 1e-6)) return false;
        }
        *out = f.num().eval(pt) / d;
        return true;
    };
    for (int attempt = 0; attempt < 100; ++attempt) {
        ScalarMatrix v(m, std::vector<Scalar>(m, Scalar(0)));
        std::vector<Scalar> rhs(m, Scalar(0));
        bool grid_ok = true;
        for (std::size_t r = 0; r < m && grid_ok; ++r) {
            auto pt = random_point();
            Scalar fv(0);
            if (!safe_eval(pt, &fv)) {
                grid_ok = false;
                break;
            }
            for (std::size_t c = 0; c < m; ++c)
                v[r][c] = monomial_value(monos[c], pt);
            rhs[r] = fv;
        }
        if (!grid_ok) continue;
        auto coeffs = solve_dense(std::move(v), std::move(rhs));
        if (!coeffs) continue;  // degenerate sample grid: resample
        Poly candidate(n);
        for (std::size_t c = 0; c < m; ++c)
            candidate.add_term(monos[c], (*coeffs)[c]);
        if (!exact)
            candidate.cleanup(std::max(1.0, candidate.max_abs_coeff()));
        // Verify at extra points; any mismatch means f is not a polynomial
        // of this degree.
        int verified = 0;
        while (verified < 10) {
            auto pt = random_point();
            Scalar fv(0);
            if (!safe_eval(pt, &fv)) continue;
            Scalar pv = candidate.eval(pt);
            Scalar diff = pv - fv;
            if (exact) {
                if (!diff.is_zero_strict()) return std::nullopt;
            } else {
                double scale = std::max({1.0, fv.abs_double(),
                                         candidate.max_abs_coeff()});
                if (diff.abs_double() > ambient_tolerance().threshold(scale) &&
                    diff.abs_double() > 1e-6 * scale)
                    return std::nullopt;
            }
            ++verified;
        }
        return candidate;
    }
    throw Error("as_polynomial: could not build a nondegenerate sample grid");
}

}  // namespace

std::optional<Poly> as_polynomial(const RationalFn& f, int max_deg) {
    std::optional<Poly> by_division;
    if (f.num().is_zero() || f.is_effectively_zero()) {
        by_division = Poly::zero(f.nvars());
    } else {
        by_division = exact_divide(f.num(), f.den());
        if (by_division && by_division->total_degree() > max_deg)
            by_division = std::nullopt;
    }
    std::optional<Poly> by_interp = interpolate_polynomial(f, max_deg);
    if (by_division.has_value() != by_interp.has_value())
        throw InvariantViolationError(
            "as_polynomial: division and interpolation disagree");
    if (by_division && !by_division->equals(*by_interp))
        throw InvariantViolationError(
            "as_polynomial: division and interpolation yield different "
            "polynomials");
    return by_division;
}

}  // namespace mroot
