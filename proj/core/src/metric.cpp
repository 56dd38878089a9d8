#include "mroot/metric.hpp"

#include <algorithm>

#include "mroot/errors.hpp"

namespace mroot {

MultiIndex sorted_index(MultiIndex idx) {
    std::sort(idx.begin(), idx.end());
    return idx;
}

long permutation_count(const MultiIndex& idx) {
    long fact = 1;
    for (std::size_t i = 2; i <= idx.size(); ++i)
        fact *= static_cast<long>(i);
    long run = 1;
    for (std::size_t i = 1; i <= idx.size(); ++i) {
        if (i < idx.size() && idx[i] == idx[i - 1]) {
            ++run;
        } else {
            for (long k = 2; k <= run; ++k) fact /= k;
            run = 1;
        }
    }
    return fact;
}

MetricSpec::MetricSpec(int n, int m) : n_(n), m_(m) {
    if (n < 2 || n > Monomial::kMaxVars)
        throw SpecError("metric dimension must be between 2 and " +
                        std::to_string(Monomial::kMaxVars));
    if (m < 2) throw SpecError("metric degree must be at least 2");
}

void MetricSpec::set_coefficient(MultiIndex idx, Expr e) {
    if (static_cast<int>(idx.size()) != m_)
        throw SpecError("coefficient multi-index must have degree-many entries");
    for (int v : idx)
        if (v < 1 || v > n_)
            throw SpecError("coefficient index entry out of range 1..n");
    MultiIndex key = sorted_index(std::move(idx));
    if (coeffs_.count(key))
        throw SpecError("duplicate coefficient multi-index");
    if (e.max_var() > n_)
        throw SpecError("coefficient expression uses x beyond the dimension");
    coeffs_.emplace(std::move(key), std::move(e));
}

Expr MetricSpec::coefficient(const MultiIndex& idx) const {
    auto it = coeffs_.find(sorted_index(idx));
    if (it == coeffs_.end()) return Expr::constant(Rational(0));
    return it->second;
}

CompiledMetric::CompiledMetric(const MetricSpec& spec) : spec_(spec) {
    const int n = spec.dimension();
    for (const auto& [idx, e] : spec.coefficients()) {
        Entry entry;
        entry.idx = idx;
        entry.perms = permutation_count(idx);
        entry.value = e;
        entry.d1.reserve(n);
        for (int l = 1; l <= n; ++l) entry.d1.push_back(e.diff(l));
        entry.d2.resize(n);
        for (int l = 1; l <= n; ++l)
            for (int s = l; s <= n; ++s)
                entry.d2[l - 1].push_back(entry.d1[l - 1].diff(s));
        entries_.push_back(std::move(entry));
    }
}

PointContext PointContext::build(const CompiledMetric& metric,
                                 std::span<const Scalar> x0, Mode mode) {
    const int n = metric.dimension();
    if (static_cast<int>(x0.size()) != n)
        throw SpecError("base point has wrong dimension");
    PointContext ctx;
    ctx.n_ = n;
    ctx.m_ = metric.degree();
    ctx.mode_ = mode;
    ctx.x0_.assign(x0.begin(), x0.end());

    std::vector<Rational> xq;
    std::vector<double> xd;
    if (mode == Mode::exact) {
        for (const Scalar& v : x0) xq.push_back(v.exact());
    } else {
        for (const Scalar& v : x0) xd.push_back(v.to_double());
    }
    auto eval = [&](const Expr& e) {
        if (mode == Mode::exact) return Scalar(e.eval_exact(xq));
        return Scalar::of_double(e.eval_double(xd));
    };

    for (const auto& entry : metric.entries()) {
        EntryValues v;
        v.idx = entry.idx;
        v.perms = entry.perms;
        v.a = eval(entry.value);
        for (int l = 1; l <= n; ++l) v.da.push_back(eval(entry.d1[l - 1]));
        v.d2a.resize(n);
        for (int l = 1; l <= n; ++l)
            for (int s = l; s <= n; ++s)
                v.d2a[l - 1].push_back(eval(entry.d2[l - 1][s - l]));
        ctx.vals_.push_back(std::move(v));
    }
    return ctx;
}

PointContext PointContext::from_values(int n, int m, Mode mode,
                                       std::vector<Scalar> x0,
                                       std::vector<EntryValues> vals) {
    PointContext ctx;
    ctx.n_ = n;
    ctx.m_ = m;
    ctx.mode_ = mode;
    ctx.x0_ = std::move(x0);
    ctx.vals_ = std::move(vals);
    for (const auto& v : ctx.vals_) {
        if (static_cast<int>(v.idx.size()) != m ||
            static_cast<int>(v.da.size()) != n)
            throw SpecError("point context values have inconsistent shape");
    }
    return ctx;
}

PointContext PointContext::to_float() const {
    PointContext ctx = *this;
    ctx.mode_ = Mode::floating;
    auto conv = [](Scalar& v) { v = Scalar::of_double(v.to_double()); };
    for (Scalar& v : ctx.x0_) conv(v);
    for (auto& e : ctx.vals_) {
        conv(e.a);
        for (Scalar& v : e.da) conv(v);
        for (auto& row : e.d2a)
            for (Scalar& v : row) conv(v);
    }
    return ctx;
}

Scalar PointContext::d2_value(const EntryValues& e, int l, int s) const {
    if (l > s) std::swap(l, s);
    return e.d2a[l - 1][s - l];
}

namespace {

Monomial index_monomial(int n, const MultiIndex& idx) {
    Monomial m(n);
    for (int v : idx) m.set_exponent(v - 1, m.exponent(v - 1) + 1);
    return m;
}

}  // namespace

Poly PointContext::fundamental_poly() const {
    Poly t(n_);
    for (const auto& v : vals_)
        t.add_term(index_monomial(n_, v.idx), v.a * Scalar(v.perms));
    return t;
}

Poly PointContext::fundamental_poly_dx(int l) const {
    Poly t(n_);
    for (const auto& v : vals_)
        t.add_term(index_monomial(n_, v.idx), v.da[l - 1] * Scalar(v.perms));
    return t;
}

}  // namespace mroot
