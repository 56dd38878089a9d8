#include "mroot/decomp.hpp"

#include <cmath>
#include <future>
#include <random>

#include "mroot/errors.hpp"

namespace mroot {

DecompSpec::DecompSpec(int n) : n_(n), b_(n, Expr::constant(Rational(0))) {
    if (n < 2 || n > Monomial::kMaxVars)
        throw SpecError("decomposable spec dimension must be between 2 and " +
                        std::to_string(Monomial::kMaxVars));
}

void DecompSpec::set_gamma(int i, int j, Expr e) {
    if (i < 1 || i > n_ || j < 1 || j > n_)
        throw SpecError("gamma index out of range 1..n");
    MultiIndex key = sorted_index({i, j});
    if (gamma_.count(key)) throw SpecError("duplicate gamma entry");
    if (e.max_var() > n_)
        throw SpecError("gamma expression uses x beyond the dimension");
    gamma_.emplace(std::move(key), std::move(e));
}

Expr DecompSpec::gamma_entry(int i, int j) const {
    auto it = gamma_.find(sorted_index({i, j}));
    if (it == gamma_.end()) return Expr::constant(Rational(0));
    return it->second;
}

void DecompSpec::set_b(int i, Expr e) {
    if (i < 1 || i > n_) throw SpecError("b index out of range 1..n");
    if (e.max_var() > n_)
        throw SpecError("b expression uses x beyond the dimension");
    b_[i - 1] = std::move(e);
}

const Expr& DecompSpec::b_entry(int i) const {
    if (i < 1 || i > n_) throw SpecError("b index out of range 1..n");
    return b_[i - 1];
}

MetricSpec to_cubic(const DecompSpec& spec) {
    const int n = spec.dimension();
    MetricSpec cubic(n, 3);
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            for (int k = j; k <= n; ++k) {
                Expr e = Expr::add(
                    Expr::add(
                        Expr::mul(spec.gamma_entry(i, j), spec.b_entry(k)),
                        Expr::mul(spec.gamma_entry(j, k), spec.b_entry(i))),
                    Expr::mul(spec.gamma_entry(k, i), spec.b_entry(j)));
                e = Expr::div(e, Expr::constant(Rational(3)));
                if (e.is_constant() && sgn(e.constant_value()) == 0) continue;
                cubic.set_coefficient({i, j, k}, std::move(e));
            }
    return cubic;
}

namespace {

// Fills every field derived from gamma/b values and their x-derivatives.
void derive_fields(LeviCivitaData& lc) {
    const int n = lc.n;
    auto inv = invert_dense(lc.gamma);
    if (!inv) throw SpecError("gamma is singular at the base point");
    lc.gamma_inv = std::move(*inv);
    if (!positive_definite(lc.gamma))
        throw SpecError("gamma is not positive-definite at the base point");

    lc.chris.assign(n, ScalarMatrix(n, std::vector<Scalar>(n, Scalar(0))));
    Scalar half = Scalar::ratio(1, 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                Scalar acc(0);
                for (int h = 0; h < n; ++h)
                    acc += lc.gamma_inv[i][h] *
                           (lc.dgamma[j][h][k] + lc.dgamma[k][h][j] -
                            lc.dgamma[h][j][k]);
                acc = acc * half;
                lc.chris[i][j][k] = acc;
                lc.chris[i][k][j] = acc;
            }

    lc.b_up.assign(n, Scalar(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            lc.b_up[i] += lc.gamma_inv[i][j] * lc.b_lo[j];
    lc.b_norm2 = Scalar(0);
    for (int i = 0; i < n; ++i) lc.b_norm2 += lc.b_up[i] * lc.b_lo[i];

    lc.nabla_b.assign(n, std::vector<Scalar>(n, Scalar(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Scalar acc = lc.db[i][j];
            for (int h = 0; h < n; ++h)
                acc -= lc.chris[h][i][j] * lc.b_lo[h];
            lc.nabla_b[i][j] = acc;
        }

    lc.riem_spray.clear();
    for (int i = 0; i < n; ++i) {
        Poly g(n);
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k) {
                const Scalar& c = lc.chris[i][j - 1][k - 1];
                if (c.is_zero_strict()) continue;
                Poly t = Poly::variable(n, j) * Poly::variable(n, k);
                g += t.scaled(c * half);
            }
        lc.riem_spray.push_back(std::move(g));
    }

    lc.a_poly = Poly(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const Scalar& c = lc.gamma[i - 1][j - 1];
            if (c.is_zero_strict()) continue;
            lc.a_poly += (Poly::variable(n, i) * Poly::variable(n, j)).scaled(c);
        }
    lc.b_poly = Poly(n);
    for (int i = 1; i <= n; ++i) {
        if (lc.b_lo[i - 1].is_zero_strict()) continue;
        lc.b_poly += Poly::variable(n, i).scaled(lc.b_lo[i - 1]);
    }
    lc.delta = (lc.b_poly * lc.b_poly).scaled(Scalar(4)) - lc.a_poly;

    lc.nabla0b = Poly(n);
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) {
            const Scalar& c = lc.nabla_b[j - 1][i - 1];
            if (c.is_zero_strict()) continue;
            lc.nabla0b +=
                (Poly::variable(n, j) * Poly::variable(n, i)).scaled(c);
        }

    lc.r_b.clear();
    for (int j = 0; j < n; ++j) {
        Poly r(n);
        for (int rr = 1; rr <= n; ++rr) {
            Scalar c = lc.nabla_b[j][rr - 1] - lc.nabla_b[rr - 1][j];
            if (c.is_zero_strict()) continue;
            r += Poly::variable(n, rr).scaled(c);
        }
        lc.r_b.push_back(std::move(r));
    }
}

double nabla_scale(const LeviCivitaData& lc) {
    double s = 1.0;
    double bmax = 0.0;
    for (const auto& v : lc.b_lo) bmax = std::max(bmax, v.abs_double());
    for (int i = 0; i < lc.n; ++i)
        for (int j = 0; j < lc.n; ++j) {
            s = std::max(s, lc.db[i][j].abs_double());
            for (int h = 0; h < lc.n; ++h)
                s = std::max(s, lc.chris[h][i][j].abs_double() * bmax);
        }
    return s;
}

}  // namespace

bool LeviCivitaData::b_parallel() const {
    double tol = ambient_tolerance().threshold(nabla_scale(*this));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Scalar& v = nabla_b[i][j];
            if (v.is_exact()) {
                if (!v.is_zero_strict()) return false;
            } else if (v.abs_double() > tol) {
                return false;
            }
        }
    return true;
}

bool LeviCivitaData::unit_norm_ok() const {
    if (b_norm2.is_exact()) return b_norm2.exact() == 1;
    return std::fabs(b_norm2.to_double() - 1.0) <=
           ambient_tolerance().threshold(1.0);
}

double LeviCivitaData::unit_norm_residual() const {
    return std::fabs(b_norm2.to_double() - 1.0);
}

LeviCivitaData christoffel(const DecompSpec& spec,
                           std::span<const Scalar> x0, Mode mode) {
    const int n = spec.dimension();
    if (static_cast<int>(x0.size()) != n)
        throw SpecError("base point has wrong dimension");
    LeviCivitaData lc;
    lc.n = n;
    lc.mode = mode;
    lc.x0.assign(x0.begin(), x0.end());

    std::vector<Rational> xq;
    std::vector<double> xd;
    if (mode == Mode::exact)
        for (const Scalar& v : x0) xq.push_back(v.exact());
    else
        for (const Scalar& v : x0) xd.push_back(v.to_double());
    auto eval = [&](const Expr& e) {
        if (mode == Mode::exact) return Scalar(e.eval_exact(xq));
        return Scalar::of_double(e.eval_double(xd));
    };

    lc.gamma.assign(n, std::vector<Scalar>(n, Scalar(0)));
    lc.dgamma.assign(n, ScalarMatrix(n, std::vector<Scalar>(n, Scalar(0))));
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            Expr e = spec.gamma_entry(i, j);
            Scalar v = eval(e);
            lc.gamma[i - 1][j - 1] = v;
            lc.gamma[j - 1][i - 1] = v;
            for (int l = 1; l <= n; ++l) {
                Scalar d = eval(e.diff(l));
                lc.dgamma[l - 1][i - 1][j - 1] = d;
                lc.dgamma[l - 1][j - 1][i - 1] = d;
            }
        }
    lc.b_lo.assign(n, Scalar(0));
    lc.db.assign(n, std::vector<Scalar>(n, Scalar(0)));
    for (int j = 1; j <= n; ++j) {
        const Expr& e = spec.b_entry(j);
        lc.b_lo[j - 1] = eval(e);
        for (int i = 1; i <= n; ++i) lc.db[i - 1][j - 1] = eval(e.diff(i));
    }
    derive_fields(lc);
    return lc;
}

void normalize_b(LeviCivitaData& lc) {
    const int n = lc.n;
    // s = |b|, with d_l(s^2) assembled from d gamma^{-1} = -g^-1 dg g^-1.
    Scalar s2 = lc.b_norm2;
    Scalar s(0);
    if (s2.is_exact()) {
        Rational root;
        if (!try_rational_sqrt(s2.exact(), &root))
            throw TranscendentalError(
                "|b| is irrational at this point; normalization requires "
                "float mode");
        if (sgn(root) == 0) throw SpecError("b vanishes at the base point");
        s = Scalar(root);
    } else {
        double v = s2.to_double();
        if (v <= 0.0) throw SpecError("b vanishes at the base point");
        s = Scalar::of_double(std::sqrt(v));
    }
    std::vector<Scalar> ds2(n, Scalar(0));
    for (int l = 0; l < n; ++l) {
        Scalar acc(0);
        // (d_l gamma^{jk}) b_j b_k = - (g^-1 dg g^-1)^{jk} b_j b_k
        //                          = - (d_l gamma)_{ab} b^a b^b
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
                acc -= lc.dgamma[l][a][c] * lc.b_up[a] * lc.b_up[c];
        for (int j = 0; j < n; ++j)
            acc += Scalar(2) * lc.b_up[j] * lc.db[l][j];
        ds2[l] = acc;
    }
    Scalar inv_s = Scalar(1) / s;
    Scalar inv_s3_half = Scalar::ratio(1, 2) / (s * s2);
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l)
            lc.db[l][j] =
                lc.db[l][j] * inv_s - lc.b_lo[j] * ds2[l] * inv_s3_half;
        lc.b_lo[j] = lc.b_lo[j] * inv_s;
    }
    derive_fields(lc);
}

DecompInverse delta_and_inverse(const LeviCivitaData& lc) {
    const int n = lc.n;
    if (lc.delta.is_effectively_zero())
        throw DegenerateHessianError("Delta = 4b^2 - a vanishes identically");
    if (lc.b_poly.is_effectively_zero())
        throw SpecError("b vanishes at the base point");

    DecompInverse di;
    Poly den = (lc.b_poly.scaled(Scalar(2))) * lc.delta;
    di.Tinv.assign(n, std::vector<RationalFn>(n));
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            Poly yi = Poly::variable(n, i);
            Poly yj = Poly::variable(n, j);
            Poly num = lc.delta.scaled(lc.gamma_inv[i - 1][j - 1]);
            num -= (lc.b_poly * yj).scaled(Scalar(2) * lc.b_up[i - 1]);
            num -= (lc.b_poly * yi).scaled(Scalar(2) * lc.b_up[j - 1]);
            num += lc.a_poly.scaled(lc.b_up[i - 1] * lc.b_up[j - 1]);
            num += yi * yj;
            di.Tinv[i - 1][j - 1] = RationalFn(num, den);
            di.Tinv[j - 1][i - 1] = di.Tinv[i - 1][j - 1];
        }

    // Hessian of T = a*b by direct differentiation; the closed form has to
    // agree with adjugate/determinant as rational functions.
    Poly t = lc.a_poly * lc.b_poly;
    PolyMatrix tij(n, std::vector<Poly>(n));
    for (int i = 1; i <= n; ++i) {
        Poly ti = t.diff(i);
        for (int j = i; j <= n; ++j) {
            tij[i - 1][j - 1] = ti.diff(j);
            tij[j - 1][i - 1] = tij[i - 1][j - 1];
        }
    }
    di.hessian_det = poly_det(tij);
    if (di.hessian_det.is_effectively_zero())
        throw DegenerateHessianError("degenerate Hessian: det[T_ij] = 0");
    PolyMatrix adj = poly_adjugate(tij);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Poly lhs = di.Tinv[i][j].num() * di.hessian_det;
            Poly rhs = adj[i][j] * di.Tinv[i][j].den();
            if (!(lhs - rhs).is_effectively_zero())
                throw InvariantViolationError(
                    "closed-form inverse Hessian disagrees with the "
                    "adjugate route");
        }

    auto quotient = exact_divide(di.hessian_det, lc.delta);
    if (!quotient)
        throw InvariantViolationError(
            "det[T_ij] is not divisible by Delta");
    di.det_over_delta = std::move(*quotient);
    return di;
}

std::vector<Poly> r_T(const LeviCivitaData& lc) {
    const int n = lc.n;
    std::vector<Poly> rt;
    rt.reserve(n);
    for (int j = 1; j <= n; ++j) {
        Poly r = lc.a_poly * lc.r_b[j - 1];
        r -= lc.a_poly.diff(j) * lc.nabla0b;
        rt.push_back(std::move(r));
    }
    return rt;
}

// Coefficient values of the cubic T = a*b built by the product rule from
// Levi-Civita point data; used instead of the expression route when b has
// been renormalized numerically.
PointContext cubic_point_context(const LeviCivitaData& lc) {
    const int n = lc.n;
    Scalar third = Scalar::ratio(1, 3);
    std::vector<PointContext::EntryValues> vals;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            for (int k = j; k <= n; ++k) {
                PointContext::EntryValues v;
                v.idx = {i, j, k};
                v.perms = permutation_count(v.idx);
                auto g = [&](int a, int b) { return lc.gamma[a - 1][b - 1]; };
                auto dg = [&](int l, int a, int b) {
                    return lc.dgamma[l - 1][a - 1][b - 1];
                };
                auto b_of = [&](int a) { return lc.b_lo[a - 1]; };
                auto db_of = [&](int l, int a) {
                    return lc.db[l - 1][a - 1];
                };
                v.a = (g(i, j) * b_of(k) + g(j, k) * b_of(i) +
                       g(k, i) * b_of(j)) *
                      third;
                for (int l = 1; l <= n; ++l) {
                    Scalar d = (dg(l, i, j) * b_of(k) + g(i, j) * db_of(l, k) +
                                dg(l, j, k) * b_of(i) + g(j, k) * db_of(l, i) +
                                dg(l, k, i) * b_of(j) + g(k, i) * db_of(l, j)) *
                               third;
                    v.da.push_back(d);
                }
                if (v.a.is_zero_strict()) {
                    bool all_zero = true;
                    for (const auto& d : v.da)
                        if (!d.is_zero_strict()) all_zero = false;
                    if (all_zero) continue;
                }
                vals.push_back(std::move(v));
            }
    return PointContext::from_values(n, 3, lc.mode, lc.x0, std::move(vals));
}

SprayDifference spray_difference(const DecompSpec& spec,
                                 const LeviCivitaData& lc,
                                 const DecompInverse& di) {
    const int n = lc.n;
    SprayDifference sd;
    std::vector<Poly> rt = r_T(lc);
    Scalar minus_half = Scalar::ratio(-1, 2);
    for (int i = 0; i < n; ++i) {
        RationalFn acc = RationalFn::zero(n);
        for (int j = 0; j < n; ++j) {
            if (rt[j].is_zero()) continue;
            acc += di.Tinv[i][j] * RationalFn(rt[j]);
        }
        sd.closed_route.push_back(acc.scaled(minus_half));
    }

    PointContext ctx = cubic_point_context(lc);
    FundamentalTables tables = fundamental_tables(ctx);
    SprayData s = spray(tables);
    for (int i = 0; i < n; ++i)
        sd.subtract_route.push_back(s.G[i] - RationalFn(lc.riem_spray[i]));
    (void)spec;
    return sd;
}

FDiagnostic f_diagnostic(const LeviCivitaData& lc) {
    const int n = lc.n;
    FDiagnostic d;
    Poly brb(n);  // b^j r_j(b)
    for (int j = 0; j < n; ++j) {
        if (lc.r_b[j].is_zero()) continue;
        brb += lc.r_b[j].scaled(lc.b_up[j]);
    }
    Poly s = lc.b_poly.scaled(Scalar(2)) * brb + lc.nabla0b;
    auto q = exact_divide(s, lc.delta);
    if (!q || !q->is_constant()) return d;
    d.factorized = true;
    d.f = q->constant_value();
    d.residual_term2 =
        (lc.nabla0b + lc.a_poly.scaled(d.f)).max_abs_coeff();
    d.residual_br =
        (brb - lc.b_poly.scaled(Scalar(2) * d.f)).max_abs_coeff();
    for (int r = 0; r < n; ++r) {
        Scalar lhs(0);
        for (int i = 0; i < n; ++i) lhs += lc.b_up[i] * lc.nabla_b[i][r];
        double r2 = (lhs - Scalar(2) * lc.b_lo[r] * d.f).abs_double();
        double r3 = (lhs - Scalar(3) * lc.b_lo[r] * d.f).abs_double();
        d.residual_coeff2 = std::max(d.residual_coeff2, r2);
        d.residual_coeff3 = std::max(d.residual_coeff3, r3);
    }
    return d;
}

namespace {

TheoremPointReport theorem_point(const DecompSpec& spec,
                                 const std::vector<Scalar>& point,
                                 const TheoremOptions& opts) {
    TheoremPointReport rep;
    rep.point = point;
    rep.mode = opts.mode;

    LeviCivitaData lc = [&] {
        if (opts.mode == Mode::exact) {
            try {
                LeviCivitaData d = christoffel(spec, point, Mode::exact);
                if (!d.unit_norm_ok() && opts.normalize_b) normalize_b(d);
                return d;
            } catch (const TranscendentalError&) {
                if (!opts.allow_float_fallback) throw;
                rep.mode = Mode::floating;
                rep.mode_fell_back = true;
                LeviCivitaData d = christoffel(spec, point, Mode::floating);
                if (!d.unit_norm_ok() && opts.normalize_b) normalize_b(d);
                return d;
            }
        }
        LeviCivitaData d = christoffel(spec, point, Mode::floating);
        if (!d.unit_norm_ok() && opts.normalize_b) normalize_b(d);
        return d;
    }();

    rep.unit_norm_residual = lc.unit_norm_residual();
    if (!lc.unit_norm_ok())
        throw SpecError(
            "b does not have unit gamma-norm at the base point "
            "(|b|^2 - 1 = " +
            double_str(lc.unit_norm_residual()) +
            "); pass normalize-b to explore the rescaled 1-form");

    // The stationarity of |b|^2 is part of the decomposition hypotheses;
    // without it the aux identity b^i nabla_j b_i = 0 fails.
    {
        double tol = ambient_tolerance().threshold(nabla_scale(lc));
        rep.aux_b_nabla_b = true;
        for (int j = 0; j < lc.n; ++j) {
            Scalar acc(0);
            for (int i = 0; i < lc.n; ++i)
                acc += lc.b_up[i] * lc.nabla_b[j][i];
            bool zero = acc.is_exact() ? acc.is_zero_strict()
                                       : acc.abs_double() <= tol;
            if (!zero) rep.aux_b_nabla_b = false;
        }
        if (!rep.aux_b_nabla_b)
            throw SpecError(
                "|b| is not stationary at the base point; the unit-norm "
                "hypothesis must hold as a field identity");
    }

    DecompInverse di = delta_and_inverse(lc);
    rep.closed_inverse_matches_adjugate = true;
    rep.delta_divides_det = true;

    SprayDifference sd = spray_difference(spec, lc, di);
    for (int i = 0; i < lc.n; ++i)
        if (!sd.closed_route[i].equals(sd.subtract_route[i]))
            throw InvariantViolationError(
                "spray-difference routes disagree for B^" +
                std::to_string(i + 1));
    rep.routes_agree = true;

    rep.p1_spray_polynomial = true;
    for (int i = 0; i < lc.n; ++i)
        if (!as_polynomial(sd.closed_route[i], 2)) {
            rep.p1_spray_polynomial = false;
            break;
        }
    rep.p2_parallel = lc.b_parallel();
    if (rep.p1_spray_polynomial != rep.p2_parallel)
        throw InvariantViolationError(
            "Berwald-parallelism equivalence failed: spray polynomiality "
            "= " +
            std::string(rep.p1_spray_polynomial ? "true" : "false") +
            ", parallel b = " +
            std::string(rep.p2_parallel ? "true" : "false"));
    if (rep.p1_spray_polynomial && rep.p2_parallel) {
        rep.b_vanishes = true;
        for (int i = 0; i < lc.n; ++i)
            if (!sd.closed_route[i].is_effectively_zero() ||
                !sd.subtract_route[i].is_effectively_zero())
                rep.b_vanishes = false;
        if (!rep.b_vanishes)
            throw InvariantViolationError(
                "parallel b must force the spray difference to vanish");
    }

    // y^j r_j(b) = 0 holds by antisymmetry, unconditionally.
    Poly yrb(lc.n);
    for (int j = 1; j <= lc.n; ++j)
        yrb += Poly::variable(lc.n, j) * lc.r_b[j - 1];
    rep.aux_y_r_b = yrb.is_effectively_zero();
    if (!rep.aux_y_r_b)
        throw InvariantViolationError("y^j r_j(b) failed to vanish");

    // T^{ij} b_j = (2 b b^i - y^i) / (2 Delta)
    rep.aux_tinv_b = true;
    for (int i = 0; i < lc.n; ++i) {
        RationalFn lhs = RationalFn::zero(lc.n);
        for (int j = 0; j < lc.n; ++j)
            lhs += di.Tinv[i][j].scaled(lc.b_lo[j]);
        Poly num = lc.b_poly.scaled(Scalar(2) * lc.b_up[i]) -
                   Poly::variable(lc.n, i + 1);
        RationalFn rhs(num, lc.delta.scaled(Scalar(2)));
        if (!lhs.equals(rhs)) rep.aux_tinv_b = false;
    }
    if (!rep.aux_tinv_b)
        throw InvariantViolationError("T^{ij} b_j closed form failed");

    // T^{ij} a_{.j} = (2 b y^i - b^i a) / Delta
    rep.aux_tinv_adot = true;
    for (int i = 0; i < lc.n; ++i) {
        RationalFn lhs = RationalFn::zero(lc.n);
        for (int j = 1; j <= lc.n; ++j) {
            Poly adot = lc.a_poly.diff(j);
            if (adot.is_zero()) continue;
            lhs += di.Tinv[i][j - 1] * RationalFn(adot);
        }
        Poly num = lc.b_poly.scaled(Scalar(2)) * Poly::variable(lc.n, i + 1) -
                   lc.a_poly.scaled(lc.b_up[i]);
        RationalFn rhs(num, lc.delta);
        if (!lhs.equals(rhs)) rep.aux_tinv_adot = false;
    }
    if (!rep.aux_tinv_adot)
        throw InvariantViolationError("T^{ij} a_{.j} closed form failed");

    rep.fdiag = f_diagnostic(lc);
    return rep;
}

}  // namespace

ClassificationReport classify_decomposable(
    const DecompSpec& spec, std::span<const std::vector<Scalar>> points,
    const ClassifyOptions& opts, bool normalize) {
    ClassificationReport report;
    report.n = spec.dimension();
    report.m = 3;

    struct Prepared {
        LeviCivitaData lc;
        bool fell_back = false;
    };
    std::vector<Prepared> prepared;
    for (const auto& point : points) {
        Prepared p;
        p.lc = [&] {
            if (opts.mode == Mode::exact) {
                try {
                    LeviCivitaData d = christoffel(spec, point, Mode::exact);
                    if (!d.unit_norm_ok() && normalize) normalize_b(d);
                    return d;
                } catch (const TranscendentalError&) {
                    if (!opts.allow_float_fallback) throw;
                    p.fell_back = true;
                }
            }
            LeviCivitaData d = christoffel(spec, point, Mode::floating);
            if (!d.unit_norm_ok() && normalize) normalize_b(d);
            return d;
        }();
        if (!p.lc.unit_norm_ok())
            throw SpecError(
                "b does not have unit gamma-norm at a listed point "
                "(|b|^2 - 1 = " +
                double_str(p.lc.unit_norm_residual()) +
                "); pass normalize-b to classify the rescaled 1-form");
        prepared.push_back(std::move(p));
    }

    for (const auto& p : prepared) {
        try {
            PointClassification pc =
                classify_point_context(cubic_point_context(p.lc), opts);
            pc.mode_fell_back = p.fell_back;
            report.points.push_back(std::move(pc));
        } catch (const InvariantViolationError&) {
            throw;
        } catch (const Error& e) {
            PointClassification pc;
            pc.point = p.lc.x0;
            pc.mode = p.lc.mode;
            pc.mode_fell_back = p.fell_back;
            pc.degenerate = true;
            pc.error = e.what();
            report.points.push_back(std::move(pc));
        }
    }

    // Cartan sampling for the Riemannian verdict, on the first context
    // that admits a cone point.
    std::mt19937 rng(0xca47a9u);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (const auto& p : prepared) {
        FundamentalTables t =
            fundamental_tables(cubic_point_context(p.lc).to_float());
        double worst = 0.0;
        int found = 0;
        for (int attempt = 0; attempt < 200 && found < 5; ++attempt) {
            std::vector<double> y(report.n);
            for (double& v : y) v = dist(rng);
            try {
                if (t.T.eval_double(y) <= 1e-3) continue;
                worst = std::max(worst, cartan_max_abs(t, y));
                ++found;
            } catch (const Error&) {
                continue;
            }
        }
        if (found > 0) {
            report.cartan_max = worst;
            report.riemannian = worst <= 1e-8 ? Verdict::yes : Verdict::no;
            break;
        }
    }

    fill_verdict_conjunctions(report);
    return report;
}

TheoremReport theorem_check(const DecompSpec& spec,
                            std::span<const std::vector<Scalar>> points,
                            const TheoremOptions& opts) {
    TheoremReport report;
    report.n = spec.dimension();
    if (opts.parallel && points.size() > 1) {
        Tolerance tol = ambient_tolerance();
        std::vector<std::future<TheoremPointReport>> futures;
        for (const auto& pt : points)
            futures.push_back(std::async(std::launch::async, [&, pt] {
                ToleranceScope scope(tol);
                return theorem_point(spec, pt, opts);
            }));
        for (auto& f : futures) report.points.push_back(f.get());
    } else {
        for (const auto& pt : points)
            report.points.push_back(theorem_point(spec, pt, opts));
    }
    report.all_points_berwald = !report.points.empty();
    for (const auto& p : report.points)
        if (!(p.p1_spray_polynomial && p.p2_parallel))
            report.all_points_berwald = false;
    return report;
}

}  // namespace mroot
