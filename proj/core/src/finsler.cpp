#include "mroot/finsler.hpp"

#include <cmath>

#include "mroot/errors.hpp"

namespace mroot {

FundamentalTables fundamental_tables(const PointContext& ctx) {
    FundamentalTables t;
    t.n = ctx.dimension();
    t.m = ctx.degree();
    t.T = ctx.fundamental_poly();
    for (int l = 1; l <= t.n; ++l) t.Tx.push_back(ctx.fundamental_poly_dx(l));
    for (int i = 1; i <= t.n; ++i) t.Ti.push_back(t.T.diff(i));
    t.Tij.assign(t.n, std::vector<Poly>(t.n));
    for (int i = 1; i <= t.n; ++i)
        for (int j = i; j <= t.n; ++j) {
            t.Tij[i - 1][j - 1] = t.Ti[i - 1].diff(j);
            t.Tij[j - 1][i - 1] = t.Tij[i - 1][j - 1];
        }
    t.Tijk.assign(t.n, PolyMatrix(t.n, std::vector<Poly>(t.n)));
    for (int i = 1; i <= t.n; ++i)
        for (int j = i; j <= t.n; ++j)
            for (int k = j; k <= t.n; ++k) {
                Poly d = t.Tij[i - 1][j - 1].diff(k);
                int idx[3] = {i - 1, j - 1, k - 1};
                // mirror over all permutations of the symmetric slots
                t.Tijk[idx[0]][idx[1]][idx[2]] = d;
                t.Tijk[idx[0]][idx[2]][idx[1]] = d;
                t.Tijk[idx[1]][idx[0]][idx[2]] = d;
                t.Tijk[idx[1]][idx[2]][idx[0]] = d;
                t.Tijk[idx[2]][idx[0]][idx[1]] = d;
                t.Tijk[idx[2]][idx[1]][idx[0]] = d;
            }
    return t;
}

SprayData spray(const FundamentalTables& t) {
    SprayData s;
    s.n = t.n;
    s.m = t.m;
    s.det = poly_det(t.Tij);
    if (s.det.is_effectively_zero())
        throw DegenerateHessianError("degenerate Hessian: det[T_ij] = 0");
    s.adj = poly_adjugate(t.Tij);
    s.Tinv.assign(t.n, std::vector<RationalFn>(t.n));
    for (int i = 0; i < t.n; ++i)
        for (int j = 0; j < t.n; ++j)
            s.Tinv[i][j] = RationalFn(s.adj[i][j], s.det);

    // E_h = T_{h,k} y^k - T_{,h}; T_{h,k} is the y_h-derivative of T_{,k}.
    for (int h = 1; h <= t.n; ++h) {
        Poly e(t.n);
        for (int k = 1; k <= t.n; ++k)
            e += t.Tx[k - 1].diff(h) * Poly::variable(t.n, k);
        e -= t.Tx[h - 1];
        s.E.push_back(std::move(e));
    }

    Poly den2 = s.det.scaled(Scalar(2));
    for (int i = 0; i < t.n; ++i) {
        Poly num(t.n);
        for (int h = 0; h < t.n; ++h) num += s.adj[i][h] * s.E[h];
        s.G.emplace_back(std::move(num), den2);
    }

    s.N.assign(t.n, std::vector<RationalFn>(t.n));
    for (int i = 0; i < t.n; ++i)
        for (int j = 1; j <= t.n; ++j) s.N[i][j - 1] = s.G[i].diff(j);

    s.Gjk.assign(t.n, std::vector<std::vector<RationalFn>>(
                          t.n, std::vector<RationalFn>(t.n)));
    for (int i = 0; i < t.n; ++i)
        for (int j = 1; j <= t.n; ++j)
            for (int k = j; k <= t.n; ++k) {
                RationalFn d = s.N[i][j - 1].diff(k);
                s.Gjk[i][j - 1][k - 1] = d;
                s.Gjk[i][k - 1][j - 1] = d;
            }
    return s;
}

RationalFn nonlinear_connection_expanded(const FundamentalTables& t,
                                         const SprayData& s, int i, int j) {
    const int n = t.n;
    RationalFn acc = RationalFn::zero(n);
    for (int h = 1; h <= n; ++h) {
        // T_{hj,k} y^k + T_{h,j} - T_{j,h}
        Poly p(n);
        for (int k = 1; k <= n; ++k)
            p += t.Tx[k - 1].diff(h).diff(j) * Poly::variable(n, k);
        p += t.Tx[j - 1].diff(h);
        p -= t.Tx[h - 1].diff(j);
        acc += s.Tinv[i - 1][h - 1].diff(j) * RationalFn(s.E[h - 1]);
        acc += s.Tinv[i - 1][h - 1] * RationalFn(p);
    }
    return acc.scaled(Scalar::ratio(1, 2));
}

MetricalConnection cgamma_coeffs(const FundamentalTables& t,
                                 const SprayData& s) {
    const int n = t.n;
    // delta T_hj / delta x^k = T_{hj,k} - N^r_k T_hjr
    std::vector<std::vector<std::vector<RationalFn>>> dTij(
        n, std::vector<std::vector<RationalFn>>(n, std::vector<RationalFn>(n)));
    for (int h = 1; h <= n; ++h)
        for (int j = h; j <= n; ++j)
            for (int k = 1; k <= n; ++k) {
                RationalFn d = RationalFn(t.Tx[k - 1].diff(h).diff(j));
                for (int r = 1; r <= n; ++r) {
                    const Poly& thjr = t.Tijk[h - 1][j - 1][r - 1];
                    if (thjr.is_zero()) continue;
                    d -= thjr * s.N[r - 1][k - 1];
                }
                dTij[h - 1][j - 1][k - 1] = d;
                dTij[j - 1][h - 1][k - 1] = d;
            }

    MetricalConnection c;
    c.L.assign(n, std::vector<std::vector<RationalFn>>(
                      n, std::vector<RationalFn>(n)));
    c.Tup = c.L;
    Scalar half = Scalar::ratio(1, 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                RationalFn acc = RationalFn::zero(n);
                RationalFn acct = RationalFn::zero(n);
                for (int h = 0; h < n; ++h) {
                    RationalFn sum = dTij[h][j][k] + dTij[h][k][j] -
                                     dTij[j][k][h];
                    acc += s.Tinv[i][h] * sum;
                    if (!t.Tijk[h][j][k].is_zero())
                        acct += s.Tinv[i][h] * RationalFn(t.Tijk[h][j][k]);
                }
                c.L[i][j][k] = acc.scaled(half);
                c.L[i][k][j] = c.L[i][j][k];
                c.Tup[i][j][k] = acct.scaled(half);
                c.Tup[i][k][j] = c.Tup[i][j][k];
            }
    return c;
}

CovDerivT3 h_cov_deriv_T3(const FundamentalTables& t, const SprayData& s,
                          const MetricalConnection& c) {
    const int n = t.n;
    CovDerivT3 out;
    out.cov.assign(
        n, std::vector<std::vector<std::vector<RationalFn>>>(
               n, std::vector<std::vector<RationalFn>>(
                      n, std::vector<RationalFn>(n))));
    out.cov0.assign(n, std::vector<std::vector<RationalFn>>(
                           n, std::vector<RationalFn>(n)));
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            for (int k = j; k <= n; ++k) {
                std::vector<RationalFn> row(n);
                for (int l = 1; l <= n; ++l) {
                    // delta T_ijk / delta x^l; the transvection term only
                    // contributes for degree > 3 where T_ijk still depends
                    // on y.
                    RationalFn d =
                        RationalFn(t.Tx[l - 1].diff(i).diff(j).diff(k));
                    for (int r = 1; r <= n; ++r) {
                        Poly t4 = t.Tijk[i - 1][j - 1][k - 1].diff(r);
                        if (t4.is_zero()) continue;
                        d -= t4 * s.N[r - 1][l - 1];
                    }
                    for (int h = 0; h < n; ++h) {
                        if (!t.Tijk[h][j - 1][k - 1].is_zero())
                            d -= t.Tijk[h][j - 1][k - 1] * c.L[h][i - 1][l - 1];
                        if (!t.Tijk[i - 1][h][k - 1].is_zero())
                            d -= t.Tijk[i - 1][h][k - 1] * c.L[h][j - 1][l - 1];
                        if (!t.Tijk[i - 1][j - 1][h].is_zero())
                            d -= t.Tijk[i - 1][j - 1][h] * c.L[h][k - 1][l - 1];
                    }
                    row[l - 1] = d;
                }
                RationalFn trans = RationalFn::zero(n);
                for (int l = 1; l <= n; ++l)
                    trans += Poly::variable(n, l) * row[l - 1];
                int p[3] = {i - 1, j - 1, k - 1};
                int perms[6][3] = {{p[0], p[1], p[2]}, {p[0], p[2], p[1]},
                                   {p[1], p[0], p[2]}, {p[1], p[2], p[0]},
                                   {p[2], p[0], p[1]}, {p[2], p[1], p[0]}};
                for (auto& q : perms) {
                    out.cov[q[0]][q[1]][q[2]] = row;
                    out.cov0[q[0]][q[1]][q[2]] = trans;
                }
            }
    return out;
}

// ---------------------------------------------------------------------------
// float-mode diagnostics

namespace {

struct PointEval {
    double T;
    std::vector<double> Ti;
    std::vector<std::vector<double>> Tij;
    std::vector<std::vector<std::vector<double>>> Tijk;
};

PointEval eval_tables(const FundamentalTables& t, std::span<const double> y) {
    PointEval e;
    const int n = t.n;
    e.T = t.T.eval_double(y);
    for (int i = 0; i < n; ++i) e.Ti.push_back(t.Ti[i].eval_double(y));
    e.Tij.assign(n, std::vector<double>(n));
    e.Tijk.assign(n, std::vector<std::vector<double>>(n,
                                                      std::vector<double>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            e.Tij[i][j] = t.Tij[i][j].eval_double(y);
            for (int k = 0; k < n; ++k)
                e.Tijk[i][j][k] = t.Tijk[i][j][k].eval_double(y);
        }
    return e;
}

}  // namespace

std::vector<std::vector<double>> finsler_metric(const FundamentalTables& t,
                                                std::span<const double> y) {
    PointEval e = eval_tables(t, y);
    if (e.T <= 0.0)
        throw SpecError("finsler metric probe requires T(y) > 0");
    const double u = 2.0 / t.m;
    const int n = t.n;
    std::vector<std::vector<double>> g(n, std::vector<double>(n));
    double tu2 = std::pow(e.T, u - 2);
    double tu1 = std::pow(e.T, u - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g[i][j] = 0.5 * (u * (u - 1) * tu2 * e.Ti[i] * e.Ti[j] +
                             u * tu1 * e.Tij[i][j]);
    return g;
}

std::vector<std::vector<double>> finsler_metric_inverse(
    const FundamentalTables& t, const SprayData& s,
    std::span<const double> y) {
    PointEval e = eval_tables(t, y);
    if (e.T <= 0.0)
        throw SpecError("finsler metric probe requires T(y) > 0");
    const int n = t.n;
    const int m = t.m;
    double tpow = std::pow(e.T, -2.0 / m);
    std::vector<std::vector<double>> g(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double tinv = s.Tinv[i][j].eval_double(y);
            g[i][j] = tpow / (m - 1) *
                      (e.T * m * (m - 1) * tinv + (m - 2) * y[i] * y[j]);
        }
    return g;
}

std::vector<std::vector<double>> hessian_inverse_from_g(
    const FundamentalTables& t, std::span<const double> y) {
    const int n = t.n;
    const int m = t.m;
    auto g = finsler_metric(t, y);
    double tval = t.T.eval_double(y);
    double f = std::pow(tval, 1.0 / m);
    // invert g numerically
    std::vector<std::vector<double>> ginv(n, std::vector<double>(n));
    for (int k = 0; k < n; ++k) {
        std::vector<double> e(n, 0.0);
        e[k] = 1.0;
        auto col = solve_dense(g, e);
        if (!col)
            throw DegenerateHessianError("finsler metric not invertible at y");
        for (int i = 0; i < n; ++i) ginv[i][k] = (*col)[i];
    }
    std::vector<std::vector<double>> tinv(n, std::vector<double>(n));
    double denom = m * (m - 1) * std::pow(f, m - 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double li = y[i] / f, lj = y[j] / f;
            tinv[i][j] =
                ((m - 1) * ginv[i][j] - (m - 2) * li * lj) / denom;
        }
    return tinv;
}

double cartan_max_abs(const FundamentalTables& t, std::span<const double> y) {
    PointEval e = eval_tables(t, y);
    if (e.T <= 0.0)
        throw SpecError("cartan probe requires T(y) > 0");
    const double u = 2.0 / t.m;
    const int n = t.n;
    double tu1 = std::pow(e.T, u - 1);
    double tu2 = std::pow(e.T, u - 2);
    double tu3 = std::pow(e.T, u - 3);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double c =
                    0.25 *
                    (u * (u - 1) * (u - 2) * tu3 * e.Ti[i] * e.Ti[j] * e.Ti[k] +
                     u * (u - 1) * tu2 *
                         (e.Tij[i][k] * e.Ti[j] + e.Ti[i] * e.Tij[j][k] +
                          e.Tij[i][j] * e.Ti[k]) +
                     u * tu1 * e.Tijk[i][j][k]);
                worst = std::max(worst, std::fabs(c));
            }
    return worst;
}

}  // namespace mroot
