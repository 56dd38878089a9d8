#include <doctest.h>

#include <cmath>
#include <random>

#include "mroot/classify.hpp"
#include "mroot/decomp.hpp"
#include "mroot/errors.hpp"
#include "mroot/finsler.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace mroot;
using namespace mroot::tests;

namespace {

PointContext exact_ctx(const MetricSpec& spec,
                       const std::vector<Scalar>& point) {
    CompiledMetric metric(spec);
    return PointContext::build(metric, point, Mode::exact);
}

Poly y(int n, int i) { return Poly::variable(n, i); }

void check_euler(const FundamentalTables& t) {
    const int n = t.n;
    Poly acc(n);
    for (int i = 1; i <= n; ++i) acc += y(n, i) * t.Ti[i - 1];
    CHECK(acc.equals(t.T.scaled(Scalar(t.m))));
    for (int i = 0; i < n; ++i) {
        Poly ti(n);
        for (int j = 1; j <= n; ++j) ti += y(n, j) * t.Tij[i][j - 1];
        CHECK(ti.equals(t.Ti[i].scaled(Scalar(t.m - 1))));
        for (int j = 0; j < n; ++j) {
            Poly tij(n);
            for (int k = 1; k <= n; ++k)
                tij += y(n, k) * t.Tijk[i][j][k - 1];
            CHECK(tij.equals(t.Tij[i][j].scaled(Scalar(t.m - 2))));
        }
    }
}

}  // namespace

TEST_CASE("fundamental tables: direct expansion for T = y1 y2 y3") {
    const auto& f = metric_fixture("bm3");
    FundamentalTables t = fundamental_tables(exact_ctx(f.spec, f.points[0]));
    CHECK(t.T.equals(y(3, 1) * y(3, 2) * y(3, 3)));
    CHECK(t.Tij[0][1].equals(y(3, 3)));                      // T_12 = y3
    CHECK(t.Tijk[0][1][2].equals(Poly::constant(3, Scalar(1))));  // T_123 = 1
}

TEST_CASE("fundamental tables: quadratic gives constant Hessian 2*delta") {
    const auto& f = metric_fixture("m2_flat");
    FundamentalTables t = fundamental_tables(exact_ctx(f.spec, f.points[0]));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Poly expect = Poly::constant(2, Scalar(i == j ? 2 : 0));
            CHECK(t.Tij[i][j].equals(expect));
        }
}

TEST_CASE("euler identities hold exactly on the whole fixture corpus") {
    for (const auto& f : metric_fixtures()) {
        CompiledMetric metric(f.spec);
        for (const auto& pt : f.points) {
            PointContext ctx = [&] {
                try {
                    return PointContext::build(metric, pt, Mode::exact);
                } catch (const TranscendentalError&) {
                    return PointContext::build(metric, pt, Mode::floating);
                }
            }();
            check_euler(fundamental_tables(ctx));
        }
    }
}

TEST_CASE("hessian determinant of the permutation cubic") {
    const auto& f = metric_fixture("bm3");
    FundamentalTables t = fundamental_tables(exact_ctx(f.spec, f.points[0]));
    SprayData s = spray(t);
    Poly expect = (y(3, 1) * y(3, 2) * y(3, 3)).scaled(Scalar(2));
    CHECK(s.det.equals(expect));
}

TEST_CASE("inverse hessian identity: sum_j T_ij adj_jk = det delta_ik") {
    for (const auto& f : metric_fixtures()) {
        CompiledMetric metric(f.spec);
        for (const auto& pt : f.points) {
            PointContext ctx = [&] {
                try {
                    return PointContext::build(metric, pt, Mode::exact);
                } catch (const TranscendentalError&) {
                    return PointContext::build(metric, pt, Mode::floating);
                }
            }();
            FundamentalTables t = fundamental_tables(ctx);
            SprayData s = spray(t);
            for (int i = 0; i < t.n; ++i)
                for (int k = 0; k < t.n; ++k) {
                    Poly acc(t.n);
                    for (int j = 0; j < t.n; ++j)
                        acc += t.Tij[i][j] * s.adj[j][k];
                    Poly expect = i == k ? s.det : Poly::zero(t.n);
                    CHECK((acc - expect).is_effectively_zero());
                }
        }
    }
}

TEST_CASE("quadratic flat metric inverts to delta/2") {
    const auto& f = metric_fixture("m2_flat");
    FundamentalTables t = fundamental_tables(exact_ctx(f.spec, f.points[0]));
    SprayData s = spray(t);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            RationalFn expect = RationalFn::constant(
                2, i == j ? Scalar::ratio(1, 2) : Scalar(0));
            CHECK(s.Tinv[i][j].equals(expect));
        }
}

TEST_CASE("degenerate hessian is reported") {
    MetricSpec spec(2, 3);
    spec.set_coefficient({1, 1, 1}, parse_expr("1", 2));
    CompiledMetric metric(spec);
    PointContext ctx = PointContext::build(metric, pt("0,0", 2), Mode::exact);
    FundamentalTables t = fundamental_tables(ctx);
    CHECK_THROWS_AS(spray(t), DegenerateHessianError);
}

TEST_CASE("finsler metric inverse: m=2 reduces to the riemannian inverse") {
    const auto& f = metric_fixture("m2_nondiag");
    CompiledMetric metric(f.spec);
    PointContext ctx =
        PointContext::build(metric, f.points[0], Mode::floating);
    FundamentalTables t = fundamental_tables(ctx);
    SprayData s = spray(t);
    std::vector<double> yv{0.7, 0.4};
    auto ginv = finsler_metric_inverse(t, s, yv);
    auto g = finsler_metric(t, yv);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            double acc = 0;
            for (int j = 0; j < 2; ++j) acc += g[i][j] * ginv[j][k];
            CHECK(std::fabs(acc - (i == k ? 1.0 : 0.0)) < 1e-12);
        }
    // the metric tensor is y-independent here: the gamma values at (0,1)
    CHECK(std::fabs(g[0][0] - 2.0) < 1e-12);
    CHECK(std::fabs(g[0][1] - 1.0) < 1e-12);
    CHECK(std::fabs(g[1][1] - 2.0) < 1e-12);
}

TEST_CASE("finsler metric inverse agrees with numeric inversion at (1,1,1)") {
    const auto& f = metric_fixture("bm3");
    CompiledMetric metric(f.spec);
    PointContext ctx =
        PointContext::build(metric, f.points[0], Mode::floating);
    FundamentalTables t = fundamental_tables(ctx);
    SprayData s = spray(t);
    std::vector<double> yv{1.0, 1.0, 1.0};
    auto by_formula = finsler_metric_inverse(t, s, yv);
    auto g = finsler_metric(t, yv);
    std::vector<std::vector<double>> byinv(3, std::vector<double>(3));
    for (int k = 0; k < 3; ++k) {
        std::vector<double> e(3, 0.0);
        e[k] = 1.0;
        auto col = solve_dense(g, e);
        REQUIRE(col.has_value());
        for (int i = 0; i < 3; ++i) byinv[i][k] = (*col)[i];
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::fabs(by_formula[i][j] - byinv[i][j]) < 1e-9);
}

TEST_CASE("inverse hessian from the metric tensor matches the adjugate") {
    for (const char* name : {"bm3", "conformal_bm"}) {
        const auto& f = metric_fixture(name);
        CompiledMetric metric(f.spec);
        PointContext ctx =
            PointContext::build(metric, f.points[0], Mode::floating);
        FundamentalTables t = fundamental_tables(ctx);
        SprayData s = spray(t);
        std::mt19937 rng(17);
        for (int probe = 0; probe < 20; ++probe) {
            auto yv = sample_cone_point(t, s.det, rng, true);
            auto remark = hessian_inverse_from_g(t, yv);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double adj_route = s.Tinv[i][j].eval_double(yv);
                    CHECK(std::fabs(remark[i][j] - adj_route) <=
                          1e-9 * std::max(1.0, std::fabs(adj_route)));
                }
        }
    }
}

TEST_CASE("constant coefficients force a vanishing spray") {
    for (const char* name : {"bm3", "n4_const", "quartic_const"}) {
        const auto& f = metric_fixture(name);
        FundamentalTables t =
            fundamental_tables(exact_ctx(f.spec, f.points[0]));
        SprayData s = spray(t);
        for (int i = 0; i < t.n; ++i) {
            CHECK(s.G[i].is_effectively_zero());
            for (int j = 0; j < t.n; ++j)
                CHECK(s.N[i][j].is_effectively_zero());
        }
    }
}

TEST_CASE("quadratic spray equals the christoffel spray exactly") {
    for (const char* name : {"m2_polar", "m2_nondiag"}) {
        const auto& f = metric_fixture(name);
        DecompSpec dspec(f.spec.dimension());
        for (const auto& [idx, e] : f.spec.coefficients())
            dspec.set_gamma(idx[0], idx[1], e);
        for (const auto& point : f.points) {
            FundamentalTables t = fundamental_tables(exact_ctx(f.spec, point));
            SprayData s = spray(t);
            LeviCivitaData lc = christoffel(dspec, point, Mode::exact);
            for (int i = 0; i < t.n; ++i)
                CHECK(s.G[i].equals(RationalFn(lc.riem_spray[i])));
        }
    }
}

TEST_CASE("conformal permutation cubic has a polynomial spray") {
    const auto& f = metric_fixture("conformal_bm");
    FundamentalTables t = fundamental_tables(exact_ctx(f.spec, f.points[0]));
    SprayData s = spray(t);
    for (int i = 0; i < 3; ++i) {
        auto p = as_polynomial(s.G[i], 2);
        REQUIRE(p.has_value());
    }
}

TEST_CASE("spray homogeneity of degree 2 at rational sample points") {
    std::mt19937 rng(31);
    for (const char* name : {"bm3", "nonberwald_cubic", "m2_nondiag"}) {
        const auto& f = metric_fixture(name);
        FundamentalTables t =
            fundamental_tables(exact_ctx(f.spec, f.points[0]));
        SprayData s = spray(t);
        const int n = t.n;
        int checked = 0;
        while (checked < 20) {
            auto yv = random_rational_y(n, rng);
            if (s.det.eval(yv).is_zero_strict()) continue;
            for (Scalar lambda : {Scalar(2), Scalar(3), Scalar(-1)}) {
                std::vector<Scalar> ly;
                for (const auto& v : yv) ly.push_back(lambda * v);
                if (s.det.eval(ly).is_zero_strict()) continue;
                for (int i = 0; i < n; ++i) {
                    Scalar lhs = s.G[i].eval(ly);
                    Scalar rhs = lambda * lambda * s.G[i].eval(yv);
                    CHECK(lhs.equals(rhs));
                }
            }
            ++checked;
        }
    }
}

TEST_CASE("nonlinear connection: derivative route equals expanded route") {
    for (const char* name :
         {"bm3", "conformal_bm", "nonberwald_cubic", "m2_nondiag"}) {
        const auto& f = metric_fixture(name);
        FundamentalTables t =
            fundamental_tables(exact_ctx(f.spec, f.points[0]));
        SprayData s = spray(t);
        for (int i = 1; i <= t.n; ++i)
            for (int j = 1; j <= t.n; ++j) {
                RationalFn expanded = nonlinear_connection_expanded(t, s, i, j);
                CHECK(s.N[i - 1][j - 1].equals(expanded));
            }
    }
}

TEST_CASE("berwald coefficients are symmetric in the lower pair") {
    const auto& f = metric_fixture("nonberwald_cubic");
    FundamentalTables t = fundamental_tables(exact_ctx(f.spec, f.points[0]));
    SprayData s = spray(t);
    for (int i = 0; i < 3; ++i)
        for (int j = 1; j <= 3; ++j)
            for (int k = j; k <= 3; ++k) {
                RationalFn a = s.N[i][j - 1].diff(k);
                RationalFn b = s.N[i][k - 1].diff(j);
                CHECK(a.equals(b));
                CHECK(s.Gjk[i][j - 1][k - 1].equals(a));
            }
}

TEST_CASE("canonical metrical connection: vanishes for constant cubics") {
    const auto& f = metric_fixture("bm3");
    FundamentalTables t = fundamental_tables(exact_ctx(f.spec, f.points[0]));
    SprayData s = spray(t);
    MetricalConnection c = cgamma_coeffs(t, s);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                CHECK(c.L[i][j][k].is_effectively_zero());
}

TEST_CASE("canonical metrical connection: christoffels for quadratics") {
    for (const char* name : {"m2_polar", "m2_nondiag"}) {
        const auto& f = metric_fixture(name);
        DecompSpec dspec(f.spec.dimension());
        for (const auto& [idx, e] : f.spec.coefficients())
            dspec.set_gamma(idx[0], idx[1], e);
        const auto& point = f.points[0];
        FundamentalTables t = fundamental_tables(exact_ctx(f.spec, point));
        SprayData s = spray(t);
        MetricalConnection c = cgamma_coeffs(t, s);
        LeviCivitaData lc = christoffel(dspec, point, Mode::exact);
        for (int i = 0; i < t.n; ++i)
            for (int j = 0; j < t.n; ++j)
                for (int k = 0; k < t.n; ++k) {
                    RationalFn expect =
                        RationalFn::constant(t.n, lc.chris[i][j][k]);
                    CHECK(c.L[i][j][k].equals(expect));
                }
    }
}

TEST_CASE("T^i_jk transvection reduces through the euler identities") {
    const auto& f = metric_fixture("nonberwald_cubic");
    FundamentalTables t = fundamental_tables(exact_ctx(f.spec, f.points[0]));
    SprayData s = spray(t);
    MetricalConnection c = cgamma_coeffs(t, s);
    const int n = t.n;
    Scalar factor = Scalar::ratio((t.m - 1) * (t.m - 2), 2);
    for (int i = 0; i < n; ++i) {
        RationalFn lhs = RationalFn::zero(n);
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k)
                lhs += (Poly::variable(n, j) * Poly::variable(n, k)) *
                       c.Tup[i][j - 1][k - 1];
        RationalFn rhs = RationalFn::zero(n);
        for (int h = 0; h < n; ++h)
            rhs += s.Tinv[i][h] * RationalFn(t.Ti[h]);
        CHECK(lhs.equals(rhs.scaled(factor)));
    }
}

TEST_CASE("covariant derivative of T_ijk: zero for constant coefficients") {
    const auto& f = metric_fixture("bm3");
    FundamentalTables t = fundamental_tables(exact_ctx(f.spec, f.points[0]));
    SprayData s = spray(t);
    MetricalConnection c = cgamma_coeffs(t, s);
    CovDerivT3 cov = h_cov_deriv_T3(t, s, c);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                CHECK(cov.cov0[i][j][k].is_effectively_zero());
                for (int l = 0; l < 3; ++l)
                    CHECK(cov.cov[i][j][k][l].is_effectively_zero());
            }
}

TEST_CASE("covariant derivative of T_ijk: conformal cubic is fully flat") {
    const auto& f = metric_fixture("conformal_bm");
    FundamentalTables t = fundamental_tables(exact_ctx(f.spec, f.points[0]));
    SprayData s = spray(t);
    MetricalConnection c = cgamma_coeffs(t, s);
    CovDerivT3 cov = h_cov_deriv_T3(t, s, c);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    CHECK(cov.cov[i][j][k][l].is_effectively_zero());
}

TEST_CASE("covariant derivative of T_ijk: nonzero for the x-dependent cubic") {
    const auto& f = metric_fixture("nonberwald_cubic");
    FundamentalTables t = fundamental_tables(exact_ctx(f.spec, f.points[0]));
    SprayData s = spray(t);
    MetricalConnection c = cgamma_coeffs(t, s);
    CovDerivT3 cov = h_cov_deriv_T3(t, s, c);
    bool some_nonzero = false;
    for (int i = 0; i < 3 && !some_nonzero; ++i)
        for (int j = 0; j < 3 && !some_nonzero; ++j)
            for (int k = 0; k < 3 && !some_nonzero; ++k)
                for (int l = 0; l < 3; ++l)
                    if (!cov.cov[i][j][k][l].is_effectively_zero()) {
                        some_nonzero = true;
                        break;
                    }
    CHECK(some_nonzero);
}

TEST_CASE("quartic metric runs the full delta-derivative path") {
    const auto& f = metric_fixture("quartic_x");
    FundamentalTables t = fundamental_tables(exact_ctx(f.spec, f.points[0]));
    SprayData s = spray(t);
    MetricalConnection c = cgamma_coeffs(t, s);
    CovDerivT3 cov = h_cov_deriv_T3(t, s, c);
    check_euler(t);
    // symmetry of T_{ijk|l} in the first three slots holds by construction;
    // spot-check the transvection against an explicit contraction
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                RationalFn acc = RationalFn::zero(2);
                for (int l = 1; l <= 2; ++l)
                    acc += Poly::variable(2, l) * cov.cov[i][j][k][l - 1];
                CHECK(acc.equals(cov.cov0[i][j][k]));
            }
}

TEST_CASE("cartan probe: quadratics vanish, genuine cubics do not") {
    const auto& quad = metric_fixture("m2_nondiag");
    CompiledMetric qmetric(quad.spec);
    PointContext qctx =
        PointContext::build(qmetric, quad.points[0], Mode::floating);
    FundamentalTables qt = fundamental_tables(qctx);
    SprayData qs = spray(qt);
    std::mt19937 rng(37);
    auto yq = sample_cone_point(qt, qs.det, rng, true);
    CHECK(cartan_max_abs(qt, yq) < 1e-12);

    const auto& cubic = metric_fixture("bm3");
    CompiledMetric cmetric(cubic.spec);
    PointContext cctx =
        PointContext::build(cmetric, cubic.points[0], Mode::floating);
    FundamentalTables ct = fundamental_tables(cctx);
    SprayData cs = spray(ct);
    auto yc = sample_cone_point(ct, cs.det, rng, true);
    CHECK(cartan_max_abs(ct, yc) > 1e-3);
}
