#include "mroot/classify.hpp"

#include <future>
#include <random>

#include "mroot/errors.hpp"

namespace mroot {

const char* verdict_str(Verdict v) {
    switch (v) {
        case Verdict::yes:
            return "yes";
        case Verdict::no:
            return "no";
        default:
            return "unknown";
    }
}

namespace {

Witness make_witness(std::vector<int> index, const Poly& residual,
                     bool dump) {
    Witness w;
    w.index = std::move(index);
    if (!residual.is_zero()) {
        Poly lead(residual.nvars());
        lead.add_term(residual.leading_monomial(),
                      residual.leading_coefficient());
        w.residual_leading = lead.str();
        if (dump) w.residual_full = residual.str();
    }
    return w;
}

}  // namespace

BerwaldResult berwald_at(const SprayData& s, bool dump_witness) {
    BerwaldResult r;
    r.by_polynomiality = true;
    std::optional<Witness> poly_witness;
    std::vector<Poly> polys;
    for (int i = 0; i < s.n; ++i) {
        auto p = as_polynomial(s.G[i], 2);
        if (p) {
            polys.push_back(std::move(*p));
            continue;
        }
        r.by_polynomiality = false;
        if (!poly_witness) {
            Poly rem(s.G[i].nvars());
            exact_divide(s.G[i].num(), s.G[i].den(), &rem);
            poly_witness = make_witness({i + 1}, rem, dump_witness);
        }
    }
    r.by_flat_derivative = true;
    std::optional<Witness> deriv_witness;
    for (int i = 0; i < s.n && r.by_flat_derivative; ++i)
        for (int j = 0; j < s.n && r.by_flat_derivative; ++j)
            for (int k = j; k < s.n && r.by_flat_derivative; ++k)
                for (int l = 1; l <= s.n; ++l) {
                    RationalFn d = s.Gjk[i][j][k].diff(l);
                    if (!d.is_effectively_zero()) {
                        r.by_flat_derivative = false;
                        deriv_witness = make_witness({i + 1, j + 1, k + 1, l},
                                                     d.num(), dump_witness);
                        break;
                    }
                }
    if (r.by_polynomiality != r.by_flat_derivative)
        throw InvariantViolationError(
            "berwald criteria disagree: spray polynomiality vs flat "
            "G^i_jk derivative");
    r.berwald = r.by_polynomiality;
    if (r.berwald)
        r.G_polys = std::move(polys);
    else
        r.witness = poly_witness ? poly_witness : deriv_witness;
    return r;
}

LandsbergResult landsberg_at(const CovDerivT3& cov, bool dump_witness) {
    LandsbergResult r;
    r.landsberg = true;
    const int n = static_cast<int>(cov.cov0.size());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const RationalFn& v = cov.cov0[i][j][k];
                if (!v.is_effectively_zero()) {
                    r.landsberg = false;
                    if (!r.witness)
                        r.witness = make_witness({i + 1, j + 1, k + 1},
                                                 v.num(), dump_witness);
                }
            }
    return r;
}

bool landsberg_berwald_mechanism_holds(const FundamentalTables& t,
                                       const SprayData& s) {
    if (t.m != 3)
        throw SpecError("the Landsberg-Berwald mechanism check is cubic-only");
    const int n = t.n;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            for (int k = j; k <= n; ++k) {
                // T_{ijk,l} y^l - N^h_i T_hjk - N^h_j T_ihk - N^h_k T_ijh
                Poly txl(n);
                for (int l = 1; l <= n; ++l)
                    txl += t.Tx[l - 1].diff(i).diff(j).diff(k) *
                           Poly::variable(n, l);
                RationalFn trans(txl);
                for (int h = 0; h < n; ++h) {
                    trans -= t.Tijk[h][j - 1][k - 1] * s.N[h][i - 1];
                    trans -= t.Tijk[i - 1][h][k - 1] * s.N[h][j - 1];
                    trans -= t.Tijk[i - 1][j - 1][h] * s.N[h][k - 1];
                }
                for (int l = 1; l <= n; ++l) {
                    RationalFn lhs = trans.diff(l);
                    RationalFn rhs =
                        RationalFn(t.Tx[l - 1].diff(i).diff(j).diff(k));
                    for (int h = 0; h < n; ++h) {
                        rhs -= t.Tijk[h][j - 1][k - 1] *
                               s.Gjk[h][i - 1][l - 1];
                        rhs -= t.Tijk[i - 1][h][k - 1] *
                               s.Gjk[h][j - 1][l - 1];
                        rhs -= t.Tijk[i - 1][j - 1][h] *
                               s.Gjk[h][k - 1][l - 1];
                    }
                    if (!lhs.equals(rhs)) return false;
                }
            }
    return true;
}

PointClassification classify_point_context(const PointContext& ctx,
                                            const ClassifyOptions& opts) {
    PointClassification pc;
    pc.point.assign(ctx.point().begin(), ctx.point().end());
    pc.mode = ctx.mode();
    FundamentalTables tables = fundamental_tables(ctx);
    SprayData s = spray(tables);
    pc.berwald_detail = berwald_at(s, opts.dump_witness);
    pc.berwald = pc.berwald_detail.berwald ? Verdict::yes : Verdict::no;
    MetricalConnection conn = cgamma_coeffs(tables, s);
    CovDerivT3 cov = h_cov_deriv_T3(tables, s, conn);
    pc.landsberg_detail = landsberg_at(cov, opts.dump_witness);
    pc.landsberg = pc.landsberg_detail.landsberg ? Verdict::yes : Verdict::no;

    if (pc.berwald == Verdict::yes && pc.landsberg != Verdict::yes)
        throw InvariantViolationError("Berwald point fails the Landsberg test");
    if (ctx.degree() == 3 && pc.landsberg == Verdict::yes &&
        pc.berwald != Verdict::yes)
        throw InvariantViolationError(
            "cubic Landsberg point fails the Berwald test");
    if (ctx.degree() == 3 && opts.check_mechanism) {
        pc.mechanism_checked = true;
        pc.mechanism_ok = landsberg_berwald_mechanism_holds(tables, s);
        if (!pc.mechanism_ok)
            throw InvariantViolationError(
                "Landsberg-Berwald derivative mechanism identity failed");
    }
    return pc;
}

namespace {

PointClassification classify_point(const CompiledMetric& metric,
                                   const std::vector<Scalar>& point,
                                   const ClassifyOptions& opts) {
    PointClassification pc;
    pc.point = point;
    pc.mode = opts.mode;
    try {
        bool fell_back = false;
        PointContext ctx = [&] {
            if (opts.mode == Mode::exact) {
                try {
                    return PointContext::build(metric, point, Mode::exact);
                } catch (const TranscendentalError&) {
                    if (!opts.allow_float_fallback) throw;
                    fell_back = true;
                    return PointContext::build(metric, point, Mode::floating);
                }
            }
            return PointContext::build(metric, point, Mode::floating);
        }();
        PointClassification classified = classify_point_context(ctx, opts);
        classified.mode_fell_back = fell_back;
        return classified;
    } catch (const InvariantViolationError&) {
        throw;
    } catch (const Error& e) {
        pc.degenerate = true;
        pc.error = e.what();
        pc.berwald = Verdict::unknown;
        pc.landsberg = Verdict::unknown;
    }
    return pc;
}

}  // namespace

Verdict riemannian_verdict(const CompiledMetric& metric,
                           std::span<const std::vector<Scalar>> points,
                           double* cartan_max_out) {
    if (cartan_max_out) *cartan_max_out = 0.0;
    if (metric.degree() == 2) return Verdict::yes;
    const int n = metric.dimension();
    std::mt19937 rng(0xca47a9u);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    double worst = 0.0;
    bool sampled = false;
    for (const auto& pt : points) {
        PointContext ctx;
        try {
            ctx = PointContext::build(metric, pt, Mode::floating);
        } catch (const Error&) {
            continue;
        }
        FundamentalTables t = fundamental_tables(ctx);
        int found = 0;
        for (int attempt = 0; attempt < 200 && found < 5; ++attempt) {
            std::vector<double> y(n);
            for (double& v : y) v = dist(rng);
            try {
                double tval = t.T.eval_double(y);
                if (tval <= 1e-3) continue;
                worst = std::max(worst, cartan_max_abs(t, y));
                sampled = true;
                ++found;
            } catch (const Error&) {
                continue;
            }
        }
    }
    if (cartan_max_out) *cartan_max_out = worst;
    if (!sampled) return Verdict::unknown;
    return worst <= 1e-8 ? Verdict::yes : Verdict::no;
}

ClassificationReport classify(const CompiledMetric& metric,
                              std::span<const std::vector<Scalar>> points,
                              const ClassifyOptions& opts) {
    ClassificationReport report;
    report.n = metric.dimension();
    report.m = metric.degree();
    report.riemannian =
        riemannian_verdict(metric, points, &report.cartan_max);

    if (opts.parallel && points.size() > 1) {
        Tolerance tol = ambient_tolerance();
        std::vector<std::future<PointClassification>> futures;
        futures.reserve(points.size());
        for (const auto& pt : points)
            futures.push_back(std::async(std::launch::async, [&, pt] {
                ToleranceScope scope(tol);
                return classify_point(metric, pt, opts);
            }));
        for (auto& f : futures) report.points.push_back(f.get());
    } else {
        for (const auto& pt : points)
            report.points.push_back(classify_point(metric, pt, opts));
    }

    fill_verdict_conjunctions(report);
    return report;
}

void fill_verdict_conjunctions(ClassificationReport& report) {
    auto conjunction = [&](auto pick) {
        Verdict v = Verdict::unknown;
        bool any = false;
        for (const auto& pc : report.points) {
            Verdict p = pick(pc);
            if (p == Verdict::unknown) return Verdict::unknown;
            any = true;
            if (p == Verdict::no) v = Verdict::no;
        }
        if (!any) return Verdict::unknown;
        return v == Verdict::no ? Verdict::no : Verdict::yes;
    };
    report.berwald_all =
        conjunction([](const PointClassification& p) { return p.berwald; });
    report.landsberg_all =
        conjunction([](const PointClassification& p) { return p.landsberg; });
}

}  // namespace mroot
