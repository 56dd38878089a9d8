// Command line front end: classification, decomposition verification,
// geodesic integration and spray printing for m-th root metrics.

#include <fstream>
#include <sstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mroot/classify.hpp"
#include "mroot/decomp.hpp"
#include "mroot/errors.hpp"
#include "mroot/geodesic.hpp"
#include "mroot/report.hpp"
#include "mroot/specfile.hpp"

namespace {

using namespace mroot;

struct CommonArgs {
    std::string spec_path;
    std::vector<std::string> point_args;
    std::string mode;
    double eps_abs = -1.0;
    double eps_rel = -1.0;
    bool json = false;
    bool dump_witness = false;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_points = true) {
    cmd->add_option("specfile", args.spec_path, "metric spec file (JSON)")
        ->required();
    if (with_points)
        cmd->add_option("--point", args.point_args,
                        "base point \"v1,...,vn\" (repeatable; overrides the "
                        "spec file's points)");
    cmd->add_option("--mode", args.mode, "exact|float (default: spec file)");
    cmd->add_option("--eps-abs", args.eps_abs, "absolute zero tolerance");
    cmd->add_option("--eps-rel", args.eps_rel, "relative zero tolerance");
    cmd->add_flag("--json", args.json, "machine-readable report");
    cmd->add_option("--out", args.out_path, "write the report to a file");
}

struct Resolved {
    LoadedSpec spec;
    std::vector<std::vector<Scalar>> points;
    Mode mode;
    Tolerance tol;
};

Resolved resolve(const CommonArgs& args, bool need_points) {
    Resolved r{load_spec_file(args.spec_path), {}, Mode::exact, Tolerance{}};
    r.mode = r.spec.mode;
    if (args.mode == "exact")
        r.mode = Mode::exact;
    else if (args.mode == "float")
        r.mode = Mode::floating;
    else if (!args.mode.empty())
        throw SpecError("--mode must be exact or float");
    r.tol = r.spec.tolerance;
    if (args.eps_abs >= 0) r.tol.eps_abs = args.eps_abs;
    if (args.eps_rel >= 0) r.tol.eps_rel = args.eps_rel;
    if (!args.point_args.empty()) {
        for (const auto& p : args.point_args)
            r.points.push_back(parse_point(p, r.spec.dimension()));
    } else {
        r.points = r.spec.points;
    }
    if (need_points && r.points.empty())
        throw SpecError(
            "no base points: add a \"points\" list to the spec file or pass "
            "--point");
    return r;
}

void emit(const CommonArgs& args, const std::string& text) {
    if (args.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(args.out_path);
    if (!out) throw SpecError("cannot open output file: " + args.out_path);
    out << text;
}

int run_classify(const CommonArgs& args, bool normalize) {
    Resolved r = resolve(args, true);
    ToleranceScope scope(r.tol);
    ClassifyOptions opts;
    opts.mode = r.mode;
    opts.dump_witness = args.dump_witness;
    ClassificationReport report;
    if (r.spec.is_decomposable()) {
        report = classify_decomposable(r.spec.decomp(), r.points, opts,
                                       normalize);
    } else {
        CompiledMetric metric(r.spec.metric());
        report = classify(metric, r.points, opts);
    }
    if (args.json)
        emit(args, classification_json(report).dump(2) + "\n");
    else
        emit(args, render_classification_text(report));
    for (const auto& pc : report.points)
        if (pc.degenerate) return 2;
    return 0;
}

int run_verify_decomp(const CommonArgs& args, bool normalize) {
    Resolved r = resolve(args, true);
    ToleranceScope scope(r.tol);
    if (!r.spec.is_decomposable())
        throw SpecError("verify-decomp needs a decomposable spec file");
    TheoremOptions opts;
    opts.mode = r.mode;
    opts.normalize_b = normalize;
    TheoremReport report = theorem_check(r.spec.decomp(), r.points, opts);
    if (args.json)
        emit(args, theorem_json(report).dump(2) + "\n");
    else
        emit(args, render_theorem_text(report));
    return 0;
}

int run_geodesic(const CommonArgs& args, const std::string& x0_arg,
                 const std::string& y0_arg, double dt, int steps) {
    Resolved r = resolve(args, false);
    ToleranceScope scope(r.tol);
    const MetricSpec spec =
        r.spec.is_decomposable() ? to_cubic(r.spec.decomp()) : r.spec.metric();
    const int n = spec.dimension();
    std::vector<double> x0, y0;
    for (const Scalar& v : parse_point(x0_arg, n)) x0.push_back(v.to_double());
    for (const Scalar& v : parse_point(y0_arg, n)) y0.push_back(v.to_double());
    CompiledMetric metric(spec);
    Trajectory traj = integrate(metric, x0, y0, dt, steps);

    std::ostringstream body;
    write_trajectory(traj, body);
    emit(args, body.str());

    double drift = invariant_drift(traj);
    if (args.json) {
        nlohmann::ordered_json j;
        j["schema_version"] = kReportSchemaVersion;
        j["command"] = "geodesic";
        j["dt"] = dt;
        j["steps"] = steps;
        j["F_initial"] = traj.F.front();
        j["F_drift"] = drift;
        std::cerr << j.dump(2) << "\n";
    } else {
        std::cerr << "F(start) = " << double_str(traj.F.front())
                  << ", max |F - F(start)| = " << double_str(drift) << "\n";
    }
    return 0;
}

int run_spray(const CommonArgs& args) {
    Resolved r = resolve(args, true);
    ToleranceScope scope(r.tol);
    const MetricSpec spec =
        r.spec.is_decomposable() ? to_cubic(r.spec.decomp()) : r.spec.metric();
    CompiledMetric metric(spec);
    std::ostringstream out;
    for (const auto& pt : r.points) {
        PointContext ctx = [&] {
            try {
                return PointContext::build(metric, pt, r.mode);
            } catch (const TranscendentalError&) {
                return PointContext::build(metric, pt, Mode::floating);
            }
        }();
        FundamentalTables tables = fundamental_tables(ctx);
        SprayData s = spray(tables);
        MetricalConnection conn = cgamma_coeffs(tables, s);
        const int n = s.n;
        out << "point " << point_str(pt) << "\n";
        for (int i = 0; i < n; ++i)
            out << "G^" << i + 1 << " = " << canonical_fn_str(s.G[i]) << "\n";
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out << "N^" << i + 1 << "_" << j + 1 << " = "
                    << canonical_fn_str(s.N[i][j]) << "\n";
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = j; k < n; ++k)
                    out << "G^" << i + 1 << "_" << j + 1 << k + 1 << " = "
                        << canonical_fn_str(s.Gjk[i][j][k]) << "\n";
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = j; k < n; ++k)
                    out << "L^" << i + 1 << "_" << j + 1 << k + 1 << " = "
                        << canonical_fn_str(conn.L[i][j][k]) << "\n";
    }
    emit(args, out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "differential geometry of m-th root Finsler metrics: sprays, "
        "Berwald/Landsberg classification, decomposable metrics, geodesics"};
    app.require_subcommand(1);

    CommonArgs classify_args;
    bool classify_normalize_b = false;
    auto* classify_cmd =
        app.add_subcommand("classify",
                           "Riemannian/Berwald/Landsberg verdicts per point");
    add_common(classify_cmd, classify_args);
    classify_cmd->add_flag("--dump-witness", classify_args.dump_witness,
                           "include full residual polynomials in witnesses");
    classify_cmd->add_flag("--normalize-b", classify_normalize_b,
                           "rescale a decomposable spec's b to unit norm");

    CommonArgs verify_args;
    bool normalize_b_flag = false;
    auto* verify_cmd = app.add_subcommand(
        "verify-decomp",
        "parallel-1-form equivalence and identity suite for T = a*b");
    add_common(verify_cmd, verify_args);
    verify_cmd->add_flag("--normalize-b", normalize_b_flag,
                         "rescale b to unit norm at each point");

    CommonArgs geo_args;
    std::string x0_arg, y0_arg;
    double dt = 1e-3;
    int steps = 1000;
    auto* geo_cmd =
        app.add_subcommand("geodesic", "integrate the geodesic equation");
    add_common(geo_cmd, geo_args, false);
    geo_cmd->add_option("--x0", x0_arg, "start point \"v1,...,vn\"")
        ->required();
    geo_cmd->add_option("--y0", y0_arg, "start velocity \"v1,...,vn\"")
        ->required();
    geo_cmd->add_option("--dt", dt, "step size (default 1e-3)");
    geo_cmd->add_option("--steps", steps, "number of steps (default 1000)");

    CommonArgs spray_args;
    auto* spray_cmd = app.add_subcommand(
        "spray", "print G^i, N^i_j, G^i_jk, L^i_jk at the given points");
    add_common(spray_cmd, spray_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify_cmd->parsed())
            return run_classify(classify_args, classify_normalize_b);
        if (verify_cmd->parsed())
            return run_verify_decomp(verify_args, normalize_b_flag);
        if (geo_cmd->parsed())
            return run_geodesic(geo_args, x0_arg, y0_arg, dt, steps);
        if (spray_cmd->parsed()) return run_spray(spray_args);
    } catch (const mroot::InvariantViolationError& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 1;
    } catch (const mroot::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
