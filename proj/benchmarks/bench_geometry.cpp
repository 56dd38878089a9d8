#include <benchmark/benchmark.h>

#include "mroot/classify.hpp"
#include "mroot/geodesic.hpp"

using namespace mroot;

namespace {

MetricSpec conformal_bm() {
    MetricSpec spec(3, 3);
    spec.set_coefficient({1, 2, 3}, parse_expr("exp(x1)/6", 3));
    return spec;
}

std::vector<Scalar> origin3() {
    return {Scalar(0), Scalar(0), Scalar(0)};
}

}  // namespace

static void BM_SprayExact(benchmark::State& state) {
    CompiledMetric metric(conformal_bm());
    PointContext ctx = PointContext::build(metric, origin3(), Mode::exact);
    for (auto _ : state) {
        FundamentalTables t = fundamental_tables(ctx);
        SprayData s = spray(t);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_SprayExact);

static void BM_ClassifyPoint(benchmark::State& state) {
    CompiledMetric metric(conformal_bm());
    std::vector<std::vector<Scalar>> pts{origin3()};
    ClassifyOptions opts;
    opts.parallel = false;
    for (auto _ : state) {
        ClassificationReport r = classify(metric, pts, opts);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_ClassifyPoint);

static void BM_GeodesicSteps(benchmark::State& state) {
    CompiledMetric metric(conformal_bm());
    std::vector<double> x0{0.0, 0.0, 0.0}, y0{1.0, 1.0, 1.0};
    for (auto _ : state) {
        Trajectory t =
            integrate(metric, x0, y0, 1e-3, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_GeodesicSteps)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
