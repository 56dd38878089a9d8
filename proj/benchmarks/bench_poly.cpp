#include <benchmark/benchmark.h>

#include <random>

#include "mroot/rational_fn.hpp"

using namespace mroot;

namespace {

Poly random_poly(std::mt19937& rng, int nvars, int deg, int terms) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> slot(0, nvars - 1);
    Poly p(nvars);
    for (int t = 0; t < terms; ++t) {
        Monomial m(nvars);
        for (int d = 0; d < deg; ++d) {
            int s = slot(rng);
            m.set_exponent(s, m.exponent(s) + 1);
        }
        int c = num(rng);
        p.add_term(m, Scalar(c == 0 ? 1 : c));
    }
    return p;
}

}  // namespace

static void BM_PolyMul(benchmark::State& state) {
    std::mt19937 rng(1);
    Poly a = random_poly(rng, 3, static_cast<int>(state.range(0)), 20);
    Poly b = random_poly(rng, 3, static_cast<int>(state.range(0)), 20);
    for (auto _ : state) {
        Poly p = a * b;
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_PolyMul)->Arg(3)->Arg(6)->Arg(9);

static void BM_ExactDivide(benchmark::State& state) {
    std::mt19937 rng(2);
    Poly p = random_poly(rng, 3, static_cast<int>(state.range(0)), 15);
    Poly q = random_poly(rng, 3, 2, 6);
    Poly pq = p * q;
    for (auto _ : state) {
        auto quot = exact_divide(pq, q);
        benchmark::DoNotOptimize(quot);
    }
}
BENCHMARK(BM_ExactDivide)->Arg(3)->Arg(6);

static void BM_RationalDiff(benchmark::State& state) {
    std::mt19937 rng(3);
    Poly p = random_poly(rng, 3, 5, 15);
    Poly q = random_poly(rng, 3, 3, 10);
    if (q.is_zero()) q = Poly::constant(3, Scalar(1));
    RationalFn f(p, q);
    for (auto _ : state) {
        RationalFn d = f.diff(1);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_RationalDiff);
