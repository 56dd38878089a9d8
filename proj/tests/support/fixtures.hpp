#ifndef MROOT_TESTS_FIXTURES_HPP
#define MROOT_TESTS_FIXTURES_HPP

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mroot/decomp.hpp"
#include "mroot/metric.hpp"
#include "mroot/specfile.hpp"

namespace mroot::tests {

// Shorthand: parse "v1,v2,..." into an exact point.
std::vector<Scalar> pt(const std::string& csv, int n);

struct MetricFixture {
    std::string name;
    MetricSpec spec;
    std::vector<std::vector<Scalar>> points;
    std::optional<bool> expect_berwald;
    std::optional<bool> expect_landsberg;
    std::optional<bool> expect_riemannian;
};

struct DecompFixture {
    std::string name;
    DecompSpec spec;
    std::vector<std::vector<Scalar>> points;
    std::optional<bool> expect_parallel;
};

// The named corpus used across the test suites.
const std::vector<MetricFixture>& metric_fixtures();
const std::vector<DecompFixture>& decomp_fixtures();

// Individual fixtures by name (throws when missing).
const MetricFixture& metric_fixture(const std::string& name);
const DecompFixture& decomp_fixture(const std::string& name);

// Randomized unit-norm decomposable families; specs are exactly unit-norm
// by construction, with no a-priori parallelism expectation.
std::vector<DecompFixture> random_decomp_families(int per_family,
                                                  unsigned seed);

// Random cubic spec: the base permutation term plus a few x-linear
// perturbations; mostly neither Berwald nor Landsberg.
MetricSpec random_cubic_spec(std::mt19937& rng);

}  // namespace mroot::tests

#endif
