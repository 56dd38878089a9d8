#include "support/fixtures.hpp"

#include "mroot/errors.hpp"

namespace mroot::tests {

std::vector<Scalar> pt(const std::string& csv, int n) {
    return parse_point(csv, n);
}

namespace {

Expr ex(const std::string& text, int n) { return parse_expr(text, n); }

MetricSpec cubic_bm3() {
    MetricSpec spec(3, 3);
    spec.set_coefficient({1, 2, 3}, ex("1/6", 3));
    return spec;
}

MetricSpec cubic_conformal_bm() {
    MetricSpec spec(3, 3);
    spec.set_coefficient({1, 2, 3}, ex("exp(x1)/6", 3));
    return spec;
}

MetricSpec cubic_poly_conformal() {
    MetricSpec spec(3, 3);
    spec.set_coefficient({1, 2, 3}, ex("(1 + x1^2)/6", 3));
    return spec;
}

MetricSpec cubic_nonberwald() {
    MetricSpec spec(3, 3);
    spec.set_coefficient({1, 2, 3}, ex("1/6", 3));
    spec.set_coefficient({1, 1, 2}, ex("x2/6", 3));
    return spec;
}

MetricSpec quadratic_flat() {
    MetricSpec spec(2, 2);
    spec.set_coefficient({1, 1}, ex("1", 2));
    spec.set_coefficient({2, 2}, ex("1", 2));
    return spec;
}

MetricSpec quadratic_polar() {
    MetricSpec spec(2, 2);
    spec.set_coefficient({1, 1}, ex("1", 2));
    spec.set_coefficient({2, 2}, ex("x1^2", 2));
    return spec;
}

MetricSpec quadratic_nondiag() {
    MetricSpec spec(2, 2);
    spec.set_coefficient({1, 1}, ex("1 + x2^2", 2));
    spec.set_coefficient({1, 2}, ex("x2", 2));
    spec.set_coefficient({2, 2}, ex("2", 2));
    return spec;
}

MetricSpec quadratic_sphere() {
    MetricSpec spec(2, 2);
    spec.set_coefficient({1, 1}, ex("1", 2));
    spec.set_coefficient({2, 2}, ex("sin(x1)^2", 2));
    return spec;
}

MetricSpec quadratic_diag_poly() {
    MetricSpec spec(2, 2);
    spec.set_coefficient({1, 1}, ex("1 + x2^2", 2));
    spec.set_coefficient({2, 2}, ex("1 + x1^2", 2));
    return spec;
}

MetricSpec cubic_n4_const() {
    MetricSpec spec(4, 3);
    spec.set_coefficient({1, 2, 3}, ex("1/6", 4));
    spec.set_coefficient({1, 2, 4}, ex("1/6", 4));
    spec.set_coefficient({1, 3, 4}, ex("1/6", 4));
    spec.set_coefficient({2, 3, 4}, ex("1/6", 4));
    return spec;
}

MetricSpec quartic_const() {
    MetricSpec spec(3, 4);
    spec.set_coefficient({1, 1, 1, 1}, ex("1", 3));
    spec.set_coefficient({2, 2, 2, 2}, ex("1", 3));
    spec.set_coefficient({3, 3, 3, 3}, ex("1", 3));
    return spec;
}

MetricSpec quartic_x() {
    MetricSpec spec(2, 4);
    spec.set_coefficient({1, 1, 1, 1}, ex("1", 2));
    spec.set_coefficient({2, 2, 2, 2}, ex("1", 2));
    spec.set_coefficient({1, 1, 2, 2}, ex("x1/6", 2));
    return spec;
}

DecompSpec decomp_flat() {
    DecompSpec spec(3);
    for (int i = 1; i <= 3; ++i) spec.set_gamma(i, i, ex("1", 3));
    spec.set_b(1, ex("1", 3));
    return spec;
}

DecompSpec decomp_product() {
    DecompSpec spec(3);
    spec.set_gamma(1, 1, ex("1", 3));
    spec.set_gamma(2, 2, ex("(1 + x3^2)^2", 3));
    spec.set_gamma(3, 3, ex("1", 3));
    spec.set_b(1, ex("1", 3));
    return spec;
}

DecompSpec decomp_product_mixed() {
    DecompSpec spec(3);
    spec.set_gamma(1, 1, ex("1", 3));
    spec.set_gamma(2, 2, ex("1 + x3^2", 3));
    spec.set_gamma(3, 3, ex("1 + x2^2", 3));
    spec.set_b(1, ex("1", 3));
    return spec;
}

DecompSpec decomp_rotating() {
    DecompSpec spec(3);
    for (int i = 1; i <= 3; ++i) spec.set_gamma(i, i, ex("1", 3));
    spec.set_b(1, ex("cos(x3)", 3));
    spec.set_b(2, ex("sin(x3)", 3));
    return spec;
}

DecompSpec decomp_conformal() {
    DecompSpec spec(3);
    for (int i = 1; i <= 3; ++i) spec.set_gamma(i, i, ex("exp(2*x1)", 3));
    spec.set_b(1, ex("exp(x1)", 3));
    return spec;
}

DecompSpec decomp_warped() {
    DecompSpec spec(3);
    spec.set_gamma(1, 1, ex("(1 + x2^2)^2", 3));
    spec.set_gamma(2, 2, ex("1", 3));
    spec.set_gamma(3, 3, ex("1", 3));
    spec.set_b(1, ex("1 + x2^2", 3));
    return spec;
}

DecompSpec decomp_n2() {
    DecompSpec spec(2);
    spec.set_gamma(1, 1, ex("1", 2));
    spec.set_gamma(2, 2, ex("1 + x2^2", 2));
    spec.set_b(1, ex("1", 2));
    return spec;
}

DecompSpec decomp_n4() {
    DecompSpec spec(4);
    for (int i = 1; i <= 4; ++i) spec.set_gamma(i, i, ex("1", 4));
    spec.set_b(1, ex("1", 4));
    return spec;
}

}  // namespace

const std::vector<MetricFixture>& metric_fixtures() {
    static const std::vector<MetricFixture> fixtures = [] {
        std::vector<MetricFixture> fs;
        fs.push_back({"bm3", cubic_bm3(),
                      {pt("0,0,0", 3), pt("1/2,-1/3,2", 3)},
                      true, true, false});
        fs.push_back({"conformal_bm", cubic_conformal_bm(),
                      {pt("0,0,0", 3), pt("0,1,2", 3), pt("1/4,0,0", 3),
                       pt("1/2,-1,1", 3), pt("1,2,3", 3)},
                      true, true, false});
        fs.push_back({"poly_conformal_bm", cubic_poly_conformal(),
                      {pt("0,0,0", 3), pt("1/2,0,0", 3), pt("1,2,3", 3),
                       pt("-2/3,1,0", 3), pt("3,0,1", 3)},
                      true, true, false});
        fs.push_back({"m2_flat", quadratic_flat(),
                      {pt("0,0", 2), pt("1,2", 2)}, true, true, true});
        fs.push_back({"m2_polar", quadratic_polar(),
                      {pt("2,0", 2), pt("1,1", 2), pt("1/2,3", 2)},
                      true, true, true});
        fs.push_back({"m2_nondiag", quadratic_nondiag(),
                      {pt("0,1", 2), pt("1,1/2", 2), pt("-1,2", 2)},
                      true, true, true});
        fs.push_back({"m2_sphere", quadratic_sphere(),
                      {pt("1/2,0", 2), pt("1,1", 2)}, true, true, true});
        fs.push_back({"m2_diag_poly", quadratic_diag_poly(),
                      {pt("1,1/2", 2), pt("-1/3,2", 2)}, true, true, true});
        fs.push_back({"nonberwald_cubic", cubic_nonberwald(),
                      {pt("1/2,1/3,-1", 3), pt("0,2,1", 3), pt("1,1,1", 3)},
                      false, false, false});
        fs.push_back({"n4_const", cubic_n4_const(),
                      {pt("0,0,0,0", 4), pt("1,2,3,4", 4)},
                      true, true, false});
        fs.push_back({"quartic_const", quartic_const(),
                      {pt("0,0,0", 3), pt("1,-2,3", 3)},
                      true, true, false});
        fs.push_back({"quartic_x", quartic_x(),
                      {pt("1/2,0", 2), pt("1,1", 2)},
                      std::nullopt, std::nullopt, false});
        return fs;
    }();
    return fixtures;
}

const std::vector<DecompFixture>& decomp_fixtures() {
    static const std::vector<DecompFixture> fixtures = [] {
        std::vector<DecompFixture> fs;
        fs.push_back({"flat", decomp_flat(),
                      {pt("0,0,0", 3), pt("1,2,3", 3)}, true});
        fs.push_back({"product", decomp_product(),
                      {pt("0,0,1/2", 3), pt("1,0,1", 3)}, true});
        fs.push_back({"product_mixed", decomp_product_mixed(),
                      {pt("0,1/2,1/2", 3), pt("2,1,1", 3)}, true});
        fs.push_back({"rotating", decomp_rotating(),
                      {pt("0,0,0", 3), pt("1,2,0", 3)}, false});
        fs.push_back({"conformal", decomp_conformal(),
                      {pt("0,0,0", 3), pt("0,1,-1", 3)}, false});
        fs.push_back({"warped_off_axis", decomp_warped(),
                      {pt("0,1/2,0", 3), pt("0,1,2", 3)}, false});
        fs.push_back({"warped_on_axis", decomp_warped(),
                      {pt("0,0,1", 3)}, true});
        fs.push_back({"flat_n2", decomp_n2(),
                      {pt("0,0", 2), pt("1,1", 2)}, true});
        fs.push_back({"flat_n4", decomp_n4(), {pt("0,0,0,0", 4)}, true});
        return fs;
    }();
    return fixtures;
}

const MetricFixture& metric_fixture(const std::string& name) {
    for (const auto& f : metric_fixtures())
        if (f.name == name) return f;
    throw Error("unknown metric fixture: " + name);
}

const DecompFixture& decomp_fixture(const std::string& name) {
    for (const auto& f : decomp_fixtures())
        if (f.name == name) return f;
    throw Error("unknown decomp fixture: " + name);
}

std::vector<DecompFixture> random_decomp_families(int per_family,
                                                  unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> small(0, 2);
    std::uniform_int_distribution<int> denom(1, 3);
    std::uniform_int_distribution<int> var23(2, 3);
    std::vector<DecompFixture> out;

    // Family A: diagonal squares gamma = diag(1, h2^2, h3^2) with
    // b = dx1; h_i = 1 + c_i x_{v_i}^2.  Parallel iff gamma does not
    // depend on x1, which holds by construction; to get non-parallel
    // members, half the family warps gamma_11 as well.
    for (int k = 0; k < per_family; ++k) {
        DecompSpec spec(3);
        bool warp = k % 2 == 1;
        std::string c1 = std::to_string(small(rng)) + "/" +
                         std::to_string(denom(rng));
        std::string h2 = "1 + " + c1 + "*x" + std::to_string(var23(rng)) + "^2";
        std::string c2 = std::to_string(small(rng)) + "/" +
                         std::to_string(denom(rng));
        std::string h3 = "1 + " + c2 + "*x" + std::to_string(var23(rng)) + "^2";
        if (warp) {
            std::string w = "1 + x2^2/" + std::to_string(denom(rng));
            spec.set_gamma(1, 1, parse_expr("(" + w + ")^2", 3));
            spec.set_b(1, parse_expr(w, 3));
        } else {
            spec.set_gamma(1, 1, parse_expr("1", 3));
            spec.set_b(1, parse_expr("1", 3));
        }
        spec.set_gamma(2, 2, parse_expr("(" + h2 + ")^2", 3));
        spec.set_gamma(3, 3, parse_expr("(" + h3 + ")^2", 3));
        out.push_back({"family_diag_" + std::to_string(k), std::move(spec),
                       {pt("0,1/2,1/3", 3), pt("1,1,-1/2", 3)},
                       std::nullopt});
    }

    // Family B: rotating unit 1-forms b = (cos(c x3), sin(c x3), 0) over
    // the flat metric, probed where the trigonometric values are exact.
    for (int k = 0; k < per_family; ++k) {
        DecompSpec spec(3);
        for (int i = 1; i <= 3; ++i) spec.set_gamma(i, i, parse_expr("1", 3));
        int c = 1 + small(rng);
        spec.set_b(1, parse_expr("cos(" + std::to_string(c) + "*x3)", 3));
        spec.set_b(2, parse_expr("sin(" + std::to_string(c) + "*x3)", 3));
        out.push_back({"family_rot_" + std::to_string(k), std::move(spec),
                       {pt("0,0,0", 3), pt("1,-2,0", 3)},
                       std::nullopt});
    }
    return out;
}

MetricSpec random_cubic_spec(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-2, 2);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> var(1, 3);
    std::uniform_int_distribution<int> pick(0, 9);
    MetricSpec spec(3, 3);
    spec.set_coefficient({1, 2, 3}, parse_expr("1/6", 3));
    std::vector<MultiIndex> candidates;
    for (int i = 1; i <= 3; ++i)
        for (int j = i; j <= 3; ++j)
            for (int k = j; k <= 3; ++k)
                if (!(i == 1 && j == 2 && k == 3))
                    candidates.push_back({i, j, k});
    int added = 0;
    for (const auto& idx : candidates) {
        if (added >= 3 || pick(rng) > 3) continue;
        int a = num(rng);
        if (a == 0) a = 1;
        std::string coeff = std::to_string(a) + "/" +
                            std::to_string(6 * den(rng));
        std::string e = pick(rng) < 5
                            ? coeff
                            : coeff + " * x" + std::to_string(var(rng));
        spec.set_coefficient(idx, parse_expr(e, 3));
        ++added;
    }
    return spec;
}

}  // namespace mroot::tests
