#ifndef MROOT_DECOMP_HPP
#define MROOT_DECOMP_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mroot/classify.hpp"
#include "mroot/finsler.hpp"

namespace mroot {

// Decomposable cubic metric T = a * b with a = gamma_ij(x) y^i y^j
// Riemannian and b = b_i(x) y^i a 1-form of unit gamma-norm.
class DecompSpec {
  public:
    explicit DecompSpec(int n);

    int dimension() const { return n_; }

    void set_gamma(int i, int j, Expr e);  // rejects duplicate sorted pairs
    Expr gamma_entry(int i, int j) const;  // zero when absent
    const std::map<MultiIndex, Expr>& gamma() const { return gamma_; }

    void set_b(int i, Expr e);
    const Expr& b_entry(int i) const;
    const std::vector<Expr>& b() const { return b_; }

  private:
    int n_;
    std::map<MultiIndex, Expr> gamma_;
    std::vector<Expr> b_;
};

// The equivalent cubic metric spec, with coefficients symmetrised from
// gamma and b.
MetricSpec to_cubic(const DecompSpec& spec);

struct LeviCivitaData;

// Cubic coefficient values of T = a*b assembled by the product rule from
// point data; the route that stays available after numeric renormalization
// of b (second-derivative tables are not populated).
PointContext cubic_point_context(const LeviCivitaData& lc);

// Classification of a decomposable spec with the unit-norm invariant
// enforced at every listed point (SpecError on violation unless
// normalize_b, which rescales b pointwise before classifying).
ClassificationReport classify_decomposable(
    const DecompSpec& spec, std::span<const std::vector<Scalar>> points,
    const ClassifyOptions& opts, bool normalize_b);

// Levi-Civita machinery of gamma at a base point, plus the decomposition
// polynomials in y.
struct LeviCivitaData {
    int n = 0;
    Mode mode = Mode::exact;
    std::vector<Scalar> x0;
    ScalarMatrix gamma;                                    // values
    ScalarMatrix gamma_inv;
    std::vector<ScalarMatrix> dgamma;                      // [l][i][j]
    std::vector<std::vector<std::vector<Scalar>>> chris;   // gamma^i_jk
    std::vector<Scalar> b_lo;                              // b_i
    std::vector<Scalar> b_up;                              // b^i
    ScalarMatrix db;                                       // d_i b_j
    ScalarMatrix nabla_b;                                  // nabla_i b_j
    Scalar b_norm2;                                        // gamma^{ij} b_i b_j
    std::vector<Poly> riem_spray;                          // Riemannian G^i
    Poly a_poly;                                           // gamma_ij y^i y^j
    Poly b_poly;                                           // b_i y^i
    Poly delta;                                            // 4 b^2 - a
    Poly nabla0b;                                          // nabla_j b_i y^i y^j
    std::vector<Poly> r_b;                                 // r_j(b)
    bool normalized = false;  // b was rescaled numerically at this point

    bool b_parallel() const;       // every nabla_i b_j zero
    bool unit_norm_ok() const;     // |b|^2 = 1 within mode tolerance
    double unit_norm_residual() const;
};

// Throws SpecError when gamma is singular or not positive-definite at x0,
// TranscendentalError in exact mode when values are not rational.
LeviCivitaData christoffel(const DecompSpec& spec,
                           std::span<const Scalar> x0, Mode mode);

// Rescales b by 1/|b| at this point (exact when |b|^2 has a rational
// square root, otherwise TranscendentalError in exact mode).
void normalize_b(LeviCivitaData& lc);

// Closed-form inverse Hessian of T = a*b over 2*b*Delta, verified against
// the adjugate route, with Delta | det[T_ij] established by exact division.
struct DecompInverse {
    std::vector<std::vector<RationalFn>> Tinv;
    Poly hessian_det;
    Poly det_over_delta;  // det[T_ij] / Delta
};

DecompInverse delta_and_inverse(const LeviCivitaData& lc);

// r_j(T) = a r_j(b) - a_{. j} nabla_0 b.
std::vector<Poly> r_T(const LeviCivitaData& lc);

// B^i computed along the two independent routes; they agree exactly.
struct SprayDifference {
    std::vector<RationalFn> closed_route;    // -T^{ij} r_j(T) / 2
    std::vector<RationalFn> subtract_route;  // spray(T = a b) - Riemannian
};

SprayDifference spray_difference(const DecompSpec& spec,
                                 const LeviCivitaData& lc,
                                 const DecompInverse& di);

// Divisibility diagnostic from the decomposition proof: tries to factor
// (2 b b^j r_j(b) + nabla_0 b) as f * Delta and reports the consistency
// residuals for f when it exists.
struct FDiagnostic {
    bool factorized = false;
    Scalar f;
    double residual_term2 = 0.0;      // |nabla_0 b + a f|
    double residual_br = 0.0;         // |b^j r_j(b) - 2 b f|
    double residual_coeff2 = 0.0;     // |b^i nabla_i b_r - 2 b_r f|
    double residual_coeff3 = 0.0;     // |b^i nabla_i b_r - 3 b_r f|
};

FDiagnostic f_diagnostic(const LeviCivitaData& lc);

struct TheoremPointReport {
    std::vector<Scalar> point;
    Mode mode = Mode::exact;
    bool mode_fell_back = false;
    double unit_norm_residual = 0.0;
    bool p1_spray_polynomial = false;
    bool p2_parallel = false;
    bool b_vanishes = false;  // B^i = 0 (meaningful when p1 and p2 hold)
    bool closed_inverse_matches_adjugate = false;
    bool delta_divides_det = false;
    bool routes_agree = false;
    bool aux_y_r_b = false;          // y^j r_j(b) = 0
    bool aux_b_nabla_b = false;      // b^i nabla_j b_i = 0
    bool aux_tinv_b = false;         // T^{ij} b_j closed form
    bool aux_tinv_adot = false;      // T^{ij} a_{. j} closed form
    FDiagnostic fdiag;
};

struct TheoremReport {
    int n = 0;
    std::vector<TheoremPointReport> points;
    bool all_points_berwald = false;
};

struct TheoremOptions {
    Mode mode = Mode::exact;
    bool allow_float_fallback = true;
    bool normalize_b = false;
    bool parallel = true;
};

// Full equivalence check at each point: P1 (all B^i polynomial of degree
// <= 2) if and only if P2 (nabla b = 0), with B^i = 0 whenever both hold.
// A P1/P2 disagreement throws InvariantViolationError; a unit-norm
// violation (without --normalize-b) throws SpecError.
TheoremReport theorem_check(const DecompSpec& spec,
                            std::span<const std::vector<Scalar>> points,
                            const TheoremOptions& opts);

}  // namespace mroot

#endif
