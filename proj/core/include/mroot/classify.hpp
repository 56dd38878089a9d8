#ifndef MROOT_CLASSIFY_HPP
#define MROOT_CLASSIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "mroot/finsler.hpp"

namespace mroot {

enum class Verdict { yes, no, unknown };

const char* verdict_str(Verdict v);

// Evidence attached to a negative verdict: the offending index tuple and
// the residual that should have vanished.
struct Witness {
    std::vector<int> index;          // 1-based tuple
    std::string residual_leading;    // leading monomial of the residual
    std::string residual_full;       // populated when dumping is requested
};

struct BerwaldResult {
    bool berwald = false;
    bool by_polynomiality = false;  // every G^i polynomial of degree <= 2
    bool by_flat_derivative = false;  // dG^i_jk/dy^l = 0 for all l
    std::optional<Witness> witness;
    std::vector<Poly> G_polys;  // filled when berwald holds
};

struct LandsbergResult {
    bool landsberg = false;
    std::optional<Witness> witness;
};

// Spray-polynomiality and flat-Berwald-derivative tests; the two criteria
// must agree, otherwise InvariantViolationError.
BerwaldResult berwald_at(const SprayData& s, bool dump_witness);

// T_{ijk|0} = 0 with L from the canonical metrical connection.
LandsbergResult landsberg_at(const CovDerivT3& cov, bool dump_witness);

// Verifies the derivative mechanism behind the cubic Landsberg-to-Berwald
// implication: with Berwald-connection coefficients substituted for L, the
// y-derivative of T_{ijk|0} recovers T_{ijk|l} identically (degree 3 only).
bool landsberg_berwald_mechanism_holds(const FundamentalTables& t,
                                       const SprayData& s);

struct PointClassification {
    std::vector<Scalar> point;
    Mode mode = Mode::exact;
    bool mode_fell_back = false;  // exact values unavailable, used float
    bool degenerate = false;
    std::string error;
    Verdict berwald = Verdict::unknown;
    Verdict landsberg = Verdict::unknown;
    BerwaldResult berwald_detail;
    LandsbergResult landsberg_detail;
    bool mechanism_checked = false;
    bool mechanism_ok = false;
};

struct ClassificationReport {
    int n = 0;
    int m = 0;
    Verdict riemannian = Verdict::unknown;
    double cartan_max = 0.0;  // float diagnostic behind the verdict for m > 2
    std::vector<PointClassification> points;
    Verdict berwald_all = Verdict::unknown;
    Verdict landsberg_all = Verdict::unknown;
};

struct ClassifyOptions {
    Mode mode = Mode::exact;
    bool allow_float_fallback = true;
    bool dump_witness = false;
    bool parallel = true;
    bool check_mechanism = true;
};

// Per-point Riemannian/Berwald/Landsberg classification with witnesses.
// The classifier enforces Berwald => Landsberg at every point and, for
// cubic metrics, Landsberg => Berwald; violations throw
// InvariantViolationError (they cannot occur mathematically).
ClassificationReport classify(const CompiledMetric& metric,
                              std::span<const std::vector<Scalar>> points,
                              const ClassifyOptions& opts);

// Berwald/Landsberg classification of one prepared point context;
// the mode/fallback fields of the result are left to the caller.
PointClassification classify_point_context(const PointContext& ctx,
                                           const ClassifyOptions& opts);

// Riemannian test: quadratic metrics are Riemannian; otherwise the Cartan
// tensor is sampled in float mode at the given base points.
Verdict riemannian_verdict(const CompiledMetric& metric,
                           std::span<const std::vector<Scalar>> points,
                           double* cartan_max_out);

// Fills berwald_all / landsberg_all from the per-point verdicts.
void fill_verdict_conjunctions(ClassificationReport& report);

}  // namespace mroot

#endif
