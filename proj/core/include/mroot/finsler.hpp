#ifndef MROOT_FINSLER_HPP
#define MROOT_FINSLER_HPP

#include "mroot/linalg.hpp"
#include "mroot/metric.hpp"
#include "mroot/rational_fn.hpp"

namespace mroot {

// T and its y-derivative tables at a base point.  All entries are
// polynomials in y; indices in the vectors are 0-based (slot i-1 holds the
// object with classical index i).
struct FundamentalTables {
    int n = 0;
    int m = 0;
    Poly T;
    std::vector<Poly> Tx;           // T_{,l}
    std::vector<Poly> Ti;           // T_i
    PolyMatrix Tij;                 // T_ij
    std::vector<PolyMatrix> Tijk;   // T_ijk
};

FundamentalTables fundamental_tables(const PointContext& ctx);

// Spray, nonlinear connection and Berwald connection coefficients, all
// rational functions of y over powers of det[T_ij].
struct SprayData {
    int n = 0;
    int m = 0;
    Poly det;                                          // det[T_ij]
    PolyMatrix adj;                                    // adjugate
    std::vector<std::vector<RationalFn>> Tinv;         // T^{ij}
    std::vector<Poly> E;                               // T_{h,k}y^k - T_{,h}
    std::vector<RationalFn> G;                         // spray coefficients
    std::vector<std::vector<RationalFn>> N;            // N^i_j = G^i_{.j}
    std::vector<std::vector<std::vector<RationalFn>>> Gjk;  // G^i_jk
};

// Throws DegenerateHessianError when det[T_ij] vanishes identically.
SprayData spray(const FundamentalTables& t);

// N^i_j by the expanded product-rule formula rather than by
// differentiating G^i; used as a cross-check of SprayData::N.
RationalFn nonlinear_connection_expanded(const FundamentalTables& t,
                                         const SprayData& s, int i, int j);

// Horizontal coefficients of the canonical metrical connection attached to
// the Hessian T_ij, plus the lowered-index tensor T^i_jk.
struct MetricalConnection {
    std::vector<std::vector<std::vector<RationalFn>>> L;    // L^i_jk
    std::vector<std::vector<std::vector<RationalFn>>> Tup;  // T^i_jk
};

MetricalConnection cgamma_coeffs(const FundamentalTables& t,
                                 const SprayData& s);

// Horizontal covariant derivative of the third-derivative tensor, and its
// transvection with y.
struct CovDerivT3 {
    // cov[i][j][k][l] = T_{ijk|l}; cov0[i][j][k] = T_{ijk|l} y^l
    std::vector<std::vector<std::vector<std::vector<RationalFn>>>> cov;
    std::vector<std::vector<std::vector<RationalFn>>> cov0;
};

CovDerivT3 h_cov_deriv_T3(const FundamentalTables& t, const SprayData& s,
                          const MetricalConnection& c);

// --- float-mode diagnostics -------------------------------------------------

// Finslerian metric tensor g_ij = (1/2) d2(T^(2/m))/dy^i dy^j at y.
// Requires T(y) > 0.
std::vector<std::vector<double>> finsler_metric(const FundamentalTables& t,
                                                std::span<const double> y);

// Contravariant metric g^{ij} through the closed form in terms of T and
// T^{ij}; requires T(y) > 0.
std::vector<std::vector<double>> finsler_metric_inverse(
    const FundamentalTables& t, const SprayData& s, std::span<const double> y);

// T^{ij} recovered from the numerically inverted g_ij and l^i = y^i/F;
// float cross-check of the adjugate route.
std::vector<std::vector<double>> hessian_inverse_from_g(
    const FundamentalTables& t, std::span<const double> y);

// Largest |C_ijk| at y, C_ijk = (1/2) dg_ij/dy^k; zero iff the metric
// tensor is y-independent at this point.
double cartan_max_abs(const FundamentalTables& t, std::span<const double> y);

}  // namespace mroot

#endif
