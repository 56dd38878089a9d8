#ifndef MROOT_METRIC_HPP
#define MROOT_METRIC_HPP

#include <map>
#include <span>
#include <vector>

#include "mroot/expr.hpp"
#include "mroot/poly.hpp"

namespace mroot {

// Sorted multi-index (ascending, entries 1..n).
using MultiIndex = std::vector<int>;

MultiIndex sorted_index(MultiIndex idx);
// Number of distinct permutations of a sorted multi-index.
long permutation_count(const MultiIndex& idx);

// An m-th root metric F = T^(1/m), T = a_{i1..im}(x) y^{i1}..y^{im}, with
// the fully symmetric coefficient table stored once per sorted multi-index.
// T is assembled as a sum over all distinct permutations of each stored
// index, i.e. a stored entry a_I contributes perm_count(I) * a_I * y^I.
class MetricSpec {
  public:
    MetricSpec(int n, int m);

    int dimension() const { return n_; }
    int degree() const { return m_; }

    // Rejects duplicate sorted indices and out-of-range entries.
    void set_coefficient(MultiIndex idx, Expr e);
    // Zero expression for absent indices.
    Expr coefficient(const MultiIndex& idx) const;
    const std::map<MultiIndex, Expr>& coefficients() const { return coeffs_; }

  private:
    int n_;
    int m_;
    std::map<MultiIndex, Expr> coeffs_;
};

// Symbolic x-derivative cache for a metric: built once per spec, evaluated
// numerically many times (classification points, integrator steps).
class CompiledMetric {
  public:
    explicit CompiledMetric(const MetricSpec& spec);

    struct Entry {
        MultiIndex idx;
        long perms;
        Expr value;
        std::vector<Expr> d1;               // d/dx^l, l = 1..n
        std::vector<std::vector<Expr>> d2;  // d2[l-1][s-1], l <= s
    };

    const MetricSpec& spec() const { return spec_; }
    int dimension() const { return spec_.dimension(); }
    int degree() const { return spec_.degree(); }
    std::span<const Entry> entries() const { return entries_; }

  private:
    MetricSpec spec_;
    std::vector<Entry> entries_;
};

// All coefficient values and their x-derivatives evaluated at a base point.
// Exact mode throws TranscendentalError when some coefficient value has no
// rational representation at x0; callers may then fall back to float mode.
class PointContext {
  public:
    struct EntryValues {
        MultiIndex idx;
        long perms;
        Scalar a;
        std::vector<Scalar> da;                // per l
        std::vector<std::vector<Scalar>> d2a;  // [l-1][s-1], l <= s
    };

    static PointContext build(const CompiledMetric& metric,
                              std::span<const Scalar> x0, Mode mode);

    // Assembles a context from already-evaluated coefficient data (second
    // derivative tables may be left empty when the caller has none).
    static PointContext from_values(int n, int m, Mode mode,
                                    std::vector<Scalar> x0,
                                    std::vector<EntryValues> vals);

    // Same data with every scalar converted to a double.
    PointContext to_float() const;

    int dimension() const { return n_; }
    int degree() const { return m_; }
    Mode mode() const { return mode_; }
    std::span<const Scalar> point() const { return x0_; }
    std::span<const EntryValues> values() const { return vals_; }

    // Fundamental polynomial T(y) and its x-derivatives T_{,l}(y).
    Poly fundamental_poly() const;
    Poly fundamental_poly_dx(int l) const;
    Scalar d2_value(const EntryValues& e, int l, int s) const;

  private:
    int n_ = 0;
    int m_ = 0;
    Mode mode_ = Mode::exact;
    std::vector<Scalar> x0_;
    std::vector<EntryValues> vals_;
};

}  // namespace mroot

#endif
