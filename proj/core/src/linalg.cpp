#include "mroot/linalg.hpp"

#include <cmath>

#include "mroot/errors.hpp"

namespace mroot {

namespace {

PolyMatrix minor_of(const PolyMatrix& m, std::size_t row, std::size_t col) {
    std::size_t n = m.size();
    PolyMatrix r(n - 1, std::vector<Poly>(n - 1));
    std::size_t ri = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == row) continue;
        std::size_t rj = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == col) continue;
            r[ri][rj] = m[i][j];
            ++rj;
        }
        ++ri;
    }
    return r;
}

}  // namespace

Poly poly_det(const PolyMatrix& m) {
    std::size_t n = m.size();
    if (n == 0) throw Error("poly_det: empty matrix");
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    Poly acc(m[0][0].nvars());
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        Poly term = m[0][j] * poly_det(minor_of(m, 0, j));
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

PolyMatrix poly_adjugate(const PolyMatrix& m) {
    std::size_t n = m.size();
    PolyMatrix adj(n, std::vector<Poly>(n));
    if (n == 1) {
        adj[0][0] = Poly::constant(m[0][0].nvars(), Scalar(1));
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Poly c = poly_det(minor_of(m, i, j));
            adj[j][i] = ((i + j) % 2 == 0) ? c : -c;
        }
    return adj;
}

std::optional<std::vector<Scalar>> solve_dense(ScalarMatrix a,
                                               std::vector<Scalar> rhs) {
    std::size_t n = a.size();
    if (rhs.size() != n) throw Error("solve_dense: shape mismatch");
    double scale = 0.0;
    bool floats = false;
    for (const auto& row : a)
        for (const auto& v : row) {
            scale = std::max(scale, v.abs_double());
            floats = floats || !v.is_exact();
        }
    double tol = floats ? ambient_tolerance().threshold(scale) : 0.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = -1.0;
        for (std::size_t i = col; i < n; ++i) {
            double mag = a[i][col].abs_double();
            if (!a[i][col].is_zero_strict() && mag > best) {
                best = mag;
                piv = i;
            }
        }
        if (best <= tol) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t i = col + 1; i < n; ++i) {
            if (a[i][col].is_zero_strict()) continue;
            Scalar f = a[i][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j)
                a[i][j] -= f * a[col][j];
            rhs[i] -= f * rhs[col];
        }
    }
    std::vector<Scalar> x(n, Scalar(0));
    for (std::size_t i = n; i-- > 0;) {
        Scalar acc = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= a[i][j] * x[j];
        x[i] = acc / a[i][i];
    }
    return x;
}

std::optional<ScalarMatrix> invert_dense(const ScalarMatrix& a) {
    std::size_t n = a.size();
    ScalarMatrix inv(n, std::vector<Scalar>(n, Scalar(0)));
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Scalar> e(n, Scalar(0));
        e[k] = Scalar(1);
        auto col = solve_dense(a, e);
        if (!col) return std::nullopt;
        for (std::size_t i = 0; i < n; ++i) inv[i][k] = (*col)[i];
    }
    return inv;
}

Scalar scalar_det(const ScalarMatrix& m) {
    std::size_t n = m.size();
    if (n == 0) throw Error("scalar_det: empty matrix");
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    Scalar acc(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero_strict()) continue;
        ScalarMatrix minor(n - 1, std::vector<Scalar>(n - 1, Scalar(0)));
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t cj = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j) continue;
                minor[i - 1][cj++] = m[i][k];
            }
        }
        Scalar term = m[0][j] * scalar_det(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

bool positive_definite(const ScalarMatrix& m) {
    std::size_t n = m.size();
    double scale = 1.0;
    for (const auto& row : m)
        for (const auto& v : row) scale = std::max(scale, v.abs_double());
    double tol = ambient_tolerance().threshold(scale);
    for (std::size_t k = 1; k <= n; ++k) {
        ScalarMatrix lead(k, std::vector<Scalar>(k, Scalar(0)));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) lead[i][j] = m[i][j];
        Scalar d = scalar_det(lead);
        if (d.is_exact()) {
            if (d.sign() <= 0) return false;
        } else if (d.to_double() <= tol) {
            return false;
        }
    }
    return true;
}

std::optional<std::vector<double>> solve_dense(
    std::vector<std::vector<double>> a, std::vector<double> rhs) {
    std::size_t n = a.size();
    if (rhs.size() != n) throw Error("solve_dense: shape mismatch");
    double scale = 0.0;
    for (const auto& row : a)
        for (double v : row) scale = std::max(scale, std::fabs(v));
    double tol = ambient_tolerance().threshold(scale);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::fabs(a[i][col]) > std::fabs(a[piv][col])) piv = i;
        if (std::fabs(a[piv][col]) <= tol) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t i = col + 1; i < n; ++i) {
            double f = a[i][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
            rhs[i] -= f * rhs[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= a[i][j] * x[j];
        x[i] = acc / a[i][i];
    }
    return x;
}

}  // namespace mroot
