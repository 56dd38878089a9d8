#include "mroot/geodesic.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "mroot/errors.hpp"
#include "mroot/linalg.hpp"

namespace mroot {

namespace {

double mono_eval(const Monomial& m, std::span<const double> y) {
    double v = 1.0;
    for (int i = 0; i < m.nvars(); ++i)
        for (int k = 0; k < m.exponent(i); ++k) v *= y[i];
    return v;
}

double mono_d1(const Monomial& m, int i, std::span<const double> y) {
    int e = m.exponent(i);
    if (e == 0) return 0.0;
    double v = e;
    for (int k = 0; k < e - 1; ++k) v *= y[i];
    for (int j = 0; j < m.nvars(); ++j) {
        if (j == i) continue;
        for (int k = 0; k < m.exponent(j); ++k) v *= y[j];
    }
    return v;
}

double mono_d2(const Monomial& m, int i, int j, std::span<const double> y) {
    if (i == j) {
        int e = m.exponent(i);
        if (e < 2) return 0.0;
        double v = static_cast<double>(e) * (e - 1);
        for (int k = 0; k < e - 2; ++k) v *= y[i];
        for (int l = 0; l < m.nvars(); ++l) {
            if (l == i) continue;
            for (int k = 0; k < m.exponent(l); ++k) v *= y[l];
        }
        return v;
    }
    int ei = m.exponent(i), ej = m.exponent(j);
    if (ei == 0 || ej == 0) return 0.0;
    double v = static_cast<double>(ei) * ej;
    for (int k = 0; k < ei - 1; ++k) v *= y[i];
    for (int k = 0; k < ej - 1; ++k) v *= y[j];
    for (int l = 0; l < m.nvars(); ++l) {
        if (l == i || l == j) continue;
        for (int k = 0; k < m.exponent(l); ++k) v *= y[l];
    }
    return v;
}

// Numeric right-hand side evaluator for the m-th root geodesic equation.
class MthRootFlow {
  public:
    explicit MthRootFlow(const CompiledMetric& metric)
        : metric_(metric), n_(metric.dimension()), m_(metric.degree()) {
        for (const auto& e : metric_.entries()) {
            Monomial mono(n_);
            for (int v : e.idx)
                mono.set_exponent(v - 1, mono.exponent(v - 1) + 1);
            monos_.push_back(mono);
        }
    }

    int dim() const { return n_; }

    // out = (dx, dy) = (y, -2G)
    void rhs(std::span<const double> x, std::span<const double> y,
             std::span<double> out, double tnow) const {
        auto entries = metric_.entries();
        std::size_t cnt = entries.size();
        std::vector<double> a(cnt);
        std::vector<std::vector<double>> da(cnt, std::vector<double>(n_));
        for (std::size_t e = 0; e < cnt; ++e) {
            a[e] = entries[e].value.eval_double(x) * entries[e].perms;
            for (int l = 0; l < n_; ++l)
                da[e][l] = entries[e].d1[l].eval_double(x) * entries[e].perms;
        }
        std::vector<std::vector<double>> hess(n_, std::vector<double>(n_, 0.0));
        for (std::size_t e = 0; e < cnt; ++e)
            for (int i = 0; i < n_; ++i)
                for (int j = i; j < n_; ++j) {
                    double v = a[e] * mono_d2(monos_[e], i, j, y);
                    hess[i][j] += v;
                    if (i != j) hess[j][i] += v;
                }
        std::vector<double> rhs_vec(n_, 0.0);
        for (int h = 0; h < n_; ++h) {
            double acc = 0.0;
            for (std::size_t e = 0; e < cnt; ++e) {
                double dh = mono_d1(monos_[e], h, y);
                double mv = mono_eval(monos_[e], y);
                for (int k = 0; k < n_; ++k) acc += da[e][k] * dh * y[k];
                acc -= da[e][h] * mv;
            }
            rhs_vec[h] = acc;
        }
        auto sol = solve_dense(hess, rhs_vec);
        if (!sol)
            throw DegenerateHessianError(
                "Hessian degenerated along the trajectory at t = " +
                double_str(tnow));
        for (int i = 0; i < n_; ++i) {
            out[i] = y[i];
            out[n_ + i] = -(*sol)[i];
        }
    }

    double T_value(std::span<const double> x, std::span<const double> y) const {
        auto entries = metric_.entries();
        double acc = 0.0;
        for (std::size_t e = 0; e < entries.size(); ++e)
            acc += entries[e].value.eval_double(x) * entries[e].perms *
                   mono_eval(monos_[e], y);
        return acc;
    }

    double F_value(std::span<const double> x, std::span<const double> y) const {
        double tval = T_value(x, y);
        if (tval <= 0.0) return std::numeric_limits<double>::quiet_NaN();
        return std::pow(tval, 1.0 / m_);
    }

  private:
    const CompiledMetric& metric_;
    int n_;
    int m_;
    std::vector<Monomial> monos_;
};

// Levi-Civita spray evaluator for a decomposable spec's gamma.
class RiemannianFlow {
  public:
    explicit RiemannianFlow(const DecompSpec& spec) : n_(spec.dimension()) {
        for (int i = 1; i <= n_; ++i)
            for (int j = i; j <= n_; ++j) {
                Expr e = spec.gamma_entry(i, j);
                GammaEntry ge;
                ge.i = i - 1;
                ge.j = j - 1;
                ge.value = e;
                for (int l = 1; l <= n_; ++l) ge.d1.push_back(e.diff(l));
                entries_.push_back(std::move(ge));
            }
    }

    int dim() const { return n_; }

    void rhs(std::span<const double> x, std::span<const double> y,
             std::span<double> out, double tnow) const {
        std::vector<std::vector<double>> g(n_, std::vector<double>(n_, 0.0));
        std::vector<std::vector<std::vector<double>>> dg(
            n_, std::vector<std::vector<double>>(n_,
                                                 std::vector<double>(n_, 0.0)));
        for (const auto& e : entries_) {
            double v = e.value.eval_double(x);
            g[e.i][e.j] = v;
            g[e.j][e.i] = v;
            for (int l = 0; l < n_; ++l) {
                double d = e.d1[l].eval_double(x);
                dg[l][e.i][e.j] = d;
                dg[l][e.j][e.i] = d;
            }
        }
        std::vector<std::vector<double>> ginv(n_, std::vector<double>(n_));
        for (int k = 0; k < n_; ++k) {
            std::vector<double> unit(n_, 0.0);
            unit[k] = 1.0;
            auto col = solve_dense(g, unit);
            if (!col)
                throw DegenerateHessianError(
                    "gamma degenerated along the trajectory at t = " +
                    double_str(tnow));
            for (int i = 0; i < n_; ++i) ginv[i][k] = (*col)[i];
        }
        for (int i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k) {
                    double chris = 0.0;
                    for (int h = 0; h < n_; ++h)
                        chris += ginv[i][h] *
                                 (dg[j][h][k] + dg[k][h][j] - dg[h][j][k]);
                    acc += 0.5 * chris * y[j] * y[k];
                }
            out[i] = y[i];
            out[n_ + i] = -acc;
        }
    }

    double F_value(std::span<const double> x, std::span<const double> y) const {
        double acc = 0.0;
        for (const auto& e : entries_) {
            double v = e.value.eval_double(x) * y[e.i] * y[e.j];
            acc += (e.i == e.j) ? v : 2.0 * v;
        }
        if (acc <= 0.0) return std::numeric_limits<double>::quiet_NaN();
        return std::sqrt(acc);
    }

  private:
    struct GammaEntry {
        int i, j;
        Expr value;
        std::vector<Expr> d1;
    };
    int n_;
    std::vector<GammaEntry> entries_;
};

template <typename Flow>
Trajectory run_rk4(const Flow& flow, std::span<const double> x0,
                   std::span<const double> y0, double dt, int steps) {
    const int n = flow.dim();
    if (static_cast<int>(x0.size()) != n || static_cast<int>(y0.size()) != n)
        throw SpecError("initial state has wrong dimension");
    if (!(dt > 0.0)) throw SpecError("dt must be positive");
    if (steps < 0) throw SpecError("step count must be nonnegative");

    Trajectory traj;
    traj.dt = dt;
    traj.steps = steps;
    std::vector<double> state(2 * n);
    for (int i = 0; i < n; ++i) {
        state[i] = x0[i];
        state[n + i] = y0[i];
    }
    auto record = [&](double tnow) {
        traj.t.push_back(tnow);
        traj.x.emplace_back(state.begin(), state.begin() + n);
        traj.y.emplace_back(state.begin() + n, state.end());
        traj.F.push_back(flow.F_value(traj.x.back(), traj.y.back()));
    };
    record(0.0);

    std::vector<double> k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n),
        tmp(2 * n);
    auto eval = [&](const std::vector<double>& s, std::span<double> out,
                    double tnow) {
        flow.rhs(std::span<const double>(s.data(), n),
                 std::span<const double>(s.data() + n, n), out, tnow);
    };
    for (int step = 0; step < steps; ++step) {
        double tnow = step * dt;
        eval(state, k1, tnow);
        for (int i = 0; i < 2 * n; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
        eval(tmp, k2, tnow + 0.5 * dt);
        for (int i = 0; i < 2 * n; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
        eval(tmp, k3, tnow + 0.5 * dt);
        for (int i = 0; i < 2 * n; ++i) tmp[i] = state[i] + dt * k3[i];
        eval(tmp, k4, tnow + dt);
        for (int i = 0; i < 2 * n; ++i)
            state[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        record((step + 1) * dt);
    }
    return traj;
}

}  // namespace

Trajectory integrate(const CompiledMetric& metric,
                     std::span<const double> x0, std::span<const double> y0,
                     double dt, int steps) {
    return run_rk4(MthRootFlow(metric), x0, y0, dt, steps);
}

Trajectory integrate_riemannian(const DecompSpec& spec,
                                std::span<const double> x0,
                                std::span<const double> y0, double dt,
                                int steps) {
    return run_rk4(RiemannianFlow(spec), x0, y0, dt, steps);
}

double invariant_drift(const Trajectory& traj) {
    if (traj.F.empty()) throw SpecError("empty trajectory");
    double f0 = traj.F.front();
    double drift = 0.0;
    for (double f : traj.F) {
        if (std::isnan(f))
            throw SpecError("T <= 0 at a trajectory sample; F undefined");
        drift = std::max(drift, std::fabs(f - f0));
    }
    return drift;
}

double compare_riemannian(const DecompSpec& spec, std::span<const double> x0,
                          std::span<const double> y0, double dt, int steps) {
    std::vector<Scalar> pt;
    for (double v : x0) pt.push_back(Scalar::of_double(v));
    TheoremOptions opts;
    opts.mode = Mode::floating;
    opts.parallel = false;
    std::vector<std::vector<Scalar>> pts{pt};
    TheoremReport rep = theorem_check(spec, pts, opts);
    if (!rep.all_points_berwald)
        throw SpecError(
            "decomposition is not of Berwald type at the start point; "
            "geodesic coincidence does not apply");

    CompiledMetric cubic(to_cubic(spec));
    Trajectory finsler = integrate(cubic, x0, y0, dt, steps);
    Trajectory riem = integrate_riemannian(spec, x0, y0, dt, steps);
    double worst = 0.0;
    for (std::size_t k = 0; k < finsler.t.size(); ++k)
        for (std::size_t i = 0; i < finsler.x[k].size(); ++i) {
            worst = std::max(worst,
                             std::fabs(finsler.x[k][i] - riem.x[k][i]));
            worst = std::max(worst,
                             std::fabs(finsler.y[k][i] - riem.y[k][i]));
        }
    return worst;
}

void write_trajectory(const Trajectory& traj, std::ostream& out) {
    const int n = traj.x.empty() ? 0 : static_cast<int>(traj.x[0].size());
    out << "# t";
    for (int i = 1; i <= n; ++i) out << " x" << i;
    for (int i = 1; i <= n; ++i) out << " y" << i;
    out << " F\n";
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        out << double_str(traj.t[k]);
        for (double v : traj.x[k]) out << " " << double_str(v);
        for (double v : traj.y[k]) out << " " << double_str(v);
        out << " " << double_str(traj.F[k]) << "\n";
    }
}

}  // namespace mroot
