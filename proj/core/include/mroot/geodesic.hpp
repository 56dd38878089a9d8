#ifndef MROOT_GEODESIC_HPP
#define MROOT_GEODESIC_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mroot/decomp.hpp"
#include "mroot/metric.hpp"

namespace mroot {

struct Trajectory {
    double dt = 0.0;
    int steps = 0;
    std::string integrator = "rk4";
    std::vector<double> t;
    std::vector<std::vector<double>> x;
    std::vector<std::vector<double>> y;
    // F = T^(1/m) per sample; NaN where T <= 0.
    std::vector<double> F;
};

// Fixed-step classical 4th-order integration of dx/dt = y,
// dy/dt = -2G(x,y), with the spray solved numerically from the Hessian
// linear system at every stage.  Throws DegenerateHessianError (with the
// failing time in the message) when the Hessian degenerates en route.
Trajectory integrate(const CompiledMetric& metric,
                     std::span<const double> x0, std::span<const double> y0,
                     double dt, int steps);

// Same scheme driven by the Levi-Civita spray of gamma.
Trajectory integrate_riemannian(const DecompSpec& spec,
                                std::span<const double> x0,
                                std::span<const double> y0, double dt,
                                int steps);

// max_k |F(x_k, y_k) - F(x_0, y_0)|; throws SpecError when T <= 0 was hit.
double invariant_drift(const Trajectory& traj);

// Maximum state deviation between the Finsler trajectory of T = a*b and
// the Riemannian trajectory of gamma over the same time grid.  Requires
// the decomposition to be of Berwald type at x0 (checked; SpecError
// otherwise, since the geodesic-coincidence claim does not apply).
double compare_riemannian(const DecompSpec& spec, std::span<const double> x0,
                          std::span<const double> y0, double dt, int steps);

// One row per sample: t, x^1..x^n, y^1..y^n, F.
void write_trajectory(const Trajectory& traj, std::ostream& out);

}  // namespace mroot

#endif
