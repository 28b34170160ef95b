#pragma once

#include "interp/hardy.hpp"

#include <vector>

namespace interp {

struct OptimalFunction {
  CVec x;
  StripPoint z0;
  PeriodicFunction f;
  SolveReport report;
};

/// The optimal-function map: wraps the minimizing decomposition of x at z0 as
/// a periodic function with f(z0) = x and ||f||_{H2} = ||x||_{z0,2}.
OptimalFunction gamma(const StructuredCouple& sc, const CVec& x, StripPoint z0,
                      const SolveOptions& opts = {});

/// U_{z,w}(x) = Gamma_z(x)(w). Homogeneous of degree one, so non-unit inputs
/// come out scaled by their norm.
CVec daher_map(const StructuredCouple& sc, const CVec& x, StripPoint z,
               StripPoint w, const SolveOptions& opts = {});

/// || U_{w,z}( U_{z,w}x / ||U_{z,w}x||_{w,2} ) - x || in the cap2 endpoint
/// norm, for x on the unit sphere at z.
double round_trip_error(const StructuredCouple& sc, const CVec& x,
                        StripPoint z, StripPoint w,
                        const SolveOptions& opts = {});

struct ModulusSample {
  double dist_in = 0.0;       // ||x - y||_{z,2}
  double dist_h2 = 0.0;       // ||f_x - f_y||_{H2}
  double dist_out = 0.0;      // ||U x - U y||_{w,2}
  double midpoint_lhs = 0.0;  // ||(x+y)/2||_{z,2}
  double midpoint_rhs = 0.0;  // ||(f_x+f_y)/2||_{H2}
};

/// Samples pairs on the unit sphere at z and records the distances driving
/// the uniform-continuity estimates, plus the midpoint inequality
/// midpoint_lhs <= midpoint_rhs (feasibility of the averaged function).
std::vector<ModulusSample> modulus_experiment(const StructuredCouple& sc,
                                              StripPoint z, StripPoint w,
                                              int pairs, std::uint64_t seed,
                                              const SolveOptions& opts = {});

/// Coordinatewise power map between lp unit spheres:
/// y_i = phase(x_i) |x_i|^{p/q} after normalizing x to the lp sphere.
CVec mazur_map(double p, double q, const CVec& x);

struct MazurCompare {
  double angle = 0.0;       // Euclidean angle between the two outputs
  double norm_ratio = 0.0;  // l_{p(eta)} norm ratio
  CVec u_out;
  CVec mazur_out;
};

/// Compares U_{theta,eta} with the Mazur map between l_{p(theta)} and
/// l_{p(eta)}, 1/p(t) = (1-t)/p0 + t/p1. Qualitative: the discrete and
/// complex methods agree only up to norm equivalence.
MazurCompare mazur_compare(const StructuredCouple& sc, const CVec& x,
                           double p0, double p1, double theta, double eta,
                           const SolveOptions& opts = {});

}  // namespace interp
