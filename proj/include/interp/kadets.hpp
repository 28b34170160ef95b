#pragma once

#include "interp/hardy.hpp"

namespace interp {

struct DivisionResult {
  PeriodicFunction g;
  double cs_bound = 0.0;
  double reconstruction_defect = 0.0;  // max grid ||(e^z - e^s) g - f|| (cap2)
};

/// Division constant: ||f / (e^z - e^s)|| <= C_s ||f|| for f vanishing at s.
/// C_s = max{ 1/(e^{Re s} - 1), 1/(e - e^{Re s}) } (the two geometric shift
/// series, one per endpoint component).
double cs_constant(StripPoint s);

/// g(z) = f(z) / (e^z - e^s) for f in ker delta_s, by the shifted geometric
/// convolution of coefficients. With subtract_value the caller opts into
/// dividing f - f(s) instead; otherwise a nonvanishing f is an error.
DivisionResult divide_vanishing(const PeriodicFunction& f, StripPoint s,
                                bool subtract_value = false);

/// f(z) = (e^z - e^s) h(z) in coefficient form (test constructor for kernel
/// functions and the reconstruction check).
PeriodicFunction multiply_shift(const PeriodicFunction& h, Complex e_s);

struct PerturbResult {
  PeriodicFunction h;   // unit-norm element of ker delta_t
  double defect = 0.0;  // ||f - h||_{H2}
  double bound = 0.0;   // 2 |e^t - e^s| C_s
};

/// For unit f in ker delta_s: h = (e^z - e^t) g normalized, with
/// ||f - h|| <= 2 |e^t - e^s| C_s.
PerturbResult perturb_kernel(const PeriodicFunction& f, StripPoint s,
                             StripPoint t);

/// Kadets-distance bound 4 |e^t - e^s| max{C_s, C_t}.
double kadets_bound(StripPoint s, StripPoint t);

}  // namespace interp
