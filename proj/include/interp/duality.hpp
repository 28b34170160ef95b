#pragma once

#include "interp/hardy.hpp"

#include <optional>
#include <vector>

namespace interp {

/// A split x*_k + y*_k = x* of a functional over the window; ys is derived,
/// never stored, so the defining identity holds by construction. Outside the
/// window the split is frozen at the summable ends: (0, x*) for k < -K and
/// (x*, 0) for k > K.
struct DualPair {
  TruncSeq xs;
  CVec functional;

  TruncSeq ys() const {
    TruncSeq out(xs.dim(), xs.K());
    for (int k = -xs.K(); k <= xs.K(); ++k)
      out.set_entry(k, CVec(functional - xs.entry(k)));
    return out;
  }
};

/// Dual couple: dual base spaces with dual sequence structures
/// (lp(p) -> lp(q), fourier(p) -> fourier(q)); other kinds have no
/// closed-form dual and are rejected.
StructuredCouple dual_couple(const StructuredCouple& sc);

struct MinusNormResult {
  double value = 0.0;
  DualPair pair;
  SolveReport report;
};

/// Norm of the constant sequence (..., x*, x*, ...) in
/// S0*(e^{-z}) +_2 S1*(e^{1-z}): minimize over splits x*_k + y*_k = x*.
/// Frozen tails are summed analytically for lp kinds and carried in a
/// buffered window for fourier kinds.
MinusNormResult minus_norm(const StructuredCouple& dsc, const CVec& xstar,
                           StripPoint z, const SolveOptions& opts = {});

/// Generalized weight pair (test hook for the reflection-invariance
/// reduction); minus_norm uses (e^{-z}, e^{1-z}).
MinusNormResult minus_norm_weighted(const StructuredCouple& dsc,
                                    const CVec& xstar, Complex a0, Complex a1,
                                    const SolveOptions& opts = {});

struct DualityGapResult {
  double lhs = 0.0;  // sup over the unit sphere of Re<x*, x>
  double rhs = 0.0;  // minus-norm on the dual couple
  double gap = 0.0;  // |lhs - rhs| / rhs
  CVec witness;      // sphere point achieving lhs
  SolveReport lhs_report;
  SolveReport rhs_report;
};

DualityGapResult duality_gap(const StructuredCouple& sc, const CVec& xstar,
                             StripPoint z, const SolveOptions& opts = {},
                             int starts = 8);

/// Difference sequence (Ax*)_k = x*_k - x*_{k-1} on indices -K..K+1 with the
/// frozen-tail boundary (x*_{-K-1} = 0, closing term x* - x*_K), so that
/// sigma(A x*) = x* exactly by telescoping.
TruncSeq a_operator(const DualPair& dp);

/// g(z) = sum_k e^{k(z - z0)} (Ax*)_k over the dual couple.
PeriodicFunction g_function(const DualPair& dp, StripPoint z0,
                            const StructuredCouple& dsc);

struct NormingFunctional {
  CVec xstar;      // <x*, x> = 1 exactly (bilinear pairing)
  DualPair split;  // minus-norm-optimal split of x*
  double dual_norm = 0.0;   // minus_norm(x*) >= 1
  double quality = 0.0;     // dual_norm - 1 (truncation + solver defect)
  SolveReport report;
};

/// Norming functional of a unit vector x of X_z^(2): jointly minimizes the
/// minus-norm over (c, split) subject to <c, x> = 1, multi-started and seeded
/// with the interp-solve multiplier when available.
NormingFunctional norming_functional(const StructuredCouple& sc,
                                     const CVec& x_unit, StripPoint z,
                                     const SolveOptions& opts = {},
                                     const CVec* multiplier_hint = nullptr,
                                     int starts = 8);

struct MaxModulusPoint {
  Complex z;
  Complex F;
};

struct MaxModulusResult {
  std::vector<MaxModulusPoint> rows;
  double base_defect = 0.0;  // |F(z0) - 1|
  double grid_defect = 0.0;  // max over the grid of |F(z)| - 1
  NormingFunctional nf;
  InterpResult primal;
};

/// F(z) = <g(z), Gamma_{z0}(x)(z)>; analytic, F(z0) = 1, and |F| <= 1 up to
/// the truncation defect, which bounds the norm-preservation error of the
/// sphere map at finite K.
MaxModulusResult max_modulus_pairing(const StructuredCouple& sc, const CVec& x,
                                     StripPoint z0,
                                     const std::vector<StripPoint>& grid,
                                     const SolveOptions& opts = {});

}  // namespace interp
