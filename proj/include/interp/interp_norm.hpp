#pragma once

#include "interp/sequence_structure.hpp"
#include "interp/solve.hpp"

#include <vector>

namespace interp {

struct Decomposition {
  TruncSeq seq;
  CVec target;
  double residual = 0.0;  // ||sigma(seq) - target|| in the cap2 endpoint norm
  double value = 0.0;     // objective (norm value) at seq
  /// KKT multiplier of the sum constraint (Hermitian representation); the
  /// block gradient of the squared objective is constant across k at the
  /// optimum and equals this.
  CVec multiplier;
  /// Worst deviation of a block gradient from the multiplier (a dual
  /// optimality diagnostic).
  double multiplier_spread = 0.0;
};

struct InterpResult {
  double value = 0.0;
  Decomposition dec;
  SolveReport report;
};

/// ||x||_{z,2}: minimize ||v||^2_{S0(e^{-z})} + ||v||^2_{S1(e^{1-z})} over
/// decompositions sigma(v) = x; returns the square root of the minimum.
InterpResult interp_norm(const StructuredCouple& sc, const CVec& x,
                         StripPoint z, const SolveOptions& opts = {},
                         const TruncSeq* warm_start = nullptr);

/// One interp_norm row per z, warm-starting each solve from the previous
/// minimizer reweighted to the new base point.
std::vector<InterpResult> interp_norm_grid(const StructuredCouple& sc,
                                           const CVec& x,
                                           const std::vector<StripPoint>& zs,
                                           const SolveOptions& opts = {});

/// Weight bases of the two structures at z: (e^{-z}, e^{1-z}).
inline std::pair<Complex, Complex> strip_weights(StripPoint z) {
  return {std::exp(-z.value()), std::exp(Complex(1.0) - z.value())};
}

}  // namespace interp
