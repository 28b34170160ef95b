#pragma once

#include "interp/types.hpp"

#include <functional>
#include <limits>

namespace interp {

enum class NormKind { lp, custom };

/// A norm on C^n. The lp kind is ||(w_i x_i)||_p with strictly positive
/// entrywise weights (default all-ones) and p in [1, inf]; its dual under the
/// bilinear pairing is ||(f_i / w_i)||_q, 1/p + 1/q = 1. Custom norms carry an
/// evaluation callback and (optionally) an analytic subgradient; without one,
/// subgradients fall back to central differences with step 1e-6 * (1 + ||x||).
class NormedSpace {
 public:
  using EvalFn = std::function<double(const CVec&)>;
  using GradFn = std::function<CVec(const CVec&)>;

  static NormedSpace lp(int dim, double p, RVec weights = RVec());
  static NormedSpace custom(int dim, EvalFn eval, GradFn grad = nullptr);

  int dim() const { return dim_; }
  NormKind kind() const { return kind_; }
  double p() const { return p_; }
  const RVec& weights() const { return weights_; }
  bool smooth() const;
  bool has_closed_dual() const { return kind_ == NormKind::lp; }

  double norm(const CVec& x) const;
  /// An element of the subdifferential at x (Hermitian representation).
  CVec subgradient(const CVec& x) const;
  NormedSpace dual() const;

 private:
  NormedSpace() = default;

  int dim_ = 0;
  NormKind kind_ = NormKind::lp;
  double p_ = 2.0;
  RVec weights_;
  EvalFn eval_;
  GradFn grad_;
};

struct Couple {
  NormedSpace space0;
  NormedSpace space1;

  Couple(NormedSpace s0, NormedSpace s1)
      : space0(std::move(s0)), space1(std::move(s1)) {
    require(space0.dim() == space1.dim(), "couple spaces must share dimension");
  }
  int dim() const { return space0.dim(); }
};

double norm_eval(const NormedSpace& space, const CVec& x);

/// Dual norm sup{Re<f, x> : ||x|| <= 1}. Closed form for lp kinds.
double dual_norm_eval(const NormedSpace& space, const CVec& f);

struct DualNormResult {
  double value = 0.0;
  CVec maximizer;
  SolveReport report;
};

/// Inner-maximization path (projected gradient ascent with radial retraction);
/// works for any kind, used to cross-check the closed form.
DualNormResult dual_norm_eval_ascent(const NormedSpace& space, const CVec& f,
                                     const SolveOptions& opts = {},
                                     int starts = 4);

double cap2_norm(const Couple& couple, const CVec& x);

struct Sum2Result {
  double value = 0.0;
  CVec split;  // the minimizing u
  SolveReport report;
};

/// inf over u of (||u||_0^2 + ||x - u||_1^2)^{1/2}.
Sum2Result sum2_norm(const Couple& couple, const CVec& x,
                     const SolveOptions& opts = {});

/// Operator norm of x |-> d .* x. Equals max|d_i| for lp kinds regardless of
/// the weights.
double diag_operator_norm(const NormedSpace& space, const CVec& d);

}  // namespace interp
