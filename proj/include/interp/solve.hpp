#pragma once

#include "interp/types.hpp"

#include <functional>

namespace interp {

/// Convex objective on an n-by-L complex variable block, with an optional
/// projection onto an affine feasible set. Gradients use the Hermitian
/// representation: directional derivative along d is Re<g, d>.
struct FirstOrderProblem {
  std::function<double(const CMat&)> value;
  std::function<double(const CMat&, CMat&)> value_and_grad;
  std::function<void(CMat&)> project;  // empty = unconstrained
  bool smooth = true;
};

/// FISTA with backtracking and gradient restart for smooth problems,
/// diminishing-step projected subgradient descent otherwise.
/// `v` holds the start on entry and the best iterate on exit.
SolveReport minimize(const FirstOrderProblem& prob, CMat& v,
                     const SolveOptions& opts);

}  // namespace interp
