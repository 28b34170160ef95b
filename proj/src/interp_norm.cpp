#include "interp/interp_norm.hpp"

#include <cmath>

namespace interp {

namespace {

// Diagonal preconditioner per position: s_k = (|a0|^{2k} + |a1|^{2k})^{1/2},
// which flattens the exponential weight profile of the objective.
RVec position_scales(const StructureEval& e0, const StructureEval& e1,
                     bool enabled) {
  const RVec& m0 = e0.weight_magnitudes();
  const RVec& m1 = e1.weight_magnitudes();
  if (!enabled) return RVec::Ones(m0.size());
  return (m0.array().square() + m1.array().square()).sqrt();
}

}  // namespace

InterpResult interp_norm(const StructuredCouple& sc, const CVec& x,
                         StripPoint z, const SolveOptions& opts,
                         const TruncSeq* warm_start) {
  require(x.size() == sc.dim(), "dimension mismatch in interp_norm");
  const int K = sc.K;
  const int L = 2 * K + 1;
  const int n = sc.dim();

  InterpResult res;
  res.dec.target = x;
  if (x.norm() == 0.0) {
    res.dec.seq = TruncSeq(n, K);
    res.dec.multiplier = CVec::Zero(n);
    res.report.converged = true;
    return res;
  }

  auto [a0, a1] = strip_weights(z);
  StructureEval e0(sc.struct0, a0, K);
  StructureEval e1(sc.struct1, a1, K);
  const RVec s = position_scales(e0, e1, opts.precondition);
  const RVec inv_s = s.cwiseInverse();
  const double proj_c = inv_s.array().square().sum();

  auto to_v = [&](const CMat& u) {
    CMat v = u;
    for (int k = 0; k < L; ++k) v.col(k) *= inv_s[k];
    return v;
  };

  FirstOrderProblem prob;
  prob.smooth =
      sc.struct0.smooth_for_solver() && sc.struct1.smooth_for_solver();
  prob.value = [&](const CMat& u) {
    CMat v = to_v(u);
    double n0 = e0.norm(v), n1 = e1.norm(v);
    return n0 * n0 + n1 * n1;
  };
  prob.value_and_grad = [&](const CMat& u, CMat& g) {
    CMat v = to_v(u);
    CMat g0(n, L), g1(n, L);
    double n0 = e0.norm_and_grad(v, g0);
    double n1 = e1.norm_and_grad(v, g1);
    g = 2.0 * n0 * g0 + 2.0 * n1 * g1;
    for (int k = 0; k < L; ++k) g.col(k) *= inv_s[k];
    return n0 * n0 + n1 * n1;
  };
  prob.project = [&](CMat& u) {
    CVec r = -x;
    for (int k = 0; k < L; ++k) r += inv_s[k] * u.col(k);
    r /= proj_c;
    for (int k = 0; k < L; ++k) u.col(k) -= inv_s[k] * r;
  };

  // Start from the single-term decomposition delta_0 (x) unless warm-started.
  CMat u = CMat::Zero(n, L);
  if (warm_start != nullptr) {
    require(warm_start->dim() == n, "warm start dimension mismatch");
    TruncSeq ws = warm_start->K() == K ? *warm_start : warm_start->with_radius(K);
    u = ws.entries();
    for (int k = 0; k < L; ++k) u.col(k) *= s[k];
  } else {
    u.col(K) = s[K] * x;
  }

  res.report = minimize(prob, u, opts);

  CMat v = to_v(u);
  res.dec.seq = TruncSeq(K, v);
  res.value = std::sqrt(res.report.value);
  res.report.value = res.value;
  res.dec.value = res.value;
  res.dec.residual = cap2_norm(sc.couple(), sigma(res.dec.seq) - x);
  res.report.feasibility = res.dec.residual;
  if (res.dec.residual > opts.tol_feas * (1.0 + cap2_norm(sc.couple(), x)))
    res.report.converged = false;

  // Constraint multiplier: block gradients of the squared objective agree
  // across k at an optimum.
  {
    CMat g0(n, L), g1(n, L);
    double n0 = e0.norm_and_grad(v, g0);
    double n1 = e1.norm_and_grad(v, g1);
    CMat g = 2.0 * n0 * g0 + 2.0 * n1 * g1;
    res.dec.multiplier = g.rowwise().mean();
    res.dec.multiplier_spread = 0.0;
    for (int k = 0; k < L; ++k)
      res.dec.multiplier_spread = std::max(
          res.dec.multiplier_spread, (g.col(k) - res.dec.multiplier).norm());
  }
  return res;
}

std::vector<InterpResult> interp_norm_grid(const StructuredCouple& sc,
                                           const CVec& x,
                                           const std::vector<StripPoint>& zs,
                                           const SolveOptions& opts) {
  require(!zs.empty(), "grid needs at least one strip point");
  std::vector<InterpResult> out;
  out.reserve(zs.size());
  const TruncSeq* warm = nullptr;
  TruncSeq reweighted;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (i > 0) {
      // Reweight the previous minimizer so its weighted profile carries over:
      // e^{-kz} (e^{k(z - z_prev)} v_k) = e^{-k z_prev} v_k.
      Complex d = zs[i].value() - zs[i - 1].value();
      reweighted = out.back().dec.seq;
      for (int k = -sc.K; k <= sc.K; ++k)
        reweighted.set_entry(
            k, CVec(std::exp(double(k) * d) * reweighted.entry(k)));
      warm = &reweighted;
    }
    out.push_back(interp_norm(sc, x, zs[i], opts, warm));
  }
  return out;
}

}  // namespace interp
