#include "interp/duality.hpp"

#include "interp/rng.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace interp {

namespace {

NormedSpace dual_base(const NormedSpace& s) {
  require(s.has_closed_dual(), "dual couple needs closed-form dual bases");
  return s.dual();
}

SequenceStructure dual_structure(const SequenceStructure& s) {
  double q;
  switch (s.kind) {
    case SeqKind::lp:
    case SeqKind::fourier:
      require(s.p > 1.0 && !std::isinf(s.p),
              "dual structures implemented for 1 < p < inf");
      q = s.p / (s.p - 1.0);
      break;
    default:
      throw Error("dual structures implemented only for lp and fourier kinds");
  }
  if (s.kind == SeqKind::lp) return SequenceStructure::lp(dual_base(s.base), q);
  // Quadrature resolution is re-derived from the (possibly buffered) window.
  return SequenceStructure::fourier(dual_base(s.base), q, 0);
}

// Squared minus-norm objective with frozen tails. The split is frozen at the
// summable ends: on each side of the window the functional c sits with the
// structure whose weight decays there.
class MinusObjective {
 public:
  MinusObjective(const StructuredCouple& dsc, Complex a0, Complex a1, int K)
      : K_(K), L_(2 * K + 1), n_(dsc.dim()) {
    const double m0 = std::abs(a0), m1 = std::abs(a1);
    require(m0 != 1.0 && m1 != 1.0 && (m0 < 1.0) != (m1 < 1.0),
            "minus-norm weights must decay on opposite sides");
    side_[0] = make_side(dsc.struct0, a0, /*is_xs=*/true);
    side_[1] = make_side(dsc.struct1, a1, /*is_xs=*/false);
  }

  double value(const CMat& xs, const CVec& c) const {
    double a = side_value(side_[0], xs, c, nullptr, nullptr);
    double b = side_value(side_[1], ys_of(xs, c), c, nullptr, nullptr);
    return a * a + b * b;
  }

  // g_xs sized n x L; g_c (optional) accumulates the c-dependence of both
  // sides, including through ys = c - xs.
  double value_and_grad(const CMat& xs, const CVec& c, CMat& g_xs,
                        CVec* g_c) const {
    g_xs = CMat::Zero(n_, L_);
    if (g_c) g_c->setZero();

    CMat ga(n_, L_);
    CVec gca = CVec::Zero(n_);
    double a = side_value(side_[0], xs, c, &ga, g_c ? &gca : nullptr);

    CMat gb(n_, L_);
    CVec gcb = CVec::Zero(n_);
    double b = side_value(side_[1], ys_of(xs, c), c, &gb, g_c ? &gcb : nullptr);

    g_xs = 2.0 * a * ga - 2.0 * b * gb;
    if (g_c) {
      // d/dc through ys adds the column sum of the side-1 gradient.
      *g_c = 2.0 * a * gca + 2.0 * b * (gcb + gb.rowwise().sum());
    }
    return a * a + b * b;
  }

  RVec preconditioner() const {
    RVec s(L_);
    const RVec& w0 = side_[0].eval->weight_magnitudes();
    const RVec& w1 = side_[1].eval->weight_magnitudes();
    int off = side_[0].buffer;  // same buffer on both sides by construction
    for (int k = 0; k < L_; ++k) {
      double u0 = w0[k + off], u1 = w1[k + off];
      s[k] = std::sqrt(u0 * u0 + u1 * u1);
    }
    return s;
  }

  /// Per-position factors sigma_k = |a1|^{2k} / (|a0|^{2k} + |a1|^{2k}); the
  /// split xs_k = sigma_k c is optimal for the scalar quadratic model and a
  /// good start (and change of variables) in general.
  RVec logistic_profile() const {
    RVec sig(L_);
    const RVec& w0 = side_[0].eval->weight_magnitudes();
    const RVec& w1 = side_[1].eval->weight_magnitudes();
    int off = side_[0].buffer;
    for (int k = 0; k < L_; ++k) {
      double u0 = w0[k + off], u1 = w1[k + off];
      sig[k] = u1 * u1 / (u0 * u0 + u1 * u1);
    }
    return sig;
  }

  CMat initial_split(const CVec& c) const {
    RVec sig = logistic_profile();
    CMat xs(n_, L_);
    for (int k = 0; k < L_; ++k) xs.col(k) = sig[k] * c;
    return xs;
  }

  bool smooth() const {
    return side_[0].s.smooth_for_solver() && side_[1].s.smooth_for_solver();
  }

 private:
  struct Side {
    SequenceStructure s;
    Complex a;
    bool frozen_right;   // c occupies k > K (else k < -K)
    bool analytic_tail;  // lp kind: geometric tail folded in analytically
    double tail_factor = 0.0;
    int buffer = 0;
    std::unique_ptr<StructureEval> eval;

    Side() : s(SequenceStructure::lp(NormedSpace::lp(1, 2.0), 2.0)), a(1.0),
             frozen_right(false), analytic_tail(true) {}
  };

  Side make_side(const SequenceStructure& s, Complex a, bool /*is_xs*/) const {
    Side side;
    side.s = s;
    side.a = a;
    const double m = std::abs(a);
    // Each side is frozen at c on the end where its own weight decays; the
    // constructor check guarantees the two sides pick opposite ends.
    side.frozen_right = m < 1.0;
    // Decay ratio toward the frozen end.
    const double r = side.frozen_right ? m : 1.0 / m;

    if (s.kind == SeqKind::lp) {
      side.analytic_tail = true;
      const double q = s.p;
      double rho = std::pow(r, q);
      side.tail_factor = std::pow(rho, K_ + 1) / (1.0 - rho);
      side.buffer = 0;
      side.eval = std::make_unique<StructureEval>(s, a, K_);
    } else {
      side.analytic_tail = false;
      // Buffer long enough that the neglected l1-dominated mass is ~1e-13.
      int B = static_cast<int>(
          std::ceil((13.0 * std::log(10.0) - std::log(1.0 - r)) / (-std::log(r))));
      side.buffer = std::max(1, B);
      side.eval = std::make_unique<StructureEval>(s, a, K_ + side.buffer);
    }
    return side;
  }

  CMat ys_of(const CMat& xs, const CVec& c) const {
    CMat ys(n_, L_);
    for (int k = 0; k < L_; ++k) ys.col(k) = c - xs.col(k);
    return ys;
  }

  // Norm of one side including its frozen tail. `block` is the window part
  // (xs or ys). g_block/g_c are gradients of the NORM when requested.
  double side_value(const Side& side, const CMat& block, const CVec& c,
                    CMat* g_block, CVec* g_c) const {
    if (side.analytic_tail) {
      const double q = side.s.p;
      CMat g(n_, L_);
      double nw = g_block ? side.eval->norm_and_grad(block, g)
                          : side.eval->norm(block);
      double bc = side.s.base.norm(c);
      double total = std::pow(std::pow(nw, q) + side.tail_factor * std::pow(bc, q),
                              1.0 / q);
      if (g_block) {
        if (total > 0.0) {
          double cw = nw > 0.0 ? std::pow(nw / total, q - 1.0) : 0.0;
          *g_block = cw * g;
          if (g_c && bc > 0.0)
            *g_c = side.tail_factor * std::pow(bc / total, q - 1.0) *
                   side.s.base.subgradient(c);
        } else {
          g_block->setZero();
        }
      }
      return total;
    }

    // Buffered path: [frozen | window | frozen] with c at the decaying end.
    const int B = side.buffer;
    const int Lx = L_ + 2 * B;
    CMat ext = CMat::Zero(n_, Lx);
    ext.middleCols(B, L_) = block;
    if (side.frozen_right)
      for (int j = 0; j < B; ++j) ext.col(B + L_ + j) = c;
    else
      for (int j = 0; j < B; ++j) ext.col(j) = c;

    if (!g_block) return side.eval->norm(ext);

    CMat gext(n_, Lx);
    double nw = side.eval->norm_and_grad(ext, gext);
    *g_block = gext.middleCols(B, L_);
    if (g_c) {
      g_c->setZero();
      if (side.frozen_right)
        for (int j = 0; j < B; ++j) *g_c += gext.col(B + L_ + j);
      else
        for (int j = 0; j < B; ++j) *g_c += gext.col(j);
    }
    return nw;
  }

  int K_, L_, n_;
  Side side_[2];
};

}  // namespace

StructuredCouple dual_couple(const StructuredCouple& sc) {
  return StructuredCouple(dual_structure(sc.struct0),
                          dual_structure(sc.struct1), sc.K);
}

MinusNormResult minus_norm_weighted(const StructuredCouple& dsc,
                                    const CVec& xstar, Complex a0, Complex a1,
                                    const SolveOptions& opts) {
  require(xstar.size() == dsc.dim(), "dimension mismatch in minus_norm");
  const int K = dsc.K;
  const int L = 2 * K + 1;
  const int n = dsc.dim();

  MinusNormResult res;
  res.pair.functional = xstar;
  if (xstar.norm() == 0.0) {
    res.pair.xs = TruncSeq(n, K);
    res.report.converged = true;
    return res;
  }

  MinusObjective obj(dsc, a0, a1, K);
  const RVec s = opts.precondition ? obj.preconditioner() : RVec::Ones(L);
  const RVec inv_s = s.cwiseInverse();

  auto to_xs = [&](const CMat& u) {
    CMat xs = u;
    for (int k = 0; k < L; ++k) xs.col(k) *= inv_s[k];
    return xs;
  };

  FirstOrderProblem prob;
  prob.smooth = obj.smooth();
  prob.value = [&](const CMat& u) { return obj.value(to_xs(u), xstar); };
  prob.value_and_grad = [&](const CMat& u, CMat& g) {
    CMat gx(n, L);
    double f = obj.value_and_grad(to_xs(u), xstar, gx, nullptr);
    g = gx;
    for (int k = 0; k < L; ++k) g.col(k) *= inv_s[k];
    return f;
  };

  CMat u = obj.initial_split(xstar);
  for (int k = 0; k < L; ++k) u.col(k) *= s[k];

  res.report = minimize(prob, u, opts);
  res.pair.xs = TruncSeq(K, to_xs(u));
  res.value = std::sqrt(res.report.value);
  res.report.value = res.value;
  return res;
}

MinusNormResult minus_norm(const StructuredCouple& dsc, const CVec& xstar,
                           StripPoint z, const SolveOptions& opts) {
  auto [a0, a1] = strip_weights(z);
  return minus_norm_weighted(dsc, xstar, a0, a1, opts);
}

DualityGapResult duality_gap(const StructuredCouple& sc, const CVec& xstar,
                             StripPoint z, const SolveOptions& opts,
                             int starts) {
  require(xstar.size() == sc.dim(), "dimension mismatch in duality_gap");
  require(xstar.norm() > 0.0, "duality gap needs a nonzero functional");
  const int K = sc.K;
  const int L = 2 * K + 1;
  const int n = sc.dim();

  auto [a0, a1] = strip_weights(z);
  StructureEval e0(sc.struct0, a0, K);
  StructureEval e1(sc.struct1, a1, K);
  RVec s(L);
  {
    const RVec& m0 = e0.weight_magnitudes();
    const RVec& m1 = e1.weight_magnitudes();
    for (int k = 0; k < L; ++k)
      s[k] = opts.precondition ? std::hypot(m0[k], m1[k]) : 1.0;
  }
  const RVec inv_s = s.cwiseInverse();

  auto to_v = [&](const CMat& u) {
    CMat v = u;
    for (int k = 0; k < L; ++k) v.col(k) *= inv_s[k];
    return v;
  };

  // sup{Re<x*, x> : ||x||_{z,2} <= 1} = 1 / inf{sqrt(Phi(v)) : Re<x*, sigma v> = 1}
  CMat cdir(n, L);  // Hermitian representation of the affine constraint
  for (int k = 0; k < L; ++k) cdir.col(k) = xstar.conjugate() * inv_s[k];
  const double cnorm2 = cdir.squaredNorm();

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
    double r = 1.0 - re_dot(cdir, u);
    u += (r / cnorm2) * cdir;
  };

  DualityGapResult res;
  Rng rng(opts.seed ^ 0xd0a1ull);
  double best = std::numeric_limits<double>::infinity();
  CMat best_u;
  for (int t = 0; t < std::max(1, starts); ++t) {
    CMat u;
    if (t == 0) {
      // delta_0 tensor x tilde with Re<x*, x tilde> = 1.
      CVec xt = xstar.conjugate() / xstar.squaredNorm();
      u = CMat::Zero(n, L);
      u.col(K) = s[K] * xt;
    } else {
      u = rng.cnormal_mat(n, L);
    }
    SolveReport rep = minimize(prob, u, opts);
    if (rep.value < best) {
      best = rep.value;
      best_u = u;
      res.lhs_report = rep;
    }
  }

  res.lhs = 1.0 / std::sqrt(best);
  res.lhs_report.value = res.lhs;
  {
    CMat v = to_v(best_u);
    res.witness = sigma(TruncSeq(K, v)) / std::sqrt(best);
  }

  MinusNormResult mn = minus_norm(dual_couple(sc), xstar, z, opts);
  res.rhs = mn.value;
  res.rhs_report = mn.report;
  res.gap = std::abs(res.lhs - res.rhs) / res.rhs;
  return res;
}

TruncSeq a_operator(const DualPair& dp) {
  const int K = dp.xs.K();
  TruncSeq out(dp.xs.dim(), K + 1);
  for (int k = -K; k <= K + 1; ++k) {
    CVec hi = k <= K ? dp.xs.entry(k) : dp.functional;  // frozen tail at x*
    CVec lo = k - 1 >= -K ? dp.xs.entry(k - 1) : CVec(CVec::Zero(dp.xs.dim()));
    out.set_entry(k, CVec(hi - lo));
  }
  return out;
}

PeriodicFunction g_function(const DualPair& dp, StripPoint z0,
                            const StructuredCouple& dsc) {
  TruncSeq a = a_operator(dp);
  StructuredCouple wide(dsc.struct0, dsc.struct1, a.K());
  return PeriodicFunction(z0, std::move(a), std::move(wide));
}

NormingFunctional norming_functional(const StructuredCouple& sc,
                                     const CVec& x_unit, StripPoint z,
                                     const SolveOptions& opts,
                                     const CVec* multiplier_hint, int starts) {
  require(x_unit.size() == sc.dim(), "dimension mismatch");
  require(x_unit.norm() > 0.0, "norming functional needs a nonzero point");
  const int K = sc.K;
  const int L = 2 * K + 1;
  const int n = sc.dim();

  StructuredCouple dsc = dual_couple(sc);
  auto [a0, a1] = strip_weights(z);
  MinusObjective obj(dsc, a0, a1, K);

  // Variables (c, d) with xs = d + sigma c: measuring the split as a deviation
  // from the logistic profile keeps the curvature seen by c bounded (the raw
  // (c, xs) parametrization couples c to the e^{2K(1-theta)}-weighted columns
  // and stalls first-order methods).
  const RVec sigma = obj.logistic_profile();
  RVec s(L + 1);  // column 0 is c, columns 1.. are d
  s[0] = 1.0;
  if (opts.precondition)
    s.tail(L) = obj.preconditioner();
  else
    s.tail(L).setOnes();
  const RVec inv_s = s.cwiseInverse();

  auto split_of = [&](const CMat& u) {
    CMat xs(n, L);
    for (int k = 0; k < L; ++k)
      xs.col(k) = u.col(k + 1) * inv_s[k + 1] + sigma[k] * u.col(0);
    return xs;
  };

  FirstOrderProblem prob;
  prob.smooth = obj.smooth();
  prob.value = [&](const CMat& u) {
    return obj.value(split_of(u), u.col(0));
  };
  prob.value_and_grad = [&](const CMat& u, CMat& g) {
    CMat gx(n, L);
    CVec gc(n);
    double f = obj.value_and_grad(split_of(u), u.col(0), gx, &gc);
    g.resize(n, L + 1);
    g.col(0) = gc;
    for (int k = 0; k < L; ++k) {
      g.col(0) += sigma[k] * gx.col(k);
      g.col(k + 1) = gx.col(k) * inv_s[k + 1];
    }
    return f;
  };
  // <c, x> = 1 exactly (complex equality, bilinear pairing).
  prob.project = [&](CMat& u) {
    Complex r = Complex(1.0) - bilinear(u.col(0), x_unit);
    u.col(0) += x_unit.conjugate() * (r / x_unit.squaredNorm());
  };

  Rng rng(opts.seed ^ 0x90f1ull);
  NormingFunctional out;
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < std::max(1, starts); ++t) {
    CVec c;
    if (t == 0 && multiplier_hint != nullptr && multiplier_hint->norm() > 0.0)
      c = multiplier_hint->conjugate();
    else if (t <= 1)
      c = x_unit.conjugate();
    else
      c = rng.cnormal_vec(n);
    Complex pair_val = bilinear(c, x_unit);
    if (std::abs(pair_val) < 1e-12)
      c = x_unit.conjugate();
    else
      c /= pair_val;

    CMat u = CMat::Zero(n, L + 1);
    u.col(0) = c;  // d = 0: start exactly on the logistic split

    SolveReport rep = minimize(prob, u, opts);
    if (rep.value < best) {
      best = rep.value;
      out.xstar = u.col(0);
      out.split = DualPair{TruncSeq(K, split_of(u)), out.xstar};
      out.report = rep;
    }
  }

  out.dual_norm = std::sqrt(best);
  out.quality = out.dual_norm - 1.0;
  out.report.value = out.dual_norm;
  return out;
}

MaxModulusResult max_modulus_pairing(const StructuredCouple& sc, const CVec& x,
                                     StripPoint z0,
                                     const std::vector<StripPoint>& grid,
                                     const SolveOptions& opts) {
  MaxModulusResult res;
  res.primal = interp_norm(sc, x, z0, opts);
  require(res.primal.value > 0.0, "max-modulus pairing needs a nonzero point");
  const double val = res.primal.value;
  CVec x_unit = x / val;
  TruncSeq coeffs = (Complex(1.0 / val)) * res.primal.dec.seq;

  CVec hint = res.primal.dec.multiplier / (2.0 * val);
  res.nf = norming_functional(sc, x_unit, z0, opts, &hint);
  if (res.nf.quality > 0.05) {
    std::ostringstream msg;
    msg << "norming functional quality " << res.nf.quality
        << " exceeds tolerance (dual norm " << res.nf.dual_norm
        << ", solver iterations " << res.nf.report.iterations << ")";
    throw Error(msg.str());
  }

  StructuredCouple dsc = dual_couple(sc);
  PeriodicFunction g = g_function(res.nf.split, z0, dsc);
  PeriodicFunction f(z0, coeffs, sc);

  res.base_defect =
      std::abs(bilinear(pf_eval(g, z0.value()), pf_eval(f, z0.value())) -
               Complex(1.0));
  for (const StripPoint& zp : grid) {
    Complex F = bilinear(pf_eval(g, zp.value()), pf_eval(f, zp.value()));
    res.rows.push_back({zp.value(), F});
    res.grid_defect = std::max(res.grid_defect, std::abs(F) - 1.0);
  }
  return res;
}

}  // namespace interp
