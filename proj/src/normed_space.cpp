#include "interp/normed_space.hpp"

#include "interp/rng.hpp"
#include "interp/solve.hpp"

#include <algorithm>
#include <cmath>

namespace interp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

NormedSpace NormedSpace::lp(int dim, double p, RVec weights) {
  require(dim >= 1, "dimension must be positive");
  require(p >= 1.0, "lp exponent must satisfy p >= 1");
  NormedSpace s;
  s.dim_ = dim;
  s.kind_ = NormKind::lp;
  s.p_ = p;
  if (weights.size() == 0) weights = RVec::Ones(dim);
  require(weights.size() == dim, "weight count must match dimension");
  require((weights.array() > 0.0).all(), "weights must be strictly positive");
  s.weights_ = std::move(weights);
  return s;
}

NormedSpace NormedSpace::custom(int dim, EvalFn eval, GradFn grad) {
  require(dim >= 1, "dimension must be positive");
  require(static_cast<bool>(eval), "custom norm needs an evaluation callback");
  NormedSpace s;
  s.dim_ = dim;
  s.kind_ = NormKind::custom;
  s.p_ = 0.0;
  s.eval_ = std::move(eval);
  s.grad_ = std::move(grad);
  return s;
}

bool NormedSpace::smooth() const {
  return kind_ == NormKind::lp && p_ > 1.0 && p_ < kInf;
}

double NormedSpace::norm(const CVec& x) const {
  require(x.size() == dim_, "dimension mismatch in norm evaluation");
  if (kind_ == NormKind::custom) return eval_(x);
  RVec m = (weights_.array() * x.array().abs()).matrix();
  if (p_ == kInf) return m.maxCoeff();
  if (p_ == 1.0) return m.sum();
  if (p_ == 2.0) return m.norm();
  return std::pow(m.array().pow(p_).sum(), 1.0 / p_);
}

CVec NormedSpace::subgradient(const CVec& x) const {
  require(x.size() == dim_, "dimension mismatch in subgradient");
  if (kind_ == NormKind::custom) {
    if (grad_) return grad_(x);
    // Central differences on real and imaginary parts.
    const double h = 1e-6 * (1.0 + eval_(x));
    CVec g(dim_);
    CVec y = x;
    for (int i = 0; i < dim_; ++i) {
      y[i] = x[i] + h;
      double fp = eval_(y);
      y[i] = x[i] - h;
      double fm = eval_(y);
      double dre = (fp - fm) / (2.0 * h);
      y[i] = x[i] + Complex(0.0, h);
      fp = eval_(y);
      y[i] = x[i] - Complex(0.0, h);
      fm = eval_(y);
      double dim_part = (fp - fm) / (2.0 * h);
      y[i] = x[i];
      g[i] = Complex(dre, dim_part);
    }
    return g;
  }

  CVec g = CVec::Zero(dim_);
  if (p_ == kInf) {
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < dim_; ++i) {
      double m = weights_[i] * std::abs(x[i]);
      if (m > best) {
        best = m;
        imax = i;
      }
    }
    if (best > 0.0) g[imax] = weights_[imax] * phase(x[imax]);
    return g;
  }
  if (p_ == 1.0) {
    for (int i = 0; i < dim_; ++i) g[i] = weights_[i] * phase(x[i]);
    return g;
  }
  double n = norm(x);
  if (n == 0.0) return g;
  for (int i = 0; i < dim_; ++i) {
    double m = std::abs(x[i]);
    if (m == 0.0) continue;
    g[i] = std::pow(n, 1.0 - p_) * std::pow(weights_[i], p_) *
           std::pow(m, p_ - 1.0) * phase(x[i]);
  }
  return g;
}

NormedSpace NormedSpace::dual() const {
  require(kind_ == NormKind::lp, "closed-form dual only for lp kinds");
  double q = p_ == 1.0 ? kInf : (p_ == kInf ? 1.0 : p_ / (p_ - 1.0));
  return lp(dim_, q, weights_.cwiseInverse());
}

double norm_eval(const NormedSpace& space, const CVec& x) {
  return space.norm(x);
}

double dual_norm_eval(const NormedSpace& space, const CVec& f) {
  require(f.size() == space.dim(), "dimension mismatch in dual norm");
  if (space.has_closed_dual()) return space.dual().norm(f);
  return dual_norm_eval_ascent(space, f).value;
}

DualNormResult dual_norm_eval_ascent(const NormedSpace& space, const CVec& f,
                                     const SolveOptions& opts, int starts) {
  DualNormResult res;
  if (f.norm() == 0.0) {
    res.maximizer = CVec::Zero(space.dim());
    res.report.converged = true;
    return res;
  }

  auto normalize = [&](CVec& x) {
    double n = space.norm(x);
    if (n > 0.0) x /= n;
  };
  auto objective = [&](const CVec& x) { return bilinear(f, x).real(); };

  Rng rng(opts.seed ^ 0x5eedull);
  const CVec dir = f.conjugate();  // Hermitian gradient of Re<f, x>
  double best = -kInf;
  CVec best_x;
  int total_iter = 0;

  for (int s = 0; s < starts; ++s) {
    CVec x = s == 0 ? CVec(dir) : CVec(rng.cnormal_vec(space.dim()));
    normalize(x);
    double fx = objective(x);
    if (fx < 0.0) {
      x = -x;
      fx = -fx;
    }
    double step = 1.0;
    for (int it = 0; it < 2000; ++it) {
      ++total_iter;
      // Ascend along the sphere: project the gradient onto the tangent space
      // of the norm sphere at x, then renormalize.
      CVec nu = space.subgradient(x);
      double nn = re_dot(nu, nu);
      if (nn == 0.0) break;
      CVec d = dir - (re_dot(nu, dir) / nn) * nu;
      if (d.norm() <= 1e-12 * (1.0 + dir.norm())) break;
      bool improved = false;
      while (step > 1e-14) {
        CVec cand = x + step * d;
        normalize(cand);
        double fc = objective(cand);
        if (fc > fx + 1e-15 * (1.0 + std::abs(fx))) {
          x = cand;
          fx = fc;
          step *= 1.5;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (fx > best) {
      best = fx;
      best_x = x;
    }
  }

  res.value = best;
  res.maximizer = best_x;
  res.report.value = best;
  res.report.iterations = total_iter;
  res.report.converged = true;
  res.report.feasibility = std::max(0.0, space.norm(best_x) - 1.0);
  return res;
}

double cap2_norm(const Couple& couple, const CVec& x) {
  require(x.size() == couple.dim(), "dimension mismatch in cap2 norm");
  return std::hypot(couple.space0.norm(x), couple.space1.norm(x));
}

Sum2Result sum2_norm(const Couple& couple, const CVec& x,
                     const SolveOptions& opts) {
  require(x.size() == couple.dim(), "dimension mismatch in sum2 norm");
  Sum2Result res;
  if (x.norm() == 0.0) {
    res.split = CVec::Zero(couple.dim());
    res.report.converged = true;
    return res;
  }

  auto phi = [&](const CMat& u) {
    double a = couple.space0.norm(u.col(0));
    double b = couple.space1.norm(x - u.col(0));
    return a * a + b * b;
  };
  FirstOrderProblem prob;
  prob.smooth = couple.space0.smooth() && couple.space1.smooth();
  prob.value = phi;
  prob.value_and_grad = [&](const CMat& u, CMat& g) {
    CVec r = x - u.col(0);
    double a = couple.space0.norm(u.col(0));
    double b = couple.space1.norm(r);
    g = 2.0 * a * couple.space0.subgradient(u.col(0)) -
        2.0 * b * couple.space1.subgradient(r);
    return a * a + b * b;
  };

  // Candidate starts cover both the balanced and the degenerate-scale regimes.
  CMat u(couple.dim(), 1);
  double fbest = kInf;
  for (const CVec& cand :
       {CVec(0.5 * x), CVec(x), CVec(CVec::Zero(couple.dim()))}) {
    CMat c = cand;
    double fc = phi(c);
    if (fc < fbest) {
      fbest = fc;
      u = c;
    }
  }

  res.report = minimize(prob, u, opts);
  res.split = u.col(0);
  res.value = std::sqrt(res.report.value);
  res.report.value = res.value;
  return res;
}

double diag_operator_norm(const NormedSpace& space, const CVec& d) {
  require(d.size() == space.dim(), "dimension mismatch in operator norm");
  require(space.kind() == NormKind::lp,
          "diagonal operator norm implemented for lp kinds");
  return d.array().abs().maxCoeff();
}

}  // namespace interp
