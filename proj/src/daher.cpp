#include "interp/daher.hpp"

#include "interp/rng.hpp"

#include <cmath>

namespace interp {

OptimalFunction gamma(const StructuredCouple& sc, const CVec& x, StripPoint z0,
                      const SolveOptions& opts) {
  require(x.norm() > 0.0, "optimal function needs a nonzero point");
  InterpResult r = interp_norm(sc, x, z0, opts);
  return OptimalFunction{x, z0, PeriodicFunction(z0, r.dec.seq, sc), r.report};
}

CVec daher_map(const StructuredCouple& sc, const CVec& x, StripPoint z,
               StripPoint w, const SolveOptions& opts) {
  OptimalFunction of = gamma(sc, x, z, opts);
  return pf_eval(of.f, w.value());
}

double round_trip_error(const StructuredCouple& sc, const CVec& x,
                        StripPoint z, StripPoint w, const SolveOptions& opts) {
  CVec y = daher_map(sc, x, z, w, opts);
  double yn = interp_norm(sc, y, w, opts).value;
  require(yn > 0.0, "degenerate image in round trip");
  CVec back = daher_map(sc, CVec(y / yn), w, z, opts);
  return cap2_norm(sc.couple(), back - x);
}

std::vector<ModulusSample> modulus_experiment(const StructuredCouple& sc,
                                              StripPoint z, StripPoint w,
                                              int pairs, std::uint64_t seed,
                                              const SolveOptions& opts) {
  require(pairs >= 1, "need at least one pair");
  std::vector<ModulusSample> out;
  out.reserve(pairs);
  Rng rng(seed);
  const int n = sc.dim();

  auto sphere_point = [&](CVec& x, PeriodicFunction& f) {
    CVec raw = rng.cnormal_vec(n);
    InterpResult r = interp_norm(sc, raw, z, opts);
    x = raw / r.value;
    f = PeriodicFunction(z, (Complex(1.0 / r.value)) * r.dec.seq, sc);
  };

  for (int t = 0; t < pairs; ++t) {
    CVec x, y;
    PeriodicFunction fx(z, TruncSeq(n, sc.K), sc), fy = fx;
    sphere_point(x, fx);
    sphere_point(y, fy);

    ModulusSample s;
    s.dist_in = interp_norm(sc, CVec(x - y), z, opts).value;
    s.dist_h2 = pf_h2_norm(PeriodicFunction(z, fx.coeffs - fy.coeffs, sc));
    CVec ux = pf_eval(fx, w.value());
    CVec uy = pf_eval(fy, w.value());
    s.dist_out = interp_norm(sc, CVec(ux - uy), w, opts).value;
    s.midpoint_lhs = interp_norm(sc, CVec(0.5 * (x + y)), z, opts).value;
    s.midpoint_rhs = pf_h2_norm(
        PeriodicFunction(z, Complex(0.5) * (fx.coeffs + fy.coeffs), sc));
    out.push_back(s);
  }
  return out;
}

CVec mazur_map(double p, double q, const CVec& x) {
  require(p >= 1.0 && q >= 1.0, "Mazur map needs exponents in [1, inf)");
  require(x.norm() > 0.0, "Mazur map undefined at 0");
  NormedSpace sp = NormedSpace::lp(static_cast<int>(x.size()), p);
  NormedSpace sq = NormedSpace::lp(static_cast<int>(x.size()), q);
  CVec xn = x / sp.norm(x);
  CVec y(x.size());
  for (int i = 0; i < x.size(); ++i)
    y[i] = phase(xn[i]) * std::pow(std::abs(xn[i]), p / q);
  return y / sq.norm(y);
}

MazurCompare mazur_compare(const StructuredCouple& sc, const CVec& x,
                           double p0, double p1, double theta, double eta,
                           const SolveOptions& opts) {
  auto pt = [&](double t) { return 1.0 / ((1.0 - t) / p0 + t / p1); };
  StripPoint z(theta), w(eta);

  InterpResult nr = interp_norm(sc, x, z, opts);
  require(nr.value > 0.0, "mazur_compare needs a nonzero point");
  CVec u = daher_map(sc, CVec(x / nr.value), z, w, opts);
  CVec m = mazur_map(pt(theta), pt(eta), x);

  MazurCompare res;
  res.u_out = u;
  res.mazur_out = m;
  double c = (u.dot(m)).real() / (u.norm() * m.norm());
  res.angle = std::acos(std::clamp(c, -1.0, 1.0));
  NormedSpace target = NormedSpace::lp(sc.dim(), pt(eta));
  res.norm_ratio = target.norm(u) / target.norm(m);
  return res;
}

}  // namespace interp
