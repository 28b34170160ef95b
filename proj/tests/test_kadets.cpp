#include "interp/kadets.hpp"
#include "interp/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace interp;

namespace {

StructuredCouple make_sc(int dim, int K, Rng& rng) {
  RVec w0(dim), w1(dim);
  for (int i = 0; i < dim; ++i) {
    w0[i] = 0.5 + rng.uniform();
    w1[i] = 0.5 + rng.uniform();
  }
  return StructuredCouple(
      SequenceStructure::lp(NormedSpace::lp(dim, 2.0, w0), 2.0),
      SequenceStructure::lp(NormedSpace::lp(dim, 3.0, w1), 2.0), K);
}

PeriodicFunction random_kernel_function(const StructuredCouple& sc,
                                        StripPoint base, StripPoint s,
                                        Rng& rng, bool unit = false) {
  TruncSeq h(sc.dim(), sc.K);
  h.entries() = rng.cnormal_mat(sc.dim(), 2 * sc.K + 1);
  PeriodicFunction hf(base, std::move(h), sc);
  PeriodicFunction f = multiply_shift(hf, std::exp(s.value()));
  if (!unit) return f;
  double n = pf_h2_norm(f);
  return PeriodicFunction(f.z0, Complex(1.0 / n) * f.coeffs, f.sc);
}

}  // namespace

TEST_CASE("cs_constant: values, symmetry point, boundary blow-up") {
  double c = cs_constant(StripPoint(0.5));
  CHECK(c == doctest::Approx(1.0 / (std::exp(0.5) - 1.0)).epsilon(1e-12));
  CHECK(c == doctest::Approx(1.5414940825).epsilon(1e-8));

  // The two branches cross where e^s - 1 = e - e^s.
  double sigma = std::log(0.5 * (std::exp(1.0) + 1.0));
  CHECK(1.0 / (std::exp(sigma) - 1.0) ==
        doctest::Approx(1.0 / (std::exp(1.0) - std::exp(sigma))).epsilon(1e-12));
  CHECK(cs_constant(StripPoint(sigma - 1e-4)) >= cs_constant(StripPoint(sigma)));
  CHECK(cs_constant(StripPoint(sigma + 1e-4)) >= cs_constant(StripPoint(sigma)));

  CHECK(cs_constant(StripPoint(1e-8)) > 1e7);
  CHECK(cs_constant(StripPoint(1.0 - 1e-8)) > 1e7);

  // On a compact substrip the sup sits at an endpoint of each branch.
  double a = 0.2, b = 0.8;
  double sup_interior = 0.0;
  for (int i = 0; i <= 100; ++i)
    sup_interior = std::max(
        sup_interior, cs_constant(StripPoint(a + (b - a) * i / 100.0)));
  CHECK(sup_interior ==
        doctest::Approx(std::max(cs_constant(StripPoint(a)),
                                 cs_constant(StripPoint(b)))));
}

TEST_CASE("division: exact for linear factors, zero for zero") {
  Rng rng(100);
  StructuredCouple sc = make_sc(2, 6, rng);
  StripPoint t0(0.5, 0.1), s(0.3);

  // f = (e^z - e^s) c for a constant c divides back to the constant.
  CVec c = rng.cnormal_vec(2);
  PeriodicFunction cf(t0, TruncSeq::delta(0, 0, c), sc);
  PeriodicFunction f = multiply_shift(cf, std::exp(s.value()));
  DivisionResult dv = divide_vanishing(f, s);
  CHECK((pf_eval(dv.g, Complex(0.62, -0.8)) - c).norm() <= 1e-10 * c.norm());
  CHECK(dv.reconstruction_defect <= 1e-8 * pf_h2_norm(f));

  PeriodicFunction zero(t0, TruncSeq(2, 3), sc);
  DivisionResult dz = divide_vanishing(zero, s);
  CHECK(pf_h2_norm(dz.g) == 0.0);
}

TEST_CASE("division: construct-then-divide round trip, both sides of Re s") {
  Rng rng(101);
  StructuredCouple sc = make_sc(2, 5, rng);
  for (StripPoint s : {StripPoint(0.25), StripPoint(0.75, 0.6)}) {
    for (StripPoint base : {StripPoint(0.5), StripPoint(0.4, -0.3)}) {
      TruncSeq h(2, 5);
      h.entries() = rng.cnormal_mat(2, 11);
      PeriodicFunction hf(base, h, sc);
      PeriodicFunction f = multiply_shift(hf, std::exp(s.value()));
      DivisionResult dv = divide_vanishing(f, s);
      for (int k = -dv.g.coeffs.K(); k <= dv.g.coeffs.K(); ++k) {
        CVec expect = h.entry(k);
        CHECK((dv.g.coeffs.entry(k) - expect).norm() <=
              1e-8 * (1.0 + expect.norm()));
      }
      CHECK(dv.reconstruction_defect <= 1e-8 * pf_h2_norm(f));
    }
  }
}

TEST_CASE("division: norm bound with the derived constant, no violations") {
  Rng rng(102);
  StructuredCouple sc = make_sc(2, 5, rng);
  for (StripPoint s : {StripPoint(0.2), StripPoint(0.5), StripPoint(0.8)}) {
    for (int t = 0; t < 30; ++t) {
      PeriodicFunction f = random_kernel_function(sc, StripPoint(0.5), s, rng);
      DivisionResult dv = divide_vanishing(f, s);
      CHECK(pf_h2_norm(dv.g) <= cs_constant(s) * pf_h2_norm(f) * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("division rejects non-vanishing input unless opted in") {
  Rng rng(103);
  StructuredCouple sc = make_sc(2, 4, rng);
  TruncSeq c(2, 4);
  c.entries() = rng.cnormal_mat(2, 9);
  PeriodicFunction f(StripPoint(0.5), c, sc);
  StripPoint s(0.4);
  CHECK_THROWS_AS(divide_vanishing(f, s), Error);

  DivisionResult dv = divide_vanishing(f, s, /*subtract_value=*/true);
  CVec at_s = pf_eval(multiply_shift(dv.g, std::exp(s.value())), s.value());
  CHECK(at_s.norm() <= 1e-8 * pf_h2_norm(f));
}

TEST_CASE("kernel perturbation: identity at t = s, scalar closed form, bound") {
  Rng rng(104);
  StructuredCouple sc = make_sc(1, 4, rng);
  StripPoint t0(0.5), s(0.35);

  PeriodicFunction f = random_kernel_function(sc, t0, s, rng, /*unit=*/true);
  PerturbResult same = perturb_kernel(f, s, s);
  CHECK(same.defect <= 1e-9);

  // Two-coefficient closed form: f = (e^z - e^s)/N_s, h = (e^z - e^t)/N_t.
  StripPoint tp(0.55);
  CVec one = CVec::Ones(1);
  PeriodicFunction cf(t0, TruncSeq::delta(0, 0, one), sc);
  PeriodicFunction fs = multiply_shift(cf, std::exp(s.value()));
  PeriodicFunction ft = multiply_shift(cf, std::exp(tp.value()));
  double Ns = pf_h2_norm(fs), Nt = pf_h2_norm(ft);
  TruncSeq diff = Complex(1.0 / Ns) * fs.coeffs - Complex(1.0 / Nt) * ft.coeffs;
  double expected = pf_h2_norm(PeriodicFunction(t0, diff, fs.sc));

  PeriodicFunction funit(fs.z0, Complex(1.0 / Ns) * fs.coeffs, fs.sc);
  PerturbResult pr = perturb_kernel(funit, s, tp);
  CHECK(pr.defect == doctest::Approx(expected).epsilon(1e-8));
  CHECK(pr.defect <= pr.bound * (1.0 + 1e-10));
  CHECK(std::abs(pf_h2_norm(pr.h) - 1.0) <= 1e-9);
  CHECK(cap2_norm(sc.couple(), pf_eval(pr.h, tp.value())) <= 1e-8);
}

TEST_CASE("kernel perturbation: random trials, zero violations") {
  Rng rng(105);
  StructuredCouple sc = make_sc(2, 4, rng);
  StripPoint s(0.45);
  StripPoint tp(0.55, 0.05);
  for (int t = 0; t < 40; ++t) {
    PeriodicFunction f = random_kernel_function(sc, StripPoint(0.5), s, rng,
                                                /*unit=*/true);
    PerturbResult pr = perturb_kernel(f, s, tp);
    CHECK(pr.defect <= pr.bound * (1.0 + 1e-10));
  }
}

TEST_CASE("kadets bound: zero at s = t, symmetric, linear decay") {
  StripPoint s(0.3), t(0.5);
  CHECK(kadets_bound(s, s) == 0.0);
  CHECK(kadets_bound(s, t) == doctest::Approx(kadets_bound(t, s)));
  CHECK(kadets_bound(s, t) ==
        doctest::Approx(4.0 * std::abs(std::exp(0.5) - std::exp(0.3)) *
                        std::max(cs_constant(s), cs_constant(t))));
  double prev = kadets_bound(s, StripPoint(0.3 + 0.1));
  for (double d : {0.05, 0.02, 0.01}) {
    double b = kadets_bound(s, StripPoint(0.3 + d));
    CHECK(b < prev);
    // linear in |e^t - e^s|
    CHECK(b / (std::exp(0.3 + d) - std::exp(0.3)) ==
          doctest::Approx(4.0 * cs_constant(StripPoint(0.3))).epsilon(1e-6));
    prev = b;
  }
}
