#include "interp/experiment.hpp"

#include "interp/rng.hpp"

#include "json.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace interp {

using nlohmann::json;

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

int thread_count() {
  if (const char* env = std::getenv("INTERP_LAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n) across the worker pool; results must be written
/// to pre-sized slots so row order stays deterministic.
void parallel_for(int n, const std::function<void(int)>& fn) {
  int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string dump(const std::string& hash) const {
    std::ostringstream out;
    out << "config_hash";
    for (const auto& c : columns) out << "," << c;
    out << "\n";
    for (const auto& r : rows) {
      out << hash;
      for (const auto& v : r) out << "," << v;
      out << "\n";
    }
    return out.str();
  }
};

struct Invariant {
  std::string name;
  bool pass = true;
  double worst = 0.0;
};

Complex parse_complex(const json& j) {
  return Complex(j.value("re", 0.0), j.value("im", 0.0));
}

json dump_complex(Complex z) {
  return json{{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace

NormedSpace ExperimentConfig::make_space(const SpaceSpec& s) const {
  require(s.kind == "lp", "config spaces must be lp kinds");
  RVec w;
  if (!s.weights.empty()) {
    require(static_cast<int>(s.weights.size()) == dim,
            "weight count must match dim");
    w.resize(dim);
    for (int i = 0; i < dim; ++i) w[i] = s.weights[i];
  }
  return NormedSpace::lp(dim, s.p, w);
}

SequenceStructure ExperimentConfig::make_structure(const StructSpec& st,
                                                   const SpaceSpec& base) const {
  NormedSpace b = make_space(base);
  if (st.kind == "lp") return SequenceStructure::lp(b, st.p);
  if (st.kind == "fourier") return SequenceStructure::fourier(b, st.p, st.M);
  if (st.kind == "rademacher")
    return SequenceStructure::rademacher(
        b, st.p,
        st.mode == "monte_carlo" ? SampleMode::monte_carlo : SampleMode::exact,
        st.samples, st.seed);
  if (st.kind == "gaussian")
    return SequenceStructure::gaussian(b, st.p, st.samples, st.seed);
  throw Error("unknown structure kind '" + st.kind + "' in config");
}

StructuredCouple ExperimentConfig::make_couple(int K_override) const {
  return StructuredCouple(make_structure(struct0, space0),
                          make_structure(struct1, space1),
                          K_override > 0 ? K_override : K);
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  cfg.experiment = j.value("experiment", "");
  static const std::vector<std::string> known = {
      "norm", "daher", "duality", "maxmod",
      "kadets", "james", "mazur", "convergence"};
  require(std::find(known.begin(), known.end(), cfg.experiment) != known.end(),
          "unknown experiment '" + cfg.experiment + "'");

  cfg.seed = j.value("seed", std::uint64_t(1));
  cfg.K = j.value("K", 8);
  cfg.dim = j.value("dim", 2);
  require(cfg.K >= 0 && cfg.dim >= 1, "invalid K or dim");

  auto parse_space = [&](const char* key, ExperimentConfig::SpaceSpec& out) {
    if (!j.contains(key)) return;
    const json& s = j[key];
    out.kind = s.value("kind", "lp");
    out.p = s.value("p", 2.0);
    if (s.contains("weights"))
      out.weights = s["weights"].get<std::vector<double>>();
  };
  auto parse_struct = [&](const char* key, ExperimentConfig::StructSpec& out) {
    if (!j.contains(key)) return;
    const json& s = j[key];
    out.kind = s.value("kind", "lp");
    out.p = s.value("p", 2.0);
    out.M = s.value("M", 0);
    out.mode = s.value("mode", "exact");
    out.samples = s.value("samples", 0);
    out.seed = s.value("seed", std::uint64_t(0));
  };
  parse_space("space0", cfg.space0);
  parse_space("space1", cfg.space1);
  parse_struct("struct0", cfg.struct0);
  parse_struct("struct1", cfg.struct1);

  if (j.contains("solver")) {
    const json& s = j["solver"];
    cfg.solver.max_iter = s.value("max_iter", cfg.solver.max_iter);
    cfg.solver.tol_grad = s.value("tol_grad", cfg.solver.tol_grad);
    cfg.solver.tol_feas = s.value("tol_feas", cfg.solver.tol_feas);
    cfg.solver.precondition = s.value("precondition", true);
    std::string rule = s.value("step_rule", "auto");
    if (rule == "fista")
      cfg.solver.step_rule = StepRule::fista;
    else if (rule == "subgradient")
      cfg.solver.step_rule = StepRule::subgradient;
    else
      require(rule == "auto", "unknown step rule '" + rule + "'");
  }

  auto parse_points = [&](const char* key, std::vector<Complex>& out) {
    if (!j.contains(key)) return;
    for (const auto& p : j[key]) out.push_back(parse_complex(p));
  };
  parse_points("z", cfg.z_list);
  parse_points("w", cfg.w_list);
  if (j.contains("s") && j["s"].is_object()) cfg.s = parse_complex(j["s"]);
  if (j.contains("t")) cfg.t = parse_complex(j["t"]);

  cfg.points = j.value("points", cfg.points);
  cfg.pairs = j.value("pairs", cfg.pairs);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.operators = j.value("operators", cfg.operators);
  cfg.dogfood = j.value("dogfood", cfg.dogfood);
  if (j.contains("n_list")) cfg.n_list = j["n_list"].get<std::vector<int>>();
  if (j.contains("s_list"))
    cfg.s_list = j["s_list"].get<std::vector<double>>();
  if (j.contains("K_list")) cfg.K_list = j["K_list"].get<std::vector<int>>();
  if (j.contains("M_list")) cfg.M_list = j["M_list"].get<std::vector<int>>();
  cfg.p0 = j.value("p0", cfg.p0);
  cfg.p1 = j.value("p1", cfg.p1);
  cfg.theta = j.value("theta", cfg.theta);
  cfg.eta = j.value("eta", cfg.eta);
  cfg.strict = j.value("strict", false);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);

  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(
                    fnv1a(canonical_config_json(cfg))));
  cfg.config_hash = buf;
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  require(in.good(), "cannot open config file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_config_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["seed"] = cfg.seed;
  j["K"] = cfg.K;
  j["dim"] = cfg.dim;
  auto dump_space = [](const ExperimentConfig::SpaceSpec& s) {
    json out{{"kind", s.kind}, {"p", s.p}};
    if (!s.weights.empty()) out["weights"] = s.weights;
    return out;
  };
  auto dump_struct = [](const ExperimentConfig::StructSpec& s) {
    return json{{"kind", s.kind},     {"p", s.p},
                {"M", s.M},           {"mode", s.mode},
                {"samples", s.samples}, {"seed", s.seed}};
  };
  j["space0"] = dump_space(cfg.space0);
  j["space1"] = dump_space(cfg.space1);
  j["struct0"] = dump_struct(cfg.struct0);
  j["struct1"] = dump_struct(cfg.struct1);
  std::string rule = cfg.solver.step_rule == StepRule::fista ? "fista"
                     : cfg.solver.step_rule == StepRule::subgradient
                         ? "subgradient"
                         : "auto";
  j["solver"] = json{{"max_iter", cfg.solver.max_iter},
                     {"tol_grad", cfg.solver.tol_grad},
                     {"tol_feas", cfg.solver.tol_feas},
                     {"precondition", cfg.solver.precondition},
                     {"step_rule", rule}};
  j["z"] = json::array();
  for (Complex z : cfg.z_list) j["z"].push_back(dump_complex(z));
  j["w"] = json::array();
  for (Complex w : cfg.w_list) j["w"].push_back(dump_complex(w));
  j["s"] = dump_complex(cfg.s);
  j["t"] = dump_complex(cfg.t);
  j["points"] = cfg.points;
  j["pairs"] = cfg.pairs;
  j["trials"] = cfg.trials;
  j["operators"] = cfg.operators;
  j["dogfood"] = cfg.dogfood;
  j["n_list"] = cfg.n_list;
  j["s_list"] = cfg.s_list;
  j["K_list"] = cfg.K_list;
  j["M_list"] = cfg.M_list;
  j["p0"] = cfg.p0;
  j["p1"] = cfg.p1;
  j["theta"] = cfg.theta;
  j["eta"] = cfg.eta;
  j["strict"] = cfg.strict;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Experiment drivers
// ---------------------------------------------------------------------------

namespace {

struct Emitted {
  CsvTable csv;
  json summary;
  std::vector<Invariant> invariants;
  std::vector<std::pair<std::string, std::string>> extra_files;
};

std::vector<StripPoint> default_z(const ExperimentConfig& cfg) {
  std::vector<StripPoint> zs;
  for (Complex z : cfg.z_list) zs.emplace_back(z);
  if (zs.empty()) zs.emplace_back(0.5);
  return zs;
}

Emitted run_norm(const ExperimentConfig& cfg) {
  Emitted out;
  out.csv.columns = {"re_z", "im_z",       "K",         "point",
                     "value", "iterations", "converged", "feasibility"};
  StructuredCouple sc = cfg.make_couple();
  auto zs = default_z(cfg);
  Invariant feas{"feasibility", true, 0.0};
  Invariant upper{"value_below_cap2", true, 0.0};

  const int cells = static_cast<int>(zs.size()) * cfg.points;
  std::vector<std::vector<std::string>> rows(cells);
  std::vector<std::array<double, 2>> checks(cells);
  parallel_for(cells, [&](int cell) {
    int zi = cell / cfg.points, pi = cell % cfg.points;
    Rng rng = Rng(cfg.seed).fork(pi);
    CVec x = rng.cnormal_vec(cfg.dim);
    InterpResult r = interp_norm(sc, x, zs[zi], cfg.solver);
    double cap = cap2_norm(sc.couple(), x);
    rows[cell] = {fmt17(zs[zi].re()),   fmt17(zs[zi].im()),
                  std::to_string(sc.K), std::to_string(pi),
                  fmt17(r.value),       std::to_string(r.report.iterations),
                  std::to_string(int(r.report.converged)),
                  fmt17(r.dec.residual)};
    checks[cell] = {r.dec.residual / (1.0 + cap), r.value / cap - 1.0};
  });
  for (int c = 0; c < cells; ++c) {
    out.csv.rows.push_back(rows[c]);
    feas.worst = std::max(feas.worst, checks[c][0]);
    if (checks[c][0] > 1e-8) feas.pass = false;
    upper.worst = std::max(upper.worst, checks[c][1]);
    if (checks[c][1] > 1e-9) upper.pass = false;
  }
  out.invariants = {feas, upper};

  if (cfg.operators > 0) {
    // Diagonal operators: ||Tx||_{z,2} <= e M0^{1-Re z} M1^{Re z} ||x||_{z,2}.
    Invariant ebound{"diagonal_operator_e_bound", true, 0.0};
    StripPoint z = zs[0];
    std::vector<double> ratios(cfg.operators);
    parallel_for(cfg.operators, [&](int oi) {
      Rng rng = Rng(cfg.seed ^ 0x09ull).fork(oi);
      CVec x = rng.cnormal_vec(cfg.dim);
      CVec d = rng.cnormal_vec(cfg.dim);
      double m0 = diag_operator_norm(sc.struct0.base, d);
      double m1 = diag_operator_norm(sc.struct1.base, d);
      double nx = interp_norm(sc, x, z, cfg.solver).value;
      double ntx =
          interp_norm(sc, CVec(d.cwiseProduct(x)), z, cfg.solver).value;
      double bound = std::exp(1.0) * std::pow(m0, 1.0 - z.re()) *
                     std::pow(m1, z.re()) * nx;
      ratios[oi] = ntx / bound;
    });
    for (double r : ratios) {
      ebound.worst = std::max(ebound.worst, r);
      if (r > 1.0 + 1e-9) ebound.pass = false;
    }
    out.invariants.push_back(ebound);
    out.summary["operator_worst_ratio"] = ebound.worst;
  }

  out.summary["cells"] = cells;
  return out;
}

Emitted run_daher(const ExperimentConfig& cfg) {
  Emitted out;
  // Sphere rows carry (norm_out, sphere_defect, round_trip); pair rows carry
  // the modulus-of-continuity columns (dist_in, dist_h2, dist_out) and the
  // midpoint pair. Unused cells stay empty.
  out.csv.columns = {"row_kind",   "re_z",          "im_z",
                     "re_w",       "im_w",          "K",
                     "point",      "norm_out",      "sphere_defect",
                     "round_trip", "dist_in",       "dist_h2",
                     "dist_out",   "midpoint_lhs",  "midpoint_rhs"};
  StructuredCouple sc = cfg.make_couple();
  auto zs = default_z(cfg);
  std::vector<StripPoint> ws;
  for (Complex w : cfg.w_list) ws.emplace_back(w);
  if (ws.empty()) ws.emplace_back(0.7);
  const int n_cells = static_cast<int>(zs.size() * ws.size());

  Invariant upper{"image_norm_upper_bound", true, 0.0};
  Invariant midpoint{"midpoint_inequality", true, 0.0};
  Invariant lipschitz{"output_distance_below_h2_distance", true, 0.0};
  double worst_defect = 0.0, worst_rt = 0.0;

  const int cells = n_cells * cfg.points;
  std::vector<std::vector<std::string>> rows(cells);
  std::vector<std::array<double, 3>> vals(cells);
  parallel_for(cells, [&](int cell) {
    int rest = cell / cfg.points, pi = cell % cfg.points;
    int zi = rest / static_cast<int>(ws.size());
    int wi = rest % static_cast<int>(ws.size());
    Rng rng = Rng(cfg.seed).fork(pi);
    CVec raw = rng.cnormal_vec(cfg.dim);
    CVec x = raw / interp_norm(sc, raw, zs[zi], cfg.solver).value;
    CVec y = daher_map(sc, x, zs[zi], ws[wi], cfg.solver);
    double norm_out = interp_norm(sc, y, ws[wi], cfg.solver).value;
    double rt = round_trip_error(sc, x, zs[zi], ws[wi], cfg.solver);
    rows[cell] = {"sphere",
                  fmt17(zs[zi].re()),
                  fmt17(zs[zi].im()),
                  fmt17(ws[wi].re()),
                  fmt17(ws[wi].im()),
                  std::to_string(sc.K),
                  std::to_string(pi),
                  fmt17(norm_out),
                  fmt17(std::abs(norm_out - 1.0)),
                  fmt17(rt),
                  "", "", "", "", ""};
    vals[cell] = {norm_out, std::abs(norm_out - 1.0), rt};
  });
  for (int c = 0; c < cells; ++c) {
    out.csv.rows.push_back(rows[c]);
    upper.worst = std::max(upper.worst, vals[c][0] - 1.0);
    if (vals[c][0] > 1.0 + 1e-6) upper.pass = false;
    worst_defect = std::max(worst_defect, vals[c][1]);
    worst_rt = std::max(worst_rt, vals[c][2]);
  }

  if (cfg.pairs > 0) {
    std::vector<std::vector<ModulusSample>> cell_rows(n_cells);
    parallel_for(n_cells, [&](int cell) {
      int zi = cell / static_cast<int>(ws.size());
      int wi = cell % static_cast<int>(ws.size());
      cell_rows[cell] = modulus_experiment(sc, zs[zi], ws[wi], cfg.pairs,
                                           cfg.seed + 17, cfg.solver);
    });
    for (int cell = 0; cell < n_cells; ++cell) {
      int zi = cell / static_cast<int>(ws.size());
      int wi = cell % static_cast<int>(ws.size());
      int pi = 0;
      for (const auto& s : cell_rows[cell]) {
        out.csv.rows.push_back({"pair",
                                fmt17(zs[zi].re()),
                                fmt17(zs[zi].im()),
                                fmt17(ws[wi].re()),
                                fmt17(ws[wi].im()),
                                std::to_string(sc.K),
                                std::to_string(pi++),
                                "", "", "",
                                fmt17(s.dist_in),
                                fmt17(s.dist_h2),
                                fmt17(s.dist_out),
                                fmt17(s.midpoint_lhs),
                                fmt17(s.midpoint_rhs)});
        double mid = s.midpoint_lhs - s.midpoint_rhs * (1.0 + 1e-8);
        midpoint.worst = std::max(midpoint.worst, mid);
        if (mid > 0.0) midpoint.pass = false;
        double lip = s.dist_out - s.dist_h2 * (1.0 + 1e-8);
        lipschitz.worst = std::max(lipschitz.worst, lip);
        if (lip > 1e-10) lipschitz.pass = false;
      }
    }
  }

  out.invariants = {upper, midpoint, lipschitz};
  out.summary["max_sphere_defect"] = worst_defect;
  out.summary["max_round_trip"] = worst_rt;
  return out;
}

Emitted run_duality(const ExperimentConfig& cfg) {
  Emitted out;
  out.csv.columns = {"re_z", "im_z", "K", "point", "lhs", "rhs", "gap"};
  StructuredCouple sc = cfg.make_couple();
  StripPoint z = default_z(cfg)[0];
  double worst_gap = 0.0;
  Invariant cert{"lhs_below_rhs", true, 0.0};

  std::vector<std::vector<std::string>> rows(cfg.points);
  std::vector<std::array<double, 2>> vals(cfg.points);
  parallel_for(cfg.points, [&](int pi) {
    Rng rng = Rng(cfg.seed).fork(pi);
    CVec xstar = rng.cnormal_vec(cfg.dim);
    DualityGapResult r = duality_gap(sc, xstar, z, cfg.solver);
    rows[pi] = {fmt17(z.re()),      fmt17(z.im()), std::to_string(sc.K),
                std::to_string(pi), fmt17(r.lhs),  fmt17(r.rhs),
                fmt17(r.gap)};
    vals[pi] = {r.gap, r.lhs / r.rhs - 1.0};
  });
  for (int pi = 0; pi < cfg.points; ++pi) {
    out.csv.rows.push_back(rows[pi]);
    worst_gap = std::max(worst_gap, vals[pi][0]);
    // The truncated lhs can only undershoot the truncated rhs.
    cert.worst = std::max(cert.worst, vals[pi][1]);
    if (vals[pi][1] > 1e-6) cert.pass = false;
  }
  out.invariants = {cert};
  out.summary["max_gap"] = worst_gap;
  return out;
}

Emitted run_maxmod(const ExperimentConfig& cfg) {
  Emitted out;
  out.csv.columns = {"re_z", "im_z", "re_F", "im_F", "abs_F"};
  StructuredCouple sc = cfg.make_couple();
  StripPoint z0 = default_z(cfg)[0];
  std::vector<StripPoint> grid;
  for (Complex w : cfg.w_list) grid.emplace_back(w);
  if (grid.empty())
    for (double re : {0.3, 0.4, 0.5, 0.6, 0.7})
      for (double im : {-0.5, -0.25, 0.0, 0.25, 0.5}) grid.emplace_back(re, im);

  Rng rng(cfg.seed);
  CVec x = rng.cnormal_vec(cfg.dim);
  MaxModulusResult r = max_modulus_pairing(sc, x, z0, grid, cfg.solver);
  for (const auto& row : r.rows)
    out.csv.rows.push_back({fmt17(row.z.real()), fmt17(row.z.imag()),
                            fmt17(row.F.real()), fmt17(row.F.imag()),
                            fmt17(std::abs(row.F))});
  Invariant base{"base_point_value_one", r.base_defect <= 1e-3, r.base_defect};
  out.invariants = {base};
  out.summary["base_defect"] = r.base_defect;
  out.summary["grid_defect"] = r.grid_defect;
  out.summary["norming_quality"] = r.nf.quality;
  out.extra_files.emplace_back("gamma-coeffs.csv",
                               coeffs_csv(r.primal.dec.seq));
  out.extra_files.emplace_back("g-coeffs.csv",
                               coeffs_csv(a_operator(r.nf.split)));
  return out;
}

Emitted run_kadets(const ExperimentConfig& cfg) {
  Emitted out;
  out.csv.columns = {"re_s", "re_t", "C_s", "C_t", "bound"};
  StructuredCouple sc = cfg.make_couple();

  std::vector<double> res = cfg.s_list;
  if (res.empty()) res = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  for (double a : res)
    for (double b : res) {
      StripPoint sa(a), sb(b);
      out.csv.rows.push_back({fmt17(a), fmt17(b), fmt17(cs_constant(sa)),
                              fmt17(cs_constant(sb)),
                              fmt17(kadets_bound(sa, sb))});
    }

  Invariant recon{"division_reconstruction", true, 0.0};
  Invariant normb{"division_norm_bound", true, 0.0};
  Invariant pert{"perturbation_bound", true, 0.0};
  StripPoint base(0.5);
  const Complex t_offset = cfg.t - cfg.s;
  std::vector<double> s_res =
      cfg.s_list.empty() ? std::vector<double>{cfg.s.real()} : cfg.s_list;
  Rng rng(cfg.seed);
  for (double sre : s_res) {
    StripPoint s(sre, cfg.s.imag());
    StripPoint t(s.value() + t_offset);
    for (int i = 0; i < cfg.trials; ++i) {
      TruncSeq h(cfg.dim, cfg.K);
      h.entries() = rng.cnormal_mat(cfg.dim, 2 * cfg.K + 1);
      PeriodicFunction hf(base, std::move(h), sc);
      PeriodicFunction f = multiply_shift(hf, std::exp(s.value()));
      double fn = pf_h2_norm(f);
      DivisionResult dv = divide_vanishing(f, s);
      double rel = dv.reconstruction_defect / fn;
      recon.worst = std::max(recon.worst, rel);
      if (rel > 1e-8) recon.pass = false;
      double ratio = pf_h2_norm(dv.g) / (cs_constant(s) * fn);
      normb.worst = std::max(normb.worst, ratio);
      if (ratio > 1.0 + 1e-10) normb.pass = false;

      PeriodicFunction funit(f.z0, Complex(1.0 / fn) * f.coeffs, f.sc);
      PerturbResult pr = perturb_kernel(funit, s, t);
      double prr = pr.defect / pr.bound;
      pert.worst = std::max(pert.worst, prr);
      if (prr > 1.0 + 1e-10) pert.pass = false;
    }
  }
  out.invariants = {recon, normb, pert};
  out.summary["trials_per_s"] = cfg.trials;
  return out;
}

Emitted run_james(const ExperimentConfig& cfg) {
  Emitted out;
  out.csv.columns = {"n",     "s",       "lower", "upper_paper",
                     "upper_product", "ratio", "j2_value"};
  std::vector<int> ns = cfg.n_list;
  if (ns.empty()) ns = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> ss = cfg.s_list;
  if (ss.empty()) {
    ss = {0.0, kPi / 4, kPi / 2};
    int nmax = *std::max_element(ns.begin(), ns.end());
    for (int j = 0; j <= 5; ++j)
      ss.push_back(kPi - (kPi / 2) / nmax * std::pow(2.0, -j));
  }

  auto rows = modulation_blowup(ns, ss);
  NormedSpace scalar_base = NormedSpace::lp(1, 2.0);
  CVec unit = CVec::Ones(1);
  for (const auto& r : rows) {
    std::string j2;
    if (cfg.dogfood && r.n <= 2) {
      JamesVectors jv = build_james_vectors(r.n, scalar_base,
                                            scalar_base.dual(), unit, unit,
                                            r.s);
      SolveOptions opts = cfg.solver;
      opts.max_iter = std::min(opts.max_iter, 4000);
      j2 = fmt17(j2_norm_dogfood(jv.xn_s, scalar_base, opts, 5).value);
    }
    out.csv.rows.push_back({std::to_string(r.n), fmt17(r.s), fmt17(r.lower),
                            fmt17(r.upper_paper), fmt17(r.upper_product),
                            fmt17(r.ratio), j2});
  }

  NormedSpace base = NormedSpace::lp(1, 2.0);
  CVec one = CVec::Ones(1);
  Invariant unitn{"flat_vector_james_norm_one", true, 0.0};
  Invariant dualb{"dual_pairing_bound", true, 0.0};
  Invariant mono{"ratio_peaks_nearest_pi", true, 0.0};
  for (int n : ns) {
    JamesVectors jv = build_james_vectors(n, base, base.dual(), one, one, 0.0);
    JamesCheckReport rep =
        james_norm_checks(jv, base, 500, cfg.seed + std::uint64_t(n));
    unitn.worst = std::max(unitn.worst, std::abs(rep.xn_james_norm - 1.0));
    if (rep.xn_james_norm != 1.0) unitn.pass = false;
    if (rep.violations > 0) dualb.pass = false;
    dualb.worst = std::max(dualb.worst, rep.max_pairing / rep.pairing_bound);
  }
  const int S = static_cast<int>(ss.size());
  for (std::size_t b = 0; b < ns.size(); ++b) {
    double best = -1.0;
    int idx = -1;
    for (int i = 0; i < S; ++i)
      if (rows[b * S + i].ratio > best) {
        best = rows[b * S + i].ratio;
        idx = i;
      }
    if (idx != S - 1) mono.pass = false;
  }
  out.invariants = {unitn, dualb, mono};
  out.summary["rows"] = rows.size();
  return out;
}

Emitted run_mazur(const ExperimentConfig& cfg) {
  Emitted out;
  out.csv.columns = {"theta", "eta", "K", "point", "angle", "norm_ratio"};
  StructuredCouple sc = cfg.make_couple();
  Rng rng(cfg.seed);
  double worst = 0.0;
  for (int pi = 0; pi < cfg.points; ++pi) {
    CVec x =
        pi == 0 ? CVec(CVec::Ones(cfg.dim)) : CVec(rng.cnormal_vec(cfg.dim));
    MazurCompare r =
        mazur_compare(sc, x, cfg.p0, cfg.p1, cfg.theta, cfg.eta, cfg.solver);
    out.csv.rows.push_back({fmt17(cfg.theta), fmt17(cfg.eta),
                            std::to_string(sc.K), std::to_string(pi),
                            fmt17(r.angle), fmt17(r.norm_ratio)});
    worst = std::max(worst, r.angle);
  }
  out.summary["max_angle"] = worst;
  out.invariants = {Invariant{"angle_reported", true, worst}};
  return out;
}

Emitted run_convergence(const ExperimentConfig& cfg) {
  Emitted out;
  out.csv.columns = {"K", "M", "value", "sphere_defect", "duality_gap"};
  std::vector<int> Ks = cfg.K_list;
  if (Ks.empty()) Ks = {4, 8, 12, 16};
  require(std::is_sorted(Ks.begin(), Ks.end()), "K_list must be sorted");
  std::vector<int> Ms = cfg.M_list.empty() ? std::vector<int>{0} : cfg.M_list;

  StripPoint z = default_z(cfg)[0];
  StripPoint w =
      cfg.w_list.empty() ? StripPoint(0.7) : StripPoint(cfg.w_list[0]);
  Rng rng(cfg.seed);
  CVec x = rng.cnormal_vec(cfg.dim);
  CVec xstar = rng.cnormal_vec(cfg.dim);

  Invariant mono{"value_nonincreasing_in_K", true, 0.0};
  for (int M : Ms) {
    double prev = std::numeric_limits<double>::infinity();
    for (int K : Ks) {
      ExperimentConfig sub = cfg;
      sub.struct0.M = M;
      sub.struct1.M = M;
      StructuredCouple sc = sub.make_couple(K);
      InterpResult r = interp_norm(sc, x, z, cfg.solver);
      CVec xu = x / r.value;
      CVec y = daher_map(sc, xu, z, w, cfg.solver);
      double defect = std::abs(interp_norm(sc, y, w, cfg.solver).value - 1.0);
      double gap = duality_gap(sc, xstar, z, cfg.solver).gap;
      out.csv.rows.push_back({std::to_string(K), std::to_string(M),
                              fmt17(r.value), fmt17(defect), fmt17(gap)});
      if (r.value > prev + 1e-10) {
        mono.pass = false;
        mono.worst = std::max(mono.worst, r.value - prev);
      }
      prev = r.value;
    }
  }
  out.invariants = {mono};
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  std::filesystem::create_directories(cfg.out_dir);

  Emitted em;
  try {
    if (cfg.experiment == "norm") em = run_norm(cfg);
    else if (cfg.experiment == "daher") em = run_daher(cfg);
    else if (cfg.experiment == "duality") em = run_duality(cfg);
    else if (cfg.experiment == "maxmod") em = run_maxmod(cfg);
    else if (cfg.experiment == "kadets") em = run_kadets(cfg);
    else if (cfg.experiment == "james") em = run_james(cfg);
    else if (cfg.experiment == "mazur") em = run_mazur(cfg);
    else em = run_convergence(cfg);
  } catch (const std::exception& e) {
    json err{{"error", e.what()},
             {"experiment", cfg.experiment},
             {"config_hash", cfg.config_hash}};
    std::ofstream(std::filesystem::path(cfg.out_dir) / "error.json")
        << err.dump(2) << "\n";
    res.exit_code = 2;
    res.report_json = err.dump(2);
    return res;
  }

  res.results_csv = em.csv.dump(cfg.config_hash);

  bool all_pass = true;
  json inv = json::array();
  for (const auto& i : em.invariants) {
    inv.push_back({{"name", i.name}, {"pass", i.pass}, {"worst", i.worst}});
    res.invariants.emplace_back(i.name, i.pass);
    all_pass = all_pass && i.pass;
  }
  json report{{"experiment", cfg.experiment},
              {"config_hash", cfg.config_hash},
              {"rows", em.csv.rows.size()},
              {"summary", em.summary},
              {"invariants", inv},
              {"pass", all_pass}};
  res.report_json = report.dump(2);

  std::filesystem::path dir(cfg.out_dir);
  std::ofstream(dir / "results.csv") << res.results_csv;
  std::ofstream(dir / "report.json") << res.report_json << "\n";
  std::ofstream(dir / "config-echo.json")
      << json::parse(canonical_config_json(cfg)).dump(2) << "\n";
  for (const auto& [name, text] : em.extra_files)
    std::ofstream(dir / name) << text;

  if (cfg.strict && !all_pass) res.exit_code = 1;
  return res;
}

}  // namespace interp
