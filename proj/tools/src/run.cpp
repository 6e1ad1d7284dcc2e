#include "npl_cli/run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "npl/dispersion.hpp"
#include "npl/energy.hpp"
#include "npl/errors.hpp"
#include "npl/modes.hpp"
#include "npl/oracle.hpp"
#include "npl/parallel.hpp"
#include "npl/roots.hpp"

namespace npl::cli {

namespace {

using json = nlohmann::ordered_json;

json cjson(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::string num(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

modes::ProblemSpec problem_spec(const RunConfig& c) {
  modes::ProblemSpec spec;
  spec.m = c.real("m");
  spec.n = c.real("n");
  spec.alpha = c.complex("alpha");
  spec.variant = modes::parse_variant(c.text("variant"));
  return spec;
}

modes::Convention convention(const RunConfig& c) {
  return c.text("convention") == "paper_literal" ? modes::Convention::paper_literal : modes::Convention::corrected;
}

std::array<double, 6> couplings(const RunConfig& c) {
  std::array<double, 6> k{};
  for (int i = 0; i < 6; ++i) k[i] = c.real("k" + std::to_string(i + 1));
  return k;
}

json theorem_json(const modes::TheoremCheck& t) {
  return json{{"theorem", t.theorem}, {"guaranteed", t.violated.empty()}, {"violated", t.violated}};
}

json residual_json(const oracle::ResidualReport& r) {
  return json{{"max_abs", r.max_abs},
              {"max_rel", r.max_rel},
              {"argmax", r.argmax},
              {"points", r.points},
              {"analytic_partials", r.analytic_partials}};
}

// Scalar summary table used for format = csv where no natural table exists.
std::string summary_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = "quantity,value\n";
  for (const auto& [name, value] : rows) out += name + "," + num(value) + "\n";
  return out;
}

Report run_roots(const RunConfig& c) {
  const double nu = c.real("nu");
  const auto table = roots::bessel_j_zeros(nu, static_cast<int>(c.integer("count")));
  Report r;
  json zeros = json::array();
  std::string csv = "nu,k,zero,residual\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    zeros.push_back({{"k", i + 1}, {"zero", table.zeros[i]}, {"residual", table.residuals[i]}});
    csv += num(nu) + "," + std::to_string(i + 1) + "," + num(table.zeros[i]) + "," + num(table.residuals[i]) + "\n";
  }
  r.results = {{"nu", nu}, {"zeros", zeros}};
  r.csv = csv;
  return r;
}

Report run_modes(const RunConfig& c) {
  const auto spec = problem_spec(c);
  const auto conv = convention(c);
  const int kmax = static_cast<int>(c.integer("kmax")), pmax = static_cast<int>(c.integer("pmax"));
  const int smax = static_cast<int>(c.integer("smax"));
  json list = json::array(), skipped = json::array();
  std::string csv = "k,p,s,mu1,mu2,mu,lambda_re,lambda_im\n";
  bool remark1 = true;
  for (int k = 1; k <= kmax; ++k) {
    for (int p = 1; p <= pmax; ++p) {
      if (spec.variant == modes::Variant::problem1) {
        try {
          modes::Problem1Mode m(k, p, spec, conv);
          const auto& e = m.mode();
          list.push_back({{"k", k}, {"p", p}, {"s", 0}, {"mu1", e.mu1}, {"mu2", nullptr}, {"mu", e.mu},
                          {"lambda_re", e.lambda.real()}, {"lambda_im", e.lambda.imag()}});
          csv += std::to_string(k) + "," + std::to_string(p) + ",0," + num(e.mu1) + ",," + num(e.mu) + "," +
                 num(e.lambda.real()) + "," + num(e.lambda.imag()) + "\n";
        } catch (const ParityError& err) {
          skipped.push_back({{"k", k}, {"p", p}, {"reason", err.what()}});
        }
        continue;
      }
      for (int s = -smax; s <= smax; ++s) {
        modes::Problem2Mode m(k, p, s, spec, conv);
        const auto& e = m.mode();
        if (std::abs(spec.alpha) < 1.0 && !(e.lambda.real() < 0.0)) remark1 = false;
        list.push_back({{"k", k}, {"p", p}, {"s", s}, {"mu1", e.mu1}, {"mu2", *e.mu2}, {"mu", e.mu},
                        {"lambda_re", e.lambda.real()}, {"lambda_im", e.lambda.imag()}});
        csv += std::to_string(k) + "," + std::to_string(p) + "," + std::to_string(s) + "," + num(e.mu1) + "," +
               num(*e.mu2) + "," + num(e.mu) + "," + num(e.lambda.real()) + "," + num(e.lambda.imag()) + "\n";
      }
    }
  }
  Report r;
  r.results = {{"variant", c.text("variant")}, {"modes", list}, {"skipped", skipped}};
  if (spec.variant == modes::Variant::problem2) r.results["re_lambda_negative"] = remark1;
  r.csv = csv;
  return r;
}

// Largest |u(x,y,0) - alpha u(x,y,1)| over a 10 x 10 cell-centred grid.
template <class F>
std::pair<double, double> nonlocal_defect(F&& at, cplx alpha) {
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double x = (i + 0.5) / 10.0, y = (j + 0.5) / 10.0;
      const auto [u0, u1] = at(x, y);
      worst = std::max(worst, std::abs(u0 - alpha * u1));
      scale = std::max(scale, std::abs(u0));
    }
  return {worst, scale};
}

json verification_json(const dispersion::VerificationReport& v, double tol) {
  return json{{"condition", v.condition},
              {"null_space_reliable", v.null_space_reliable},
              {"abs_det", v.abs_det},
              {"pde_residual", v.pde_residual},
              {"side_condition_1", v.side_condition_1},
              {"side_condition_2", v.side_condition_2},
              {"nonlocal_residual", v.nonlocal_residual},
              {"c1_mismatch", v.c1_mismatch},
              {"max_residual", v.max_residual()},
              {"passed", v.passed(tol)}};
}

dispersion::TransmissionProblem transmission(const RunConfig& c) {
  dispersion::TransmissionProblem tp;
  tp.k = couplings(c);
  const cplx a = c.complex("alpha");
  if (a.imag() != 0.0) throw UsageError("key 'alpha' must be real for problem3");
  tp.alpha = a.real();
  tp.s = static_cast<int>(c.integer("s"));
  return tp;
}

Report run_verify(const RunConfig& c) {
  const double tol = c.real("tolerance");
  const auto variant = modes::parse_variant(c.text("variant"));
  Report r;
  if (variant == modes::Variant::problem3) {
    const auto v = dispersion::verify_candidate(c.complex("lambda"), transmission(c));
    r.results = {{"variant", "problem3"}, {"lambda", cjson(v.lambda)}, {"verification", verification_json(v, tol)}};
    r.passed = v.passed(tol);
    if (!r.passed) r.failure = "candidate is not a verified root";
    r.csv = summary_csv({{"condition", v.condition}, {"max_residual", v.max_residual()}});
    return r;
  }
  const auto spec = problem_spec(c);
  const int k = static_cast<int>(c.integer("k")), p = static_cast<int>(c.integer("p"));
  const auto count = static_cast<std::size_t>(c.integer("points"));
  const auto seed = static_cast<std::uint64_t>(c.integer("seed"));
  oracle::ResidualReport res;
  std::pair<double, double> nl;
  cplx lambda;
  if (variant == modes::Variant::problem1) {
    modes::Problem1Mode m(k, p, spec, convention(c));
    const auto pts = oracle::random_points2(count, seed);
    res = oracle::pde_residual_collocation(m.field(), m.spec(), pts);
    nl = nonlocal_defect([&](double x, double) { return std::pair{m.value(x, 0.0), m.value(x, 1.0)}; }, spec.alpha);
    lambda = m.mode().lambda;
  } else {
    modes::Problem2Mode m(k, p, static_cast<int>(c.integer("s")), spec, convention(c));
    const auto pts = oracle::random_points3(count, seed);
    res = oracle::pde_residual_collocation(m.field(), m.spec(), pts);
    nl = nonlocal_defect([&](double x, double y) { return std::pair{m.value(x, y, 0.0), m.value(x, y, 1.0)}; },
                         spec.alpha);
    lambda = m.mode().lambda;
  }
  r.results = {{"variant", c.text("variant")},
               {"lambda", cjson(lambda)},
               {"residual", residual_json(res)},
               {"nonlocal_defect", nl.first},
               {"nonlocal_scale", nl.second}};
  r.passed = res.max_rel <= tol;
  if (!r.passed) r.failure = "collocation residual " + num(res.max_rel) + " above tolerance " + num(tol);
  r.csv = summary_csv({{"max_abs", res.max_abs}, {"max_rel", res.max_rel}, {"nonlocal_defect", nl.first}});
  return r;
}

json terms_json(const std::vector<energy::Term>& terms) {
  json j = json::object();
  for (const auto& t : terms) j[t.name] = t.value;
  return j;
}

Report run_energy(const RunConfig& c) {
  const double tol = c.real("tolerance");
  const int order = static_cast<int>(c.integer("quad_order"));
  const auto variant = modes::parse_variant(c.text("variant"));
  Report r;
  if (variant == modes::Variant::problem3) {
    const cplx lambda = c.complex("lambda");
    if (lambda.imag() != 0.0) throw UsageError("key 'lambda' must be real for the problem3 functional");
    const auto tp = transmission(c);
    const auto v = dispersion::verify_candidate(lambda, tp);
    const auto shape = v.shape;
    energy::RealField2 field;
    field.value = [shape](double x, double y) { return shape.u(x, y).real(); };
    field.u_x = [shape](double x, double y) { return (std::exp(shape.sigma * y) * shape.dphi(x)).real(); };
    const auto f = energy::energy_functional_problem3(field, tp.k, tp.alpha, lambda.real(), order, convention(c));
    double scale = 0.0;
    for (const auto& t : f.terms) scale += std::fabs(t.value);
    r.results = {{"variant", "problem3"},
                 {"lambda", lambda.real()},
                 {"verification", verification_json(v, 1e-7)},
                 {"functional", f.value},
                 {"terms", terms_json(f.terms)},
                 {"warnings", f.warnings}};
    r.passed = v.passed(1e-7) && std::fabs(f.value) <= tol * std::max(1.0, scale);
    if (!r.passed)
      r.failure = v.passed(1e-7) ? "functional not zero on a verified mode" : "lambda is not a verified root";
    r.csv = summary_csv({{"functional", f.value}, {"condition", v.condition}});
    return r;
  }
  if (variant != modes::Variant::problem2) throw UsageError("key 'variant': energy supports problem2 and problem3");
  const auto spec = problem_spec(c);
  modes::Problem2Mode m(static_cast<int>(c.integer("k")), static_cast<int>(c.integer("p")),
                        static_cast<int>(c.integer("s")), spec, convention(c));
  const auto id = energy::energy_identity_problem2(m.field(), m.spec(), order, convention(c));
  auto fspec = m.spec();
  const bool overridden = c.has("lambda");
  if (overridden) fspec.lambda = c.complex("lambda");
  const auto f = energy::energy_functional_problem2(m.field(), fspec, order, convention(c));
  double scale = 0.0;
  for (const auto& t : f.terms) scale += std::fabs(t.value);
  r.results = {{"variant", "problem2"},
               {"lambda", cjson(m.mode().lambda)},
               {"identity",
                {{"surface", id.surface_terms},
                 {"volume", id.volume_terms},
                 {"defect", id.defect},
                 {"tolerance", id.tolerance},
                 {"within_tolerance", id.within_tolerance()},
                 {"terms", terms_json(id.terms)}}},
               {"functional",
                {{"value", f.value},
                 {"lambda_override", overridden ? json(cjson(fspec.lambda)) : json(nullptr)},
                 {"terms", terms_json(f.terms)},
                 {"warnings", f.warnings}}}};
  r.passed = id.within_tolerance() && (overridden || std::fabs(f.value) <= tol * std::max(1.0, scale));
  if (!r.passed) r.failure = id.within_tolerance() ? "functional not zero on an exact mode" : "identity defect above tolerance";
  r.csv = summary_csv({{"identity_defect", id.defect}, {"functional", f.value}});
  return r;
}

json grid_json(const oracle::GridSpec& g) {
  return json{{"nx", g.nx}, {"ny", g.ny}, {"nt", g.nt}, {"t_end", g.t_end}, {"cell_centered", g.cell_centered}};
}

json levels_json(const std::vector<oracle::LevelError>& levels) {
  json arr = json::array();
  for (const auto& l : levels)
    arr.push_back({{"nx", l.grid.nx}, {"ny", l.grid.ny}, {"nt", l.grid.nt}, {"error_l2", l.error_l2},
                   {"iterations", l.iterations}});
  return arr;
}

Report run_decay(const RunConfig& c) {
  const auto spec = problem_spec(c);
  if (spec.variant != modes::Variant::problem2) throw UsageError("key 'variant': decay supports problem2 only");
  oracle::GridSpec grid;
  grid.nx = static_cast<int>(c.integer("nx"));
  grid.ny = static_cast<int>(c.integer("ny"));
  grid.nt = static_cast<int>(c.integer("nt"));
  grid.t_end = c.real("t_end");
  const auto kind = c.text("refine") == "space" ? oracle::Refinement::space : oracle::Refinement::time;
  const auto d = oracle::decay_check(static_cast<int>(c.integer("k")), static_cast<int>(c.integer("p")),
                                     static_cast<int>(c.integer("s")), spec, grid,
                                     static_cast<int>(c.integer("refinements")), kind);
  Report r;
  r.results = {{"grid", grid_json(grid)},
               {"error_l2", d.error_l2},
               {"iterations", d.iterations},
               {"ratios", d.ratios},
               {"order_estimate", d.order_estimate},
               {"levels", levels_json(d.levels)}};
  const double tol = c.real("tolerance");
  r.passed = d.error_l2 <= tol;
  if (!r.passed) r.failure = "relative L2 error " + num(d.error_l2) + " above tolerance " + num(tol);
  std::string csv = "nx,ny,nt,error_l2\n";
  for (const auto& l : d.levels)
    csv += std::to_string(l.grid.nx) + "," + std::to_string(l.grid.ny) + "," + std::to_string(l.grid.nt) + "," +
           num(l.error_l2) + "\n";
  r.csv = csv;
  return r;
}

Report run_mms(const RunConfig& c) {
  const auto spec = problem_spec(c);
  if (spec.variant != modes::Variant::problem2) throw UsageError("key 'variant': mms supports problem2 only");
  const auto ms = oracle::mms_check(spec, static_cast<int>(c.integer("base_cells")),
                                    static_cast<int>(c.integer("levels")), c.real("t_end"));
  Report r;
  r.results = {{"grid", grid_json(ms.levels.back().grid)},
               {"error_l2", ms.levels.back().error_l2},
               {"iterations", ms.iterations},
               {"orders", ms.orders},
               {"order_estimate", ms.order_estimate},
               {"levels", levels_json(ms.levels)}};
  const double lo = c.real("order_min"), hi = c.real("order_max");
  r.passed = ms.order_estimate >= lo && ms.order_estimate <= hi;
  if (!r.passed) r.failure = "observed order " + num(ms.order_estimate) + " outside [" + num(lo) + ", " + num(hi) + "]";
  std::string csv = "nx,ny,nt,error_l2\n";
  for (const auto& l : ms.levels)
    csv += std::to_string(l.grid.nx) + "," + std::to_string(l.grid.ny) + "," + std::to_string(l.grid.nt) + "," +
           num(l.error_l2) + "\n";
  r.csv = csv;
  return r;
}

Report run_dispersion(const RunConfig& c) {
  const auto tp = transmission(c);
  const dispersion::Region region{c.real("re_min"), c.real("re_max"), c.real("im_min"), c.real("im_max")};
  const dispersion::Density density{static_cast<int>(c.integer("density_re")),
                                    static_cast<int>(c.integer("density_im"))};
  const double tol = c.real("tolerance");
  dispersion::ScanOptions opt;
  opt.verify_tolerance = tol;
  opt.threads = static_cast<unsigned>(c.integer("threads"));
  const auto scan = dispersion::scan_roots(region, density, tp, opt);

  modes::ProblemSpec spec;
  spec.variant = modes::Variant::problem3;
  spec.alpha = tp.alpha;
  spec.lambda = cplx(0.5 * (region.re_min + region.re_max), 0.5 * (region.im_min + region.im_max));
  auto theorem = theorem_json(modes::check_uniqueness_conditions(spec, tp.k));
  theorem["evaluated_at"] = cjson(spec.lambda);

  json candidates = json::array();
  bool all = true;
  for (const auto& cand : scan.candidates) {
    candidates.push_back({{"lambda", cjson(cand.lambda)},
                          {"abs_det", cand.abs_det},
                          {"verification", verification_json(cand.verification, tol)}});
    all = all && cand.verification.passed(tol);
  }
  json failures = json::array();
  for (const auto& f : scan.failures) failures.push_back({{"seed", cjson(f.seed)}, {"reason", f.reason}});

  Report r;
  r.results = {{"sigma", cjson(dispersion::sigma_branch(tp.alpha, tp.s))},
               {"theorem", theorem},
               {"samples", scan.samples.size()},
               {"min_abs_det", scan.min_abs_det()},
               {"seeds", scan.seeds},
               {"candidates", candidates},
               {"failures", failures}};
  r.passed = all;
  if (!all) r.failure = "a candidate failed verification";
  std::string csv = "lambda_re,lambda_im,abs_det\n";
  for (int j = 0; j < density.im; ++j)
    for (int i = 0; i < density.re; ++i) {
      const cplx z = scan.sample_point(i, j);
      csv += num(z.real()) + "," + num(z.imag()) + "," +
             num(scan.samples[static_cast<std::size_t>(j) * density.re + i]) + "\n";
    }
  r.csv = csv;
  return r;
}

Report run_sweep(const RunConfig& c) {
  const auto& alphas = c.complexes("alphas");
  const int kmax = static_cast<int>(c.integer("kmax")), pmax = static_cast<int>(c.integer("pmax"));
  const int smax = static_cast<int>(c.integer("smax"));
  const auto variant = modes::parse_variant(c.text("variant"));
  if (variant == modes::Variant::problem3) throw UsageError("key 'variant': sweep supports problem1 and problem2");
  const auto conv = convention(c);
  const double tol = c.real("tolerance");
  const auto count = static_cast<std::size_t>(c.integer("points"));
  const auto seed = static_cast<std::uint64_t>(c.integer("seed"));
  if (variant == modes::Variant::problem1)
    for (cplx a : alphas)
      if (a.imag() != 0.0) throw UsageError("key 'alphas' must be real for problem1");

  struct Task {
    int a, k, p, s;
  };
  std::vector<Task> tasks;
  for (int a = 0; a < static_cast<int>(alphas.size()); ++a)
    for (int k = 1; k <= kmax; ++k)
      for (int p = 1; p <= pmax; ++p)
        for (int s = (variant == modes::Variant::problem1 ? 0 : -smax); s <= (variant == modes::Variant::problem1 ? 0 : smax); ++s)
          tasks.push_back({a, k, p, s});

  struct Outcome {
    bool skipped = false;
    std::string reason;
    double mu = 0.0;
    cplx lambda{};
    double max_rel = 0.0;
  };
  std::vector<Outcome> out(tasks.size());
  const auto pts3 = oracle::random_points3(count, seed);
  const auto pts2 = oracle::random_points2(count, seed);
  parallel_for(tasks.size(), static_cast<unsigned>(c.integer("threads")), [&](std::size_t i) {
    const Task& t = tasks[i];
    modes::ProblemSpec spec;
    spec.m = c.real("m");
    spec.n = c.real("n");
    spec.alpha = alphas[t.a];
    spec.variant = variant;
    Outcome& o = out[i];
    if (variant == modes::Variant::problem1) {
      try {
        modes::Problem1Mode m(t.k, t.p, spec, conv);
        o.mu = m.mode().mu;
        o.lambda = m.mode().lambda;
        o.max_rel = oracle::pde_residual_collocation(m.field(), m.spec(), pts2).max_rel;
      } catch (const ParityError& e) {
        o.skipped = true;
        o.reason = e.what();
      }
      return;
    }
    modes::Problem2Mode m(t.k, t.p, t.s, spec, conv);
    o.mu = m.mode().mu;
    o.lambda = m.mode().lambda;
    o.max_rel = oracle::pde_residual_collocation(m.field(), m.spec(), pts3).max_rel;
  });

  json lattice = json::array();
  std::string csv = "alpha_re,alpha_im,k,p,s,mu,lambda_re,lambda_im,max_rel\n";
  bool residuals_ok = true, remark1 = true;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& t = tasks[i];
    const Outcome& o = out[i];
    if (o.skipped) continue;
    const bool negative = o.lambda.real() < 0.0;
    if (std::abs(alphas[t.a]) < 1.0 && !negative) remark1 = false;
    if (!(o.max_rel <= tol)) residuals_ok = false;
    lattice.push_back({{"alpha", format_complex(alphas[t.a])}, {"k", t.k}, {"p", t.p}, {"s", t.s}, {"mu", o.mu},
                       {"lambda", cjson(o.lambda)}, {"max_rel", o.max_rel}});
    csv += num(alphas[t.a].real()) + "," + num(alphas[t.a].imag()) + "," + std::to_string(t.k) + "," +
           std::to_string(t.p) + "," + std::to_string(t.s) + "," + num(o.mu) + "," + num(o.lambda.real()) + "," +
           num(o.lambda.imag()) + "," + num(o.max_rel) + "\n";
  }
  Report r;
  r.results = {{"variant", c.text("variant")},
               {"lattice", lattice},
               {"re_lambda_negative_when_abs_alpha_lt_1", remark1},
               {"residuals_within_tolerance", residuals_ok}};
  r.passed = residuals_ok && (variant != modes::Variant::problem2 || remark1);
  if (!r.passed) r.failure = residuals_ok ? "Re lambda >= 0 for some |alpha| < 1" : "collocation residual above tolerance";
  r.csv = csv;
  return r;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write output file '" + path + "'");
  f << text;
  if (!f) throw UsageError("failed writing output file '" + path + "'");
}

}  // namespace

Report execute(const RunConfig& c) {
  const std::string& cmd = c.command;
  if (cmd == "roots") return run_roots(c);
  if (cmd == "modes") return run_modes(c);
  if (cmd == "verify") return run_verify(c);
  if (cmd == "energy") return run_energy(c);
  if (cmd == "decay") return run_decay(c);
  if (cmd == "mms") return run_mms(c);
  if (cmd == "dispersion") return run_dispersion(c);
  if (cmd == "sweep") return run_sweep(c);
  throw UsageError("unknown command '" + cmd + "'");
}

nlohmann::ordered_json make_document(const RunConfig& config, const nlohmann::ordered_json& results,
                                     const std::string& timestamp) {
  json doc;
  doc["config"] = config_to_json(config);
  doc["version"] = kVersion;
  doc["timestamp"] = timestamp;
  doc["results"] = results;
  return doc;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err, const RunOptions& options) {
  try {
    Report report = execute(config);
    report.results["passed"] = report.passed;
    const std::string stamp = options.timestamp.value_or(utc_timestamp());
    const json doc = make_document(config, report.results, stamp);
    const std::string& path = config.text("output_path");
    if (config.text("format") == "csv" && report.csv) {
      write_text(path, *report.csv, out);
      if (config.command == "dispersion" && !path.empty())
        write_text(path + ".candidates.json", doc.dump(2) + "\n", out);
    } else {
      write_text(path, doc.dump(2) + "\n", out);
    }
    if (config.command == "energy")
      err << "npl energy: " << (report.passed ? "PASS" : "FAIL") << "\n";
    if (!report.passed) {
      err << "npl " << config.command << ": verification failed: " << report.failure << "\n";
      return kVerificationFailure;
    }
    return kSuccess;
  } catch (const UsageError& e) {
    err << "npl " << config.command << ": " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "npl " << config.command << ": " << e.what() << "\n";
    return kUsage;
  } catch (const ParityError& e) {
    err << "npl " << config.command << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "npl " << config.command << ": " << e.what() << "\n";
    return kVerificationFailure;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separated-mode, energy and finite-difference checks for degenerate parabolic problems with "
               "non-local initial conditions",
               "npl"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value configuration file");

  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> flag_options;
  for (const std::string& cmd : command_names()) {
    CLI::App* sub = app.add_subcommand(cmd, "run the " + cmd + " command");
    for (const KeySpec& spec : key_specs()) {
      if (std::find(spec.commands.begin(), spec.commands.end(), cmd) == spec.commands.end()) continue;
      std::string help = spec.help;
      if (spec.default_value && !spec.default_value->empty()) help += " [" + *spec.default_value + "]";
      CLI::Option* opt = sub->add_option("--" + spec.name, flag_values[cmd][spec.name], help);
      opt->allow_extra_args(false);
      flag_options[cmd].emplace_back(spec.name, opt);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "npl: " << e.what() << "\n";
    return kUsage;
  }

  std::string command;
  RawEntries flags;
  for (CLI::App* sub : app.get_subcommands()) {
    command = sub->get_name();
    for (const auto& [name, opt] : flag_options[command])
      if (opt->count() > 0) flags.emplace_back(name, flag_values[command][name]);
  }

  RunConfig config;
  try {
    RawEntries file;
    if (!config_path.empty()) file = read_config_file(config_path);
    if (command.empty()) {
      for (const auto& [key, value] : file)
        if (key == "command") command = value;
      if (command.empty()) throw UsageError("no command given (use a subcommand or 'command = ...' in --config)");
    }
    config = resolve_config(command, file, flags);
  } catch (const UsageError& e) {
    err << "npl: " << e.what() << "\n";
    return kUsage;
  }
  return run(config, out, err);
}

}  // namespace npl::cli
