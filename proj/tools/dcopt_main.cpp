// Command-line front end: parse problem files, dispatch optimality checks
// and descent runs, emit a human summary or a machine-readable report.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dcopt/mcd.hpp"
#include "dcopt/optimality.hpp"
#include "dcopt/penalty.hpp"
#include "dcopt/problem_io.hpp"
#include "dcopt/supportset.hpp"

using json = nlohmann::ordered_json;
using namespace dcopt;

namespace {

constexpr int kExitOptimal = 0;
constexpr int kExitNotOptimal = 1;
constexpr int kExitHypothesis = 2;

std::string fmt(double v) { return format_real(v); }

json to_json(const VectorX<double>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json to_json(const SupportPointd& p) { return to_json(p.lifted()); }

VectorX<double> parse_vector_flag(const std::string& text, const std::string& what) {
  std::vector<double> coords;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    try {
      coords.push_back(std::stod(text.substr(pos, next - pos)));
    } catch (const std::exception&) {
      throw HypothesisError("usage error: cannot parse " + what + " '" + text + "'");
    }
    pos = next + 1;
  }
  if (coords.empty()) throw HypothesisError("usage error: empty " + what);
  VectorX<double> out(static_cast<Index>(coords.size()));
  for (Index i = 0; i < out.size(); ++i) out[i] = coords[static_cast<std::size_t>(i)];
  return out;
}

std::string vec_text(const VectorX<double>& v) {
  std::string out = "(";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out + ")";
}

json verdict_json(const ZVerdict<double>& v) {
  json out;
  json zs = json::array();
  for (const auto& z : v.z) zs.push_back(to_json(z));
  out["z"] = zs;
  out["a"] = v.a_z;
  out["v"] = to_json(v.v_z);
  out["satisfied"] = v.satisfied;
  out["marginal"] = v.marginal;
  if (v.xi) out["xi"] = *v.xi;
  if (v.descent_point) {
    out["descent_point"] = to_json(*v.descent_point);
    out["descent_value"] = *v.descent_value;
  }
  return out;
}

json report_json(const OptimalityReport<double>& report) {
  json out;
  out["point"] = to_json(report.base_point);
  out["base_value"] = report.base_value;
  out["globally_optimal"] = report.globally_optimal;
  json verdicts = json::array();
  for (const auto& v : report.verdicts) verdicts.push_back(verdict_json(v));
  out["verdicts"] = verdicts;
  if (report.best_descent) {
    out["best_descent"] = {{"point", to_json(report.best_descent->first)},
                           {"value", report.best_descent->second}};
  }
  if (report.ipcq_asserted) {
    out["ipcq"] = {{"asserted", true}, {"note", report.ipcq_note}};
  }
  if (!report.notes.empty()) out["notes"] = report.notes;
  return out;
}

void print_report_text(const OptimalityReport<double>& report) {
  std::printf("candidate point: %s\n", vec_text(report.base_point).c_str());
  std::printf("objective value: %s\n", fmt(report.base_value).c_str());
  for (const auto& v : report.verdicts) {
    std::string zs;
    for (const auto& z : v.z) zs += (zs.empty() ? "" : " ") + vec_text(z.lifted());
    std::printf("  z = %s: a = %s%s%s\n", zs.c_str(), fmt(v.a_z).c_str(),
                v.satisfied ? " [ok]" : " [violated]", v.marginal ? " [marginal]" : "");
    if (v.descent_point)
      std::printf("    better point %s with value %s\n", vec_text(*v.descent_point).c_str(),
                  fmt(*v.descent_value).c_str());
  }
  for (const auto& n : report.notes) std::printf("note: %s\n", n.c_str());
  std::printf("globally optimal: %s\n", report.globally_optimal ? "yes" : "no");
  if (report.best_descent)
    std::printf("best descent: %s with value %s\n", vec_text(report.best_descent->first).c_str(),
                fmt(report.best_descent->second).c_str());
}

struct CommonFlags {
  std::string point_flag;
  std::optional<double> lambda_flag;
  std::optional<double> alpha_star_flag;
  std::optional<double> mu_flag;
  std::optional<int> max_iters_flag;
  std::optional<double> tol_opt_flag;
  bool force_penalty = false;
  std::string format = "text";
};

VectorX<double> resolve_point(const ProblemDoc& doc, const CommonFlags& flags) {
  if (!flags.point_flag.empty()) {
    auto p = parse_vector_flag(flags.point_flag, "--point");
    if (p.size() != doc.problem.dim)
      throw HypothesisError("usage error: --point has " + std::to_string(p.size()) +
                            " coordinates, problem dimension is " +
                            std::to_string(doc.problem.dim));
    return p;
  }
  if (doc.point) return *doc.point;
  throw HypothesisError("usage error: no candidate point (give --point or a point line)");
}

CheckOptions<double> resolve_check_options(const ProblemDoc& doc, const CommonFlags& flags) {
  CheckOptions<double> opts;
  if (flags.tol_opt_flag) opts.tol_opt = *flags.tol_opt_flag;
  else if (doc.tol_opt) opts.tol_opt = *doc.tol_opt;
  opts.ipcq_asserted = doc.problem.ipcq_asserted;
  opts.ipcq_note = doc.problem.ipcq_note;
  return opts;
}

double resolve_lambda(const ProblemDoc& doc, const CommonFlags& flags, const char* why) {
  if (flags.lambda_flag) return *flags.lambda_flag;
  if (doc.lambda) return *doc.lambda;
  throw HypothesisError(std::string("usage error: lambda required ") + why +
                        " (give --lambda or a lambda line)");
}

// The l1 penalty route: build F_lambda, check it as an unconstrained
// function, and attach the heuristic boundedness probe the exactness
// condition calls for.
int run_penalty_check(const ProblemDoc& doc, const CommonFlags& flags, json& out) {
  const double lambda = resolve_lambda(doc, flags, "for the penalty route");
  const auto x = resolve_point(doc, flags);
  const auto f = build_penalty(doc.problem, lambda);
  const auto report = check_global_min(f, x, resolve_check_options(doc, flags));

  out["mode"] = "penalty";
  out["lambda"] = lambda;
  out.update(report_json(report));
  out["caveat"] =
      "penalty-route verdicts concern the penalty function; they transfer to the "
      "constrained problem only when the penalty is globally exact (local error "
      "bound and a bounded strict sublevel set are user-supplied hypotheses)";

  if (doc.problem.dim <= 3) {
    ProbeOptions<double> popts;
    popts.box_lo = VectorX<double>::Constant(doc.problem.dim, -10.0);
    popts.box_hi = VectorX<double>::Constant(doc.problem.dim, 10.0);
    const auto probe = sublevel_bounded_probe(doc.problem, lambda, popts);
    json pj;
    pj["heuristic"] = true;
    pj["kind"] = probe.kind == ProbeKind::kLikelyBounded ? "likely_bounded" : "unbounded_evidence";
    pj["f_star_estimate"] = probe.f_star_estimate;
    if (probe.evidence) pj["evidence"] = to_json(*probe.evidence);
    out["probe"] = pj;
  }

  if (flags.format == "text") {
    std::printf("mode: l1 penalty with lambda = %s\n", fmt(lambda).c_str());
    print_report_text(report);
    std::printf("caveat: %s\n", out["caveat"].get<std::string>().c_str());
    if (out.contains("probe"))
      std::printf("boundedness probe (HEURISTIC): %s\n",
                  out["probe"]["kind"].get<std::string>().c_str());
  }
  return report.globally_optimal ? kExitOptimal : kExitNotOptimal;
}

int run_check(const ProblemDoc& doc, const CommonFlags& flags, json& out) {
  const auto x = resolve_point(doc, flags);
  const auto opts = resolve_check_options(doc, flags);

  if (!doc.problem.equalities.empty() || flags.force_penalty)
    return run_penalty_check(doc, flags, out);

  if (!doc.problem.inequalities.empty()) {
    if (!doc.problem.ipcq_asserted)
      throw HypothesisError("usage error: inequality-constrained checks need 'ipcq true' "
                            "(IPCQ at a global solution is a hypothesis of the optimality condition)");
    const auto f0 = build_dc(doc.problem.objective, doc.problem.dim);
    std::vector<DCFunctiond> constraints;
    for (const auto& g : doc.problem.inequalities)
      constraints.push_back(build_dc(g, doc.problem.dim));
    const auto report = check_constrained(f0, constraints, x, opts);
    out["mode"] = "inequality";
    out.update(report_json(report));
    if (flags.format == "text") {
      std::printf("mode: inequality-constrained check\n");
      print_report_text(report);
    }
    return report.globally_optimal ? kExitOptimal : kExitNotOptimal;
  }

  const auto f = build_dc(doc.problem.objective, doc.problem.dim);
  const auto report = check_global_min(f, x, opts);
  out["mode"] = "unconstrained";
  out.update(report_json(report));
  if (flags.format == "text") {
    std::printf("mode: unconstrained check\n");
    print_report_text(report);
  }
  return report.globally_optimal ? kExitOptimal : kExitNotOptimal;
}

int run_mcd(const ProblemDoc& doc, const CommonFlags& flags, json& out) {
  const auto x0 = resolve_point(doc, flags);
  DCFunctiond f = [&] {
    if (doc.problem.equalities.empty() && doc.problem.inequalities.empty())
      return build_dc(doc.problem.objective, doc.problem.dim);
    const double lambda = resolve_lambda(doc, flags, "to run descent on a constrained problem");
    out["lambda"] = lambda;
    return build_penalty(doc.problem, lambda);
  }();

  McdParams<double> params;
  if (flags.alpha_star_flag) params.alpha_star = *flags.alpha_star_flag;
  else if (doc.alpha_star) params.alpha_star = *doc.alpha_star;
  if (flags.mu_flag) params.mu = *flags.mu_flag;
  else if (doc.mu) params.mu = *doc.mu;
  if (flags.max_iters_flag) params.max_iters = *flags.max_iters_flag;
  else if (doc.max_iters) params.max_iters = *doc.max_iters;
  params.check = resolve_check_options(doc, flags);

  const auto trace = mcd_run(f, x0, params);

  out["start"] = to_json(x0);
  out["params"] = {{"alpha_star", params.alpha_star},
                   {"max_iters", params.max_iters},
                   {"stop_tol", params.stop_tol},
                   {"mu", std::isinf(params.mu) ? json("inf") : json(params.mu)}};
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"x", to_json(s.x)},
                     {"value", s.value},
                     {"z", to_json(s.z)},
                     {"direction", to_json(s.direction)},
                     {"alpha", s.alpha}});
  }
  out["trace"] = steps;
  out["final"] = {{"x", to_json(trace.final_x)},
                  {"value", trace.final_value},
                  {"iterations", trace.iterations},
                  {"hit_max_iters", trace.hit_max_iters}};
  out["final_check"] = report_json(trace.final_check);

  if (flags.format == "text") {
    std::printf("descent from %s\n", vec_text(x0).c_str());
    for (const auto& s : trace.steps)
      std::printf("  at %s value %s: z = %s, step %s along -%s\n", vec_text(s.x).c_str(),
                  fmt(s.value).c_str(), vec_text(s.z.lifted()).c_str(), fmt(s.alpha).c_str(),
                  vec_text(s.direction).c_str());
    std::printf("final point %s value %s after %d iteration(s)\n", vec_text(trace.final_x).c_str(),
                fmt(trace.final_value).c_str(), trace.iterations);
    std::printf("final verdict:\n");
    print_report_text(trace.final_check);
  }
  return trace.final_check.globally_optimal ? kExitOptimal : kExitNotOptimal;
}

int run_info(const ProblemDoc& doc, const std::vector<std::string>& slope_flags,
             const CommonFlags& flags, json& out) {
  if (!doc.problem.equalities.empty() || !doc.problem.inequalities.empty())
    throw HypothesisError("info expects an unconstrained problem file");
  const auto f = build_dc(doc.problem.objective, doc.problem.dim);

  // A singleton minus part means the objective is convex; fold the single
  // affine subtrahend into the support set.
  const auto minus_pruned = prune_to_extreme(f.s_minus);
  const bool convex = minus_pruned.vertex_count() == 1;
  Polytoped s = f.s_plus;
  if (convex) {
    const auto t = minus_pruned.vertex(0);
    s = translate(f.s_plus, SupportPointd(-t.a, VectorX<double>(-t.v)));
  }

  out["mode"] = "info";
  out["convex_polyhedral"] = convex;
  if (!convex)
    out["note"] = "objective is a genuine DC difference; support-set queries below "
                  "describe its convex majorant part only";

  std::optional<double> inf_value;
  std::optional<VectorX<double>> minimizer;
  if (convex) {
    inf_value = infimum(s);
    if (inf_value) minimizer = attained_minimizer(s);
    out["bounded_below"] = inf_value.has_value();
    out["infimum"] = inf_value ? json(*inf_value) : json(nullptr);
    out["attained"] = minimizer.has_value();
    if (minimizer) out["minimizer"] = to_json(*minimizer);
  } else {
    const auto x0 = doc.point ? *doc.point : VectorX<double>::Zero(doc.problem.dim);
    const bool b = bounded_below_codiff(f, x0);
    out["bounded_below"] = b;
  }

  json conjugates = json::array();
  for (const auto& text : slope_flags) {
    const auto v = parse_vector_flag(text, "--slope");
    if (v.size() != doc.problem.dim)
      throw HypothesisError("usage error: --slope dimension mismatch");
    const auto value = conjugate_value(s, v);
    conjugates.push_back(
        {{"v", to_json(v)}, {"value", value ? json(*value) : json(nullptr)}});
  }
  if (!conjugates.empty()) out["conjugates"] = conjugates;

  if (flags.format == "text") {
    if (!convex) std::printf("note: %s\n", out["note"].get<std::string>().c_str());
    std::printf("bounded below: %s\n", out["bounded_below"].get<bool>() ? "yes" : "no");
    if (convex) {
      std::printf("infimum: %s\n", inf_value ? fmt(*inf_value).c_str() : "-inf");
      if (minimizer)
        std::printf("attained at %s\n", vec_text(*minimizer).c_str());
      else
        std::printf("infimum not attained\n");
    }
    for (const auto& c : conjugates)
      std::printf("sup{a : (a, v) in S} at v = %s: %s\n", c["v"].dump().c_str(),
                  c["value"].is_null() ? "outside dom f*" : fmt(c["value"].get<double>()).c_str());
  }
  return kExitOptimal;
}

int run_gen_disk(int n, const std::string& out_path) {
  if (n < 3) throw HypothesisError("usage error: --n must be at least 3");
  std::string text;
  text += "# Regular " + std::to_string(n) +
          "-gon inscribed in the circle (a+1)^2 + (v-1)^2 <= 1;\n";
  text += "# supports sqrt(1+x^2) + x - 1 up to the polygonal gap.\n";
  text += "dim 1\nobjective max(";
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n;
    if (k) text += ", ";
    text += "affine(" + format_real(-1.0 + std::cos(th)) + ", [" +
            format_real(1.0 + std::sin(th)) + "])";
  }
  text += ")\n";
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global optimality certificates and codifferential descent for "
               "piecewise-affine DC optimization"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string file;
  std::vector<std::string> slope_flags;
  int disk_n = 256;
  std::string disk_out;

  auto add_common = [&](CLI::App* cmd, bool with_mcd_flags) {
    cmd->add_option("file", file, "problem file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--point", flags.point_flag, "candidate/start point, comma-separated");
    cmd->add_option("--lambda", flags.lambda_flag, "penalty parameter");
    cmd->add_option("--tol-opt", flags.tol_opt_flag, "optimality tolerance on a(z)");
    cmd->add_option("--format", flags.format, "text or machine")
        ->check(CLI::IsMember({"text", "machine"}));
    if (with_mcd_flags) {
      cmd->add_option("--alpha-star", flags.alpha_star_flag, "step-size upper bound");
      cmd->add_option("--mu", flags.mu_flag, "extreme-point filter level");
      cmd->add_option("--max-iters", flags.max_iters_flag, "iteration cap");
    }
  };

  auto* check = app.add_subcommand("check", "verify global optimality at a point");
  add_common(check, false);
  check->add_flag("--penalty", flags.force_penalty,
                  "use the l1 penalty route even without equality constraints");

  auto* mcd = app.add_subcommand("mcd", "run the codifferential descent method");
  add_common(mcd, true);

  auto* info = app.add_subcommand("info", "support-set queries for an unconstrained problem");
  add_common(info, false);
  info->add_option("--slope", slope_flags, "slope vector for a conjugate query (repeatable)");

  auto* gen = app.add_subcommand("gen-disk", "emit an N-gon approximation of the disk support set");
  gen->add_option("--n", disk_n, "number of polygon vertices");
  gen->add_option("--out", disk_out, "output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  json out;
  out["schema"] = "v1";
  int code = kExitHypothesis;
  try {
    if (gen->parsed()) return run_gen_disk(disk_n, disk_out);
    const auto doc = parse_problem_file(file);
    if (check->parsed()) {
      out["command"] = "check";
      code = run_check(doc, flags, out);
    } else if (mcd->parsed()) {
      out["command"] = "mcd";
      code = run_mcd(doc, flags, out);
    } else {
      out["command"] = "info";
      code = run_info(doc, slope_flags, flags, out);
    }
  } catch (const UnboundedError<double>& err) {
    out["error"] = {{"kind", "unbounded"},
                    {"message", err.what()},
                    {"direction", to_json(err.direction)}};
    if (flags.format == "text")
      std::printf("hypothesis failure: %s (descent direction %s)\n", err.what(),
                  vec_text(err.direction).c_str());
    code = kExitHypothesis;
  } catch (const HypothesisError& err) {
    out["error"] = {{"kind", "hypothesis"}, {"message", err.what()}};
    if (flags.format == "text") std::printf("hypothesis failure: %s\n", err.what());
    code = kExitHypothesis;
  } catch (const ParseError& err) {
    out["error"] = {{"kind", "parse"},
                    {"message", err.what()},
                    {"line", err.line},
                    {"column", err.column}};
    if (flags.format == "text") std::fprintf(stderr, "parse error: %s\n", err.what());
    code = kExitHypothesis;
  } catch (const std::exception& err) {
    out["error"] = {{"kind", "invalid"}, {"message", err.what()}};
    if (flags.format == "text") std::fprintf(stderr, "error: %s\n", err.what());
    code = kExitHypothesis;
  }

  out["exit_code"] = code;
  if (flags.format == "machine") std::printf("%s\n", out.dump(2).c_str());
  return code;
}
