#include "kreindil/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <thread>

#include <CLI11.hpp>

#include "kreindil/g_operator.hpp"
#include "kreindil/krein_dilation.hpp"
#include "kreindil/random.hpp"
#include "kreindil/sectoriality.hpp"
#include "kreindil/toeplitz_kernel.hpp"

namespace kreindil::cli {

namespace {

using nlohmann::json;

// Pass/fail thresholds shared by the commands.
constexpr double kMarginTol = 1e-10;
constexpr double kGrowthTol = 1e-9;
constexpr double kDerivativeTol = 1e-6;
constexpr double kOrderLow = 1.8;
constexpr double kOrderHigh = 2.2;
constexpr double kRouteTol = 1e-7;
constexpr double kCompressionTol = 1e-8;
constexpr double kIsometryTol = 1e-10;
constexpr double kRegularityTol = 1e-9;
constexpr double kPointSpacing = 1e-6;
constexpr int kReplayLimit = 5;

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

class CheckList {
 public:
  enum class Kind { kHypothesis, kConsequence, kInfo };

  // value ≤ bound passes.
  void upper(const std::string& name, Kind kind, double value, double bound, json extra = {}) {
    add(name, kind, value <= bound, value, bound, std::move(extra));
  }
  void flag(const std::string& name, Kind kind, bool passed, double value, json extra = {}) {
    add(name, kind, passed, value, std::numeric_limits<double>::quiet_NaN(), std::move(extra));
  }

  bool hypotheses_hold() const { return failed_hypotheses_ == 0; }
  bool all_hold() const { return failed_hypotheses_ == 0 && failed_other_ == 0; }
  const json& entries() const { return checks_; }

 private:
  void add(const std::string& name, Kind kind, bool passed, double value, double bound,
           json extra) {
    json entry = {{"name", name},
                  {"kind", kind == Kind::kHypothesis    ? "hypothesis"
                           : kind == Kind::kConsequence ? "consequence"
                                                        : "info"},
                  {"passed", passed},
                  {"value", finite_or_null(value)},
                  {"bound", finite_or_null(bound)},
                  {"slack", finite_or_null(bound - value)}};
    if (!extra.is_null()) entry["details"] = std::move(extra);
    checks_.push_back(std::move(entry));
    if (passed || kind == Kind::kInfo) return;
    (kind == Kind::kHypothesis ? failed_hypotheses_ : failed_other_)++;
  }

  json checks_ = json::array();
  int failed_hypotheses_ = 0;
  int failed_other_ = 0;
};

using Kind = CheckList::Kind;

double generator_scale(const OperatorSpec& spec) { return std::max(1.0, norm2(spec.generator)); }

struct Hypotheses {
  CheckList checks;
  double theta = kDefaultTheta;
  double beta = 0.0;
  bool beta_found = false;
  json sectoriality;
};

Hypotheses assess(const ModelFile& model, std::optional<double> theta_arg,
                  std::optional<double> beta_arg) {
  const OperatorSpec& spec = model.spec;
  const bool metric = spec.has_metric();
  Hypotheses out;
  out.theta = theta_arg.value_or(model.theta.value_or(kDefaultTheta));
  const double scale = generator_scale(spec);

  if (beta_arg || model.beta) {
    out.beta = beta_arg ? *beta_arg : *model.beta;
    out.checks.flag("beta", Kind::kInfo, true, out.beta, {{"source", "given"}});
  } else {
    const BetaSearch search = find_beta(spec, out.theta, metric);
    out.checks.flag("beta_search", Kind::kHypothesis, search.feasible, search.beta,
                    {{"upper_limit", search.upper_limit},
                     {"margin_at_limit", search.margin_at_limit},
                     {"cause", search.feasible ? "" : "no β ≤ 10‖A‖ places ν(A) in S_{β,θ}"}});
    if (!search.feasible) return out;
    out.beta = search.beta;
    out.beta_found = true;
  }
  if (out.beta < 0.0) {
    out.checks.flag("beta_nonnegative", Kind::kHypothesis, false, out.beta);
    return out;
  }

  const SectorialityReport rep =
      check_sectorial(spec, out.beta, out.theta, default_resolvent_angles(out.theta), metric);
  out.checks.upper("numerical_range_in_sector", Kind::kHypothesis, rep.nr_margin,
                   Sector::kBoundaryBand * scale, {{"metric", metric}});
  out.checks.flag("spectrum_in_sector", Kind::kHypothesis, rep.spectrum_in_sector,
                  rep.spectrum_indeterminate ? 1.0 : 0.0,
                  {{"boundary", rep.spectrum_indeterminate}});
  double worst_sup = 0.0;
  json sups = json::array();
  for (const ResolventSample& s : rep.resolvent_sup) {
    worst_sup = std::max(worst_sup, s.sup_estimate);
    sups.push_back({{"phi", s.phi}, {"sup_estimate", finite_or_null(s.sup_estimate)}});
  }
  out.checks.flag("resolvent_sup_finite", Kind::kHypothesis, std::isfinite(worst_sup), worst_sup,
                  {{"samples", sups}, {"estimate", true}});
  const Kind plain_kind = metric ? Kind::kInfo : Kind::kHypothesis;
  out.checks.upper("dissipative_margin", plain_kind, rep.dissipative_margin, kMarginTol * scale);
  if (rep.metric_dissipative_margin) {
    out.checks.upper("metric_dissipative_margin", Kind::kHypothesis, *rep.metric_dissipative_margin,
                     kMarginTol * scale,
                     {{"d", *rep.metric_lower}, {"D", *rep.metric_upper}});
  }
  out.sectoriality = {{"theta", rep.theta},
                      {"beta", rep.beta},
                      {"nr_in_sector", rep.nr_in_sector},
                      {"nr_margin", rep.nr_margin},
                      {"spectrum_in_sector", rep.spectrum_in_sector},
                      {"spectrum_boundary", rep.spectrum_indeterminate},
                      {"resolvent_sup", sups},
                      {"resolvent_norm", "plain"},
                      {"dissipative_margin", rep.dissipative_margin},
                      {"holomorphy_semi_angle", rep.holomorphy_semi_angle}};
  if (rep.metric_dissipative_margin) {
    out.sectoriality["metric_dissipative_margin"] = *rep.metric_dissipative_margin;
    out.sectoriality["d"] = *rep.metric_lower;
    out.sectoriality["D"] = *rep.metric_upper;
  }
  return out;
}

void add_consequences(const ModelFile& model, const Hypotheses& hyp, CheckList& checks) {
  const OperatorSpec& spec = model.spec;
  const bool metric = spec.has_metric();
  std::vector<double> times;
  for (int k = 1; k <= 30; ++k) times.push_back(0.1 * k);
  checks.upper("growth_bound", Kind::kConsequence, growth_ratio(spec, hyp.beta, times, metric),
               1.0 + kGrowthTol, {{"norm", metric ? "metric" : "plain"}});
  for (int order : {1, 2}) {
    const DerivativeReport d = check_derivative_identity(spec, 0.5, order);
    const bool order_ok =
        d.exact || (d.observed_order >= kOrderLow && d.observed_order <= kOrderHigh);
    checks.flag("derivative_identity_order" + std::to_string(order), Kind::kConsequence,
                d.residual <= kDerivativeTol && order_ok, d.residual,
                {{"t", d.t},
                 {"step", d.step},
                 {"residual_half", d.residual_half},
                 {"observed_order", finite_or_null(d.observed_order)},
                 {"exact", d.exact}});
  }
  checks.upper("holomorphic_contraction", Kind::kConsequence,
               holomorphic_contraction(spec, hyp.beta, hyp.theta, 100, 0, metric), 1.0 + kGrowthTol,
               {{"norm", metric ? "metric" : "plain"}});
}

json base_report(const std::string& command) {
  return {{"command", command}};
}

int exit_for(const CheckList& checks) {
  if (!checks.hypotheses_hold()) return kHypothesis;
  return checks.all_hold() ? kPass : kCertification;
}

// ---------------------------------------------------------------------------
// certify

FiniteSupportFunction random_support(Rng& rng, Index dim, int max_points, double span) {
  std::uniform_int_distribution<int> count_dist(1, std::max(1, max_points));
  const int count = count_dist(rng);
  std::vector<double> points;
  std::vector<CVector> vectors;
  while (static_cast<int>(points.size()) < count) {
    const double p = uniform(rng, -span, span);
    bool crowded = std::abs(p) < kPointSpacing;
    for (double q : points) crowded = crowded || std::abs(p - q) < kPointSpacing;
    if (crowded) continue;
    points.push_back(p);
    vectors.push_back(random_complex_vector(rng, dim));
  }
  // The origin carries a value with probability one half.
  if (uniform(rng, 0.0, 1.0) < 0.5) {
    points.push_back(0.0);
    vectors.push_back(random_complex_vector(rng, dim));
  }
  return FiniteSupportFunction::make(std::move(points), std::move(vectors));
}

json function_to_json(const FiniteSupportFunction& h) {
  json vecs = json::array();
  for (const CVector& v : h.vectors) vecs.push_back(vector_to_json(v));
  return {{"points", h.points}, {"vectors", vecs}};
}

struct TrialOutcome {
  FiniteSupportFunction h;
  double xi = 0.0;
  std::string error;
  MajorizationReport majorization;
  double sf_gap = 0.0;
  double sk_gap = 0.0;
  bool routes_agree = true;
  std::optional<ConditionIIIReport> condition_iii;
  TranslationReport translation;
};

TrialOutcome run_trial(const Semigroup& sg, const GDecomposition& decomp, double beta,
                       const CertifyOptions& opts, int index) {
  Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(index) + 1);
  TrialOutcome out;
  out.h = random_support(rng, sg.dim(), opts.max_points, opts.span);
  out.xi = uniform(rng, -opts.xi_max, opts.xi_max);
  try {
    const FormEvaluation f = s_f(sg, decomp, out.h);
    const FormEvaluation k = s_k(sg, decomp, out.h);
    out.majorization.sf = f.value;
    out.majorization.sk = k.value;
    out.majorization.slack = k.value - std::abs(f.value);
    out.majorization.scale = std::max({1.0, f.magnitude, k.magnitude});
    out.majorization.passed =
        std::abs(f.value) <= k.value + kInequalitySlack * out.majorization.scale;
    out.sf_gap = f.relative_gap();
    out.sk_gap = k.relative_gap();
    out.routes_agree = out.sf_gap <= kRouteTol && out.sk_gap <= kRouteTol;
    if (k.value > 1e-12 * std::max(k.magnitude, 1e-300)) {
      out.condition_iii = check_condition_iii(sg, decomp, out.h);
    }
    out.translation = check_translation_bound(sg, decomp, out.h, out.xi, beta);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

CommandResult cmd_analyze(const ModelFile& model, const AnalyzeOptions& opts) {
  CommandResult result;
  result.report = base_report("analyze");
  Hypotheses hyp = assess(model, opts.theta, opts.beta);
  if (hyp.checks.hypotheses_hold()) add_consequences(model, hyp, hyp.checks);
  result.report["theta"] = hyp.theta;
  result.report["beta"] = hyp.beta;
  result.report["beta_found"] = hyp.beta_found;
  result.report["metric"] = model.spec.has_metric();
  result.report["sectoriality"] = hyp.sectoriality;
  result.report["tolerances"] = {{"margin", kMarginTol},
                                 {"growth", kGrowthTol},
                                 {"derivative", kDerivativeTol},
                                 {"order_range", {kOrderLow, kOrderHigh}}};
  result.report["checks"] = hyp.checks.entries();
  result.exit_code = exit_for(hyp.checks);
  return result;
}

CommandResult cmd_certify(const ModelFile& model, const CertifyOptions& opts) {
  if (opts.trials < 0 || opts.max_points < 1 || !(opts.span > 0.0) || !(opts.xi_max >= 0.0) ||
      opts.jobs < 1) {
    throw InvalidArgument("certify: need trials >= 0, max-points >= 1, span > 0, xi-max >= 0, jobs >= 1");
  }
  CommandResult result;
  result.report = base_report("certify");
  result.report["seed"] = opts.seed;
  result.report["trials"] = opts.trials;
  result.report["max_points"] = opts.max_points;
  result.report["span"] = opts.span;
  result.report["xi_max"] = opts.xi_max;
  result.report["tolerances"] = {{"inequality_slack", kInequalitySlack},
                                 {"identity", kIdentityTolerance},
                                 {"route", kRouteTol},
                                 {"translation_relative", 1e-8}};

  Hypotheses hyp = assess(model, opts.theta, opts.beta);
  result.report["theta"] = hyp.theta;
  result.report["beta"] = hyp.beta;
  if (!hyp.checks.hypotheses_hold() && !opts.force) {
    result.report["checks"] = hyp.checks.entries();
    result.exit_code = kHypothesis;
    return result;
  }

  const MetricContext ctx = MetricContext::of(model.spec);
  const Semigroup sg(model.spec, ctx);
  const GDecomposition decomp = decompose(model.spec, hyp.beta, ctx);

  std::vector<TrialOutcome> outcomes(opts.trials);
  auto worker = [&](int first) {
    for (int k = first; k < opts.trials; k += opts.jobs) {
      outcomes[k] = run_trial(sg, decomp, hyp.beta, opts, k);
    }
  };
  if (opts.jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < opts.jobs; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }

  CheckList checks;
  int maj_fail = 0, route_fail = 0, iii_fail = 0, iii_count = 0, trans_fail = 0, errors = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  double worst_route = 0.0, worst_iii = 0.0, worst_trans = 0.0, max_exponent = 0.0;
  double best_lo = std::numeric_limits<double>::infinity(), best_hi = 0.0;
  json maj_replay = json::array(), route_replay = json::array(), iii_replay = json::array(),
       trans_replay = json::array(), error_replay = json::array();
  auto replay = [&](json& list, const TrialOutcome& o, int k, json extra = {}) {
    if (static_cast<int>(list.size()) >= kReplayLimit) return;
    json entry = {{"trial", k}, {"h", function_to_json(o.h)}, {"xi", o.xi}};
    if (!extra.is_null()) entry["measured"] = std::move(extra);
    list.push_back(std::move(entry));
  };
  for (int k = 0; k < opts.trials; ++k) {
    const TrialOutcome& o = outcomes[k];
    if (!o.error.empty()) {
      ++errors;
      replay(error_replay, o, k, {{"error", o.error}});
      continue;
    }
    min_slack = std::min(min_slack, o.majorization.slack / o.majorization.scale);
    if (!o.majorization.passed) {
      ++maj_fail;
      replay(maj_replay, o, k, {{"sf", o.majorization.sf}, {"sk", o.majorization.sk}});
    }
    worst_route = std::max({worst_route, o.sf_gap, o.sk_gap});
    if (!o.routes_agree) {
      ++route_fail;
      replay(route_replay, o, k, {{"sf_gap", o.sf_gap}, {"sk_gap", o.sk_gap}});
    }
    if (o.condition_iii) {
      ++iii_count;
      const ConditionIIIReport& c = *o.condition_iii;
      const double dev = std::max({c.cross_deviation, c.prime_deviation, std::abs(c.ratio - 1.0)});
      worst_iii = std::max(worst_iii, dev);
      best_lo = std::min(best_lo, c.best_ratio);
      best_hi = std::max(best_hi, c.best_ratio);
      if (!c.passed) {
        ++iii_fail;
        replay(iii_replay, o, k, {{"ratio", c.ratio}, {"best_ratio", c.best_ratio}});
      }
    }
    const TranslationReport& t = o.translation;
    if (t.s0 > 0.0) worst_trans = std::max(worst_trans, t.ratio / t.rho);
    if (t.xi != 0.0) max_exponent = std::max(max_exponent, t.observed_exponent);
    if (!t.passed) {
      ++trans_fail;
      replay(trans_replay, o, k, {{"s0", t.s0}, {"s_xi", t.s_xi}, {"rho", t.rho}});
    }
  }
  const bool ran = opts.trials > 0;
  checks.flag("majorization", Kind::kConsequence, maj_fail == 0, maj_fail,
              {{"min_relative_slack", ran ? finite_or_null(min_slack) : json(nullptr)},
               {"replay", maj_replay}});
  checks.flag("route_agreement", Kind::kConsequence, route_fail == 0, worst_route,
              {{"failures", route_fail}, {"replay", route_replay}});
  checks.flag("condition_iii", Kind::kConsequence, iii_fail == 0, worst_iii,
              {{"failures", iii_fail},
               {"evaluated", iii_count},
               {"best_same_support_ratio",
                iii_count ? json({best_lo, best_hi}) : json(nullptr)},
               {"R", 1.0},
               {"replay", iii_replay}});
  checks.flag("translation_bound", Kind::kConsequence, trans_fail == 0, worst_trans,
              {{"failures", trans_fail},
               {"rho_exponent", 8.0 * hyp.beta},
               {"observed_exponent_max", max_exponent},
               {"replay", trans_replay}});
  checks.flag("evaluation_errors", Kind::kConsequence, errors == 0, errors,
              {{"replay", error_replay}});

  json all = hyp.checks.entries();
  for (const auto& c : checks.entries()) all.push_back(c);
  result.report["checks"] = all;
  result.exit_code = hyp.checks.hypotheses_hold() ? (checks.all_hold() ? kPass : kCertification)
                                                  : kHypothesis;
  if (opts.force && result.exit_code == kHypothesis && checks.all_hold()) result.exit_code = kPass;
  return result;
}

CommandResult cmd_dilate(const ModelFile& model, const DilateOptions& opts) {
  if (!(opts.delta > 0.0) || opts.m < 0 || !(opts.cutoff >= 0.0)) {
    throw InvalidArgument("dilate: need delta > 0, m >= 0, cutoff >= 0");
  }
  CommandResult result;
  result.report = base_report("dilate");
  result.report["delta"] = opts.delta;
  result.report["m"] = opts.m;
  result.report["cutoff"] = opts.cutoff;
  result.report["tolerances"] = {{"compression", kCompressionTol},
                                 {"isometry", kIsometryTol},
                                 {"regularity", kRegularityTol}};
  Hypotheses hyp = assess(model, opts.theta, opts.beta);
  result.report["theta"] = hyp.theta;
  result.report["beta"] = hyp.beta;
  if (!hyp.checks.hypotheses_hold() && !opts.force) {
    result.report["checks"] = hyp.checks.entries();
    result.exit_code = kHypothesis;
    return result;
  }

  const bool metric_path = model.spec.has_metric() && !opts.plain;
  DilationReport rep;
  try {
    rep = metric_path ? dilate_with_metric(model.spec, opts.delta, opts.m, opts.cutoff, hyp.beta)
                      : dilate(Semigroup(model.spec), opts.delta, opts.m, opts.cutoff);
  } catch (const RegularityError& e) {
    result.report["checks"] = hyp.checks.entries();
    result.report["error"] = e.what();
    result.exit_code = kDilation;
    return result;
  }

  CheckList checks;
  json per_j = json::array();
  for (const CompressionSample& s : rep.compression) {
    json entry = {{"j", s.j}, {"t", s.j * opts.delta}, {"error", s.error}};
    if (s.transported_error) entry["transported_error"] = *s.transported_error;
    per_j.push_back(entry);
  }
  checks.upper("compression", Kind::kConsequence, rep.max_compression_error, kCompressionTol,
               {{"per_j", per_j},
                {"against", metric_path ? "T(t) and T(t)* in the plain product"
                                        : "T(t) and its adjoint in the model geometry"}});
  if (rep.max_transported_error) {
    checks.upper("transported_compression", Kind::kInfo, *rep.max_transported_error,
                 kCompressionTol, {{"against", "Λ^{-1/2} T(t) Λ^{1/2}"}});
  }
  checks.upper("shift_isometry", Kind::kConsequence, rep.quotient_isometry_defect, kIsometryTol,
               {{"gram_level", rep.gram_isometry_defect}});
  checks.upper("regularity", Kind::kConsequence, rep.regularity_defect, kRegularityTol,
               {{"embedding_condition", rep.embedding_condition},
                {"embedding_positive", rep.embedding_positive}});
  checks.upper("gram_consistency", Kind::kConsequence, rep.gram_consistency, kIsometryTol);
  bool monotone = true;
  for (std::size_t k = 1; k < rep.signature_trace.size(); ++k) {
    monotone = monotone &&
               rep.signature_trace[k].signature.negative >= rep.signature_trace[k - 1].signature.negative;
  }
  checks.flag("negative_index_monotone", Kind::kInfo, monotone, rep.signature.negative);
  if (rep.cholesky_compression_gap) {
    checks.upper("cholesky_cross_check", Kind::kConsequence, *rep.cholesky_compression_gap,
                 kCompressionTol, {{"factor_residual", *rep.cholesky_residual}});
  }
  if (rep.sandwich_violation) {
    checks.upper("norm_sandwich", Kind::kConsequence, *rep.sandwich_violation, 1e-12,
                 {{"d", *rep.metric_lower}, {"D", *rep.metric_upper}});
  }

  result.report["metric_path"] = rep.metric_path;
  result.report["signature"] = {rep.signature.positive, rep.signature.negative,
                                rep.signature.degenerate};
  result.report["spectral_gap"] = {{"smallest_kept", rep.smallest_kept},
                                   {"largest_dropped", rep.largest_dropped}};
  json trace = json::array();
  std::string csv = "m,n_plus,n_minus,n_zero,max_compression_error\n";
  for (const SignatureRow& row : rep.signature_trace) {
    trace.push_back({{"m", row.m},
                     {"signature", {row.signature.positive, row.signature.negative,
                                    row.signature.degenerate}},
                     {"max_compression_error", row.max_compression_error}});
    char line[160];
    std::snprintf(line, sizeof line, "%d,%lld,%lld,%lld,%.17g\n", row.m,
                  static_cast<long long>(row.signature.positive),
                  static_cast<long long>(row.signature.negative),
                  static_cast<long long>(row.signature.degenerate), row.max_compression_error);
    csv += line;
  }
  result.report["signature_trace"] = trace;
  result.csv = std::move(csv);

  json all = hyp.checks.entries();
  for (const auto& c : checks.entries()) all.push_back(c);
  result.report["checks"] = all;
  result.exit_code = checks.all_hold() ? kPass : kDilation;
  return result;
}

ModelFile cmd_gen(const GenOptions& opts) {
  ModelFile model;
  model.spec = generate_instance(opts.dim, opts.theta, opts.beta, opts.metric, opts.seed);
  model.beta = opts.beta;
  model.theta = opts.theta;
  return model;
}

int run(int argc, char** argv) {
  CLI::App app{"Kreĭn-space dilations of finite-dimensional holomorphic semigroups"};
  app.require_subcommand(1);

  std::string model_path;
  AnalyzeOptions analyze_opts;
  auto* analyze = app.add_subcommand("analyze", "check the sector and dissipativity hypotheses");
  analyze->add_option("--model", model_path, "model JSON")->required();
  analyze->add_option("--theta", analyze_opts.theta, "sector semi-angle in (0, π/2)");
  analyze->add_option("--beta", analyze_opts.beta, "shift β (searched when absent)");

  CertifyOptions certify_opts;
  auto* certify = app.add_subcommand("certify", "sample the kernel conditions on random h");
  certify->add_option("--model", model_path, "model JSON")->required();
  certify->add_option("--trials", certify_opts.trials)->required();
  certify->add_option("--seed", certify_opts.seed)->required();
  certify->add_option("--max-points", certify_opts.max_points);
  certify->add_option("--span", certify_opts.span);
  certify->add_option("--xi-max", certify_opts.xi_max);
  certify->add_option("--jobs", certify_opts.jobs);
  certify->add_option("--theta", certify_opts.theta);
  certify->add_option("--beta", certify_opts.beta);
  certify->add_flag("--force", certify_opts.force, "run even if the hypotheses fail");

  DilateOptions dilate_opts;
  std::string trace_path;
  auto* dil = app.add_subcommand("dilate", "build the finite-section dilation");
  dil->add_option("--model", model_path, "model JSON")->required();
  dil->add_option("--delta", dilate_opts.delta)->required();
  dil->add_option("--m", dilate_opts.m)->required();
  dil->add_option("--cutoff", dilate_opts.cutoff);
  dil->add_option("--trace", trace_path, "CSV output for the signature trace");
  dil->add_option("--theta", dilate_opts.theta);
  dil->add_option("--beta", dilate_opts.beta);
  dil->add_flag("--plain", dilate_opts.plain, "skip the metric transformation");
  dil->add_flag("--force", dilate_opts.force, "run even if the hypotheses fail");

  GenOptions gen_opts;
  std::string out_path;
  auto* gen = app.add_subcommand("gen", "write a random model satisfying the hypotheses");
  gen->add_option("--dim", gen_opts.dim)->required();
  gen->add_option("--theta", gen_opts.theta)->required();
  gen->add_option("--beta", gen_opts.beta)->required();
  gen->add_flag("--metric", gen_opts.metric);
  gen->add_option("--seed", gen_opts.seed)->required();
  gen->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    CommandResult result;
    if (*gen) {
      save_model(cmd_gen(gen_opts), out_path);
      result.report = {{"command", "gen"}, {"seed", gen_opts.seed}, {"out", out_path}};
    } else {
      const ModelFile model = load_model(model_path);
      if (*analyze) {
        result = cmd_analyze(model, analyze_opts);
      } else if (*certify) {
        result = cmd_certify(model, certify_opts);
      } else {
        result = cmd_dilate(model, dilate_opts);
        if (!trace_path.empty() && !result.csv.empty()) {
          std::ofstream out(trace_path);
          if (!(out << result.csv)) throw std::runtime_error("cannot write " + trace_path);
        }
      }
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;
    result.report["timing_ms"] =
        std::chrono::duration<double, std::milli>(elapsed).count();
    std::cout << result.report.dump(2) << '\n';
    return result.exit_code;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCertification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace kreindil::cli
