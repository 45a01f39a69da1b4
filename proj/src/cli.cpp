#include "curv4/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "curv4/akstruct.hpp"
#include "curv4/config.hpp"
#include "curv4/errors.hpp"

namespace curv4::cli {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

json vec(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }
json vec(const Point& p) { return json::array({p[0], p[1], p[2], p[3]}); }

struct Source {
  MetricField metric;
  std::optional<TwoFormField> form;
  std::optional<ModelGeometry> model;
};

struct PointOutcome {
  json record;
  bool ok = false;
  std::optional<PointHypotheses> hypotheses;
  double kperp_disagreement = -1.0;
  double weitzenboeck_residual = -1.0;
  bool check_error = false;  // a per-check failure (ak, weitzenboeck)
};

struct Job {
  const RunConfig& cfg;
  const Source& src;
};

PointOutcome analyze_point(const Job& job, std::size_t index, const Point& p) {
  const RunConfig& cfg = job.cfg;
  PointOutcome out;
  json& rec = out.record;
  rec["index"] = index;
  rec["point"] = vec(p);
  try {
    if (!contains(job.src.metric.domain(), p)) throw DomainError("point outside the chart domain");
    const CurvaturePoint cp = riemann(job.src.metric, p);
    const CurvatureOperator op = curvature_operator(cp);
    const SpectralData sd = spectra(op);

    if (cfg.checks.count("spectra")) {
      rec["s"] = sd.s;
      rec["lambda_plus"] = vec(sd.lambda_plus);
      rec["lambda_minus"] = vec(sd.lambda_minus);
      rec["r_plus"] = vec(sd.r_plus);
      rec["r_minus"] = vec(sd.r_minus);
    }
    const bool want_kperp = cfg.checks.count("kperp") > 0;
    const bool want_hyp = cfg.checks.count("hypotheses") > 0;
    if (want_kperp || want_hyp) {
      const KperpExtremes closed = kperp_extremes_closed(sd);
      if (want_kperp) {
        SearchBudget budget;
        budget.n_samples = cfg.search_samples;
        budget.seed = splitmix64(cfg.seed ^ splitmix64(index));
        const KperpExtremes found = kperp_extremes_search(op, budget);
        out.kperp_disagreement = std::max(std::fabs(closed.kperp1 - found.kperp1),
                                          std::fabs(closed.kperp3 - found.kperp3));
        rec["kperp"] = {{"kperp1_closed", closed.kperp1},
                        {"kperp3_closed", closed.kperp3},
                        {"kperp1_search", found.kperp1},
                        {"kperp3_search", found.kperp3},
                        {"disagreement", out.kperp_disagreement}};
      }
      if (want_hyp) {
        const PointHypotheses h = point_hypotheses(sd, closed, cfg.margin);
        rec["hypotheses"] = {{"kperp1", h.kperp1},
                             {"kperp3", h.kperp3},
                             {"margin", h.margin},
                             {"kperp_positive", h.kperp_positive},
                             {"kperp_below_quarter_s", h.kperp_below_quarter_s},
                             {"scalar_positive", h.scalar_positive},
                             {"min_r_sum", h.min_r_sum},
                             {"r_sums_positive", h.r_sums_positive},
                             {"plus_positive", h.plus.positive},
                             {"plus_smallest", h.plus.smallest},
                             {"minus_positive", h.minus.positive},
                             {"minus_smallest", h.minus.smallest},
                             {"consistency_errors", h.consistency_errors}};
        out.hypotheses = h;
      }
    }
    if (cfg.checks.count("ak") && job.src.form) {
      const TwoFormPoint wf = to_frame(cp.frame, job.src.form->values(p));
      const SymplecticCheck sc = check_symplectic_pointwise(wf);
      json ak = {{"selfdual", sc.selfdual},
                 {"length", sc.length},
                 {"volume_identity_residual", sc.volume_identity_residual}};
      try {
        const AlmostComplexStructure acs = build_acs(wf);
        ak["j_squared_residual"] = acs.j_squared_residual;
        ak["metric_residual"] = acs.metric_residual;
        ak["min_taming"] = acs.min_taming;
      } catch (const Error& e) {
        ak["error"] = e.what();
        out.check_error = true;
      }
      rec["ak"] = ak;
    }
    if (cfg.checks.count("weitzenboeck") && job.src.form) {
      try {
        const WeitzenboeckReport w = weitzenboeck_residual(*job.src.form, job.src.metric, p);
        out.weitzenboeck_residual = w.residual;
        rec["weitzenboeck"] = {{"duality", w.duality == Duality::self_dual ? "self_dual" : "anti_self_dual"},
                               {"d_norm", w.d_norm},
                               {"delta_norm", w.delta_norm},
                               {"laplacian_norm", w.laplacian_norm},
                               {"nabla_norm", w.nabla_norm},
                               {"residual", w.residual}};
      } catch (const Error& e) {
        rec["weitzenboeck"] = {{"error", e.what()}};
        out.check_error = true;
      }
    }
    rec["status"] = "ok";
    out.ok = true;
  } catch (const Error& e) {
    json base = {{"index", index}, {"point", vec(p)}, {"status", "error"}, {"error", e.what()}};
    rec = std::move(base);
    out.ok = false;
  }
  return out;
}

std::vector<PointOutcome> analyze_all(const Job& job, const std::vector<Point>& pts, std::size_t workers) {
  std::vector<PointOutcome> out(pts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) out[i] = analyze_point(job, i, pts[i]);
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(workers, pts.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return out;
}

json fact_json(const FactReport& fr) {
  json arr = json::array();
  for (const FactResult& r : fr.results) {
    json f = {{"quantity", r.fact.quantity},
              {"relation", relation_name(r.fact.relation)},
              {"value", r.fact.value},
              {"tolerance", r.fact.tolerance},
              {"origin", origin_name(r.fact.origin)},
              {"verifiable", r.fact.verifiable}};
    if (r.checked) {
      f["observed"] = r.observed;
      f["worst_deviation"] = r.worst_deviation;
      f["worst_point"] = vec(r.worst_point);
      f["passed"] = r.passed;
    }
    arr.push_back(f);
  }
  return {{"all_passed", fr.all_passed}, {"facts", arr}};
}

std::string csv_cell(const json& j) {
  if (j.is_null()) return "";
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
    return buf;
  }
  if (j.is_number()) return j.dump();
  std::string s = j.is_string() ? j.get<std::string>() : j.dump();
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string to_csv(const std::vector<PointOutcome>& outcomes) {
  struct Column {
    std::string name;
    json::json_pointer ptr;
  };
  std::vector<Column> cols = {{"index", json::json_pointer("/index")}};
  for (int k = 0; k < 4; ++k) cols.push_back({"x" + std::to_string(k + 1), json::json_pointer("/point/" + std::to_string(k))});
  cols.push_back({"status", json::json_pointer("/status")});
  cols.push_back({"s", json::json_pointer("/s")});
  for (const char* v : {"lambda_plus", "lambda_minus", "r_plus", "r_minus"}) {
    for (int k = 0; k < 3; ++k) {
      cols.push_back({std::string(v) + "_" + std::to_string(k + 1), json::json_pointer("/" + std::string(v) + "/" + std::to_string(k))});
    }
  }
  for (const char* v : {"kperp1_closed", "kperp3_closed", "kperp1_search", "kperp3_search"}) {
    cols.push_back({v, json::json_pointer(std::string("/kperp/") + v)});
  }
  for (const char* v : {"kperp_positive", "kperp_below_quarter_s", "scalar_positive", "r_sums_positive",
                        "plus_positive", "minus_positive"}) {
    cols.push_back({v, json::json_pointer(std::string("/hypotheses/") + v)});
  }
  cols.push_back({"weitzenboeck_residual", json::json_pointer("/weitzenboeck/residual")});
  cols.push_back({"error", json::json_pointer("/error")});

  std::ostringstream os;
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c].name;
  os << "\n";
  for (const auto& o : outcomes) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      os << (c ? "," : "") << (o.record.contains(cols[c].ptr) ? csv_cell(o.record.at(cols[c].ptr)) : "");
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace

const std::set<std::string>& known_checks() {
  static const std::set<std::string> k = {"spectra", "kperp", "hypotheses", "ak",
                                          "weitzenboeck", "facts", "perturb"};
  return k;
}

std::size_t default_workers() {
  if (const char* env = std::getenv("CURV4_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunResult run(const RunConfig& cfg) {
  RunResult res;
  auto usage = [&](const std::string& msg) {
    res.exit_code = usage_error;
    res.summary = "error: " + msg;
    return res;
  };

  if (cfg.builtin.has_value() == cfg.config_path.has_value()) {
    return usage("exactly one of --builtin and --metric is required");
  }
  if (cfg.grid.has_value() == cfg.random.has_value()) {
    return usage("exactly one of --grid and --random is required");
  }
  if (cfg.format != "json" && cfg.format != "csv") return usage("format must be json or csv");
  for (const auto& c : cfg.checks) {
    if (!known_checks().count(c)) return usage("unknown check '" + c + "'");
  }
  if (cfg.search_samples < 1) return usage("search sample count must be positive");

  Source src;
  json source;
  try {
    if (cfg.builtin) {
      src.model = builtin(*cfg.builtin, cfg.params);
      src.metric = src.model->metric;
      src.form = src.model->form;
      source = {{"builtin", *cfg.builtin}, {"params", cfg.params}};
    } else {
      MetricConfig mc = load_metric_config(*cfg.config_path);
      src.metric = mc.metric;
      src.form = mc.form;
      source = {{"config", *cfg.config_path}};
    }
  } catch (const Error& e) {
    return usage(e.what());
  }
  const bool perturb = cfg.checks.count("perturb") > 0;
  if (perturb && !(cfg.builtin && (*cfg.builtin == "fubini_study" || *cfg.builtin == "fs_perturbed"))) {
    return usage("the perturb check needs --builtin fubini_study or fs_perturbed");
  }

  std::vector<Point> pts;
  json sampling;
  try {
    const Box box = bounding_box(src.metric.domain());
    if (cfg.grid) {
      pts = grid_points(box, *cfg.grid);
      sampling = {{"grid", *cfg.grid}};
    } else {
      pts = random_points(box, *cfg.random, cfg.seed);
      sampling = {{"random", *cfg.random}};
    }
  } catch (const Error& e) {
    return usage(e.what());
  }
  if (pts.empty()) return usage("empty sample");

  const std::size_t workers = cfg.workers ? cfg.workers : default_workers();
  const Job job{cfg, src};
  const std::vector<PointOutcome> outcomes = analyze_all(job, pts, workers);

  // Aggregation, single-threaded in sample order.
  bool verdict_ok = true;
  bool consistent = true;
  std::size_t errored = 0;
  json points = json::array();
  for (const auto& o : outcomes) {
    points.push_back(o.record);
    if (!o.ok) ++errored;
    if (o.check_error) verdict_ok = false;
  }
  if (errored > 0) verdict_ok = false;

  json agg = {{"points", pts.size()}, {"errored_points", errored}};
  std::vector<std::string> notes;

  if (cfg.checks.count("hypotheses")) {
    std::vector<PointHypotheses> hs;
    for (const auto& o : outcomes) {
      if (o.hypotheses) hs.push_back(*o.hypotheses);
    }
    const HypothesisReport hr = aggregate_hypotheses(std::move(hs), errored);
    agg["hypotheses"] = {{"all_kperp_positive", hr.all_kperp_positive},
                         {"all_kperp_below_quarter_s", hr.all_kperp_below_quarter_s},
                         {"all_scalar_positive", hr.all_scalar_positive},
                         {"all_r_sums_positive", hr.all_r_sums_positive},
                         {"plus_positive_everywhere", hr.plus_positive_everywhere},
                         {"minus_positive_everywhere", hr.minus_positive_everywhere},
                         {"dichotomy", dichotomy_name(hr.dichotomy)},
                         {"hypothesis_holds", hr.hypothesis_holds()},
                         {"consistency_failures", hr.consistency_failures}};
    if (!hr.hypothesis_holds()) verdict_ok = false;
    if (hr.consistency_failures > 0) consistent = false;
  }
  if (cfg.checks.count("kperp")) {
    double worst = 0.0;
    std::size_t compared = 0;
    for (const auto& o : outcomes) {
      if (o.kperp_disagreement >= 0.0) {
        worst = std::max(worst, o.kperp_disagreement);
        ++compared;
      }
    }
    const bool agree = worst <= cfg.agreement_tolerance;
    agg["oracle"] = {{"max_kperp_disagreement", worst},
                     {"compared", compared},
                     {"tolerance", cfg.agreement_tolerance},
                     {"agree", agree}};
    if (!agree) consistent = false;
  }
  if (cfg.checks.count("weitzenboeck")) {
    if (!src.form) {
      notes.push_back("weitzenboeck: metric source has no 2-form");
    } else {
      double worst = 0.0;
      std::size_t failed = 0;
      for (const auto& o : outcomes) {
        if (o.weitzenboeck_residual < 0.0) continue;
        worst = std::max(worst, o.weitzenboeck_residual);
        if (o.weitzenboeck_residual > cfg.weitzenboeck_tolerance) ++failed;
      }
      agg["weitzenboeck"] = {{"max_residual", worst},
                             {"tolerance", cfg.weitzenboeck_tolerance},
                             {"failed_points", failed}};
      if (failed > 0) consistent = false;
    }
  }
  if (cfg.checks.count("ak") && !src.form) notes.push_back("ak: metric source has no 2-form");
  if (cfg.checks.count("facts")) {
    if (!src.model) {
      notes.push_back("facts: only built-in models carry facts");
    } else {
      std::vector<Point> good;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (outcomes[i].ok) good.push_back(pts[i]);
      }
      const FactReport fr = verify_facts(*src.model, good, cfg.seed);
      agg["facts"] = fact_json(fr);
      if (!fr.all_passed) consistent = false;
    }
  }
  if (perturb) {
    const PerturbationReport pr = perturbation_threshold(reference_bump(), cfg.seed);
    json rows = json::array();
    for (const auto& r : pr.rows) {
      rows.push_back({{"t", r.t}, {"min_plus", r.min_plus}, {"min_minus", r.min_minus}, {"passed", r.passed}});
    }
    agg["perturbation"] = {{"unperturbed_min", pr.unperturbed_min},
                           {"threshold", pr.threshold},
                           {"min_at_half_threshold", pr.min_at_half_threshold},
                           {"pairs", pr.pairs},
                           {"rows", rows}};
    if (!(pr.threshold > 0.0)) verdict_ok = false;
  }
  if (!notes.empty()) agg["notes"] = notes;

  res.exit_code = !consistent ? inconsistent : (!verdict_ok ? verdict_false : ok);
  json checks = json::array();
  for (const auto& c : cfg.checks) checks.push_back(c);
  json report = {{"schema", 1},
                 {"seed", cfg.seed},
                 {"source", source},
                 {"sampling", sampling},
                 {"checks", checks},
                 {"margin", cfg.margin ? json(*cfg.margin) : json(nullptr)},
                 {"points", points},
                 {"aggregate", agg},
                 {"exit_code", res.exit_code}};
  res.report = cfg.format == "json" ? report.dump(2) + "\n" : to_csv(outcomes);

  std::ostringstream s;
  s << pts.size() << " points, " << errored << " errored";
  if (agg.contains("hypotheses")) {
    s << "; K_perp>0 everywhere: " << (agg["hypotheses"]["all_kperp_positive"].get<bool>() ? "true" : "false")
      << ", K_perp<s/4 everywhere: " << (agg["hypotheses"]["all_kperp_below_quarter_s"].get<bool>() ? "true" : "false");
  }
  s << "; exit " << res.exit_code;
  res.summary = s.str();
  return res;
}

}  // namespace curv4::cli
