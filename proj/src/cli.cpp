#include "arcfit/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "arcfit/compress.hpp"
#include "arcfit/errors.hpp"
#include "arcfit/fit.hpp"
#include "arcfit/io.hpp"
#include "arcfit/refcheck.hpp"
#include "arcfit/scenario.hpp"

namespace arcfit {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct FitArgs {
  std::string input;
  std::vector<std::string> through;
  int sweeps = 1;
  std::string format = "json";
};

struct CompressArgs {
  std::string input;
  double tol = -1.0;
  bool filtered = false;
  std::string format = "json";
};

struct CompareArgs {
  SimScenario scenario;
  std::string format = "csv";
};

void cmd_fit(const FitArgs& a, std::ostream& out) {
  if (a.through.size() > 2) throw std::invalid_argument("--through accepts at most two points");
  if (a.sweeps < 1) throw std::invalid_argument("--sweeps must be >= 1");
  const std::vector<Point2> pts = read_points_file(a.input);
  if (pts.empty()) throw std::invalid_argument(a.input + ": no points");
  std::vector<Point2> anchors;
  for (const std::string& t : a.through) anchors.push_back(parse_point_pair(t));

  const MomentAccumulator acc = accumulate_points(pts);
  const NormalizedMoments m = fitting_moments(acc);
  Circle c;
  std::string method;
  switch (anchors.size()) {
    case 0:
      c = free_fit(m, a.sweeps);
      method = "free";
      break;
    case 1:
      c = one_point_fit(m, anchors[0]);
      method = "one_point";
      break;
    default:
      c = two_point_fit(m, anchors[0], anchors[1]);
      method = "two_point";
      break;
  }
  std::vector<double> residuals;
  for (Point2 p : anchors) residuals.push_back(distance(c.center, p) - c.r);

  const double obj = objective(m, c);
  const double pen = penalty(m, c);
  const double sse = exact_sse(pts, c);
  if (a.format == "csv") {
    out << "method,points,cx,cy,r,objective,penalty,sse\n";
    out << method << ',' << pts.size() << ',' << num(c.center.x) << ',' << num(c.center.y) << ',' << num(c.r) << ','
        << num(obj) << ',' << num(pen) << ',' << num(sse) << '\n';
    return;
  }
  json j = {{"method", method},   {"points", pts.size()}, {"center", to_json(c.center)}, {"radius", c.r},
            {"objective", obj},   {"penalty", pen},       {"sse", sse},
            {"anchors", json::array()}, {"anchor_residuals", residuals}};
  for (Point2 p : anchors) j["anchors"].push_back(to_json(p));
  out << j.dump(2) << '\n';
}

void cmd_compress(const CompressArgs& a, std::ostream& out) {
  if (!(a.tol >= 0.0)) throw std::invalid_argument("--tol must be >= 0");
  const std::vector<Point2> pts = read_points_file(a.input);
  CompressOptions o;
  o.tol = a.tol;
  o.filtered = a.filtered;
  const CompressedPath path = compress(pts, o);
  if (a.format == "csv") {
    out << "type,from,to,penalty,ssd,cx,cy,r,sweep\n";
    for (const Primitive& p : path.primitives) {
      out << (p.arc ? "arc" : "segment") << ',' << p.from << ',' << p.to << ',' << p.penalty << ',' << num(p.ssd);
      if (p.arc)
        out << ',' << num(p.arc->circle.center.x) << ',' << num(p.arc->circle.center.y) << ','
            << num(p.arc->circle.r) << ',' << num(p.arc->sweep);
      else
        out << ",,,,";
      out << '\n';
    }
    return;
  }
  out << to_json(path, pts, a.tol).dump(2) << '\n';
}

void write_method_csv(std::ostream& out, const std::string& trial, const char* name, const MethodResult& r,
                      const Circle& truth) {
  out << trial << ',' << name << ',';
  if (!r.ok) {
    out << ",,,,," << r.error << '\n';
    return;
  }
  out << num(r.circle.center.x) << ',' << num(r.circle.center.y) << ',' << num(r.circle.r) << ','
      << num(distance(r.circle.center, truth.center)) << ',' << num(r.circle.r - truth.r) << ",\n";
}

json method_json(const MethodResult& r, const Circle& truth) {
  if (!r.ok) return {{"ok", false}, {"error", r.error}};
  return {{"ok", true},
          {"center", to_json(r.circle.center)},
          {"radius", r.circle.r},
          {"center_err", distance(r.circle.center, truth.center)},
          {"radius_err", r.circle.r - truth.r}};
}

json summary_json(const MethodSummary& m) {
  return {{"count", m.count},
          {"mean_r", m.mean_r},
          {"mean_center_err", m.mean_center_err},
          {"mean_radius_err", m.mean_radius_err}};
}

void cmd_compare(const CompareArgs& a, std::ostream& out) {
  const SimScenario& s = a.scenario;
  s.validate();
  const std::vector<TrialResult> results = run_compare(s);
  const CompareSummary sum = summarize(s, results);
  const Circle truth = scenario_truth(s);

  if (a.format == "json") {
    json trials = json::array();
    for (const TrialResult& r : results)
      trials.push_back({{"trial", r.trial},
                        {"kasa", method_json(r.kasa, truth)},
                        {"free", method_json(r.free, truth)},
                        {"geom", method_json(r.geom, truth)}});
    const json j = {
        {"scenario",
         {{"span_deg", s.span_deg},
          {"radius", s.radius},
          {"points", s.n_points},
          {"noise", s.noise},
          {"trials", s.trials},
          {"seed", s.seed}}},
        {"trials", trials},
        {"summary",
         {{"kasa", summary_json(sum.kasa)},
          {"free", summary_json(sum.free)},
          {"geom", summary_json(sum.geom)},
          {"free_closer_fraction", sum.free_closer_fraction}}},
    };
    out << j.dump(2) << '\n';
    return;
  }

  out << "trial,method,cx,cy,r,center_err,radius_err,error\n";
  for (const TrialResult& r : results) {
    const std::string t = std::to_string(r.trial);
    write_method_csv(out, t, "kasa", r.kasa, truth);
    write_method_csv(out, t, "free", r.free, truth);
    write_method_csv(out, t, "geom", r.geom, truth);
  }
  const auto mean_row = [&](const char* name, const MethodSummary& m) {
    out << "mean," << name << ",,," << num(m.mean_r) << ',' << num(m.mean_center_err) << ','
        << num(m.mean_radius_err) << ",\n";
  };
  mean_row("kasa", sum.kasa);
  mean_row("free", sum.free);
  mean_row("geom", sum.geom);
  out << "free_closer_fraction,,,,," << num(sum.free_closer_fraction) << ",,\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moment-based circular arc fitting and polyline compression", "arcfit"};
  app.require_subcommand(1);
  const auto formats = CLI::IsMember({"json", "csv"});

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a circle to a point file");
  fit_cmd->add_option("input", fit.input, "Point file, one 'x y' per line")->required();
  fit_cmd->add_option("--through", fit.through, "Anchor point x,y the circle must pass (repeat for two)");
  fit_cmd->add_option("--sweeps", fit.sweeps, "Search sweeps for the unconstrained fit");
  fit_cmd->add_option("--format", fit.format, "json or csv")->check(formats);

  CompressArgs comp;
  auto* comp_cmd = app.add_subcommand("compress", "Replace a polyline by segments and arcs");
  comp_cmd->add_option("input", comp.input, "Polyline file, one 'x y' per line")->required();
  comp_cmd->add_option("--tol", comp.tol, "Maximum vertex deviation")->required();
  comp_cmd->add_flag("--filtered", comp.filtered, "Probe windows by doubling instead of every vertex pair");
  comp_cmd->add_option("--format", comp.format, "json or csv")->check(formats);

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare Kasa, moment and geometric fits on noisy arcs");
  cmp_cmd->add_option("--span", cmp.scenario.span_deg, "Arc span in degrees");
  cmp_cmd->add_option("--radius", cmp.scenario.radius, "Circle radius");
  cmp_cmd->add_option("--points", cmp.scenario.n_points, "Points per trial");
  cmp_cmd->add_option("--noise", cmp.scenario.noise, "Noise disc radius as a fraction of the radius");
  cmp_cmd->add_option("--trials", cmp.scenario.trials, "Number of trials");
  cmp_cmd->add_option("--seed", cmp.scenario.seed, "Random seed");
  cmp_cmd->add_option("--format", cmp.format, "csv or json")->check(formats);

  // CLI11 wants argv order reversed when given a vector.
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "arcfit: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*fit_cmd) cmd_fit(fit, out);
    else if (*comp_cmd) cmd_compress(comp, out);
    else cmd_compare(cmp, out);
  } catch (const FitError& e) {
    err << "arcfit: " << e.what() << '\n';
    return kExitFitError;
  } catch (const std::invalid_argument& e) {
    err << "arcfit: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace arcfit
