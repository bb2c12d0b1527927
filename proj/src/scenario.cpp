#include "arcfit/scenario.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "arcfit/errors.hpp"
#include "arcfit/fit.hpp"
#include "arcfit/moments.hpp"
#include "arcfit/refcheck.hpp"

namespace arcfit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// std::uniform_real_distribution is implementation defined; this is not.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <class Fit>
MethodResult attempt(Fit fit) {
  MethodResult r;
  try {
    r.circle = fit();
    r.ok = is_valid(r.circle);
    if (!r.ok) r.error = "invalid circle";
  } catch (const FitError& e) {
    r.error = to_string(e.kind());
  }
  return r;
}

void add(MethodSummary& m, const MethodResult& r, const Circle& truth) {
  if (!r.ok) return;
  ++m.count;
  m.mean_r += r.circle.r;
  m.mean_center_err += distance(r.circle.center, truth.center);
  m.mean_radius_err += r.circle.r - truth.r;
}

void finish(MethodSummary& m) {
  if (m.count == 0) return;
  m.mean_r /= m.count;
  m.mean_center_err /= m.count;
  m.mean_radius_err /= m.count;
}

}  // namespace

void SimScenario::validate() const {
  if (!(span_deg > 0.0 && span_deg <= 360.0)) throw std::invalid_argument("span must be in (0, 360] degrees");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("radius must be positive");
  if (n_points < 3) throw std::invalid_argument("need at least 3 points");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw std::invalid_argument("noise must be >= 0");
  if (trials < 1) throw std::invalid_argument("need at least one trial");
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(splitmix64(seed) ^ trial);
}

std::vector<Point2> generate_trial(const SimScenario& s, std::uint64_t trial) {
  s.validate();
  std::mt19937_64 rng(trial_seed(s.seed, trial));
  const double span = s.span_deg * kPi / 180.0;
  const double start = kTwoPi * uniform01(rng);
  // A full circle would repeat its first point.
  const double steps = s.span_deg >= 360.0 ? s.n_points : s.n_points - 1;
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(s.n_points));
  for (int k = 0; k < s.n_points; ++k) {
    const double a = start + span * k / steps;
    const double rho = s.noise * s.radius * std::sqrt(uniform01(rng));
    const double phi = kTwoPi * uniform01(rng);
    pts.push_back({s.radius * std::cos(a) + rho * std::cos(phi), s.radius * std::sin(a) + rho * std::sin(phi)});
  }
  return pts;
}

TrialResult run_trial(const SimScenario& s, int trial) {
  const std::vector<Point2> pts = generate_trial(s, static_cast<std::uint64_t>(trial));
  const MomentAccumulator acc = accumulate_points(pts);
  TrialResult out;
  out.trial = trial;
  out.kasa = attempt([&] { return kasa_fit(acc); });
  out.free = attempt([&] { return free_fit(acc, 1); });
  if (out.kasa.ok) {
    out.geom = attempt([&] { return geometric_fit(pts, out.kasa.circle); });
  } else {
    out.geom.error = out.kasa.error;
  }
  return out;
}

std::vector<TrialResult> run_compare(const SimScenario& s) {
  s.validate();
  std::vector<TrialResult> out(static_cast<std::size_t>(s.trials));
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < s.trials; ++t) out[t] = run_trial(s, t);
  return out;
}

std::vector<TrialResult> run_compare_serial(const SimScenario& s) {
  s.validate();
  std::vector<TrialResult> out;
  out.reserve(static_cast<std::size_t>(s.trials));
  for (int t = 0; t < s.trials; ++t) out.push_back(run_trial(s, t));
  return out;
}

CompareSummary summarize(const SimScenario& s, const std::vector<TrialResult>& results) {
  const Circle truth = scenario_truth(s);
  CompareSummary sum;
  int closer = 0;
  int comparable = 0;
  for (const TrialResult& r : results) {
    add(sum.kasa, r.kasa, truth);
    add(sum.free, r.free, truth);
    add(sum.geom, r.geom, truth);
    if (r.kasa.ok && r.free.ok && r.geom.ok) {
      ++comparable;
      if (std::abs(r.free.circle.r - r.geom.circle.r) < std::abs(r.kasa.circle.r - r.geom.circle.r)) ++closer;
    }
  }
  finish(sum.kasa);
  finish(sum.free);
  finish(sum.geom);
  sum.free_closer_fraction = comparable > 0 ? static_cast<double>(closer) / comparable : 0.0;
  return sum;
}

}  // namespace arcfit
