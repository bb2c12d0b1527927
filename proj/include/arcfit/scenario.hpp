#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arcfit/geometry.hpp"

// Seeded noisy-arc trials and the estimator comparison run on them.

namespace arcfit {

struct SimScenario {
  double span_deg = 72.0;
  double radius = 1.0;
  int n_points = 1000;
  double noise = 0.1;  // disc radius as a fraction of the circle radius
  int trials = 200;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument when out of range.
  void validate() const;
};

/// Stream for one trial, derived from (seed, trial) so the order in which
/// trials run never matters.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

/// Points evenly spaced in angle over the span starting at a random angle on
/// a circle centred at the origin, each moved by a uniform offset in a disc
/// of radius noise * radius.
std::vector<Point2> generate_trial(const SimScenario& s, std::uint64_t trial);

inline Circle scenario_truth(const SimScenario& s) { return {{0.0, 0.0}, s.radius}; }

struct MethodResult {
  Circle circle;
  bool ok = false;
  std::string error;
};

struct TrialResult {
  int trial = 0;
  MethodResult kasa;
  MethodResult free;  // one sweep from the Kasa start
  MethodResult geom;  // geometric fit from the Kasa start
};

TrialResult run_trial(const SimScenario& s, int trial);

/// All trials; OpenMP over trials, output in trial order.
std::vector<TrialResult> run_compare(const SimScenario& s);
/// Serial reference for run_compare.
std::vector<TrialResult> run_compare_serial(const SimScenario& s);

struct MethodSummary {
  int count = 0;
  double mean_r = 0.0;
  double mean_center_err = 0.0;
  double mean_radius_err = 0.0;  // signed, r - r_true
};

struct CompareSummary {
  MethodSummary kasa;
  MethodSummary free;
  MethodSummary geom;
  /// Share of trials where |r_free - r_geom| < |r_kasa - r_geom|.
  double free_closer_fraction = 0.0;
};

CompareSummary summarize(const SimScenario& s, const std::vector<TrialResult>& results);

}  // namespace arcfit
