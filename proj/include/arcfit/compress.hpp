#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "arcfit/geometry.hpp"
#include "arcfit/moments.hpp"
#include "arcfit/refcheck.hpp"

// Polyline compression with fixed vertices. Any vertex pair (i, j) can be
// replaced by a segment or, with at least two vertices in between, by an arc
// through both; a shortest-path DP picks the chain with the smallest total
// penalty and, among those, the smallest sum of squared deviations.

namespace arcfit {

/// Cumulative moments: prefix(k) holds vertices 0..k-1, all about vertex 0,
/// so range(a, b) (vertices a..b-1) is one subtraction.
class PrefixMoments {
 public:
  explicit PrefixMoments(std::span<const Point2> vertices);

  std::size_t vertex_count() const { return prefix_.size() - 1; }
  const MomentAccumulator& prefix(std::size_t k) const { return prefix_.at(k); }
  MomentAccumulator range(std::size_t begin, std::size_t end) const;

 private:
  std::vector<MomentAccumulator> prefix_;
};

enum class PrimitiveKind { Segment, Arc };

struct Primitive {
  PrimitiveKind kind = PrimitiveKind::Segment;
  std::size_t from = 0;
  std::size_t to = 0;
  int penalty = 0;
  double ssd = 0.0;        // score used by the DP
  std::optional<Arc> arc;  // set for arcs
};

struct CompressedPath {
  std::vector<Primitive> primitives;
  int total_penalty = 0;
  double total_ssd = 0.0;  // DP score: exact for segments, moment estimate for arcs
  double exact_ssd = 0.0;  // per-point recomputation over every primitive

  std::size_t segment_count() const;
  std::size_t arc_count() const;
};

struct CompressOptions {
  double tol = 0.0;
  int segment_penalty = 2;
  int arc_penalty = 3;
  /// Probe windows by doubling then bisection instead of every pair. Much
  /// cheaper on long inputs but may miss the optimum.
  bool filtered = false;
  /// OpenMP candidate evaluation; the serial path is the reference.
  bool parallel = true;
};

/// Work done by candidate_arc, split by what it reads.
struct CandidateCounters {
  std::size_t fit_point_reads = 0;          // vertices read while fitting (the two anchors)
  std::size_t moment_accumulator_reads = 0;  // prefix entries read
  std::size_t validation_point_reads = 0;    // vertices read by the tolerance check

  CandidateCounters& operator+=(const CandidateCounters& o);
};

struct Candidate {
  int penalty = 0;
  double ssd = 0.0;
  std::optional<Arc> arc;
};

/// Segment between vertices i and j when every vertex in between lies within
/// tol (inclusive) of it; ssd is the exact sum of squared distances.
std::optional<Candidate> candidate_segment(std::span<const Point2> polyline, std::size_t i, std::size_t j, double tol,
                                           int penalty = 2);

/// Arc through vertices i and j fitted on the moments of the vertices in
/// between, accepted when they pass the tolerance and zigzag check; ssd is
/// the moment estimate. Requires j >= i + 3.
std::optional<Candidate> candidate_arc(std::span<const Point2> polyline, const PrefixMoments& prefix, std::size_t i,
                                       std::size_t j, double tol, int penalty = 3,
                                       CandidateCounters* counters = nullptr);

/// Lower of the segment and arc candidates for (i, j), compared on (penalty, ssd).
std::optional<Candidate> best_candidate(std::span<const Point2> polyline, const PrefixMoments& prefix, std::size_t i,
                                        std::size_t j, const CompressOptions& options);

CompressedPath compress(std::span<const Point2> polyline, const CompressOptions& options);
inline CompressedPath compress(std::span<const Point2> polyline, double tol) {
  CompressOptions o;
  o.tol = tol;
  return compress(polyline, o);
}

/// Sum of squared deviations of the vertices strictly between the primitive's
/// endpoints, recomputed point by point.
double primitive_exact_ssd(std::span<const Point2> polyline, const Primitive& p);

}  // namespace arcfit
