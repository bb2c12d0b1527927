#include "arcfit/compress.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "arcfit/errors.hpp"
#include "arcfit/fit.hpp"

namespace arcfit {

namespace {

// Rows of the candidate table evaluated per parallel batch in exhaustive mode.
constexpr std::size_t kRowBlock = 128;

double segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

bool better(int pa, double sa, int pb, double sb) { return pa < pb || (pa == pb && sa < sb); }

struct Score {
  int penalty = std::numeric_limits<int>::max();
  double ssd = 0.0;
  std::size_t prev = 0;
  Candidate step;
  bool reached = false;
};

void relax(std::vector<Score>& best, std::size_t i, std::size_t j, const Candidate& c) {
  if (!best[i].reached) return;
  const int p = best[i].penalty + c.penalty;
  const double s = best[i].ssd + c.ssd;
  if (!best[j].reached || better(p, s, best[j].penalty, best[j].ssd)) {
    best[j] = {p, s, i, c, true};
  }
}

struct Edge {
  std::size_t to = 0;
  Candidate cand;
};

// Probe windows from i: double the window while a candidate of the kind is
// accepted, then bisect between the last accepted and first rejected.
template <class Probe>
void probe_windows(std::size_t i, std::size_t first, std::size_t n, Probe probe, std::vector<Edge>& edges) {
  if (first >= n) return;
  std::size_t lo = first - 1;  // largest accepted end so far (sentinel)
  std::size_t hi = n;          // smallest rejected end (sentinel)
  for (std::size_t w = first - i;; w *= 2) {
    const std::size_t j = std::min(i + w, n - 1);
    if (j <= lo) break;
    if (auto c = probe(j)) {
      edges.push_back({j, *c});
      lo = j;
      if (j == n - 1) return;
    } else {
      hi = j;
      break;
    }
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (auto c = probe(mid)) {
      edges.push_back({mid, *c});
      lo = mid;
    } else {
      hi = mid;
    }
  }
}

std::vector<Edge> filtered_edges(std::span<const Point2> poly, const PrefixMoments& prefix, std::size_t i,
                                 const CompressOptions& o) {
  const std::size_t n = poly.size();
  std::vector<Edge> edges;
  edges.push_back({i + 1, *candidate_segment(poly, i, i + 1, o.tol, o.segment_penalty)});
  probe_windows(
      i, i + 2, n, [&](std::size_t j) { return candidate_segment(poly, i, j, o.tol, o.segment_penalty); }, edges);
  probe_windows(
      i, i + 3, n, [&](std::size_t j) { return candidate_arc(poly, prefix, i, j, o.tol, o.arc_penalty); }, edges);
  return edges;
}

CompressedPath backtrack(std::span<const Point2> poly, const std::vector<Score>& best) {
  CompressedPath out;
  const std::size_t last = poly.size() - 1;
  out.total_penalty = best[last].penalty;
  out.total_ssd = best[last].ssd;
  for (std::size_t j = last; j > 0; j = best[j].prev) {
    const Score& s = best[j];
    Primitive p;
    p.kind = s.step.arc ? PrimitiveKind::Arc : PrimitiveKind::Segment;
    p.from = s.prev;
    p.to = j;
    p.penalty = s.step.penalty;
    p.ssd = s.step.ssd;
    p.arc = s.step.arc;
    out.primitives.push_back(p);
  }
  std::reverse(out.primitives.begin(), out.primitives.end());
  for (const Primitive& p : out.primitives) out.exact_ssd += primitive_exact_ssd(poly, p);
  return out;
}

}  // namespace

PrefixMoments::PrefixMoments(std::span<const Point2> vertices) {
  if (vertices.empty()) throw std::invalid_argument("PrefixMoments: no vertices");
  prefix_.reserve(vertices.size() + 1);
  prefix_.emplace_back(vertices.front());
  for (const Point2& v : vertices) prefix_.push_back(accumulate_point(prefix_.back(), v));
}

MomentAccumulator PrefixMoments::range(std::size_t begin, std::size_t end) const {
  if (begin > end || end >= prefix_.size()) throw std::out_of_range("PrefixMoments::range");
  return prefix_[end].minus(prefix_[begin]);
}

std::size_t CompressedPath::segment_count() const {
  return static_cast<std::size_t>(std::count_if(primitives.begin(), primitives.end(),
                                                [](const Primitive& p) { return p.kind == PrimitiveKind::Segment; }));
}

std::size_t CompressedPath::arc_count() const { return primitives.size() - segment_count(); }

CandidateCounters& CandidateCounters::operator+=(const CandidateCounters& o) {
  fit_point_reads += o.fit_point_reads;
  moment_accumulator_reads += o.moment_accumulator_reads;
  validation_point_reads += o.validation_point_reads;
  return *this;
}

std::optional<Candidate> candidate_segment(std::span<const Point2> poly, std::size_t i, std::size_t j, double tol,
                                           int penalty) {
  if (!(i < j) || j >= poly.size()) throw std::out_of_range("candidate_segment: bad vertex pair");
  Candidate c;
  c.penalty = penalty;
  for (std::size_t k = i + 1; k < j; ++k) {
    const double d = segment_distance(poly[k], poly[i], poly[j]);
    if (!(d <= tol)) return std::nullopt;
    c.ssd += d * d;
  }
  return c;
}

std::optional<Candidate> candidate_arc(std::span<const Point2> poly, const PrefixMoments& prefix, std::size_t i,
                                       std::size_t j, double tol, int penalty, CandidateCounters* counters) {
  if (!(i < j) || j >= poly.size()) throw std::out_of_range("candidate_arc: bad vertex pair");
  if (j < i + 3) return std::nullopt;

  // Fit: two prefix entries and the two anchors, whatever the window length.
  const MomentAccumulator interior = prefix.range(i + 1, j);
  const Point2 p1 = poly[i];
  const Point2 p2 = poly[j];
  if (counters) {
    counters->moment_accumulator_reads += 2;
    counters->fit_point_reads += 2;
  }

  Circle circle;
  NormalizedMoments m;
  try {
    m = fitting_moments(interior);
    circle = two_point_fit(m, p1, p2);
  } catch (const FitError&) {
    return std::nullopt;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }

  Arc arc;
  try {
    arc = make_arc(circle, p1, p2, poly[(i + j) / 2]);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }

  const auto inner = poly.subspan(i + 1, j - i - 1);
  std::size_t reads = 0;
  const bool ok = passes_tolerance_zigzag(inner, arc, tol, &reads);
  if (counters) counters->validation_point_reads += reads;
  if (!ok) return std::nullopt;

  Candidate c;
  c.penalty = penalty;
  c.ssd = arcfit::penalty(m, circle);
  c.arc = arc;
  return c;
}

std::optional<Candidate> best_candidate(std::span<const Point2> poly, const PrefixMoments& prefix, std::size_t i,
                                        std::size_t j, const CompressOptions& o) {
  auto seg = candidate_segment(poly, i, j, o.tol, o.segment_penalty);
  auto arc = candidate_arc(poly, prefix, i, j, o.tol, o.arc_penalty);
  if (seg && arc) return better(arc->penalty, arc->ssd, seg->penalty, seg->ssd) ? arc : seg;
  return seg ? seg : arc;
}

CompressedPath compress(std::span<const Point2> poly, const CompressOptions& o) {
  if (poly.size() < 2) throw std::invalid_argument("compress: needs at least two vertices");
  for (const Point2& p : poly)
    if (!is_finite(p)) throw std::invalid_argument("compress: non-finite vertex");
  if (!(o.tol >= 0.0)) throw std::invalid_argument("compress: tolerance must be >= 0");

  const std::size_t n = poly.size();
  const PrefixMoments prefix(poly);
  std::vector<Score> best(n);
  best[0].penalty = 0;
  best[0].reached = true;

  if (o.filtered) {
    std::vector<std::vector<Edge>> edges(n - 1);
    const auto count = static_cast<std::ptrdiff_t>(n - 1);
#pragma omp parallel for schedule(dynamic, 8) if (o.parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) edges[i] = filtered_edges(poly, prefix, static_cast<std::size_t>(i), o);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::sort(edges[i].begin(), edges[i].end(), [](const Edge& a, const Edge& b) { return a.to < b.to; });
      for (const Edge& e : edges[i]) relax(best, i, e.to, e.cand);
    }
    return backtrack(poly, best);
  }

  // Exhaustive: rows j of the candidate table in blocks, each row holding
  // every i < j. Rows are independent, the DP over them is not.
  std::vector<std::vector<std::optional<Candidate>>> rows;
  for (std::size_t first = 1; first < n; first += kRowBlock) {
    const std::size_t last = std::min(n, first + kRowBlock);
    rows.assign(last - first, {});
    const auto count = static_cast<std::ptrdiff_t>(last - first);
#pragma omp parallel for schedule(dynamic, 1) if (o.parallel)
    for (std::ptrdiff_t r = 0; r < count; ++r) {
      const std::size_t j = first + static_cast<std::size_t>(r);
      auto& row = rows[r];
      row.resize(j);
      for (std::size_t i = 0; i < j; ++i) row[i] = best_candidate(poly, prefix, i, j, o);
    }
    for (std::size_t j = first; j < last; ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (const auto& c = rows[j - first][i]) relax(best, i, j, *c);
  }
  return backtrack(poly, best);
}

double primitive_exact_ssd(std::span<const Point2> poly, const Primitive& p) {
  double s = 0.0;
  for (std::size_t k = p.from + 1; k < p.to; ++k) {
    const double d = p.arc ? arc_deviation(poly[k], *p.arc) : segment_distance(poly[k], poly[p.from], poly[p.to]);
    s += d * d;
  }
  return s;
}

}  // namespace arcfit
