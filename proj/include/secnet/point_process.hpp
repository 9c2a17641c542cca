#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "secnet/estimate.hpp"
#include "secnet/rng.hpp"

namespace secnet::point_process {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline double distance(const Point2D& a, const Point2D& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Uniform mark on [0,1]. Kept as the raw 64-bit draw so that comparisons are
/// exact; value() is only for reporting.
struct Mark {
  std::uint64_t bits = 0;

  double value() const { return static_cast<double>(bits) * 0x1.0p-64; }
  static Mark from_value(double v);
  static Mark draw(Engine& rng) { return Mark{rng()}; }
  friend auto operator<=>(const Mark&, const Mark&) = default;
};

struct MarkedPoint {
  Point2D point;
  Mark mark;
};

/// Finite planar pattern observed in the disc of radius `window_radius`
/// centred at the origin. `marks` is either empty or parallel to `points`.
struct PointPattern {
  double window_radius = 0.0;
  std::vector<Point2D> points;
  std::vector<Mark> marks;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool marked() const { return !points.empty() && marks.size() == points.size(); }
  MarkedPoint marked_point(std::size_t i) const { return {points[i], marks[i]}; }
  void push_back(const Point2D& p) { points.push_back(p); }
  void push_back(const Point2D& p, Mark m) {
    points.push_back(p);
    marks.push_back(m);
  }
};

/// Parent intensity, hard-core distance and the mean number of parents in a
/// hard-core disc, k_bar = lambda_p * pi * d^2.
class HardCoreParams {
 public:
  HardCoreParams(double lambda_p, double d);

  double lambda_p() const { return lambda_p_; }
  double d() const { return d_; }
  double k_bar() const { return lambda_p_ * std::numbers::pi * d_ * d_; }

 private:
  double lambda_p_;
  double d_;
};

// --- sampling -------------------------------------------------------------

/// Homogeneous PPP on the disc of radius `window_radius`. Unmarked.
PointPattern sample_ppp(double intensity, double window_radius, Engine& rng);

/// Same as sample_ppp with an i.i.d. uniform mark per point drawn from `mark_rng`.
PointPattern sample_marked_ppp(double intensity, double window_radius, Engine& position_rng,
                               Engine& mark_rng);

/// Matern type-II thinning. A point survives iff its (mark, x, y) key is the
/// smallest among all parents strictly closer than d. Marks are required.
PointPattern matern_ii_thin(const PointPattern& parents, double d);

/// Survival flag per parent under the same rule, in input order.
std::vector<bool> matern_ii_survivors(const PointPattern& parents, double d);

/// Unconditioned MHCPP on the disc of radius `window_radius`. Parents are
/// drawn on the disc inflated by d and the thinned result is cropped.
PointPattern sample_mhcpp(const HardCoreParams& params, double window_radius, Engine& position_rng,
                          Engine& mark_rng);

struct PalmSample {
  PointPattern pattern;  ///< index 0 is the retained point at the origin
  std::size_t rejections = 0;
};

/// Palm version seen from a retained point at the origin: parents plus an
/// origin point with a uniform mark are thinned, and realisations in which the
/// origin is removed are rejected and redrawn.
PalmSample sample_palm_mhcpp(const HardCoreParams& params, double window_radius, Engine& position_rng,
                             Engine& mark_rng, std::size_t max_attempts = 10000);
PalmSample sample_palm_mhcpp(const HardCoreParams& params, double window_radius, Engine& rng,
                             std::size_t max_attempts = 10000);

/// n users scattered with an isotropic Gaussian of per-axis std `sigma` around `center`.
std::vector<Point2D> sample_cluster_users(const Point2D& center, double sigma, std::size_t n,
                                          Engine& rng);

// --- first and second order properties ------------------------------------

/// (1 - exp(-k_bar)) / (pi d^2).
double mhcpp_intensity(const HardCoreParams& params);

/// Inverse of mhcpp_intensity at fixed d.
HardCoreParams parent_intensity_from_target(double lambda_u, double d);

/// Area of the union of two radius-d discs whose centres are r apart, taken
/// as 0 below d (the pair cannot coexist there).
double lens_area(double r, double d);

/// Probability that a parent at distance r from a retained point is itself retained.
double retention_probability(double r, const HardCoreParams& params);

/// Brute-force two-point estimate of retention_probability: both points are
/// joined to a parent PPP, thinned, and the frequency of the second point
/// surviving given that the first survived is returned.
MetricEstimate estimate_retention(double r, const HardCoreParams& params, std::uint64_t trials,
                                  Engine& rng, double confidence_level = 0.99);

/// Smallest pairwise distance, +inf for fewer than two points.
double min_pairwise_distance(const PointPattern& pattern);

}  // namespace secnet::point_process
