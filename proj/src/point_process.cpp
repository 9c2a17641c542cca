#include "secnet/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>

#include "secnet/errors.hpp"

namespace secnet::point_process {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite_point(const Point2D& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Total order used by the thinning rule: mark first, then lexicographic position.
bool precedes(const Mark& ma, const Point2D& a, const Mark& mb, const Point2D& b) {
  return std::tie(ma.bits, a.x, a.y) < std::tie(mb.bits, b.x, b.y);
}

// Uniform grid with cell size `cell` stored as a sorted (cell key, index) list.
class CellIndex {
 public:
  CellIndex(const std::vector<Point2D>& pts, double cell) : cell_(cell) {
    entries_.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) entries_.emplace_back(key_of(pts[i]), i);
    std::sort(entries_.begin(), entries_.end());
  }

  template <typename Visit>
  void for_each_near(const Point2D& p, Visit&& visit) const {
    const auto [cx, cy] = cell_of(p);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const std::uint64_t k = pack(cx + dx, cy + dy);
        auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(k, std::size_t{0}));
        for (; it != entries_.end() && it->first == k; ++it) {
          if (!visit(it->second)) return;
        }
      }
    }
  }

 private:
  std::pair<std::int64_t, std::int64_t> cell_of(const Point2D& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / cell_)),
            static_cast<std::int64_t>(std::floor(p.y / cell_))};
  }
  static std::uint64_t pack(std::int64_t cx, std::int64_t cy) {
    constexpr std::int64_t kOffset = std::int64_t{1} << 31;
    return (static_cast<std::uint64_t>(cx + kOffset) << 32) |
           (static_cast<std::uint64_t>(cy + kOffset) & 0xFFFFFFFFULL);
  }
  std::uint64_t key_of(const Point2D& p) const {
    const auto [cx, cy] = cell_of(p);
    return pack(cx, cy);
  }

  double cell_;
  std::vector<std::pair<std::uint64_t, std::size_t>> entries_;
};

void append_uniform_disc(PointPattern& out, std::size_t count, double radius, Engine& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const double rad = radius * std::sqrt(uniform01(rng));
    const double ang = 2.0 * kPi * uniform01(rng);
    out.points.push_back({rad * std::cos(ang), rad * std::sin(ang)});
  }
}

std::size_t poisson_count(double mean, Engine& rng) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<long long> pois(mean);
  return static_cast<std::size_t>(pois(rng));
}

void check_intensity(double intensity, double window_radius) {
  if (!std::isfinite(intensity) || intensity < 0.0) {
    throw ParameterError("intensity must be finite and non-negative, got " + std::to_string(intensity));
  }
  if (!std::isfinite(window_radius) || window_radius <= 0.0) {
    throw ParameterError("window radius must be positive, got " + std::to_string(window_radius));
  }
}

PointPattern crop(const PointPattern& in, double radius) {
  PointPattern out;
  out.window_radius = radius;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in.points[i].norm() <= radius) {
      out.points.push_back(in.points[i]);
      if (in.marked()) out.marks.push_back(in.marks[i]);
    }
  }
  return out;
}

// (1 - exp(-x)) / x, continuous at 0.
double surv(double x) { return x < 1e-8 ? 1.0 - 0.5 * x : -std::expm1(-x) / x; }

// (surv(c) - surv(b)) / (c - b) by power series, for small b < c.
double surv_divided_difference(double b, double c) {
  double sum = 0.0;
  double fact = 1.0;  // (n+1)!
  for (int n = 1; n < 40; ++n) {
    fact *= (n + 1);
    double dd = 0.0;  // (c^n - b^n) / (c - b)
    for (int j = 0; j < n; ++j) dd += std::pow(c, j) * std::pow(b, n - 1 - j);
    const double term = ((n % 2) ? -1.0 : 1.0) * dd / fact;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

Mark Mark::from_value(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("mark must lie in [0,1]");
  if (v >= 1.0) return Mark{std::numeric_limits<std::uint64_t>::max()};
  return Mark{static_cast<std::uint64_t>(std::ldexp(v, 64))};
}

HardCoreParams::HardCoreParams(double lambda_p, double d) : lambda_p_(lambda_p), d_(d) {
  if (!std::isfinite(lambda_p) || lambda_p <= 0.0) {
    throw ParameterError("parent intensity lambda_p must be positive, got " + std::to_string(lambda_p));
  }
  if (!std::isfinite(d) || d <= 0.0) {
    throw ParameterError("hard-core distance d must be positive, got " + std::to_string(d));
  }
}

PointPattern sample_ppp(double intensity, double window_radius, Engine& rng) {
  check_intensity(intensity, window_radius);
  PointPattern out;
  out.window_radius = window_radius;
  const std::size_t n = poisson_count(intensity * kPi * window_radius * window_radius, rng);
  out.points.reserve(n);
  append_uniform_disc(out, n, window_radius, rng);
  return out;
}

PointPattern sample_marked_ppp(double intensity, double window_radius, Engine& position_rng,
                               Engine& mark_rng) {
  PointPattern out = sample_ppp(intensity, window_radius, position_rng);
  out.marks.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) out.marks.push_back(Mark::draw(mark_rng));
  return out;
}

std::vector<bool> matern_ii_survivors(const PointPattern& parents, double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw ParameterError("hard-core distance d must be positive");
  if (parents.empty()) return {};
  if (!parents.marked()) throw ParameterError("Matern thinning requires one mark per parent");
  for (const auto& p : parents.points) {
    if (!finite_point(p)) throw ParameterError("parent coordinates must be finite");
  }

  const auto& pts = parents.points;
  const auto& marks = parents.marks;
  const double d2 = d * d;
  const CellIndex index(pts, d);
  std::vector<bool> survives(pts.size(), true);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    index.for_each_near(pts[i], [&](std::size_t j) {
      if (j == i) return true;
      const double dx = pts[j].x - pts[i].x;
      const double dy = pts[j].y - pts[i].y;
      if (dx * dx + dy * dy < d2 && precedes(marks[j], pts[j], marks[i], pts[i])) {
        survives[i] = false;
        return false;
      }
      return true;
    });
  }
  return survives;
}

PointPattern matern_ii_thin(const PointPattern& parents, double d) {
  const std::vector<bool> survives = matern_ii_survivors(parents, d);
  PointPattern out;
  out.window_radius = parents.window_radius;
  for (std::size_t i = 0; i < survives.size(); ++i) {
    if (survives[i]) out.push_back(parents.points[i], parents.marks[i]);
  }
  return out;
}

PointPattern sample_mhcpp(const HardCoreParams& params, double window_radius, Engine& position_rng,
                          Engine& mark_rng) {
  check_intensity(params.lambda_p(), window_radius);
  const PointPattern parents =
      sample_marked_ppp(params.lambda_p(), window_radius + params.d(), position_rng, mark_rng);
  return crop(matern_ii_thin(parents, params.d()), window_radius);
}

PalmSample sample_palm_mhcpp(const HardCoreParams& params, double window_radius, Engine& position_rng,
                             Engine& mark_rng, std::size_t max_attempts) {
  const double d = params.d();
  if (!(window_radius >= 2.0 * d)) throw ParameterError("Palm window radius must be at least 2d");
  const Point2D origin{0.0, 0.0};
  PalmSample sample;
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    PointPattern parents = sample_marked_ppp(params.lambda_p(), window_radius + d, position_rng, mark_rng);
    const Mark origin_mark = Mark::draw(mark_rng);

    bool origin_survives = true;
    for (std::size_t i = 0; i < parents.size(); ++i) {
      const Point2D& p = parents.points[i];
      if (p.x * p.x + p.y * p.y < d * d && precedes(parents.marks[i], p, origin_mark, origin)) {
        origin_survives = false;
        break;
      }
    }
    if (!origin_survives) {
      ++sample.rejections;
      continue;
    }

    PointPattern all;
    all.window_radius = parents.window_radius;
    all.points.reserve(parents.size() + 1);
    all.marks.reserve(parents.size() + 1);
    all.push_back(origin, origin_mark);
    for (std::size_t i = 0; i < parents.size(); ++i) all.push_back(parents.points[i], parents.marks[i]);
    sample.pattern = crop(matern_ii_thin(all, d), window_radius);
    return sample;
  }
  throw SamplingError("Palm sampler: origin thinned in all " + std::to_string(max_attempts) + " attempts");
}

PalmSample sample_palm_mhcpp(const HardCoreParams& params, double window_radius, Engine& rng,
                             std::size_t max_attempts) {
  return sample_palm_mhcpp(params, window_radius, rng, rng, max_attempts);
}

std::vector<Point2D> sample_cluster_users(const Point2D& center, double sigma, std::size_t n, Engine& rng) {
  if (!std::isfinite(sigma) || sigma < 0.0) throw ParameterError("cluster scatter sigma must be non-negative");
  if (n == 0) throw ParameterError("cluster must contain at least one user");
  std::vector<Point2D> users(n, center);
  if (sigma == 0.0) return users;
  std::normal_distribution<double> offset(0.0, sigma);
  for (auto& u : users) {
    u.x += offset(rng);
    u.y += offset(rng);
  }
  return users;
}

double mhcpp_intensity(const HardCoreParams& params) {
  const double area = kPi * params.d() * params.d();
  return -std::expm1(-params.k_bar()) / area;
}

HardCoreParams parent_intensity_from_target(double lambda_u, double d) {
  if (!std::isfinite(d) || d <= 0.0) throw ParameterError("hard-core distance d must be positive");
  if (!std::isfinite(lambda_u) || lambda_u <= 0.0) {
    throw ParameterError("target intensity lambda_u must be positive");
  }
  const double area = kPi * d * d;
  const double load = lambda_u * area;
  if (load >= 1.0) {
    throw InfeasibleTargetError("target intensity " + std::to_string(lambda_u) +
                                " is at or above the hard-core saturation 1/(pi d^2) = " +
                                std::to_string(1.0 / area));
  }
  return HardCoreParams(-std::log1p(-load) / area, d);
}

double lens_area(double r, double d) {
  if (r < d) return 0.0;
  if (r >= 2.0 * d) return 2.0 * kPi * d * d;
  return 2.0 * kPi * d * d - 2.0 * d * d * std::acos(r / (2.0 * d)) + r * std::sqrt(d * d - 0.25 * r * r);
}

double retention_probability(double r, const HardCoreParams& params) {
  const double d = params.d();
  const double kb = params.k_bar();
  if (r < d) return 0.0;
  if (r >= 2.0 * d) return surv(kb);
  const double union_mass = params.lambda_p() * lens_area(r, d);
  const double excess = union_mass - kb;  // lambda_p * (V(r) - pi d^2) > 0
  // 2/excess * [1 - surv(union_mass)/surv(kb)]
  double p;
  if (union_mass < 0.5) {
    p = -2.0 * surv_divided_difference(kb, union_mass) / surv(kb);
  } else {
    p = 2.0 / excess * (1.0 - surv(union_mass) / surv(kb));
  }
  return std::clamp(p, 0.0, 1.0);
}

MetricEstimate estimate_retention(double r, const HardCoreParams& params, std::uint64_t trials, Engine& rng,
                                  double confidence_level) {
  if (trials == 0) throw ParameterError("estimate_retention needs at least one trial");
  if (!(r >= 0.0)) throw ParameterError("distance r must be non-negative");
  const Point2D first{0.0, 0.0};
  const Point2D second{r, 0.0};
  std::uint64_t conditioned = 0;
  std::uint64_t joint = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    // Only parents within d of either point can affect the two outcomes.
    const PointPattern parents = sample_marked_ppp(params.lambda_p(), r + params.d(), rng, rng);
    PointPattern all;
    all.window_radius = parents.window_radius;
    all.push_back(first, Mark::draw(rng));
    all.push_back(second, Mark::draw(rng));
    for (std::size_t i = 0; i < parents.size(); ++i) all.push_back(parents.points[i], parents.marks[i]);
    const std::vector<bool> survives = matern_ii_survivors(all, params.d());
    if (survives[0]) {
      ++conditioned;
      if (survives[1]) ++joint;
    }
  }
  return make_proportion_estimate(joint, conditioned, confidence_level, 0);
}

double min_pairwise_distance(const PointPattern& pattern) {
  double best = std::numeric_limits<double>::infinity();
  const auto& pts = pattern.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, distance(pts[i], pts[j]));
  }
  return best;
}

}  // namespace secnet::point_process
