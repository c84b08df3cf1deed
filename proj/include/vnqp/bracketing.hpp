#ifndef VNQP_BRACKETING_HPP
#define VNQP_BRACKETING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vnqp/error.hpp"

namespace vnqp {

class InverseOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidSequence : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
};

/// A convex function of one variable on [lower, upper] given by value,
/// subdifferential and subdifferential-inverse oracles.
struct Convex1D {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  std::function<double(double)> value;
  std::function<Interval(double)> subdiff;
  std::function<double(double)> inverse;
  std::optional<std::pair<double, double>> curvature;  // (f''_-(0), f''_+(0))
  std::vector<double> kinks;                           // points where f' jumps
};

/// k_left x^2 for x < 0, k_right x^2 for x >= 0.
inline Convex1D two_sided_quadratic(double k_left, double k_right) {
  if (!(k_left > 0.0 && k_right > 0.0)) throw InvalidArgument("two_sided_quadratic: coefficients must be positive");
  Convex1D f;
  f.value = [=](double x) { return (x < 0 ? k_left : k_right) * x * x; };
  f.subdiff = [=](double x) {
    const double g = 2 * (x < 0 ? k_left : k_right) * x;
    return Interval{g, g};
  };
  f.inverse = [=](double s) { return s < 0 ? s / (2 * k_left) : s / (2 * k_right); };
  f.curvature = std::make_pair(2 * k_left, 2 * k_right);
  return f;
}

inline Convex1D quadratic() { return two_sided_quadratic(1.0, 1.0); }

/// Squared distance to [-a_flat, b_flat]. The inverse at slope 0 returns the
/// midpoint of the flat piece.
inline Convex1D flat_quadratic(double a_flat, double b_flat) {
  if (!(a_flat >= 0.0 && b_flat >= 0.0)) throw InvalidArgument("flat_quadratic: flat piece must contain 0");
  Convex1D f;
  f.value = [=](double x) {
    if (x < -a_flat) return (x + a_flat) * (x + a_flat);
    if (x > b_flat) return (x - b_flat) * (x - b_flat);
    return 0.0;
  };
  f.subdiff = [=](double x) {
    double g = 0.0;
    if (x < -a_flat) g = 2 * (x + a_flat);
    if (x > b_flat) g = 2 * (x - b_flat);
    return Interval{g, g};
  };
  f.inverse = [=](double s) {
    if (s < 0) return -a_flat + s / 2;
    if (s > 0) return b_flat + s / 2;
    return (b_flat - a_flat) / 2;
  };
  f.curvature = std::make_pair(a_flat > 0 ? 0.0 : 2.0, b_flat > 0 ? 0.0 : 2.0);
  return f;
}

/// Lower boundary of the disk of radius r centred at (0, r).
inline Convex1D disk_arc(double r) {
  if (!(r > 0.0)) throw InvalidArgument("disk_arc: radius must be positive");
  Convex1D f;
  f.lower = -r;
  f.upper = r;
  f.value = [=](double x) { return r - std::sqrt(r * r - x * x); };
  f.subdiff = [=](double x) {
    const double g = x / std::sqrt(r * r - x * x);
    return Interval{g, g};
  };
  f.inverse = [=](double s) { return r * s / std::sqrt(1 + s * s); };
  f.curvature = std::make_pair(1 / r, 1 / r);
  return f;
}

/// Convex function with piecewise-constant derivative: slope g[k] on
/// (knots[k], knots[k+1]), normalised so that f(0) = 0. Knots must be
/// strictly increasing and slopes nondecreasing. A set-valued inverse
/// (s equal to a piece's slope) returns the midpoint of that piece.
inline Convex1D piecewise_linear(std::vector<double> knots, std::vector<double> slopes) {
  if (knots.size() < 2 || slopes.size() + 1 != knots.size())
    throw InvalidArgument("piecewise_linear: need k+1 knots for k slopes");
  for (std::size_t k = 0; k + 1 < knots.size(); ++k)
    if (!(knots[k] < knots[k + 1])) throw InvalidArgument("piecewise_linear: knots must increase");
  for (std::size_t k = 0; k + 1 < slopes.size(); ++k)
    if (!(slopes[k] <= slopes[k + 1])) throw InvalidArgument("piecewise_linear: slopes must be nondecreasing");
  if (!(knots.front() <= 0.0 && knots.back() >= 0.0)) throw InvalidArgument("piecewise_linear: 0 outside domain");

  auto piece_of = [knots](double x) {
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    std::size_t k = static_cast<std::size_t>(it - knots.begin());
    return k == 0 ? 0 : std::min(k - 1, knots.size() - 2);
  };
  // Integrate outwards from 0 so a flat piece around 0 is exactly zero.
  std::vector<double> cum(knots.size(), 0.0);
  const std::size_t k0 = piece_of(0.0);
  cum[k0] = -slopes[k0] * (0.0 - knots[k0]);
  for (std::size_t k = k0; k > 0; --k) cum[k - 1] = cum[k] - slopes[k - 1] * (knots[k] - knots[k - 1]);
  for (std::size_t k = k0 + 1; k < knots.size(); ++k) cum[k] = cum[k - 1] + slopes[k - 1] * (knots[k] - knots[k - 1]);

  Convex1D f;
  f.lower = knots.front();
  f.upper = knots.back();
  f.kinks.assign(knots.begin() + 1, knots.end() - 1);
  f.value = [=](double x) {
    const std::size_t k = piece_of(x);
    return cum[k] + slopes[k] * (x - knots[k]);
  };
  f.subdiff = [=](double x) {
    const std::size_t k = piece_of(x);
    if (x == knots[k] && k > 0) return Interval{slopes[k - 1], slopes[k]};
    if (x == knots[k + 1] && k + 2 < knots.size()) return Interval{slopes[k], slopes[k + 1]};
    return Interval{slopes[k], slopes[k]};
  };
  f.inverse = [=](double s) {
    for (std::size_t k = 0; k < slopes.size(); ++k) {
      if (s == slopes[k]) return (knots[k] + knots[k + 1]) / 2;
      if (s < slopes[k]) return knots[k];
    }
    return knots.back();
  };
  return f;
}

enum class BracketStatus { MinimizerFound, WidthTolerance, StepBudget };

inline const char* to_string(BracketStatus s) {
  switch (s) {
    case BracketStatus::MinimizerFound: return "minimizer_found";
    case BracketStatus::WidthTolerance: return "width_tolerance";
    case BracketStatus::StepBudget: return "step_budget";
  }
  return "unknown";
}

struct BracketStep {
  std::size_t iter = 0;
  double a = 0.0;
  double b = 0.0;
  double fa = 0.0;  // f(-a)
  double fb = 0.0;  // f(b)
  double slope = 0.0;
  double c = 0.0;
};

struct BracketTrace {
  std::vector<BracketStep> steps;
  double final_a = 0.0;
  double final_b = 0.0;
  BracketStatus status = BracketStatus::StepBudget;

  /// a_0, a_1, ..., a_final, without a repeated last entry when the run
  /// stopped on a zero slope.
  std::vector<double> a_seq() const { return endpoints(&BracketStep::a, final_a); }
  std::vector<double> b_seq() const { return endpoints(&BracketStep::b, final_b); }

 private:
  bool moved() const { return steps.empty() || steps.back().a != final_a || steps.back().b != final_b; }

  std::vector<double> endpoints(double BracketStep::*field, double last) const {
    std::vector<double> out;
    for (const auto& s : steps) out.push_back(s.*field);
    if (moved()) out.push_back(last);
    return out;
  }
};

/// Shrinks [-a, b] around a minimizer at 0: c is a point where the secant
/// slope of f over [-a, b] is a subgradient; c replaces the endpoint on its
/// side. Stops when c = 0, when the slope is 0 (c minimizes f and the
/// endpoints are left as they are), when a + b <= width_tol, or after
/// max_steps.
inline BracketTrace bracket(const Convex1D& f, double a0, double b0, double width_tol,
                            std::size_t max_steps = 10000) {
  if (!(a0 > 0.0 && b0 > 0.0) || !std::isfinite(a0) || !std::isfinite(b0))
    throw InvalidArgument("bracket: a0 and b0 must be positive and finite");
  if (-a0 < f.lower || b0 > f.upper) throw InvalidArgument("bracket: [-a0, b0] leaves the domain");
  if (!(width_tol >= 0.0)) throw InvalidArgument("bracket: width_tol must be nonnegative");
  BracketTrace trace;
  double a = a0, b = b0;
  for (std::size_t i = 0;; ++i) {
    if (i == max_steps) {
      trace.status = BracketStatus::StepBudget;
      break;
    }
    BracketStep st{i, a, b, f.value(-a), f.value(b), 0.0, 0.0};
    st.slope = (st.fb - st.fa) / (a + b);
    st.c = f.inverse(st.slope);
    if (!(st.c >= -a && st.c <= b))
      throw InverseOutOfRange("bracket: inverse returned " + std::to_string(st.c) + " outside [-a, b]");
    trace.steps.push_back(st);
    if (st.slope == 0.0) {
      trace.status = BracketStatus::MinimizerFound;
      break;
    }
    if (st.c < 0) a = -st.c;
    if (st.c > 0) b = st.c;
    if (st.c == 0.0) {
      trace.status = BracketStatus::MinimizerFound;
      break;
    }
    if (a + b <= width_tol) {
      trace.status = BracketStatus::WidthTolerance;
      break;
    }
  }
  trace.final_a = a;
  trace.final_b = b;
  return trace;
}

/// Function for which bracket(f, a[0], b[0], .) visits exactly the given
/// endpoints: derivative -alpha_i on (-a_i, -a_{i+1}), beta_i on
/// (b_{i+1}, b_i), zero on [-a_last, b_last], with alpha_0 = beta_0 = 1,
/// alpha_{i+1} = beta_{i+1} = gamma_i and gamma_i at half its admissible bound.
inline Convex1D build_adversarial(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || a.size() != b.size()) throw InvalidSequence("build_adversarial: sequences must be nonempty and equal length");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] > 0.0 && b[i] > 0.0) || !std::isfinite(a[i]) || !std::isfinite(b[i]))
      throw InvalidSequence("build_adversarial: entries must be positive and finite");
  std::vector<std::pair<double, double>> left, right;  // (outer endpoint, slope), outermost first
  double alpha = 1.0, beta = 1.0;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const bool a_step = a[i + 1] < a[i] && b[i + 1] == b[i];
    const bool b_step = b[i + 1] < b[i] && a[i + 1] == a[i];
    if (!a_step && !b_step)
      throw InvalidSequence("build_adversarial: step " + std::to_string(i) + " must shrink exactly one side");
    double gamma = 0.0;
    if (a_step) {
      left.emplace_back(-a[i], -alpha);
      gamma = 0.5 * alpha * (a[i] - a[i + 1]) / (a[i] + a[i + 1] + 2 * b[i]);
    } else {
      right.emplace_back(b[i], beta);
      gamma = 0.5 * beta * (b[i] - b[i + 1]) / (2 * a[i] + b[i] + b[i + 1]);
    }
    alpha = beta = gamma;
  }
  std::vector<double> knots, slopes;
  for (const auto& [x, g] : left) {
    knots.push_back(x);
    slopes.push_back(g);
  }
  knots.push_back(-a.back());
  slopes.push_back(0.0);
  knots.push_back(b.back());
  for (auto it = right.rbegin(); it != right.rend(); ++it) {
    slopes.push_back(it->second);
    knots.push_back(it->first);
  }
  return piecewise_linear(std::move(knots), std::move(slopes));
}

struct RateReport {
  std::vector<double> width_ratios;
  std::vector<double> y_norm_bound_ratios;
};

/// Distance from the origin to the segment [p, q] in the plane.
inline double segment_distance(double px, double py, double qx, double qy) {
  const double dx = qx - px, dy = qy - py;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? -(px * dx + py * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px + t * dx, py + t * dy);
}

/// Width ratios (a_{i+1}+b_{i+1})/(a_i+b_i) and ratios of the distance from
/// the origin to the chord between (-a_i, f(-a_i)) and (b_i, f(b_i)).
inline RateReport measure_rate(const BracketTrace& trace, const Convex1D& f) {
  const auto as = trace.a_seq();
  const auto bs = trace.b_seq();
  RateReport out;
  std::vector<double> dist;
  for (std::size_t i = 0; i < as.size(); ++i) dist.push_back(segment_distance(-as[i], f.value(-as[i]), bs[i], f.value(bs[i])));
  for (std::size_t i = 0; i + 1 < as.size(); ++i) {
    out.width_ratios.push_back((as[i + 1] + bs[i + 1]) / (as[i] + bs[i]));
    out.y_norm_bound_ratios.push_back(dist[i] > 0 ? dist[i + 1] / dist[i] : 0.0);
  }
  return out;
}

}  // namespace vnqp

#endif  // VNQP_BRACKETING_HPP
