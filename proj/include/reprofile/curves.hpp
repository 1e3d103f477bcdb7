#pragma once

// Piecewise-linear concave curves used as arrival curves and minimal service
// functions. Time is in seconds, data in megabits, rates in Mb/s.

#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace reprofile {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Breakpoints closer than this (seconds) are merged.
inline constexpr double kBreakpointTolerance = 1e-12;

class CurveError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two-parameter token bucket (r, b).
struct TokenBucketProfile {
  double rate = 1.0;   // Mb/s
  double burst = 1.0;  // Mb

  TokenBucketProfile() = default;
  TokenBucketProfile(double r, double b);

  // b / r, the largest shaping delay that still leaves a valid 2SRC.
  double max_shaping_delay() const { return burst / rate; }
};

// A token bucket reshaped to a two-slope reprofiling curve
// sigma(t) = min(R t, B + r t) with R = b / D and B = b - r D.
class Reprofiler {
 public:
  Reprofiler(TokenBucketProfile base, double delay);

  const TokenBucketProfile& base() const { return base_; }
  double delay() const { return delay_; }

  // +inf when delay == 0 (no peak constraint).
  double peak_rate() const;
  double reduced_burst() const;

  // sigma(t); 0 at t <= 0.
  double operator()(double t) const;

 private:
  TokenBucketProfile base_;
  double delay_;
};

// Non-decreasing concave piecewise-linear curve f with f(0) = 0 and
// f(0+) = jump0. Segment k covers [start_k, start_{k+1}) with the given slope;
// the last segment extends to infinity.
class ConcaveCurve {
 public:
  struct Segment {
    double start;
    double slope;
  };

  // The zero curve.
  ConcaveCurve();

  // Normalizes (drops zero-length segments, merges equal slopes) and checks
  // concavity. Throws CurveError on a non-concave or decreasing curve.
  ConcaveCurve(double jump0, std::vector<Segment> segments);

  double jump0() const { return jump0_; }
  const std::vector<Segment>& segments() const { return segments_; }
  double final_slope() const { return segments_.back().slope; }
  double initial_slope() const { return segments_.front().slope; }
  bool is_zero() const;

  double operator()(double t) const;
  // f(t+); equals f(t) for t > 0 and jump0 at t = 0.
  double right_limit(double t) const;

  // g(u) = f(u + shift) for u > 0, g(0+) = f(shift+).
  ConcaveCurve advanced(double shift) const;

  // Smallest t >= 0 with f(t) >= y (right-limit sense); +inf if never reached.
  double inverse(double y) const;

 private:
  std::size_t segment_index(double t) const;

  double jump0_ = 0.0;
  std::vector<Segment> segments_;
  std::vector<double> start_values_;  // f(start_k+)
};

ConcaveCurve make_token_bucket_curve(const TokenBucketProfile& p);
ConcaveCurve make_2src_curve(const Reprofiler& rep);
ConcaveCurve make_rate_curve(double rate);

// D = b / R. Throws CurveError when R < r.
double shaping_delay(const TokenBucketProfile& p, double peak_rate);

ConcaveCurve curve_sum(const ConcaveCurve& a, const ConcaveCurve& b);
ConcaveCurve curve_sum(std::span<const ConcaveCurve> curves);

ConcaveCurve operator+(const ConcaveCurve& a, const ConcaveCurve& b);

// Maximum horizontal distance between alpha and beta; kInfinity if unbounded.
double horizontal_deviation(const ConcaveCurve& alpha, const ConcaveCurve& beta);

struct SupRatio {
  double value;
  double argmax;  // kInfinity when only approached asymptotically
};

// sup over t > origin_shift of S(t) / t where S(t) = curve(t - origin_shift).
// Ties go to the smallest t.
SupRatio sup_ratio(const ConcaveCurve& curve, double origin_shift);

}  // namespace reprofile
