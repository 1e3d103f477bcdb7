#include "reprofile/curves.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace reprofile {

namespace {

bool slopes_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TokenBucketProfile::TokenBucketProfile(double r, double b) : rate(r), burst(b) {
  if (!(r > 0.0) || !std::isfinite(r)) throw CurveError("token bucket rate must be positive");
  if (!(b > 0.0) || !std::isfinite(b)) throw CurveError("token bucket burst must be positive");
}

Reprofiler::Reprofiler(TokenBucketProfile base, double delay) : base_(base), delay_(delay) {
  const double cap = base_.max_shaping_delay();
  if (!(delay >= 0.0)) throw CurveError("shaping delay must be non-negative");
  if (delay > cap * (1.0 + 1e-12)) throw CurveError("shaping delay exceeds b/r");
  delay_ = std::min(delay, cap);
}

double Reprofiler::peak_rate() const {
  return delay_ == 0.0 ? kInfinity : base_.burst / delay_;
}

double Reprofiler::reduced_burst() const {
  return std::max(0.0, base_.burst - base_.rate * delay_);
}

double Reprofiler::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (delay_ == 0.0) return base_.burst + base_.rate * t;
  return std::min(peak_rate() * t, reduced_burst() + base_.rate * t);
}

ConcaveCurve::ConcaveCurve() : ConcaveCurve(0.0, {{0.0, 0.0}}) {}

ConcaveCurve::ConcaveCurve(double jump0, std::vector<Segment> segments) : jump0_(jump0) {
  if (!(jump0 >= -1e-12) || !std::isfinite(jump0)) throw CurveError("curve jump at 0+ must be >= 0");
  jump0_ = std::max(0.0, jump0);
  if (segments.empty()) segments.push_back({0.0, 0.0});
  if (std::abs(segments.front().start) > kBreakpointTolerance)
    throw CurveError("first breakpoint must be 0");
  segments.front().start = 0.0;

  // Drop zero-length segments, keeping the one that actually spans the interval.
  std::vector<Segment> spanned;
  spanned.reserve(segments.size());
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const Segment& s = segments[k];
    if (!std::isfinite(s.slope)) throw CurveError("curve slope must be finite");
    if (!spanned.empty() && s.start < spanned.back().start - kBreakpointTolerance)
      throw CurveError("breakpoints must be increasing");
    if (!spanned.empty() && s.start - spanned.back().start <= kBreakpointTolerance) {
      // A collapsed first segment may be steep (a barely shaped burst): keep its rise as a jump.
      if (spanned.size() == 1) jump0_ += spanned.back().slope * (s.start - spanned.back().start);
      spanned.back().slope = s.slope;
      continue;
    }
    spanned.push_back(s);
  }

  // Rounding in summed slopes is judged against the steepest slope.
  const double scale = std::max(1.0, std::abs(spanned.front().slope));
  segments_.clear();
  for (const Segment& s : spanned) {
    if (!segments_.empty()) {
      const double prev = segments_.back().slope;
      if (slopes_equal(prev, s.slope) || std::abs(s.slope - prev) <= 1e-12 * scale) continue;
      if (s.slope > prev) throw CurveError("curve is not concave");
    }
    segments_.push_back(s);
  }
  for (Segment& s : segments_) {
    if (s.slope < -1e-12 * scale) throw CurveError("curve must be non-decreasing");
    s.slope = std::max(0.0, s.slope);
  }

  start_values_.resize(segments_.size());
  start_values_[0] = jump0_;
  for (std::size_t k = 1; k < segments_.size(); ++k) {
    start_values_[k] = start_values_[k - 1] +
                       segments_[k - 1].slope * (segments_[k].start - segments_[k - 1].start);
  }
}

bool ConcaveCurve::is_zero() const {
  return jump0_ == 0.0 && segments_.size() == 1 && segments_[0].slope == 0.0;
}

std::size_t ConcaveCurve::segment_index(double t) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double v, const Segment& s) { return v < s.start; });
  return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

double ConcaveCurve::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  return right_limit(t);
}

double ConcaveCurve::right_limit(double t) const {
  if (t <= 0.0) return jump0_;
  const std::size_t k = segment_index(t);
  return start_values_[k] + segments_[k].slope * (t - segments_[k].start);
}

ConcaveCurve ConcaveCurve::advanced(double shift) const {
  if (shift <= 0.0) return *this;
  const std::size_t k = segment_index(shift);
  std::vector<Segment> out;
  out.reserve(segments_.size() - k);
  out.push_back({0.0, segments_[k].slope});
  for (std::size_t l = k + 1; l < segments_.size(); ++l) {
    out.push_back({segments_[l].start - shift, segments_[l].slope});
  }
  return ConcaveCurve(right_limit(shift), std::move(out));
}

double ConcaveCurve::inverse(double y) const {
  if (y <= jump0_) return 0.0;
  const std::size_t n = segments_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double end_value = k + 1 < n ? start_values_[k + 1] : kInfinity;
    if (y <= end_value || k + 1 == n) {
      if (segments_[k].slope <= 0.0) {
        if (y <= start_values_[k]) return segments_[k].start;
        return kInfinity;
      }
      return segments_[k].start + (y - start_values_[k]) / segments_[k].slope;
    }
  }
  return kInfinity;
}

ConcaveCurve make_token_bucket_curve(const TokenBucketProfile& p) {
  return ConcaveCurve(p.burst, {{0.0, p.rate}});
}

ConcaveCurve make_rate_curve(double rate) { return ConcaveCurve(0.0, {{0.0, rate}}); }

ConcaveCurve make_2src_curve(const Reprofiler& rep) {
  const auto& p = rep.base();
  if (rep.delay() == 0.0) return make_token_bucket_curve(p);
  if (rep.reduced_burst() <= 1e-12 * p.burst) return make_rate_curve(p.rate);
  return ConcaveCurve(0.0, {{0.0, rep.peak_rate()}, {rep.delay(), p.rate}});
}

double shaping_delay(const TokenBucketProfile& p, double peak_rate) {
  if (!(peak_rate >= p.rate))
    throw CurveError("peak rate " + std::to_string(peak_rate) + " below sustained rate");
  return p.burst / peak_rate;
}

ConcaveCurve curve_sum(const ConcaveCurve& a, const ConcaveCurve& b) {
  const auto& sa = a.segments();
  const auto& sb = b.segments();
  std::vector<ConcaveCurve::Segment> out;
  out.reserve(sa.size() + sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double t = 0.0;
  while (true) {
    out.push_back({t, sa[i].slope + sb[j].slope});
    const double next_a = i + 1 < sa.size() ? sa[i + 1].start : kInfinity;
    const double next_b = j + 1 < sb.size() ? sb[j + 1].start : kInfinity;
    const double next = std::min(next_a, next_b);
    if (next == kInfinity) break;
    if (next_a - next <= kBreakpointTolerance) ++i;
    if (next_b - next <= kBreakpointTolerance) ++j;
    t = next;
  }
  return ConcaveCurve(a.jump0() + b.jump0(), std::move(out));
}

ConcaveCurve curve_sum(std::span<const ConcaveCurve> curves) {
  if (curves.empty()) return ConcaveCurve();
  // Sweep slope changes instead of folding pairwise.
  struct Change {
    double at;
    double delta;
  };
  std::vector<Change> changes;
  double jump = 0.0;
  double slope = 0.0;
  for (const auto& c : curves) {
    jump += c.jump0();
    const auto& segs = c.segments();
    slope += segs[0].slope;
    for (std::size_t k = 1; k < segs.size(); ++k) {
      changes.push_back({segs[k].start, segs[k].slope - segs[k - 1].slope});
    }
  }
  std::sort(changes.begin(), changes.end(),
            [](const Change& a, const Change& b) { return a.at < b.at; });
  std::vector<ConcaveCurve::Segment> out;
  out.reserve(changes.size() + 1);
  out.push_back({0.0, slope});
  for (std::size_t k = 0; k < changes.size();) {
    const double at = changes[k].at;
    while (k < changes.size() && changes[k].at - at <= kBreakpointTolerance) {
      slope += changes[k].delta;
      ++k;
    }
    out.push_back({at, slope});
  }
  return ConcaveCurve(jump, std::move(out));
}

ConcaveCurve operator+(const ConcaveCurve& a, const ConcaveCurve& b) { return curve_sum(a, b); }

double horizontal_deviation(const ConcaveCurve& alpha, const ConcaveCurve& beta) {
  const double a_slope = alpha.final_slope();
  const double b_slope = beta.final_slope();
  if (a_slope > b_slope) return kInfinity;

  double worst = 0.0;
  auto probe = [&](double t) {
    const double target = alpha.right_limit(t);
    const double reach = beta.inverse(target);
    if (reach == kInfinity) {
      worst = kInfinity;
      return;
    }
    worst = std::max(worst, reach - t);
  };

  probe(0.0);
  for (const auto& s : alpha.segments()) probe(s.start);
  for (const auto& s : beta.segments()) {
    const double t = alpha.inverse(beta.right_limit(s.start));
    if (t != kInfinity) probe(t);
  }
  return worst;
}

SupRatio sup_ratio(const ConcaveCurve& curve, double origin_shift) {
  if (origin_shift < 0.0) throw CurveError("origin shift must be non-negative");
  SupRatio best{0.0, origin_shift};
  bool have = false;
  auto consider = [&](double value, double at) {
    if (!have) {
      best = {value, at};
      have = true;
      return;
    }
    if (value == kInfinity && best.value == kInfinity) return;
    const double scale = std::max(std::abs(value), std::abs(best.value));
    if (value > best.value + 1e-12 * scale) best = {value, at};
  };

  // Limit as t -> origin_shift+.
  if (origin_shift > 0.0) {
    consider(curve.jump0() / origin_shift, origin_shift);
  } else if (curve.jump0() > 0.0) {
    consider(kInfinity, 0.0);
  } else {
    consider(curve.initial_slope(), 0.0);
  }

  const auto& segs = curve.segments();
  for (std::size_t k = 1; k < segs.size(); ++k) {
    const double u = segs[k].start;
    consider(curve.right_limit(u) / (u + origin_shift), u + origin_shift);
  }
  consider(curve.final_slope(), kInfinity);
  return best;
}

}  // namespace reprofile
