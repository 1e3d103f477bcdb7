#include "reprofile/provision.hpp"

#include <algorithm>
#include <cmath>

namespace reprofile {

namespace {

ConcaveCurve sum_where(const LinkClassState& state, auto&& keep) {
  std::vector<ConcaveCurve> curves;
  curves.reserve(state.flows.size());
  for (const LinkFlow& f : state.flows) {
    if (keep(f)) curves.push_back(make_2src_curve(Reprofiler(f.profile, f.shaping_delay)));
  }
  return curve_sum(curves);
}

// S(t+) / t, with the t -> 0+ limit when t == 0.
double ratio_at(const ServiceFunction& s, double t) {
  if (t > 0.0) return s.right_limit(t) / t;
  if (s.shape.jump0() > 0.0) return kInfinity;
  return s.shape.initial_slope();
}

}  // namespace

std::vector<std::size_t> PriorityAssignment::members(int h) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < class_of.size(); ++i) {
    if (class_of[i] == h) out.push_back(i);
  }
  return out;
}

bool PriorityAssignment::is_partition() const {
  return std::all_of(class_of.begin(), class_of.end(),
                     [&](int h) { return h >= 1 && h <= classes; });
}

PriorityAssignment LinkClassState::assignment() const {
  PriorityAssignment a;
  a.classes = classes;
  a.class_of.reserve(flows.size());
  for (const LinkFlow& f : flows) a.class_of.push_back(f.priority);
  return a;
}

bool LinkClassState::class_empty(int h) const {
  return std::none_of(flows.begin(), flows.end(), [h](const LinkFlow& f) { return f.priority == h; });
}

ConcaveCurve class_arrival(const LinkClassState& state, int h) {
  return sum_where(state, [h](const LinkFlow& f) { return f.priority == h; });
}

ConcaveCurve higher_priority_arrival(const LinkClassState& state, int h) {
  return sum_where(state, [h](const LinkFlow& f) { return f.priority < h; });
}

ServiceFunction minimal_service_function(const LinkClassState& state, int h) {
  const double T = state.deadline(h);
  return {T, class_arrival(state, h) + higher_priority_arrival(state, h).advanced(T)};
}

std::vector<InflectionPoint> inflection_points(const LinkClassState& state, int h) {
  const double T = state.deadline(h);
  std::vector<InflectionPoint> raw;
  InflectionPoint first;
  first.t = T;
  first.cls = h;
  first.first_point = true;
  raw.push_back(first);
  for (const LinkFlow& f : state.flows) {
    InflectionPoint p;
    p.cls = h;
    if (f.priority == h && f.shaping_delay > 0.0) {
      p.t = T + f.shaping_delay;
      p.own_flows.push_back(f.id);
    } else if (f.priority < h && f.shaping_delay > T) {
      p.t = f.shaping_delay;
      p.higher_flows.push_back(f.id);
    } else {
      continue;
    }
    raw.push_back(std::move(p));
  }
  std::stable_sort(raw.begin(), raw.end(),
                   [](const InflectionPoint& a, const InflectionPoint& b) { return a.t < b.t; });

  std::vector<InflectionPoint> out;
  for (InflectionPoint& p : raw) {
    if (!out.empty() && p.t - out.back().t <= kBreakpointTolerance) {
      InflectionPoint& q = out.back();
      q.first_point = q.first_point || p.first_point;
      q.own_flows.insert(q.own_flows.end(), p.own_flows.begin(), p.own_flows.end());
      q.higher_flows.insert(q.higher_flows.end(), p.higher_flows.begin(), p.higher_flows.end());
      continue;
    }
    out.push_back(std::move(p));
  }
  // FirstPoint sits exactly at T even when merged with a nearby rate change.
  if (out.front().first_point) out.front().t = T;
  return out;
}

ClassBandwidth class_bandwidth(const LinkClassState& state, int h) {
  ClassBandwidth result;
  result.cls = h;
  result.empty = state.class_empty(h);
  const ServiceFunction s = minimal_service_function(state, h);
  const std::vector<InflectionPoint> points = inflection_points(state, h);
  bool have = false;
  for (const InflectionPoint& p : points) {
    const double r = ratio_at(s, p.t);
    if (!have) {
      result.rate = r;
      result.witness = p;
      have = true;
      continue;
    }
    if (result.rate == kInfinity) break;
    if (r > result.rate + 1e-12 * std::abs(result.rate)) {
      result.rate = r;
      result.witness = p;
    }
  }
  return result;
}

LinkBandwidth link_bandwidth(const LinkClassState& state) {
  LinkBandwidth out;
  for (const LinkFlow& f : state.flows) out.stability += f.profile.rate;
  out.rate = out.stability;
  for (int h = 1; h <= state.classes; ++h) {
    ClassBandwidth c = class_bandwidth(state, h);
    if (!c.empty) out.rate = std::max(out.rate, c.rate);
    out.per_class.push_back(std::move(c));
  }
  return out;
}

std::vector<InflectionPoint> slacks(const LinkClassState& state, int h, double link_rate) {
  const ServiceFunction s = minimal_service_function(state, h);
  std::vector<InflectionPoint> points = inflection_points(state, h);
  for (InflectionPoint& p : points) {
    const double supply = link_rate * p.t;
    p.slack = supply - s.right_limit(p.t);
    const double tolerance = std::max(1e-9 * supply, 1e-12);
    if (p.slack < -tolerance) {
      throw ProvisioningError("negative slack at t=" + std::to_string(p.t) + " for class " +
                              std::to_string(h));
    }
  }
  return points;
}

double higher_priority_crossing(const LinkClassState& state, int h, double link_rate) {
  const ConcaveCurve higher = higher_priority_arrival(state, h);
  if (higher.is_zero()) return 0.0;
  const auto& segs = higher.segments();
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const double start = segs[k].start;
    const double gap = higher.right_limit(start) - link_rate * start;
    if (gap < 0.0) return start;
    const double end = k + 1 < segs.size() ? segs[k + 1].start : kInfinity;
    if (segs[k].slope < link_rate) {
      const double root = start + gap / (link_rate - segs[k].slope);
      if (root <= end) return root;
    }
  }
  return kInfinity;
}

}  // namespace reprofile
