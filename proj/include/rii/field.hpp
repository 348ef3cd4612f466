#pragma once

#include "rii/rational.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rii {

enum class ComponentKind { Circle, Interval };

template <class S>
struct Breakpoint {
  S pos;
  S value;
};

// One connected piece of the 1-manifold carrying the field. Lengths are in
// the normalized boundary metric; positions are arclength in [0, length].
template <class S>
struct Component {
  ComponentKind kind = ComponentKind::Circle;
  S length{};
  std::vector<Breakpoint<S>> pts;
};

// Closed sub-arc of a component. On circles `start` lives in [0, length) and
// the arc may wrap; len == length means the full circle. On intervals the arc
// is the plain segment [start, start+len].
template <class S>
struct Arc {
  S start{};
  S len{};
};

template <class S>
struct ESegment {
  int component = 0;
  Arc<S> arc;
  S level{};
  std::uint64_t field_id = 0;
};

enum class SegmentOrder { LessEq, GreaterEq, Equal, Incomparable };

namespace detail {
inline std::uint64_t next_field_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

template <class S>
S mod_length(S x, const S& length) {
  while (x < S(0)) x += length;
  while (x >= length) x -= length;
  return x;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Arc helpers (component-relative; wrap arithmetic needs kind + length).

template <class S>
bool arc_is_full(const Component<S>& c, const Arc<S>& a) {
  return c.kind == ComponentKind::Circle && a.len == c.length;
}

template <class S>
bool arc_contains_point(const Component<S>& c, const Arc<S>& a, const S& x) {
  if (arc_is_full(c, a)) return true;
  if (c.kind == ComponentKind::Interval) return a.start <= x && x <= a.start + a.len;
  S off = detail::mod_length(x - a.start, c.length);
  return off <= a.len;
}

// b subset of a.
template <class S>
bool arc_contains(const Component<S>& c, const Arc<S>& a, const Arc<S>& b) {
  if (arc_is_full(c, a)) return true;
  if (arc_is_full(c, b)) return false;
  if (b.len > a.len) return false;
  if (c.kind == ComponentKind::Interval)
    return b.start >= a.start && b.start + b.len <= a.start + a.len;
  S off = detail::mod_length(b.start - a.start, c.length);
  return off + b.len <= a.len;
}

template <class S>
bool arc_equal(const Component<S>& c, const Arc<S>& a, const Arc<S>& b) {
  return arc_contains(c, a, b) && arc_contains(c, b, a);
}

// Gap between two arcs along the component; 0 when they touch or overlap.
template <class S>
S arc_distance(const Component<S>& c, const Arc<S>& a, const Arc<S>& b) {
  if (arc_is_full(c, a) || arc_is_full(c, b)) return S(0);
  if (c.kind == ComponentKind::Interval) {
    S d1 = b.start - (a.start + a.len);
    S d2 = a.start - (b.start + b.len);
    S d = std::max(d1, d2);
    return d > S(0) ? d : S(0);
  }
  if (arc_contains_point(c, a, b.start) || arc_contains_point(c, b, a.start)) return S(0);
  S d1 = detail::mod_length(b.start - (a.start + a.len), c.length);
  S d2 = detail::mod_length(a.start - (b.start + b.len), c.length);
  return std::min(d1, d2);
}

template <class S>
S arc_midpoint(const Component<S>& c, const Arc<S>& a) {
  S m = a.start + a.len / S(2);
  if (c.kind == ComponentKind::Circle) m = detail::mod_length(std::move(m), c.length);
  return m;
}

// Length of the overlap of two arcs (0 when they only touch at endpoints).
template <class S>
S arc_overlap_length(const Component<S>& c, const Arc<S>& a, const Arc<S>& b) {
  if (arc_is_full(c, a)) return b.len;
  if (arc_is_full(c, b)) return a.len;
  if (c.kind == ComponentKind::Interval) {
    S lo = std::max(a.start, b.start);
    S hi = std::min(a.start + a.len, b.start + b.len);
    return hi > lo ? hi - lo : S(0);
  }
  // Shift so a starts at 0; b may intersect a directly or wrapped once.
  S o = detail::mod_length(b.start - a.start, c.length);
  S total{};
  for (int copy = 0; copy < 2; ++copy) {
    S bs = (copy == 0) ? o : o - c.length;
    S lo = std::max(S(0), bs);
    S hi = std::min(a.len, bs + b.len);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

// ---------------------------------------------------------------------------
// PiecewiseScalarField: piecewise-linear f >= xi on circles/intervals.

template <class S>
class PiecewiseScalarField {
 public:
  PiecewiseScalarField() = default;

  PiecewiseScalarField(std::vector<Component<S>> comps, S xi)
      : comps_(std::move(comps)), xi_(std::move(xi)), id_(detail::next_field_id()) {
    validate();
  }

  const std::vector<Component<S>>& components() const { return comps_; }
  const Component<S>& component(int i) const { return comps_.at(static_cast<size_t>(i)); }
  int component_count() const { return static_cast<int>(comps_.size()); }
  const S& xi() const { return xi_; }
  std::uint64_t id() const { return id_; }

  S value(int ci, S x) const {
    const Component<S>& c = component(ci);
    const auto& p = c.pts;
    if (c.kind == ComponentKind::Circle) {
      x = detail::mod_length(std::move(x), c.length);
      if (p.size() == 1) return p[0].value;
      auto it = std::upper_bound(p.begin(), p.end(), x,
                                 [](const S& v, const Breakpoint<S>& b) { return v < b.pos; });
      size_t j = (it == p.begin()) ? p.size() - 1 : static_cast<size_t>(it - p.begin()) - 1;
      size_t k = (j + 1) % p.size();
      S x0 = p[j].pos;
      S x1 = (k == 0) ? p[0].pos + c.length : p[k].pos;
      S xq = (x < x0) ? x + c.length : x;
      return interp(x0, p[j].value, x1, p[k].value, xq);
    }
    if (x < S(0) || x > c.length) throw std::invalid_argument("position outside interval component");
    auto it = std::upper_bound(p.begin(), p.end(), x,
                               [](const S& v, const Breakpoint<S>& b) { return v < b.pos; });
    size_t j = (it == p.begin()) ? 0 : static_cast<size_t>(it - p.begin()) - 1;
    if (j + 2 > p.size()) j = p.size() - 2;
    return interp(p[j].pos, p[j].value, p[j + 1].pos, p[j + 1].value, x);
  }

  S max_value(int ci) const {
    const auto& p = component(ci).pts;
    S m = p[0].value;
    for (const auto& b : p) m = std::max(m, b.value);
    return m;
  }

  S min_value(int ci) const {
    const auto& p = component(ci).pts;
    S m = p[0].value;
    for (const auto& b : p) m = std::min(m, b.value);
    return m;
  }

  S max_value() const {
    S m = max_value(0);
    for (int i = 1; i < component_count(); ++i) m = std::max(m, max_value(i));
    return m;
  }

  // Maximal closed arc through x on which f >= t.
  ESegment<S> e_segment(int ci, const S& x, const S& t) const {
    if (t < xi_) throw std::invalid_argument("point not in hypograph: level below base level");
    const Component<S>& c = component(ci);
    S xn = (c.kind == ComponentKind::Circle) ? detail::mod_length(S(x), c.length) : x;
    if (value(ci, xn) < t) throw std::invalid_argument("point not in hypograph");
    Arc<S> arc = region_through(c, xn, t, Pred::Ge);
    return ESegment<S>{ci, arc, t, id_};
  }

  // Closure of the component of {f < t} (weak: {f <= t}) containing x.
  Arc<S> gap_through(int ci, const S& x, const S& t, bool weak) const {
    const Component<S>& c = component(ci);
    S xn = (c.kind == ComponentKind::Circle) ? detail::mod_length(S(x), c.length) : x;
    S v = value(ci, xn);
    if (weak ? (v > t) : (v >= t)) throw std::invalid_argument("point not in gap");
    return region_through(c, xn, t, weak ? Pred::Le : Pred::Lt);
  }

 private:
  enum class Pred { Ge, Lt, Le };

  static S interp(const S& x0, const S& v0, const S& x1, const S& v1, const S& x) {
    if (x1 == x0) return v0;
    return v0 + (v1 - v0) * (x - x0) / (x1 - x0);
  }

  // Shared walk for superlevel segments ({f >= t}) and gaps ({f < t} or
  // {f <= t}). Works in an unrolled coordinate chart on circles so wrapping
  // arcs come out with the correct length. Returns the closure as an Arc.
  Arc<S> region_through(const Component<S>& c, const S& x, const S& t, Pred pred) const {
    const auto& p = c.pts;
    const long n = static_cast<long>(p.size());
    const bool circ = (c.kind == ComponentKind::Circle);
    auto inside = [&](const S& v) {
      switch (pred) {
        case Pred::Ge: return v >= t;
        case Pred::Lt: return v < t;
        default: return v <= t;
      }
    };
    if (circ && n == 1) return Arc<S>{S(0), c.length};

    auto node_pos = [&](long j) -> S {
      if (!circ) return p[static_cast<size_t>(j)].pos;
      long q = j / n, r = j % n;
      if (r < 0) { r += n; q -= 1; }
      return p[static_cast<size_t>(r)].pos + S(static_cast<int>(q)) * c.length;
    };
    auto node_val = [&](long j) -> S {
      long r = j % n;
      if (r < 0) r += n;
      return p[static_cast<size_t>(r)].value;
    };
    auto cross = [&](const S& xa, const S& va, const S& xb, const S& vb) {
      return xa + (t - va) * (xb - xa) / (vb - va);
    };

    // Locate the piece [node j0, node j0+1] containing x.
    long j0 = 0;
    {
      auto it = std::upper_bound(p.begin(), p.end(), x,
                                 [](const S& v, const Breakpoint<S>& b) { return v < b.pos; });
      if (circ) {
        j0 = (it == p.begin()) ? -1 : static_cast<long>(it - p.begin()) - 1;
      } else {
        j0 = (it == p.begin()) ? 0 : static_cast<long>(it - p.begin()) - 1;
        if (j0 > n - 2) j0 = n - 2;
      }
    }
    const S v_at_x = interp(node_pos(j0), node_val(j0), node_pos(j0 + 1), node_val(j0 + 1), x);

    bool full = false;
    S right{};
    {
      long j = j0;
      S anchor_x = x, anchor_v = v_at_x;
      while (true) {
        S xb = node_pos(j + 1), vb = node_val(j + 1);
        if (!inside(vb)) {
          right = cross(anchor_x, anchor_v, xb, vb);
          break;
        }
        if (!circ && j + 1 == n - 1) {
          right = c.length;
          break;
        }
        if (circ && j + 1 - j0 >= n) {
          full = true;
          break;
        }
        ++j;
        anchor_x = xb;
        anchor_v = vb;
      }
    }
    if (full) return Arc<S>{S(0), c.length};

    S left{};
    {
      long j = j0;
      S anchor_x = x, anchor_v = v_at_x;
      while (true) {
        S xa = node_pos(j), va = node_val(j);
        if (!inside(va)) {
          left = cross(xa, va, anchor_x, anchor_v);
          break;
        }
        if (!circ && j == 0) {
          left = S(0);
          break;
        }
        if (circ && j0 - j >= n - 1) {
          full = true;
          break;
        }
        --j;
        anchor_x = xa;
        anchor_v = va;
      }
    }
    if (full) return Arc<S>{S(0), c.length};

    S len = right - left;
    if (circ) {
      left = detail::mod_length(std::move(left), c.length);
      if (len > c.length) len = c.length;
    }
    return Arc<S>{std::move(left), std::move(len)};
  }

  void validate() const {
    if (comps_.empty()) throw std::invalid_argument("field needs at least one component");
    for (const auto& c : comps_) {
      if (!(c.length > S(0))) throw std::invalid_argument("component length must be positive");
      if (c.pts.empty()) throw std::invalid_argument("component needs breakpoints");
      for (size_t i = 0; i + 1 < c.pts.size(); ++i)
        if (!(c.pts[i].pos < c.pts[i + 1].pos))
          throw std::invalid_argument("breakpoints must be strictly increasing");
      if (c.kind == ComponentKind::Circle) {
        if (c.pts.front().pos < S(0) || c.pts.back().pos >= c.length)
          throw std::invalid_argument("circle breakpoints must lie in [0, length)");
      } else {
        if (c.pts.size() < 2 || c.pts.front().pos != S(0) || c.pts.back().pos != c.length)
          throw std::invalid_argument("interval components need breakpoints at both endpoints");
      }
      for (const auto& b : c.pts)
        if (b.value < xi_) throw std::invalid_argument("field value below base level");
    }
  }

  std::vector<Component<S>> comps_;
  S xi_{};
  std::uint64_t id_ = 0;
};

// Implements <= = (<=_1 and <=_2) on E-segments of one field.
template <class S>
SegmentOrder compare_segments(const PiecewiseScalarField<S>& field, const ESegment<S>& e1,
                              const ESegment<S>& e2) {
  if (e1.field_id != field.id() || e2.field_id != field.id())
    throw std::invalid_argument("segments from different fields");
  bool le = false, ge = false;
  if (e1.component == e2.component) {
    const Component<S>& c = field.component(e1.component);
    le = arc_contains(c, e1.arc, e2.arc) && e1.level <= e2.level;
    ge = arc_contains(c, e2.arc, e1.arc) && e2.level <= e1.level;
  }
  if (le && ge) return SegmentOrder::Equal;
  if (le) return SegmentOrder::LessEq;
  if (ge) return SegmentOrder::GreaterEq;
  return SegmentOrder::Incomparable;
}

// ---------------------------------------------------------------------------
// Injectivity-radius style weight r(x) along the domain: piecewise linear,
// positive, Lipschitz-1 in arclength. Rejects violating profiles outright.

template <class S>
class RadiusProfile {
 public:
  RadiusProfile() = default;

  explicit RadiusProfile(std::vector<Component<S>> comps) {
    for (const auto& c : comps) {
      if (c.pts.empty()) throw std::invalid_argument("radius profile needs breakpoints");
      for (const auto& b : c.pts)
        if (!(b.value > S(0))) throw std::invalid_argument("radius profile must be positive");
      auto check = [](const S& dx, const S& dv) {
        S a = dv < S(0) ? S(-dv) : dv;
        if (a > dx) throw std::invalid_argument("radius profile violates the Lipschitz-1 bound");
      };
      for (size_t i = 0; i + 1 < c.pts.size(); ++i)
        check(c.pts[i + 1].pos - c.pts[i].pos, c.pts[i + 1].value - c.pts[i].value);
      if (c.kind == ComponentKind::Circle && c.pts.size() > 1)
        check(c.length - c.pts.back().pos + c.pts.front().pos,
              c.pts.front().value - c.pts.back().value);
    }
    field_ = PiecewiseScalarField<S>(std::move(comps), S(0));
  }

  template <class FieldLike>
  static RadiusProfile constant(const FieldLike& field, const S& r0) {
    std::vector<Component<S>> comps;
    for (const auto& c : field.components()) {
      Component<S> rc;
      rc.kind = c.kind;
      rc.length = c.length;
      if (c.kind == ComponentKind::Circle)
        rc.pts = {{S(0), r0}};
      else
        rc.pts = {{S(0), r0}, {c.length, r0}};
      comps.push_back(std::move(rc));
    }
    return RadiusProfile(std::move(comps));
  }

  S value(int ci, const S& x) const { return field_.value(ci, x); }
  const std::vector<Component<S>>& components() const { return field_.components(); }

 private:
  PiecewiseScalarField<S> field_;
};

}  // namespace rii
