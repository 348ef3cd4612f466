#pragma once

#include "rii/field.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rii {

// ---------------------------------------------------------------------------
// Width thresholds t -> w(t). The defaults are 4*exp(-t) and 24*exp(-t); the
// exact-rational instantiation only admits piecewise-constant thresholds
// (evaluated left-continuously: a step's value applies on (upper_{i-1}, upper_i]).

template <class S>
struct ThresholdFn {
  enum class Kind { ScaledExp, PiecewiseConst, Zero };

  Kind kind = Kind::Zero;
  double scale = 0.0;                  // ScaledExp
  std::vector<std::pair<S, S>> steps;  // PiecewiseConst: (upper level, value), sorted
  S tail{};                            // PiecewiseConst: value above the last step

  static ThresholdFn scaled_exp(double c) {
    if (!(c > 0)) throw std::invalid_argument("threshold scale must be positive");
    ThresholdFn f;
    f.kind = Kind::ScaledExp;
    f.scale = c;
    return f;
  }

  static ThresholdFn zero() { return ThresholdFn{}; }

  static ThresholdFn piecewise_const(std::vector<std::pair<S, S>> in_steps, S in_tail) {
    ThresholdFn f;
    f.kind = Kind::PiecewiseConst;
    f.steps = std::move(in_steps);
    f.tail = std::move(in_tail);
    for (size_t i = 0; i < f.steps.size(); ++i) {
      if (f.steps[i].second < S(0)) throw std::invalid_argument("threshold must be nonnegative");
      if (i > 0 && !(f.steps[i].first > f.steps[i - 1].first))
        throw std::invalid_argument("threshold steps must increase");
      if (i > 0 && f.steps[i].second > f.steps[i - 1].second)
        throw std::invalid_argument("threshold must be non-increasing");
    }
    if (!f.steps.empty() && f.tail > f.steps.back().second)
      throw std::invalid_argument("threshold must be non-increasing");
    if (f.tail < S(0)) throw std::invalid_argument("threshold must be nonnegative");
    return f;
  }

  static ThresholdFn constant(S v) { return piecewise_const({}, std::move(v)); }

  S value(const S& t) const {
    switch (kind) {
      case Kind::ScaledExp:
        if constexpr (scalar_traits<S>::exact)
          throw std::invalid_argument("scaled-exp threshold is not available in exact mode");
        else
          return S(scale * std::exp(-to_double(t)));
      case Kind::PiecewiseConst:
        for (const auto& [up, v] : steps)
          if (t <= up) return v;
        return tail;
      default:
        return S(0);
    }
  }

  // Limit from above; differs from value() only at the steps.
  S value_right(const S& t) const {
    if (kind != Kind::PiecewiseConst) return value(t);
    for (const auto& [up, v] : steps)
      if (t < up) return v;
    return tail;
  }
};

template <class S>
ThresholdFn<S> default_width(double c) {
  if constexpr (scalar_traits<S>::exact)
    return ThresholdFn<S>::zero();
  else
    return ThresholdFn<S>::scaled_exp(c);
}

template <class S>
S default_exceptional_gap() {
  if constexpr (scalar_traits<S>::exact)
    return scalar_traits<S>::from_fraction(109861228866810969LL, 100000000000000000LL);  // ~ln 3
  else
    return S(std::log(3.0));
}

template <class S>
struct PartitionParams {
  S t_min{};       // base level xi = ln 2k
  double k = 1.0;  // informative; the combinatorics only sees t_min
  ThresholdFn<S> width_e = default_width<S>(4.0);
  ThresholdFn<S> width_n = default_width<S>(24.0);
  S exceptional_gap = default_exceptional_gap<S>();
  double tolerance = 1e-12;

  static PartitionParams for_k(double kk) {
    static_assert(!scalar_traits<S>::exact, "for_k needs the float instantiation");
    if (kk < 1.0) throw std::invalid_argument("k must be >= 1");
    PartitionParams p;
    p.k = kk;
    p.t_min = S(std::log(2.0 * kk));
    return p;
  }
};

// ---------------------------------------------------------------------------
// Tree-like partition of the hypograph into ~ equivalence classes.

template <class S>
struct LevelInterval {
  S lo{}, hi{};
  bool lo_closed = false, hi_closed = true;

  bool contains(const S& t) const {
    if (t < lo || t > hi) return false;
    if (t == lo && !lo_closed) return false;
    if (t == hi && !hi_closed) return false;
    return true;
  }
  bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
};

template <class S>
struct TreeClass {
  int id = 0;
  int component = 0;
  int parent = -1;
  int depth = 0;
  S t_lo{}, t_hi{};
  bool bottom_closed = false;  // true for the root class of each component
  Arc<S> arc_bottom;           // widest extent (limit arc just above t_lo)
  Arc<S> arc_top;              // slice at t_hi
  S x_ref{};                   // position alive at every level of the class
  std::vector<int> children;
};

template <class S>
struct ThinNeck {
  int class_id = 0;
  LevelInterval<S> levels;
  bool exceptional = false;
};

template <class S>
class HypographPartition {
 public:
  PiecewiseScalarField<S> field;
  PartitionParams<S> params;
  std::vector<TreeClass<S>> classes;
  std::vector<int> roots;  // one class per component

  bool labeled = false;
  std::vector<std::vector<LevelInterval<S>>> thin_bands;  // per class, sorted by level
  std::vector<ThinNeck<S>> necks;
  int thick_component_count = 0;

  int class_count() const { return static_cast<int>(classes.size()); }

  int maximal_count() const {
    int m = 0;
    for (const auto& c : classes)
      if (c.children.empty()) ++m;
    return m;
  }

  Arc<S> class_slice(int id, const S& t) const {
    const TreeClass<S>& c = classes.at(static_cast<size_t>(id));
    if (!level_in_class(c, t)) throw std::invalid_argument("level outside class range");
    return field.e_segment(c.component, c.x_ref, t).arc;
  }

  // Class containing (x, t); throws when (x, t) is not in the hypograph.
  int class_of(int ci, const S& x, const S& t) const {
    if (t < field.xi() || field.value(ci, x) < t)
      throw std::invalid_argument("point not in hypograph");
    int cur = roots.at(static_cast<size_t>(ci));
    while (true) {
      const TreeClass<S>& c = classes[static_cast<size_t>(cur)];
      if (t <= c.t_hi) return cur;
      int next = -1;
      for (int ch : c.children) {
        const TreeClass<S>& cc = classes[static_cast<size_t>(ch)];
        if (arc_contains_point(field.component(ci), cc.arc_bottom, x)) {
          next = ch;
          break;
        }
      }
      if (next < 0) throw std::invalid_argument("point not in hypograph");
      cur = next;
    }
  }

  // Tree-like order on classes: a <= b iff a is an ancestor of b (or equal).
  bool class_leq(int a, int b) const {
    int cur = b;
    while (cur != -1) {
      if (cur == a) return true;
      cur = classes[static_cast<size_t>(cur)].parent;
    }
    return false;
  }

  SegmentOrder compare_classes(int a, int b) const {
    bool le = class_leq(a, b), ge = class_leq(b, a);
    if (le && ge) return SegmentOrder::Equal;
    if (le) return SegmentOrder::LessEq;
    if (ge) return SegmentOrder::GreaterEq;
    return SegmentOrder::Incomparable;
  }

  bool level_in_class(const TreeClass<S>& c, const S& t) const {
    if (t > c.t_hi || t < c.t_lo) return false;
    if (t == c.t_lo && !c.bottom_closed) return false;
    return true;
  }

  bool in_thin_band(int id, const S& t) const {
    for (const auto& b : thin_bands.at(static_cast<size_t>(id)))
      if (b.contains(t)) return true;
    return false;
  }
};

namespace detail {

// Maximal runs of equal-valued consecutive breakpoints that are strict local
// extrema (plateaus included). On intervals, runs touching the domain
// boundary are flagged non-interior; they never produce branching points.
template <class S>
struct ExtremumRun {
  Arc<S> arc;  // plateau extent (len 0 for a single breakpoint)
  S value{};
  bool interior = true;
};

template <class S>
std::vector<ExtremumRun<S>> extremum_runs(const Component<S>& c, bool minima) {
  const auto& p = c.pts;
  const long n = static_cast<long>(p.size());
  std::vector<ExtremumRun<S>> out;
  auto val = [&](long j) { return p[static_cast<size_t>(((j % n) + n) % n)].value; };
  auto pos = [&](long j) { return p[static_cast<size_t>(((j % n) + n) % n)].pos; };

  if (c.kind == ComponentKind::Circle) {
    if (n == 1) return out;
    long s = 0;
    while (s < n && val(s) == val(s - 1)) ++s;
    if (s == n) return out;  // constant circle
    long i = s;
    while (i < s + n) {
      long j = i;
      while (j + 1 < s + n && val(j + 1) == val(i)) ++j;
      S prev = val(i - 1), next = val(j + 1);
      bool is_min = prev > val(i) && next > val(i);
      bool is_max = prev < val(i) && next < val(i);
      if (minima ? is_min : is_max) {
        S start = pos(i);
        S len = pos(j) - pos(i);
        if (len < S(0)) len += c.length;
        out.push_back({Arc<S>{std::move(start), std::move(len)}, val(i), true});
      }
      i = j + 1;
    }
    return out;
  }

  long i = 0;
  while (i < n) {
    long j = i;
    while (j + 1 < n && p[static_cast<size_t>(j + 1)].value == p[static_cast<size_t>(i)].value) ++j;
    bool touches_boundary = (i == 0) || (j == n - 1);
    bool is_min = true, is_max = true;
    if (i > 0) {
      is_min = is_min && p[static_cast<size_t>(i - 1)].value > p[static_cast<size_t>(i)].value;
      is_max = is_max && p[static_cast<size_t>(i - 1)].value < p[static_cast<size_t>(i)].value;
    }
    if (j < n - 1) {
      is_min = is_min && p[static_cast<size_t>(j + 1)].value > p[static_cast<size_t>(i)].value;
      is_max = is_max && p[static_cast<size_t>(j + 1)].value < p[static_cast<size_t>(i)].value;
    }
    if ((minima ? is_min : is_max) && !(i == 0 && j == n - 1)) {
      S start = p[static_cast<size_t>(i)].pos;
      S len = p[static_cast<size_t>(j)].pos - start;
      out.push_back({Arc<S>{std::move(start), std::move(len)}, p[static_cast<size_t>(i)].value,
                     !touches_boundary});
    }
    i = j + 1;
  }
  return out;
}

template <class S>
S argmax_in_arc(const PiecewiseScalarField<S>& f, int ci, const Arc<S>& arc) {
  const Component<S>& c = f.component(ci);
  std::optional<S> best_pos;
  S best{};
  for (const auto& b : c.pts) {
    if (!arc_contains_point(c, arc, b.pos)) continue;
    if (!best_pos || b.value > best) {
      best = b.value;
      best_pos = b.pos;
    }
  }
  if (!best_pos) throw std::logic_error("arc without breakpoints");
  return *best_pos;
}

}  // namespace detail

// Builds the ~ equivalence classes (classes and order only).
template <class S>
HypographPartition<S> tree_partition(const PiecewiseScalarField<S>& field,
                                     PartitionParams<S> params = {}) {
  HypographPartition<S> part;
  part.field = field;
  part.params = std::move(params);

  for (int ci = 0; ci < field.component_count(); ++ci) {
    const Component<S>& comp = field.component(ci);
    auto minima = detail::extremum_runs(comp, /*minima=*/true);
    std::erase_if(minima, [](const auto& r) { return !r.interior; });

    std::function<int(Arc<S>, S, bool, int)> build = [&](Arc<S> area, S t_lo, bool closed_lo,
                                                         int parent) -> int {
      // Lowest branching minimum inside the track.
      std::optional<S> mstar;
      for (const auto& r : minima) {
        if (!arc_contains_point(comp, area, r.arc.start)) continue;
        if (r.value < t_lo) continue;
        if (!closed_lo && r.value == t_lo) continue;  // belongs to the branching below
        if (!mstar || r.value < *mstar) mstar = r.value;
      }

      int id = static_cast<int>(part.classes.size());
      part.classes.emplace_back();
      {
        TreeClass<S>& cls = part.classes.back();
        cls.id = id;
        cls.component = ci;
        cls.parent = parent;
        cls.t_lo = t_lo;
        cls.bottom_closed = closed_lo;
        cls.arc_bottom = area;
        cls.x_ref = detail::argmax_in_arc(field, ci, area);
      }

      if (!mstar) {
        TreeClass<S>& cls = part.classes[static_cast<size_t>(id)];
        cls.t_hi = field.value(ci, cls.x_ref);
        cls.arc_top = field.e_segment(ci, cls.x_ref, cls.t_hi).arc;
        return id;
      }

      const S m = *mstar;
      std::vector<const detail::ExtremumRun<S>*> blockers;
      for (const auto& r : minima)
        if (r.value == m && arc_contains_point(comp, area, r.arc.start)) blockers.push_back(&r);
      Arc<S> slice = field.e_segment(ci, blockers.front()->arc.start, m).arc;
      {
        TreeClass<S>& cls = part.classes[static_cast<size_t>(id)];
        cls.t_hi = m;
        cls.arc_top = slice;
      }

      // Cut the slice at the blocker plateaus into child pieces.
      std::vector<Arc<S>> pieces;
      if (arc_is_full(comp, slice)) {
        std::sort(blockers.begin(), blockers.end(),
                  [](const auto* a, const auto* b) { return a->arc.start < b->arc.start; });
        for (size_t i = 0; i < blockers.size(); ++i) {
          const auto& cur = blockers[i]->arc;
          const auto& nxt = blockers[(i + 1) % blockers.size()]->arc;
          S start = detail::mod_length(cur.start + cur.len, comp.length);
          S len = (blockers.size() == 1) ? comp.length - cur.len
                                         : detail::mod_length(nxt.start - start, comp.length);
          if (len > S(0)) pieces.push_back(Arc<S>{std::move(start), std::move(len)});
        }
      } else {
        std::vector<std::pair<S, S>> offs;  // (offset of blocker start in the slice, blocker len)
        for (const auto* b : blockers) {
          S off = b->arc.start - slice.start;
          if (comp.kind == ComponentKind::Circle)
            off = detail::mod_length(std::move(off), comp.length);
          offs.emplace_back(std::move(off), b->arc.len);
        }
        std::sort(offs.begin(), offs.end());
        S cursor = S(0);
        auto piece_at = [&](const S& from, const S& to) {
          if (!(to > from)) return;
          S start = slice.start + from;
          if (comp.kind == ComponentKind::Circle)
            start = detail::mod_length(std::move(start), comp.length);
          pieces.push_back(Arc<S>{std::move(start), to - from});
        };
        for (const auto& [o, blen] : offs) {
          piece_at(cursor, o);
          cursor = o + blen;
        }
        piece_at(cursor, slice.len);
      }

      for (const Arc<S>& piece : pieces) {
        int child = build(piece, m, /*closed_lo=*/false, id);
        part.classes[static_cast<size_t>(id)].children.push_back(child);
      }
      return id;
    };

    int root = build(Arc<S>{S(0), comp.length}, field.xi(), /*closed_lo=*/true, -1);
    part.roots.push_back(root);
  }

  for (auto& c : part.classes)
    c.depth = (c.parent < 0) ? 0 : part.classes[static_cast<size_t>(c.parent)].depth + 1;
  return part;
}

// ---------------------------------------------------------------------------
// Thick/thin labeling: N = { (x,t) in E : len(e(x,t)) <= w_N(t) }, thin necks
// are the components of class ∩ N, exceptional flags evaluated as one-sided
// limits at the closed endpoints (exact for piecewise-linear data).

namespace detail {

// Slice length as a function of the level, on bands split at the breakpoint
// values inside the class: linear on each open band (a, b], left-continuous,
// with downward jumps only at band bottoms (plateau-exit levels).
template <class S>
struct LineOnBand {
  S a, b;    // open band (a, b]
  S c0, c1;  // len(t) = c0 + c1 * t on (a, b]
};

template <class S>
std::vector<LineOnBand<S>> slice_length_bands(const HypographPartition<S>& part, int id) {
  const TreeClass<S>& cls = part.classes.at(static_cast<size_t>(id));
  const Component<S>& comp = part.field.component(cls.component);
  std::vector<S> cand;
  for (const auto& bp : comp.pts) {
    if (!arc_contains_point(comp, cls.arc_bottom, bp.pos)) continue;
    if (bp.value > cls.t_lo && bp.value < cls.t_hi) cand.push_back(bp.value);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  cand.push_back(cls.t_hi);

  std::vector<LineOnBand<S>> out;
  S lo = cls.t_lo;
  auto len_at = [&](const S& t) { return part.class_slice(id, t).len; };
  for (const S& hi : cand) {
    if (!(hi > lo)) continue;
    S mid = (lo + hi) / S(2);
    S lm = len_at(mid), lh = len_at(hi);
    S c1 = (lh - lm) / (hi - mid);
    S c0 = lh - c1 * hi;
    out.push_back({lo, hi, std::move(c0), std::move(c1)});
    lo = hi;
  }
  return out;
}

// Sub-intervals of the open band (a, b] where lin(t) <= w(t).
template <class S>
void solve_band(const LineOnBand<S>& band, const ThresholdFn<S>& w, double tol,
                std::vector<LevelInterval<S>>& out) {
  auto lin = [&](const S& t) { return band.c0 + band.c1 * t; };
  auto emit = [&](S lo, S hi, bool loc, bool hic) {
    LevelInterval<S> iv{std::move(lo), std::move(hi), loc, hic};
    if (!iv.empty()) out.push_back(std::move(iv));
  };

  if (w.kind == ThresholdFn<S>::Kind::ScaledExp) {
    if constexpr (!scalar_traits<S>::exact) {
      // h(t) = lin(t) - scale*e^{-t} is strictly concave: {h <= 0} meets the
      // band in at most a prefix and a suffix.
      const double a = to_double(band.a), b = to_double(band.b);
      const double c0 = to_double(band.c0), c1 = to_double(band.c1);
      auto h = [&](double t) { return c0 + c1 * t - w.scale * std::exp(-t); };
      auto bisect = [&](double x0, double x1, bool rising) {
        for (int i = 0; i < 200; ++i) {
          double m = 0.5 * (x0 + x1);
          if (x1 - x0 < tol * (1.0 + std::abs(m))) break;
          if ((h(m) > 0.0) == rising)
            x1 = m;
          else
            x0 = m;
        }
        return 0.5 * (x0 + x1);
      };
      double tv = (c1 < 0.0) ? std::log(w.scale / (-c1)) : b;
      tv = std::min(std::max(tv, a), b);
      if (h(tv) <= 0.0) {  // maximum nonpositive: whole band
        emit(band.a, band.b, false, true);
        return;
      }
      if (h(a) <= 0.0) emit(band.a, S(bisect(a, tv, true)), false, true);
      if (h(b) <= 0.0) emit(S(bisect(tv, b, false)), band.b, true, true);
      return;
    } else {
      throw std::invalid_argument("scaled-exp threshold is not available in exact mode");
    }
  }

  // Piecewise-constant (or zero) threshold: split the band at the steps.
  std::vector<S> cuts{band.a};
  if (w.kind == ThresholdFn<S>::Kind::PiecewiseConst)
    for (const auto& [up, v] : w.steps)
      if (up > band.a && up < band.b) cuts.push_back(up);
  cuts.push_back(band.b);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const S& lo = cuts[i];
    const S& hi = cuts[i + 1];
    const S wv = w.value(hi);  // constant on (lo, hi]
    const S vlo = lin(lo), vhi = lin(hi);
    if (band.c1 == S(0)) {
      if (vhi <= wv) emit(lo, hi, false, true);
    } else if (band.c1 < S(0)) {  // decreasing: solution is t >= root
      if (vhi > wv) continue;
      if (vlo <= wv)
        emit(lo, hi, false, true);
      else
        emit((wv - band.c0) / band.c1, hi, true, true);
    } else {  // increasing: solution is t <= root
      if (vlo > wv) continue;
      if (vhi <= wv)
        emit(lo, hi, false, true);
      else
        emit(lo, (wv - band.c0) / band.c1, false, true);
    }
  }
}

template <class S>
std::vector<LevelInterval<S>> merge_intervals(std::vector<LevelInterval<S>> ivs) {
  std::sort(ivs.begin(), ivs.end(), [](const auto& x, const auto& y) {
    if (x.lo != y.lo) return x.lo < y.lo;
    return x.lo_closed && !y.lo_closed;
  });
  std::vector<LevelInterval<S>> out;
  for (auto& iv : ivs) {
    if (!out.empty()) {
      auto& last = out.back();
      bool touch = iv.lo < last.hi || (iv.lo == last.hi && (last.hi_closed || iv.lo_closed));
      if (touch) {
        if (iv.hi > last.hi || (iv.hi == last.hi && iv.hi_closed)) {
          last.hi = iv.hi;
          last.hi_closed = iv.hi_closed;
        }
        continue;
      }
    }
    out.push_back(std::move(iv));
  }
  return out;
}

// Subtract sorted disjoint removals from one interval.
template <class S>
std::vector<LevelInterval<S>> subtract_intervals(const LevelInterval<S>& range,
                                                 const std::vector<LevelInterval<S>>& removals) {
  std::vector<LevelInterval<S>> out;
  S lo = range.lo;
  bool loc = range.lo_closed;
  for (const auto& r : removals) {
    LevelInterval<S> piece{lo, r.lo, loc, !r.lo_closed};
    if (!piece.empty()) out.push_back(piece);
    lo = r.hi;
    loc = !r.hi_closed;
  }
  LevelInterval<S> piece{std::move(lo), range.hi, loc, range.hi_closed};
  if (!piece.empty()) out.push_back(std::move(piece));
  return out;
}

}  // namespace detail

template <class S>
HypographPartition<S> thick_thin_partition(const PiecewiseScalarField<S>& field,
                                           PartitionParams<S> params = {}) {
  HypographPartition<S> part = tree_partition(field, std::move(params));
  const auto& wn = part.params.width_n;
  part.thin_bands.assign(part.classes.size(), {});

  for (const auto& cls : part.classes) {
    std::vector<LevelInterval<S>> ivs;
    if (cls.bottom_closed && part.class_slice(cls.id, cls.t_lo).len <= wn.value(cls.t_lo))
      ivs.push_back({cls.t_lo, cls.t_lo, true, true});
    if (cls.t_lo != cls.t_hi)
      for (const auto& band : detail::slice_length_bands(part, cls.id))
        detail::solve_band(band, wn, part.params.tolerance, ivs);
    part.thin_bands[static_cast<size_t>(cls.id)] = detail::merge_intervals(std::move(ivs));
  }

  // Thin necks with the two-sided exceptional test, evaluated as limits.
  for (const auto& cls : part.classes) {
    for (const auto& band : part.thin_bands[static_cast<size_t>(cls.id)]) {
      ThinNeck<S> neck{cls.id, band, false};
      bool short_enough = (band.hi - band.lo) < part.params.exceptional_gap;

      bool lower_ok;
      if (band.lo > cls.t_lo)
        lower_ok = true;  // K slab just below within the class
      else if (cls.parent < 0)
        lower_ok = !band.lo_closed;  // K slab at the base level, nothing below otherwise
      else
        lower_ok = !part.in_thin_band(cls.parent, cls.t_lo);

      bool upper_ok;
      if (band.hi < cls.t_hi || !band.hi_closed)
        upper_ok = true;  // K slab just above within the class
      else if (cls.children.empty())
        upper_ok = false;
      else {
        upper_ok = false;
        S w_above = wn.value_right(cls.t_hi);
        for (int ch : cls.children)
          if (part.classes[static_cast<size_t>(ch)].arc_bottom.len > w_above) upper_ok = true;
      }

      neck.exceptional = short_enough && lower_ok && upper_ok;
      part.necks.push_back(std::move(neck));
    }
  }

  // Components of the thick part C = E minus non-exceptional thin necks.
  std::vector<std::vector<LevelInterval<S>>> pieces(part.classes.size());
  for (const auto& cls : part.classes) {
    std::vector<LevelInterval<S>> removals;
    for (const auto& n : part.necks)
      if (n.class_id == cls.id && !n.exceptional) removals.push_back(n.levels);
    LevelInterval<S> range{cls.t_lo, cls.t_hi, cls.bottom_closed, true};
    pieces[static_cast<size_t>(cls.id)] = detail::subtract_intervals(range, removals);
  }

  std::vector<int> offset(part.classes.size() + 1, 0);
  for (size_t i = 0; i < part.classes.size(); ++i)
    offset[i + 1] = offset[i] + static_cast<int>(pieces[i].size());
  std::vector<int> uf(static_cast<size_t>(offset.back()));
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (uf[static_cast<size_t>(v)] != v) {
      uf[static_cast<size_t>(v)] = uf[static_cast<size_t>(uf[static_cast<size_t>(v)])];
      v = uf[static_cast<size_t>(v)];
    }
    return v;
  };

  for (const auto& cls : part.classes) {
    if (cls.parent < 0) continue;
    const S& m = cls.t_lo;  // junction level == parent's t_hi
    const auto& pp = pieces[static_cast<size_t>(cls.parent)];
    const auto& cp = pieces[static_cast<size_t>(cls.id)];
    int pi = -1, cj = -1;
    for (size_t i = 0; i < pp.size(); ++i)
      if (pp[i].contains(m)) pi = static_cast<int>(i);
    for (size_t j = 0; j < cp.size(); ++j)
      if (cp[j].lo == m && !cp[j].lo_closed) cj = static_cast<int>(j);
    if (pi >= 0 && cj >= 0) {
      int a = find(offset[static_cast<size_t>(cls.parent)] + pi);
      int b = find(offset[static_cast<size_t>(cls.id)] + cj);
      uf[static_cast<size_t>(a)] = b;
    }
  }
  int count = 0;
  for (int v = 0; v < offset.back(); ++v)
    if (find(v) == v) ++count;
  part.thick_component_count = count;
  part.labeled = true;
  return part;
}

// ---------------------------------------------------------------------------
// Cardinality bounds report.

struct BoundEntry {
  std::string name;
  long long count = 0;
  double bound = 0.0;
  bool pass = false;
  bool structural = false;  // must always hold, independent of mu
};

struct BoundsReport {
  long long classes = 0;
  long long maximal = 0;
  long long necks_total = 0;
  long long necks_nonexceptional = 0;        // |G|
  long long necks_short_nonexceptional = 0;  // |H|
  long long thick_components = 0;
  std::vector<BoundEntry> entries;
  bool combinatorial_ok = true;
};

template <class S>
BoundsReport verify_cardinality_bounds(const HypographPartition<S>& part, double mu_total,
                                       double delta1) {
  if (!(mu_total > 0.0) || !(delta1 > 0.0))
    throw std::invalid_argument("mu_total and delta1 must be positive");
  if (!part.labeled) throw std::invalid_argument("partition must carry thick/thin labels");
  BoundsReport r;
  r.classes = part.class_count();
  r.maximal = part.maximal_count();
  r.necks_total = static_cast<long long>(part.necks.size());
  for (const auto& n : part.necks) {
    if (n.exceptional) continue;
    ++r.necks_nonexceptional;
    if (n.levels.hi - n.levels.lo < part.params.exceptional_gap) ++r.necks_short_nonexceptional;
  }
  r.thick_components = part.thick_component_count;

  double q = mu_total / delta1;
  auto add = [&](std::string name, long long count, double bound, bool structural) {
    bool pass = static_cast<double>(count) <= bound;
    r.entries.push_back({std::move(name), count, bound, pass, structural});
    if (structural && !pass) r.combinatorial_ok = false;
  };
  add("classes <= 2*maximal", r.classes, 2.0 * static_cast<double>(r.maximal), true);
  add("short_necks <= 2*classes", r.necks_short_nonexceptional,
      2.0 * static_cast<double>(r.classes), true);
  add("classes <= 2*mu/delta1", r.classes, 2.0 * q, false);
  add("thick_components <= 10*mu/delta1", r.thick_components, 10.0 * q, false);
  add("necks <= 12*mu/delta1", r.necks_nonexceptional, 12.0 * q, false);
  return r;
}

// ---------------------------------------------------------------------------
// Stable forests: every non-leaf keeps >= 2 children in the induced forest.
// A missing sibling is inserted from the ambient forest when one exists; a
// single-child vertex with no insertable sibling is contracted into its child
// (that happens only for chains the ambient order cannot branch, e.g. the
// full-circle slab class of a circle with a unique top).

inline std::vector<int> stable_forest_reduce(const std::vector<int>& ambient_parent,
                                             std::vector<int> selection) {
  const int n = static_cast<int>(ambient_parent.size());
  std::vector<std::vector<int>> ambient_children(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    int p = ambient_parent[static_cast<size_t>(v)];
    if (p >= 0) ambient_children[static_cast<size_t>(p)].push_back(v);
  }
  auto check_chain = [&](int v) {
    int steps = 0;
    for (int cur = v; cur >= 0; cur = ambient_parent[static_cast<size_t>(cur)])
      if (++steps > n) throw std::runtime_error("cycle detected in class order");
  };
  for (int v : selection) {
    if (v < 0 || v >= n) throw std::invalid_argument("selection id out of range");
    check_chain(v);
  }

  std::sort(selection.begin(), selection.end());
  selection.erase(std::unique(selection.begin(), selection.end()), selection.end());

  auto in_sel = [&](int v) { return std::binary_search(selection.begin(), selection.end(), v); };
  auto induced_parent = [&](int v) {
    for (int cur = ambient_parent[static_cast<size_t>(v)]; cur >= 0;
         cur = ambient_parent[static_cast<size_t>(cur)])
      if (in_sel(cur)) return cur;
    return -1;
  };

  while (true) {
    std::vector<int> child_count(static_cast<size_t>(n), 0);
    std::vector<int> lone_child(static_cast<size_t>(n), -1);
    for (int v : selection) {
      int p = induced_parent(v);
      if (p >= 0) {
        ++child_count[static_cast<size_t>(p)];
        lone_child[static_cast<size_t>(p)] = v;
      }
    }
    int bad = -1;
    for (int v : selection)
      if (child_count[static_cast<size_t>(v)] == 1) {
        bad = v;
        break;
      }
    if (bad < 0) break;

    int c = lone_child[static_cast<size_t>(bad)];
    std::vector<int> path;  // ambient path: parent(c), ..., bad
    for (int cur = ambient_parent[static_cast<size_t>(c)]; cur != bad;
         cur = ambient_parent[static_cast<size_t>(cur)]) {
      path.push_back(cur);
      if (static_cast<int>(path.size()) > n)
        throw std::runtime_error("cycle detected in class order");
    }
    path.push_back(bad);
    std::vector<char> on_path(static_cast<size_t>(n), 0);
    on_path[static_cast<size_t>(c)] = 1;
    for (int v : path) on_path[static_cast<size_t>(v)] = 1;

    int insert = -1;
    for (int b : path) {
      for (int d : ambient_children[static_cast<size_t>(b)])
        if (!on_path[static_cast<size_t>(d)] && (insert < 0 || d < insert)) insert = d;
      if (insert >= 0) break;
    }
    if (insert >= 0)
      selection.insert(std::lower_bound(selection.begin(), selection.end(), insert), insert);
    else
      selection.erase(std::lower_bound(selection.begin(), selection.end(), bad));
  }
  return selection;
}

template <class S>
std::vector<int> stable_forest_reduce(const HypographPartition<S>& part,
                                      const std::vector<int>& selection) {
  std::vector<int> parent(part.classes.size());
  for (const auto& c : part.classes) parent[static_cast<size_t>(c.id)] = c.parent;
  return stable_forest_reduce(parent, selection);
}

// ---------------------------------------------------------------------------
// Dense disk assignment (float instantiation: the radii involve e^{-t}).

struct DenseDisk {
  int component = 0;
  double center = 0.0;
  double level = 0.0;
  double radius = 0.0;  // e^{-t} r(x)
};

struct DiskAssignment {
  std::vector<DenseDisk> disks;
  bool disjointness_criterion = false;  // pairwise n-distance > 2(e^{-t1} + e^{-t2})
};

inline double min_over_arc(const PiecewiseScalarField<double>& f, int ci, const Arc<double>& arc) {
  const Component<double>& c = f.component(ci);
  double end = arc.start + arc.len;
  if (c.kind == ComponentKind::Circle) end = detail::mod_length(end, c.length);
  double m = std::min(f.value(ci, arc.start), f.value(ci, end));
  for (const auto& b : c.pts)
    if (arc_contains_point(c, arc, b.pos)) m = std::min(m, b.value);
  return m;
}

inline DiskAssignment dense_disk_assignment(const PiecewiseScalarField<double>& field,
                                            const RadiusProfile<double>& r,
                                            const std::vector<ESegment<double>>& segments) {
  DiskAssignment out;
  for (size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    const Component<double>& c = field.component(s.component);
    if (s.arc.len < 8.0 * std::exp(-s.level) - 1e-12)
      throw std::invalid_argument("segment too short for a dense disk");
    if (min_over_arc(field, s.component, s.arc) < s.level - 1e-9)
      throw std::invalid_argument("segment is not contained in the hypograph at its level");
    for (size_t j = 0; j < i; ++j)
      if (segments[j].component == s.component &&
          arc_overlap_length(c, segments[j].arc, s.arc) > 1e-12)
        throw std::invalid_argument("segments must be pairwise disjoint");
    double center = arc_midpoint(c, s.arc);
    out.disks.push_back(
        {s.component, center, s.level, std::exp(-s.level) * r.value(s.component, center)});
  }
  out.disjointness_criterion = true;
  for (size_t i = 0; i < out.disks.size() && out.disjointness_criterion; ++i)
    for (size_t j = i + 1; j < out.disks.size(); ++j) {
      if (out.disks[i].component != out.disks[j].component) continue;
      const Component<double>& c = field.component(out.disks[i].component);
      double d = std::abs(out.disks[i].center - out.disks[j].center);
      if (c.kind == ComponentKind::Circle) d = std::min(d, c.length - d);
      if (!(d > 2.0 * (std::exp(-out.disks[i].level) + std::exp(-out.disks[j].level)))) {
        out.disjointness_criterion = false;
        break;
      }
    }
  return out;
}

// Discretization of the thick part at levels t_i = xi + 2 i ln 3: for each
// thick slice pick a K-segment within ln 3 above it and chop that segment
// into pieces of n-length exactly 8 e^{-t}, reproducing the floor counts.
struct I2Segment {
  int level_index = 0;
  int slice_index = 0;
  double t = 0.0;          // level of the K-segment used
  double k_len = 0.0;      // n-length of that K-segment
  long long n_pieces = 0;  // floor(e^t k_len / 8)
  std::vector<ESegment<double>> pieces;
};

inline std::vector<I2Segment> i2_discretization(const HypographPartition<double>& part) {
  if (!part.labeled) throw std::invalid_argument("partition must carry thick/thin labels");
  std::vector<I2Segment> out;
  const double xi = part.field.xi();
  const double ln3 = std::log(3.0);
  const double top = part.field.max_value();
  int li = 0;
  for (double t = xi; t <= top; t += 2.0 * ln3, ++li) {
    int si = 0;
    for (const auto& cls : part.classes) {
      if (!part.level_in_class(cls, t)) continue;
      int owner = cls.id;
      double t_use = t;
      if (part.in_thin_band(cls.id, t)) {
        const ThinNeck<double>* neck = nullptr;
        for (const auto& n : part.necks)
          if (n.class_id == cls.id && n.levels.contains(t)) neck = &n;
        if (!neck || !neck->exceptional) continue;  // slab removed from C
        // Exceptional neck: a K-segment lives within ln 3 above it.
        const double cap = t + ln3;
        const double lo = neck->levels.hi;
        bool found = false;
        if (neck->levels.hi < cls.t_hi) {
          double next_n = cls.t_hi;
          for (const auto& b : part.thin_bands[static_cast<size_t>(cls.id)])
            if (b.lo > neck->levels.hi) next_n = std::min(next_n, b.lo);
          double hi = std::min(next_n, cap);
          if (hi > lo) {
            t_use = 0.5 * (lo + hi);
            found = true;
          }
        } else {
          for (int ch : cls.children) {
            const auto& cc = part.classes[static_cast<size_t>(ch)];
            double next_n = cc.t_hi;
            for (const auto& b : part.thin_bands[static_cast<size_t>(ch)])
              next_n = std::min(next_n, b.lo);
            double hi = std::min({next_n, cap, cc.t_hi});
            if (hi > lo) {
              owner = ch;
              t_use = 0.5 * (lo + hi);
              found = true;
              break;
            }
          }
        }
        if (!found) continue;
      }

      Arc<double> k_arc = part.class_slice(owner, t_use);
      double k_len = k_arc.len;
      long long n_pieces = static_cast<long long>(std::floor(std::exp(t_use) * k_len / 8.0));
      I2Segment seg{li, si++, t_use, k_len, n_pieces, {}};
      double piece_len = 8.0 * std::exp(-t_use);
      const Component<double>& c = part.field.component(cls.component);
      for (long long p = 0; p < n_pieces; ++p) {
        Arc<double> a{k_arc.start + static_cast<double>(p) * piece_len, piece_len};
        if (c.kind == ComponentKind::Circle) a.start = detail::mod_length(a.start, c.length);
        seg.pieces.push_back(ESegment<double>{cls.component, a, t_use, part.field.id()});
      }
      out.push_back(std::move(seg));
    }
  }
  return out;
}

}  // namespace rii
