#pragma once

#include "rii/partition.hpp"

#include <optional>

namespace rii {

template <class S>
struct Fill {
  int component = 0;
  Arc<S> arc;  // closure of the gap at the crossing level
  S level{};
};

// Per-component report for the two admissibility conditions: the component is
// long enough for its own top level (w_E(max g) <= len) and its top level
// clears the base level. Reported, never enforced.
struct ComponentCheck {
  bool long_ok = true;
  bool hot_ok = true;
};

template <class S>
struct ThickenedHypograph {
  PiecewiseScalarField<S> field;  // f_{dE}: hypograph boundary after thickening
  std::vector<ComponentCheck> checks;
  std::vector<Fill<S>> fills;
};

namespace detail {

// Valley (gap) merge tree of one component: leaves are local minimum runs
// (boundary runs included on intervals), internal nodes sit at interior local
// maximum runs where gaps coalesce, the root gap swallows the component.
template <class S>
struct ValleyNode {
  S rep{};                // position of a deepest minimum inside the gap
  S birth{};              // leaf: min value; internal: merge level of its children
  std::optional<S> top;   // level where this gap merges into its parent; root: none
  std::vector<int> children;
};

template <class S>
struct ValleyTree {
  std::vector<ValleyNode<S>> nodes;
  int root = -1;
};

template <class S>
ValleyTree<S> build_valley_tree(const PiecewiseScalarField<S>& g, int ci) {
  const Component<S>& comp = g.component(ci);
  auto maxima = extremum_runs(comp, /*minima=*/false);
  std::erase_if(maxima, [](const auto& r) { return !r.interior; });
  auto minima = extremum_runs(comp, /*minima=*/true);

  ValleyTree<S> tree;

  // area: closure of the gap's maximal extent; top: merge level into parent.
  std::function<int(Arc<S>, std::optional<S>)> build = [&](Arc<S> area,
                                                           std::optional<S> top) -> int {
    std::optional<S> mstar;  // highest interior maximum strictly inside the area
    for (const auto& r : maxima) {
      if (!arc_contains_point(comp, area, r.arc.start)) continue;
      if (top && r.value >= *top) continue;  // the bounding ridge itself
      if (!mstar || r.value > *mstar) mstar = r.value;
    }

    int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    {
      ValleyNode<S>& node = tree.nodes.back();
      node.top = top;
      // Deepest minimum run inside the area anchors the gap at every level.
      std::optional<S> best;
      S best_pos{};
      for (const auto& r : minima) {
        if (!arc_contains_point(comp, area, r.arc.start)) continue;
        if (!best || r.value < *best) {
          best = r.value;
          best_pos = r.arc.start;
        }
      }
      if (best) {
        node.rep = best_pos;
        node.birth = *best;
      } else {
        node.rep = comp.pts.front().pos;  // constant component
        node.birth = g.min_value(ci);
      }
    }

    if (!mstar) return id;

    // Children: components of {g < M*} inside the area, one per surviving
    // minimum, deduplicated.
    tree.nodes[static_cast<size_t>(id)].birth = *mstar;
    std::vector<Arc<S>> areas;
    for (const auto& r : minima) {
      if (!arc_contains_point(comp, area, r.arc.start)) continue;
      if (r.value >= *mstar) continue;
      Arc<S> gap = g.gap_through(ci, r.arc.start, *mstar, /*weak=*/false);
      bool seen = false;
      for (const auto& a : areas)
        if (arc_equal(comp, a, gap)) seen = true;
      if (!seen) areas.push_back(gap);
    }
    for (const Arc<S>& a : areas) {
      int child = build(a, *mstar);
      tree.nodes[static_cast<size_t>(id)].children.push_back(child);
    }
    return id;
  };

  tree.root = build(Arc<S>{S(0), comp.length}, std::nullopt);
  return tree;
}

// Finds sup{ t in (lo, hi] : lin(t) <= w(t) } given the condition holds just
// above lo and fails at hi; lin is the linear gap length on the band.
template <class S>
S crossing_on_band(const S& lo, const S& hi, const S& c0, const S& c1, const ThresholdFn<S>& w,
                   double tol) {
  auto lin = [&](const S& t) { return c0 + c1 * t; };
  if (w.kind == ThresholdFn<S>::Kind::ScaledExp) {
    if constexpr (!scalar_traits<S>::exact) {
      double a = to_double(lo), b = to_double(hi);
      double cc0 = to_double(c0), cc1 = to_double(c1);
      auto h = [&](double t) { return cc0 + cc1 * t - w.scale * std::exp(-t); };
      if (h(a) > 0.0) return lo;  // flips across the jump at lo
      for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (a + b);
        if (b - a < tol * (1.0 + std::abs(m))) break;
        if (h(m) > 0.0)
          b = m;
        else
          a = m;
      }
      return S(0.5 * (a + b));
    } else {
      throw std::invalid_argument("scaled-exp threshold is not available in exact mode");
    }
  }
  // Piecewise-constant: walk the steps inside the band.
  std::vector<S> cuts{lo};
  if (w.kind == ThresholdFn<S>::Kind::PiecewiseConst)
    for (const auto& [up, v] : w.steps)
      if (up > lo && up < hi) cuts.push_back(up);
  cuts.push_back(hi);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const S& a = cuts[i];
    const S& b = cuts[i + 1];
    S wv = w.value(b);
    if (lin(b) <= wv) continue;       // still true at the sub-band top
    if (lin(a) > wv) return a;        // flipped across the jump at a
    if (c1 == S(0)) return a;         // constant above threshold: flip at a
    return (wv - c0) / c1;
  }
  return hi;
}

}  // namespace detail

// Thickening: fills every gap of the hypograph of g that stays shorter than
// the width threshold, producing the continuous boundary function f_{dE}.
template <class S>
ThickenedHypograph<S> thickened_hypograph(const PiecewiseScalarField<S>& g,
                                          const RadiusProfile<S>& r,
                                          const PartitionParams<S>& params) {
  if (g.xi() != params.t_min)
    throw std::invalid_argument("field base level must equal t_min");
  if (static_cast<int>(r.components().size()) != g.component_count())
    throw std::invalid_argument("radius profile does not match the field domain");
  const ThresholdFn<S>& w = params.width_e;

  ThickenedHypograph<S> out;
  for (int ci = 0; ci < g.component_count(); ++ci) {
    const Component<S>& comp = g.component(ci);
    ComponentCheck check;
    check.long_ok = !(w.value(g.max_value(ci)) > comp.length);
    check.hot_ok = g.max_value(ci) > g.xi();
    out.checks.push_back(check);

    auto tree = detail::build_valley_tree(g, ci);

    // Condition "gap length <= w" along one gap node; monotone along chains.
    auto strict_len = [&](const detail::ValleyNode<S>& n, const S& t) {
      return g.gap_through(ci, n.rep, t, /*weak=*/false).len;
    };
    auto weak_len = [&](const detail::ValleyNode<S>& n, const S& t) {
      return g.gap_through(ci, n.rep, t, /*weak=*/true).len;
    };

    std::function<bool(int)> process = [&](int idx) -> bool {
      const detail::ValleyNode<S>& node = tree.nodes[static_cast<size_t>(idx)];
      if (node.top) {
        if (strict_len(node, *node.top) <= w.value(*node.top)) return true;
      }
      // Condition at the bottom limit (weak gap at the birth level).
      bool bottom_true = weak_len(node, node.birth) <= w.value_right(node.birth);
      if (!bottom_true) {
        for (int ch : node.children)
          if (process(ch)) {
            const auto& cn = tree.nodes[static_cast<size_t>(ch)];
            Arc<S> arc = g.gap_through(ci, cn.rep, node.birth, /*weak=*/false);
            if (arc.len > S(0))
              out.fills.push_back(Fill<S>{ci, std::move(arc), node.birth});
          }
        return false;
      }

      // Crossing strictly inside this node: scan bands of breakpoint values.
      std::vector<S> cand;
      for (const auto& bp : comp.pts)
        if (bp.value > node.birth && (!node.top || bp.value < *node.top)) cand.push_back(bp.value);
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      if (node.top) cand.push_back(*node.top);

      S t_star{};
      bool solved = false;
      S lo = node.birth;
      for (const S& hi : cand) {
        if (!(hi > lo)) continue;
        S mid = (lo + hi) / S(2);
        S lm = strict_len(node, mid), lh = strict_len(node, hi);
        S c1 = (lh - lm) / (hi - mid);
        S c0 = lh - c1 * hi;
        if (lh > w.value(hi)) {
          t_star = detail::crossing_on_band(lo, hi, c0, c1, w, params.tolerance);
          solved = true;
          break;
        }
        lo = hi;
      }
      if (!solved) {
        // Root tail: above every breakpoint value the gap is the whole
        // component, of constant length.
        if (node.top) throw std::logic_error("gap condition did not flip inside the node");
        const S& full = comp.length;
        if (w.kind == ThresholdFn<S>::Kind::ScaledExp) {
          if constexpr (!scalar_traits<S>::exact)
            t_star = std::max(S(std::log(w.scale / to_double(full))), lo);
        } else if (w.kind == ThresholdFn<S>::Kind::PiecewiseConst) {
          if (!(w.tail < full))
            throw std::invalid_argument("threshold never crossed: thickening is unbounded");
          // Last level whose (left-continuous) threshold still admits the
          // full component; thresholds are non-increasing.
          t_star = lo;
          for (const auto& [up, v] : w.steps)
            if (up > lo && v >= full) t_star = up;
        } else {
          t_star = lo;
        }
      }
      if (t_star > node.birth) {
        Arc<S> arc = g.gap_through(ci, node.rep, t_star, /*weak=*/false);
        if (arc.len > S(0)) out.fills.push_back(Fill<S>{ci, std::move(arc), t_star});
      }
      return false;
    };
    process(tree.root);
  }

  // Splice the fills into the breakpoint lists.
  std::vector<Component<S>> comps;
  for (int ci = 0; ci < g.component_count(); ++ci) {
    const Component<S>& comp = g.component(ci);
    Component<S> nc;
    nc.kind = comp.kind;
    nc.length = comp.length;

    std::vector<const Fill<S>*> fills;
    bool whole = false;
    S whole_level{};
    for (const auto& f : out.fills)
      if (f.component == ci) {
        if (arc_is_full(comp, f.arc) ||
            (comp.kind == ComponentKind::Interval && f.arc.len == comp.length)) {
          whole = true;
          whole_level = f.level;
        }
        fills.push_back(&f);
      }

    if (whole) {
      if (comp.kind == ComponentKind::Circle)
        nc.pts = {{S(0), whole_level}};
      else
        nc.pts = {{S(0), whole_level}, {comp.length, whole_level}};
      comps.push_back(std::move(nc));
      continue;
    }

    std::vector<Breakpoint<S>> pts;
    for (const auto& bp : comp.pts) {
      bool covered = false;
      for (const auto* f : fills)
        if (arc_contains_point(comp, f->arc, bp.pos)) covered = true;
      if (!covered) pts.push_back(bp);
    }
    for (const auto* f : fills) {
      S s = f->arc.start;
      S e = f->arc.start + f->arc.len;
      if (comp.kind == ComponentKind::Circle) e = detail::mod_length(std::move(e), comp.length);
      pts.push_back({std::move(s), f->level});
      pts.push_back({std::move(e), f->level});
    }
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.pos < b.pos; });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) { return a.pos == b.pos; }),
              pts.end());
    nc.pts = std::move(pts);
    comps.push_back(std::move(nc));
  }

  out.field = PiecewiseScalarField<S>(std::move(comps), g.xi());
  return out;
}

}  // namespace rii
