#pragma once

// Brute-force uniform-grid oracle for the hypograph machinery: a row-by-row
// merge scan over cell-center samples, independent of the exact class
// construction. Levels and positions sit at cell centers so lattice
// breakpoints avoid grid lines.

#include "rii/partition.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace oracle {

struct GridNeck {
  int top_row = 0, bottom_row = 0;  // inclusive level-row indices
  bool exceptional = false;
};

struct GridTrack {
  int comp = 0;
  int top_row = -1, bottom_row = -1;
  std::vector<char> labels;  // 'N'/'K' per row, index 0 = top row
  int parent = -1;           // track this one merges into below; -1 at the base
  std::vector<int> children;
  double rep_x = 0.0, rep_t = 0.0;

  char label_at(int row) const { return labels[static_cast<size_t>(top_row - row)]; }
};

struct GridScan {
  double dt = 0.0;
  std::vector<double> dx;  // per component
  std::vector<GridTrack> tracks;
  std::vector<std::vector<std::pair<char, int>>> blocks;  // cleaned (label, rows), top-down
  std::vector<std::vector<GridNeck>> necks;               // per track, ascending levels

  int class_count() const { return static_cast<int>(tracks.size()); }
  int neck_count() const {
    int n = 0;
    for (const auto& v : necks) n += static_cast<int>(v.size());
    return n;
  }
  int exceptional_count() const {
    int n = 0;
    for (const auto& v : necks)
      for (const auto& k : v) n += k.exceptional ? 1 : 0;
    return n;
  }
};

struct Run {
  int start = 0, len = 0;
  bool full = false;
  int track = -1;
};

inline bool runs_overlap(const Run& a, const Run& b, int nx, bool circle) {
  if (a.full || b.full) return true;
  if (!circle) return a.start < b.start + b.len && b.start < a.start + a.len;
  int off = ((b.start - a.start) % nx + nx) % nx;
  if (off < a.len) return true;
  int off2 = ((a.start - b.start) % nx + nx) % nx;
  return off2 < b.len;
}

inline GridScan grid_scan(const rii::PiecewiseScalarField<double>& f,
                          const std::function<double(double)>& width_n, double exceptional_gap,
                          int nx, int nt) {
  GridScan out;
  const double xi = f.xi();
  double top = f.max_value();
  out.dt = (top - xi) / nt;

  for (int ci = 0; ci < f.component_count(); ++ci) {
    const auto& comp = f.component(ci);
    const bool circle = comp.kind == rii::ComponentKind::Circle;
    const double L = comp.length;
    const double dx = L / nx;
    out.dx.push_back(dx);

    std::vector<double> vals(static_cast<size_t>(nx));
    for (int i = 0; i < nx; ++i) vals[static_cast<size_t>(i)] = f.value(ci, (i + 0.5) * dx);

    std::vector<Run> prev;
    for (int row = nt - 1; row >= 0; --row) {
      const double t = xi + (row + 0.5) * out.dt;
      // Maximal runs of cells with f >= t.
      std::vector<Run> runs;
      {
        std::vector<char> mask(static_cast<size_t>(nx));
        int on = 0;
        for (int i = 0; i < nx; ++i) {
          mask[static_cast<size_t>(i)] = vals[static_cast<size_t>(i)] >= t;
          on += mask[static_cast<size_t>(i)];
        }
        if (on == nx) {
          runs.push_back({0, nx, true, -1});
        } else if (on > 0) {
          int start = 0;
          if (circle) {
            while (mask[static_cast<size_t>(start)]) ++start;  // some off cell exists
          }
          int i = start;
          int seen = 0;
          int run_begin = -1;
          while (seen <= nx) {
            int idx = circle ? (i % nx) : i;
            bool inside = (idx >= 0 && idx < nx) ? mask[static_cast<size_t>(idx)] : false;
            if (!circle && i >= nx) inside = false;
            if (inside && run_begin < 0) run_begin = i;
            if (!inside && run_begin >= 0) {
              runs.push_back({circle ? (run_begin % nx) : run_begin, i - run_begin, false, -1});
              run_begin = -1;
            }
            ++i;
            ++seen;
            if (!circle && i > nx) break;
          }
        }
      }

      for (auto& r : runs) {
        std::vector<int> parents;
        const Run* parent_run = nullptr;
        for (const auto& p : prev)
          if (runs_overlap(r, p, nx, circle)) {
            parents.push_back(p.track);
            parent_run = &p;
          }
        bool fresh = parents.empty() || parents.size() >= 2 ||
                     (circle && r.full && parent_run && !parent_run->full);
        if (!fresh) {
          r.track = parents[0];
        } else {
          r.track = static_cast<int>(out.tracks.size());
          GridTrack tk;
          tk.comp = ci;
          tk.top_row = row;
          int mid = r.full ? nx / 2 : (r.start + r.len / 2) % nx;
          tk.rep_x = (mid + 0.5) * dx;
          tk.rep_t = t;
          out.tracks.push_back(std::move(tk));
          for (int pt : parents) {
            out.tracks[static_cast<size_t>(pt)].parent = r.track;
            out.tracks[static_cast<size_t>(r.track)].children.push_back(pt);
          }
        }
        double len = r.full ? L : r.len * dx;
        GridTrack& tk = out.tracks[static_cast<size_t>(r.track)];
        tk.labels.push_back(len <= width_n(t) ? 'N' : 'K');
        tk.bottom_row = row;
        // Track tops overshoot the true branching level by a few rows while
        // the separating dip is narrower than a cell; anchor the class
        // representative safely below the top.
        if (tk.labels.size() == 9) {
          int mid = r.full ? nx / 2 : (r.start + r.len / 2) % nx;
          tk.rep_x = (mid + 0.5) * dx;
          tk.rep_t = t;
        }
      }
      prev = std::move(runs);
    }
  }

  // Label blocks per track, absorbing sub-resolution flicker at the N/K
  // crossing rows (true bands are conditioned to span many rows).
  const int min_block = 6;
  auto blocks_of = [&](const GridTrack& tk) {
    std::vector<std::pair<char, int>> blocks;  // (label, rows), top-down
    for (char c : tk.labels) {
      if (!blocks.empty() && blocks.back().first == c)
        ++blocks.back().second;
      else
        blocks.push_back({c, 1});
    }
    while (blocks.size() > 1) {
      size_t shortest = 0;
      for (size_t i = 1; i < blocks.size(); ++i)
        if (blocks[i].second < blocks[shortest].second) shortest = i;
      if (blocks[shortest].second >= min_block) break;
      if (shortest == 0) {
        blocks[1].second += blocks[0].second;
        blocks.erase(blocks.begin());
      } else if (shortest + 1 == blocks.size()) {
        blocks[shortest - 1].second += blocks[shortest].second;
        blocks.pop_back();
      } else {
        blocks[shortest - 1].second += blocks[shortest].second + blocks[shortest + 1].second;
        blocks.erase(blocks.begin() + static_cast<long>(shortest),
                     blocks.begin() + static_cast<long>(shortest) + 2);
      }
    }
    return blocks;
  };

  for (const auto& tk : out.tracks) out.blocks.push_back(blocks_of(tk));

  out.necks.assign(out.tracks.size(), {});
  for (size_t ti = 0; ti < out.tracks.size(); ++ti) {
    const GridTrack& tk = out.tracks[ti];
    const auto& blocks = out.blocks[ti];
    int row = tk.top_row;
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
      const auto& [label, rows] = blocks[bi];
      if (label != 'N') {
        row -= rows;
        continue;
      }
      GridNeck neck;
      neck.top_row = row;
      neck.bottom_row = row - rows + 1;
      double height = static_cast<double>(rows) * out.dt;

      bool upper;
      if (bi > 0) {
        upper = true;  // preceding (higher) block is K
      } else {
        upper = false;
        for (int ch : tk.children)
          if (out.blocks[static_cast<size_t>(ch)].back().first == 'K') upper = true;
      }
      bool lower;
      if (bi + 1 < blocks.size()) {
        lower = true;
      } else if (tk.parent >= 0) {
        lower = out.blocks[static_cast<size_t>(tk.parent)].front().first == 'K';
      } else {
        lower = false;
      }
      neck.exceptional = height < exceptional_gap && upper && lower;
      out.necks[ti].push_back(neck);
      row -= rows;
    }
    // Ascending level order, matching the exact partition's band order.
    std::reverse(out.necks[ti].begin(), out.necks[ti].end());
  }
  return out;
}

// Bottom-up label pattern of one track, e.g. "KNK".
inline std::string track_pattern(const GridScan& scan, int track) {
  std::string pat;
  const auto& blocks = scan.blocks[static_cast<size_t>(track)];
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) pat.push_back(it->first);
  return pat;
}

// ---------------------------------------------------------------------------
// Conditioning: the uniform grid can only be compared on fields whose
// features span several cells. All checks are phrased against the exact
// partition, so rejection is deterministic.

inline bool well_conditioned(const rii::HypographPartition<double>& part, int nx, int nt) {
  const auto& f = part.field;
  const double xi = f.xi();
  const double dt = (f.max_value() - xi) / nt;
  const auto& wn = part.params.width_n;
  const double gap = part.params.exceptional_gap;

  for (const auto& cls : part.classes) {
    const double dx = f.component(cls.component).length / nx;
    if (cls.t_hi - cls.t_lo < 16.0 * dt) return false;
    if (cls.arc_bottom.len < 4.0 * dx) return false;

    // Simultaneous branchings (several minima at exactly the same level) are
    // one event for the exact machinery but resolve row by row on the grid.
    if (!cls.children.empty()) {
      bool full_top = rii::arc_is_full(f.component(cls.component), cls.arc_top);
      if (full_top && cls.children.size() >= 2) return false;
      if (cls.children.size() >= 3) return false;
    }

    // Leaf visibility near the peak.
    if (cls.children.empty()) {
      if (part.class_slice(cls.id, cls.t_hi - 6.0 * dt).len < 4.0 * dx) return false;
    } else {
      // Sibling separation just above the branching.
      const double t = cls.t_hi + 6.0 * dt;
      std::vector<rii::Arc<double>> arcs;
      for (int ch : cls.children) {
        const auto& cc = part.classes[static_cast<size_t>(ch)];
        if (t > cc.t_hi) return false;
        arcs.push_back(part.class_slice(ch, t));
      }
      const auto& comp = f.component(cls.component);
      for (size_t i = 0; i < arcs.size(); ++i)
        for (size_t j = i + 1; j < arcs.size(); ++j)
          if (rii::arc_distance(comp, arcs[i], arcs[j]) < 3.0 * dx) return false;
      if (arcs.size() == 1 && comp.length - arcs[0].len < 3.0 * dx) return false;
    }

    // Label bands tall enough and sharply resolved at their boundaries.
    rii::LevelInterval<double> range{cls.t_lo, cls.t_hi, cls.bottom_closed, true};
    const auto& thin = part.thin_bands[static_cast<size_t>(cls.id)];
    auto thick = rii::detail::subtract_intervals(range, thin);
    std::vector<rii::LevelInterval<double>> bands = thin;
    bands.insert(bands.end(), thick.begin(), thick.end());
    for (const auto& b : bands) {
      if (b.hi - b.lo < 16.0 * dt) return false;
      for (double tau : {b.lo, b.hi}) {
        if (tau <= cls.t_lo || tau >= cls.t_hi) continue;  // class boundaries handled above
        for (double delta : {-6.0 * dt, 6.0 * dt}) {
          double t = tau + delta;
          if (t <= cls.t_lo || t > cls.t_hi) continue;
          double len = part.class_slice(cls.id, t).len;
          if (std::abs(len - wn.value(t)) < 4.0 * dx) return false;
        }
      }
    }
    for (const auto& b : thin)
      if (std::abs((b.hi - b.lo) - gap) < 8.0 * dt) return false;
  }
  return true;
}

// Empty string when the exact partition and the grid scan agree on class
// count, per-class neck counts, exceptional flags and band patterns.
inline std::string compare_partitions(const rii::HypographPartition<double>& part,
                                      const GridScan& scan) {
  if (scan.class_count() != part.class_count())
    return "class count: grid " + std::to_string(scan.class_count()) + " vs exact " +
           std::to_string(part.class_count());
  const double xi = part.field.xi();
  std::vector<int> matched(part.classes.size(), -1);
  for (int ti = 0; ti < scan.class_count(); ++ti) {
    const auto& tk = scan.tracks[static_cast<size_t>(ti)];
    int cid;
    try {
      cid = part.class_of(tk.comp, tk.rep_x, std::max(tk.rep_t, xi));
    } catch (const std::exception& e) {
      return std::string("representative lookup failed: ") + e.what();
    }
    if (matched[static_cast<size_t>(cid)] != -1)
      return "two tracks matched class " + std::to_string(cid);
    matched[static_cast<size_t>(cid)] = ti;
  }
  for (const auto& cls : part.classes) {
    int ti = matched[static_cast<size_t>(cls.id)];
    if (ti < 0) return "class " + std::to_string(cls.id) + " unmatched";

    // Exact band pattern, ascending.
    rii::LevelInterval<double> range{cls.t_lo, cls.t_hi, cls.bottom_closed, true};
    const auto& thin = part.thin_bands[static_cast<size_t>(cls.id)];
    auto thick = rii::detail::subtract_intervals(range, thin);
    std::vector<std::pair<double, char>> bands;
    for (const auto& b : thin) bands.push_back({b.lo, 'N'});
    for (const auto& b : thick) bands.push_back({b.lo, 'K'});
    std::sort(bands.begin(), bands.end());
    std::string exact_pat;
    for (const auto& [lo, c] : bands) exact_pat.push_back(c);
    std::string grid_pat = track_pattern(scan, ti);
    if (exact_pat != grid_pat)
      return "class " + std::to_string(cls.id) + " pattern: grid " + grid_pat + " vs exact " +
             exact_pat;

    std::vector<bool> exact_flags;
    for (const auto& n : part.necks)
      if (n.class_id == cls.id) exact_flags.push_back(n.exceptional);
    const auto& gnecks = scan.necks[static_cast<size_t>(ti)];
    if (exact_flags.size() != gnecks.size())
      return "class " + std::to_string(cls.id) + " neck count: grid " +
             std::to_string(gnecks.size()) + " vs exact " + std::to_string(exact_flags.size());
    for (size_t i = 0; i < exact_flags.size(); ++i)
      if (exact_flags[i] != gnecks[i].exceptional)
        return "class " + std::to_string(cls.id) + " exceptional flag " + std::to_string(i);
  }
  return {};
}

// Single-level brute-force segment finder (for the e_segment examples).
inline std::pair<double, double> grid_segment(const rii::PiecewiseScalarField<double>& f, int ci,
                                              double x, double t, int cells) {
  const auto& comp = f.component(ci);
  const double L = comp.length;
  const double dx = L / cells;
  const bool circle = comp.kind == rii::ComponentKind::Circle;
  auto at = [&](int i) {
    double p = circle ? std::fmod((i + 0.5) * dx, L) : std::min((i + 0.5) * dx, L);
    return f.value(ci, p);
  };
  int i0 = static_cast<int>(x / dx);
  int lo = i0, hi = i0;
  while (true) {
    int nxt = hi + 1;
    if (!circle && nxt >= cells) break;
    if (circle && nxt - lo >= cells) return {0.0, L};
    if (at(circle ? nxt % cells : nxt) < t) break;
    hi = nxt;
  }
  while (true) {
    int nxt = lo - 1;
    if (!circle && nxt < 0) break;
    if (circle && hi - nxt >= cells) return {0.0, L};
    if (at(circle ? ((nxt % cells) + cells) % cells : nxt) < t) break;
    lo = nxt;
  }
  int lo_idx = circle ? ((lo % cells) + cells) % cells : std::max(0, lo);
  double left = lo_idx * dx;
  double len = (hi - lo + 1) * dx;
  return {left, std::min(len, L)};
}

}  // namespace oracle
