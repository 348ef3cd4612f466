#pragma once

#include "rii/field.hpp"

#include <random>

namespace rii {

// Seeded generator for random piecewise-linear fields on exact lattices.
// Positions live on {j * length / pos_den}, values on xi + {j / val_den};
// plateaus and repeated values are allowed on purpose.
struct FieldGenOptions {
  int min_breakpoints = 3;
  int max_breakpoints = 20;
  int max_components = 2;
  bool circles = true;
  bool intervals = true;
  long long pos_den = 720;
  long long val_den = 64;
  long long val_min_num = 8;    // interior values start at xi + val_min_num/val_den
  long long val_max_num = 128;
  bool endpoints_at_xi = true;  // interval endpoints may sit at the base level
  Rat xi = Rat(0);
};

namespace detail {
// Thin deterministic helpers over mt19937_64; the std distributions are not
// pinned across standard library implementations.
inline std::uint64_t gen_below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }
inline bool gen_coin(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}
}  // namespace detail

inline PiecewiseScalarField<Rat> random_field(std::uint64_t seed, const FieldGenOptions& opt = {}) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int ncomp = 1 + static_cast<int>(detail::gen_below(rng, static_cast<std::uint64_t>(
                                                                    opt.max_components)));
  std::vector<Component<Rat>> comps;
  for (int c = 0; c < ncomp; ++c) {
    Component<Rat> comp;
    bool circle = opt.circles && (!opt.intervals || detail::gen_coin(rng, 0.5));
    comp.kind = circle ? ComponentKind::Circle : ComponentKind::Interval;
    switch (detail::gen_below(rng, 3)) {
      case 0: comp.length = Rat(1); break;
      case 1: comp.length = Rat(2); break;
      default: comp.length = make_rat(3, 2); break;
    }

    int want = opt.min_breakpoints +
               static_cast<int>(detail::gen_below(
                   rng, static_cast<std::uint64_t>(opt.max_breakpoints - opt.min_breakpoints + 1)));
    std::vector<long long> idx;
    if (!circle) {
      idx.push_back(0);
      idx.push_back(opt.pos_den);
    }
    while (static_cast<int>(idx.size()) < want) {
      long long j = static_cast<long long>(detail::gen_below(
          rng, static_cast<std::uint64_t>(circle ? opt.pos_den : opt.pos_den + 1)));
      if (std::find(idx.begin(), idx.end(), j) == idx.end()) idx.push_back(j);
    }
    std::sort(idx.begin(), idx.end());

    auto value = [&]() {
      long long span = opt.val_max_num - opt.val_min_num + 1;
      long long v = opt.val_min_num +
                    static_cast<long long>(detail::gen_below(rng, static_cast<std::uint64_t>(span)));
      return opt.xi + make_rat(v, opt.val_den);
    };
    for (long long j : idx) {
      Rat pos = make_rat(j, opt.pos_den) * comp.length;
      comp.pts.push_back({std::move(pos), value()});
    }
    if (!circle && opt.endpoints_at_xi) {
      if (detail::gen_coin(rng, 0.4)) comp.pts.front().value = opt.xi;
      if (detail::gen_coin(rng, 0.4)) comp.pts.back().value = opt.xi;
    }
    comps.push_back(std::move(comp));
  }
  return PiecewiseScalarField<Rat>(std::move(comps), opt.xi);
}

inline PiecewiseScalarField<double> field_to_double(const PiecewiseScalarField<Rat>& f) {
  std::vector<Component<double>> comps;
  for (const auto& c : f.components()) {
    Component<double> dc;
    dc.kind = c.kind;
    dc.length = to_double(c.length);
    for (const auto& b : c.pts) dc.pts.push_back({to_double(b.pos), to_double(b.value)});
    comps.push_back(std::move(dc));
  }
  return PiecewiseScalarField<double>(std::move(comps), to_double(f.xi()));
}

}  // namespace rii
