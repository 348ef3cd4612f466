#pragma once

#include "rii/annulus.hpp"
#include "rii/partition.hpp"
#include "rii/projective.hpp"

#include <json.hpp>

#include <string>

namespace rii {

using Json = nlohmann::json;

// Rationals travel as [num, den] integer pairs; values outside int64 fall
// back to a "num/den" string. Doubles are encoded by their exact dyadic
// decomposition, so the schema is uniform across both instantiations.
template <class S>
Json scalar_to_json(const S& v);

template <class S>
S scalar_from_json(const Json& j);

template <>
inline Json scalar_to_json<Rat>(const Rat& v) {
  const BigInt num = boost::multiprecision::numerator(v);
  const BigInt den = boost::multiprecision::denominator(v);
  static const BigInt lo = BigInt(std::numeric_limits<std::int64_t>::min());
  static const BigInt hi = BigInt(std::numeric_limits<std::int64_t>::max());
  if (num >= lo && num <= hi && den <= hi)
    return Json::array({static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)});
  return num.str() + "/" + den.str();
}

template <>
inline Json scalar_to_json<double>(const double& v) {
  std::int64_t num = 0, den = 1;
  double_to_fraction(v, num, den);
  return Json::array({num, den});
}

namespace detail {
inline Rat rat_from_json(const Json& j) {
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
      throw std::invalid_argument("rational must be an [num, den] integer pair");
    return make_rat(j[0].get<std::int64_t>(), j[1].get<std::int64_t>());
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    auto slash = s.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("bad rational string");
    Rat v(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    return v;
  }
  if (j.is_number()) return scalar_traits<Rat>::from_double(j.get<double>());
  throw std::invalid_argument("bad rational value");
}
}  // namespace detail

template <>
inline Rat scalar_from_json<Rat>(const Json& j) {
  return detail::rat_from_json(j);
}

template <>
inline double scalar_from_json<double>(const Json& j) {
  if (j.is_number()) return j.get<double>();
  return to_double(detail::rat_from_json(j));
}

// ---------------------------------------------------------------------------
// Field documents: {components: [{kind, length, breakpoints: [[pos_num,
// pos_den, val_num, val_den], ...]}], xi: [num, den]}.

template <class S>
Json field_to_json(const PiecewiseScalarField<S>& f) {
  Json out;
  out["xi"] = scalar_to_json<S>(f.xi());
  out["components"] = Json::array();
  for (const auto& c : f.components()) {
    Json jc;
    jc["kind"] = (c.kind == ComponentKind::Circle) ? "circle" : "interval";
    jc["length"] = scalar_to_json<S>(c.length);
    Json bps = Json::array();
    for (const auto& b : c.pts) {
      Json p = scalar_to_json<S>(b.pos);
      Json v = scalar_to_json<S>(b.value);
      if (p.is_array() && v.is_array())
        bps.push_back(Json::array({p[0], p[1], v[0], v[1]}));
      else
        bps.push_back(Json::array({p, v}));
    }
    jc["breakpoints"] = std::move(bps);
    out["components"].push_back(std::move(jc));
  }
  return out;
}

template <class S>
PiecewiseScalarField<S> field_from_json(const Json& j) {
  if (!j.contains("components") || !j.contains("xi"))
    throw std::invalid_argument("field document needs components and xi");
  S xi = scalar_from_json<S>(j.at("xi"));
  std::vector<Component<S>> comps;
  for (const auto& jc : j.at("components")) {
    Component<S> c;
    const std::string kind = jc.at("kind").get<std::string>();
    if (kind == "circle")
      c.kind = ComponentKind::Circle;
    else if (kind == "interval")
      c.kind = ComponentKind::Interval;
    else
      throw std::invalid_argument("component kind must be circle or interval");
    c.length = scalar_from_json<S>(jc.at("length"));
    for (const auto& jb : jc.at("breakpoints")) {
      if (!jb.is_array()) throw std::invalid_argument("breakpoint must be an array");
      if (jb.size() == 4) {
        c.pts.push_back({scalar_from_json<S>(Json::array({jb[0], jb[1]})),
                         scalar_from_json<S>(Json::array({jb[2], jb[3]}))});
      } else if (jb.size() == 2) {
        c.pts.push_back({scalar_from_json<S>(jb[0]), scalar_from_json<S>(jb[1])});
      } else {
        throw std::invalid_argument("breakpoint must be [pos_num, pos_den, val_num, val_den]");
      }
    }
    comps.push_back(std::move(c));
  }
  return PiecewiseScalarField<S>(std::move(comps), std::move(xi));
}

// ---------------------------------------------------------------------------
// Partition documents: classes with slab lists, forest as parent pointers,
// thin necks with exceptional flags, optional bounds report.

inline Json bounds_to_json(const BoundsReport& r) {
  Json out;
  out["classes"] = r.classes;
  out["maximal"] = r.maximal;
  out["necks_total"] = r.necks_total;
  out["necks_nonexceptional"] = r.necks_nonexceptional;
  out["necks_short_nonexceptional"] = r.necks_short_nonexceptional;
  out["thick_components"] = r.thick_components;
  out["combinatorial_ok"] = r.combinatorial_ok;
  out["entries"] = Json::array();
  for (const auto& e : r.entries)
    out["entries"].push_back({{"name", e.name},
                              {"count", e.count},
                              {"bound", e.bound},
                              {"pass", e.pass},
                              {"structural", e.structural}});
  return out;
}

template <class S>
Json arc_to_json(const Arc<S>& a) {
  return {{"start", scalar_to_json<S>(a.start)}, {"len", scalar_to_json<S>(a.len)}};
}

template <class S>
Json interval_to_json(const LevelInterval<S>& iv) {
  return {{"lo", scalar_to_json<S>(iv.lo)},
          {"hi", scalar_to_json<S>(iv.hi)},
          {"lo_closed", iv.lo_closed},
          {"hi_closed", iv.hi_closed}};
}

template <class S>
Json partition_to_json(const HypographPartition<S>& p, const BoundsReport* bounds = nullptr) {
  Json out;
  out["mode"] = scalar_traits<S>::exact ? "exact" : "float";
  out["xi"] = scalar_to_json<S>(p.field.xi());
  out["classes"] = Json::array();
  Json parents = Json::array();
  for (const auto& c : p.classes) {
    parents.push_back(c.parent);
    Json jc;
    jc["id"] = c.id;
    jc["component"] = c.component;
    jc["parent"] = c.parent;
    jc["t_lo"] = scalar_to_json<S>(c.t_lo);
    jc["t_hi"] = scalar_to_json<S>(c.t_hi);
    jc["bottom_closed"] = c.bottom_closed;
    jc["arc_bottom"] = arc_to_json(c.arc_bottom);
    jc["arc_top"] = arc_to_json(c.arc_top);
    if (p.labeled) {
      // Slabs: alternation of thin/thick level bands with the arc at a
      // representative level of each band.
      LevelInterval<S> range{c.t_lo, c.t_hi, c.bottom_closed, true};
      const auto& thin = p.thin_bands[static_cast<size_t>(c.id)];
      auto thick = detail::subtract_intervals(range, thin);
      std::vector<std::pair<LevelInterval<S>, bool>> slabs;
      for (const auto& b : thin) slabs.push_back({b, true});
      for (const auto& b : thick) slabs.push_back({b, false});
      std::sort(slabs.begin(), slabs.end(),
                [](const auto& x, const auto& y) { return x.first.lo < y.first.lo; });
      Json js = Json::array();
      for (const auto& [band, is_thin] : slabs) {
        S rep = band.hi_closed ? band.hi : (band.lo + band.hi) / S(2);
        Json jb = interval_to_json(band);
        jb["thin"] = is_thin;
        jb["arc"] = arc_to_json(p.class_slice(c.id, rep));
        js.push_back(std::move(jb));
      }
      jc["slabs"] = std::move(js);
    }
    out["classes"].push_back(std::move(jc));
  }
  out["forest"] = {{"parents", std::move(parents)}};
  if (p.labeled) {
    out["thin_necks"] = Json::array();
    for (const auto& n : p.necks) {
      Json jn = interval_to_json(n.levels);
      jn["class"] = n.class_id;
      jn["exceptional"] = n.exceptional;
      out["thin_necks"].push_back(std::move(jn));
    }
    out["thick_components"] = p.thick_component_count;
  }
  if (bounds) out["bounds"] = bounds_to_json(*bounds);
  return out;
}

// ---------------------------------------------------------------------------
// Curves, estimates, density grids.

Json curve_to_json(const ProjectiveCurve& c);
ProjectiveCurve curve_from_json(const Json& j);
Json estimate_to_json(const CroftonEstimate& e);
Json density_to_json(const EnergyDensityField& f);
EnergyDensityField density_from_json(const Json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace rii
