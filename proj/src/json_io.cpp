#include "rii/json_io.hpp"

#include <fstream>
#include <sstream>

namespace rii {

Json curve_to_json(const ProjectiveCurve& c) {
  Json out;
  out["n"] = c.dim;
  out["closed"] = c.closed;
  out["points"] = c.points;
  return out;
}

ProjectiveCurve curve_from_json(const Json& j) {
  ProjectiveCurve c;
  c.dim = j.at("n").get<int>();
  c.closed = j.at("closed").get<bool>();
  for (const auto& p : j.at("points")) c.points.push_back(p.get<std::vector<double>>());
  validate_curve(c);
  return c;
}

Json estimate_to_json(const CroftonEstimate& e) {
  return {{"mean", e.mean},
          {"std_error", e.std_error},
          {"samples", e.samples},
          {"exact_length", e.exact_length},
          {"resamples", e.resamples}};
}

Json density_to_json(const EnergyDensityField& f) {
  return {{"rows", f.rows}, {"cols", f.cols},   {"s0", f.s0},
          {"s1", f.s1},     {"dr", f.ds},       {"dtheta", f.dtheta},
          {"values", f.values}};
}

EnergyDensityField density_from_json(const Json& j) {
  EnergyDensityField f;
  f.rows = j.at("rows").get<int>();
  f.cols = j.at("cols").get<int>();
  f.s0 = j.value("s0", 0.0);
  f.ds = j.at("dr").get<double>();
  f.s1 = j.value("s1", f.s0 + f.rows * f.ds);
  f.dtheta = j.at("dtheta").get<double>();
  f.values = j.at("values").get<std::vector<double>>();
  if (static_cast<size_t>(f.rows) * static_cast<size_t>(f.cols) != f.values.size())
    throw std::invalid_argument("density grid size mismatch");
  for (double v : f.values)
    if (!(v >= 0.0)) throw std::invalid_argument("density must be nonnegative");
  return f;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace rii
