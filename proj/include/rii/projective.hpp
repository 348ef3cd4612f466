#pragma once

#include <cstdint>
#include <vector>

namespace rii {

// Polyline in RP^n: ordered unit representatives in R^{n+1}, antipodal
// identification implicit, signs aligned on the fly along the polyline.
struct ProjectiveCurve {
  int dim = 2;  // n
  bool closed = true;
  std::vector<std::vector<double>> points;  // each of size dim+1, unit norm
};

struct Hyperplane {
  std::vector<double> normal;  // unit vector in R^{n+1}
};

struct CroftonEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long samples = 0;
  double exact_length = 0.0;  // normalized polyline length l(gamma; h)
  long long resamples = 0;    // hyperplanes redrawn on vertex incidence
};

struct ProjectiveRiiCheck {
  double lhs = 0.0;  // 2*pi*Area = degree
  double rhs = 0.0;  // normalized boundary length
  bool pass = false;
};

// Throws std::invalid_argument when vectors are not unit to 1e-12 or
// consecutive points are antipodally ambiguous.
void validate_curve(const ProjectiveCurve& curve);

// Number of sign changes of <gamma, normal> along the sign-aligned lift.
// Throws on a vertex lying on the hyperplane (|dot| < 1e-14).
int count_intersections(const ProjectiveCurve& curve, const Hyperplane& h);

// Spherical polyline length divided by pi (a line has length 1).
double normalized_length(const ProjectiveCurve& curve);

// Monte-Carlo Cauchy-Crofton estimate over hyperplane normals drawn
// uniformly on S^n; deterministic given the seed. Vertex incidences are
// resampled and counted. Optionally records every intersection count.
CroftonEstimate crofton_length(const ProjectiveCurve& curve, long long n_samples,
                               std::uint64_t seed, std::vector<int>* counts = nullptr);

// lhs = 2*pi*(d / 2*pi) = d against rhs = normalized length.
ProjectiveRiiCheck verify_projective_rii(const ProjectiveCurve& boundary, int degree,
                                         double tol = 1e-9);

// Built-in fixtures.
ProjectiveCurve line_curve(int samples = 360, int dim = 2);
ProjectiveCurve conic_curve(int samples = 720);   // real locus of x^2 + y^2 = z^2 in RP^2
ProjectiveCurve cubic_curve(int samples = 2000);  // rational normal curve of degree 3 in RP^3

}  // namespace rii
