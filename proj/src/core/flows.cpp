#include <cmath>

#include <omp.h>

#include "hypgeo/error.hpp"
#include "hypgeo/exec.hpp"
#include "hypgeo/mat2.hpp"

namespace hypgeo {

Mat2 flow_matrix(FlowKind kind, double s) {
  switch (kind) {
    case FlowKind::geodesic: return {std::exp(0.5 * s), 0, 0, std::exp(-0.5 * s)};
    case FlowKind::stable: return {1, s, 0, 1};
    case FlowKind::unstable: return {1, 0, s, 1};
  }
  return {};
}

UnitTangent apply_flow(const UnitTangent& v, FlowKind kind, double s) {
  return {v.frame * flow_matrix(kind, s)};
}

double trace_to_length(double tr, double tol) {
  double t = std::abs(tr);
  if (t <= 2 + tol) throw Error(ErrorKind::EllipticOrParabolic, "trace " + std::to_string(tr));
  return 2.0 * std::acosh(0.5 * t);
}

FlowBoxCoords flowbox_factor(const Mat2& m0) {
  Mat2 m = m0.normalized();
  if (m.a < 0) m = -m;
  if (!(m.a > 1e-300)) throw Error(ErrorKind::NotFactorable, "a <= 0 for both signs");
  return {m.c / m.a, 2.0 * std::log(m.a), m.b / m.a};
}

Mat2 flowbox_compose(const FlowBoxCoords& c) {
  return flow_matrix(FlowKind::unstable, c.r1) * flow_matrix(FlowKind::geodesic, c.t) *
         flow_matrix(FlowKind::stable, c.r2);
}

void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace hypgeo
