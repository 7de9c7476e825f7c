#pragma once

// Sound-soft scattering by a smooth closed curve. The scattered field is a
// combined single/double-layer potential
//   u_s(x) = int (dPhi/dnu_y - i eta Phi)(x, y) phi(y) ds(y),
//   Phi(x, y) = (i/4) H^{(1)}_0(k |x - y|),
// and the density solves the second-kind equation obtained from the jump
// relations, discretised by Nystrom quadrature on 2Q equispaced nodes with
// the logarithmic singularity integrated exactly (Kussmaul-Martensen).

#include <complex>
#include <functional>
#include <utility>
#include <span>
#include <vector>

#include "cloak/geometry.hpp"

namespace cloak::bie {

using cplx = std::complex<double>;

struct CurvePoint {
  Vec2 pos;
  Vec2 d1;  // dx/dt
  Vec2 d2;  // d^2x/dt^2
};

enum class CurveKind { kite, circle, custom };

/// Smooth closed curve parametrised counter-clockwise over [0, 2 pi).
class ParamCurve {
 public:
  using Evaluator = std::function<CurvePoint(double)>;

  static ParamCurve kite(double scale = 1.0, Vec2 center = {});
  static ParamCurve circle(double radius, Vec2 center = {});
  static ParamCurve custom(Evaluator eval);

  CurvePoint operator()(double t) const { return eval_(t); }
  CurveKind kind() const { return kind_; }
  double scale() const { return scale_; }
  Vec2 center() const { return center_; }

 private:
  ParamCurve(CurveKind kind, double scale, Vec2 center, Evaluator eval)
      : kind_(kind), scale_(scale), center_(center), eval_(std::move(eval)) {}

  CurveKind kind_;
  double scale_;
  Vec2 center_;
  Evaluator eval_;
};

/// Quadrature nodes t_j = pi j / Q, j = 0..2Q-1.
std::vector<CurvePoint> nodes(const ParamCurve& curve, int q);

struct NystromSolution {
  double k = 0.0;
  double eta = 0.0;
  int q = 0;
  std::vector<double> t;
  std::vector<CurvePoint> points;
  std::vector<cplx> density;
  double residual = 0.0;  // ||A phi - rhs|| / ||rhs|| of the discrete system

  /// Field evaluated closer than one node spacing to the curve loses accuracy.
  bool near_boundary(Vec2 x) const;
  /// Inside the node polygon.
  bool inside(Vec2 x) const;
};

/// Solves (I + K - i eta S) phi = -2 u_inc with eta = k, where the operators
/// carry the factor 2 of the jump relations. incident_trace[j] = u_inc(x(t_j)).
NystromSolution assemble_and_solve_cfie(const ParamCurve& curve, double k, std::span<const cplx> incident_trace,
                                        int q);

/// Combined-layer potential by the trapezoid rule over the nodes.
cplx scattered_eval(const NystromSolution& sol, Vec2 x);
inline cplx scattered_eval(const NystromSolution& sol, const ParamCurve&, Vec2 x) { return scattered_eval(sol, x); }

/// Trigonometric interpolant of the density at parameter t.
cplx density_at(const NystromSolution& sol, double t);

/// Limit of the scattered field on the curve at an off-node parameter t,
/// from the jump relation with the interpolated density.
cplx boundary_value(const NystromSolution& sol, const ParamCurve& curve, double t);

/// Exact sound-soft circle (centred at the origin) response to exp(i k x.d):
///   u_s = -sum_n i^n e^{-i n arg d} J_n(ka)/H_n(ka) H_n(kr) e^{i n theta}.
/// n_terms below ka + 20 is raised to that.
cplx circle_series_oracle(double a, double k, Vec2 d, Vec2 x, int n_terms = 0);

}  // namespace cloak::bie
