#include "tz/twistor.hpp"

#include <cmath>
#include <sstream>

namespace tz::twistor {

namespace {

Mat3 cross_matrix(const Vec3& a) {
  Mat3 m;
  m << 0, -a(2), a(1), a(2), 0, -a(0), -a(1), a(0), 0;
  return m;
}

void require_frame(const Mat4& g, const Mat4& frame) {
  if (geom::orthonormality_defect(g, frame) > 1e-8)
    throw Error(ErrorKind::InvalidFrame, "frame is not orthonormal for the metric");
  if (frame.determinant() <= 0.0) throw Error(ErrorKind::InvalidFrame, "frame is not positively oriented");
}

}  // namespace

const char* to_string(Sign s) { return s == Sign::Plus ? "+" : "-"; }

void require_valid(const HermitianPack& pack) {
  if (!(pack.lambda > 0.0) || !std::isfinite(pack.lambda))
    throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
}

const std::array<Mat4, 3>& quaternionic_triple() {
  static const std::array<Mat4, 3> triple = [] {
    Mat4 j1 = Mat4::Zero(), j2 = Mat4::Zero();
    // columns are images of e1..e4
    j1(1, 0) = 1;  j1(0, 1) = -1;  j1(3, 2) = 1;  j1(2, 3) = -1;
    j2(2, 0) = 1;  j2(3, 1) = -1;  j2(0, 2) = -1; j2(1, 3) = 1;
    return std::array<Mat4, 3>{j1, j2, j1 * j2};
  }();
  return triple;
}

Mat4 triple_matrix(const Vec3& j) {
  const auto& t = quaternionic_triple();
  return j(0) * t[0] + j(1) * t[1] + j(2) * t[2];
}

Vec3 triple_coordinates(const Mat4& frame_J) {
  const auto& t = quaternionic_triple();
  return Vec3(-0.25 * (frame_J * t[0]).trace(), -0.25 * (frame_J * t[1]).trace(),
              -0.25 * (frame_J * t[2]).trace());
}

Mat4 realize_J(const ManifoldModel& model, const ChartPoint& p, const Mat4& frame, const Vec3& j) {
  const Mat4 g = geom::metric_at(model, p);
  require_frame(g, frame);
  return frame * triple_matrix(j) * frame.transpose() * g;
}

Mat4 realize_J(const ManifoldModel& model, const TwistorPoint& tp) {
  const Mat4 g = geom::metric_at(model, tp.base);
  const Mat4 e = geom::reference_frame_t<double>(g);
  return e * triple_matrix(tp.fiber) * e.transpose() * g;
}

Vec3 fiber_coordinates(const ManifoldModel& model, const ChartPoint& p, const Mat4& J) {
  const Mat4 g = geom::metric_at(model, p);
  const Mat4 e = geom::reference_frame_t<double>(g);
  return triple_coordinates(e.transpose() * g * J * e);
}

Mat4 equator_J_frame(double theta) {
  const auto& t = quaternionic_triple();
  return std::cos(theta) * t[1] + std::sin(theta) * t[2];
}

Mat4 equator_J(const ManifoldModel& model, const ChartPoint& p, const Mat4& frame, double theta) {
  const Mat4 g = geom::metric_at(model, p);
  require_frame(g, frame);
  return frame * equator_J_frame(theta) * frame.transpose() * g;
}

double omega_wedge_omega(const Mat4& frame_J) {
  // ω_ij = g(J e_i, e_j) = J_ji; ω∧ω = 2 Pf(ω) e1∧e2∧e3∧e4.
  const Mat4 w = frame_J.transpose();
  return 2.0 * (w(0, 1) * w(2, 3) - w(0, 2) * w(1, 3) + w(0, 3) * w(1, 2));
}

BaseData base_data(const ManifoldModel& model, const ChartPoint& x) {
  BaseData b;
  b.x = x;
  b.g = geom::metric_at(model, x);
  b.frame = geom::reference_frame_t<double>(b.g);
  const geom::Christoffel gam = geom::christoffel_at(model, x);
  const auto& t = quaternionic_triple();
  const Mat4 to_frame = b.frame.transpose() * b.g;
  for (int k = 0; k < 4; ++k) {
    Vec4T<Dual1> xd;
    for (int i = 0; i < 4; ++i) xd(i) = Dual1(x(i), i == k ? 1.0 : 0.0);
    const Mat4T<Dual1> ed = geom::reference_frame_t<Dual1>(geom::metric_t<Dual1>(model.kind, xd));
    Mat4 de;
    for (int i = 0; i < 4; ++i)
      for (int c = 0; c < 4; ++c) de(i, c) = ed(i, c).d;
    // ∇_{∂k} e_b expressed in the frame
    const Mat4 omega = to_frame * (de + gam.contract(Vec4::Unit(k)) * b.frame);
    for (int a = 0; a < 3; ++a) b.connection(a, k) = -0.25 * (omega * t[a]).trace();
  }
  return b;
}

Eigen::Matrix<double, 3, 4> horizontal_map(const BaseData& b, const Vec3& j) {
  // Parallel Ĵ obeys dĴ = −[ω, Ĵ]; with ω⁺ = Σ c_a J_a and [J_a, J_b] = 2 ε_abc J_c
  // this is dj = 2 j × c.
  return 2.0 * cross_matrix(j) * b.connection;
}

Eigen::Matrix<double, 3, 4> horizontal_map(const ManifoldModel& model, const TwistorPoint& tp) {
  return horizontal_map(base_data(model, tp.base), tp.fiber);
}

TwistorTangent horizontal_lift(const ManifoldModel& model, const TwistorPoint& tp, const Vec4& X) {
  return {X, horizontal_map(model, tp) * X};
}

Vec3 vertical_part(const BaseData& b, const Vec3& j, const TwistorTangent& V) {
  return V.dj - horizontal_map(b, j) * V.dx;
}

Vec3 vertical_part(const ManifoldModel& model, const TwistorPoint& tp, const TwistorTangent& V) {
  return vertical_part(base_data(model, tp.base), tp.fiber, V);
}

double metric(double lambda, const BaseData& b, const Vec3& j, const TwistorTangent& V,
              const TwistorTangent& W) {
  const Eigen::Matrix<double, 3, 4> H = horizontal_map(b, j);
  const Vec3 a = V.dj - H * V.dx, c = W.dj - H * W.dx;
  return V.dx.dot(b.g * W.dx) + a.dot(c) / (lambda * lambda);
}

double metric(const HermitianPack& pack, const ManifoldModel& model, const TwistorPoint& tp,
              const TwistorTangent& V, const TwistorTangent& W) {
  require_valid(pack);
  return metric(pack.lambda, base_data(model, tp.base), tp.fiber, V, W);
}

TwistorTangent apply_acs(const HermitianPack& pack, const BaseData& b, const Vec3& j, const TwistorTangent& V) {
  const Eigen::Matrix<double, 3, 4> H = horizontal_map(b, j);
  const Mat4 J = b.frame * triple_matrix(j) * b.frame.transpose() * b.g;
  const Vec4 dx = J * V.dx;
  const Vec3 vert = V.dj - H * V.dx;
  return {dx, H * dx + sign_value(pack.sign) * j.cross(vert)};
}

TwistorTangent apply_acs(const HermitianPack& pack, const ManifoldModel& model, const TwistorPoint& tp,
                         const TwistorTangent& V) {
  require_valid(pack);
  return apply_acs(pack, base_data(model, tp.base), tp.fiber, V);
}

KahlerSplit kahler_split(const HermitianPack& pack, const BaseData& b, const Vec3& j, const TwistorTangent& V,
                         const TwistorTangent& W) {
  require_valid(pack);
  const Eigen::Matrix<double, 3, 4> H = horizontal_map(b, j);
  const Mat4 J = b.frame * triple_matrix(j) * b.frame.transpose() * b.g;
  const Vec3 a = V.dj - H * V.dx, c = W.dj - H * W.dx;
  KahlerSplit k;
  k.horizontal = (J * V.dx).dot(b.g * W.dx);
  k.vertical = sign_value(pack.sign) * j.cross(a).dot(c) / (pack.lambda * pack.lambda);
  return k;
}

double kahler_form(const HermitianPack& pack, const ManifoldModel& model, const TwistorPoint& tp,
                   const TwistorTangent& V, const TwistorTangent& W) {
  return kahler_split(pack, base_data(model, tp.base), tp.fiber, V, W).total();
}

int choose_fiber_chart(const Vec3& j) { return j(2) < -kPoleHandoff ? -1 : 1; }

Vec2 fiber_to_chart(const Vec3& j, int chart) {
  const double den = 1.0 + chart * j(2);
  if (den < 1e-12) throw Error(ErrorKind::FiberChartPole, "fiber point at the pole of its chart");
  return Vec2(j(0), j(1)) / den;
}

Vec3 fiber_from_chart(const Vec2& w, int chart) {
  const double r2 = w.squaredNorm();
  return Vec3(2 * w(0), 2 * w(1), chart * (1 - r2)) / (1 + r2);
}

Eigen::Matrix<double, 3, 2> fiber_chart_jacobian(const Vec2& w, int chart) {
  const double r2 = w.squaredNorm();
  const double q = 1 + r2;
  Eigen::Matrix<double, 3, 2> d;
  for (int a = 0; a < 2; ++a) {
    // ∂/∂w_a of (2w, s(1 − r²)) / q
    d(0, a) = (a == 0 ? 2.0 : 0.0) / q - 4 * w(0) * w(a) / (q * q);
    d(1, a) = (a == 1 ? 2.0 : 0.0) / q - 4 * w(1) * w(a) / (q * q);
    d(2, a) = chart * (-2 * w(a) / q - 2 * w(a) * (1 - r2) / (q * q));
  }
  return d;
}

Vec6 to_chart(const TwistorPoint& tp, int chart) {
  Vec6 y;
  y.head<4>() = tp.base;
  y.tail<2>() = fiber_to_chart(tp.fiber, chart);
  return y;
}

TwistorPoint from_chart(const Vec6& y, int chart) {
  return TwistorPoint{y.head<4>(), fiber_from_chart(y.tail<2>(), chart)};
}

TwistorTangent tangent_from_chart(const Vec6& y, int chart, const Vec6& dy) {
  return {dy.head<4>(), fiber_chart_jacobian(y.tail<2>(), chart) * dy.tail<2>()};
}

Vec6 tangent_to_chart(const TwistorPoint& tp, int chart, const TwistorTangent& V) {
  const Eigen::Matrix<double, 3, 2> D = fiber_chart_jacobian(fiber_to_chart(tp.fiber, chart), chart);
  Vec6 dy;
  dy.head<4>() = V.dx;
  dy.tail<2>() = (D.transpose() * D).ldlt().solve(D.transpose() * V.dj);
  return dy;
}

Mat6 twistor_metric_chart(double lambda, const ManifoldModel& model, const Vec6& y, int chart) {
  const BaseData b = base_data(model, y.head<4>());
  const Vec2 w = y.tail<2>();
  const Vec3 j = fiber_from_chart(w, chart);
  const Eigen::Matrix<double, 3, 4> H = horizontal_map(b, j);
  const Eigen::Matrix<double, 3, 2> D = fiber_chart_jacobian(w, chart);
  const double s = 1.0 / (lambda * lambda);
  Mat6 G;
  G.topLeftCorner<4, 4>() = b.g + s * H.transpose() * H;
  G.topRightCorner<4, 2>() = -s * H.transpose() * D;
  G.bottomLeftCorner<2, 4>() = -s * D.transpose() * H;
  G.bottomRightCorner<2, 2>() = s * D.transpose() * D;
  return G;
}

Mat6 twistor_metric(const HermitianPack& pack, const ManifoldModel& model, const TwistorPoint& tp) {
  require_valid(pack);
  const int chart = choose_fiber_chart(tp.fiber);
  return twistor_metric_chart(pack.lambda, model, to_chart(tp, chart), chart);
}

Mat6 twistor_acs(const HermitianPack& pack, const ManifoldModel& model, const TwistorPoint& tp) {
  require_valid(pack);
  const int chart = choose_fiber_chart(tp.fiber);
  const Vec6 y = to_chart(tp, chart);
  const TwistorPoint p = from_chart(y, chart);
  const BaseData b = base_data(model, p.base);
  Mat6 J;
  for (int c = 0; c < 6; ++c) {
    const TwistorTangent V = tangent_from_chart(y, chart, Vec6::Unit(c));
    J.col(c) = tangent_to_chart(p, chart, apply_acs(pack, b, p.fiber, V));
  }
  return J;
}

std::array<Mat6, 6> twistor_christoffel(double lambda, const ManifoldModel& model, const Vec6& y, int chart,
                                        double step) {
  const Mat6 G = twistor_metric_chart(lambda, model, y, chart);
  std::array<Mat6, 6> dG;
  for (int k = 0; k < 6; ++k) {
    const Vec6 e = Vec6::Unit(k) * step;
    dG[k] = (twistor_metric_chart(lambda, model, y + e, chart) - twistor_metric_chart(lambda, model, y - e, chart)) /
            (2.0 * step);
  }
  const Mat6 Ginv = G.inverse();
  std::array<Mat6, 6> lowered;
  for (int l = 0; l < 6; ++l)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) lowered[l](i, j) = 0.5 * (dG[i](j, l) + dG[j](i, l) - dG[l](i, j));
  std::array<Mat6, 6> up;
  for (int k = 0; k < 6; ++k) {
    up[k].setZero();
    for (int l = 0; l < 6; ++l) up[k] += Ginv(k, l) * lowered[l];
  }
  return up;
}

std::vector<TwistorPoint> geodesic(double lambda, const ManifoldModel& model, const TwistorPoint& tp,
                                   const TwistorTangent& V, double T, const GeodesicOptions& options) {
  if (options.steps < 1) throw Error(ErrorKind::InvalidArgument, "geodesic needs at least one step");
  const double h = T / options.steps;
  if (!(std::abs(h) > 1e-14)) throw Error(ErrorKind::StepSizeUnderflow, "geodesic step size underflow");

  int chart = choose_fiber_chart(tp.fiber);
  Vec6 y = to_chart(tp, chart);
  Vec6 dy = tangent_to_chart(tp, chart, V);

  auto accel = [&](const Vec6& pos, const Vec6& vel) {
    geom::require_inside_chart(model, pos.head<4>());
    const std::array<Mat6, 6> gam = twistor_christoffel(lambda, model, pos, chart, options.step);
    Vec6 a;
    for (int k = 0; k < 6; ++k) a(k) = -vel.dot(gam[k] * vel);
    return a;
  };

  std::vector<TwistorPoint> out;
  out.reserve(options.steps + 1);
  out.push_back(tp);
  for (int n = 0; n < options.steps; ++n) {
    const Vec6 k1y = dy, k1v = accel(y, dy);
    const Vec6 k2y = dy + 0.5 * h * k1v, k2v = accel(y + 0.5 * h * k1y, k2y);
    const Vec6 k3y = dy + 0.5 * h * k2v, k3v = accel(y + 0.5 * h * k2y, k3y);
    const Vec6 k4y = dy + h * k3v, k4v = accel(y + h * k3y, k4y);
    y += (h / 6.0) * (k1y + 2 * k2y + 2 * k3y + k4y);
    dy += (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v);
    const TwistorPoint p = from_chart(y, chart);
    out.push_back(p);
    const int next = choose_fiber_chart(p.fiber);
    if (next != chart) {
      const TwistorTangent vel = tangent_from_chart(y, chart, dy);
      chart = next;
      y = to_chart(p, chart);
      dy = tangent_to_chart(p, chart, vel);
    }
  }
  return out;
}

}  // namespace tz::twistor
