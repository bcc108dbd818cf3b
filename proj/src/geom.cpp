#include "tz/geom.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace tz {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PointOutsideChart: return "point-outside-chart";
    case ErrorKind::CurveExitsChart: return "curve-exits-chart";
    case ErrorKind::StepSizeUnderflow: return "step-size-underflow";
    case ErrorKind::InvalidFrame: return "invalid-frame";
    case ErrorKind::SyntaxError: return "syntax-error";
    case ErrorKind::UnknownIdentifier: return "unknown-identifier";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::DegenerateImmersion: return "degenerate-immersion";
    case ErrorKind::FrameCompletionFailure: return "frame-completion-failure";
    case ErrorKind::OpenLoop: return "open-loop";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::FiberChartPole: return "fiber-chart-pole";
    case ErrorKind::RankDeficient: return "rank-deficient";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::ConfigError: return "config-error";
  }
  return "unknown";
}

}  // namespace tz

namespace tz::geom {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::FlatR4: return "FlatR4";
    case ModelKind::RoundS4: return "RoundS4";
    case ModelKind::FubiniStudyCP2: return "FubiniStudyCP2";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "FlatR4") return ModelKind::FlatR4;
  if (name == "RoundS4") return ModelKind::RoundS4;
  if (name == "FubiniStudyCP2") return ModelKind::FubiniStudyCP2;
  throw Error(ErrorKind::InvalidArgument, "unknown model '" + name + "'");
}

bool inside_chart(const ManifoldModel& model, const ChartPoint& p) {
  return p.allFinite() && p.norm() < model.chart_radius;
}

void require_inside_chart(const ManifoldModel& model, const ChartPoint& p) {
  if (!inside_chart(model, p)) {
    std::ostringstream os;
    os << "point (" << p.transpose() << ") outside chart of radius " << model.chart_radius;
    throw Error(ErrorKind::PointOutsideChart, os.str());
  }
}

Mat4 metric_at(const ManifoldModel& model, const ChartPoint& p) {
  require_inside_chart(model, p);
  return metric_t<double>(model.kind, p);
}

std::array<Mat4, 4> metric_derivatives(const ManifoldModel& model, const ChartPoint& p) {
  require_inside_chart(model, p);
  std::array<Mat4, 4> dg{};
  for (int k = 0; k < 4; ++k) {
    Vec4T<Dual1> xd;
    for (int i = 0; i < 4; ++i) xd(i) = Dual1(p(i), i == k ? 1.0 : 0.0);
    const Mat4T<Dual1> gd = metric_t<Dual1>(model.kind, xd);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) dg[k](i, j) = gd(i, j).d;
  }
  return dg;
}

Vec4 Christoffel::apply(const Vec4& X, const Vec4& Y) const {
  Vec4 out;
  for (int k = 0; k < 4; ++k) out(k) = X.dot(up[k] * Y);
  return out;
}

Mat4 Christoffel::contract(const Vec4& X) const {
  Mat4 m;
  for (int k = 0; k < 4; ++k) m.row(k) = X.transpose() * up[k];
  return m;
}

Christoffel christoffel_from_metric(const Mat4& g, const std::array<Mat4, 4>& dg) {
  const Mat4 ginv = g.inverse();
  // lowered[l](i, j) = ½ (∂_i g_jl + ∂_j g_il − ∂_l g_ij)
  std::array<Mat4, 4> lowered{};
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        lowered[l](i, j) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
  Christoffel c;
  for (int k = 0; k < 4; ++k) {
    c.up[k].setZero();
    for (int l = 0; l < 4; ++l) c.up[k] += ginv(k, l) * lowered[l];
  }
  return c;
}

Christoffel christoffel_at(const ManifoldModel& model, const ChartPoint& p) {
  return christoffel_from_metric(metric_at(model, p), metric_derivatives(model, p));
}

double CurvatureTensor::eval(const Vec4& X, const Vec4& Y, const Vec4& Z, const Vec4& W) const {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) s += (*this)(i, j, k, l) * X(i) * Y(j) * Z(k) * W(l);
  return s;
}

double CurvatureTensor::sectional(const Mat4& g, const Vec4& X, const Vec4& Y) const {
  const double xx = X.dot(g * X), yy = Y.dot(g * Y), xy = X.dot(g * Y);
  return eval(X, Y, X, Y) / (xx * yy - xy * xy);
}

CurvatureTensor riemann_at(const ManifoldModel& model, const ChartPoint& p) {
  const Mat4 g = metric_at(model, p);
  const Christoffel c = christoffel_at(model, p);
  // dc[m][k](i, j) = ∂_m Γ^k_ij
  std::array<std::array<Mat4, 4>, 4> dc{};
  for (int m = 0; m < 4; ++m) {
    Vec4 step = Vec4::Zero();
    step(m) = kCurvatureStep;
    const Christoffel cp = christoffel_at(model, p + step);
    const Christoffel cm = christoffel_at(model, p - step);
    for (int k = 0; k < 4; ++k) dc[m][k] = (cp.up[k] - cm.up[k]) / (2.0 * kCurvatureStep);
  }
  // R^m_{jkl} = ∂_k Γ^m_{lj} − ∂_l Γ^m_{kj} + Γ^m_{kp} Γ^p_{lj} − Γ^m_{lp} Γ^p_{kj}
  std::array<double, 256> up{};
  for (int m = 0; m < 4; ++m)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = dc[k][m](l, j) - dc[l][m](k, j);
          for (int q = 0; q < 4; ++q) s += c.up[m](k, q) * c.up[q](l, j) - c.up[m](l, q) * c.up[q](k, j);
          up[CurvatureTensor::index(m, j, k, l)] = s;
        }
  CurvatureTensor r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += g(i, m) * up[CurvatureTensor::index(m, j, k, l)];
          r(i, j, k, l) = s;
        }
  return r;
}

Mat4 reference_frame(const ManifoldModel& model, const ChartPoint& p) {
  return reference_frame_t<double>(metric_at(model, p));
}

double orthonormality_defect(const Mat4& g, const Mat4& frame) {
  return (frame.transpose() * g * frame - Mat4::Identity()).cwiseAbs().maxCoeff();
}

Curve polyline(std::vector<ChartPoint> points) {
  if (points.size() < 2) throw Error(ErrorKind::InvalidArgument, "polyline needs at least two points");
  const double segments = static_cast<double>(points.size() - 1);
  Curve c;
  c.t0 = 0.0;
  c.t1 = segments;
  c.eval = [pts = std::move(points)](double t) {
    const int n = static_cast<int>(pts.size()) - 1;
    int i = static_cast<int>(std::floor(t));
    if (i < 0) i = 0;
    if (i >= n) i = n - 1;
    // Within a segment τ ↦ τ − sin(2πτ)/2π, so the velocity vanishes at the
    // corners and the RK4 stages never see a jump.
    const double tau = t - i;
    const double w = 2.0 * std::numbers::pi;
    const double s = tau - std::sin(w * tau) / w;
    const double ds = 1.0 - std::cos(w * tau);
    const Vec4 d = pts[i + 1] - pts[i];
    return CurveSample{pts[i] + s * d, ds * d};
  };
  return c;
}

namespace {

Mat4 transport_rhs(const ManifoldModel& model, const CurveSample& s, const Mat4& frame) {
  if (!inside_chart(model, s.x)) {
    std::ostringstream os;
    os << "curve leaves the chart at (" << s.x.transpose() << ")";
    throw Error(ErrorKind::CurveExitsChart, os.str());
  }
  const Christoffel c = christoffel_at(model, s.x);
  return -c.contract(s.dx) * frame;
}

}  // namespace

Mat4 parallel_transport(const ManifoldModel& model, const Curve& curve, const Mat4& frame,
                        const TransportOptions& options, const TransportObserver& observer) {
  const double length = curve.t1 - curve.t0;
  const int steps = std::max(options.min_steps,
                             static_cast<int>(std::ceil(std::abs(length) * options.steps_per_unit)));
  const double h = length / steps;
  const double scale = std::max({1.0, std::abs(curve.t0), std::abs(curve.t1)});
  if (!(std::abs(h) > 1e-14 * scale)) {
    throw Error(ErrorKind::StepSizeUnderflow, "parallel transport step size underflow");
  }
  const CurveSample start = curve.eval(curve.t0);
  if (!inside_chart(model, start.x)) throw Error(ErrorKind::CurveExitsChart, "curve starts outside the chart");
  if (orthonormality_defect(metric_at(model, start.x), frame) > options.frame_tolerance) {
    throw Error(ErrorKind::InvalidFrame, "initial frame is not orthonormal at the curve start");
  }

  Mat4 f = frame;
  if (observer) observer(curve.t0, start.x, f);
  for (int n = 0; n < steps; ++n) {
    const double t = curve.t0 + n * h;
    const CurveSample s0 = curve.eval(t);
    const CurveSample sm = curve.eval(t + 0.5 * h);
    const CurveSample s1 = curve.eval(t + h);
    const Mat4 k1 = transport_rhs(model, s0, f);
    const Mat4 k2 = transport_rhs(model, sm, f + 0.5 * h * k1);
    const Mat4 k3 = transport_rhs(model, sm, f + 0.5 * h * k2);
    const Mat4 k4 = transport_rhs(model, s1, f + h * k3);
    f += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (observer) observer(t + h, s1.x, f);
  }
  return f;
}

}  // namespace tz::geom
