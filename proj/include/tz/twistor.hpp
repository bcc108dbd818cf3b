#pragma once

// Twistor space Z over a model 4-manifold: fiber coordinates, horizontal and
// vertical splitting, the metrics g_λ, the almost complex structures J± and
// their Kähler forms.
//
// A point of Z is a base chart point x together with a unit vector
// j ∈ S² ⊂ R³; the complex structure it names is E (Σ j_a J_a) E⁻¹, where E is
// the reference frame at x (geom::reference_frame) and (J1, J2, J3) is the
// quaternionic triple below. Tangent vectors are pairs (dx, dj) with j·dj = 0.

#include "tz/geom.hpp"

#include <array>
#include <vector>

namespace tz::twistor {

using geom::ChartPoint;
using geom::ManifoldModel;

enum class Sign { Plus = 1, Minus = -1 };

inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }
const char* to_string(Sign s);

struct HermitianPack {
  double lambda = 1.0;
  Sign sign = Sign::Plus;
};

void require_valid(const HermitianPack& pack);

struct TwistorPoint {
  ChartPoint base = ChartPoint::Zero();
  Vec3 fiber = Vec3::UnitX();
};

struct TwistorTangent {
  Vec4 dx = Vec4::Zero();
  Vec3 dj = Vec3::Zero();

  TwistorTangent operator+(const TwistorTangent& o) const { return {dx + o.dx, dj + o.dj}; }
  TwistorTangent operator-(const TwistorTangent& o) const { return {dx - o.dx, dj - o.dj}; }
  TwistorTangent operator*(double c) const { return {dx * c, dj * c}; }
};

/// J1: e1→e2, e3→e4;  J2: e1→e3, e2→−e4;  J3 = J1 J2: e1→e4, e2→e3.
/// All three are self-dual, and J1 J2 = J3 cyclically.
const std::array<Mat4, 3>& quaternionic_triple();

/// Σ j_a J_a
Mat4 triple_matrix(const Vec3& j);
/// Inverse of triple_matrix on span(J1, J2, J3): j_a = −¼ tr(Ĵ J_a).
Vec3 triple_coordinates(const Mat4& frame_J);

/// Chart endomorphism F (Σ j_a J_a) F⁻¹ for an oriented g-orthonormal frame F.
Mat4 realize_J(const ManifoldModel& model, const ChartPoint& p, const Mat4& frame, const Vec3& j);
/// Endomorphism named by a twistor point (reference frame).
Mat4 realize_J(const ManifoldModel& model, const TwistorPoint& tp);
/// Fiber coordinate of a compatible complex structure J (chart endomorphism).
Vec3 fiber_coordinates(const ManifoldModel& model, const ChartPoint& p, const Mat4& J);

/// J_θ in frame components: J_θ e1 = cos θ e3 + sin θ e4, J_θ e2 = sin θ e3 − cos θ e4.
/// Equal to cos θ J2 + sin θ J3.
Mat4 equator_J_frame(double theta);
/// J_θ as a chart endomorphism for the oriented orthonormal frame F.
Mat4 equator_J(const ManifoldModel& model, const ChartPoint& p, const Mat4& frame, double theta);

/// 2-form coefficient of ω_J ∧ ω_J against the frame volume form
/// (positive for orientation-compatible J).
double omega_wedge_omega(const Mat4& frame_J);

/// Data shared by every fiber point over one base point.
struct BaseData {
  ChartPoint x;
  Mat4 g;
  Mat4 frame;                              // reference frame E
  Eigen::Matrix<double, 3, 4> connection;  // self-dual part of the LC connection, per coordinate
};

BaseData base_data(const ManifoldModel& model, const ChartPoint& x);

/// dj of the horizontal lift of X: the fiber coordinate motion that keeps the
/// realized J parallel along X. Linear in X: equals horizontal_map · X.
Eigen::Matrix<double, 3, 4> horizontal_map(const BaseData& b, const Vec3& j);
Eigen::Matrix<double, 3, 4> horizontal_map(const ManifoldModel& model, const TwistorPoint& tp);

TwistorTangent horizontal_lift(const ManifoldModel& model, const TwistorPoint& tp, const Vec4& X);

/// dj − (horizontal fiber motion of dx).
Vec3 vertical_part(const BaseData& b, const Vec3& j, const TwistorTangent& V);
Vec3 vertical_part(const ManifoldModel& model, const TwistorPoint& tp, const TwistorTangent& V);

/// g_λ(V, W) = g(dx_V, dx_W) + λ⁻² <dj_V^vert, dj_W^vert>.
double metric(double lambda, const BaseData& b, const Vec3& j, const TwistorTangent& V,
              const TwistorTangent& W);
double metric(const HermitianPack& pack, const ManifoldModel& model, const TwistorPoint& tp,
              const TwistorTangent& V, const TwistorTangent& W);

/// J± V: horizontally the realized J, vertically ±(j × ·).
TwistorTangent apply_acs(const HermitianPack& pack, const BaseData& b, const Vec3& j, const TwistorTangent& V);
TwistorTangent apply_acs(const HermitianPack& pack, const ManifoldModel& model, const TwistorPoint& tp,
                         const TwistorTangent& V);

struct KahlerSplit {
  double horizontal = 0.0;
  double vertical = 0.0;
  double total() const { return horizontal + vertical; }
};

/// ω±(V, W) = g_λ(J± V, W) split into its horizontal and vertical parts.
KahlerSplit kahler_split(const HermitianPack& pack, const BaseData& b, const Vec3& j, const TwistorTangent& V,
                         const TwistorTangent& W);
double kahler_form(const HermitianPack& pack, const ManifoldModel& model, const TwistorPoint& tp,
                   const TwistorTangent& V, const TwistorTangent& W);

// ---------------------------------------------------------------------------
// Fiber charts. Chart s ∈ {+1, −1} is stereographic projection from the pole
// (0, 0, −s): w = (j1, j2) / (1 + s j3). Chart +1 is the default; the handoff
// to chart −1 happens when j3 < −0.9.

inline constexpr double kPoleHandoff = 0.9;

int choose_fiber_chart(const Vec3& j);
Vec2 fiber_to_chart(const Vec3& j, int chart);
Vec3 fiber_from_chart(const Vec2& w, int chart);
/// ∂j/∂w
Eigen::Matrix<double, 3, 2> fiber_chart_jacobian(const Vec2& w, int chart);

/// Six-dimensional chart coordinates y = (x, w).
Vec6 to_chart(const TwistorPoint& tp, int chart);
TwistorPoint from_chart(const Vec6& y, int chart);
TwistorTangent tangent_from_chart(const Vec6& y, int chart, const Vec6& dy);
Vec6 tangent_to_chart(const TwistorPoint& tp, int chart, const TwistorTangent& V);

/// g_λ in the chart coordinates (dx, dw).
Mat6 twistor_metric_chart(double lambda, const ManifoldModel& model, const Vec6& y, int chart);
/// g_λ in the chart chosen for tp.
Mat6 twistor_metric(const HermitianPack& pack, const ManifoldModel& model, const TwistorPoint& tp);
/// J± in the chart coordinates (dx, dw) chosen for tp.
Mat6 twistor_acs(const HermitianPack& pack, const ManifoldModel& model, const TwistorPoint& tp);

/// Central-difference step for derivatives of the assembled chart metric.
inline constexpr double kMetricStep = 1e-4;

/// up[k](i, j) = Γ^k_ij of g_λ in chart coordinates, by central differences.
std::array<Mat6, 6> twistor_christoffel(double lambda, const ManifoldModel& model, const Vec6& y, int chart,
                                        double step = kMetricStep);

struct GeodesicOptions {
  int steps = 100;
  double step = kMetricStep;
};

/// Integrates the g_λ geodesic with initial velocity V for time T (RK4 in
/// chart coordinates, switching fiber charts at the pole handoff). Returns the
/// points at every step node, starting with tp.
std::vector<TwistorPoint> geodesic(double lambda, const ManifoldModel& model, const TwistorPoint& tp,
                                   const TwistorTangent& V, double T, const GeodesicOptions& options = {});

}  // namespace tz::twistor
