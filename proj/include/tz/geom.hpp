#pragma once

// Chart-based Riemannian geometry on the built-in model 4-manifolds.

#include "tz/dual.hpp"
#include "tz/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tz::geom {

enum class ModelKind { FlatR4, RoundS4, FubiniStudyCP2 };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct ManifoldModel {
  ModelKind kind = ModelKind::FlatR4;
  double chart_radius = 10.0;
};

using ChartPoint = Vec4;

bool inside_chart(const ManifoldModel& model, const ChartPoint& p);
void require_inside_chart(const ManifoldModel& model, const ChartPoint& p);

// Metric components in the model chart, generic over the scalar so that
// forward-mode derivatives come out exact.
//   FlatR4:          identity
//   RoundS4:         4 / (1 + |x|^2)^2 · identity (stereographic, unit sphere)
//   FubiniStudyCP2:  Re h_{ab̄}, h = ∂∂̄ log(1 + |z|^2) in the affine chart
//                    z = (x0 + i x1, x2 + i x3); equals the identity at 0.
template <class T>
Mat4T<T> metric_t(ModelKind kind, const Vec4T<T>& x) {
  Mat4T<T> g = Mat4T<T>::Zero();
  switch (kind) {
    case ModelKind::FlatR4:
      for (int i = 0; i < 4; ++i) g(i, i) = T(1.0);
      break;
    case ModelKind::RoundS4: {
      const T q = T(1.0) + x.squaredNorm();
      const T c = T(4.0) / (q * q);
      for (int i = 0; i < 4; ++i) g(i, i) = c;
      break;
    }
    case ModelKind::FubiniStudyCP2: {
      const T q = T(1.0) + x.squaredNorm();
      const T inv = T(1.0) / q;
      const T inv2 = inv * inv;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const T ar = x(2 * a), ai = x(2 * a + 1);
          const T br = x(2 * b), bi = x(2 * b + 1);
          // h_ab = δ_ab/q − conj(z_a) z_b / q²
          T p = -(ar * br + ai * bi) * inv2;
          T s = -(ar * bi - ai * br) * inv2;
          if (a == b) p = p + inv;
          g(2 * a, 2 * b) = p;
          g(2 * a, 2 * b + 1) = s;
          g(2 * a + 1, 2 * b) = -s;
          g(2 * a + 1, 2 * b + 1) = p;
        }
      }
      break;
    }
  }
  return g;
}

Mat4 metric_at(const ManifoldModel& model, const ChartPoint& p);

/// ∂_k g_ij for k = 0..3, by forward-mode differentiation of metric_t.
std::array<Mat4, 4> metric_derivatives(const ManifoldModel& model, const ChartPoint& p);

/// Christoffel symbols of the second kind: up[k](i, j) = Γ^k_ij.
struct Christoffel {
  std::array<Mat4, 4> up{};

  /// Γ^k_ij X^i Y^j
  Vec4 apply(const Vec4& X, const Vec4& Y) const;
  /// The endomorphism Y ↦ Γ(X, Y), i.e. entry (k, j) = Γ^k_ij X^i.
  Mat4 contract(const Vec4& X) const;
};

Christoffel christoffel_from_metric(const Mat4& g, const std::array<Mat4, 4>& dg);
Christoffel christoffel_at(const ManifoldModel& model, const ChartPoint& p);

/// Lowered Riemann tensor R_ijkl = <R(∂_k, ∂_l) ∂_j, ∂_i>, so that a space of
/// constant curvature 1 has R_ijkl = g_ik g_jl − g_il g_jk.
struct CurvatureTensor {
  std::array<double, 256> r{};

  double operator()(int i, int j, int k, int l) const { return r[index(i, j, k, l)]; }
  double& operator()(int i, int j, int k, int l) { return r[index(i, j, k, l)]; }

  /// R(X, Y, Z, W) multilinear evaluation.
  double eval(const Vec4& X, const Vec4& Y, const Vec4& Z, const Vec4& W) const;
  /// Sectional curvature of span(X, Y) with respect to g.
  double sectional(const Mat4& g, const Vec4& X, const Vec4& Y) const;

  static constexpr int index(int i, int j, int k, int l) { return ((i * 4 + j) * 4 + k) * 4 + l; }
};

/// Central-difference step used to differentiate the Christoffel symbols.
inline constexpr double kCurvatureStep = 1e-5;

CurvatureTensor riemann_at(const ManifoldModel& model, const ChartPoint& p);

/// Gram–Schmidt of the coordinate vectors ∂_0..∂_3 in that order with respect
/// to g. The result is g-orthonormal and positively oriented.
template <class T>
Mat4T<T> reference_frame_t(const Mat4T<T>& g) {
  Mat4T<T> e = Mat4T<T>::Identity();
  for (int k = 0; k < 4; ++k) {
    Vec4T<T> v = Vec4T<T>::Zero();
    v(k) = T(1.0);
    for (int m = 0; m < k; ++m) {
      const Vec4T<T> em = e.col(m);
      const T c = (g.row(k) * em)(0);  // g(∂_k, e_m)
      v -= c * em;
    }
    const T n2 = (v.transpose() * g * v)(0);
    using std::sqrt;
    e.col(k) = v / sqrt(n2);
  }
  return e;
}

Mat4 reference_frame(const ManifoldModel& model, const ChartPoint& p);

/// Maximum entry of |Fᵀ g F − I|.
double orthonormality_defect(const Mat4& g, const Mat4& frame);

struct CurveSample {
  Vec4 x;
  Vec4 dx;
};

/// A parametrized chart curve on [t0, t1].
struct Curve {
  std::function<CurveSample(double)> eval;
  double t0 = 0.0;
  double t1 = 1.0;
};

/// Curve through `points` along straight chart segments, one unit of parameter
/// per segment, with velocity vanishing at the corners.
Curve polyline(std::vector<ChartPoint> points);

struct TransportOptions {
  int steps_per_unit = 512;
  int min_steps = 16;
  double frame_tolerance = 1e-6;
};

using TransportObserver = std::function<void(double t, const ChartPoint& x, const Mat4& frame)>;

/// Parallel transport of the columns of `frame` along `curve` by fixed-step RK4
/// of dV/dt = −Γ(ẋ, V). The observer, when set, sees every step node.
Mat4 parallel_transport(const ManifoldModel& model, const Curve& curve, const Mat4& frame,
                        const TransportOptions& options = {},
                        const TransportObserver& observer = {});

}  // namespace tz::geom
