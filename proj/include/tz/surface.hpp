#pragma once

// Immersed surfaces in a model 4-manifold and the superminimality meters.

#include "tz/expr.hpp"
#include "tz/geom.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace tz::surface {

using geom::ManifoldModel;

/// Chart position of the immersion and its partial derivatives up to order two.
struct SurfaceJet {
  Vec4 x, xu, xv, xuu, xuv, xvv;
};

struct Domain {
  double u0 = -1.0, u1 = 1.0, v0 = -1.0, v1 = 1.0;
};

struct Grid {
  int nu = 16;
  int nv = 16;
};

/// Condition-number bound on [x_u x_v] for the immersion condition.
inline constexpr double kImmersionConditionBound = 1e6;
/// A normal candidate is rejected when its residual falls below this fraction
/// of its length; the next reference direction is tried.
inline constexpr double kNormalResidualFloor = 1e-3;

class ImmersedSurface {
 public:
  using JetFn = std::function<SurfaceJet(double, double)>;

  static ImmersedSurface from_formulas(const ManifoldModel& model,
                                       const std::array<std::string, 4>& formulas,
                                       const Domain& domain, const Grid& grid);
  /// Surface given only by its chart map; jets come from central differences.
  static ImmersedSurface from_map(const ManifoldModel& model, std::function<Vec4(double, double)> map,
                                  const Domain& domain, const Grid& grid, double step = 1e-4);
  /// Surface given by a jet function (exact derivatives supplied by the caller).
  static ImmersedSurface from_jets(const ManifoldModel& model, JetFn jets, const Domain& domain,
                                   const Grid& grid);

  const ManifoldModel& model() const { return model_; }
  const Domain& domain() const { return domain_; }
  const Grid& grid() const { return grid_; }
  const std::array<std::string, 4>& formulas() const { return formulas_; }
  bool finite_difference() const { return finite_difference_; }
  /// Ambient coordinate order used to complete the normal frame.
  const std::array<int, 4>& normal_reference() const { return normal_reference_; }

  bool contains(double u, double v) const;
  SurfaceJet jet(double u, double v) const;

  double grid_u(int i) const;
  double grid_v(int j) const;

 private:
  ImmersedSurface(const ManifoldModel& model, JetFn jets, const Domain& domain, const Grid& grid,
                  bool fd);

  ManifoldModel model_;
  JetFn jets_;
  Domain domain_;
  Grid grid_;
  bool finite_difference_ = false;
  std::array<std::string, 4> formulas_{};
  std::array<int, 4> normal_reference_{0, 1, 2, 3};
};

/// Oriented orthonormal frame (columns e1..e4) with (e1, e2) spanning TΣ.
struct AdaptedFrame {
  Mat4 e = Mat4::Identity();
  Vec4 col(int i) const { return e.col(i); }
};

/// Adapted frame from g, x_u, x_v. Generic over the scalar so the tangent-space
/// motion of the frame can be differentiated exactly.
template <class T>
Mat4T<T> adapted_frame_t(const Mat4T<T>& g, const Vec4T<T>& xu, const Vec4T<T>& xv,
                         const std::array<int, 4>& reference) {
  using std::sqrt;
  auto dot = [&](const Vec4T<T>& a, const Vec4T<T>& b) { return (a.transpose() * g * b)(0); };
  Mat4T<T> e;
  Vec4T<T> e1 = xu / sqrt(dot(xu, xu));
  Vec4T<T> w = xv - dot(xv, e1) * e1;
  Vec4T<T> e2 = w / sqrt(dot(w, w));
  e.col(0) = e1;
  e.col(1) = e2;
  int found = 2;
  for (int r = 0; r < 4 && found < 4; ++r) {
    Vec4T<T> c = Vec4T<T>::Zero();
    c(reference[r]) = T(1.0);
    const T len = sqrt(dot(c, c));
    for (int m = 0; m < found; ++m) {
      const Vec4T<T> em = e.col(m);
      c -= dot(c, em) * em;
    }
    const T res = sqrt(dot(c, c));
    if (value_of(res) <= kNormalResidualFloor * value_of(len)) continue;
    e.col(found++) = c / res;
  }
  if (found < 4) throw Error(ErrorKind::FrameCompletionFailure, "could not complete the normal frame");
  if (value_of(e.determinant()) < 0.0) e.col(2).swap(e.col(3));
  return e;
}

void check_immersion(const Mat4& g, const Vec4& xu, const Vec4& xv);

AdaptedFrame adapted_frame(const ImmersedSurface& s, double u, double v);

/// h[α][i][j] = <∇_{e_i} e_j, e_{α+3}>, α ∈ {0, 1}, i, j ∈ {0, 1}.
struct SecondFundamentalForm {
  std::array<Mat2, 2> h{Mat2::Zero(), Mat2::Zero()};
};

SecondFundamentalForm second_fundamental_form(const ImmersedSurface& s, double u, double v);

/// Trace of h per normal direction (e3, e4).
Vec2 mean_curvature_surface(const ImmersedSurface& s, double u, double v);

struct IndicatrixReport {
  Vec2 center = Vec2::Zero();
  double a = 0.0;  // major semi-axis
  double b = 0.0;  // minor semi-axis
  double circularity_defect = 0.0;
};

/// Exact description of the ellipse {h(X, X) : |X| = 1} in the normal plane.
IndicatrixReport indicatrix(const SecondFundamentalForm& h);

/// max over X ∈ {∂_u, ∂_v} of the operator norm of ∇_X J₀.
double vertical_defect(const ImmersedSurface& s, double u, double v);

/// ∇_X J₀ in the adapted frame for X = ∂_u (index 0) and ∂_v (index 1).
std::array<Mat4, 2> covariant_derivative_J0(const ImmersedSurface& s, double u, double v);

/// The standard J₀ in an adapted frame: e1 ↦ e2, e3 ↦ e4.
Mat4 standard_J0();

struct HolonomyReport {
  Mat4 rotation = Mat4::Identity();   // closed-loop transport in the start frame
  double commutator_defect = 0.0;     // max along the loop of ‖[g(t), J₀]‖
  double endpoint_defect = 0.0;       // ‖[g(1), J₀]‖
};

/// Transports the adapted frame around a closed (u, v) polygon. g(t) is the
/// transport expressed in the adapted frame at the current point.
HolonomyReport holonomy_in_u2(const ImmersedSurface& s, const std::vector<Vec2>& loop,
                              const geom::TransportOptions& options = {});

/// Boundary of grid cell (i, j), counter-clockwise.
std::vector<Vec2> cell_loop(const ImmersedSurface& s, int i, int j);

struct GridMax {
  double value = 0.0;
  double u = 0.0;
  double v = 0.0;
};

struct SuperminimalityReport {
  GridMax vertical;
  GridMax indicatrix;
  GridMax holonomy;
  GridMax mean_curvature;
  bool finite_difference = false;
};

struct SweepOptions {
  bool holonomy = true;
  geom::TransportOptions transport{};
};

SuperminimalityReport superminimality_sweep(const ImmersedSurface& s, const SweepOptions& options = {});

}  // namespace tz::surface
