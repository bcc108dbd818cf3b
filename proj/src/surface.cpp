#include "tz/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace tz::surface {

namespace {

SurfaceJet jets_from_exprs(const std::array<expr::Expr, 4>& coords, double u, double v) {
  SurfaceJet j;
  for (int k = 0; k < 4; ++k) {
    const expr::Jet2 c = coords[k].eval_jet2(u, v);
    j.x(k) = c.value;
    j.xu(k) = c.du;
    j.xv(k) = c.dv;
    j.xuu(k) = c.duu;
    j.xuv(k) = c.duv;
    j.xvv(k) = c.dvv;
  }
  return j;
}

std::array<int, 4> choose_normal_reference(const ManifoldModel& model, const SurfaceJet& j) {
  const Mat4 g = geom::metric_at(model, j.x);
  check_immersion(g, j.xu, j.xv);
  Eigen::Matrix<double, 4, 2> t;
  t.col(0) = j.xu;
  t.col(1) = j.xv;
  const Mat2 G = t.transpose() * g * t;
  const Mat4 proj = t * G.inverse() * t.transpose() * g;  // g-orthogonal projector onto TΣ
  std::array<double, 4> residual{};
  for (int k = 0; k < 4; ++k) {
    Vec4 c = Vec4::Unit(k);
    const Vec4 r = c - proj * c;
    residual[k] = std::sqrt(r.dot(g * r) / c.dot(g * c));
  }
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return residual[a] > residual[b]; });
  return order;
}

Mat4 frame_at(const ImmersedSurface& s, const SurfaceJet& j, const Mat4& g) {
  check_immersion(g, j.xu, j.xv);
  return adapted_frame_t<double>(g, j.xu, j.xv, s.normal_reference());
}

// ⋆ on 2-tensors in an oriented orthonormal frame: (⋆w)_ij = ½ ε_ijkl w_kl.
Mat4 hodge_star(const Mat4& w) {
  Mat4 s = Mat4::Zero();
  static const int perms[24][4] = {
      {0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {0, 3, 2, 1},
      {1, 0, 2, 3}, {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 2, 3, 0}, {1, 3, 0, 2}, {1, 3, 2, 0},
      {2, 0, 1, 3}, {2, 0, 3, 1}, {2, 1, 0, 3}, {2, 1, 3, 0}, {2, 3, 0, 1}, {2, 3, 1, 0},
      {3, 0, 1, 2}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 1, 2, 0}, {3, 2, 0, 1}, {3, 2, 1, 0}};
  static const int signs[24] = {1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1, 1,
                                1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1, 1};
  for (int p = 0; p < 24; ++p) {
    const int* q = perms[p];
    s(q[0], q[1]) += 0.5 * signs[p] * w(q[2], q[3]);
  }
  return s;
}

}  // namespace

ImmersedSurface::ImmersedSurface(const ManifoldModel& model, JetFn jets, const Domain& domain,
                                 const Grid& grid, bool fd)
    : model_(model), jets_(std::move(jets)), domain_(domain), grid_(grid), finite_difference_(fd) {
  if (!(domain.u1 > domain.u0) || !(domain.v1 > domain.v0))
    throw Error(ErrorKind::InvalidArgument, "surface domain must be a non-empty rectangle");
  if (grid.nu < 2 || grid.nv < 2) throw Error(ErrorKind::InvalidArgument, "surface grid needs at least 2x2 samples");
  const SurfaceJet center = jets_(0.5 * (domain.u0 + domain.u1), 0.5 * (domain.v0 + domain.v1));
  normal_reference_ = choose_normal_reference(model_, center);
}

ImmersedSurface ImmersedSurface::from_formulas(const ManifoldModel& model,
                                               const std::array<std::string, 4>& formulas,
                                               const Domain& domain, const Grid& grid) {
  std::array<expr::Expr, 4> coords;
  for (int k = 0; k < 4; ++k) coords[k] = expr::parse(formulas[k]);
  ImmersedSurface s(model, [coords](double u, double v) { return jets_from_exprs(coords, u, v); }, domain,
                    grid, false);
  s.formulas_ = formulas;
  return s;
}

ImmersedSurface ImmersedSurface::from_map(const ManifoldModel& model, std::function<Vec4(double, double)> map,
                                          const Domain& domain, const Grid& grid, double step) {
  auto jets = [map = std::move(map), h = step](double u, double v) {
    SurfaceJet j;
    const Vec4 c = map(u, v);
    const Vec4 pu = map(u + h, v), mu = map(u - h, v);
    const Vec4 pv = map(u, v + h), mv = map(u, v - h);
    j.x = c;
    j.xu = (pu - mu) / (2 * h);
    j.xv = (pv - mv) / (2 * h);
    j.xuu = (pu - 2 * c + mu) / (h * h);
    j.xvv = (pv - 2 * c + mv) / (h * h);
    j.xuv = (map(u + h, v + h) - map(u + h, v - h) - map(u - h, v + h) + map(u - h, v - h)) / (4 * h * h);
    return j;
  };
  return ImmersedSurface(model, std::move(jets), domain, grid, true);
}

ImmersedSurface ImmersedSurface::from_jets(const ManifoldModel& model, JetFn jets, const Domain& domain,
                                           const Grid& grid) {
  return ImmersedSurface(model, std::move(jets), domain, grid, false);
}

bool ImmersedSurface::contains(double u, double v) const {
  const double eu = 1e-9 * (domain_.u1 - domain_.u0), ev = 1e-9 * (domain_.v1 - domain_.v0);
  return u >= domain_.u0 - eu && u <= domain_.u1 + eu && v >= domain_.v0 - ev && v <= domain_.v1 + ev;
}

SurfaceJet ImmersedSurface::jet(double u, double v) const {
  if (!contains(u, v)) {
    std::ostringstream os;
    os << "(" << u << ", " << v << ") outside the surface domain";
    throw Error(ErrorKind::OutOfRange, os.str());
  }
  return jets_(u, v);
}

double ImmersedSurface::grid_u(int i) const {
  return domain_.u0 + (domain_.u1 - domain_.u0) * i / (grid_.nu - 1);
}

double ImmersedSurface::grid_v(int j) const {
  return domain_.v0 + (domain_.v1 - domain_.v0) * j / (grid_.nv - 1);
}

void check_immersion(const Mat4& g, const Vec4& xu, const Vec4& xv) {
  const double guu = xu.dot(g * xu), gvv = xv.dot(g * xv), guv = xu.dot(g * xv);
  const Mat2 G{{guu, guv}, {guv, gvv}};
  const Eigen::SelfAdjointEigenSolver<Mat2> es(G);
  const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(1);
  if (!(hi > 0.0) || !(lo > 0.0) || std::sqrt(hi / lo) > kImmersionConditionBound) {
    throw Error(ErrorKind::DegenerateImmersion, "coordinate tangent vectors are linearly dependent");
  }
}

AdaptedFrame adapted_frame(const ImmersedSurface& s, double u, double v) {
  const SurfaceJet j = s.jet(u, v);
  const Mat4 g = geom::metric_at(s.model(), j.x);
  return AdaptedFrame{frame_at(s, j, g)};
}

SecondFundamentalForm second_fundamental_form(const ImmersedSurface& s, double u, double v) {
  const SurfaceJet j = s.jet(u, v);
  const Mat4 g = geom::metric_at(s.model(), j.x);
  const Mat4 e = frame_at(s, j, g);
  const geom::Christoffel gam = geom::christoffel_at(s.model(), j.x);

  Eigen::Matrix<double, 4, 2> t;
  t.col(0) = j.xu;
  t.col(1) = j.xv;
  const Mat2 G = t.transpose() * g * t;
  // e_i = Σ_a C(a, i) x_a
  const Mat2 C = G.inverse() * (t.transpose() * g * e.leftCols<2>());
  const std::array<std::array<Vec4, 2>, 2> K = {
      std::array<Vec4, 2>{j.xuu + gam.apply(j.xu, j.xu), j.xuv + gam.apply(j.xu, j.xv)},
      std::array<Vec4, 2>{j.xuv + gam.apply(j.xv, j.xu), j.xvv + gam.apply(j.xv, j.xv)}};

  SecondFundamentalForm out;
  for (int alpha = 0; alpha < 2; ++alpha) {
    const Vec4 n = g * e.col(2 + alpha);
    Mat2 k;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) k(a, b) = K[a][b].dot(n);
    out.h[alpha] = C.transpose() * k * C;
    out.h[alpha] = 0.5 * (out.h[alpha] + out.h[alpha].transpose()).eval();
  }
  return out;
}

Vec2 mean_curvature_surface(const ImmersedSurface& s, double u, double v) {
  const SecondFundamentalForm h = second_fundamental_form(s, u, v);
  return {h.h[0].trace(), h.h[1].trace()};
}

IndicatrixReport indicatrix(const SecondFundamentalForm& h) {
  // h(X, X) for X = cos t e1 + sin t e2 equals  center + M (cos 2t, sin 2t).
  IndicatrixReport r;
  Mat2 M;
  for (int alpha = 0; alpha < 2; ++alpha) {
    const Mat2& k = h.h[alpha];
    r.center(alpha) = 0.5 * (k(0, 0) + k(1, 1));
    M(alpha, 0) = 0.5 * (k(0, 0) - k(1, 1));
    M(alpha, 1) = k(0, 1);
  }
  const Eigen::JacobiSVD<Mat2> svd(M);
  r.a = svd.singularValues()(0);
  r.b = svd.singularValues()(1);
  r.circularity_defect = std::max(std::abs(r.a - r.b), r.center.norm());
  return r;
}

Mat4 standard_J0() {
  Mat4 j = Mat4::Zero();
  j(1, 0) = 1.0;
  j(0, 1) = -1.0;
  j(3, 2) = 1.0;
  j(2, 3) = -1.0;
  return j;
}

std::array<Mat4, 2> covariant_derivative_J0(const ImmersedSurface& s, double u, double v) {
  const SurfaceJet j = s.jet(u, v);
  const Mat4 g = geom::metric_at(s.model(), j.x);
  const Mat4 e = frame_at(s, j, g);
  const geom::Christoffel gam = geom::christoffel_at(s.model(), j.x);

  // J₀ is determined by the unit tangent bivector S = x_u ∧ x_v / √det G:
  // ∇J₀ corresponds to ∇S + ⋆∇S, computed here in the adapted frame.
  auto wedge = [](const Vec4& a, const Vec4& b) -> Mat4 { return a * b.transpose() - b * a.transpose(); };
  const double guu = j.xu.dot(g * j.xu), gvv = j.xv.dot(g * j.xv), guv = j.xu.dot(g * j.xv);
  const double det = guu * gvv - guv * guv;
  const double root = std::sqrt(det);
  const Mat4 S = wedge(j.xu, j.xv) / root;
  const Mat4 to_frame = e.transpose() * g;  // E⁻¹

  std::array<Mat4, 2> out;
  const std::array<Vec4, 2> dir = {j.xu, j.xv};
  const std::array<Vec4, 2> d_xu = {j.xuu, j.xuv};
  const std::array<Vec4, 2> d_xv = {j.xuv, j.xvv};
  for (int a = 0; a < 2; ++a) {
    const Vec4 Dxu = d_xu[a] + gam.apply(dir[a], j.xu);
    const Vec4 Dxv = d_xv[a] + gam.apply(dir[a], j.xv);
    const double dguu = 2.0 * Dxu.dot(g * j.xu);
    const double dgvv = 2.0 * Dxv.dot(g * j.xv);
    const double dguv = Dxu.dot(g * j.xv) + j.xu.dot(g * Dxv);
    const double ddet = dguu * gvv + guu * dgvv - 2.0 * guv * dguv;
    const Mat4 dS = (wedge(Dxu, j.xv) + wedge(j.xu, Dxv)) / root - S * (0.5 * ddet / det);
    const Mat4 w = to_frame * dS * to_frame.transpose();
    // The frame matrix of J₀ as an endomorphism is −(σ + ⋆σ).
    out[a] = -(w + hodge_star(w));
  }
  return out;
}

double vertical_defect(const ImmersedSurface& s, double u, double v) {
  const std::array<Mat4, 2> d = covariant_derivative_J0(s, u, v);
  double m = 0.0;
  for (const Mat4& x : d) {
    const Eigen::JacobiSVD<Mat4> svd(x);
    m = std::max(m, svd.singularValues()(0));
  }
  return m;
}

HolonomyReport holonomy_in_u2(const ImmersedSurface& s, const std::vector<Vec2>& loop,
                              const geom::TransportOptions& options) {
  if (loop.size() < 3 || (loop.front() - loop.back()).norm() > 1e-12)
    throw Error(ErrorKind::OpenLoop, "holonomy loop must be closed");
  for (const Vec2& p : loop)
    if (!s.contains(p(0), p(1))) throw Error(ErrorKind::OutOfRange, "holonomy loop leaves the surface domain");

  const int segments = static_cast<int>(loop.size()) - 1;
  double perimeter = 0.0;
  for (int i = 0; i < segments; ++i) perimeter += (loop[i + 1] - loop[i]).norm();

  // (u, v) polygon with velocity vanishing at the corners; parameter length
  // per segment equals the segment's (u, v) length.
  std::vector<double> knots(segments + 1, 0.0);
  for (int i = 0; i < segments; ++i) knots[i + 1] = knots[i] + (loop[i + 1] - loop[i]).norm();
  auto param = [&](double t, Vec2& uv, Vec2& duv) {
    int i = static_cast<int>(std::upper_bound(knots.begin(), knots.end(), t) - knots.begin()) - 1;
    i = std::clamp(i, 0, segments - 1);
    const double len = knots[i + 1] - knots[i];
    const double tau = len > 0 ? (t - knots[i]) / len : 0.0;
    const double w = 2.0 * std::numbers::pi;
    const double sm = tau - std::sin(w * tau) / w;
    const double dsm = (1.0 - std::cos(w * tau)) / (len > 0 ? len : 1.0);
    const Vec2 d = loop[i + 1] - loop[i];
    uv = loop[i] + sm * d;
    duv = dsm * d;
  };

  geom::Curve curve;
  curve.t0 = 0.0;
  curve.t1 = perimeter;
  curve.eval = [&](double t) {
    Vec2 uv, duv;
    param(t, uv, duv);
    const SurfaceJet j = s.jet(uv(0), uv(1));
    return geom::CurveSample{j.x, j.xu * duv(0) + j.xv * duv(1)};
  };

  const Mat4 J0 = standard_J0();
  const SurfaceJet j0 = s.jet(loop.front()(0), loop.front()(1));
  const Mat4 g0 = geom::metric_at(s.model(), j0.x);
  const Mat4 start = frame_at(s, j0, g0);

  HolonomyReport rep;
  auto observer = [&](double t, const geom::ChartPoint& x, const Mat4& transported) {
    Vec2 uv, duv;
    param(std::min(t, perimeter), uv, duv);
    const SurfaceJet jt = s.jet(uv(0), uv(1));
    const Mat4 g = geom::metric_at(s.model(), x);
    const Mat4 here = frame_at(s, jt, g);
    const Mat4 gt = here.transpose() * g * transported;
    rep.commutator_defect = std::max(rep.commutator_defect, (gt * J0 - J0 * gt).norm());
  };
  const Mat4 end = geom::parallel_transport(s.model(), curve, start, options, observer);
  rep.rotation = start.transpose() * g0 * end;
  rep.endpoint_defect = (rep.rotation * J0 - J0 * rep.rotation).norm();
  return rep;
}

std::vector<Vec2> cell_loop(const ImmersedSurface& s, int i, int j) {
  if (i < 0 || j < 0 || i + 1 >= s.grid().nu || j + 1 >= s.grid().nv)
    throw Error(ErrorKind::OutOfRange, "grid cell index out of range");
  const double a = s.grid_u(i), b = s.grid_u(i + 1), c = s.grid_v(j), d = s.grid_v(j + 1);
  return {Vec2(a, c), Vec2(b, c), Vec2(b, d), Vec2(a, d), Vec2(a, c)};
}

SuperminimalityReport superminimality_sweep(const ImmersedSurface& s, const SweepOptions& options) {
  SuperminimalityReport rep;
  rep.finite_difference = s.finite_difference();
  auto update = [](GridMax& m, double value, double u, double v) {
    if (value > m.value) m = GridMax{value, u, v};
  };
  for (int i = 0; i < s.grid().nu; ++i) {
    for (int j = 0; j < s.grid().nv; ++j) {
      const double u = s.grid_u(i), v = s.grid_v(j);
      update(rep.vertical, vertical_defect(s, u, v), u, v);
      const SecondFundamentalForm h = second_fundamental_form(s, u, v);
      update(rep.indicatrix, indicatrix(h).circularity_defect, u, v);
      update(rep.mean_curvature, Vec2(h.h[0].trace(), h.h[1].trace()).norm(), u, v);
    }
  }
  if (options.holonomy) {
    for (int i = 0; i + 1 < s.grid().nu; ++i)
      for (int j = 0; j + 1 < s.grid().nv; ++j) {
        const HolonomyReport h = holonomy_in_u2(s, cell_loop(s, i, j), options.transport);
        update(rep.holonomy, h.commutator_defect, s.grid_u(i), s.grid_v(j));
      }
  }
  return rep;
}

}  // namespace tz::surface
