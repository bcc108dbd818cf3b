#include "tz/lagrangian.hpp"

#include "tz/parallel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace tz::lagrangian {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Mat4 value_part(const Mat4T<Dual1>& m) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = m(i, j).v;
  return r;
}

Mat4 derivative_part(const Mat4T<Dual1>& m) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = m(i, j).d;
  return r;
}

Vec4T<Dual1> dual_vec(const Vec4& v, const Vec4& d) {
  Vec4T<Dual1> r;
  for (int i = 0; i < 4; ++i) r(i) = Dual1(v(i), d(i));
  return r;
}

// Q = E⁻¹ F: the adapted frame written in the reference frame, with its
// derivative along one parameter direction.
struct FrameChange {
  Mat4 q, dq;
};

FrameChange frame_change(const geom::ManifoldModel& m, const std::array<int, 4>& reference, const Vec4& x,
                         const Vec4& xu, const Vec4& xv, const Vec4& dx, const Vec4& dxu, const Vec4& dxv) {
  const Vec4T<Dual1> xd = dual_vec(x, dx);
  const Mat4T<Dual1> g = geom::metric_t<Dual1>(m.kind, xd);
  const Mat4T<Dual1> e = geom::reference_frame_t<Dual1>(g);
  const Mat4T<Dual1> f = surface::adapted_frame_t<Dual1>(g, dual_vec(xu, dxu), dual_vec(xv, dxv), reference);
  const Mat4T<Dual1> q = e.transpose() * g * f;
  return {value_part(q), derivative_part(q)};
}

double norm_sq(double lambda, const BaseData& b, const Vec3& j, const TwistorTangent& v) {
  return twistor::metric(lambda, b, j, v, v);
}

std::vector<TwistorTangent> orthonormalize(double lambda, const BaseData& b, const Vec3& j, const Frame3& f) {
  std::vector<TwistorTangent> out;
  for (TwistorTangent v : f) {
    const double n0 = std::sqrt(std::max(norm_sq(lambda, b, j, v), 0.0));
    if (!(n0 > 0.0)) continue;
    for (const auto& e : out) v = v - e * twistor::metric(lambda, b, j, v, e);
    const double n = std::sqrt(std::max(norm_sq(lambda, b, j, v), 0.0));
    if (n <= 1e-9 * n0) continue;
    out.push_back(v * (1.0 / n));
  }
  return out;
}

int numerical_rank(const Eigen::MatrixXd& m, double rel) {
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  if (s.size() == 0 || !(s(0) > 1e-300)) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rel * s(0)) ++r;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

LagrangianPatch::LagrangianPatch(ImmersedSurface s, int n_theta) : surface_(std::move(s)), n_theta_(n_theta) {
  if (n_theta_ < 1) throw Error(ErrorKind::InvalidArgument, "n_theta must be positive");
}

double LagrangianPatch::theta(int k) const { return kTwoPi * k / n_theta_; }

LiftJet LagrangianPatch::jet(double u, double v, double theta) const {
  const surface::SurfaceJet sj = surface_.jet(u, v);
  const auto& m = model();
  geom::require_inside_chart(m, sj.x);
  surface::check_immersion(geom::metric_at(m, sj.x), sj.xu, sj.xv);
  const auto& ref = surface_.normal_reference();

  const Mat4 jt = twistor::equator_J_frame(theta);
  const FrameChange cu = frame_change(m, ref, sj.x, sj.xu, sj.xv, sj.xu, sj.xuu, sj.xuv);
  const FrameChange cv = frame_change(m, ref, sj.x, sj.xu, sj.xv, sj.xv, sj.xuv, sj.xvv);
  const Mat4& q = cu.q;

  LiftJet out;
  out.point.base = sj.x;
  out.point.fiber = twistor::triple_coordinates(q * jt * q.transpose());
  auto moved = [&](const FrameChange& c) {
    return twistor::triple_coordinates(c.dq * jt * q.transpose() + q * jt * c.dq.transpose());
  };
  out.d[0] = {sj.xu, moved(cu)};
  out.d[1] = {sj.xv, moved(cv)};
  // d/dθ J_θ = J_{θ+π/2}
  out.d[2] = {Vec4::Zero(), twistor::triple_coordinates(q * twistor::equator_J_frame(theta + 0.5 * std::numbers::pi) *
                                                        q.transpose())};
  return out;
}

TwistorPoint LagrangianPatch::point(double u, double v, double theta) const { return jet(u, v, theta).point; }

TwistorPoint LagrangianPatch::point(int i, int j, int k) const {
  return point(surface_.grid_u(i), surface_.grid_v(j), this->theta(k));
}

LagrangianPatch build_lift(const ImmersedSurface& s, int n_theta) {
  // The immersion condition is a precondition of the construction: fail fast.
  for (int i = 0; i < s.grid().nu; ++i)
    for (int j = 0; j < s.grid().nv; ++j) {
      const surface::SurfaceJet sj = s.jet(s.grid_u(i), s.grid_v(j));
      surface::check_immersion(geom::metric_at(s.model(), sj.x), sj.xu, sj.xv);
    }
  return LagrangianPatch(s, n_theta);
}

TwistorPoint canonical_lift(const ImmersedSurface& s, double u, double v) {
  const surface::SurfaceJet sj = s.jet(u, v);
  const Mat4 g = geom::metric_at(s.model(), sj.x);
  const Mat4 e = geom::reference_frame_t<double>(g);
  const Mat4 f = surface::adapted_frame(s, u, v).e;
  const Mat4 q = e.transpose() * g * f;
  return {sj.x, twistor::triple_coordinates(q * twistor::quaternionic_triple()[0] * q.transpose())};
}

Frame3 tangent_frame_L(const LagrangianPatch& patch, double u, double v, double theta) {
  const LiftJet lj = patch.jet(u, v, theta);
  const BaseData b = twistor::base_data(patch.model(), lj.point.base);
  Frame3 f = lj.d;
  const Vec3& t = f[2].dj;
  for (int a = 0; a < 2; ++a) {
    const Vec3 vert = twistor::vertical_part(b, lj.point.fiber, f[a]);
    f[a] = f[a] - f[2] * (vert.dot(t) / t.squaredNorm());
  }
  return f;
}

Frame3 normalize_frame(double lambda, const BaseData& b, const Vec3& j, const Frame3& f) {
  Frame3 out;
  for (int a = 0; a < 3; ++a) out[a] = f[a] * (1.0 / std::sqrt(norm_sq(lambda, b, j, f[a])));
  return out;
}

// ---------------------------------------------------------------------------

double CandidateChart::t(int k) const { return kTwoPi * k / n_theta; }

CandidateChart as_candidate(const LagrangianPatch& patch, std::string name) {
  CandidateChart c;
  c.name = std::move(name);
  c.model = patch.model();
  c.domain = patch.surface().domain();
  c.grid = patch.surface().grid();
  c.n_theta = patch.n_theta();
  c.jet = [patch](double u, double v, double t) { return patch.jet(u, v, t); };
  c.surface = patch.surface();
  return c;
}

CandidateChart fiber_candidate(const geom::ManifoldModel& model, const geom::ChartPoint& x0) {
  geom::require_inside_chart(model, x0);
  CandidateChart c;
  c.name = "fiber-only";
  c.model = model;
  c.grid = {8, 8};
  c.n_theta = 8;
  const Vec3 a = Vec3(1, 1, 1).normalized();
  const Vec3 b = Vec3(1, -1, 0).normalized();
  c.jet = [x0, a, b](double u, double v, double t) {
    const double s = u + v + t;
    LiftJet lj;
    lj.point = {x0, std::cos(s) * a + std::sin(s) * b};
    const Vec3 d = -std::sin(s) * a + std::cos(s) * b;
    lj.d = {TwistorTangent{Vec4::Zero(), d}, TwistorTangent{Vec4::Zero(), d}, TwistorTangent{Vec4::Zero(), d}};
    return lj;
  };
  return c;
}

double DefectReport::max() const { return std::max({max_omega_plus, max_omega_minus, max_metric_defect}); }

DefectReport lagrangian_defect(const CandidateChart& c, const std::vector<double>& lambdas,
                               const std::vector<Sign>& signs) {
  for (double l : lambdas)
    if (!(l > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
  const int nu = c.grid.nu, nv = c.grid.nv, nt = c.n_theta;

  std::vector<DefectReport> rows(nu);
  parallel_for(nu, [&](int i) {
    DefectReport& r = rows[i];
    for (int j = 0; j < nv; ++j)
      for (int k = 0; k < nt; ++k) {
        const LiftJet lj = c.jet(c.u(i), c.v(j), c.t(k));
        const TwistorPoint& p = lj.point;
        const BaseData b = twistor::base_data(c.model, p.base);
        const int chart = twistor::choose_fiber_chart(p.fiber);
        const Vec6 y = twistor::to_chart(p, chart);
        for (double lambda : lambdas) {
          const std::vector<TwistorTangent> e = orthonormalize(lambda, b, p.fiber, lj.d);
          const Mat6 G = twistor::twistor_metric_chart(lambda, c.model, y, chart);
          std::vector<Vec6> dy;
          for (const auto& t : e) dy.push_back(twistor::tangent_to_chart(p, chart, t));
          for (Sign sign : signs) {
            const HermitianPack pack{lambda, sign};
            const Mat6 J = twistor::twistor_acs(pack, c.model, p);
            const SampleIndex at{i, j, k, lambda};
            for (size_t a = 0; a < e.size(); ++a)
              for (size_t bb = a + 1; bb < e.size(); ++bb) {
                const twistor::KahlerSplit ks = twistor::kahler_split(pack, b, p.fiber, e[a], e[bb]);
                const double w = std::abs(ks.total()), wv = std::abs(ks.vertical);
                const double md = std::abs((J * dy[a]).dot(G * dy[bb]));
                if (sign == Sign::Plus) {
                  if (w > r.max_omega_plus) r.max_omega_plus = w, r.argmax_plus = at;
                  r.max_vertical_plus = std::max(r.max_vertical_plus, wv);
                } else {
                  if (w > r.max_omega_minus) r.max_omega_minus = w, r.argmax_minus = at;
                  r.max_vertical_minus = std::max(r.max_vertical_minus, wv);
                }
                if (md > r.max_metric_defect) r.max_metric_defect = md, r.argmax_metric = at;
              }
          }
        }
      }
  });

  DefectReport out;
  out.lambda_list = lambdas;
  out.argmax_plus = out.argmax_minus = out.argmax_metric = SampleIndex{0, 0, 0, lambdas.empty() ? 0.0 : lambdas[0]};
  for (const DefectReport& r : rows) {
    if (r.max_omega_plus > out.max_omega_plus) out.max_omega_plus = r.max_omega_plus, out.argmax_plus = r.argmax_plus;
    if (r.max_omega_minus > out.max_omega_minus)
      out.max_omega_minus = r.max_omega_minus, out.argmax_minus = r.argmax_minus;
    if (r.max_metric_defect > out.max_metric_defect)
      out.max_metric_defect = r.max_metric_defect, out.argmax_metric = r.argmax_metric;
    out.max_vertical_plus = std::max(out.max_vertical_plus, r.max_vertical_plus);
    out.max_vertical_minus = std::max(out.max_vertical_minus, r.max_vertical_minus);
  }
  return out;
}

DefectReport lagrangian_defect(const LagrangianPatch& patch, const std::vector<double>& lambdas,
                               const std::vector<Sign>& signs) {
  return lagrangian_defect(as_candidate(patch), lambdas, signs);
}

DefectReport lagrangian_defect(const LagrangianPatch& patch, const HermitianPack& pack) {
  twistor::require_valid(pack);
  return lagrangian_defect(patch, std::vector<double>{pack.lambda}, std::vector<Sign>{pack.sign});
}

// ---------------------------------------------------------------------------

namespace {

struct MeanCurvatureData {
  Vec6 normal;  // mean curvature vector in chart coordinates (dx, dw)
  Vec3 components;
};

MeanCurvatureData mean_curvature_data(const LagrangianPatch& patch, const HermitianPack& pack, double u, double v,
                                      double theta, double step) {
  twistor::require_valid(pack);
  if (!(step > 1e-12)) throw Error(ErrorKind::StepSizeUnderflow, "mean-curvature stencil step underflow");
  const auto& model = patch.model();
  const LiftJet lj = patch.jet(u, v, theta);
  const int chart = twistor::choose_fiber_chart(lj.point.fiber);
  const Vec6 y = twistor::to_chart(lj.point, chart);

  auto chart_tangents = [&](const Vec3& s) {
    const LiftJet q = patch.jet(s(0), s(1), s(2));
    std::array<Vec6, 3> out;
    for (int a = 0; a < 3; ++a) out[a] = twistor::tangent_to_chart(q.point, chart, q.d[a]);
    return out;
  };
  const Vec3 s0(u, v, theta);
  const std::array<Vec6, 3> Y = chart_tangents(s0);
  std::array<std::array<Vec6, 3>, 3> d2;  // d2[b][a] = ∂_b Y_a
  for (int b = 0; b < 3; ++b) {
    const Vec3 e = Vec3::Unit(b) * step;
    const auto p = chart_tangents(s0 + e), m = chart_tangents(s0 - e);
    for (int a = 0; a < 3; ++a) d2[b][a] = (p[a] - m[a]) / (2.0 * step);
  }

  const Mat6 G = twistor::twistor_metric_chart(pack.lambda, model, y, chart);
  const std::array<Mat6, 6> gam = twistor::twistor_christoffel(pack.lambda, model, y, chart, step);
  Mat3 ind;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) ind(a, b) = Y[a].dot(G * Y[b]);
  const Mat3 inv = ind.inverse();

  Vec6 H = Vec6::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Vec6 acc = 0.5 * (d2[a][b] + d2[b][a]);
      for (int k = 0; k < 6; ++k) acc(k) += Y[a].dot(gam[k] * Y[b]);
      H += inv(a, b) * acc;
    }
  auto tangential = [&](const Vec6& w) {
    Vec3 c;
    for (int a = 0; a < 3; ++a) c(a) = Y[a].dot(G * w);
    const Vec3 coef = inv * c;
    return Vec6(coef(0) * Y[0] + coef(1) * Y[1] + coef(2) * Y[2]);
  };
  MeanCurvatureData out;
  out.normal = H - tangential(H);

  std::vector<Vec6> nf;
  for (int r = 0; r < 6 && nf.size() < 3; ++r) {
    Vec6 w = Vec6::Unit(r);
    w -= tangential(w);
    for (const auto& n : nf) w -= n * n.dot(G * w);
    const double len = std::sqrt(std::max(w.dot(G * w), 0.0));
    if (len < 1e-6) continue;
    nf.push_back(w / len);
  }
  if (nf.size() < 3) throw Error(ErrorKind::RankDeficient, "could not complete the normal frame of L");
  for (int a = 0; a < 3; ++a) out.components(a) = nf[a].dot(G * out.normal);
  return out;
}

}  // namespace

Vec3 mean_curvature_L(const LagrangianPatch& patch, const HermitianPack& pack, double u, double v, double theta,
                      double step) {
  return mean_curvature_data(patch, pack, u, v, theta, step).components;
}

Vec4 mean_curvature_L_horizontal_mean(const LagrangianPatch& patch, const HermitianPack& pack, double u, double v,
                                      double step) {
  Vec4 acc = Vec4::Zero();
  for (int k = 0; k < patch.n_theta(); ++k)
    acc += mean_curvature_data(patch, pack, u, v, patch.theta(k), step).normal.head<4>();
  return acc / patch.n_theta();
}

MeanCurvatureReport mean_curvature_sweep(const LagrangianPatch& patch, const std::vector<double>& lambdas,
                                         double step) {
  const auto& s = patch.surface();
  const int i0 = kInteriorMargin, i1 = s.grid().nu - 1 - kInteriorMargin;
  const int j0 = kInteriorMargin, j1 = s.grid().nv - 1 - kInteriorMargin;
  if (i1 < i0 || j1 < j0) throw Error(ErrorKind::OutOfRange, "grid has no interior samples");
  const int ni = i1 - i0 + 1;
  std::vector<MeanCurvatureReport> rows(ni);
  parallel_for(ni, [&](int r) {
    const int i = i0 + r;
    MeanCurvatureReport& m = rows[r];
    for (int j = j0; j <= j1; ++j)
      for (int k = 0; k < patch.n_theta(); ++k)
        for (double lambda : lambdas) {
          const double n =
              mean_curvature_L(patch, {lambda, Sign::Plus}, s.grid_u(i), s.grid_v(j), patch.theta(k), step).norm();
          ++m.samples;
          if (n > m.max_norm || m.argmax.i < 0) m.max_norm = n, m.argmax = {i, j, k, lambda};
        }
  });
  MeanCurvatureReport out;
  for (const auto& m : rows) {
    out.samples += m.samples;
    if (m.max_norm > out.max_norm || out.argmax.i < 0) out.max_norm = m.max_norm, out.argmax = m.argmax;
  }
  return out;
}

double ruling_defect(const LagrangianPatch& patch, double lambda, double u, double v, double theta, double T,
                     int steps) {
  const LiftJet lj = patch.jet(u, v, theta);
  const BaseData b = twistor::base_data(patch.model(), lj.point.base);
  const TwistorTangent v3 = lj.d[2] * (1.0 / std::sqrt(norm_sq(lambda, b, lj.point.fiber, lj.d[2])));
  const Vec3 pole = canonical_lift(patch.surface(), u, v).fiber;
  twistor::GeodesicOptions opt;
  opt.steps = steps;
  double worst = 0.0;
  for (const TwistorPoint& p : twistor::geodesic(lambda, patch.model(), lj.point, v3, T, opt))
    worst = std::max({worst, (p.base - lj.point.base).norm(), std::abs(p.fiber.dot(pole))});
  return worst;
}

// ---------------------------------------------------------------------------

std::string ConverseReport::failed_stage() const {
  if (!lagrangian.pass) return "lagrangian";
  if (!rank.pass) return "rank";
  if (!superminimal.pass) return "superminimal";
  if (!containment.pass) return "containment";
  return "";
}

ConverseReport converse_check(const CandidateChart& c, const std::vector<double>& lambdas,
                              const ConverseThresholds& th) {
  ConverseReport rep;

  // (a) Lagrangian for every listed λ and both signs.
  rep.defects = lagrangian_defect(c, lambdas);
  rep.lagrangian = {true, rep.defects.max() < th.lagrangian, rep.defects.max(), th.lagrangian, ""};
  if (!rep.lagrangian.pass) {
    std::ostringstream os;
    os << "max Lagrangian defect " << rep.defects.max();
    rep.lagrangian.detail = os.str();
    return rep;
  }

  // (b) the candidate is a 3-fold and its projection a surface.
  const int nu = c.grid.nu, nv = c.grid.nv, nt = c.n_theta;
  int cand_min = 3, proj_min = 4, proj_max = 0;
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j)
      for (int k = 0; k < nt; ++k) {
        const LiftJet lj = c.jet(c.u(i), c.v(j), c.t(k));
        Eigen::MatrixXd full(7, 3), proj(4, 3);
        for (int a = 0; a < 3; ++a) {
          full.col(a) << lj.d[a].dx, lj.d[a].dj;
          proj.col(a) = lj.d[a].dx;
        }
        cand_min = std::min(cand_min, numerical_rank(full, th.rank));
        const int pr = numerical_rank(proj, th.rank);
        proj_min = std::min(proj_min, pr);
        proj_max = std::max(proj_max, pr);
      }
  rep.candidate_rank = cand_min;
  rep.projected_rank = proj_min;
  {
    std::ostringstream os;
    os << "candidate rank " << cand_min << ", projected rank " << proj_min;
    if (proj_max != proj_min) os << ".." << proj_max;
    rep.rank = {true, cand_min == 3 && proj_min == 2 && proj_max == 2, double(proj_min), 2.0, os.str()};
  }
  if (!rep.rank.pass) return rep;

  // (c) superminimality of the projected surface.
  const double t0 = c.t(0);
  const ImmersedSurface proj =
      c.surface ? *c.surface
                : ImmersedSurface::from_map(
                      c.model, [jet = c.jet, t0](double u, double v) { return Vec4(jet(u, v, t0).point.base); },
                      c.domain, c.grid);
  const surface::SuperminimalityReport sm = surface::superminimality_sweep(proj);
  rep.projection = sm;
  const bool fd = proj.finite_difference();
  const double tv = fd ? th.finite_difference : th.vertical;
  const double ti = fd ? th.finite_difference : th.indicatrix;
  const double tH = fd ? th.finite_difference : th.holonomy;
  {
    std::ostringstream os;
    os << "vertical " << sm.vertical.value << ", indicatrix " << sm.indicatrix.value << ", holonomy "
       << sm.holonomy.value;
    const double worst = std::max({sm.vertical.value / tv, sm.indicatrix.value / ti, sm.holonomy.value / tH});
    rep.superminimal = {true, sm.vertical.value < tv && sm.indicatrix.value < ti && sm.holonomy.value < tH,
                        worst, 1.0, os.str()};
  }
  if (!rep.superminimal.pass) return rep;

  // (d) every candidate point lies on the equator of the projected tangent plane.
  double worst = 0.0;
  const std::array<int, 4> ref = proj.normal_reference();
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j)
      for (int k = 0; k < nt; ++k) {
        const LiftJet lj = c.jet(c.u(i), c.v(j), c.t(k));
        const Mat4 g = geom::metric_at(c.model, lj.point.base);
        std::vector<Vec4> plane;
        for (int a = 0; a < 3 && plane.size() < 2; ++a) {
          Vec4 w = lj.d[a].dx;
          const double n0 = std::sqrt(w.dot(g * w));
          if (!(n0 > 0.0)) continue;
          for (const auto& p : plane) w -= p * p.dot(g * w);
          const double n = std::sqrt(w.dot(g * w));
          if (n > 1e-8 * n0) plane.push_back(w / n);
        }
        const Mat4 f = surface::adapted_frame_t<double>(g, plane[0], plane[1], ref);
        const Mat4 e = geom::reference_frame_t<double>(g);
        const Mat4 q = e.transpose() * g * f;
        const Vec3 pole = twistor::triple_coordinates(q * twistor::quaternionic_triple()[0] * q.transpose());
        worst = std::max(worst, std::abs(lj.point.fiber.dot(pole)));
      }
  rep.containment = {true, worst < th.containment, worst, th.containment, ""};
  return rep;
}

}  // namespace tz::lagrangian
