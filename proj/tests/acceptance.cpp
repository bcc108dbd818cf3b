// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "tz/corpus.hpp"
#include "tz/expr.hpp"
#include "tz/geom.hpp"
#include "tz/lagrangian.hpp"
#include "tz/liealg.hpp"
#include "tz/twistor.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace tz;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  std::string id;
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

int failures = 0;

void report(Criterion& c) {
  std::printf("%s %s%s\n", c.id.c_str(), c.pass ? "PASS" : "FAIL", c.detail.str().c_str());
  std::fflush(stdout);
  if (!c.pass) ++failures;
}

template <class F>
void guarded(Criterion& c, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  report(c);
}

const std::vector<double> kLambdas{0.5, 1.0, 2.0};
const surface::Grid kGrid{16, 16};
constexpr int kTheta = 16;

// --------------------------------------------------------------------------

void ac1() {
  Criterion c{"AC1"};
  guarded(c, [&] {
    const auto t0 = Clock::now();
    const std::vector<liealg::CheckReport> reports{
        liealg::check_decomposition(),          liealg::check_metric_family(kLambdas),
        liealg::check_B_theta({0.0, 0.3, 1.1, 2.5, 4.0}), liealg::check_v3_normalization(kLambdas),
        liealg::check_bracket_grading(),        liealg::verify_lemma_A(kLambdas),
        liealg::check_A_formula(kLambdas)};
    const double dt = seconds_since(t0);
    double worst = 0;
    for (const auto& r : reports) {
      worst = std::max(worst, r.residual());
      c.require(r.pass(), r.name);
      c.require(r.residual() < 1e-13, r.name + " residual");
    }
    c.require(dt < 1.0, "runtime < 1 s");
    c.detail << " lie suite: " << reports.size() << " checks, max residual " << worst << ", " << dt << " s";
  });
}

void ac2() {
  Criterion c{"AC2"};
  guarded(c, [&] {
    for (const auto& name : surface::superminimal_names()) {
      const auto t0 = Clock::now();
      const auto patch = lagrangian::build_lift(surface::make_surface(name, kGrid), kTheta);
      const auto r = lagrangian::lagrangian_defect(patch, kLambdas);
      const double dt = seconds_since(t0);
      c.require(r.max() < 1e-5, name + " defect < 1e-5");
      c.require(dt < 60.0, name + " runtime < 60 s");
      c.detail << " " << name << "=" << r.max() << " (" << dt << " s)";
    }
  });
}

void ac3() {
  Criterion c{"AC3"};
  guarded(c, [&] {
    for (const char* name : {"clifford", "graph_parab"}) {
      const auto patch = lagrangian::build_lift(surface::make_surface(name, kGrid), kTheta);
      const auto d = lagrangian::lagrangian_defect(patch, kLambdas);
      const double worst = std::max(d.max_omega_plus, d.max_omega_minus);
      const auto conv = lagrangian::converse_check(lagrangian::as_candidate(patch, name), kLambdas);
      c.require(worst > 1e-2, std::string(name) + " defect > 1e-2");
      c.require(!conv.pass() && conv.failed_stage() == "lagrangian", std::string(name) + " fails at stage (a)");
      c.require(std::abs(conv.lagrangian.value - d.max()) <= 1e-12 * d.max(), std::string(name) + " same defect");
      c.detail << " " << name << ": defect " << worst << ", converse stage '" << conv.failed_stage() << "' value "
               << conv.lagrangian.value;
    }
  });
}

void ac4() {
  Criterion c{"AC4"};
  guarded(c, [&] {
    for (const auto& name : surface::superminimal_names()) {
      const auto patch = lagrangian::build_lift(surface::make_surface(name, kGrid), kTheta);
      const auto r = lagrangian::converse_check(lagrangian::as_candidate(patch, name), kLambdas);
      c.require(r.pass(), name + " all stages (failed: " + r.failed_stage() + ")");
      c.require(r.projected_rank == 2, name + " rank-2 projection");
      c.require(r.containment.value < 1e-6, name + " containment < 1e-6");
      c.detail << " " << name << ": rank " << r.projected_rank << ", containment " << r.containment.value;
    }
  });
}

void ac5() {
  Criterion c{"AC5"};
  guarded(c, [&] {
    for (const auto& e : surface::corpus()) {
      const auto r = surface::superminimality_sweep(surface::make_surface(e, kGrid));
      const double v = r.vertical.value, i = r.indicatrix.value, h = r.holonomy.value;
      const bool positive = v < 1e-6 && i < 1e-6 && h < 1e-5;
      const bool negative = v > 1e-2 && i > 1e-2 && h > 1e-2;
      const bool expected = e.expected == surface::Classification::Superminimal;
      c.require(positive || negative, e.name + " meters agree");
      c.require(positive == expected, e.name + " classification");
      c.detail << " " << e.name << "(" << v << "," << i << "," << h << ")";
    }
  });
}

void ac6() {
  Criterion c{"AC6"};
  guarded(c, [&] {
    for (const auto& name : surface::superminimal_names()) {
      const auto patch = lagrangian::build_lift(surface::make_surface(name, kGrid), kTheta);
      const auto r = lagrangian::mean_curvature_sweep(patch, kLambdas);
      c.require(r.max_norm < 1e-3, name + " |H_L| < 1e-3");
      c.detail << " " << name << "=" << r.max_norm;
    }
    // step halving on the one corpus lift whose residual is not at rounding level
    const auto patch = lagrangian::build_lift(surface::make_surface("veronese", kGrid), kTheta);
    const auto& s = patch.surface();
    std::vector<double> study;
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
      double worst = 0;
      for (double lam : kLambdas)
        for (int i : {3, 8, 12})
          for (int k : {0, 5, 11})
            worst = std::max(worst, lagrangian::mean_curvature_L(patch, {lam, twistor::Sign::Plus}, s.grid_u(i),
                                                                 s.grid_v(15 - i), patch.theta(k), h)
                                        .norm());
      study.push_back(worst);
    }
    c.require(study[0] > study[1] && study[1] > study[2], "residual decreases with step");
    c.detail << " | step study veronese h=1e-2,5e-3,2.5e-3: " << study[0] << ", " << study[1] << ", " << study[2];
  });
}

void ac7() {
  Criterion c{"AC7"};
  guarded(c, [&] {
    std::mt19937 rng(20261014);
    std::uniform_real_distribution<double> U(-0.8, 0.8), L(0.5, 2.0);
    std::normal_distribution<double> N;
    auto unit = [&] { return Vec3(N(rng), N(rng), N(rng)).normalized(); };
    const std::array<geom::ModelKind, 3> kinds{geom::ModelKind::FlatR4, geom::ModelKind::RoundS4,
                                               geom::ModelKind::FubiniStudyCP2};
    double sq = 0, orth = 0, wv = 0, wh = 0, drift = 0, ruling = 0;
    for (auto kind : kinds) {
      const geom::ManifoldModel m{kind};
      std::vector<std::string> lifts;
      for (const auto& e : surface::corpus())
        if (e.model == kind && e.expected == surface::Classification::Superminimal) lifts.push_back(e.name);
      std::vector<lagrangian::LagrangianPatch> patches;
      for (const auto& n : lifts) patches.push_back(lagrangian::build_lift(surface::make_surface(n, {8, 8}), 8));
      for (int t = 0; t < 100; ++t) {
        const twistor::TwistorPoint tp{Vec4(U(rng), U(rng), U(rng), U(rng)), unit()};
        const double lam = L(rng);
        const twistor::BaseData b = twistor::base_data(m, tp.base);
        auto tangent = [&] {
          Vec3 d(N(rng), N(rng), N(rng));
          return twistor::TwistorTangent{Vec4(N(rng), N(rng), N(rng), N(rng)), d - d.dot(tp.fiber) * tp.fiber};
        };
        const auto V = tangent(), W = tangent();
        for (auto sg : {twistor::Sign::Plus, twistor::Sign::Minus}) {
          const twistor::HermitianPack p{lam, sg};
          const Mat6 J = twistor::twistor_acs(p, m, tp), G = twistor::twistor_metric(p, m, tp);
          sq = std::max(sq, (J * J + Mat6::Identity()).norm());
          orth = std::max(orth, (J.transpose() * G * J - G).norm() / G.norm());
        }
        const auto sp = twistor::kahler_split({lam, twistor::Sign::Plus}, b, tp.fiber, V, W);
        const auto sm = twistor::kahler_split({lam, twistor::Sign::Minus}, b, tp.fiber, V, W);
        wv = std::max(wv, std::abs(sp.vertical + sm.vertical));
        wh = std::max(wh, std::abs(sp.horizontal - sm.horizontal));
        // unit-time vertical geodesic at unit g_λ speed
        const Vec3 d = tangent().dj.normalized() * lam;
        for (const auto& q : twistor::geodesic(lam, m, tp, {Vec4::Zero(), d}, 1.0, {50, twistor::kMetricStep}))
          drift = std::max(drift, (q.base - tp.base).norm());
        // ruled fibers of L_Σ
        const auto& patch = patches[t % patches.size()];
        const auto& dom = patch.surface().domain();
        const double a = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
        const double bb = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
        const double th = std::uniform_real_distribution<double>(0, 2 * std::numbers::pi)(rng);
        ruling = std::max(ruling, lagrangian::ruling_defect(patch, lam, dom.u0 + a * (dom.u1 - dom.u0),
                                                            dom.v0 + bb * (dom.v1 - dom.v0), th, 1.0, 40));
      }
    }
    c.require(sq < 1e-12, "(J±)² = −I");
    c.require(orth < 1e-10, "g_λ-orthogonality");
    c.require(wv < 1e-12, "ω^v_+ = −ω^v_−");
    c.require(wh < 1e-12, "ω^h_+ = ω^h_−");
    c.require(drift < 1e-6, "fiber geodesy");
    c.require(ruling < 1e-6, "ruled fibers");
    c.detail << " 3 models x 100 samples: J^2+I " << sq << ", orthogonality " << orth << ", w^v " << wv << ", w^h "
             << wh << ", fiber drift " << drift << ", ruling " << ruling;
  });
}

// Central-difference Christoffels from the metric alone.
geom::Christoffel fd_christoffel(const geom::ManifoldModel& m, const Vec4& p, double h) {
  std::array<Mat4, 4> dg;
  for (int k = 0; k < 4; ++k) dg[k] = (geom::metric_at(m, p + h * Vec4::Unit(k)) - geom::metric_at(m, p - h * Vec4::Unit(k))) / (2 * h);
  const Mat4 inv = geom::metric_at(m, p).inverse();
  geom::Christoffel c;
  for (int k = 0; k < 4; ++k) {
    c.up[k].setZero();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) c.up[k](i, j) += 0.5 * inv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
  }
  return c;
}

// Geodesic triangle on the totally geodesic S² ⊂ S⁴, in the stereographic chart.
geom::Curve great_triangle(const std::array<Vec3, 3>& v) {
  geom::Curve c;
  c.t0 = 0;
  c.t1 = 3;
  c.eval = [v](double t) {
    const int s = std::min(static_cast<int>(std::floor(t)), 2);
    const double w = 2 * std::numbers::pi, x = t - s;
    const double tau = x - std::sin(w * x) / w, dtau = 1 - std::cos(w * x);
    const Vec3 a = v[s], b = v[(s + 1) % 3];
    const double om = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
    const Vec3 y = (std::sin((1 - tau) * om) * a + std::sin(tau * om) * b) / std::sin(om);
    const Vec3 dy = dtau * om * (-std::cos((1 - tau) * om) * a + std::cos(tau * om) * b) / std::sin(om);
    const double q = 1 + y(2);
    return geom::CurveSample{Vec4(y(0) / q, y(1) / q, 0, 0),
                             Vec4(dy(0) / q - y(0) * dy(2) / (q * q), dy(1) / q - y(1) * dy(2) / (q * q), 0, 0)};
  };
  return c;
}

std::string random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 10);
  std::uniform_real_distribution<double> k(-2, 2);
  auto sub = [&] { return random_formula(rng, depth - 1); };
  switch (pick(rng)) {
    case 0: return "u";
    case 1: return "v";
    case 2: return std::to_string(k(rng));
    case 3: return "(" + sub() + " + " + sub() + ")";
    case 4: return "(" + sub() + " - " + sub() + ")";
    case 5: return "(" + sub() + " * " + sub() + ")";
    case 6: return "(" + sub() + ") / (2 + cos(" + sub() + "))";
    case 7: return "sin(" + sub() + ")";
    case 8: return "cos(" + sub() + ")";
    case 9: return "exp(sin(" + sub() + "))";
    default: return "sqrt(1 + (" + sub() + ")^2)";
  }
}

void ac8() {
  Criterion c{"AC8"};
  guarded(c, [&] {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> U(-1, 1);
    double chr = 0, sec = 0;
    for (auto kind : {geom::ModelKind::FlatR4, geom::ModelKind::RoundS4, geom::ModelKind::FubiniStudyCP2}) {
      const geom::ManifoldModel m{kind};
      for (int t = 0; t < 100; ++t) {
        const Vec4 p(U(rng), U(rng), U(rng), U(rng));
        const auto a = geom::christoffel_at(m, p), b = fd_christoffel(m, p, 1e-5);
        for (int k = 0; k < 4; ++k) chr = std::max(chr, (a.up[k] - b.up[k]).cwiseAbs().maxCoeff());
        if (kind == geom::ModelKind::RoundS4) {
          const auto R = geom::riemann_at(m, p);
          const Mat4 g = geom::metric_at(m, p);
          const Vec4 X(U(rng), U(rng), U(rng), U(rng)), Y(U(rng), U(rng), U(rng), U(rng));
          sec = std::max(sec, std::abs(R.sectional(g, X, Y) - 1.0));
        }
      }
    }
    double tri = 0;
    const geom::ManifoldModel sphere{geom::ModelKind::RoundS4};
    for (const auto& v : {std::array<Vec3, 3>{Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)},
                          std::array<Vec3, 3>{Vec3(1, 0, 0.2).normalized(), Vec3(0.3, 1, 0.1).normalized(),
                                              Vec3(0.5, 0.4, 1).normalized()}}) {
      const auto curve = great_triangle(v);
      const Vec4 x0 = curve.eval(0).x;
      const Mat4 g = geom::metric_at(sphere, x0), f = geom::reference_frame(sphere, x0);
      const Vec4 w = geom::parallel_transport(sphere, curve, f).col(0);
      const double angle = std::abs(std::atan2(w.dot(g * f.col(1)), w.dot(g * f.col(0))));
      const double area = 2 * std::atan2(std::abs(v[0].dot(v[1].cross(v[2]))),
                                         1 + v[0].dot(v[1]) + v[1].dot(v[2]) + v[2].dot(v[0]));
      tri = std::max(tri, std::abs(angle - area));
    }
    double jet = 0;
    const double h = 1e-4;
    for (int t = 0; t < 100; ++t) {
      const expr::Expr e = expr::parse(random_formula(rng, 4));
      const double u = U(rng), v = U(rng);
      const expr::Jet2 j = e.eval_jet2(u, v);
      auto f = [&](double a, double b) { return e.eval(a, b); };
      const double fd[5] = {(f(u + h, v) - f(u - h, v)) / (2 * h), (f(u, v + h) - f(u, v - h)) / (2 * h),
                            (f(u + h, v) - 2 * f(u, v) + f(u - h, v)) / (h * h),
                            (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4 * h * h),
                            (f(u, v + h) - 2 * f(u, v) + f(u, v - h)) / (h * h)};
      const double ex[5] = {j.du, j.dv, j.duu, j.duv, j.dvv};
      for (int k = 0; k < 5; ++k) jet = std::max(jet, std::abs(fd[k] - ex[k]) / std::max(1.0, std::abs(j.value)));
    }
    c.require(chr < 1e-6, "Christoffel vs finite differences");
    c.require(sec < 1e-8, "RoundS4 sectional curvature");
    c.require(tri < 1e-4, "holonomy angle = triangle area");
    c.require(jet < 1e-5, "jets vs finite differences");
    c.detail << " christoffel " << chr << ", sectional " << sec << ", triangle " << tri << ", jets " << jet;
  });
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  ac1();
  ac2();
  ac3();
  ac4();
  ac5();
  ac6();
  ac7();
  ac8();
  std::printf("acceptance: %d of 8 criteria failed (%.1f s)\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
