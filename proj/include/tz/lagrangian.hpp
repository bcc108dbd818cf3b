#pragma once

// The circle-bundle lift L_Σ ⊂ Z of a surface, its Lagrangian defects against
// (g_λ, J±), its mean curvature in (Z, g_λ), and the converse direction: a
// candidate 3-fold of Z is probed for being a lift of a superminimal surface.

#include "tz/surface.hpp"
#include "tz/twistor.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tz::lagrangian {

using surface::ImmersedSurface;
using twistor::BaseData;
using twistor::HermitianPack;
using twistor::Sign;
using twistor::TwistorPoint;
using twistor::TwistorTangent;

inline constexpr int kDefaultThetaSamples = 16;
/// Grid cells kept clear of the domain boundary by the mean-curvature stencil.
inline constexpr int kInteriorMargin = 2;

using Frame3 = std::array<TwistorTangent, 3>;

/// Chart value of the lift and its exact derivatives in u, v, θ.
struct LiftJet {
  TwistorPoint point;
  Frame3 d;
};

/// Fiber circle over each (u, v): J_θ of the adapted frame, θ ∈ [0, 2π).
class LagrangianPatch {
 public:
  LagrangianPatch(ImmersedSurface s, int n_theta);

  const ImmersedSurface& surface() const { return surface_; }
  const geom::ManifoldModel& model() const { return surface_.model(); }
  int n_theta() const { return n_theta_; }
  double theta(int k) const;

  TwistorPoint point(double u, double v, double theta) const;
  TwistorPoint point(int i, int j, int k) const;
  LiftJet jet(double u, double v, double theta) const;

 private:
  ImmersedSurface surface_;
  int n_theta_;
};

LagrangianPatch build_lift(const ImmersedSurface& s, int n_theta = kDefaultThetaSamples);

/// Canonical lift F₀ = J₀ of the adapted frame (the pole of the fiber circle).
TwistorPoint canonical_lift(const ImmersedSurface& s, double u, double v);

/// (v1, v2, v3): u- and v-derivatives of the chart with their component along
/// the fiber circle removed, and the θ-derivative (purely vertical).
Frame3 tangent_frame_L(const LagrangianPatch& patch, double u, double v, double theta);

/// Each vector scaled to unit g_λ-length.
Frame3 normalize_frame(double lambda, const BaseData& b, const Vec3& j, const Frame3& f);

// ---------------------------------------------------------------------------
// Candidate 3-folds of Z for the defect sweeps and the converse check.

struct CandidateChart {
  std::string name;
  geom::ManifoldModel model;
  surface::Domain domain;
  surface::Grid grid;
  int n_theta = kDefaultThetaSamples;
  /// (u, v, t) ↦ point and its three chart derivatives.
  std::function<LiftJet(double, double, double)> jet;
  /// Underlying surface when the candidate is a lift.
  std::optional<ImmersedSurface> surface;

  double u(int i) const { return domain.u0 + (domain.u1 - domain.u0) * i / (grid.nu - 1); }
  double v(int j) const { return domain.v0 + (domain.v1 - domain.v0) * j / (grid.nv - 1); }
  double t(int k) const;
};

CandidateChart as_candidate(const LagrangianPatch& patch, std::string name = "lift");

/// Fiber-only degenerate candidate over x0: a great circle of the fiber run
/// by u + v + t. Its differential has rank 1.
CandidateChart fiber_candidate(const geom::ManifoldModel& model, const geom::ChartPoint& x0);

struct SampleIndex {
  int i = -1, j = -1, k = -1;
  double lambda = 0.0;
};

struct DefectReport {
  std::vector<double> lambda_list;
  double max_omega_plus = 0.0;
  double max_omega_minus = 0.0;
  double max_metric_defect = 0.0;         // |g_λ(J± v_i, v_j)| via the 6×6 chart matrices
  double max_vertical_plus = 0.0;         // |ω^v_+| alone
  double max_vertical_minus = 0.0;
  SampleIndex argmax_plus, argmax_minus, argmax_metric;
  double max() const;
};

inline const std::vector<Sign> kBothSigns{Sign::Plus, Sign::Minus};

/// Sweep over grid × t-grid, the listed λ, and the listed signs.
DefectReport lagrangian_defect(const CandidateChart& c, const std::vector<double>& lambdas,
                               const std::vector<Sign>& signs = kBothSigns);
DefectReport lagrangian_defect(const LagrangianPatch& patch, const std::vector<double>& lambdas,
                               const std::vector<Sign>& signs = kBothSigns);
DefectReport lagrangian_defect(const LagrangianPatch& patch, const HermitianPack& pack);

// ---------------------------------------------------------------------------
// Mean curvature of L_Σ in (Z, g_λ).

/// Components of the mean curvature vector Σ (∇_{v_a} v_a)^⊥ in a g_λ-orthonormal
/// normal frame. Second chart derivatives and twistor Christoffels both use
/// central differences with the given step.
Vec3 mean_curvature_L(const LagrangianPatch& patch, const HermitianPack& pack, double u, double v, double theta,
                      double step = twistor::kMetricStep);

/// Horizontal part of the L-mean-curvature (pushed to M) at (u, v), averaged
/// over the θ-grid.
Vec4 mean_curvature_L_horizontal_mean(const LagrangianPatch& patch, const HermitianPack& pack, double u, double v,
                                      double step = twistor::kMetricStep);

struct MeanCurvatureReport {
  double max_norm = 0.0;
  SampleIndex argmax;
  int samples = 0;
};

/// Maximum over interior grid samples and the θ-grid.
MeanCurvatureReport mean_curvature_sweep(const LagrangianPatch& patch, const std::vector<double>& lambdas,
                                         double step = twistor::kMetricStep);

/// Distance of the g_λ-geodesic started along v3 (unit speed, time T) from the
/// fiber circle through the start: max of base drift and |j · j₀|.
double ruling_defect(const LagrangianPatch& patch, double lambda, double u, double v, double theta, double T = 1.0,
                     int steps = 40);

// ---------------------------------------------------------------------------

struct ConverseThresholds {
  double lagrangian = 1e-5;
  double vertical = 1e-6;
  double indicatrix = 1e-6;
  double holonomy = 1e-5;
  double containment = 1e-6;
  /// Superminimality thresholds when the projection is only known by differences.
  double finite_difference = 1e-4;
  double rank = 1e-8;
};

struct StageResult {
  bool ran = false;
  bool pass = false;
  double value = 0.0;      // the decisive measured quantity
  double threshold = 0.0;
  std::string detail;
};

struct ConverseReport {
  DefectReport defects;
  StageResult lagrangian, rank, superminimal, containment;
  int candidate_rank = 0;
  int projected_rank = 0;
  std::optional<surface::SuperminimalityReport> projection;
  bool pass() const { return lagrangian.pass && rank.pass && superminimal.pass && containment.pass; }
  /// First stage that failed, or "" when all pass.
  std::string failed_stage() const;
};

ConverseReport converse_check(const CandidateChart& c, const std::vector<double>& lambdas,
                              const ConverseThresholds& thresholds = {});

}  // namespace tz::lagrangian
