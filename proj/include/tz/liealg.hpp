#pragma once

// so(5) = u(2) ⊕ n ⊕ p and the algebraic identities behind the minimality of
// L_Σ. Everything is plain double-precision matrix algebra; the entries are
// small rationals times √2, so residuals sit at rounding level.

#include "tz/types.hpp"

#include <string>
#include <vector>

namespace tz::liealg {

using So5 = Mat5;

/// Pass threshold for every exact check.
inline constexpr double kExactTolerance = 1e-13;

/// B(X, Y) = 3 tr(XY), the Killing form of so(5).
double killing(const So5& X, const So5& Y);

So5 embed(const Mat4& A);
Mat4 so4_block(const So5& X);
/// J₀ (e1 ↦ e2, e3 ↦ e4) in the upper-left block.
So5 embedded_J0();
/// e_i ∧ e_5 rotation, i ∈ 0..3: e_i ↦ e_5 (entry (4, i) = 1).
So5 p_generator(int i);
So5 bracket(const So5& X, const So5& Y);
bool is_skew(const So5& X, double tol = 1e-14);

struct Decomposition {
  So5 h, n, p;
  So5 m() const { return n + p; }
};

Decomposition cartan_decompose(const So5& X);

/// Fixed bases, orthonormal for −B.
const std::vector<So5>& u2_basis();
const std::vector<So5>& n_basis();
const std::vector<So5>& p_basis();
/// n basis followed by p basis.
const std::vector<So5>& m_basis();
/// E_ij − E_ji, i < j.
const std::vector<So5>& so5_basis();

/// g_λ = −λ⁻² B|_n − B|_p on m.
double g_lambda(double lambda, const So5& X, const So5& Y);
/// g_K = −2 B|_n − B|_p.
double g_kahler(const So5& X, const So5& Y);

Mat4 B0();
/// exp(θ J₀) B₀ as displayed.
Mat4 B_theta_literal(double theta);
/// exp(θ J₀ / 2) B₀: conjugates J₀ to J_θ.
Mat4 B_theta(double theta);

/// Model frame of L_Σ in m at angle θ: v1, v2 = Ad(B_θ)⁻¹ e_i∧e_5 / √6 and
/// v3 = (λ/√12) Ad(B₀)⁻¹ J₀.
std::vector<So5> model_frame(double lambda, double theta);

/// Horizontal curvature map: R(X, Y) ∈ so(4) built from an algebraic
/// curvature tensor on R⁴ evaluated on the p-components.
struct HorizontalCurvature {
  std::array<double, 256> r{};
  double operator()(int i, int j, int k, int l) const { return r[((i * 4 + j) * 4 + k) * 4 + l]; }
  So5 apply(const So5& X, const So5& Y) const;
};

/// Unit-sphere curvature plus a seeded random algebraic curvature tensor.
HorizontalCurvature sample_curvature(unsigned seed, double random_scale = 0.5);

/// Torsion T(X, Y, Z) = g_λ(T(X, Y), Z) with T(X, Y) = R(X, Y)_n − ([X_n, Y_p] − [Y_n, X_p]) − [X, Y]_m.
double torsion(double lambda, const HorizontalCurvature* R, const So5& X, const So5& Y, const So5& Z);

// ---------------------------------------------------------------------------

struct CheckItem {
  std::string label;
  double value = 0.0;
  double bound = kExactTolerance;
  bool lower = false;          // pass when value > bound instead of value < bound
  bool informational = false;  // reported, not part of the verdict
  bool pass() const { return informational || (lower ? value > bound : value < bound); }
};

struct CheckReport {
  std::string name;
  std::vector<CheckItem> items;
  bool pass() const;
  /// Largest residual among the upper-bounded, non-informational items.
  double residual() const;
};

CheckReport check_decomposition();
CheckReport check_killing_form();
CheckReport check_metric_family(const std::vector<double>& lambdas);
CheckReport check_B_theta(const std::vector<double>& thetas);
CheckReport check_v3_normalization(const std::vector<double>& lambdas);
CheckReport check_bracket_grading();
CheckReport verify_lemma_A(const std::vector<double>& lambdas);
CheckReport check_A_formula(const std::vector<double>& lambdas);
CheckReport check_equator_stabilizer(int n_theta = 16);
CheckReport check_kks_form();

/// Every check above with the default sweeps (λ ∈ {0.5, 1, 2}, θ on a 16-grid).
std::vector<CheckReport> run_all();

}  // namespace tz::liealg
