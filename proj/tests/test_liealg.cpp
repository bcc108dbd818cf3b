#include "tz/liealg.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>

using namespace tz;
using namespace tz::liealg;

namespace {

int span_rank(const std::vector<So5>& v) {
  Eigen::MatrixXd m(25, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m.col(i) = Eigen::Map<const Eigen::VectorXd>(v[i].data(), 25);
  return Eigen::FullPivLU<Eigen::MatrixXd>(m).setThreshold(1e-10).rank();
}

So5 random_skew(std::mt19937& rng) {
  std::normal_distribution<double> N;
  So5 a;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) a(i, j) = N(rng);
  return a - a.transpose();
}

Mat4 J_theta(double t) {
  // J e1 = cos t e3 + sin t e4, J e2 = sin t e3 − cos t e4
  Mat4 J = Mat4::Zero();
  J(2, 0) = std::cos(t);
  J(3, 0) = std::sin(t);
  J(2, 1) = std::sin(t);
  J(3, 1) = -std::cos(t);
  J.block<2, 2>(0, 2) = -J.block<2, 2>(2, 0).transpose();
  return J;
}

}  // namespace

TEST(Decompose, Examples) {
  const So5 J0 = embedded_J0();
  const Decomposition d = cartan_decompose(J0);
  EXPECT_LT((d.h - J0).norm(), 1e-15);
  EXPECT_LT(d.n.norm() + d.p.norm(), 1e-15);
  for (int i = 0; i < 4; ++i) {
    const So5 P = p_generator(i);
    EXPECT_EQ(P(4, i), 1.0);
    EXPECT_LT((cartan_decompose(P).p - P).norm(), 1e-15);
  }
  EXPECT_THROW(cartan_decompose(So5::Identity()), Error);
}

TEST(Decompose, InvariantsOnRandomElements) {
  std::mt19937 rng(1);
  const So5 J0 = embedded_J0();
  for (int t = 0; t < 50; ++t) {
    const So5 X = random_skew(rng);
    const Decomposition d = cartan_decompose(X);
    EXPECT_LT((d.h + d.n + d.p - X).norm(), 1e-14);
    EXPECT_LT((d.h * J0 - J0 * d.h).norm(), 1e-14);
    EXPECT_LT((so4_block(d.n) * so4_block(J0) + so4_block(J0) * so4_block(d.n)).norm(), 1e-14);
    EXPECT_LT(d.p.topLeftCorner(4, 4).norm() + d.h.row(4).norm() + d.n.row(4).norm(), 1e-15);
    EXPECT_NEAR(killing(d.h, d.n), 0, 1e-13);
    EXPECT_NEAR(killing(d.h, d.p), 0, 1e-13);
    EXPECT_NEAR(killing(d.n, d.p), 0, 1e-13);
    const Decomposition again = cartan_decompose(d.n);
    EXPECT_LT((again.n - d.n).norm() + again.h.norm() + again.p.norm(), 1e-14);
  }
}

TEST(Bases, DimensionsAndOrthonormality) {
  EXPECT_EQ(u2_basis().size(), 4u);
  EXPECT_EQ(n_basis().size(), 2u);
  EXPECT_EQ(p_basis().size(), 4u);
  EXPECT_EQ(m_basis().size(), 6u);
  EXPECT_EQ(so5_basis().size(), 10u);
  EXPECT_EQ(span_rank(u2_basis()), 4);
  EXPECT_EQ(span_rank(m_basis()), 6);
  std::vector<So5> all = u2_basis();
  all.insert(all.end(), m_basis().begin(), m_basis().end());
  EXPECT_EQ(span_rank(all), 10);
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = 0; b < all.size(); ++b) EXPECT_NEAR(-killing(all[a], all[b]), a == b ? 1.0 : 0.0, 1e-14);
}

TEST(Killing, NormalizationAndInvariance) {
  const So5 J0 = embedded_J0();
  EXPECT_NEAR(-killing(J0, J0), 12.0, 1e-14);
  EXPECT_NEAR((J0 * J0).trace(), -4.0, 1e-15);
  const auto& basis = so5_basis();
  double worst = 0;
  for (const auto& X : basis)
    for (const auto& Y : basis)
      for (const auto& Z : basis)
        worst = std::max(worst, std::abs(killing(bracket(Z, X), Y) + killing(X, bracket(Z, Y))));
  EXPECT_LT(worst, 1e-13);
  // the Killing form of so(5) is tr(ad X ad Y)
  auto ad = [&](const So5& X) {
    Eigen::Matrix<double, 10, 10> m;
    for (int j = 0; j < 10; ++j) {
      const So5 b = bracket(X, basis[j]);
      for (int i = 0; i < 10; ++i) m(i, j) = 0.5 * (b.cwiseProduct(basis[i])).sum();
    }
    return m;
  };
  std::mt19937 rng(2);
  for (int t = 0; t < 5; ++t) {
    const So5 X = random_skew(rng), Y = random_skew(rng);
    EXPECT_NEAR((ad(X) * ad(Y)).trace(), killing(X, Y), 1e-11);
  }
}

TEST(B0, MatchesDisplayedMatrix) {
  Mat4 ref;
  ref << 1, 0, 0, -1, 0, 1, -1, 0, 0, 1, 1, 0, 1, 0, 0, 1;
  ref /= std::sqrt(2.0);
  EXPECT_LT((B0() - ref).norm(), 1e-15);
  EXPECT_NEAR(ref.determinant(), 1.0, 1e-14);
  EXPECT_LT((ref.transpose() * ref - Mat4::Identity()).norm(), 1e-14);
  const Mat4 J0 = so4_block(embedded_J0());
  const Mat4 c = ref * J0 * ref.transpose();
  EXPECT_LT((c.col(0) - Vec4::Unit(2)).norm(), 1e-15);
  EXPECT_LT((c.col(1) + Vec4::Unit(3)).norm(), 1e-15);
  EXPECT_LT((c.col(2) + Vec4::Unit(0)).norm(), 1e-15);
  EXPECT_LT((c.col(3) - Vec4::Unit(1)).norm(), 1e-15);
  EXPECT_LT((c - J_theta(0)).norm(), 1e-15);
}

TEST(BTheta, HalfAngleConjugatesToJTheta) {
  const Mat4 J0 = so4_block(embedded_J0());
  for (int k = 0; k < 16; ++k) {
    const double t = 2 * std::numbers::pi * k / 16;
    const Mat4 half = (0.5 * t * J0).exp() * B0();
    EXPECT_LT((B_theta(t) - half).norm(), 1e-14);
    EXPECT_LT((half * J0 * half.transpose() - J_theta(t)).norm(), 1e-14);
    // the displayed exp(θJ₀)B₀ lands on J_{2θ}
    const Mat4 lit = (t * J0).exp() * B0();
    EXPECT_LT((B_theta_literal(t) - lit).norm(), 1e-14);
    EXPECT_LT((lit * J0 * lit.transpose() - J_theta(2 * t)).norm(), 1e-14);
  }
}

TEST(ModelFrame, OrthonormalForEveryLambda) {
  for (double lam : {0.5, 1.0, 2.0})
    for (double t : {0.0, 0.7, 2.5}) {
      const auto f = model_frame(lam, t);
      ASSERT_EQ(f.size(), 3u);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) EXPECT_NEAR(g_lambda(lam, f[a], f[b]), a == b ? 1.0 : 0.0, 1e-14);
      const Decomposition d = cartan_decompose(f[2]);
      EXPECT_LT((d.n - f[2]).norm(), 1e-15);
      for (int a = 0; a < 2; ++a) EXPECT_LT(cartan_decompose(f[a]).h.norm(), 1e-14);
    }
}

TEST(Grading, BracketRelations) {
  auto m_part = [](const So5& X) { return cartan_decompose(X).m().norm(); };
  auto outside = [](const So5& X, int keep) {
    const Decomposition d = cartan_decompose(X);
    const So5 parts[3] = {d.h, d.n, d.p};
    double s = 0;
    for (int i = 0; i < 3; ++i)
      if (i != keep) s += parts[i].norm();
    return s;
  };
  for (const auto& Z : u2_basis()) {
    for (const auto& X : n_basis()) EXPECT_LT(outside(bracket(Z, X), 1), 1e-14);
    for (const auto& X : p_basis()) EXPECT_LT(outside(bracket(Z, X), 2), 1e-14);
  }
  for (const auto& X : n_basis())
    for (const auto& Y : n_basis()) EXPECT_LT(m_part(bracket(X, Y)), 1e-14);
  for (const auto& X : n_basis())
    for (const auto& Y : p_basis()) EXPECT_LT(outside(bracket(X, Y), 2), 1e-14);
  for (const auto& X : p_basis())
    for (const auto& Y : p_basis()) EXPECT_LT(cartan_decompose(bracket(X, Y)).p.norm(), 1e-14);
}

TEST(Lemma, TorsionAssemblyVanishesOnModelFrame) {
  const HorizontalCurvature R = sample_curvature(7);
  for (double lam : {0.5, 1.0, 2.0})
    for (double t : {0.0, 1.3}) {
      const auto v = model_frame(lam, t);
      for (const auto& Z : m_basis()) {
        double s = 0, s0 = 0;
        for (const auto& vi : v) {
          s += torsion(lam, &R, Z, vi, vi);
          s0 += torsion(lam, nullptr, Z, vi, vi);
        }
        EXPECT_NEAR(s, 0.0, 1e-13);
        EXPECT_NEAR(s0, 0.0, 1e-13);
      }
    }
}

TEST(Lemma, TorsionIsAntisymmetricInFirstPair) {
  const HorizontalCurvature R = sample_curvature(3);
  const auto& b = m_basis();
  for (const auto& X : b)
    for (const auto& Y : b)
      for (const auto& Z : b) EXPECT_NEAR(torsion(1.3, &R, X, Y, Z), -torsion(1.3, &R, Y, X, Z), 1e-13);
}

TEST(Checks, AllPass) {
  const auto reports = run_all();
  EXPECT_GE(reports.size(), 10u);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.pass()) << r.name;
    EXPECT_LT(r.residual(), kExactTolerance) << r.name;
    for (const auto& item : r.items) EXPECT_TRUE(item.pass()) << r.name << ": " << item.label << " = " << item.value;
  }
}

TEST(Checks, LiteralBThetaReportedNotCounted) {
  const CheckReport r = check_B_theta({0.0, 0.5, 1.0});
  bool found = false;
  for (const auto& item : r.items)
    if (item.informational) {
      found = true;
      EXPECT_GT(item.value, 0.1);
    }
  EXPECT_TRUE(found);
  EXPECT_TRUE(r.pass());
}

TEST(Checks, StabilizerIsU2) {
  const CheckReport r = check_equator_stabilizer(16);
  EXPECT_TRUE(r.pass());
  // also directly: the solution space of A J_θ − J_θ A ∈ T(circle) over a θ-grid
  Eigen::MatrixXd rows(0, 6);
  std::vector<Mat4> so4;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      Mat4 e = Mat4::Zero();
      e(i, j) = 1;
      e(j, i) = -1;
      so4.push_back(e);
    }
  for (int k = 0; k < 16; ++k) {
    const double t = 2 * std::numbers::pi * k / 16;
    const Mat4 J = J_theta(t), dJ = J_theta(t + std::numbers::pi / 2);
    // [A, J] must be a multiple of dJ: project out dJ and require the remainder to vanish
    Eigen::MatrixXd block(16, 6);
    for (int c = 0; c < 6; ++c) {
      Mat4 br = so4[c] * J - J * so4[c];
      br -= (br.cwiseProduct(dJ).sum() / dJ.squaredNorm()) * dJ;
      block.col(c) = Eigen::Map<const Eigen::VectorXd>(br.data(), 16);
    }
    rows.conservativeResize(rows.rows() + 16, 6);
    rows.bottomRows(16) = block;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
  lu.setThreshold(1e-10);
  EXPECT_EQ(6 - lu.rank(), 4);
  const Eigen::MatrixXd ker = lu.kernel();
  for (int c = 0; c < ker.cols(); ++c) {
    Mat4 A = Mat4::Zero();
    for (int i = 0; i < 6; ++i) A += ker(i, c) * so4[i];
    EXPECT_LT(cartan_decompose(embed(A)).n.norm(), 1e-12);
  }
}
