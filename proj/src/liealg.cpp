#include "tz/liealg.hpp"

#include "tz/twistor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace tz::liealg {

namespace {

double fro(const Eigen::MatrixXd& m) { return m.norm(); }

std::string fmt(const char* what, double x) {
  std::ostringstream os;
  os << what << x;
  return os.str();
}

// −B-orthonormal basis of the span of the given elements.
std::vector<So5> orthonormal_span(const std::vector<So5>& span) {
  std::vector<So5> out;
  for (So5 x : span) {
    for (const So5& e : out) x += killing(x, e) * e;  // ⟨x, e⟩ = −B(x, e)
    const double n2 = -killing(x, x);
    if (n2 > 1e-20) out.push_back(x / std::sqrt(n2));
  }
  return out;
}

CheckItem upper(std::string label, double value, double bound = kExactTolerance) {
  return {std::move(label), value, bound, false, false};
}

}  // namespace

double killing(const So5& X, const So5& Y) { return 3.0 * (X * Y).trace(); }

So5 embed(const Mat4& A) {
  So5 X = So5::Zero();
  X.topLeftCorner<4, 4>() = A;
  return X;
}

Mat4 so4_block(const So5& X) { return X.topLeftCorner<4, 4>(); }

So5 embedded_J0() { return embed(twistor::quaternionic_triple()[0]); }

So5 p_generator(int i) {
  So5 X = So5::Zero();
  X(4, i) = 1.0;
  X(i, 4) = -1.0;
  return X;
}

So5 bracket(const So5& X, const So5& Y) { return X * Y - Y * X; }

bool is_skew(const So5& X, double tol) { return (X + X.transpose()).cwiseAbs().maxCoeff() <= tol; }

Decomposition cartan_decompose(const So5& X) {
  if (!is_skew(X, 1e-14 * std::max(1.0, X.cwiseAbs().maxCoeff())))
    throw Error(ErrorKind::InvalidArgument, "so(5) element is not skew");
  const Mat4 J = twistor::quaternionic_triple()[0];
  const Mat4 A = so4_block(X);
  Decomposition d;
  d.h = embed(0.5 * (A - J * A * J));
  d.n = embed(0.5 * (A + J * A * J));
  d.p = X - embed(A);
  return d;
}

const std::vector<So5>& so5_basis() {
  static const std::vector<So5> basis = [] {
    std::vector<So5> b;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) {
        So5 X = So5::Zero();
        X(i, j) = 1.0;
        X(j, i) = -1.0;
        b.push_back(X);
      }
    return b;
  }();
  return basis;
}

const std::vector<So5>& u2_basis() {
  static const std::vector<So5> basis = [] {
    std::vector<So5> span;
    for (const So5& X : so5_basis()) span.push_back(cartan_decompose(X).h);
    return orthonormal_span(span);
  }();
  return basis;
}

const std::vector<So5>& n_basis() {
  static const std::vector<So5> basis = [] {
    std::vector<So5> span;
    for (const So5& X : so5_basis()) span.push_back(cartan_decompose(X).n);
    return orthonormal_span(span);
  }();
  return basis;
}

const std::vector<So5>& p_basis() {
  static const std::vector<So5> basis = [] {
    std::vector<So5> span;
    for (int i = 0; i < 4; ++i) span.push_back(p_generator(i));
    return orthonormal_span(span);
  }();
  return basis;
}

const std::vector<So5>& m_basis() {
  static const std::vector<So5> basis = [] {
    std::vector<So5> b = n_basis();
    b.insert(b.end(), p_basis().begin(), p_basis().end());
    return b;
  }();
  return basis;
}

double g_lambda(double lambda, const So5& X, const So5& Y) {
  const Decomposition a = cartan_decompose(X), b = cartan_decompose(Y);
  return -killing(a.n, b.n) / (lambda * lambda) - killing(a.p, b.p);
}

double g_kahler(const So5& X, const So5& Y) {
  const Decomposition a = cartan_decompose(X), b = cartan_decompose(Y);
  return -2.0 * killing(a.n, b.n) - killing(a.p, b.p);
}

Mat4 B0() {
  Mat4 b;
  b << 1, 0, 0, -1,
       0, 1, -1, 0,
       0, 1, 1, 0,
       1, 0, 0, 1;
  return b / std::sqrt(2.0);
}

namespace {
Mat4 exp_J0(double t) {
  return std::cos(t) * Mat4::Identity() + std::sin(t) * twistor::quaternionic_triple()[0];
}
}  // namespace

Mat4 B_theta_literal(double theta) { return exp_J0(theta) * B0(); }
Mat4 B_theta(double theta) { return exp_J0(0.5 * theta) * B0(); }

namespace {
// SO(4) ⊂ SO(5) fixing e5.
So5 embed_group(const Mat4& g) {
  So5 G = embed(g);
  G(4, 4) = 1.0;
  return G;
}
}  // namespace

std::vector<So5> model_frame(double lambda, double theta) {
  const So5 b = embed_group(B_theta(theta));
  const So5 b0 = embed_group(B0());
  std::vector<So5> v;
  for (int i = 0; i < 2; ++i) v.push_back(b.transpose() * p_generator(i) * b / std::sqrt(6.0));
  v.push_back(lambda / std::sqrt(12.0) * (b0.transpose() * embedded_J0() * b0));
  return v;
}

So5 HorizontalCurvature::apply(const So5& X, const So5& Y) const {
  Vec4 x, y;
  for (int i = 0; i < 4; ++i) x(i) = X(4, i), y(i) = Y(4, i);
  Mat4 m = Mat4::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) m(a, b) += (*this)(a, b, c, d) * x(c) * y(d);
  return embed(m);
}

HorizontalCurvature sample_curvature(unsigned seed, double random_scale) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  HorizontalCurvature R;
  auto add_kn = [&](const Mat4& h, const Mat4& k, double c) {
    // Kulkarni–Nomizu product h ∧ k: an algebraic curvature tensor.
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b)
            R.r[((i * 4 + j) * 4 + a) * 4 + b] +=
                c * (h(i, a) * k(j, b) + k(i, a) * h(j, b) - h(i, b) * k(j, a) - k(i, b) * h(j, a));
  };
  add_kn(Mat4::Identity(), Mat4::Identity(), 0.5);
  for (int t = 0; t < 3; ++t) {
    Mat4 s;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s(i, j) = N(rng);
    s = 0.5 * (s + s.transpose());
    add_kn(s, s, 0.5 * random_scale);
  }
  return R;
}

double torsion(double lambda, const HorizontalCurvature* R, const So5& X, const So5& Y, const So5& Z) {
  const Decomposition x = cartan_decompose(X), y = cartan_decompose(Y);
  So5 T = -(bracket(x.n, y.p) - bracket(y.n, x.p)) - cartan_decompose(bracket(X, Y)).m();
  if (R) T += cartan_decompose(R->apply(X, Y)).n;
  return g_lambda(lambda, T, Z);
}

// ---------------------------------------------------------------------------

bool CheckReport::pass() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.pass(); });
}

double CheckReport::residual() const {
  double r = 0.0;
  for (const auto& i : items)
    if (!i.lower && !i.informational) r = std::max(r, i.value);
  return r;
}

CheckReport check_decomposition() {
  CheckReport rep{"cartan_decompose", {}};
  const So5 J0 = embedded_J0();
  const Decomposition dj = cartan_decompose(J0);
  rep.items.push_back(upper("J0 lies in u(2)", fro(dj.h - J0) + fro(dj.n) + fro(dj.p)));
  const Decomposition dp = cartan_decompose(p_generator(0));
  rep.items.push_back(upper("e1^e5 lies in p", fro(dp.p - p_generator(0)) + fro(dp.h) + fro(dp.n)));

  double inv = 0.0, orth = 0.0, idem = 0.0;
  std::mt19937 rng(7);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    So5 X = So5::Zero();
    for (const So5& e : so5_basis()) X += N(rng) * e;
    const Decomposition d = cartan_decompose(X);
    inv = std::max(inv, fro(d.h + d.n + d.p - X));
    inv = std::max(inv, fro(bracket(d.h, J0)));
    inv = std::max(inv, fro(d.n * J0 + J0 * d.n));
    inv = std::max(inv, d.p.topLeftCorner<4, 4>().norm());
    orth = std::max({orth, std::abs(killing(d.h, d.n)), std::abs(killing(d.h, d.p)), std::abs(killing(d.n, d.p))});
    for (const So5* c : {&d.h, &d.n, &d.p}) {
      const Decomposition e = cartan_decompose(*c);
      idem = std::max(idem, fro(e.h + e.n + e.p - *c) + fro((c == &d.h ? e.h : c == &d.n ? e.n : e.p) - *c));
    }
  }
  rep.items.push_back(upper("components sum, commute/anticommute with J0, p off-block", inv));
  rep.items.push_back(upper("components mutually B-orthogonal", orth));
  rep.items.push_back(upper("decomposition idempotent", idem));

  auto rank_of = [](auto pick) {
    Eigen::MatrixXd M(25, 10);
    int c = 0;
    for (const So5& X : so5_basis()) {
      const So5 Y = pick(cartan_decompose(X));
      M.col(c++) = Eigen::Map<const Eigen::VectorXd>(Y.data(), 25);
    }
    return Eigen::FullPivLU<Eigen::MatrixXd>(M).setThreshold(1e-10).rank();
  };
  const int du = rank_of([](const Decomposition& d) { return d.h; });
  const int dn = rank_of([](const Decomposition& d) { return d.n; });
  const int dp_ = rank_of([](const Decomposition& d) { return d.p; });
  rep.items.push_back(upper("dim u(2) = 4", std::abs(du - 4)));
  rep.items.push_back(upper("dim n = 2", std::abs(dn - 2)));
  rep.items.push_back(upper("dim p = 4", std::abs(dp_ - 4)));
  rep.items.push_back(upper("dim m = dim Z = 6", std::abs(int(m_basis().size()) - 6)));
  return rep;
}

CheckReport check_killing_form() {
  CheckReport rep{"killing_form", {}};
  double ad = 0.0;
  const auto& b = so5_basis();
  for (const So5& Z : b)
    for (const So5& X : b)
      for (const So5& Y : b) ad = std::max(ad, std::abs(killing(bracket(Z, X), Y) + killing(X, bracket(Z, Y))));
  rep.items.push_back(upper("Ad-invariance on all basis triples", ad));
  return rep;
}

CheckReport check_metric_family(const std::vector<double>& lambdas) {
  CheckReport rep{"metric_family", {}};
  const So5 J0 = embedded_J0();
  rep.items.push_back(upper("-B(J0, J0) = 12", std::abs(-killing(J0, J0) - 12.0)));
  const auto& m = m_basis();
  std::mt19937 rng(11);
  std::normal_distribution<double> N(0.0, 1.0);
  for (double l : lambdas) {
    Mat6 G;
    for (int a = 0; a < 6; ++a)
      for (int c = 0; c < 6; ++c) G(a, c) = g_lambda(l, m[a], m[c]);
    const double emin = Eigen::SelfAdjointEigenSolver<Mat6>(G).eigenvalues().minCoeff();
    std::ostringstream os;
    os << "g_lambda positive-definite on m, lambda = " << l;
    rep.items.push_back({os.str(), emin, 0.0, true, false});
    double qmin = 1e300;
    for (int t = 0; t < 10; ++t) {
      So5 X = So5::Zero();
      for (const So5& e : m) X += N(rng) * e;
      qmin = std::min(qmin, g_lambda(l, X, X) / (-killing(X, X)));
    }
    rep.items.push_back({fmt("g_lambda(X, X) > 0 on 10 random X, lambda = ", l), qmin, 0.0, true, false});
  }
  double pk = 0.0, nk = 0.0, indep = 0.0;
  const double lk = 1.0 / std::sqrt(2.0);
  for (const So5& X : m)
    for (const So5& Y : m) {
      const Decomposition a = cartan_decompose(X), b = cartan_decompose(Y);
      nk = std::max(nk, std::abs(g_kahler(a.n, b.n) - g_lambda(lk, a.n, b.n)));
      for (double l : lambdas) {
        pk = std::max(pk, std::abs(g_kahler(a.p, b.p) - g_lambda(l, a.p, b.p)));
        indep = std::max(indep, std::abs(g_lambda(l, a.p, b.p) - g_lambda(1.0, a.p, b.p)));
      }
    }
  rep.items.push_back(upper("g_K = g_lambda on n at lambda = 1/sqrt(2)", nk));
  rep.items.push_back(upper("g_K = g_lambda on p for every lambda", pk));
  rep.items.push_back(upper("g_lambda on p independent of lambda", indep));
  return rep;
}

CheckReport check_B_theta(const std::vector<double>& thetas) {
  CheckReport rep{"B_theta", {}};
  Mat4 displayed;
  const double r = 1.0 / std::sqrt(2.0);
  displayed << r, 0, 0, -r, 0, r, -r, 0, 0, r, r, 0, r, 0, 0, r;
  const Mat4 b = B0();
  rep.items.push_back(upper("B0 equals the displayed matrix", (b - displayed).norm()));
  rep.items.push_back(upper("det B0 = 1", std::abs(b.determinant() - 1.0)));
  rep.items.push_back(upper("B0^T B0 = I", (b.transpose() * b - Mat4::Identity()).norm()));

  const Mat4 J0 = twistor::quaternionic_triple()[0];
  Mat4 cols = Mat4::Zero();  // columns e3, −e4, −e1, e2
  cols(2, 0) = 1;
  cols(3, 1) = -1;
  cols(0, 2) = -1;
  cols(1, 3) = 1;
  const Mat4 c0 = b * J0 * b.transpose();
  rep.items.push_back(upper("B0 J0 B0^-1 has columns (e3, -e4, -e1, e2)", (c0 - cols).norm()));
  rep.items.push_back(upper("B0 J0 B0^-1 = J_theta at theta = 0", (c0 - twistor::equator_J_frame(0.0)).norm()));

  double half = 0.0, doubled = 0.0, literal = 0.0, orth = 0.0;
  for (double t : thetas) {
    const Mat4 bh = B_theta(t), bl = B_theta_literal(t);
    orth = std::max({orth, (bh.transpose() * bh - Mat4::Identity()).norm(), std::abs(bh.determinant() - 1.0)});
    half = std::max(half, (bh * J0 * bh.transpose() - twistor::equator_J_frame(t)).norm());
    doubled = std::max(doubled, (bl * J0 * bl.transpose() - twistor::equator_J_frame(2.0 * t)).norm());
    literal = std::max(literal, (bl * J0 * bl.transpose() - twistor::equator_J_frame(t)).norm());
  }
  rep.items.push_back(upper("B_theta in SO(4) on the theta grid", orth));
  rep.items.push_back(upper("exp(theta J0 / 2) B0 conjugates J0 to J_theta", half));
  rep.items.push_back(upper("exp(theta J0) B0 conjugates J0 to J_(2 theta)", doubled));
  CheckItem lit = upper("exp(theta J0) B0 conjugates J0 to J_theta (literal reading)", literal);
  lit.informational = true;
  rep.items.push_back(lit);
  return rep;
}

CheckReport check_v3_normalization(const std::vector<double>& lambdas) {
  CheckReport rep{"v3_normalization", {}};
  const So5 b0 = embed_group(B0());
  const So5 J0 = embedded_J0();
  const So5 X = b0.transpose() * J0 * b0;  // Ad(B0)^-1 J0
  rep.items.push_back(upper("{Ad(B0)^-1 J0, J0} = 0", fro(X * J0 + J0 * X)));
  rep.items.push_back(upper("Ad(B0)^-1 J0 inside so(4)", X.row(4).norm() + X.col(4).norm()));
  const Decomposition d = cartan_decompose(X);
  rep.items.push_back(upper("u(2) component of Ad(B0)^-1 J0 vanishes", fro(d.h) + fro(d.p)));
  for (double l : lambdas) {
    const So5 v3 = l / std::sqrt(12.0) * X;
    rep.items.push_back(upper(fmt("g_lambda norm of v3 is 1, lambda = ", l), std::abs(std::sqrt(g_lambda(l, v3, v3)) - 1.0)));
  }
  // d/dθ of the literal B_θ frame: B_θ⁻¹ dB_θ/dθ = Ad(B0)⁻¹ J0 for every θ.
  double speed = 0.0;
  for (double t : {0.0, 0.7, 2.1}) {
    const Mat4 bt = B_theta_literal(t);
    const Mat4 dbt = twistor::quaternionic_triple()[0] * bt;
    speed = std::max(speed, (embed(bt.transpose() * dbt) - X).norm());
  }
  rep.items.push_back(upper("B_theta^-1 dB_theta/dtheta = Ad(B0)^-1 J0", speed));
  return rep;
}

CheckReport check_bracket_grading() {
  CheckReport rep{"bracket_grading", {}};
  auto worst = [](const std::vector<So5>& A, const std::vector<So5>& B, auto outside) {
    double w = 0.0;
    int pairs = 0;
    for (size_t i = 0; i < A.size(); ++i)
      for (size_t j = (&A == &B ? i + 1 : 0); j < B.size(); ++j) {
        w = std::max(w, outside(cartan_decompose(bracket(A[i], B[j]))));
        ++pairs;
      }
    return std::make_pair(w, pairs);
  };
  auto add = [&](const char* label, std::pair<double, int> r) {
    std::ostringstream os;
    os << label << " (" << r.second << " basis pairs)";
    rep.items.push_back(upper(os.str(), r.first));
  };
  const auto &u = u2_basis(), &n = n_basis(), &p = p_basis();
  add("[u(2), n] in n", worst(u, n, [](const Decomposition& d) { return fro(d.h) + fro(d.p); }));
  add("[u(2), p] in p", worst(u, p, [](const Decomposition& d) { return fro(d.h) + fro(d.n); }));
  add("[n, n] in u(2)", worst(n, n, [](const Decomposition& d) { return fro(d.n) + fro(d.p); }));
  add("[n, p] in p", worst(n, p, [](const Decomposition& d) { return fro(d.h) + fro(d.n); }));
  add("[p, p] in so(4)", worst(p, p, [](const Decomposition& d) { return fro(d.p); }));
  add("[p, p]_m in n", worst(p, p, [](const Decomposition& d) { return fro(d.m() - d.n); }));
  return rep;
}

CheckReport verify_lemma_A(const std::vector<double>& lambdas) {
  CheckReport rep{"lemma_A", {}};
  const auto& m = m_basis();
  auto t = [](double l, const So5& X, const So5& Y, const So5& Z) {
    return g_lambda(l, cartan_decompose(bracket(X, Y)).m(), Z);
  };

  double anti = 0.0;
  for (const So5& X : m)
    for (const So5& Y : m)
      for (const So5& Z : m) {
        const double v = t(1.0, X, Y, Z);
        anti = std::max({anti, std::abs(v + t(1.0, Y, X, Z)), std::abs(v + t(1.0, X, Z, Y))});
      }
  rep.items.push_back(upper("t_1 totally antisymmetric (216 ordered triples)", anti));

  const HorizontalCurvature R = sample_curvature(2024);
  for (double l : lambdas) {
    double i1 = 0.0, i2 = 0.0, i3 = 0.0;
    for (const So5& Z : m)
      for (const So5& X : m) {
        i1 = std::max(i1, std::abs(t(l, Z, X, X)));
        i2 = std::max(i2, std::abs(g_lambda(l, cartan_decompose(R.apply(Z, X)).n, X)));
        const Decomposition z = cartan_decompose(Z), x = cartan_decompose(X);
        i3 = std::max(i3, std::abs(g_lambda(l, bracket(z.n, x.p) - bracket(x.n, z.p), X)));
      }
    rep.items.push_back(upper(fmt("(i) g_lambda(t(Z, X), X) = 0, lambda = ", l), i1));
    rep.items.push_back(upper(fmt("(ii) g_lambda(R(Z, X)_n, X) = 0, horizontal R, lambda = ", l), i2));
    rep.items.push_back(upper(fmt("(iii) mixed-bracket identity, lambda = ", l), i3));

    double assembled = 0.0;
    for (double th : {0.0, 0.9, 2.5, 4.0}) {
      const std::vector<So5> v = model_frame(l, th);
      double orth = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) orth = std::max(orth, std::abs(g_lambda(l, v[a], v[b]) - (a == b ? 1.0 : 0.0)));
      assembled = std::max(assembled, orth);
      for (const So5& Z : m) {
        double s = 0.0;
        for (const So5& vi : v) s += torsion(l, &R, Z, vi, vi);
        assembled = std::max(assembled, std::abs(s));
      }
    }
    rep.items.push_back(upper(fmt("model frame orthonormal and sum_i T(Z, v_i, v_i) = 0, lambda = ", l), assembled));
  }
  return rep;
}

namespace {
// g_λ(A(X)Y, Z) from a torsion 3-tensor.
template <class Torsion>
double connection_difference(const Torsion& T, const So5& X, const So5& Y, const So5& Z) {
  return 0.5 * (T(X, Y, Z) - T(Y, Z, X) + T(Z, X, Y));
}
}  // namespace

CheckReport check_A_formula(const std::vector<double>& lambdas) {
  CheckReport rep{"A_formula", {}};
  const auto& m = m_basis();
  for (double l : lambdas) {
    auto T = [l](const So5& X, const So5& Y, const So5& Z) { return torsion(l, nullptr, X, Y, Z); };
    auto A = [&](const So5& X, const So5& Y, const So5& Z) { return connection_difference(T, X, Y, Z); };
    double skew = 0.0;
    for (const So5& X : m)
      for (const So5& Y : m)
        for (const So5& Z : m) skew = std::max(skew, std::abs(A(X, Y, Z) + A(X, Z, Y)));
    rep.items.push_back(upper(fmt("g_lambda(A(X)Y, Z) skew in (Y, Z), lambda = ", l), skew));

    double cancel = 0.0, vanish = 0.0;
    for (double th : {0.0, 1.3, 3.7}) {
      const std::vector<So5> v = model_frame(l, th);
      for (const So5& Z : m) {
        double sa = 0.0, st = 0.0;
        for (const So5& vi : v) sa += A(vi, vi, Z), st += T(Z, vi, vi);
        cancel = std::max(cancel, std::abs(sa - st));
        vanish = std::max(vanish, std::abs(sa));
      }
    }
    rep.items.push_back(upper(fmt("sum_i g_lambda(A(v_i)v_i, Z) = sum_i T(Z, v_i, v_i), lambda = ", l), cancel));
    rep.items.push_back(upper(fmt("sum_i g_lambda(A(v_i)v_i, Z) = 0, lambda = ", l), vanish));
  }
  double zero = 0.0;
  auto none = [](const So5&, const So5&, const So5&) { return 0.0; };
  for (const So5& X : m)
    for (const So5& Y : m)
      for (const So5& Z : m) zero = std::max(zero, std::abs(connection_difference(none, X, Y, Z)));
  rep.items.push_back(upper("A = 0 when T = 0", zero));
  return rep;
}

CheckReport check_equator_stabilizer(int n_theta) {
  CheckReport rep{"equator_stabilizer", {}};
  // Unknown A = Σ a_k E_k over the so(4) basis; condition per θ: [A, J_θ] has
  // no component orthogonal to the circle tangent J_{θ+π/2}.
  std::vector<Mat4> E;
  for (const So5& X : so5_basis())
    if (X.row(4).norm() == 0.0) E.push_back(so4_block(X));
  Eigen::MatrixXd C(16 * n_theta, 6);
  for (int k = 0; k < n_theta; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n_theta;
    const Mat4 J = twistor::equator_J_frame(th), T = twistor::equator_J_frame(th + 0.5 * std::numbers::pi);
    for (int c = 0; c < 6; ++c) {
      Mat4 w = E[c] * J - J * E[c];
      w -= T * ((w.array() * T.array()).sum() / T.squaredNorm());
      C.block(16 * k, c, 16, 1) = Eigen::Map<const Eigen::VectorXd>(w.data(), 16);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  int nullity = 0;
  for (int i = 0; i < 6; ++i)
    if (s(i) < 1e-10 * std::max(1.0, s(0))) ++nullity;
  rep.items.push_back(upper("solution space has dimension 4", std::abs(nullity - 4)));
  // Nullspace equals u(2): stacking both gives rank 4 and u(2) solves the conditions.
  Eigen::MatrixXd U(6, 4);
  for (int c = 0; c < 4; ++c) {
    const Mat4 h = so4_block(u2_basis()[c]);
    for (int k = 0; k < 6; ++k) U(k, c) = 0.5 * (h.array() * E[k].array()).sum();
  }
  rep.items.push_back(upper("u(2) basis satisfies the equator conditions", (C * U).norm()));
  Eigen::MatrixXd both(6, 4 + nullity);
  both << U, svd.matrixV().rightCols(nullity);
  const int r = Eigen::FullPivLU<Eigen::MatrixXd>(both).setThreshold(1e-10).rank();
  rep.items.push_back(upper("solution space equals u(2)", std::abs(r - 4)));
  return rep;
}

CheckReport check_kks_form() {
  CheckReport rep{"kks_form", {}};
  const So5 z = 0.5 * embedded_J0();
  const auto& m = m_basis();
  Mat6 W;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) W(a, b) = g_kahler(bracket(z, m[a]), m[b]);
  rep.items.push_back(upper("g_K(ad(z)X, Y) antisymmetric on m", (W + W.transpose()).norm()));
  const double smin = Eigen::JacobiSVD<Mat6>(W).singularValues().minCoeff();
  rep.items.push_back({"g_K(ad(z)X, Y) nondegenerate on m (min singular value)", smin, 1e-6, true, false});
  return rep;
}

std::vector<CheckReport> run_all() {
  const std::vector<double> lambdas{0.5, 1.0, 2.0};
  std::vector<double> thetas;
  for (int k = 0; k < 16; ++k) thetas.push_back(2.0 * std::numbers::pi * k / 16);
  return {check_decomposition(), check_killing_form(),         check_metric_family(lambdas),
          check_B_theta(thetas), check_v3_normalization(lambdas), check_bracket_grading(),
          verify_lemma_A(lambdas), check_A_formula(lambdas),   check_equator_stabilizer(),
          check_kks_form()};
}

}  // namespace tz::liealg
