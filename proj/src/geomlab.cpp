#include "anosovkit/geomlab.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace anosovkit {

namespace {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using LCMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
using LCVector = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, 1>;

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

nlohmann::json matrix_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  nlohmann::json r = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) r.push_back(v(i));
  return r;
}

// Largest-magnitude entry made positive, so eigenvector output is deterministic.
template <class V>
void fix_sign(V& v) {
  Eigen::Index k = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(k))) k = i;
  if (v(k) < 0) v = -v;
}

}  // namespace

IntMatrix companion(const IntPolynomial& p) {
  const int n = p.degree();
  if (n < 1 || !p.is_monic()) throw GeomError("companion: polynomial must be monic of degree >= 1");
  const BigInt expected = n % 2 == 0 ? 1 : -1;
  if (p.constant_term() != expected)
    throw GeomError("companion: constant term " + p.constant_term().str() + " gives det A != 1");
  IntMatrix a = IntMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) a(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) {
    const BigInt c = -p.coeff(i);
    if (c > std::numeric_limits<long long>::max() || c < std::numeric_limits<long long>::min())
      throw GeomError("companion: coefficient exceeds 64 bits");
    a(i, n - 1) = c.convert_to<long long>();
  }
  return a;
}

BigInt det_exact(const IntMatrix& a) {
  const auto n = static_cast<std::size_t>(a.rows());
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

IntPolynomial charpoly_exact(const IntMatrix& a) {
  const int n = static_cast<int>(a.rows());
  // Values of det(k Id - A) at k = 0..n, then solve the Vandermonde system over Q.
  std::vector<std::vector<Rational>> sys(static_cast<std::size_t>(n + 1),
                                         std::vector<Rational>(static_cast<std::size_t>(n + 2)));
  for (int k = 0; k <= n; ++k) {
    IntMatrix m = -a;
    for (int i = 0; i < n; ++i) m(i, i) += k;
    auto& row = sys[static_cast<std::size_t>(k)];
    Rational pw = 1;
    for (int j = 0; j <= n; ++j) {
      row[static_cast<std::size_t>(j)] = pw;
      pw *= k;
    }
    row[static_cast<std::size_t>(n + 1)] = Rational(det_exact(m));
  }
  const auto N = static_cast<std::size_t>(n + 1);
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    while (sys[piv][c] == 0) ++piv;
    std::swap(sys[c], sys[piv]);
    for (std::size_t r = 0; r < N; ++r) {
      if (r == c || sys[r][c] == 0) continue;
      const Rational f = sys[r][c] / sys[c][c];
      for (std::size_t j = c; j <= N; ++j) sys[r][j] -= f * sys[c][j];
    }
  }
  std::vector<BigInt> coeffs(N);
  for (std::size_t i = 0; i < N; ++i) {
    const Rational v = sys[i][N] / sys[i][i];
    if (boost::multiprecision::denominator(v) != 1) throw GeomError("charpoly_exact: non-integer coefficient");
    coeffs[i] = boost::multiprecision::numerator(v);
  }
  return IntPolynomial(std::move(coeffs));
}

Splitting split(const IntMatrix& a, const SpectralProfile& profile) {
  if (!profile.big_root) throw GeomError("split: profile has no dominant root");
  const Eigen::Index n = a.rows();
  const int q = static_cast<int>(n) - 1;
  Splitting s;

  const long double mu = mpfr_get_ld(profile.big_root->re.raw(), MPFR_RNDN);
  const LMatrix al = a.cast<long double>();
  {
    const long double shift = mu * (1.0L + 1e-13L);
    const Eigen::PartialPivLU<LMatrix> lu(al - shift * LMatrix::Identity(n, n));
    LVector v = LVector::Ones(n);
    for (int it = 0; it < 6; ++it) {
      v = lu.solve(v);
      v /= v.norm();
    }
    if (!v.allFinite()) throw GeomError("split: inverse iteration diverged");
    fix_sign(v);
    s.eu = v.cast<double>();
    s.eu_residual = static_cast<double>((al * v - mu * v).norm());
  }

  const Eigen::EigenSolver<Eigen::MatrixXd> es(a.cast<double>());
  const Eigen::VectorXcd ev = es.eigenvalues();
  const Eigen::MatrixXcd vecs = es.eigenvectors();
  Eigen::Index big = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (std::abs(ev(i) - std::complex<double>(static_cast<double>(mu))) <
        std::abs(ev(big) - std::complex<double>(static_cast<double>(mu))))
      big = i;

  // Order: by decreasing imaginary part, then real part.
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < n; ++i)
    if (i != big) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    if (ev(x).imag() != ev(y).imag()) return ev(x).imag() > ev(y).imag();
    return ev(x).real() > ev(y).real();
  });

  std::vector<Eigen::VectorXd> cols;
  const LCMatrix ac = al.cast<std::complex<long double>>();
  for (Eigen::Index i : order) {
    const std::complex<double> beta = ev(i);
    const bool real = std::abs(beta.imag()) <= 1e-9 * std::max(1.0, std::abs(beta));
    if (!real && beta.imag() < 0) continue;
    // One inverse-iteration sweep in extended precision polishes the eigenvector.
    const std::complex<long double> bl = real ? std::complex<long double>(beta.real(), 0)
                                              : std::complex<long double>(beta.real(), beta.imag());
    const Eigen::PartialPivLU<LCMatrix> lu(ac - bl * (1.0L + 1e-13L) * LCMatrix::Identity(n, n));
    LCVector v = vecs.col(i).cast<std::complex<long double>>();
    for (int it = 0; it < 2; ++it) {
      v = lu.solve(v);
      v /= v.norm();
    }
    if (real) {
      LVector r = v.real();
      if (r.norm() < 1e-6L) r = v.imag();
      r /= r.norm();
      fix_sign(r);
      cols.push_back(r.cast<double>());
    } else {
      // Rotate so that the real part has maximal norm; makes the basis deterministic.
      Eigen::Index k = 0;
      for (Eigen::Index j = 1; j < n; ++j)
        if (std::abs(v(j)) > std::abs(v(k))) k = j;
      v *= std::conj(v(k)) / std::abs(v(k));
      cols.push_back(v.real().cast<double>());
      cols.push_back(v.imag().cast<double>());
    }
  }
  if (static_cast<int>(cols.size()) != q) throw GeomError("split: could not assemble a q-dimensional Es basis");
  s.es_basis.resize(n, q);
  for (int j = 0; j < q; ++j) s.es_basis.col(j) = cols[static_cast<std::size_t>(j)];

  Eigen::MatrixXd frame(n, n);
  frame << s.es_basis, s.eu;
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(frame);
  const Eigen::MatrixXd ad = a.cast<double>();
  for (int j = 0; j < q; ++j) {
    const Eigen::VectorXd c = qr.solve(ad * s.es_basis.col(j));
    s.es_leak = std::max(s.es_leak, std::abs(c(q)) / s.es_basis.col(j).norm());
  }
  return s;
}

FormSolution solve_b(const Eigen::MatrixXd& a_s, double lambda) {
  const Eigen::Index q = a_s.rows();
  const Eigen::MatrixXd S = lambda * a_s;
  const Eigen::Index m = q * (q + 1) / 2;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> idx;
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = i; j < q; ++j) idx.emplace_back(i, j);
  const double r2 = std::sqrt(2.0);
  auto unit = [&](Eigen::Index k) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(q, q);
    const auto [i, j] = idx[static_cast<std::size_t>(k)];
    if (i == j) {
      e(i, i) = 1;
    } else {
      e(i, j) = e(j, i) = 1 / r2;
    }
    return e;
  };
  auto coords = [&](const Eigen::MatrixXd& x) {
    Eigen::VectorXd c(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto [i, j] = idx[static_cast<std::size_t>(k)];
      c(k) = i == j ? x(i, i) : r2 * 0.5 * (x(i, j) + x(j, i));
    }
    return c;
  };
  Eigen::MatrixXd L(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::MatrixXd e = unit(k);
    L.col(k) = coords(S.transpose() * e * S - e);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cutoff = 1e-8 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  const Eigen::VectorXd id = coords(Eigen::MatrixXd::Identity(q, q));
  Eigen::VectorXd bc = Eigen::VectorXd::Zero(m);
  FormSolution out;
  for (Eigen::Index k = 0; k < m; ++k) {
    if (sv(k) > cutoff) continue;
    const Eigen::VectorXd v = svd.matrixV().col(k);
    bc += v.dot(id) * v;
    ++out.solution_dim;
  }
  if (out.solution_dim == 0) throw GeomError("solve_b: S^T b S = b has only the trivial solution");
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(q, q);
  for (Eigen::Index k = 0; k < m; ++k) b += bc(k) * unit(k);
  const double tr = b.trace();
  if (!(tr > 0)) throw GeomError("solve_b: no positive definite solution");
  b *= static_cast<double>(q) / tr;
  b = 0.5 * (b + b.transpose()).eval();
  out.b = b;
  out.residual = (S.transpose() * b * S - b).norm();
  out.b_eigenvalues = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(b).eigenvalues();
  if (out.b_eigenvalues.minCoeff() <= 0) throw GeomError("solve_b: no positive definite solution");
  return out;
}

KourganoffCertificate build_certificate(const IntPolynomial& p, const SpectralProfile& profile) {
  if (!profile.accepted() || !profile.lambda || !profile.big_root)
    throw GeomError("build_certificate: profile is not accepted");
  KourganoffCertificate c;
  c.poly = p;
  c.q = profile.q;
  c.a = companion(p);
  c.charpoly_matches = charpoly_exact(c.a) == p;
  const MpFloat mid = mp::div(profile.lambda->lo + profile.lambda->hi, MpFloat(2.0, 53), MPFR_RNDN);
  c.lambda = mid.to_double();
  c.lambda_hp = mid.str(30);
  c.lambda_q = profile.big_root->re.to_double();

  const Splitting s = split(c.a, profile);
  c.eu = s.eu;
  c.es_basis = s.es_basis;
  c.a_s = s.es_basis.colPivHouseholderQr().solve(c.a.cast<double>() * s.es_basis);
  c.s = c.lambda * c.a_s;
  const FormSolution f = solve_b(c.a_s, c.lambda);
  c.b = f.b;
  c.b_eigenvalues = f.b_eigenvalues;
  c.b_solution_dim = f.solution_dim;
  c.residual_orthogonality = f.residual;
  c.residual_invariance = std::max(s.eu_residual, s.es_leak);
  const Eigen::Index q = c.q;
  c.eigenbasis_route_residual = (c.s.transpose() * c.s - Eigen::MatrixXd::Identity(q, q)).norm();
  return c;
}

WarpFunction monomial_warp(int k) {
  return {"t^" + std::to_string(k), [k](double t) { return std::pow(t, k); },
          [k](double t) { return k * std::pow(t, k - 1); },
          [k](double t) { return k * (k - 1) * std::pow(t, k - 2); }};
}

WarpFunction flat_warp() {
  return {"1", [](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

MappingTorusModel make_model(const KourganoffCertificate& cert) {
  return make_model(cert, monomial_warp(2 * cert.q + 2));
}

MappingTorusModel make_model(const KourganoffCertificate& cert, WarpFunction phi) {
  MappingTorusModel m;
  m.cert = cert;
  m.q = cert.q;
  m.phi_exponent = 2 * cert.q + 2;
  m.phi = std::move(phi);
  const Eigen::Index n = cert.a.rows();
  const Eigen::MatrixXd l = cert.b.llt().matrixL();
  m.frame.resize(n, n);
  m.frame << cert.es_basis * l.transpose().inverse(), cert.eu / cert.eu.norm();
  m.a_adapted = m.frame.inverse() * cert.a.cast<double>() * m.frame;
  return m;
}

Eigen::MatrixXd metric_at(const MappingTorusModel& model, const Eigen::VectorXd& point) {
  const Eigen::Index dim = model.q + 2;
  if (point.size() != dim) throw GeomError("metric_at: point must have q + 2 coordinates");
  const double t = point(dim - 1);
  if (!(t > 0)) throw GeomError("metric_at: t must be positive");
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(dim, dim);
  g(dim - 2, dim - 2) = model.phi.value(t);
  return g;
}

double phi_equation_residual(const MappingTorusModel& model, double t) {
  const double scale = std::pow(model.cert.lambda, model.phi_exponent);
  const double rhs = scale * model.phi.value(t);
  return std::abs(model.phi.value(model.cert.lambda * t) - rhs) / std::abs(rhs);
}

namespace {

DeckCheck pullback_check(const MappingTorusModel& model, const std::vector<Eigen::VectorXd>& points, bool identity) {
  const Eigen::Index dim = model.q + 2;
  const double lam = model.cert.lambda;
  Eigen::MatrixXd J = Eigen::MatrixXd::Identity(dim, dim);
  if (!identity) {
    J.topLeftCorner(dim - 1, dim - 1) = model.a_adapted;
    J(dim - 1, dim - 1) = 1.0 / lam;
  }
  DeckCheck d;
  d.samples = static_cast<int>(points.size());
  double ratio_sum = 0;
  for (const auto& p : points) {
    Eigen::VectorXd image = J * p;
    const Eigen::MatrixXd pulled = J.transpose() * metric_at(model, image) * J;
    const Eigen::MatrixXd target = metric_at(model, p) / (lam * lam);
    const double dev = (pulled - target).cwiseAbs().maxCoeff() / target.cwiseAbs().maxCoeff();
    d.max_relative_deviation = std::max(d.max_relative_deviation, dev);
    ratio_sum += pulled(dim - 1, dim - 1) / metric_at(model, p)(dim - 1, dim - 1);
  }
  d.ratio = points.empty() ? 0 : ratio_sum / static_cast<double>(points.size());
  d.contracting = d.ratio < 1 - 1e-9;
  return d;
}

}  // namespace

DeckCheck deck_pullback_check(const MappingTorusModel& model, const std::vector<Eigen::VectorXd>& points) {
  return pullback_check(model, points, false);
}

DeckCheck identity_pullback_check(const MappingTorusModel& model, const std::vector<Eigen::VectorXd>& points) {
  return pullback_check(model, points, true);
}

std::vector<Eigen::VectorXd> random_torus_points(int q, int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(0.0, 1.0);
  std::uniform_real_distribution<double> logt(std::log(0.25), std::log(4.0));
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd p(q + 2);
    for (int k = 0; k <= q; ++k) p(k) = x(rng);
    p(q + 1) = std::exp(logt(rng));
    pts.push_back(p);
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Curvature

namespace {

using Metric = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

// gamma[(i*N + j)*N + k] = Gamma^i_{jk}.
std::vector<double> christoffel(const Metric& metric, const Eigen::VectorXd& y, const Eigen::VectorXd& h) {
  const Eigen::Index N = y.size();
  std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(N));
  for (Eigen::Index k = 0; k < N; ++k) {
    Eigen::VectorXd yp = y, ym = y;
    yp(k) += h(k);
    ym(k) -= h(k);
    dg[static_cast<std::size_t>(k)] = (metric(yp) - metric(ym)) / (2 * h(k));
  }
  const Eigen::MatrixXd ginv = metric(y).inverse();
  std::vector<double> gamma(static_cast<std::size_t>(N * N * N), 0.0);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j)
      for (Eigen::Index k = 0; k < N; ++k) {
        double s = 0;
        for (Eigen::Index l = 0; l < N; ++l)
          s += ginv(i, l) * (dg[static_cast<std::size_t>(j)](l, k) + dg[static_cast<std::size_t>(k)](l, j) -
                             dg[static_cast<std::size_t>(l)](j, k));
        gamma[static_cast<std::size_t>((i * N + j) * N + k)] = 0.5 * s;
      }
  return gamma;
}

}  // namespace

std::vector<double> riemann_tensor(const Metric& metric, const Eigen::VectorXd& y, const Eigen::VectorXd& h) {
  const Eigen::Index N = y.size();
  auto at = [N](Eigen::Index i, Eigen::Index j, Eigen::Index k) { return static_cast<std::size_t>((i * N + j) * N + k); };
  const std::vector<double> g0 = christoffel(metric, y, h);
  std::vector<std::vector<double>> dgam(static_cast<std::size_t>(N));
  for (Eigen::Index k = 0; k < N; ++k) {
    Eigen::VectorXd yp = y, ym = y;
    yp(k) += h(k);
    ym(k) -= h(k);
    const auto gp = christoffel(metric, yp, h);
    const auto gm = christoffel(metric, ym, h);
    auto& d = dgam[static_cast<std::size_t>(k)];
    d.resize(gp.size());
    for (std::size_t n = 0; n < gp.size(); ++n) d[n] = (gp[n] - gm[n]) / (2 * h(k));
  }
  std::vector<double> R(static_cast<std::size_t>(N * N * N * N), 0.0);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j)
      for (Eigen::Index k = 0; k < N; ++k)
        for (Eigen::Index l = 0; l < N; ++l) {
          double r = dgam[static_cast<std::size_t>(k)][at(i, l, j)] - dgam[static_cast<std::size_t>(l)][at(i, k, j)];
          for (Eigen::Index m = 0; m < N; ++m) r += g0[at(i, k, m)] * g0[at(m, l, j)] - g0[at(i, l, m)] * g0[at(m, k, j)];
          R[static_cast<std::size_t>(((i * N + j) * N + k) * N + l)] = r;
        }
  return R;
}

double sectional_curvature(const std::vector<double>& R, const Eigen::MatrixXd& g, int a, int b) {
  const Eigen::Index N = g.rows();
  double num = 0;
  for (Eigen::Index i = 0; i < N; ++i) num += g(a, i) * R[static_cast<std::size_t>(((i * N + b) * N + a) * N + b)];
  return num / (g(a, a) * g(b, b) - g(a, b) * g(a, b));
}

double warped_curvature_closed_form(int q, double t) { return -static_cast<double>(q) * (q + 1) / (t * t); }

CurvatureReport curvature_check(const MappingTorusModel& model, const std::vector<double>& ts, double step_factor) {
  const int q = model.q;
  const Eigen::Index N = q + 2;
  const int xw = q;       // index of x_{q+1}
  const int tt = q + 1;   // index of t
  CurvatureReport rep;
  rep.step_factor = step_factor;
  const Metric metric = [&model](const Eigen::VectorXd& y) { return metric_at(model, y); };
  for (double t : ts) {
    if (!(t > 0)) throw GeomError("curvature_check: t must be positive");
    const double ht = step_factor * t;
    if (ht < 1e-10 || t - 2 * ht <= 0) throw GeomError("curvature_check: step underflow near t = 0");
    Eigen::VectorXd y = Eigen::VectorXd::Constant(N, 0.5);
    y(tt) = t;
    Eigen::VectorXd h = Eigen::VectorXd::Constant(N, step_factor);
    h(tt) = ht;
    const auto R = riemann_tensor(metric, y, h);
    const Eigen::MatrixXd g = metric(y);

    CurvatureSample s;
    s.t = t;
    s.warped = sectional_curvature(R, g, xw, tt);
    const double f = model.phi.value(t), f1 = model.phi.d1(t), f2 = model.phi.d2(t);
    s.expected = -f2 / (2 * f) + f1 * f1 / (4 * f * f);
    s.relative_error = std::abs(s.expected) > 0 ? std::abs(s.warped - s.expected) / std::abs(s.expected)
                                                 : std::abs(s.warped - s.expected);
    std::vector<int> flat;
    for (int i = 0; i < q; ++i) flat.push_back(i);
    flat.push_back(tt);
    for (std::size_t i = 0; i < flat.size(); ++i)
      for (std::size_t j = i + 1; j < flat.size(); ++j)
        s.flat_block_max = std::max(s.flat_block_max, std::abs(sectional_curvature(R, g, flat[i], flat[j])));
    for (int i = 0; i < q; ++i) s.mixed_max = std::max(s.mixed_max, std::abs(sectional_curvature(R, g, i, xw)));

    rep.max_relative_error = std::max(rep.max_relative_error, s.relative_error);
    rep.flat_block_max = std::max(rep.flat_block_max, s.flat_block_max);
    rep.mixed_max = std::max(rep.mixed_max, s.mixed_max);
    rep.samples.push_back(s);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const KourganoffCertificate& c) {
  nlohmann::json j;
  j["schema"] = "anosovkit.certificate/1";
  j["poly"] = to_json(c.poly);
  j["q"] = c.q;
  j["A"] = matrix_json(c.a);
  j["charpoly_matches"] = c.charpoly_matches;
  j["lambda"] = c.lambda;
  j["lambda_hp"] = c.lambda_hp;
  j["lambda_q"] = c.lambda_q;
  j["Eu"] = vector_json(c.eu);
  j["Es_basis"] = matrix_json(Eigen::MatrixXd(c.es_basis.transpose()));
  j["A_s"] = matrix_json(c.a_s);
  j["S"] = matrix_json(c.s);
  j["b"] = matrix_json(c.b);
  j["b_eigenvalues"] = vector_json(c.b_eigenvalues);
  j["b_solution_dim"] = c.b_solution_dim;
  j["residual_orthogonality"] = c.residual_orthogonality;
  j["residual_invariance"] = c.residual_invariance;
  j["eigenbasis_route_residual"] = c.eigenbasis_route_residual;
  return j;
}

nlohmann::json to_json(const MappingTorusModel& m) {
  nlohmann::json j;
  j["schema"] = "anosovkit.torus_model/1";
  j["q"] = m.q;
  j["phi"] = m.phi.name;
  j["phi_exponent"] = m.phi_exponent;
  j["chart"] = "x_1..x_" + std::to_string(m.q + 1) + ", t > 0";
  j["frame"] = matrix_json(m.frame);
  j["A_adapted"] = matrix_json(m.a_adapted);
  return j;
}

nlohmann::json to_json(const DeckCheck& d) {
  return {{"max_relative_deviation", d.max_relative_deviation},
          {"ratio", d.ratio},
          {"contracting", d.contracting},
          {"samples", d.samples}};
}

nlohmann::json to_json(const CurvatureReport& r) {
  nlohmann::json s = nlohmann::json::array();
  for (const auto& c : r.samples)
    s.push_back({{"t", c.t},
                 {"warped", c.warped},
                 {"expected", c.expected},
                 {"relative_error", c.relative_error},
                 {"flat_block_max", c.flat_block_max},
                 {"mixed_max", c.mixed_max}});
  return {{"samples", s},
          {"max_relative_error", r.max_relative_error},
          {"flat_block_max", r.flat_block_max},
          {"mixed_max", r.mixed_max},
          {"step_factor", r.step_factor}};
}

TorusVerification verify_torus(const IntPolynomial& p, const SpectralProfile& profile, int samples,
                               std::uint64_t seed) {
  TorusVerification v;
  v.cert = build_certificate(p, profile);
  const MappingTorusModel model = make_model(v.cert);
  std::mt19937_64 rng(seed);
  const auto pts = random_torus_points(model.q, samples, rng);
  v.deck = deck_pullback_check(model, pts);
  v.identity_control = identity_pullback_check(model, pts);
  const std::vector<double> ts{0.5, 1.0, 1.5, 2.0, 3.0, v.cert.lambda};
  v.curvature = curvature_check(model, ts);
  v.flat_control = curvature_check(make_model(v.cert, flat_warp()), ts);
  for (double t : ts) v.phi_equation_max = std::max(v.phi_equation_max, phi_equation_residual(model, t));
  return v;
}

nlohmann::json to_json(const TorusVerification& v) {
  nlohmann::json j;
  j["schema"] = "anosovkit.torus_report/1";
  j["certificate"] = to_json(v.cert);
  j["model"] = to_json(make_model(v.cert));
  j["deck_pullback"] = to_json(v.deck);
  j["identity_control"] = to_json(v.identity_control);
  j["curvature"] = to_json(v.curvature);
  j["flat_control"] = to_json(v.flat_control);
  j["phi_equation_max"] = v.phi_equation_max;
  return j;
}

}  // namespace anosovkit
