#include "seqlab/dehn.hpp"

#include <algorithm>
#include <cmath>

#include "seqlab/errors.hpp"

namespace seqlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Vec = Eigen::VectorXd;
using CVec = std::vector<std::complex<double>>;

Vec stack(const CotangentPoint& p) {
  Vec out(p.u.size() + p.v.size());
  out << p.u, p.v;
  return out;
}

CotangentPoint unstack(const Vec& y) {
  const Eigen::Index m = y.size() / 2;
  return {y.head(m), y.tail(m)};
}

double distance(const CotangentPoint& a, const CotangentPoint& b) {
  return std::max((a.u - b.u).cwiseAbs().maxCoeff(), (a.v - b.v).cwiseAbs().maxCoeff());
}

// omega_T(a, b) = a_u . b_v - a_v . b_u
double omega(const Vec& a, const Vec& b) {
  const Eigen::Index m = a.size() / 2;
  return a.head(m).dot(b.tail(m)) - a.tail(m).dot(b.head(m));
}

// Orthonormal basis of the orthogonal complement of the columns of `normals`.
Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& normals) {
  const Eigen::Index dim = normals.rows();
  Eigen::MatrixXd gram = normals.transpose() * normals;
  Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(dim, dim) - normals * gram.inverse() * normals.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(proj);
  const Eigen::Index k = dim - normals.cols();
  return es.eigenvectors().rightCols(k);
}

Vec gaussian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec g(dim);
  for (int i = 0; i < dim; ++i) g(i) = nd(rng);
  return g;
}

Vec real_part(const CVec& x) {
  Vec a(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) a(static_cast<Eigen::Index>(i)) = x[i].real();
  return a;
}

Vec imag_part(const CVec& x) {
  Vec b(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) b(static_cast<Eigen::Index>(i)) = x[i].imag();
  return b;
}

CVec combine(const Vec& a, const Vec& b) {
  CVec x(static_cast<std::size_t>(a.size()));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = {a(static_cast<Eigen::Index>(i)), b(static_cast<Eigen::Index>(i))};
  return x;
}

CotangentPoint phi_raw(const CVec& x) {
  Vec a = real_part(x), b = imag_part(x);
  double ra = a.norm();
  return {b * ra, a / ra};
}

}  // namespace

CotangentPoint tangency_projection(const CotangentPoint& p, double* drift) {
  double dv = std::abs(p.v.norm() - 1.0);
  double du = std::abs(p.u.dot(p.v));
  double d = std::max(dv, du);
  if (drift) *drift = 0.0;
  if (d <= 1e-12) return p;
  CotangentPoint out;
  out.v = p.v / p.v.norm();
  out.u = p.u - p.u.dot(out.v) * out.v;
  if (drift) *drift = distance(out, p);
  return out;
}

CotangentPoint antipode(const CotangentPoint& p) { return {-p.u, -p.v}; }

CotangentPoint sigma_t(const CotangentPoint& p, double t) {
  double r = p.u.norm();
  if (r == 0.0) {
    if (t == 0.0) return p;
    if (t == kPi) return antipode(p);
    throw ZeroSection("sigma_t needs a nonzero covector for t = " + std::to_string(t));
  }
  double c = std::cos(t), s = std::sin(t);
  return {c * p.u - s * r * p.v, c * p.v + s * p.u / r};
}

TwistProfile default_profile(double lambda, double delta) {
  if (!(lambda > 0.0) || lambda > 1.0) throw DomainError("lambda must lie in (0, 1]");
  TwistProfile prof;
  prof.lambda = lambda;
  prof.delta = delta;
  // Middle piece on [-1/2, 1/2]: -3/32 + t/2 - 3t^2/4 + t^4/2.
  // Left piece on [-1, -1/2]: x^3 (-7 + 11x - 9x^2/2) with x = 2(t + 1).
  prof.r = [](double t) {
    if (t >= 0.5 || t <= -1.0) return 0.0;
    if (t >= -0.5) return -3.0 / 32 + t / 2 - 0.75 * t * t + 0.5 * t * t * t * t;
    double x = 2 * (t + 1);
    return x * x * x * (-7 + 11 * x - 4.5 * x * x);
  };
  prof.dr = [](double t) {
    if (t >= 0.5 || t <= -1.0) return 0.0;
    if (t >= -0.5) return 0.5 - 1.5 * t + 2 * t * t * t;
    double x = 2 * (t + 1);
    return 2 * x * x * (-21 + 44 * x - 22.5 * x * x);
  };
  prof.ddr = [](double t) {
    if (t >= 0.5 || t <= -1.0) return 0.0;
    if (t >= -0.5) return -1.5 + 6 * t * t;
    double x = 2 * (t + 1);
    return 4 * x * (-42 + 132 * x - 90 * x * x);
  };
  return prof;
}

bool wobble_check(const TwistProfile& prof, int grid) {
  for (int k = 0; k <= grid; ++k) {
    double t = static_cast<double>(k) / grid;
    double d1 = prof.dr(t);
    if (d1 < 0) return false;
    if (std::isinf(prof.delta)) continue;
    if (d1 >= prof.delta && !(prof.ddr(t) < 0)) return false;
  }
  return true;
}

double functional_equation_residual(const TwistProfile& prof, const std::vector<double>& t) {
  double worst = 0;
  for (double s : t) {
    if (std::abs(s) > prof.lambda / 2) throw DomainError("sample outside |t| <= lambda/2");
    worst = std::max(worst, std::abs(prof.r_lambda(-s) - prof.r_lambda(s) + s));
  }
  return worst;
}

CotangentPoint model_dehn_twist(const CotangentPoint& p, const TwistProfile& prof, double* drift) {
  if (drift) *drift = 0.0;
  double len = p.u.norm();
  if (len == 0.0) return antipode(p);
  if (len >= prof.lambda) return p;
  return tangency_projection(sigma_t(p, 2 * kPi * prof.dr_lambda(len)), drift);
}

double twist_primitive(const CotangentPoint& p, const TwistProfile& prof) {
  double mu = p.u.norm();
  return 2 * kPi * (prof.r_lambda(mu) - mu * prof.dr_lambda(mu));
}

double twist_primitive_as_printed(const CotangentPoint& p, const TwistProfile& prof) {
  double mu = p.u.norm();
  return 2 * kPi * (prof.dr_lambda(mu) - prof.r(mu));
}

Eigen::MatrixXd cotangent_tangent_basis(const CotangentPoint& p) {
  const Eigen::Index m = p.v.size();
  Eigen::MatrixXd normals = Eigen::MatrixXd::Zero(2 * m, 2);
  normals.block(m, 0, m, 1) = p.v;  // d|v|^2
  normals.block(0, 1, m, 1) = p.v;  // d<u, v>
  normals.block(m, 1, m, 1) = p.u;
  return complement_basis(normals);
}

namespace {

// Columns: D tau applied to each tangent basis vector.
Eigen::MatrixXd twist_jacobian(const CotangentPoint& p, const TwistProfile& prof, const Eigen::MatrixXd& basis, double h) {
  Vec y = stack(p);
  Eigen::MatrixXd out(y.size(), basis.cols());
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    Vec plus = stack(model_dehn_twist(tangency_projection(unstack(y + h * basis.col(i))), prof));
    Vec minus = stack(model_dehn_twist(tangency_projection(unstack(y - h * basis.col(i))), prof));
    out.col(i) = (plus - minus) / (2 * h);
  }
  return out;
}

}  // namespace

double symplecticity_residual(const CotangentPoint& p, const TwistProfile& prof, double h) {
  Eigen::MatrixXd basis = cotangent_tangent_basis(p);
  Eigen::MatrixXd jac = twist_jacobian(p, prof, basis, h);
  double worst = 0;
  for (Eigen::Index i = 0; i < basis.cols(); ++i)
    for (Eigen::Index j = i + 1; j < basis.cols(); ++j) {
      double d = omega(jac.col(i), jac.col(j)) - omega(basis.col(i), basis.col(j));
      worst = std::max(worst, std::abs(d));
    }
  return worst;
}

double exactness_residual(const CotangentPoint& p, const TwistProfile& prof, double h, bool printed_primitive) {
  Eigen::MatrixXd basis = cotangent_tangent_basis(p);
  Eigen::MatrixXd jac = twist_jacobian(p, prof, basis, h);
  CotangentPoint image = model_dehn_twist(p, prof);
  const Eigen::Index m = p.v.size();
  auto k = [&](const CotangentPoint& y) {
    return printed_primitive ? twist_primitive_as_printed(y, prof) : twist_primitive(y, prof);
  };
  Vec y = stack(p);
  double worst = 0;
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    Vec xi = basis.col(i);
    double pulled = -image.u.dot(jac.col(i).tail(m));
    double here = -p.u.dot(xi.tail(m));
    double dk = (k(tangency_projection(unstack(y + h * xi))) - k(tangency_projection(unstack(y - h * xi)))) / (2 * h);
    worst = std::max(worst, std::abs(pulled - here - dk));
  }
  return worst;
}

double exactness_check(const TwistProfile& prof, const std::vector<CotangentPoint>& samples, double h) {
  double worst = 0;
  for (const auto& p : samples) {
    if (p.u.norm() == 0.0) throw DomainError("exactness samples must avoid the zero section");
    worst = std::max(worst, exactness_residual(p, prof, h));
  }
  return worst;
}

std::complex<double> q_value(const CVec& x) {
  std::complex<double> s = 0;
  for (const auto& z : x) s += z * z;
  return s;
}

FibrationPoint FibrationPoint::make(CVec x) {
  FibrationPoint p;
  p.value = q_value(x);
  p.x = std::move(x);
  return p;
}

bool FibrationPoint::consistent(double tol) const { return std::abs(q_value(x) - value) <= tol; }

CotangentPoint phi_map(const FibrationPoint& p) {
  double norm2 = 0;
  for (const auto& z : p.x) norm2 += std::norm(z);
  if (norm2 == 0.0) throw OnSingularity("Phi is undefined at the critical point");
  if (std::abs(q_value(p.x)) > 1e-12 * norm2) throw DomainError("point is not on the zero fiber");
  return phi_raw(p.x);
}

CVec zero_fiber_retraction(const CVec& x) {
  Vec a = real_part(x), b = imag_part(x);
  double na = a.norm();
  if (na == 0.0) throw OnSingularity("retraction needs a nonzero real part");
  Vec bp = b - (a.dot(b) / (na * na)) * a;
  double nb = bp.norm();
  if (nb == 0.0) throw OnSingularity("retraction needs an imaginary part independent of the real part");
  double r = std::sqrt(na * nb);
  return combine(a * (r / na), bp * (r / nb));
}

double phi_pullback_residual(const FibrationPoint& p, double h) {
  CotangentPoint base = phi_map(p);
  Vec a = real_part(p.x), b = imag_part(p.x);
  const Eigen::Index m = a.size();
  Eigen::MatrixXd normals(2 * m, 2);
  normals.col(0) << a, -b;  // d(|a|^2 - |b|^2) / 2
  normals.col(1) << b, a;   // d(a . b)
  Eigen::MatrixXd basis = complement_basis(normals);
  double worst = 0;
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    Vec xa = basis.col(i).head(m), xb = basis.col(i).tail(m);
    CotangentPoint plus = phi_raw(zero_fiber_retraction(combine(a + h * xa, b + h * xb)));
    CotangentPoint minus = phi_raw(zero_fiber_retraction(combine(a - h * xa, b - h * xb)));
    Vec dv = (plus.v - minus.v) / (2 * h);
    double pulled = -base.u.dot(dv);
    double theta = 0.5 * (a.dot(xb) - b.dot(xa));
    worst = std::max(worst, std::abs(pulled - theta));
  }
  return worst;
}

double phi_equivariance_residual(const FibrationPoint& p, const Eigen::MatrixXd& a) {
  Vec re = real_part(p.x), im = imag_part(p.x);
  CotangentPoint moved = phi_map(FibrationPoint::make(combine(a * re, a * im)));
  CotangentPoint image = phi_map(p);
  return distance(moved, {a * image.u, a * image.v});
}

double twist_equivariance_residual(const CotangentPoint& p, const TwistProfile& prof, const Eigen::MatrixXd& a) {
  CotangentPoint moved = model_dehn_twist({a * p.u, a * p.v}, prof);
  CotangentPoint image = model_dehn_twist(p, prof);
  return distance(moved, {a * image.u, a * image.v});
}

CotangentPoint random_cotangent_point(int n, double min_len, double max_len, std::mt19937_64& rng) {
  Vec v = gaussian(n + 1, rng);
  v /= v.norm();
  Vec u = gaussian(n + 1, rng);
  u -= u.dot(v) * v;
  u /= u.norm();
  std::uniform_real_distribution<double> len(min_len, max_len);
  double l = len(rng);
  return {u * l, v};
}

FibrationPoint random_zero_fiber_point(int n, std::mt19937_64& rng) {
  Vec a = gaussian(n + 1, rng);
  Vec b = gaussian(n + 1, rng);
  b -= (a.dot(b) / a.squaredNorm()) * a;
  b *= a.norm() / b.norm();
  return FibrationPoint::make(combine(a, b));
}

Eigen::MatrixXd random_orthogonal(int dim, std::mt19937_64& rng) {
  Eigen::MatrixXd g(dim, dim);
  for (int j = 0; j < dim; ++j) g.col(j) = gaussian(dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) *= -1;
  return q;
}

DehnTolerances DehnTolerances::scaled(double f) const {
  DehnTolerances t = *this;
  t.sigma_endpoint *= f;
  t.sigma_composition *= f;
  t.symplecticity *= f;
  t.exactness *= f;
  t.functional_equation *= f;
  t.phi_equivariance *= f;
  t.phi_pullback *= f;
  t.twist_equivariance *= f;
  t.projection_report *= f;
  return t;
}

DehnReport dehn_report(int n, double lambda, double delta, int samples, std::uint64_t seed, const DehnTolerances& tol) {
  if (n < 1) throw DomainError("n must be at least 1");
  if (samples < 1) throw DomainError("samples must be positive");
  DehnReport rep;
  rep.n = n;
  rep.lambda = lambda;
  rep.delta = delta;
  rep.samples = samples;
  rep.seed = seed;
  TwistProfile prof = default_profile(lambda, delta);
  rep.wobbly = wobble_check(prof);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  std::uniform_real_distribution<double> half(-lambda / 2, lambda / 2);

  std::vector<double> ts;
  for (int k = 0; k < samples; ++k) ts.push_back(half(rng));
  rep.functional_equation = functional_equation_residual(prof, ts);

  for (int k = 0; k < samples; ++k) {
    CotangentPoint p = random_cotangent_point(n, 0.02 * lambda, 1.2 * lambda, rng);
    rep.sigma_identity = std::max(rep.sigma_identity, distance(sigma_t(p, 0.0), p));
    rep.sigma_antipode = std::max(rep.sigma_antipode, distance(sigma_t(p, kPi), antipode(p)));
    double s = angle(rng), t = angle(rng);
    rep.sigma_composition = std::max(rep.sigma_composition, distance(sigma_t(sigma_t(p, t), s), sigma_t(p, s + t)));

    double drift = 0;
    model_dehn_twist(p, prof, &drift);
    rep.max_projection = std::max(rep.max_projection, drift);
    rep.symplecticity = std::max(rep.symplecticity, symplecticity_residual(p, prof));
    rep.exactness = std::max(rep.exactness, exactness_residual(p, prof));
    rep.exactness_printed = std::max(rep.exactness_printed, exactness_residual(p, prof, 1e-5, true));
    rep.twist_equivariance = std::max(rep.twist_equivariance, twist_equivariance_residual(p, prof, random_orthogonal(n + 1, rng)));

    CotangentPoint far = random_cotangent_point(n, lambda, 2 * lambda, rng);
    rep.fixed_outside = std::max(rep.fixed_outside, distance(model_dehn_twist(far, prof), far));
    CotangentPoint zero{Vec::Zero(n + 1), far.v};
    rep.zero_section = std::max(rep.zero_section, distance(model_dehn_twist(zero, prof), antipode(zero)));

    FibrationPoint x = random_zero_fiber_point(n, rng);
    rep.phi_equivariance = std::max(rep.phi_equivariance, phi_equivariance_residual(x, random_orthogonal(n + 1, rng)));
    rep.phi_pullback = std::max(rep.phi_pullback, phi_pullback_residual(x));
  }

  rep.within_tolerance = rep.wobbly && rep.sigma_identity <= tol.sigma_endpoint &&
                         rep.sigma_antipode <= tol.sigma_endpoint && rep.sigma_composition <= tol.sigma_composition &&
                         rep.symplecticity <= tol.symplecticity && rep.exactness <= tol.exactness &&
                         rep.functional_equation <= tol.functional_equation &&
                         rep.phi_equivariance <= tol.phi_equivariance && rep.phi_pullback <= tol.phi_pullback &&
                         rep.twist_equivariance <= tol.twist_equivariance && rep.fixed_outside == 0.0 &&
                         rep.zero_section == 0.0 && rep.max_projection <= tol.projection_report;
  return rep;
}

}  // namespace seqlab
