#include "seqlab/index_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seqlab/errors.hpp"

namespace seqlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double principal(double x) {
  x = std::fmod(x + kPi, 2 * kPi);
  if (x <= 0) x += 2 * kPi;
  return x - kPi;  // (-pi, pi]
}

Eigen::MatrixXd symplectic_j(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return j;
}

Eigen::MatrixXcd as_complex(const Frame& f) {
  const int n = static_cast<int>(f.cols());
  return f.topRows(n).cast<std::complex<double>>() + std::complex<double>(0, 1) * f.bottomRows(n).cast<std::complex<double>>();
}

Frame orthonormalized(const Frame& f) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(f);
  return qr.householderQ() * Eigen::MatrixXd::Identity(f.rows(), f.cols());
}

// Snap to the nearest integer when within tolerance.
double snapped(double x) {
  double r = std::round(x);
  return std::abs(x - r) < 1e-9 ? r : x;
}

long crossing_weight(double x) {
  x = snapped(x);
  return static_cast<long>(std::floor(x)) + static_cast<long>(std::ceil(x));
}

}  // namespace

LagrangianPath LagrangianPath::reversed() const {
  LagrangianPath out;
  for (std::size_t i = frames.size(); i-- > 0;) {
    out.frames.push_back(frames[i]);
    out.t.push_back(t.empty() ? 0.0 : 1.0 - t[i]);
  }
  return out;
}

Frame rotation_frame(const std::vector<double>& angles) {
  const int n = static_cast<int>(angles.size());
  Frame f = Frame::Zero(2 * n, n);
  for (int i = 0; i < n; ++i) {
    f(i, i) = std::cos(angles[static_cast<std::size_t>(i)]);
    f(n + i, i) = std::sin(angles[static_cast<std::size_t>(i)]);
  }
  return f;
}

LagrangianPath rotation_path(const std::vector<double>& start, const std::vector<double>& speed, int samples) {
  LagrangianPath p;
  for (int k = 0; k <= samples; ++k) {
    double t = static_cast<double>(k) / samples;
    std::vector<double> a(start.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = start[i] + t * speed[i];
    p.t.push_back(t);
    p.frames.push_back(rotation_frame(a));
  }
  return p;
}

double lagrangian_residual(const Frame& f) {
  Frame g = f;
  for (int c = 0; c < g.cols(); ++c) {
    double nrm = g.col(c).norm();
    if (nrm > 0) g.col(c) /= nrm;
  }
  return (g.transpose() * symplectic_j(static_cast<int>(f.cols())) * g).cwiseAbs().maxCoeff();
}

void validate_frame(const Frame& f) {
  if (f.rows() != 2 * f.cols() || f.cols() == 0) throw NotLagrangian("frame must be 2n x n");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f);
  if (svd.singularValues().minCoeff() < 1e-12 * std::max(1.0, svd.singularValues().maxCoeff()))
    throw NotLagrangian("frame columns are dependent");
  double r = lagrangian_residual(f);
  if (r > 1e-10) throw NotLagrangian("Lagrangian residual " + std::to_string(r));
}

std::complex<double> det2(const Frame& f, const std::optional<Eigen::MatrixXcd>& theta) {
  Eigen::MatrixXcd z = as_complex(f);
  if (theta) z = (*theta) * z;
  std::complex<double> d = z.determinant();
  if (std::abs(d) < 1e-300) throw NotLagrangian("frame is not totally real");
  std::complex<double> u = d / std::abs(d);
  return u * u;
}

Eigen::MatrixXd projector(const Frame& f) {
  Frame q = orthonormalized(f);
  return q * q.transpose();
}

bool same_subspace(const Frame& a, const Frame& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (projector(a) - projector(b)).cwiseAbs().maxCoeff() < tol;
}

int loop_maslov(const LagrangianPath& loop, const std::optional<Eigen::MatrixXcd>& theta) {
  if (loop.size() < 2) return 0;
  for (const auto& f : loop.frames) validate_frame(f);
  if (!same_subspace(loop.frames.front(), loop.frames.back())) throw NotClosed("path does not return to its start");
  double total = 0;
  std::complex<double> prev = det2(loop.frames.front(), theta);
  for (std::size_t k = 1; k < loop.size(); ++k) {
    std::complex<double> cur = det2(loop.frames[k], theta);
    double step = std::arg(cur * std::conj(prev));
    if (std::abs(step) >= kPi / 2)
      throw SamplingTooCoarse("argument step " + std::to_string(step) + " at sample " + std::to_string(k));
    total += step;
    prev = cur;
  }
  double turns = total / (2 * kPi);
  return static_cast<int>(std::lround(turns));
}

LagrangianPath concatenate(const LagrangianPath& a, const LagrangianPath& b) {
  LagrangianPath out = a;
  std::size_t start = 0;
  if (!a.frames.empty() && !b.frames.empty() && same_subspace(a.frames.back(), b.frames.front())) start = 1;
  double offset = out.t.empty() ? 0.0 : out.t.back();
  for (std::size_t i = start; i < b.frames.size(); ++i) {
    out.frames.push_back(b.frames[i]);
    out.t.push_back(offset + (b.t.empty() ? 0.0 : b.t[i]));
  }
  return out;
}

int rs_index_doubled(const LagrangianPath& path, const Frame& reference) {
  if (path.size() == 0) return 0;
  validate_frame(reference);
  for (const auto& f : path.frames) validate_frame(f);
  const int n = path.n();
  Eigen::MatrixXcd uv = as_complex(orthonormalized(reference));

  auto phases = [&](const Frame& f) {
    Eigen::MatrixXcd g = uv.adjoint() * as_complex(orthonormalized(f));
    Eigen::MatrixXcd s = g * g.transpose();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(s, false);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(std::arg(es.eigenvalues()(i)));
    return out;
  };

  // Unwrapped eigenphases of S = G G^T (eigenvalues e^{2 i theta}).
  std::vector<double> cur = phases(path.frames.front());
  std::sort(cur.begin(), cur.end());
  std::vector<std::vector<double>> track{cur};
  for (std::size_t k = 1; k < path.size(); ++k) {
    std::vector<double> next = phases(path.frames[k]);
    std::vector<std::size_t> perm(next.size()), best;
    std::iota(perm.begin(), perm.end(), 0);
    double best_cost = 1e300;
    do {
      double cost = 0;
      for (std::size_t j = 0; j < perm.size(); ++j) cost += std::abs(principal(next[perm[j]] - cur[j]));
      if (cost < best_cost - 1e-15) {
        best_cost = cost;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<double> lifted(cur.size());
    for (std::size_t j = 0; j < cur.size(); ++j) {
      double step = principal(next[best[j]] - cur[j]);
      if (std::abs(step) >= kPi / 2)
        throw SamplingTooCoarse("eigenphase step " + std::to_string(step) + " at sample " + std::to_string(k));
      lifted[j] = cur[j] + step;
    }
    cur = lifted;
    track.push_back(cur);
  }

  // theta / pi = phase / (2 pi).
  auto x = [&](std::size_t k, std::size_t j) { return track[k][j] / (2 * kPi); };
  for (std::size_t k = 1; k + 1 < track.size(); ++k)
    for (std::size_t j = 0; j < track[k].size(); ++j) {
      double v = x(k, j), m = std::round(v);
      if (std::abs(v - m) >= 1e-9) continue;
      double before = x(k - 1, j) - m, after = x(k + 1, j) - m;
      if (std::abs(before) < 1e-9 || std::abs(after) < 1e-9 || (before > 0) == (after > 0))
        throw DegenerateCrossing("crossing at sample " + std::to_string(k) + " is not transverse");
    }
  long total = 0;
  const std::size_t last = track.size() - 1;
  for (std::size_t j = 0; j < track[0].size(); ++j) total += crossing_weight(x(last, j)) - crossing_weight(x(0, j));
  return static_cast<int>(total);
}

int maslov_morse(const std::vector<LagrangianPath>& edges) {
  if (edges.size() != 4) throw CornerMismatch("need exactly four boundary edges");
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& a = edges[i];
    const auto& b = edges[(i + 1) % 4];
    if (a.frames.empty() || b.frames.empty()) throw CornerMismatch("empty edge " + std::to_string(i));
    if (!same_subspace(a.frames.back(), b.frames.front()))
      throw CornerMismatch("edge " + std::to_string(i) + " does not meet edge " + std::to_string((i + 1) % 4));
  }
  LagrangianPath loop = edges[0];
  for (std::size_t i = 1; i < 4; ++i) loop = concatenate(loop, edges[i]);
  return loop_maslov(loop);
}

Grading Grading::shifted(int k) const {
  Grading g = *this;
  for (auto& v : g.lift) v -= k;
  return g;
}

Grading canonical_grading(const std::vector<double>& t, const std::vector<std::complex<double>>& d) {
  if (t.size() != d.size() || d.empty()) throw DomainError("grading needs matching, nonempty samples");
  for (const auto& z : d)
    if (std::abs(std::abs(z) - 1) > 1e-9) throw DomainError("det^2 sample off the unit circle");
  if (std::abs(d.back() - std::complex<double>(1, 0)) > 1e-9) throw DomainError("det^2 must equal 1 at the anchor");
  Grading g{t, std::vector<double>(d.size(), 0.0)};
  for (std::size_t k = d.size() - 1; k-- > 0;) {
    double step = std::arg(d[k] * std::conj(d[k + 1])) / (2 * kPi);
    if (std::abs(step) >= 0.25) throw JumpTooLarge("lift jumps by " + std::to_string(step) + " turns at sample " + std::to_string(k));
    g.lift[k] = g.lift[k + 1] + step;
  }
  return g;
}

DimensionVerdict sft_dimension(const IndexFormulaInput& in, DimensionMode mode) {
  DimensionVerdict v;
  if (mode == DimensionMode::MorseBott) {
    if (!in.morse) throw DomainError("Morse-Bott mode needs the Morse index");
    v.dimension = -*in.morse + (in.n - 3) + 2 * in.c1;
  } else {
    if (!in.mu_cz2) throw DomainError("CZ mode needs the Conley-Zehnder index");
    int twice = -*in.mu_cz2 + in.n;
    if (twice % 2 != 0) throw DomainError("index term -mu_CZ + n/2 is not an integer");
    v.dimension = twice / 2 + (in.n - 3) + 2 * in.c1;
  }
  v.empty_for_generic = v.dimension < 0;
  return v;
}

int disc_moduli_dimension(int n, int mu, int k) {
  if (k < 0) throw DomainError("number of marked inputs must be nonnegative");
  return n + mu - 3 + (k + 1);
}

bool degree_identity_holds(int mu_out, const std::vector<int>& mu_in) {
  int rhs = 1;
  for (int m : mu_in) rhs += m - 1;
  return mu_out - 1 == rhs;
}

}  // namespace seqlab
