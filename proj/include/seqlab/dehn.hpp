#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace seqlab {

/// Point of T*S^n inside R^{n+1} x R^{n+1}: v is the unit base point, u the
/// covector with <u, v> = 0. The twist parameter is the fiber length |u|.
/// Liouville form theta_T = -u.dv, symplectic form omega_T = -d theta_T = du ^ dv.
struct CotangentPoint {
  Eigen::VectorXd u;
  Eigen::VectorXd v;

  int n() const { return static_cast<int>(v.size()) - 1; }
  double length() const { return u.norm(); }
};

/// Re-projects v to the unit sphere and u to the orthogonal complement of v.
/// `drift` receives the size of the correction.
CotangentPoint tangency_projection(const CotangentPoint& p, double* drift = nullptr);

/// Rotation by angle t along the normalized geodesic flow. Throws ZeroSection
/// when u = 0 and t is neither 0 nor pi.
CotangentPoint sigma_t(const CotangentPoint& p, double t);
CotangentPoint antipode(const CotangentPoint& p);

/// Profile R with its first two derivatives, rescaled as R_lambda(t) = lambda R(t / lambda).
struct TwistProfile {
  std::function<double(double)> r;
  std::function<double(double)> dr;
  std::function<double(double)> ddr;
  double lambda = 1.0;
  double delta = 0.1;  // +infinity disables the concavity condition

  double r_lambda(double t) const { return lambda * r(t / lambda); }
  double dr_lambda(double t) const { return dr(t / lambda); }
  double ddr_lambda(double t) const { return ddr(t / lambda) / lambda; }
};

/// Piecewise polynomial, C^2, support in [-1, 1], R'(0) = 1/2, R' = 0 on [1/2, inf).
/// Its restriction to [-1/2, 1/2] is a polynomial with R(-t) = R(t) - t.
TwistProfile default_profile(double lambda = 1.0, double delta = 0.1);

/// R' >= 0 on t >= 0, and R'' < 0 wherever R' >= delta, on a fine grid of [0, 1].
bool wobble_check(const TwistProfile& prof, int grid = 20000);

/// sup over sampled |t| <= lambda/2 of |R_lambda(-t) - R_lambda(t) + t|.
double functional_equation_residual(const TwistProfile& prof, const std::vector<double>& t);

/// sigma at angle 2 pi R'_lambda(|u|) off the zero section, the antipode on it.
/// Points with |u| >= lambda are returned unchanged. `drift` gets the tangency correction.
CotangentPoint model_dehn_twist(const CotangentPoint& p, const TwistProfile& prof, double* drift = nullptr);

/// Primitive of the twist: 2 pi (R_lambda(mu) - mu R'_lambda(mu)), mu = |u|.
double twist_primitive(const CotangentPoint& p, const TwistProfile& prof);
/// The form 2 pi (R'_lambda(mu) - R(mu)) kept for comparison only.
double twist_primitive_as_printed(const CotangentPoint& p, const TwistProfile& prof);

/// Orthonormal basis (columns) of the tangent space of T at p, in (u, v) coordinates.
Eigen::MatrixXd cotangent_tangent_basis(const CotangentPoint& p);

/// max |omega(D tau e_i, D tau e_j) - omega(e_i, e_j)| over an orthonormal tangent basis,
/// central differences with step h through the tangency projection.
double symplecticity_residual(const CotangentPoint& p, const TwistProfile& prof, double h = 1e-5);

/// max over the tangent basis of |(tau^* theta_T - theta_T - dK)(xi)|.
double exactness_residual(const CotangentPoint& p, const TwistProfile& prof, double h = 1e-5,
                          bool printed_primitive = false);
double exactness_check(const TwistProfile& prof, const std::vector<CotangentPoint>& samples, double h = 1e-5);

/// x in C^{n+1} together with q(x) = sum x_k^2.
struct FibrationPoint {
  std::vector<std::complex<double>> x;
  std::complex<double> value;

  static FibrationPoint make(std::vector<std::complex<double>> x);
  bool consistent(double tol = 1e-12) const;
};

std::complex<double> q_value(const std::vector<std::complex<double>>& x);

/// Phi on the zero fiber: (im x |re x|, re x / |re x|). Throws OnSingularity at x = 0 and
/// DomainError when q(x) is not zero to 1e-12 relative precision.
CotangentPoint phi_map(const FibrationPoint& x);

/// Retraction of C^{n+1} near the zero fiber onto it; identity on the fiber.
std::vector<std::complex<double>> zero_fiber_retraction(const std::vector<std::complex<double>>& x);

/// max over a tangent basis of q^{-1}(0) at x of |(Phi^* theta_T - theta)(xi)|,
/// theta = (i/4) sum (x dxbar - xbar dx) = (1/2) sum (re x . d im x - im x . d re x).
double phi_pullback_residual(const FibrationPoint& x, double h = 1e-5);

/// |Phi(A x) - A Phi(x)| for an orthogonal A.
double phi_equivariance_residual(const FibrationPoint& x, const Eigen::MatrixXd& a);
/// |tau(A y) - A tau(y)|.
double twist_equivariance_residual(const CotangentPoint& p, const TwistProfile& prof, const Eigen::MatrixXd& a);

/// Random samplers driven by a 64-bit Mersenne twister.
CotangentPoint random_cotangent_point(int n, double min_len, double max_len, std::mt19937_64& rng);
FibrationPoint random_zero_fiber_point(int n, std::mt19937_64& rng);
Eigen::MatrixXd random_orthogonal(int dim, std::mt19937_64& rng);

struct DehnTolerances {
  double sigma_endpoint = 1e-12;
  double sigma_composition = 1e-9;
  double symplecticity = 1e-6;
  double exactness = 1e-4;
  double functional_equation = 1e-12;
  double phi_equivariance = 1e-10;
  double phi_pullback = 1e-4;
  double twist_equivariance = 1e-10;
  double projection_report = 1e-9;

  DehnTolerances scaled(double factor) const;
};

struct DehnReport {
  int n = 1;
  double lambda = 1.0;
  double delta = 0.1;
  int samples = 0;
  std::uint64_t seed = 0;

  double sigma_identity = 0;
  double sigma_antipode = 0;
  double sigma_composition = 0;
  double symplecticity = 0;
  double exactness = 0;
  double exactness_printed = 0;  // same check with the uncorrected primitive
  double functional_equation = 0;
  double phi_equivariance = 0;
  double phi_pullback = 0;
  double twist_equivariance = 0;
  double fixed_outside = 0;  // |tau(y) - y| for |u| >= lambda
  double zero_section = 0;   // |tau(y) - A(y)| on the zero section
  double max_projection = 0;
  bool wobbly = false;
  bool within_tolerance = false;
};

DehnReport dehn_report(int n, double lambda, double delta, int samples, std::uint64_t seed,
                       const DehnTolerances& tol = {});

}  // namespace seqlab
