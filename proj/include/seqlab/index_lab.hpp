#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace seqlab {

/// Frame of a Lagrangian subspace of R^{2n}: 2n x n, coordinates (q_1..q_n, p_1..p_n),
/// symplectic form w(u, v) = u_q . v_p - u_p . v_q.
using Frame = Eigen::MatrixXd;

struct LagrangianPath {
  std::vector<double> t;
  std::vector<Frame> frames;

  std::size_t size() const { return frames.size(); }
  int n() const { return frames.empty() ? 0 : static_cast<int>(frames.front().cols()); }
  LagrangianPath reversed() const;
};

/// Frames spanning e^{i theta(t)} R^n, one angle per complex coordinate.
Frame rotation_frame(const std::vector<double>& angles);
/// Samples t -> rotation_frame(start + t * speed) at `samples` + 1 evenly spaced points.
LagrangianPath rotation_path(const std::vector<double>& start, const std::vector<double>& speed, int samples);

/// max |F^T J F| for the column-normalized frame.
double lagrangian_residual(const Frame& f);
/// Throws NotLagrangian when the residual exceeds 1e-10 or the frame is rank deficient.
void validate_frame(const Frame& f);

/// det(X + iY)^2 / |det(X + iY)|^2; `theta` is an optional fixed unitary change of trivialization.
std::complex<double> det2(const Frame& f, const std::optional<Eigen::MatrixXcd>& theta = std::nullopt);

/// Orthogonal projector onto the span; used to compare subspaces.
Eigen::MatrixXd projector(const Frame& f);
bool same_subspace(const Frame& a, const Frame& b, double tol = 1e-9);

/// Winding of det^2 along a closed path. Throws NotClosed, SamplingTooCoarse (argument step >= pi/2).
int loop_maslov(const LagrangianPath& loop, const std::optional<Eigen::MatrixXcd>& theta = std::nullopt);

/// Appends b to a, dropping b's first sample when it repeats a's last subspace.
LagrangianPath concatenate(const LagrangianPath& a, const LagrangianPath& b);

/// Twice the Robbin-Salamon index of the path relative to a fixed Lagrangian.
/// Positive crossings are those where the form u -> w(F u, F' u) is positive.
/// Throws DegenerateCrossing on an interior touch, SamplingTooCoarse on large steps.
int rs_index_doubled(const LagrangianPath& path, const Frame& reference);

/// Concatenates the four boundary edges into a loop and returns its Maslov index.
/// Throws CornerMismatch when consecutive edges do not meet.
int maslov_morse(const std::vector<LagrangianPath>& edges);

struct Grading {
  std::vector<double> t;
  std::vector<double> lift;
  /// Shift by k: lift - k.
  Grading shifted(int k) const;
};

/// Continuous lift of det^2 samples with lift(last) = 0. Throws JumpTooLarge
/// when consecutive samples are a quarter turn or more apart, DomainError when
/// the last sample is not 1.
Grading canonical_grading(const std::vector<double>& t, const std::vector<std::complex<double>>& det2_samples);

enum class DimensionMode { CZ, MorseBott };

struct IndexFormulaInput {
  int n = 2;
  int c1 = 0;
  int dim_r_sim = 2;
  std::optional<int> morse;     // Morse index of the orbit, for MorseBott mode
  std::optional<int> mu_cz2;    // doubled Conley-Zehnder index, for CZ mode
};

struct DimensionVerdict {
  int dimension = 0;
  bool empty_for_generic = false;  // dimension < 0
};

/// MorseBott: -Morse + (n - 3) + 2 c1. CZ: (-mu_CZ + n/2) + (n - 3) + 2 c1.
/// Throws DomainError on missing or non-integral input.
DimensionVerdict sft_dimension(const IndexFormulaInput& in, DimensionMode mode);

/// n + mu + k - 2; throws DomainError for k < 0.
int disc_moduli_dimension(int n, int mu, int k);

/// (mu_out - 1) == 1 + sum (mu_i - 1).
bool degree_identity_holds(int mu_out, const std::vector<int>& mu_in);

}  // namespace seqlab
