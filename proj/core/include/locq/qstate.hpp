#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "locq/config.hpp"

namespace locq {

using Cx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// ---------------------------------------------------------------------------
// Index conventions
//
// Qubits are numbered 1..n and qubit 1 is the most significant bit of the
// amplitude index. Every module and the file format share this ordering.
// ---------------------------------------------------------------------------

// Bit of `party` (1-based) inside basis index `idx` of an n-qubit space.
inline int qubit_bit(unsigned idx, int party, int n_qubits) {
  return static_cast<int>((idx >> (n_qubits - party)) & 1u);
}

// Inserts bit b for `party` into an (n-1)-qubit index, producing an n-qubit
// index. Inverse of dropping that qubit.
unsigned insert_bit(unsigned sub_idx, int party, int bit, int n_qubits);

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

// Multi-qubit pure state; may be unnormalized (protocol branch residuals are
// first-class). Normalization is asserted only where a contract requires it.
struct PureState {
  int n_qubits = 0;
  Vec amps;

  PureState() = default;
  PureState(int n, Vec a);

  int dim() const { return 1 << n_qubits; }
  double norm() const { return amps.norm(); }
  double norm_sq() const { return amps.squaredNorm(); }
  bool is_normalized(double tol = 1e-9) const;
  PureState normalized() const;
};

Cx inner(const PureState& a, const PureState& b); // <a|b>

PureState basis_state(int n_qubits, unsigned index);
PureState tensor(const PureState& a, const PureState& b);
PureState tensor(const std::vector<PureState>& factors);

// Angle-based distance between rays; invariant under global phase.
double fubini_study_distance(const PureState& a, const PureState& b);

// Density operator on n qubits. Hermitian PSD; unit trace is required only
// at protocol roots.
struct DensityOperator {
  int n_qubits = 0;
  Mat mat;

  DensityOperator() = default;
  DensityOperator(int n, Mat m);

  int dim() const { return 1 << n_qubits; }
  double trace() const { return mat.trace().real(); }

  static DensityOperator from_pure(const PureState& psi);
  static DensityOperator mixture(const std::vector<std::pair<double, PureState>>& ensemble);
  static DensityOperator maximally_mixed(int n_qubits);

  // Throws std::invalid_argument on hermiticity/PSD (and optionally trace)
  // violations.
  void validate(const Tolerances& tol = {}, bool require_unit_trace = false) const;
};

// Ordered orthonormal basis of a subspace, with cached projector.
struct Subspace {
  int n_qubits = 0;
  std::vector<PureState> basis;
  Mat projector;

  int dim() const { return static_cast<int>(basis.size()); }

  // Basis must already be orthonormal within tol (throws otherwise).
  static Subspace from_orthonormal(int n_qubits, std::vector<PureState> basis,
                                   double tol = 1e-9);
  // Orthonormalizes the span of arbitrary vectors (rank decided at tol_rank).
  static Subspace span(int n_qubits, const std::vector<PureState>& vectors,
                       double tol_rank = 1e-8);
  // Orthogonal complement within the full n-qubit space.
  Subspace complement(double tol_rank = 1e-8) const;

  bool contains(const PureState& psi, double tol) const;
};

// Packs the two overlap conditions of a state pair for one party: for any
// single-qubit v, <v|N|v> equals the inner product of the two collapses.
struct PairOverlapOperator {
  int party = 1;
  Eigen::Matrix2cd matrix;
};

// ---------------------------------------------------------------------------
// Single-qubit helpers
// ---------------------------------------------------------------------------

// Orthogonal complement with the convention (a,b) -> (-conj(b), conj(a)),
// so that the Bloch vectors are exact negatives.
PureState orth_complement(const PureState& v);

Eigen::Vector3d bloch_vector(const PureState& v); // v normalized, 1 qubit
PureState bloch_state(const Eigen::Vector3d& r);  // unit Bloch vector -> state

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Orthonormal eigenvectors with eigenvalue > tol_rank, descending.
Subspace support(const DensityOperator& rho, double tol_rank = 1e-8);

// True iff psi lies in Supp(rho) up to the projector residual tol.
bool support_contains(const DensityOperator& rho, const PureState& psi, double tol = 1e-9);

// Projects `party` onto single-qubit state v and drops that qubit. The
// result is unnormalized: its squared norm (trace) is the outcome
// probability for normalized input.
PureState collapse(const PureState& psi, int party, const PureState& v);
DensityOperator collapse(const DensityOperator& rho, int party, const PureState& v);

PairOverlapOperator pair_overlap_operator(const PureState& a, const PureState& b, int party);

// Splits a traceless N into Hermitian parts H1 + i H2 and returns their
// Pauli coefficient vectors, so <v|N|v> = 0 iff n1.r(v) = 0 and n2.r(v) = 0.
std::pair<Eigen::Vector3d, Eigen::Vector3d> bloch_decompose(const PairOverlapOperator& n,
                                                            double tol_orth = 1e-9);

// Partial trace of a state onto a single qubit.
Eigen::Matrix2cd reduced_qubit(const PureState& psi, int party);
Eigen::Matrix2cd reduced_qubit(const DensityOperator& rho, int party);

// Reshapes psi across cut|complement; rows indexed by the sorted cut qubits.
Mat reshape_cut(const PureState& psi, const std::vector<int>& cut);

// Support orthogonality: ||P1 P2||_max <= tol.
bool states_orthogonal(const DensityOperator& a, const DensityOperator& b,
                       double tol = 1e-9, double tol_rank = 1e-8);

PureState apply_local_unitary(const PureState& psi, int party, const Eigen::Matrix2cd& u);
DensityOperator apply_local_unitary(const DensityOperator& rho, int party,
                                    const Eigen::Matrix2cd& u);

// perm[i] = new position of qubit i+1 (1-based values, a bijection).
PureState permute_qubits(const PureState& psi, const std::vector<int>& perm);
DensityOperator permute_qubits(const DensityOperator& rho, const std::vector<int>& perm);

} // namespace locq
