#pragma once

#include <array>
#include <vector>

#include "locq/config.hpp"
#include "locq/lpmcc.hpp"
#include "locq/qstate.hpp"

namespace locq::upb {

// Angles of the canonical three-qubit unextendible product basis, each
// strictly inside (0, pi/2).
struct UpbAngles {
  double theta1 = M_PI / 4;
  double theta2 = M_PI / 4;
  double theta3 = M_PI / 4;

  double c1() const { return std::cos(theta1); }
  double s1() const { return std::sin(theta1); }
  double c2() const { return std::cos(theta2); }
  double s2() const { return std::sin(theta2); }
  double c3() const { return std::cos(theta3); }
  double s3() const { return std::sin(theta3); }
  double t1() const { return std::tan(theta1); }

  void validate() const; // throws on boundary or out-of-range angles
};

// Symbols of the span analysis; fields default to NaN until populated.
// validate() checks the recorded cross-relations (mu' = -|r|^2 mu and
// xi = -1/conj(s)) and returns the largest violation.
struct AnalysisRecord {
  double p = NAN, q = NAN;      // outcome weights |<psi|0>|^2, |<psi|A>|^2
  Cx r{NAN, NAN}, s{NAN, NAN};  // measurement ratios
  double lambda = NAN;          // mixture eigenvalue
  double mu = NAN, mu_prime = NAN;
  double x = NAN, y = NAN;      // product-combination roots
  Cx xi{NAN, NAN};              // amplitude ratio beta1/alpha1
  double alpha_phase = NAN;     // phase of the measured direction

  double validate(double tol = 1e-9) const;
};

// The four members: |000>, |1BC>, |A1C'>, |A'B'1>; pairwise orthogonal
// products by construction.
std::array<PureState, 4> canonical_upb(const UpbAngles& angles);

// The four product states on the last two qubits that organize the span
// analysis: |00>, |BC>, |1C'>, |B'1>.
std::array<PureState, 4> bc_product_states(const UpbAngles& angles);

// Duals of linearly independent states within their span, normalized so
// that <dual_i|s_j> = delta_ij. Throws when the Gram matrix condition
// number exceeds 1e8.
std::vector<PureState> reciprocal_basis(const std::vector<PureState>& states);

// The operator mapping each of the four BC products to itself with
// eigenvalues (r, -1/conj(r), s, -1/conj(s)), assembled from rank-1 terms
// over the reciprocal basis.
Mat transfer_operator(const AnalysisRecord& record, const UpbAngles& angles);

// Larger eigenvalue of p|00><00| + (1-p)|BC><BC|.
double pair_mixture_eigenvalue(double p, double theta2, double theta3);
double pair_mixture_eigenvalue(double p, const UpbAngles& angles);

// Roots of mu^2 - mu (1-r^2)/(r^2 c2 c3) - 1/r^2 = 0; always real. The
// root's eigenvector mu|00> + |BC> diagonalizes the mixture at p = 1/(1+r^2).
std::array<double, 2> eigenvector_ratio_roots(double r, double theta2, double theta3);
std::array<double, 2> eigenvector_ratio_roots(double r, const UpbAngles& angles);

// Roots of x^2 - x ((1+mu^2) c3 + 2 mu c2)/(mu s2 s3) - 1 = 0; each root
// makes the combined vector a product state.
std::array<double, 2> product_combination_roots(double mu, double theta2, double theta3);
std::array<double, 2> product_combination_roots(double mu, const UpbAngles& angles);

// ((1-r^2)/r)^2 + 4 c2^2: the positive gap showing the closing constraint
// of the span analysis has no real solution.
double impossibility_gap(double r, double theta2);
double impossibility_gap(double r, const UpbAngles& angles);

struct ScanReport {
  UpbAngles angles;
  int trials = 0;
  std::uint64_t seed = 0;
  int distinguishable = 0;
  int indistinguishable = 0;
  int inconclusive = 0;
  std::vector<Verdict> verdicts;
};

// Decides Haar-random orthonormal bases of the UPB span; the span is
// locally indistinguishable, so no trial may come out distinguishable.
ScanReport basis_scan(const UpbAngles& angles, int trials, std::uint64_t seed,
                      const SearchConfig& cfg = {});

} // namespace locq::upb
