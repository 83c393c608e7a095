#pragma once

#include <optional>
#include <vector>

#include "locq/config.hpp"
#include "locq/prodfind.hpp"
#include "locq/qstate.hpp"

namespace locq {

// Certified bounds on the orthogonal Schmidt number: the minimal number of
// pairwise-orthogonal product states whose span contains the support. The
// spanning set is not required to lie inside the support. Reported as a
// bounds record because no general exact algorithm is available.
struct SchmidtBounds {
  int lower = 1;
  int upper = 0;               // meaningful when upper_certified
  bool upper_certified = false;
  bool exact = false;          // lower == upper, both certified
  std::optional<std::vector<PureState>> witness_upper;

  bool inconclusive() const { return !upper_certified; }
};

// Number of singular values above tol_rank of psi reshaped across
// cut|complement. Throws on empty or full cuts.
int schmidt_rank(const PureState& psi, const std::vector<int>& cut, double tol_rank = 1e-8);

SchmidtBounds orth_schmidt_number(const DensityOperator& rho, int m_max,
                                  const SearchConfig& cfg = {});
SchmidtBounds orth_schmidt_number(const PureState& psi, int m_max, const SearchConfig& cfg = {});

// Certified lower bound only; skips the randomized witness search.
int schmidt_lower_bound(const DensityOperator& rho, const SearchConfig& cfg = {});

// Witness validity per the bounds contract: pairwise orthogonal, each
// member product, span contains the support.
bool valid_witness(const std::vector<PureState>& witness, const Subspace& supp,
                   double tol_orth = 1e-9, double tol_prod = 1e-9);

struct SumCriterion {
  bool passes = true; // sum of certified lower bounds <= 2^n
  int sum_lower = 0;
  int sum_upper = 0;
  bool upper_certified = false;
  bool certified_indistinguishable = false; // sum_lower > 2^n
  int dimension_bound = 0;                  // 2^n
};

// Necessary criterion for LOCC distinguishability: the Schmidt-number sum
// of a distinguishable orthogonal set cannot exceed the space dimension.
SumCriterion schmidt_sum_criterion(const std::vector<DensityOperator>& states,
                                   const SearchConfig& cfg = {});

enum class TwoQubitVerdict { Distinguishable, Indistinguishable, Inconclusive };

struct TwoQubitDecision {
  TwoQubitVerdict verdict = TwoQubitVerdict::Inconclusive;
  std::vector<int> signature; // descending Sch values when exact
  bool signature_exact = false;
  int sum_lower = 0;
  int sum_upper = 0;
};

// Exact two-qubit characterization: 2..4 pairwise-orthogonal states are
// locally distinguishable iff the Sch sum is at most 4. Never returns a
// wrong boolean: inconclusive bounds yield an Inconclusive verdict.
TwoQubitDecision decide_2x2(const std::vector<DensityOperator>& states,
                            const SearchConfig& cfg = {});

} // namespace locq
