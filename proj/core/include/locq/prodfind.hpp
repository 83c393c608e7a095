#pragma once

#include <optional>
#include <vector>

#include "locq/config.hpp"
#include "locq/qstate.hpp"

namespace locq {

// A product state found inside a subspace. Coefficients are over the
// subspace basis, normalized, first nonzero entry real positive.
struct ProductStateHit {
  Vec coefficients;
  std::vector<PureState> factors; // one single-qubit state per party
  double residual = 0.0;          // ||(I - P) |factors>||
  int family_dim = 0;             // 0 isolated, >= 1 continuous family
};

struct ProductSearchResult {
  std::vector<ProductStateHit> hits;
  bool complete = false; // saturation heuristic: no new hit in the final half
  int restarts_used = 0;
};

struct UpbCheckResult {
  bool orthonormal_products = false;
  ProductSearchResult complement_hits;
  bool unextendible = false;
};

// Factors returned iff every single-qubit cut of psi has rank 1; the tensor
// of the factors reconstructs psi (up to global phase) within tol.
std::optional<std::vector<PureState>> is_product(const PureState& psi, double tol = 1e-9);

// Finds the solutions of the homogeneous quadratic minor system
// {rank-1 across every single-qubit cut} restricted to the subspace:
// multi-start Newton on random square subsystems plus Bloch-parametrized
// penalty descent. Hits are deduplicated by Fubini-Study distance and
// sorted canonically, so output is deterministic for a fixed seed.
ProductSearchResult product_states_in_subspace(const Subspace& s, const SearchConfig& cfg = {});

// Unextendibility of a (product or general) basis: the orthogonal
// complement of the span contains no product state. Emptiness is a
// numerical claim qualified by the completeness flag.
UpbCheckResult upb_check(const std::vector<PureState>& states, const SearchConfig& cfg = {});

} // namespace locq
