#pragma once

#include <cstdint>

namespace locq {

// Numerical tolerances shared across the library. Dimensions never exceed
// 2^4 = 16, so fixed absolute thresholds are adequate.
struct Tolerances {
  double norm = 1e-9;    // normalization / unit-trace checks
  double herm = 1e-9;    // hermiticity residual
  double orth = 1e-9;    // orthogonality / projector residuals
  double psd = 1e-9;     // allowed eigenvalue negativity
  double rank = 1e-8;    // numerical-rank cutoff (eigen/singular values)
  double plane = 1e-8;   // Bloch-plane constraint rank threshold
  double vanish = 1e-10; // branch norm/trace below this counts as vanished
  double prod = 1e-9;    // product-state reconstruction residual
};

// Knobs for the randomized searches. All searches take explicit seeds and
// are deterministic for a fixed config.
struct SearchConfig {
  Tolerances tol;
  int restarts = 512;        // product-state search restarts
  int circle_samples = 64;   // samples per continuous candidate family
  int witness_restarts = 64; // orthogonal-product witness search restarts
  std::uint64_t seed = 0;
  int max_qubits = 4;
  double newton_tol = 1e-12;
  double descent_tol = 1e-12;
  double dedup_fs = 1e-6;        // Fubini-Study dedup distance
  long max_nodes = 4'000'000;    // protocol search node guard
};

} // namespace locq
