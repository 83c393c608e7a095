#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace locq::rng {

// Derives an independent engine for (seed, stream). Streams let concurrent
// or per-trial work share one user-facing seed without correlation.
std::mt19937_64 engine(std::uint64_t seed, std::uint64_t stream = 0);

std::complex<double> gaussian(std::mt19937_64& gen);

Eigen::VectorXcd gaussian_vector(int dim, std::mt19937_64& gen);

// Uniform point on the Bloch sphere.
Eigen::Vector3d random_bloch(std::mt19937_64& gen);

// Haar-distributed unitary (Ginibre + QR with phase-fixed diagonal).
Eigen::MatrixXcd haar_unitary(int dim, std::mt19937_64& gen);

// k orthonormal columns of a Haar unitary, as a dim x k matrix.
Eigen::MatrixXcd random_isometry(int dim, int k, std::mt19937_64& gen);

} // namespace locq::rng
