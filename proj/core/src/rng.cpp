#include "locq/rng.hpp"

namespace locq::rng {

namespace {

// splitmix64 step, used to decorrelate (seed, stream) pairs.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

} // namespace

std::mt19937_64 engine(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix(mix(seed) ^ mix(stream + 0x51ed2701)));
}

std::complex<double> gaussian(std::mt19937_64& gen) {
  std::normal_distribution<double> dist(0.0, 1.0);
  double re = dist(gen);
  double im = dist(gen);
  return {re, im};
}

Eigen::VectorXcd gaussian_vector(int dim, std::mt19937_64& gen) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = gaussian(gen);
  return v;
}

Eigen::Vector3d random_bloch(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double z = 2.0 * uni(gen) - 1.0;
  double phi = 2.0 * M_PI * uni(gen);
  double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

Eigen::MatrixXcd haar_unitary(int dim, std::mt19937_64& gen) {
  Eigen::MatrixXcd g(dim, dim);
  for (int j = 0; j < dim; ++j) g.col(j) = gaussian_vector(dim, gen);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    std::complex<double> d = r(j, j);
    double a = std::abs(d);
    q.col(j) *= (a > 0) ? d / a : 1.0;
  }
  return q;
}

Eigen::MatrixXcd random_isometry(int dim, int k, std::mt19937_64& gen) {
  return haar_unitary(dim, gen).leftCols(k);
}

} // namespace locq::rng
