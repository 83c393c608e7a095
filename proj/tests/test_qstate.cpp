#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "locq/qstate.hpp"
#include "locq/rng.hpp"
#include "support/oracles.hpp"

using namespace locq;

namespace {

PureState from_terms(int n, std::initializer_list<std::pair<unsigned, Cx>> terms) {
  Vec v = Vec::Zero(1 << n);
  for (auto& [i, a] : terms) v(i) = a;
  return PureState{n, v}.normalized();
}

const PureState kPlusPlus = from_terms(2, {{0, 1}, {1, 1}, {2, 1}, {3, 1}});

} // namespace

TEST_CASE("support of rank-1, rank-2 and full-rank operators") {
  auto s1 = support(DensityOperator::from_pure(basis_state(3, 0)));
  CHECK(s1.dim() == 1);
  CHECK(std::abs(std::abs(inner(s1.basis[0], basis_state(3, 0))) - 1.0) < 1e-12);

  auto rho = DensityOperator::mixture({{0.5, basis_state(2, 0)}, {0.5, kPlusPlus}});
  auto s2 = support(rho);
  CHECK(s2.dim() == 2);
  CHECK(s2.contains(basis_state(2, 0), 1e-9));
  CHECK(s2.contains(kPlusPlus, 1e-9));

  CHECK(support(DensityOperator::maximally_mixed(2)).dim() == 4);
}

TEST_CASE("support rejects non-Hermitian input") {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(support(DensityOperator{1, m}), std::invalid_argument);
}

TEST_CASE("support_contains membership") {
  auto rho = DensityOperator::mixture({{0.5, basis_state(2, 0)}, {0.5, kPlusPlus}});
  CHECK(support_contains(rho, basis_state(2, 0)));
  CHECK(support_contains(DensityOperator::maximally_mixed(2), kPlusPlus));

  // Independent projector residual for |11>: Gram-Schmidt on the two
  // ensemble members gives ||(I-P)|11>|| = sqrt(2/3) > 0.
  CHECK_FALSE(support_contains(rho, basis_state(2, 3)));
  Vec e1 = basis_state(2, 0).amps;
  Vec raw = kPlusPlus.amps - e1 * (e1.adjoint() * kPlusPlus.amps)(0);
  Vec e2 = raw / raw.norm();
  Vec t = basis_state(2, 3).amps;
  Vec res = t - e1 * (e1.adjoint() * t)(0) - e2 * (e2.adjoint() * t)(0);
  CHECK(res.norm() == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("collapse on basis states and the Bell state") {
  auto c0 = collapse(basis_state(3, 0), 1, basis_state(1, 0));
  CHECK(c0.n_qubits == 2);
  CHECK(c0.norm() == doctest::Approx(1.0));
  CHECK(std::abs(c0.amps(0) - 1.0) < 1e-15);

  CHECK(collapse(basis_state(3, 0), 1, basis_state(1, 1)).norm() < 1e-15);

  PureState bell = from_terms(2, {{0, 1}, {3, 1}});
  PureState plus = from_terms(1, {{0, 1}, {1, 1}});
  auto c = collapse(bell, 1, plus);
  CHECK(c.norm_sq() == doctest::Approx(0.5));
  CHECK(std::abs(c.amps(0) - 0.5) < 1e-12);
  CHECK(std::abs(c.amps(1) - 0.5) < 1e-12);

  CHECK_THROWS_AS(collapse(bell, 3, plus), std::out_of_range);
}

TEST_CASE("pair overlap operators") {
  auto n0 = pair_overlap_operator(basis_state(2, 0), basis_state(2, 3), 1);
  CHECK(n0.matrix.norm() < 1e-15);

  auto n1 = pair_overlap_operator(basis_state(2, 0), basis_state(2, 2), 1);
  CHECK(std::abs(n1.matrix(1, 0) - 1.0) < 1e-15);
  CHECK(n1.matrix.cwiseAbs().sum() == doctest::Approx(1.0));

  PureState singlet = from_terms(2, {{1, 1}, {2, -1}});
  auto n2 = pair_overlap_operator(basis_state(2, 0), singlet, 1);
  CHECK(std::abs(n2.matrix(1, 0) + 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(n2.matrix(0, 0)) < 1e-15);
  CHECK(std::abs(n2.matrix(0, 1)) < 1e-15);
  CHECK(std::abs(n2.matrix(1, 1)) < 1e-15);

  CHECK_THROWS_AS(pair_overlap_operator(basis_state(2, 0), basis_state(3, 0), 1),
                  std::invalid_argument);
}

TEST_CASE("bloch decomposition of overlap operators") {
  auto n = pair_overlap_operator(basis_state(2, 0), basis_state(2, 2), 1); // |1><0|
  auto [n1, n2] = bloch_decompose(n);
  CHECK(n1.normalized().cross(Eigen::Vector3d::UnitX()).norm() < 1e-12);
  CHECK(n2.normalized().cross(Eigen::Vector3d::UnitY()).norm() < 1e-12);

  PairOverlapOperator zero{1, Eigen::Matrix2cd::Zero()};
  auto [z1, z2] = bloch_decompose(zero);
  CHECK(z1.norm() < 1e-15);
  CHECK(z2.norm() < 1e-15);

  PairOverlapOperator sz{1, Eigen::Matrix2cd::Zero()};
  sz.matrix(0, 0) = 0.5;
  sz.matrix(1, 1) = -0.5;
  auto [h1, h2] = bloch_decompose(sz);
  CHECK(h1.normalized().cross(Eigen::Vector3d::UnitZ()).norm() < 1e-12);
  CHECK(h2.norm() < 1e-15);

  PairOverlapOperator traceful{1, Eigen::Matrix2cd::Identity()};
  CHECK_THROWS_AS(bloch_decompose(traceful), std::invalid_argument);
}

TEST_CASE("antipodality and outcome probability completeness") {
  auto gen = rng::engine(11);
  for (int t = 0; t < 100; ++t) {
    PureState v = testsup::random_single_qubit(gen);
    PureState vp = orth_complement(v);
    CHECK((bloch_vector(v) + bloch_vector(vp)).norm() < 1e-12);
    CHECK(std::abs(inner(v, vp)) < 1e-12);

    PureState psi = testsup::random_pure(3, gen);
    int party = 1 + static_cast<int>(gen() % 3);
    double p0 = collapse(psi, party, v).norm_sq();
    double p1 = collapse(psi, party, vp).norm_sq();
    CHECK(p0 + p1 == doctest::Approx(psi.norm_sq()).epsilon(1e-9));
  }
}

TEST_CASE("overlap identity on random instances") {
  auto gen = rng::engine(12);
  for (int t = 0; t < 1000; ++t) {
    int n = 2 + static_cast<int>(gen() % 3);
    PureState a{n, rng::gaussian_vector(1 << n, gen)};
    PureState b{n, rng::gaussian_vector(1 << n, gen)};
    int party = 1 + static_cast<int>(gen() % n);
    PureState v = testsup::random_single_qubit(gen);
    auto nop = pair_overlap_operator(a, b, party);
    Cx lhs = (v.amps.adjoint() * nop.matrix * v.amps)(0);
    Cx rhs = inner(collapse(a, party, v), collapse(b, party, v));
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("support of a projector mixture reproduces the subspace") {
  auto gen = rng::engine(13);
  for (int t = 0; t < 25; ++t) {
    int n = 2 + static_cast<int>(gen() % 3);
    int k = 1 + static_cast<int>(gen() % 4);
    auto basis = testsup::random_orthonormal(n, k, gen);
    Subspace s = Subspace::from_orthonormal(n, basis);
    DensityOperator uniform{n, s.projector / static_cast<double>(k)};
    Subspace back = support(uniform);
    CHECK(back.dim() == k);
    CHECK((back.projector - s.projector).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("collapse is linear") {
  auto gen = rng::engine(14);
  for (int t = 0; t < 50; ++t) {
    int n = 2 + static_cast<int>(gen() % 3);
    PureState a{n, rng::gaussian_vector(1 << n, gen)};
    PureState b{n, rng::gaussian_vector(1 << n, gen)};
    Cx alpha = rng::gaussian(gen), beta = rng::gaussian(gen);
    int party = 1 + static_cast<int>(gen() % n);
    PureState v = testsup::random_single_qubit(gen);
    PureState combo{n, alpha * a.amps + beta * b.amps};
    Vec lhs = collapse(combo, party, v).amps;
    Vec rhs = alpha * collapse(a, party, v).amps + beta * collapse(b, party, v). amps;
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, lhs.norm()));
  }
}

TEST_CASE("subspace invariants") {
  auto gen = rng::engine(15);
  auto basis = testsup::random_orthonormal(3, 3, gen);
  Subspace s = Subspace::from_orthonormal(3, basis);
  CHECK((s.projector * s.projector - s.projector).cwiseAbs().maxCoeff() <= 1e-9);
  Subspace comp = s.complement();
  CHECK(comp.dim() == 5);
  CHECK((s.projector + comp.projector - Mat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-9);

  std::vector<PureState> skewed = {basis[0], basis[1],
                                   PureState{3, basis[0].amps + 0.3 * basis[2].amps}};
  Subspace spanned = Subspace::span(3, skewed);
  CHECK(spanned.dim() == 3);
  CHECK_THROWS_AS(Subspace::from_orthonormal(3, skewed), std::invalid_argument);
}

TEST_CASE("density operator validation") {
  Mat bad = Mat::Zero(2, 2);
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS((DensityOperator{1, bad}.validate()), std::invalid_argument);
  Mat negative = Mat::Identity(2, 2);
  negative(1, 1) = -0.1;
  CHECK_THROWS_AS((DensityOperator{1, negative}.validate()), std::invalid_argument);
  DensityOperator ok = DensityOperator::maximally_mixed(2);
  CHECK_NOTHROW(ok.validate({}, true));
}

TEST_CASE("local unitaries and qubit permutations") {
  auto gen = rng::engine(16);
  PureState psi = testsup::random_pure(3, gen);
  Eigen::Matrix2cd u = rng::haar_unitary(2, gen);
  PureState rotated = apply_local_unitary(psi, 2, u);
  CHECK(rotated.norm() == doctest::Approx(1.0));
  CHECK(std::abs(std::abs(inner(rotated, rotated)) - 1.0) < 1e-12);

  PureState p100 = basis_state(3, 0b100);
  std::vector<int> perm = {3, 1, 2}; // qubit 1 -> position 3
  PureState moved = permute_qubits(p100, perm);
  CHECK(std::abs(moved.amps(0b001) - 1.0) < 1e-15);

  PureState a = testsup::random_pure(3, gen), b = testsup::random_pure(3, gen);
  CHECK(std::abs(inner(permute_qubits(a, perm), permute_qubits(b, perm)) - inner(a, b)) <
        1e-12);
}
