#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "locq/prodfind.hpp"
#include "locq/rng.hpp"
#include "locq/upb.hpp"
#include "support/oracles.hpp"

using namespace locq;
using namespace locq::upb;

namespace {

PureState single(double c, double s) {
  Vec v(2);
  v(0) = c;
  v(1) = s;
  return {1, std::move(v)};
}

// rho1 = p |00><00| + (1-p) |BC><BC| on the last two qubits.
Mat rho1_operator(double p, const UpbAngles& a) {
  auto bc = bc_product_states(a);
  return p * (bc[0].amps * bc[0].amps.adjoint()) + (1 - p) * (bc[1].amps * bc[1].amps.adjoint());
}

Mat rho2_operator(double q, const UpbAngles& a) {
  auto bc = bc_product_states(a);
  return q * (bc[2].amps * bc[2].amps.adjoint()) + (1 - q) * (bc[3].amps * bc[3].amps.adjoint());
}

} // namespace

TEST_CASE("canonical members are orthonormal products") {
  UpbAngles sym{M_PI / 4, M_PI / 4, M_PI / 4};
  auto members = canonical_upb(sym);
  // Second member is |1>(|0>+|1>)(|0>+|1>)/2.
  Vec expect = Vec::Zero(8);
  expect(0b100) = expect(0b101) = expect(0b110) = expect(0b111) = 0.5;
  CHECK((members[1].amps - expect).norm() < 1e-12);
  for (int i = 0; i < 4; ++i) {
    CHECK(is_product(members[i]));
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(inner(members[i], members[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
  }

  auto check = upb_check({members[0], members[1], members[2], members[3]});
  CHECK(check.orthonormal_products);
  CHECK(check.unextendible);

  CHECK_THROWS_AS(canonical_upb({0.0, M_PI / 4, M_PI / 4}), std::invalid_argument);
  CHECK_THROWS_AS(canonical_upb({M_PI / 4, M_PI / 2, M_PI / 4}), std::invalid_argument);
}

TEST_CASE("reciprocal bases pair off with their sources") {
  auto orthonormal = std::vector<PureState>{basis_state(2, 0), basis_state(2, 1)};
  auto duals = reciprocal_basis(orthonormal);
  CHECK((duals[0].amps - orthonormal[0].amps).norm() < 1e-12);
  CHECK((duals[1].amps - orthonormal[1].amps).norm() < 1e-12);

  Vec zp = Vec::Zero(4);
  zp(0b00) = zp(0b01) = 1.0;
  std::vector<PureState> pairset = {basis_state(2, 0), PureState{2, zp}.normalized()};
  auto d2 = reciprocal_basis(pairset);
  CHECK(std::abs(inner(d2[0], pairset[1])) < 1e-10);
  CHECK(std::abs(inner(d2[1], pairset[0])) < 1e-10);
  CHECK(std::abs(inner(d2[0], pairset[0]) - 1.0) < 1e-10);

  UpbAngles a{M_PI / 4, M_PI / 3, M_PI / 6};
  auto bc = bc_product_states(a);
  auto duals_bc = reciprocal_basis({bc[0], bc[1], bc[2], bc[3]});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(inner(duals_bc[i], bc[j]) - (i == j ? 1.0 : 0.0)) <= 1e-10);

  PureState nearly{2, basis_state(2, 0).amps + 1e-10 * basis_state(2, 1).amps};
  CHECK_THROWS_AS(reciprocal_basis({basis_state(2, 0), nearly.normalized()}),
                  std::runtime_error);
}

TEST_CASE("transfer operator eigen-relations") {
  UpbAngles a{M_PI / 4, M_PI / 3, M_PI / 6};
  auto bc = bc_product_states(a);

  AnalysisRecord rec;
  rec.r = 1.0;
  rec.s = 1.0;
  Mat m = transfer_operator(rec, a);
  std::array<Cx, 4> expected = {1.0, -1.0, 1.0, -1.0};
  for (int k = 0; k < 4; ++k)
    CHECK((m * bc[k].amps - expected[k] * bc[k].amps).norm() <= 1e-9);

  rec.r = 2.0;
  rec.s = -2.0;
  m = transfer_operator(rec, a);
  expected = {2.0, -0.5, -2.0, 0.5};
  for (int k = 0; k < 4; ++k)
    CHECK((m * bc[k].amps - expected[k] * bc[k].amps).norm() <= 1e-9);

  // |00> input stays parallel to |00> for any valid parameters.
  Vec image = m * basis_state(2, 0).amps;
  CHECK(std::abs(image(1)) + std::abs(image(2)) + std::abs(image(3)) <= 1e-9);

  rec.s = 0.0;
  CHECK_THROWS_AS(transfer_operator(rec, a), std::invalid_argument);
}

TEST_CASE("eigen-relations hold for random parameters") {
  auto gen = rng::engine(51);
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  for (int t = 0; t < 100; ++t) {
    UpbAngles a{uni(gen) * M_PI / 2 * 0.98 + 0.01, uni(gen) * M_PI / 2 * 0.98 + 0.01,
                uni(gen) * M_PI / 2 * 0.98 + 0.01};
    AnalysisRecord rec;
    rec.r = Cx(uni(gen) * 4 - 2, uni(gen) - 0.5);
    rec.s = Cx(uni(gen) * 4 - 2, uni(gen) - 0.5);
    if (std::abs(rec.r) < 0.1 || std::abs(rec.s) < 0.1) continue;
    Mat m = transfer_operator(rec, a);
    auto bc = bc_product_states(a);
    std::array<Cx, 4> ev = {rec.r, -1.0 / std::conj(rec.r), rec.s, -1.0 / std::conj(rec.s)};
    for (int k = 0; k < 4; ++k)
      CHECK((m * bc[k].amps - ev[k] * bc[k].amps).norm() <= 1e-9);
  }
}

TEST_CASE("mixture eigenvalue formula matches the eigensolver") {
  CHECK(pair_mixture_eigenvalue(0.0, M_PI / 3, M_PI / 6) == doctest::Approx(1.0));
  CHECK(pair_mixture_eigenvalue(0.5, M_PI / 2, M_PI / 2) == doctest::Approx(0.5));

  double worst = 0.0;
  for (int ip = 0; ip <= 20; ++ip) {
    double p = ip / 20.0;
    for (int i2 = 1; i2 <= 5; ++i2) {
      for (int i3 = 1; i3 <= 5; ++i3) {
        double t2 = i2 * M_PI / 12.0, t3 = i3 * M_PI / 12.0;
        UpbAngles a{M_PI / 4, t2, t3};
        Eigen::SelfAdjointEigenSolver<Mat> es(rho1_operator(p, a));
        double top = es.eigenvalues().maxCoeff();
        worst = std::max(worst, std::abs(top - pair_mixture_eigenvalue(p, t2, t3)));
      }
    }
  }
  CHECK(worst <= 1e-10);

  CHECK_THROWS_AS(pair_mixture_eigenvalue(1.5, M_PI / 4, M_PI / 4), std::invalid_argument);
}

TEST_CASE("eigenvector ratio roots diagonalize the mixture") {
  auto roots = eigenvector_ratio_roots(1.0, M_PI / 4, M_PI / 4);
  CHECK(std::abs(std::abs(roots[0]) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(roots[1]) - 1.0) < 1e-12);

  UpbAngles a{M_PI / 4, M_PI / 4, M_PI / 4};
  auto bc = bc_product_states(a);
  double r = 1.0, p = 1.0 / (1.0 + r * r);
  Mat rho1 = rho1_operator(p, a);
  for (double mu : eigenvector_ratio_roots(r, a)) {
    Vec v = mu * bc[0].amps + bc[1].amps;
    double lambda = (1 - p) * (mu * a.c2() * a.c3() + 1.0);
    CHECK((rho1 * v - lambda * v).norm() <= 1e-9);
  }

  auto gen = rng::engine(52);
  std::uniform_real_distribution<double> uni(0.1, 0.9);
  for (int t = 0; t < 100; ++t) {
    double rr = uni(gen) * 6 - 3;
    if (std::abs(rr) < 0.05) continue;
    double t2 = uni(gen) * 1.4 + 0.05, t3 = uni(gen) * 1.4 + 0.05;
    for (double mu : eigenvector_ratio_roots(rr, t2, t3)) {
      double c2 = std::cos(t2), c3 = std::cos(t3);
      double residual = mu * mu - mu * (1 - rr * rr) / (rr * rr * c2 * c3) - 1.0 / (rr * rr);
      CHECK(std::abs(residual) <= 1e-12 * std::max(1.0, mu * mu));
    }
  }

  CHECK_THROWS_AS(eigenvector_ratio_roots(0.0, M_PI / 4, M_PI / 4), std::invalid_argument);
}

TEST_CASE("product combination roots make the combined vector a product") {
  auto boundary = product_combination_roots(1.0, M_PI / 2, M_PI / 2);
  CHECK(std::abs(boundary[0] - 1.0) < 1e-12);
  CHECK(std::abs(boundary[1] + 1.0) < 1e-12);

  auto gen = rng::engine(53);
  std::uniform_real_distribution<double> uni(0.1, 1.4);
  for (int t = 0; t < 50; ++t) {
    double t2 = uni(gen), t3 = uni(gen);
    double mu = uni(gen) * 4 - 2;
    if (std::abs(mu) < 0.05) continue;
    double c2 = std::cos(t2), s2 = std::sin(t2), c3 = std::cos(t3), s3 = std::sin(t3);
    auto roots = product_combination_roots(mu, t2, t3);
    CHECK(roots[0] * roots[1] == doctest::Approx(-1.0).epsilon(1e-9));
    for (double x : roots) {
      // Combined vector in the computational basis of the last two qubits.
      Eigen::Matrix2cd m;
      m(0, 0) = x * (mu + c2 * c3);
      m(0, 1) = x * c2 * s3 + s2;
      m(1, 0) = x * s2 * c3 + mu * s3;
      m(1, 1) = x * s2 * s3 - mu * c3 - c2;
      double scale = m.cwiseAbs().maxCoeff();
      CHECK(std::abs(m.determinant()) <= 1e-9 * std::max(1.0, scale * scale));
    }
  }

  CHECK_THROWS_AS(product_combination_roots(0.0, M_PI / 4, M_PI / 4), std::invalid_argument);
}

TEST_CASE("impossibility gap is strictly positive") {
  CHECK(impossibility_gap(1.0, M_PI / 3) ==
        doctest::Approx(4.0 * std::pow(std::cos(M_PI / 3), 2)));
  CHECK(impossibility_gap(2.0, M_PI / 3) == doctest::Approx(3.25));
  for (double r = -10.0; r <= 10.0; r += 0.25) {
    if (std::abs(r) < 1e-9) continue;
    for (int i = 1; i <= 8; ++i) {
      double t2 = i * M_PI / 18.0;
      CHECK(impossibility_gap(r, t2) >= 4.0 * std::pow(std::cos(t2), 2) - 1e-12);
      CHECK(impossibility_gap(r, t2) > 0.0);
    }
  }
  CHECK_THROWS_AS(impossibility_gap(0.0, M_PI / 4), std::invalid_argument);
}

TEST_CASE("analysis record relations") {
  AnalysisRecord rec;
  rec.r = 1.5;
  rec.mu = 0.7;
  rec.mu_prime = -std::norm(rec.r) * rec.mu;
  rec.s = -1.5;
  rec.xi = -1.0 / std::conj(rec.s);
  CHECK(rec.validate() <= 1e-12);
  rec.mu_prime = 1.0;
  CHECK(rec.validate() > 1e-3);
}

TEST_CASE("span projection splits into the two branch mixtures") {
  auto gen = rng::engine(54);
  UpbAngles a{M_PI / 4, M_PI / 3, M_PI / 6};
  auto members = canonical_upb(a);
  Mat p = Mat::Zero(8, 8);
  for (const auto& m : members) p += m.amps * m.amps.adjoint();
  for (int t = 0; t < 20; ++t) {
    PureState psi = testsup::random_single_qubit(gen);
    // <psi|P|psi> as an operator on the last two qubits.
    Mat cond = Mat::Zero(4, 4);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int b = 0; b < 2; ++b)
          for (int bp = 0; bp < 2; ++bp)
            cond(j, k) += std::conj(psi.amps(b)) * p(b * 4 + j, bp * 4 + k) * psi.amps(bp);
    PureState zero = basis_state(1, 0);
    PureState A = single(a.c1(), a.s1());
    double pw = std::norm(inner(psi, zero));
    double qw = std::norm(inner(psi, A));
    Mat expected = rho1_operator(pw, a) + rho2_operator(qw, a);
    CHECK((cond - expected).cwiseAbs().maxCoeff() <= 1e-10);

    // The two branch mixtures live on orthogonal supports.
    Mat p1 = support(DensityOperator{2, rho1_operator(0.4, a)}).projector;
    Mat p2 = support(DensityOperator{2, rho2_operator(0.7, a)}).projector;
    CHECK((p1 * p2).cwiseAbs().maxCoeff() <= 1e-10);

    // Unit trace splits between the two eigenvalues.
    CHECK(pair_mixture_eigenvalue(pw, a) + (1.0 - pair_mixture_eigenvalue(pw, a)) ==
          doctest::Approx(1.0));
  }
}

TEST_CASE("random orthonormal bases of the span never come out distinguishable") {
  UpbAngles a{M_PI / 4, M_PI / 3, M_PI / 6};
  auto report = basis_scan(a, 6, 99);
  CHECK(report.trials == 6);
  CHECK(report.distinguishable == 0);
  CHECK(report.verdicts.size() == 6);

  // Mixing only the last two members keeps two product members fixed, the
  // shape of the hardest hand case.
  auto members = canonical_upb(a);
  auto gen = rng::engine(55);
  std::uniform_real_distribution<double> uni(0.2, 0.8);
  double u1 = std::sqrt(uni(gen));
  double u2 = std::sqrt(1 - u1 * u1);
  std::vector<LabeledState> mixed = {
      {"s1", DensityOperator::from_pure(members[0])},
      {"s2", DensityOperator::from_pure(members[1])},
      {"m1", DensityOperator::from_pure(
                 PureState{3, u1 * members[2].amps + u2 * members[3].amps})},
      {"m2", DensityOperator::from_pure(
                 PureState{3, u2 * members[2].amps - u1 * members[3].amps})}};
  CHECK(decide(mixed).verdict == Verdict::Indistinguishable);

  CHECK_THROWS_AS(basis_scan(a, 0, 1), std::invalid_argument);
}
