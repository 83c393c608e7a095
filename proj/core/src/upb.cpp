#include "locq/upb.hpp"

#include <cmath>
#include <stdexcept>

#include "locq/rng.hpp"

namespace locq::upb {

namespace {

PureState single(double cos_amp, double sin_amp) {
  Vec v(2);
  v(0) = cos_amp;
  v(1) = sin_amp;
  return {1, std::move(v)};
}

bool populated(double v) { return !std::isnan(v); }
bool populated(const Cx& v) { return !std::isnan(v.real()) && !std::isnan(v.imag()); }

} // namespace

void UpbAngles::validate() const {
  for (double t : {theta1, theta2, theta3})
    if (!(t > 0.0 && t < M_PI / 2.0))
      throw std::invalid_argument("UPB angles must lie strictly inside (0, pi/2)");
}

double AnalysisRecord::validate(double tol) const {
  double worst = 0.0;
  if (populated(mu_prime) && populated(mu) && populated(r))
    worst = std::max(worst, std::abs(mu_prime + std::norm(r) * mu));
  if (populated(xi) && populated(s))
    worst = std::max(worst, std::abs(xi + 1.0 / std::conj(s)));
  (void)tol;
  return worst;
}

std::array<PureState, 4> canonical_upb(const UpbAngles& a) {
  a.validate();
  PureState zero = basis_state(1, 0);
  PureState one = basis_state(1, 1);
  PureState A = single(a.c1(), a.s1());
  PureState B = single(a.c2(), a.s2());
  PureState C = single(a.c3(), a.s3());
  PureState Ap = orth_complement(A);
  PureState Bp = orth_complement(B);
  PureState Cp = orth_complement(C);
  return {tensor({zero, zero, zero}), tensor({one, B, C}), tensor({A, one, Cp}),
          tensor({Ap, Bp, one})};
}

std::array<PureState, 4> bc_product_states(const UpbAngles& a) {
  PureState zero = basis_state(1, 0);
  PureState one = basis_state(1, 1);
  PureState B = single(a.c2(), a.s2());
  PureState C = single(a.c3(), a.s3());
  PureState Bp = orth_complement(B);
  PureState Cp = orth_complement(C);
  return {tensor(zero, zero), tensor(B, C), tensor(one, Cp), tensor(Bp, one)};
}

std::vector<PureState> reciprocal_basis(const std::vector<PureState>& states) {
  if (states.empty()) throw std::invalid_argument("reciprocal basis of empty set");
  int n = states.front().n_qubits;
  int k = static_cast<int>(states.size());
  Mat b(1 << n, k);
  for (int j = 0; j < k; ++j) {
    if (states[j].n_qubits != n) throw std::invalid_argument("qubit counts differ");
    b.col(j) = states[j].amps;
  }
  Mat gram = b.adjoint() * b;
  Eigen::JacobiSVD<Mat> svd(gram);
  double cond = svd.singularValues()(0) / svd.singularValues()(k - 1);
  if (!(cond < 1e8))
    throw std::runtime_error("reciprocal_basis: states too close to linear dependence");
  // d_i = B g_i with <d_i|s_j> = delta_ij  =>  g_i = (G^-1)^dagger e_i.
  Mat duals = b * gram.inverse().adjoint();
  std::vector<PureState> out;
  for (int j = 0; j < k; ++j) out.emplace_back(n, duals.col(j));
  return out;
}

Mat transfer_operator(const AnalysisRecord& record, const UpbAngles& angles) {
  if (!populated(record.r) || !populated(record.s) || std::abs(record.r) == 0.0 ||
      std::abs(record.s) == 0.0)
    throw std::invalid_argument("transfer_operator needs nonzero r and s");
  auto products = bc_product_states(angles);
  std::vector<PureState> duals =
      reciprocal_basis({products[0], products[1], products[2], products[3]});
  std::array<Cx, 4> eigenvalues = {record.r, -1.0 / std::conj(record.r), record.s,
                                   -1.0 / std::conj(record.s)};
  Mat m = Mat::Zero(4, 4);
  for (int k = 0; k < 4; ++k)
    m += eigenvalues[k] * (products[k].amps * duals[k].amps.adjoint());
  return m;
}

double pair_mixture_eigenvalue(double p, double theta2, double theta3) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("mixture weight must lie in [0, 1]");
  double c2 = std::cos(theta2), c3 = std::cos(theta3);
  double inside = 1.0 - 4.0 * p * (1.0 - p) * (1.0 - c2 * c2 * c3 * c3);
  return (1.0 + std::sqrt(std::max(0.0, inside))) / 2.0;
}

double pair_mixture_eigenvalue(double p, const UpbAngles& a) {
  return pair_mixture_eigenvalue(p, a.theta2, a.theta3);
}

std::array<double, 2> eigenvector_ratio_roots(double r, double theta2, double theta3) {
  if (r == 0.0) throw std::invalid_argument("ratio r must be nonzero");
  double c2 = std::cos(theta2), c3 = std::cos(theta3);
  if (std::abs(c2 * c3) < 1e-300)
    throw std::invalid_argument("eigenvector roots need c2*c3 != 0");
  double b = -(1.0 - r * r) / (r * r * c2 * c3);
  double c = -1.0 / (r * r);
  double disc = std::sqrt(b * b - 4.0 * c); // = b^2 + 4/r^2 > 0
  double root1 = (-b + disc) / 2.0;
  double root2 = (-b - disc) / 2.0;
  if (std::abs(root1) < std::abs(root2)) std::swap(root1, root2);
  if (root1 != 0.0) root2 = c / root1;
  return {root1, root2};
}

std::array<double, 2> eigenvector_ratio_roots(double r, const UpbAngles& a) {
  return eigenvector_ratio_roots(r, a.theta2, a.theta3);
}

std::array<double, 2> product_combination_roots(double mu, double theta2, double theta3) {
  if (mu == 0.0) throw std::invalid_argument("mu must be nonzero");
  double c2 = std::cos(theta2), c3 = std::cos(theta3);
  double s2 = std::sin(theta2), s3 = std::sin(theta3);
  if (std::abs(s2 * s3) < 1e-300)
    throw std::invalid_argument("product roots need s2*s3 != 0");
  double b = -((1.0 + mu * mu) * c3 + 2.0 * mu * c2) / (mu * s2 * s3);
  double disc = std::sqrt(b * b + 4.0); // constant term is -1
  double root1 = (-b + disc) / 2.0;
  double root2 = (-b - disc) / 2.0;
  if (std::abs(root1) < std::abs(root2)) std::swap(root1, root2);
  if (root1 != 0.0) root2 = -1.0 / root1; // product of roots
  return {root1, root2};
}

std::array<double, 2> product_combination_roots(double mu, const UpbAngles& a) {
  return product_combination_roots(mu, a.theta2, a.theta3);
}

double impossibility_gap(double r, double theta2) {
  if (r == 0.0) throw std::invalid_argument("ratio r must be nonzero");
  double c2 = std::cos(theta2);
  double lhs = (1.0 - r * r) / r;
  return lhs * lhs + 4.0 * c2 * c2;
}

double impossibility_gap(double r, const UpbAngles& a) {
  return impossibility_gap(r, a.theta2);
}

ScanReport basis_scan(const UpbAngles& angles, int trials, std::uint64_t seed,
                      const SearchConfig& cfg) {
  if (trials < 1) throw std::invalid_argument("basis_scan needs at least one trial");
  ScanReport report;
  report.angles = angles;
  report.trials = trials;
  report.seed = seed;
  auto members = canonical_upb(angles);
  for (int t = 0; t < trials; ++t) {
    auto gen = rng::engine(seed, static_cast<std::uint64_t>(t));
    Mat u = rng::haar_unitary(4, gen);
    std::vector<LabeledState> basis;
    for (int k = 0; k < 4; ++k) {
      Vec amps = Vec::Zero(8);
      for (int j = 0; j < 4; ++j) amps += u(k, j) * members[j].amps;
      basis.push_back({"phi" + std::to_string(k + 1),
                       DensityOperator::from_pure(PureState{3, amps})});
    }
    Decision d = decide(basis, cfg);
    report.verdicts.push_back(d.verdict);
    switch (d.verdict) {
      case Verdict::Distinguishable: ++report.distinguishable; break;
      case Verdict::Indistinguishable: ++report.indistinguishable; break;
      default: ++report.inconclusive;
    }
  }
  return report;
}

} // namespace locq::upb
