#include "locq/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace locq {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_party(int party, int n_qubits) {
  if (party < 1 || party > n_qubits)
    throw std::out_of_range("qubit index out of range");
}

// Deterministic phase gauge: largest-magnitude entry made real positive.
Vec phase_fixed(Vec v) {
  int imax = 0;
  double best = 0;
  for (int i = 0; i < v.size(); ++i) {
    double a = std::abs(v(i));
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  if (best > 0) v *= std::conj(v(imax)) / std::abs(v(imax));
  return v;
}

Mat full_local_operator(int n_qubits, int party, const Eigen::Matrix2cd& u) {
  int dim = 1 << n_qubits;
  Mat full = Mat::Zero(dim, dim);
  int sub_dim = 1 << (n_qubits - 1);
  for (int j = 0; j < sub_dim; ++j)
    for (int b = 0; b < 2; ++b)
      for (int bp = 0; bp < 2; ++bp)
        full(insert_bit(j, party, bp, n_qubits), insert_bit(j, party, b, n_qubits)) = u(bp, b);
  return full;
}

} // namespace

unsigned insert_bit(unsigned sub_idx, int party, int bit, int n_qubits) {
  unsigned shift = static_cast<unsigned>(n_qubits - party);
  unsigned high = sub_idx >> shift;
  unsigned low = sub_idx & ((1u << shift) - 1u);
  return (high << (shift + 1)) | (static_cast<unsigned>(bit) << shift) | low;
}

PureState::PureState(int n, Vec a) : n_qubits(n), amps(std::move(a)) {
  require(n >= 0, "n_qubits must be nonnegative");
  require(amps.size() == (1 << n), "amplitude vector length must be 2^n");
}

bool PureState::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

PureState PureState::normalized() const {
  double n = norm();
  require(n > 0, "cannot normalize the zero vector");
  return {n_qubits, amps / n};
}

Cx inner(const PureState& a, const PureState& b) {
  require(a.n_qubits == b.n_qubits, "states live on different qubit counts");
  return a.amps.dot(b.amps); // Eigen's dot conjugates the left argument
}

PureState basis_state(int n_qubits, unsigned index) {
  Vec v = Vec::Zero(1 << n_qubits);
  v(index) = 1.0;
  return {n_qubits, std::move(v)};
}

PureState tensor(const PureState& a, const PureState& b) {
  Vec out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) out(i * b.dim() + j) = a.amps(i) * b.amps(j);
  return {a.n_qubits + b.n_qubits, std::move(out)};
}

PureState tensor(const std::vector<PureState>& factors) {
  require(!factors.empty(), "tensor of empty factor list");
  PureState acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor(acc, factors[i]);
  return acc;
}

double fubini_study_distance(const PureState& a, const PureState& b) {
  double ip = std::abs(inner(a.normalized(), b.normalized()));
  return std::acos(std::clamp(ip, 0.0, 1.0));
}

DensityOperator::DensityOperator(int n, Mat m) : n_qubits(n), mat(std::move(m)) {
  require(n >= 0, "n_qubits must be nonnegative");
  require(mat.rows() == (1 << n) && mat.cols() == (1 << n), "matrix must be 2^n x 2^n");
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return {psi.n_qubits, psi.amps * psi.amps.adjoint()};
}

DensityOperator DensityOperator::mixture(
    const std::vector<std::pair<double, PureState>>& ensemble) {
  require(!ensemble.empty(), "empty ensemble");
  int n = ensemble.front().second.n_qubits;
  Mat m = Mat::Zero(1 << n, 1 << n);
  for (const auto& [w, psi] : ensemble) {
    require(psi.n_qubits == n, "mixed ensemble qubit counts differ");
    m += w * (psi.amps * psi.amps.adjoint());
  }
  return {n, std::move(m)};
}

DensityOperator DensityOperator::maximally_mixed(int n_qubits) {
  int dim = 1 << n_qubits;
  return {n_qubits, Mat::Identity(dim, dim) / static_cast<double>(dim)};
}

void DensityOperator::validate(const Tolerances& tol, bool require_unit_trace) const {
  double herm_res = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  if (herm_res > tol.herm)
    throw std::invalid_argument("density operator not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Mat> es((mat + mat.adjoint()) / 2.0);
  if (es.eigenvalues().minCoeff() < -tol.psd)
    throw std::invalid_argument("density operator not positive semidefinite");
  if (require_unit_trace && std::abs(trace() - 1.0) > tol.norm)
    throw std::invalid_argument("density operator trace differs from 1");
}

Subspace Subspace::from_orthonormal(int n_qubits, std::vector<PureState> basis, double tol) {
  Subspace s;
  s.n_qubits = n_qubits;
  int dim = 1 << n_qubits;
  s.projector = Mat::Zero(dim, dim);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    require(basis[i].n_qubits == n_qubits, "basis qubit counts differ");
    for (std::size_t j = 0; j <= i; ++j) {
      Cx g = inner(basis[i], basis[j]);
      double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - target) > tol)
        throw std::invalid_argument("subspace basis not orthonormal within tolerance");
    }
    s.projector += basis[i].amps * basis[i].amps.adjoint();
  }
  s.basis = std::move(basis);
  return s;
}

Subspace Subspace::span(int n_qubits, const std::vector<PureState>& vectors, double tol_rank) {
  require(!vectors.empty(), "span of empty vector list");
  int dim = 1 << n_qubits;
  Mat m(dim, static_cast<int>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    require(vectors[j].n_qubits == n_qubits, "span qubit counts differ");
    m.col(static_cast<int>(j)) = vectors[j].amps;
  }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  std::vector<PureState> basis;
  for (int k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > tol_rank * smax)
      basis.emplace_back(n_qubits, phase_fixed(svd.matrixU().col(k)));
  return from_orthonormal(n_qubits, std::move(basis), 1e-7);
}

Subspace Subspace::complement(double tol_rank) const {
  (void)tol_rank;
  int d = 1 << n_qubits;
  Mat rest = Mat::Identity(d, d) - projector;
  Eigen::SelfAdjointEigenSolver<Mat> es((rest + rest.adjoint()) / 2.0);
  std::vector<PureState> basis;
  for (int k = d - 1; k >= 0; --k) // eigenvalues of I - P are ~0 or ~1
    if (es.eigenvalues()(k) > 0.5)
      basis.emplace_back(n_qubits, phase_fixed(es.eigenvectors().col(k)));
  return from_orthonormal(n_qubits, std::move(basis), 1e-7);
}

bool Subspace::contains(const PureState& psi, double tol) const {
  Vec residual = psi.amps - projector * psi.amps;
  return residual.norm() <= tol;
}

PureState orth_complement(const PureState& v) {
  require(v.n_qubits == 1, "orth_complement expects a single-qubit state");
  Vec w(2);
  w(0) = -std::conj(v.amps(1));
  w(1) = std::conj(v.amps(0));
  return {1, std::move(w)};
}

Eigen::Vector3d bloch_vector(const PureState& v) {
  require(v.n_qubits == 1, "bloch_vector expects a single-qubit state");
  Cx a = v.amps(0), b = v.amps(1);
  Cx ab = std::conj(a) * b;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

PureState bloch_state(const Eigen::Vector3d& r) {
  double theta = std::acos(std::clamp(r.z(), -1.0, 1.0));
  double phi = std::atan2(r.y(), r.x());
  Vec v(2);
  v(0) = std::cos(theta / 2.0);
  v(1) = std::polar(std::sin(theta / 2.0), phi);
  return {1, std::move(v)};
}

Subspace support(const DensityOperator& rho, double tol_rank) {
  double herm_res = (rho.mat - rho.mat.adjoint()).cwiseAbs().maxCoeff();
  if (herm_res > 1e-9)
    throw std::invalid_argument("support: operator not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Mat> es((rho.mat + rho.mat.adjoint()) / 2.0);
  std::vector<PureState> basis;
  for (int k = es.eigenvalues().size() - 1; k >= 0; --k) // descending eigenvalue
    if (es.eigenvalues()(k) > tol_rank)
      basis.emplace_back(rho.n_qubits, phase_fixed(es.eigenvectors().col(k)));
  return Subspace::from_orthonormal(rho.n_qubits, std::move(basis), 1e-7);
}

bool support_contains(const DensityOperator& rho, const PureState& psi, double tol) {
  return support(rho).contains(psi, tol);
}

PureState collapse(const PureState& psi, int party, const PureState& v) {
  check_party(party, psi.n_qubits);
  require(v.n_qubits == 1, "measurement direction must be a single-qubit state");
  int sub_dim = 1 << (psi.n_qubits - 1);
  Vec out = Vec::Zero(sub_dim);
  for (int j = 0; j < sub_dim; ++j)
    for (int b = 0; b < 2; ++b)
      out(j) += std::conj(v.amps(b)) * psi.amps(insert_bit(j, party, b, psi.n_qubits));
  return {psi.n_qubits - 1, std::move(out)};
}

DensityOperator collapse(const DensityOperator& rho, int party, const PureState& v) {
  check_party(party, rho.n_qubits);
  require(v.n_qubits == 1, "measurement direction must be a single-qubit state");
  int sub_dim = 1 << (rho.n_qubits - 1);
  Mat out = Mat::Zero(sub_dim, sub_dim);
  for (int j = 0; j < sub_dim; ++j)
    for (int k = 0; k < sub_dim; ++k)
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp)
          out(j, k) += std::conj(v.amps(b)) *
                       rho.mat(insert_bit(j, party, b, rho.n_qubits),
                               insert_bit(k, party, bp, rho.n_qubits)) *
                       v.amps(bp);
  return {rho.n_qubits - 1, std::move(out)};
}

PairOverlapOperator pair_overlap_operator(const PureState& a, const PureState& b, int party) {
  require(a.n_qubits == b.n_qubits, "pair overlap needs equal qubit counts");
  check_party(party, a.n_qubits);
  int sub_dim = 1 << (a.n_qubits - 1);
  Eigen::Matrix2cd n = Eigen::Matrix2cd::Zero();
  for (int bp = 0; bp < 2; ++bp)
    for (int bb = 0; bb < 2; ++bb) {
      Cx acc = 0;
      for (int j = 0; j < sub_dim; ++j)
        acc += std::conj(a.amps(insert_bit(j, party, bb, a.n_qubits))) *
               b.amps(insert_bit(j, party, bp, a.n_qubits));
      n(bp, bb) = acc;
    }
  return {party, n};
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> bloch_decompose(const PairOverlapOperator& n,
                                                            double tol_orth) {
  Cx tr = n.matrix.trace();
  double scale = std::max(1.0, n.matrix.cwiseAbs().maxCoeff());
  if (std::abs(tr) > tol_orth * scale + tol_orth)
    throw std::invalid_argument("bloch_decompose expects a traceless overlap operator");
  Eigen::Matrix2cd h1 = (n.matrix + n.matrix.adjoint()) / 2.0;
  Eigen::Matrix2cd h2 = (n.matrix - n.matrix.adjoint()) / Cx(0.0, 2.0);
  auto pauli = [](const Eigen::Matrix2cd& h) -> Eigen::Vector3d {
    return {h(0, 1).real(), -h(0, 1).imag(), h(0, 0).real()};
  };
  return {pauli(h1), pauli(h2)};
}

Eigen::Matrix2cd reduced_qubit(const PureState& psi, int party) {
  check_party(party, psi.n_qubits);
  int sub_dim = 1 << (psi.n_qubits - 1);
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp) {
      Cx acc = 0;
      for (int j = 0; j < sub_dim; ++j)
        acc += psi.amps(insert_bit(j, party, b, psi.n_qubits)) *
               std::conj(psi.amps(insert_bit(j, party, bp, psi.n_qubits)));
      m(b, bp) = acc;
    }
  return m;
}

Eigen::Matrix2cd reduced_qubit(const DensityOperator& rho, int party) {
  check_party(party, rho.n_qubits);
  int sub_dim = 1 << (rho.n_qubits - 1);
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp) {
      Cx acc = 0;
      for (int j = 0; j < sub_dim; ++j)
        acc += rho.mat(insert_bit(j, party, b, rho.n_qubits),
                       insert_bit(j, party, bp, rho.n_qubits));
      m(b, bp) = acc;
    }
  return m;
}

Mat reshape_cut(const PureState& psi, const std::vector<int>& cut) {
  int n = psi.n_qubits;
  std::vector<int> rows = cut;
  std::sort(rows.begin(), rows.end());
  require(!rows.empty() && static_cast<int>(rows.size()) < n,
          "cut must be a proper nonempty subset");
  std::vector<int> cols;
  for (int q = 1; q <= n; ++q)
    if (!std::binary_search(rows.begin(), rows.end(), q)) cols.push_back(q);
  Mat m(1 << rows.size(), 1 << cols.size());
  for (unsigned idx = 0; idx < static_cast<unsigned>(psi.dim()); ++idx) {
    unsigned r = 0, c = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      r = (r << 1) | static_cast<unsigned>(qubit_bit(idx, rows[i], n));
    for (std::size_t i = 0; i < cols.size(); ++i)
      c = (c << 1) | static_cast<unsigned>(qubit_bit(idx, cols[i], n));
    m(r, c) = psi.amps(idx);
  }
  return m;
}

bool states_orthogonal(const DensityOperator& a, const DensityOperator& b, double tol,
                       double tol_rank) {
  Mat pa = support(a, tol_rank).projector;
  Mat pb = support(b, tol_rank).projector;
  return (pa * pb).cwiseAbs().maxCoeff() <= tol;
}

PureState apply_local_unitary(const PureState& psi, int party, const Eigen::Matrix2cd& u) {
  check_party(party, psi.n_qubits);
  return {psi.n_qubits, full_local_operator(psi.n_qubits, party, u) * psi.amps};
}

DensityOperator apply_local_unitary(const DensityOperator& rho, int party,
                                    const Eigen::Matrix2cd& u) {
  check_party(party, rho.n_qubits);
  Mat full = full_local_operator(rho.n_qubits, party, u);
  return {rho.n_qubits, full * rho.mat * full.adjoint()};
}

namespace {

unsigned permute_index(unsigned idx, const std::vector<int>& perm, int n) {
  unsigned out = 0;
  for (int q = 1; q <= n; ++q) {
    int bit = qubit_bit(idx, q, n);
    out |= static_cast<unsigned>(bit) << (n - perm[q - 1]);
  }
  return out;
}

} // namespace

PureState permute_qubits(const PureState& psi, const std::vector<int>& perm) {
  require(static_cast<int>(perm.size()) == psi.n_qubits, "permutation size mismatch");
  Vec out(psi.dim());
  for (unsigned idx = 0; idx < static_cast<unsigned>(psi.dim()); ++idx)
    out(permute_index(idx, perm, psi.n_qubits)) = psi.amps(idx);
  return {psi.n_qubits, std::move(out)};
}

DensityOperator permute_qubits(const DensityOperator& rho, const std::vector<int>& perm) {
  require(static_cast<int>(perm.size()) == rho.n_qubits, "permutation size mismatch");
  Mat out(rho.dim(), rho.dim());
  for (unsigned i = 0; i < static_cast<unsigned>(rho.dim()); ++i)
    for (unsigned j = 0; j < static_cast<unsigned>(rho.dim()); ++j)
      out(permute_index(i, perm, rho.n_qubits), permute_index(j, perm, rho.n_qubits)) =
          rho.mat(i, j);
  return {rho.n_qubits, std::move(out)};
}

} // namespace locq
