#include "locq/prodfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "locq/rng.hpp"

namespace locq {

namespace {

// The rank-1 conditions across every single-qubit cut, as complex symmetric
// quadratic forms in the subspace coefficients: minor_k(a) = a^T Q_k a.
struct MinorSystem {
  int d = 0;
  std::vector<Mat> q;
};

MinorSystem build_minors(const Subspace& s) {
  MinorSystem sys;
  sys.d = s.dim();
  int n = s.n_qubits;
  for (int party = 1; party <= n; ++party) {
    std::vector<Mat> reshaped;
    reshaped.reserve(sys.d);
    for (const auto& b : s.basis) reshaped.push_back(reshape_cut(b, {party}));
    int cols = static_cast<int>(reshaped.front().cols());
    for (int c1 = 0; c1 < cols; ++c1)
      for (int c2 = c1 + 1; c2 < cols; ++c2) {
        Mat q = Mat::Zero(sys.d, sys.d);
        for (int i = 0; i < sys.d; ++i)
          for (int j = 0; j < sys.d; ++j) {
            Cx f = reshaped[i](0, c1) * reshaped[j](1, c2) -
                   reshaped[i](0, c2) * reshaped[j](1, c1);
            q(i, j) += f / 2.0;
            q(j, i) += f / 2.0;
          }
        sys.q.push_back(std::move(q));
      }
  }
  return sys;
}

Vec eval_minors(const MinorSystem& sys, const Vec& a) {
  Vec m(sys.q.size());
  for (std::size_t k = 0; k < sys.q.size(); ++k) m(k) = (a.transpose() * sys.q[k] * a)(0);
  return m;
}

// Rows are the holomorphic gradients 2 Q_k a.
Mat minor_gradients(const MinorSystem& sys, const Vec& a) {
  Mat g(sys.q.size(), sys.d);
  for (std::size_t k = 0; k < sys.q.size(); ++k) g.row(k) = (2.0 * sys.q[k] * a).transpose();
  return g;
}

double minor_residual(const MinorSystem& sys, const Vec& a) {
  return eval_minors(sys, a.normalized()).cwiseAbs().maxCoeff();
}

// Newton on a random square subsystem R.m(a) = 0 in an affine chart
// <g|a> = 1. Returns a normalized coefficient vector on convergence.
std::optional<Vec> newton_root(const MinorSystem& sys, const Vec& start, const Mat& r_comb,
                               const Vec& chart, double step_tol, int max_iters) {
  int d = sys.d;
  Cx pairing = chart.dot(start);
  if (std::abs(pairing) < 1e-12) return std::nullopt;
  Vec a0 = chart / chart.squaredNorm();

  // Orthonormal basis of the chart complement via a Householder frame.
  Mat frame(d, d);
  frame.col(0) = chart.normalized();
  Mat rand_fill = Mat::Identity(d, d);
  frame.rightCols(d - 1) = rand_fill.rightCols(d - 1);
  Eigen::HouseholderQR<Mat> qr(frame);
  Mat u = qr.householderQ();
  // Ensure the first frame column spans chart direction (phase irrelevant).
  Mat a_basis = u.rightCols(d - 1);

  Vec alpha = start / pairing;
  Vec z = a_basis.adjoint() * (alpha - a0);
  // Roots may be singular (vanishing gradients); Newton is then only
  // linearly convergent and the attainable accuracy scales like
  // sqrt(machine epsilon). Track the best iterate and push the residual to
  // the floor so hit clusters collapse well inside the dedup radius.
  double best_res = std::numeric_limits<double>::infinity();
  Vec best_alpha;
  int stagnant = 0;
  for (int it = 0; it < max_iters; ++it) {
    alpha = a0 + a_basis * z;
    double res = minor_residual(sys, alpha);
    if (res < best_res) {
      best_res = res;
      best_alpha = alpha;
      stagnant = 0;
    } else if (++stagnant > 6) {
      break;
    }
    if (res <= 1e-15) break;
    Vec f = r_comb * eval_minors(sys, alpha);
    Mat jac = r_comb * minor_gradients(sys, alpha) * a_basis;
    Eigen::FullPivLU<Mat> lu(jac);
    if (!lu.isInvertible()) break;
    Vec delta = lu.solve(-f);
    z += delta;
    if (!z.allFinite() || z.norm() > 1e8) break;
    if (delta.norm() <= step_tol) {
      alpha = a0 + a_basis * z;
      double final_res = minor_residual(sys, alpha);
      if (final_res < best_res) {
        best_res = final_res;
        best_alpha = alpha;
      }
      break;
    }
  }
  if (best_res <= 1e-11) return best_alpha.normalized();
  return std::nullopt;
}

// Penalty descent over local Bloch angles: minimizes ||(I-P) psi(x)||^2 by
// cyclic coordinate search with shrinking steps.
std::optional<Vec> bloch_descent(const Subspace& s, std::mt19937_64& gen, double step_tol) {
  int n = s.n_qubits;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> x(2 * n);
  for (int p = 0; p < n; ++p) {
    x[2 * p] = std::acos(2.0 * uni(gen) - 1.0);
    x[2 * p + 1] = 2.0 * M_PI * uni(gen);
  }
  auto make_state = [&](const std::vector<double>& params) {
    std::vector<PureState> factors;
    for (int p = 0; p < n; ++p) {
      Vec v(2);
      v(0) = std::cos(params[2 * p] / 2.0);
      v(1) = std::polar(std::sin(params[2 * p] / 2.0), params[2 * p + 1]);
      factors.emplace_back(1, std::move(v));
    }
    return tensor(factors);
  };
  auto penalty = [&](const std::vector<double>& params) {
    PureState psi = make_state(params);
    return (psi.amps - s.projector * psi.amps).squaredNorm();
  };
  double f = penalty(x);
  double step = 0.5;
  int evals = 0;
  while (step > step_tol && evals < 20000) {
    double f_before = f;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sgn : {+1.0, -1.0}) {
        std::vector<double> trial = x;
        trial[i] += sgn * step;
        double ft = penalty(trial);
        ++evals;
        if (ft < f) {
          f = ft;
          x = trial;
        }
      }
    }
    // Shrink once a full sweep stops making real progress at this step.
    if (f >= f_before - 1e-3 * std::max(f_before, 1e-300)) step *= 0.5;
    if (step < 1e-6 && f > 1e-10) return std::nullopt; // no root nearby
  }
  if (f > 1e-16) return std::nullopt;
  PureState psi = make_state(x);
  Vec coeff(s.dim());
  for (int i = 0; i < s.dim(); ++i) coeff(i) = inner(s.basis[i], psi);
  return coeff.normalized();
}

PureState state_from_coefficients(const Subspace& s, const Vec& a) {
  Vec amps = Vec::Zero(1 << s.n_qubits);
  for (int i = 0; i < s.dim(); ++i) amps += a(i) * s.basis[i].amps;
  return PureState{s.n_qubits, amps}.normalized();
}

// Best rank-1 (product) approximation by alternating least squares.
std::vector<PureState> nearest_product(const PureState& psi) {
  int n = psi.n_qubits;
  std::vector<PureState> factors;
  for (int party = 1; party <= n; ++party) {
    Mat m = reshape_cut(psi, {party});
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
    factors.emplace_back(1, svd.matrixU().col(0));
  }
  for (int sweep = 0; sweep < 12; ++sweep) {
    for (int party = 1; party <= n; ++party) {
      PureState rest = psi;
      std::vector<int> present(n);
      for (int q = 0; q < n; ++q) present[q] = q + 1;
      for (int q = n; q >= 1; --q) {
        if (q == party) continue;
        int pos = static_cast<int>(std::find(present.begin(), present.end(), q) -
                                   present.begin()) +
                  1;
        rest = collapse(rest, pos, factors[q - 1]);
        present.erase(present.begin() + (pos - 1));
      }
      double norm = rest.norm();
      if (norm > 1e-300) factors[party - 1] = rest.normalized();
    }
  }
  return factors;
}

// Alternating projection between the product-state variety and the
// subspace; collapses the flat basin around singular roots to machine
// precision so deduplication is sharp.
Vec polish_root(const Subspace& s, Vec alpha) {
  for (int it = 0; it < 80; ++it) {
    PureState psi = state_from_coefficients(s, alpha);
    PureState prod = tensor(nearest_product(psi));
    Vec beta(s.dim());
    for (int i = 0; i < s.dim(); ++i) beta(i) = inner(s.basis[i], prod);
    double norm = beta.norm();
    if (norm < 1e-300) break;
    beta /= norm;
    Cx phase = beta.dot(alpha);
    if (std::abs(phase) > 0) beta *= phase / std::abs(phase);
    double change = (beta - alpha).norm();
    alpha = beta;
    if (change < 1e-15) break;
  }
  return alpha;
}

Vec gauge_fix(Vec a) {
  for (int i = 0; i < a.size(); ++i) {
    if (std::abs(a(i)) > 1e-7) {
      a *= std::conj(a(i)) / std::abs(a(i));
      break;
    }
  }
  return a;
}

// Real Jacobian null dimension at a solution, minus the scale and phase
// gauge directions.
int estimate_family_dim(const MinorSystem& sys, const Vec& a) {
  int d = sys.d;
  Mat g = minor_gradients(sys, a); // M x d holomorphic gradients
  int m = static_cast<int>(g.rows());
  Eigen::MatrixXd jr(2 * m, 2 * d);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < d; ++j) {
      Cx gv = g(k, j);
      jr(2 * k, j) = gv.real();
      jr(2 * k, d + j) = -gv.imag();
      jr(2 * k + 1, j) = gv.imag();
      jr(2 * k + 1, d + j) = gv.real();
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jr);
  double smax = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > std::max(1e-7 * smax, 1e-10)) ++rank;
  return std::max(0, 2 * d - rank - 2);
}

// Tangent direction orthogonal to the scale/phase gauge, if any.
std::optional<Vec> null_tangent(const MinorSystem& sys, const Vec& a) {
  int d = sys.d;
  Mat g = minor_gradients(sys, a);
  int m = static_cast<int>(g.rows());
  // Append the two gauge directions as rows so they leave the null space.
  Eigen::MatrixXd jr(2 * m + 2, 2 * d);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < d; ++j) {
      Cx gv = g(k, j);
      jr(2 * k, j) = gv.real();
      jr(2 * k, d + j) = -gv.imag();
      jr(2 * k + 1, j) = gv.imag();
      jr(2 * k + 1, d + j) = gv.real();
    }
  for (int j = 0; j < d; ++j) {
    jr(2 * m, j) = a(j).real();
    jr(2 * m, d + j) = a(j).imag();
    jr(2 * m + 1, j) = -a(j).imag();
    jr(2 * m + 1, d + j) = a(j).real();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jr, Eigen::ComputeFullV);
  double smax = svd.singularValues()(0);
  int idx = 2 * d - 1;
  if (svd.singularValues()(idx) > std::max(1e-7 * smax, 1e-10)) return std::nullopt;
  Eigen::VectorXd t = svd.matrixV().col(idx);
  Vec tc(d);
  for (int j = 0; j < d; ++j) tc(j) = Cx(t(j), t(d + j));
  return tc;
}

} // namespace

std::optional<std::vector<PureState>> is_product(const PureState& psi, double tol) {
  PureState p = psi.normalized();
  int n = p.n_qubits;
  if (n == 1) return std::vector<PureState>{p};
  std::vector<PureState> factors;
  for (int party = 1; party <= n; ++party) {
    Mat m = reshape_cut(p, {party});
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
    if (svd.singularValues()(1) > tol) return std::nullopt;
    factors.emplace_back(1, svd.matrixU().col(0));
  }
  PureState recon = tensor(factors);
  Cx phase = inner(recon, p);
  if (std::abs(phase) > 0) factors.front().amps *= phase / std::abs(phase);
  recon = tensor(factors);
  if ((recon.amps - p.amps).norm() > tol) return std::nullopt;
  return factors;
}

ProductSearchResult product_states_in_subspace(const Subspace& s, const SearchConfig& cfg) {
  if (s.dim() < 1) throw std::invalid_argument("subspace must have dimension >= 1");
  if (s.n_qubits < 2 || s.n_qubits > cfg.max_qubits)
    throw std::invalid_argument("product search supports 2..max_qubits qubits");

  ProductSearchResult out;
  MinorSystem sys = build_minors(s);
  int d = s.dim();

  // Dimension 1 is decided exactly.
  if (d == 1) {
    out.complete = true;
    if (auto factors = is_product(s.basis[0], cfg.tol.prod)) {
      ProductStateHit hit;
      hit.coefficients = gauge_fix(Vec::Ones(1));
      hit.factors = *factors;
      PureState recon = tensor(*factors);
      hit.residual = (recon.amps - s.projector * recon.amps).norm();
      hit.family_dim = 0;
      out.hits.push_back(std::move(hit));
    }
    return out;
  }

  int m_count = static_cast<int>(sys.q.size());
  auto try_accept = [&](const Vec& alpha_in) -> bool {
    if (minor_residual(sys, alpha_in) > 1e-9) return false;
    Vec alpha = polish_root(s, alpha_in.normalized());
    if (minor_residual(sys, alpha) > 1e-9) alpha = alpha_in.normalized();
    PureState psi = state_from_coefficients(s, alpha);
    auto factors = is_product(psi, cfg.tol.prod);
    if (!factors) return false;
    PureState recon = tensor(*factors);
    double residual = (recon.amps - s.projector * recon.amps).norm();
    if (residual > cfg.tol.prod) return false;
    for (const auto& h : out.hits) {
      PureState other = state_from_coefficients(s, h.coefficients);
      if (fubini_study_distance(psi, other) <= cfg.dedup_fs) return false;
    }
    // Phase gauge: make the largest tensor amplitude real positive.
    int imax = 0;
    for (int i = 0; i < recon.dim(); ++i)
      if (std::abs(recon.amps(i)) > std::abs(recon.amps(imax))) imax = i;
    Cx top = recon.amps(imax);
    if (std::abs(top) > 0) (*factors)[0].amps *= std::conj(top) / std::abs(top);
    ProductStateHit hit;
    hit.coefficients = gauge_fix(alpha.normalized());
    hit.factors = *factors;
    hit.residual = residual;
    hit.family_dim = estimate_family_dim(sys, alpha.normalized());
    out.hits.push_back(std::move(hit));
    return true;
  };

  int last_new = -1;
  for (int r = 0; r < cfg.restarts; ++r) {
    auto gen = rng::engine(cfg.seed, 0x9f0d + static_cast<std::uint64_t>(r));
    Vec start = rng::gaussian_vector(d, gen).normalized();
    Vec chart = rng::gaussian_vector(d, gen);
    Mat r_comb(d - 1, m_count);
    for (int i = 0; i < d - 1; ++i) r_comb.row(i) = rng::gaussian_vector(m_count, gen).transpose();
    if (auto root = newton_root(sys, start, r_comb, chart, cfg.newton_tol, 150))
      if (try_accept(*root)) last_new = r;
    if (r % 8 == 0) {
      if (auto coeff = bloch_descent(s, gen, cfg.descent_tol)) {
        // Polish the descent output with a Newton pass before accepting.
        if (auto root = newton_root(sys, *coeff, r_comb, chart, cfg.newton_tol, 150)) {
          if (try_accept(*root)) last_new = r;
        } else if (try_accept(*coeff)) {
          last_new = r;
        }
      }
    }
  }
  out.restarts_used = cfg.restarts;
  out.complete = (last_new < cfg.restarts / 2);

  // Tangent re-solve: confirm estimated families, downgrade unconfirmed ones.
  for (auto& hit : out.hits) {
    if (hit.family_dim == 0) continue;
    Vec alpha = hit.coefficients;
    auto tangent = null_tangent(sys, alpha);
    if (!tangent) {
      hit.family_dim = 0;
      continue;
    }
    auto gen = rng::engine(cfg.seed, 0x7abc);
    Vec perturbed = (alpha + 1e-3 * tangent->normalized()).normalized();
    Vec chart = rng::gaussian_vector(d, gen);
    Mat r_comb(d - 1, m_count);
    for (int i = 0; i < d - 1; ++i) r_comb.row(i) = rng::gaussian_vector(m_count, gen).transpose();
    bool confirmed = false;
    if (auto root = newton_root(sys, perturbed, r_comb, chart, cfg.newton_tol, 150)) {
      if (minor_residual(sys, *root) <= 1e-9) {
        PureState a = state_from_coefficients(s, alpha);
        PureState b = state_from_coefficients(s, *root);
        // A genuine family keeps the tangential offset; a singular isolated
        // root pulls the re-solve back inside the flat basin.
        double dist = fubini_study_distance(a, b);
        confirmed = dist > 1e-5 && dist < 1e-1;
      }
    }
    if (!confirmed) hit.family_dim = 0;
  }

  std::sort(out.hits.begin(), out.hits.end(),
            [](const ProductStateHit& a, const ProductStateHit& b) {
              for (int i = 0; i < a.coefficients.size(); ++i) {
                auto ra = std::round(a.coefficients(i).real() * 1e8);
                auto rb = std::round(b.coefficients(i).real() * 1e8);
                if (ra != rb) return ra < rb;
                auto ia = std::round(a.coefficients(i).imag() * 1e8);
                auto ib = std::round(b.coefficients(i).imag() * 1e8);
                if (ia != ib) return ia < ib;
              }
              return false;
            });
  return out;
}

UpbCheckResult upb_check(const std::vector<PureState>& states, const SearchConfig& cfg) {
  if (states.size() < 2) throw std::invalid_argument("upb_check needs at least two states");
  int n = states.front().n_qubits;
  Mat m(1 << n, static_cast<int>(states.size()));
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (states[j].n_qubits != n) throw std::invalid_argument("qubit counts differ");
    m.col(static_cast<int>(j)) = states[j].normalized().amps;
  }
  Eigen::JacobiSVD<Mat> svd(m);
  if (svd.singularValues()(svd.singularValues().size() - 1) <
      1e-8 * svd.singularValues()(0))
    throw std::invalid_argument("upb_check requires linearly independent states");

  UpbCheckResult res;
  res.orthonormal_products = true;
  for (std::size_t i = 0; i < states.size() && res.orthonormal_products; ++i) {
    if (!is_product(states[i], cfg.tol.prod)) res.orthonormal_products = false;
    for (std::size_t j = i + 1; j < states.size(); ++j)
      if (std::abs(inner(states[i].normalized(), states[j].normalized())) > 1e-8)
        res.orthonormal_products = false;
  }

  Subspace span = Subspace::span(n, states, cfg.tol.rank);
  Subspace comp = span.complement(cfg.tol.rank);
  if (comp.dim() == 0) {
    res.complement_hits.complete = true;
    res.unextendible = true; // empty complement holds no product state
    return res;
  }
  res.complement_hits = product_states_in_subspace(comp, cfg);
  res.unextendible = res.complement_hits.hits.empty() && res.complement_hits.complete;
  return res;
}

} // namespace locq
