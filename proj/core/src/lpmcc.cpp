#include "locq/lpmcc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "locq/schmidt.hpp"

namespace locq {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Sign-canonical direction: first significant component of (z, x, y) made
// positive, so antipodal representatives collapse to one basis.
Eigen::Vector3d canonical_direction(Eigen::Vector3d r) {
  r.normalize();
  double comps[3] = {r.z(), r.x(), r.y()};
  for (double c : comps) {
    if (std::abs(c) > 1e-9) {
      if (c < 0) r = -r;
      break;
    }
  }
  return r;
}

long direction_key(const Eigen::Vector3d& r) {
  auto q = [](double x) { return std::llround(x * 1e7); };
  return q(r.x()) * 40000019L * 40000019L + q(r.y()) * 40000019L + q(r.z());
}

std::vector<Subspace> state_supports(const std::vector<DensityOperator>& states,
                                     const SearchConfig& cfg) {
  std::vector<Subspace> supports;
  supports.reserve(states.size());
  for (const auto& s : states) supports.push_back(support(s, cfg.tol.rank));
  return supports;
}

void check_pairwise_orthogonal(const std::vector<Subspace>& supports) {
  for (std::size_t i = 0; i < supports.size(); ++i)
    for (std::size_t j = i + 1; j < supports.size(); ++j)
      if ((supports[i].projector * supports[j].projector).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("states must be pairwise orthogonal");
}

// Direct check that both branches of the basis leave the surviving collapsed
// states pairwise orthogonal.
bool keeps_orthogonality(const std::vector<Subspace>& supports, int pos,
                         const MeasurementBasis& basis) {
  for (const PureState* dir : {&basis.v, &basis.v_perp}) {
    std::vector<std::vector<PureState>> collapsed(supports.size());
    for (std::size_t k = 0; k < supports.size(); ++k)
      for (const auto& b : supports[k].basis) collapsed[k].push_back(collapse(b, pos, *dir));
    for (std::size_t k = 0; k < supports.size(); ++k)
      for (std::size_t l = k + 1; l < supports.size(); ++l)
        for (const auto& ck : collapsed[k])
          for (const auto& cl : collapsed[l]) {
            double nk = ck.norm(), nl = cl.norm();
            if (nk <= 1e-7 || nl <= 1e-7) continue;
            if (std::abs(inner(ck, cl)) > 1e-8 * nk * nl) return false;
          }
  }
  return true;
}

bool satisfies_constraints(const std::vector<Eigen::Vector3d>& normals,
                           const Eigen::Vector3d& r, double tol) {
  for (const auto& n : normals)
    if (std::abs(n.dot(r)) > tol) return false;
  return true;
}

// Candidate directions worth pinning exactly on a continuous family:
// the computational basis and the local eigenvectors of each state's
// reduced operator.
std::vector<Eigen::Vector3d> canonical_directions(const std::vector<DensityOperator>& states,
                                                  int pos) {
  std::vector<Eigen::Vector3d> dirs{{0, 0, 1}};
  for (const auto& s : states) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(reduced_qubit(s, pos));
    for (int c = 0; c < 2; ++c) {
      PureState v{1, es.eigenvectors().col(c)};
      dirs.push_back(bloch_vector(v.normalized()));
    }
  }
  return dirs;
}

} // namespace

MeasurementBasis MeasurementBasis::from_direction(int party, const PureState& v) {
  MeasurementBasis b;
  b.party = party;
  b.v = v.normalized();
  b.v_perp = orth_complement(b.v);
  b.bloch = bloch_vector(b.v);
  return b;
}

MeasurementBasis MeasurementBasis::from_bloch(int party, const Eigen::Vector3d& r) {
  return from_direction(party, bloch_state(r.normalized()));
}

CandidateSet ok_candidates(const std::vector<DensityOperator>& states, int party,
                           const SearchConfig& cfg) {
  require(states.size() >= 2, "ok_candidates needs at least two states");
  int n = states.front().n_qubits;
  for (const auto& s : states) require(s.n_qubits == n, "qubit counts differ");
  if (party < 1 || party > n) throw std::out_of_range("qubit index out of range");

  std::vector<Subspace> supports = state_supports(states, cfg);
  check_pairwise_orthogonal(supports);

  CandidateSet cs;
  std::vector<Eigen::Vector3d> raw;
  for (std::size_t k = 0; k < states.size(); ++k)
    for (std::size_t l = k + 1; l < states.size(); ++l)
      for (const auto& u : supports[k].basis)
        for (const auto& w : supports[l].basis) {
          PairOverlapOperator nop = pair_overlap_operator(u, w, party);
          if (nop.matrix.cwiseAbs().maxCoeff() <= 1e-12) continue;
          auto [n1, n2] = bloch_decompose(nop, 1e-7);
          if (n1.norm() > 1e-12) raw.push_back(n1);
          if (n2.norm() > 1e-12) raw.push_back(n2);
        }

  if (raw.empty()) {
    cs.kind = CandidateSet::Kind::Sphere;
  } else {
    Eigen::MatrixXd stack(raw.size(), 3);
    for (std::size_t i = 0; i < raw.size(); ++i) stack.row(i) = raw[i].transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack, Eigen::ComputeFullV);
    double smax = svd.singularValues()(0);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size() && i < 3; ++i)
      if (svd.singularValues()(i) > cfg.tol.plane * smax) ++rank;
    switch (rank) {
      case 0:
        cs.kind = CandidateSet::Kind::Sphere;
        break;
      case 1:
        cs.kind = CandidateSet::Kind::Circle;
        cs.circle_u = svd.matrixV().col(1);
        cs.circle_v = svd.matrixV().col(2);
        break;
      case 2: {
        cs.kind = CandidateSet::Kind::Finite;
        Eigen::Vector3d dir = canonical_direction(svd.matrixV().col(2));
        cs.finite.push_back(MeasurementBasis::from_bloch(party, dir));
        break;
      }
      default:
        cs.kind = CandidateSet::Kind::Empty;
    }
    for (const auto& r : raw) cs.constraints.push_back(r.normalized());
  }

  // Annihilation candidates: a state whose reduced operator on this party is
  // rank 1 can be killed on one branch by aligning v_perp with its local
  // direction. Verified directly before inclusion.
  std::set<long> seen;
  for (const auto& b : cs.finite) seen.insert(direction_key(canonical_direction(b.bloch)));
  for (const auto& s : states) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(reduced_qubit(s, party));
    if (es.eigenvalues()(0) > cfg.tol.rank * std::max(es.eigenvalues()(1), 1e-300)) continue;
    PureState u{1, es.eigenvectors().col(1)};
    MeasurementBasis basis = MeasurementBasis::from_direction(party, orth_complement(u.normalized()));
    long key = direction_key(canonical_direction(basis.bloch));
    if (seen.count(key)) continue;
    if (!keeps_orthogonality(supports, party, basis)) continue;
    seen.insert(key);
    if (cs.kind == CandidateSet::Kind::Empty || cs.kind == CandidateSet::Kind::Finite) {
      cs.finite.push_back(basis);
      cs.kind = CandidateSet::Kind::Finite;
    } else {
      cs.annihilation.push_back(basis);
    }
  }
  return cs;
}

// ---------------------------------------------------------------------------
// Protocol search
// ---------------------------------------------------------------------------

namespace {

struct Hyp {
  std::string label;
  DensityOperator rho; // normalized
  Subspace supp;
};

struct Searcher {
  const SearchConfig& cfg;
  ProtocolTree tree;
  SearchStats stats;
  bool budget_exceeded = false;

  struct Result {
    bool success = false;
    int node = -1;
    bool exhaustive = true;
  };

  explicit Searcher(const SearchConfig& c) : cfg(c) {}

  int leaf(const std::vector<Hyp>& hyps) {
    ProtocolTree::Node node;
    if (hyps.size() == 1) {
      node.type = ProtocolTree::Node::Type::Identified;
      node.label = hyps.front().label;
      node.surviving = {hyps.front().label};
    } else {
      node.type = ProtocolTree::Node::Type::Fail;
    }
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size()) - 1;
  }

  // Candidate bases for one party of the current node, canonical points
  // first, then deterministic samples of continuous families.
  std::vector<MeasurementBasis> moves_for(const CandidateSet& cs,
                                          const std::vector<DensityOperator>& states, int pos,
                                          bool* continuous) {
    *continuous = false;
    std::vector<MeasurementBasis> moves = cs.finite;
    if (cs.kind == CandidateSet::Kind::Circle || cs.kind == CandidateSet::Kind::Sphere) {
      *continuous = true;
      std::set<long> seen;
      auto push_dir = [&](const Eigen::Vector3d& r) {
        Eigen::Vector3d d = canonical_direction(r);
        if (d.norm() < 0.5) return;
        long key = direction_key(d);
        if (seen.count(key)) return;
        seen.insert(key);
        moves.push_back(MeasurementBasis::from_bloch(pos, d));
      };
      for (const auto& b : cs.annihilation) push_dir(b.bloch);
      for (const auto& r : canonical_directions(states, pos))
        if (satisfies_constraints(cs.constraints, r, 1e-8)) push_dir(r);
      if (cs.kind == CandidateSet::Kind::Circle) {
        for (int i = 0; i < cfg.circle_samples; ++i) {
          double t = 2.0 * M_PI * i / cfg.circle_samples;
          push_dir(std::cos(t) * cs.circle_u + std::sin(t) * cs.circle_v);
        }
      } else {
        double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < cfg.circle_samples; ++i) {
          double z = 1.0 - 2.0 * (i + 0.5) / cfg.circle_samples;
          double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
          double phi = golden * i;
          push_dir({rad * std::cos(phi), rad * std::sin(phi), z});
        }
      }
    }
    return moves;
  }

  Result run(const std::vector<Hyp>& hyps, const std::vector<int>& parties) {
    ++stats.nodes_explored;
    if (stats.nodes_explored > cfg.max_nodes) {
      budget_exceeded = true;
      return {false, -1, false};
    }
    if (hyps.size() <= 1) return {true, leaf(hyps), true};
    if (parties.empty()) return {false, -1, true};

    bool exhaustive = true;
    for (std::size_t pi = 0; pi < parties.size(); ++pi) {
      int original_party = parties[pi];
      int pos = static_cast<int>(pi) + 1;
      std::vector<DensityOperator> states;
      std::vector<Subspace> supports;
      for (const auto& h : hyps) {
        states.push_back(h.rho);
        supports.push_back(h.supp);
      }
      CandidateSet cs = ok_candidates(states, pos, cfg);
      bool continuous = false;
      std::vector<MeasurementBasis> moves = moves_for(cs, states, pos, &continuous);
      if (continuous) ++stats.families_sampled;

      for (const auto& move : moves) {
        if (budget_exceeded) return {false, -1, false};
        if (!keeps_orthogonality(supports, pos, move)) continue;
        std::vector<int> child_parties = parties;
        child_parties.erase(child_parties.begin() + pi);
        int children[2] = {-1, -1};
        bool failed = false;
        Result results[2];
        for (int outcome = 0; outcome < 2 && !failed; ++outcome) {
          const PureState& dir = outcome ? move.v_perp : move.v;
          std::vector<Hyp> next;
          for (const auto& h : hyps) {
            DensityOperator c = collapse(h.rho, pos, dir);
            double w = c.trace();
            if (w <= cfg.tol.vanish) continue;
            c.mat /= w;
            next.push_back({h.label, c, support(c, cfg.tol.rank)});
          }
          results[outcome] = run(next, child_parties);
          if (!results[outcome].success) {
            exhaustive = exhaustive && results[outcome].exhaustive;
            failed = true;
          } else {
            children[outcome] = results[outcome].node;
          }
        }
        if (failed) continue;
        ProtocolTree::Node node;
        node.type = ProtocolTree::Node::Type::Measure;
        node.party = original_party;
        node.basis = move;
        node.basis.party = original_party;
        node.child[0] = children[0];
        node.child[1] = children[1];
        for (const auto& h : hyps) node.surviving.push_back(h.label);
        tree.nodes.push_back(std::move(node));
        return {true, static_cast<int>(tree.nodes.size()) - 1, true};
      }
      if (continuous) exhaustive = false;
    }
    return {false, -1, exhaustive};
  }
};

std::string kind_name(CandidateSet::Kind k) {
  switch (k) {
    case CandidateSet::Kind::Empty: return "empty";
    case CandidateSet::Kind::Finite: return "finite";
    case CandidateSet::Kind::Circle: return "circle";
    default: return "sphere";
  }
}

} // namespace

Decision decide(const std::vector<LabeledState>& states, const SearchConfig& cfg) {
  require(states.size() >= 2, "decide needs at least two states");
  int n = states.front().rho.n_qubits;
  if (n < 1 || n > cfg.max_qubits || static_cast<int>(states.size()) > (1 << n))
    throw std::invalid_argument("unsupported size: need n <= max_qubits and N <= 2^n");
  std::set<std::string> labels;
  std::vector<Hyp> hyps;
  std::vector<DensityOperator> plain;
  for (const auto& s : states) {
    require(s.rho.n_qubits == n, "qubit counts differ");
    require(labels.insert(s.label).second, "labels must be unique");
    DensityOperator rho = s.rho;
    rho.validate(cfg.tol, false);
    double tr = rho.trace();
    require(tr > cfg.tol.vanish, "state has vanishing trace");
    rho.mat /= tr;
    plain.push_back(rho);
    hyps.push_back({s.label, rho, support(rho, cfg.tol.rank)});
  }
  {
    std::vector<Subspace> supports;
    for (const auto& h : hyps) supports.push_back(h.supp);
    check_pairwise_orthogonal(supports);
  }

  Decision decision;

  // A certified Schmidt-number sum above the space dimension rules out any
  // LOCC protocol before searching.
  int sum_lower = 0;
  for (const auto& rho : plain) sum_lower += schmidt_lower_bound(rho, cfg);
  if (sum_lower > (1 << n)) {
    decision.verdict = Verdict::Indistinguishable;
    std::ostringstream os;
    os << "schmidt-sum certificate: certified lower bounds sum to " << sum_lower << " > "
       << (1 << n);
    decision.certificate.push_back(os.str());
    return decision;
  }

  Searcher searcher(cfg);
  searcher.tree.n_qubits = n;
  std::vector<int> parties(n);
  for (int i = 0; i < n; ++i) parties[i] = i + 1;
  Searcher::Result res = searcher.run(hyps, parties);
  decision.stats = searcher.stats;

  if (res.success) {
    decision.verdict = Verdict::Distinguishable;
    searcher.tree.root = res.node;
    decision.tree = std::move(searcher.tree);
    return decision;
  }
  if (searcher.budget_exceeded) {
    decision.verdict = Verdict::Inconclusive;
    decision.caveat = "node budget exceeded before the search space was exhausted";
    return decision;
  }
  if (!res.exhaustive) {
    decision.verdict = Verdict::Inconclusive;
    decision.caveat = "failure pruned only sampled points of continuous candidate families";
    return decision;
  }
  decision.verdict = Verdict::Indistinguishable;
  for (std::size_t pi = 0; pi < parties.size(); ++pi) {
    CandidateSet cs = ok_candidates(plain, static_cast<int>(pi) + 1, cfg);
    std::ostringstream os;
    os << "party " << (pi + 1) << ": " << kind_name(cs.kind) << " candidate set ("
       << cs.constraints.size() << " plane constraints, " << cs.finite.size()
       << " verified bases)";
    decision.certificate.push_back(os.str());
  }
  {
    std::ostringstream os;
    os << "protocol search exhausted: " << decision.stats.nodes_explored
       << " nodes, no orthogonality-keeping protocol identifies all states";
    decision.certificate.push_back(os.str());
  }
  return decision;
}

FirstMoverResult first_mover_exists(const std::vector<DensityOperator>& states, int party,
                                    const SearchConfig& cfg) {
  std::vector<Subspace> supports = state_supports(states, cfg);
  check_pairwise_orthogonal(supports);
  CandidateSet cs = ok_candidates(states, party, cfg);

  std::vector<MeasurementBasis> candidates = cs.finite;
  for (const auto& b : cs.annihilation) candidates.push_back(b);
  if (cs.kind == CandidateSet::Kind::Circle) {
    for (int i = 0; i < cfg.circle_samples; ++i) {
      double t = 2.0 * M_PI * i / cfg.circle_samples;
      candidates.push_back(
          MeasurementBasis::from_bloch(party, std::cos(t) * cs.circle_u + std::sin(t) * cs.circle_v));
    }
  } else if (cs.kind == CandidateSet::Kind::Sphere) {
    candidates.push_back(MeasurementBasis::from_bloch(party, {0, 0, 1}));
  }
  for (const auto& r : canonical_directions(states, party))
    if (satisfies_constraints(cs.constraints, r, 1e-8) &&
        cs.kind != CandidateSet::Kind::Empty && cs.kind != CandidateSet::Kind::Finite)
      candidates.push_back(MeasurementBasis::from_bloch(party, r));

  for (const auto& b : candidates)
    if (keeps_orthogonality(supports, party, b)) return {true, b};
  return {false, std::nullopt};
}

ProtocolCheck verify_protocol(const ProtocolTree& tree, const std::vector<LabeledState>& states,
                              const SearchConfig& cfg) {
  require(tree.root >= 0 && tree.root < static_cast<int>(tree.nodes.size()),
          "protocol tree has no valid root");
  ProtocolCheck check;
  std::vector<double> own_mass(states.size(), 0.0);
  std::vector<DensityOperator> current;
  for (const auto& s : states) {
    DensityOperator rho = s.rho;
    double tr = rho.trace();
    require(tr > 0, "state has vanishing trace");
    rho.mat /= tr;
    current.push_back(rho);
  }
  std::vector<int> parties(tree.n_qubits);
  for (int i = 0; i < tree.n_qubits; ++i) parties[i] = i + 1;

  struct Frame {
    int node;
    std::vector<int> parties;
    std::vector<DensityOperator> states;
    std::string outcome;
  };
  std::vector<Frame> stack{{tree.root, parties, current, ""}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const auto& node = tree.nodes[f.node];
    if (node.type == ProtocolTree::Node::Type::Measure) {
      auto it = std::find(f.parties.begin(), f.parties.end(), node.party);
      if (it == f.parties.end())
        throw std::invalid_argument("protocol measures a party twice on one path");
      int pos = static_cast<int>(it - f.parties.begin()) + 1;
      std::vector<int> rest = f.parties;
      rest.erase(rest.begin() + (pos - 1));
      for (int outcome = 0; outcome < 2; ++outcome) {
        const PureState& dir = outcome ? node.basis.v_perp : node.basis.v;
        std::vector<DensityOperator> next;
        for (const auto& rho : f.states) next.push_back(collapse(rho, pos, dir));
        require(node.child[outcome] >= 0 &&
                    node.child[outcome] < static_cast<int>(tree.nodes.size()),
                "protocol tree child index out of range");
        stack.push_back({node.child[outcome], rest, std::move(next),
                         f.outcome + (outcome ? '1' : '0')});
      }
    } else {
      if (node.type == ProtocolTree::Node::Type::Identified)
        check.partition[node.label].push_back(f.outcome);
      for (std::size_t k = 0; k < states.size(); ++k) {
        double mass = std::max(0.0, f.states[k].trace());
        if (node.type == ProtocolTree::Node::Type::Identified && node.label == states[k].label)
          own_mass[k] += mass;
      }
    }
  }
  double min_own = 1.0;
  for (double m : own_mass) min_own = std::min(min_own, m);
  check.success_probability = min_own;
  check.valid = min_own >= 1.0 - 1e-9;
  for (auto& [label, outcomes] : check.partition) std::sort(outcomes.begin(), outcomes.end());
  (void)cfg;
  return check;
}

std::vector<OutcomeProduct> protocol_to_product_basis(const ProtocolTree& tree) {
  require(tree.root >= 0 && tree.root < static_cast<int>(tree.nodes.size()),
          "protocol tree has no valid root");
  int n = tree.n_qubits;
  std::vector<OutcomeProduct> out;

  struct Frame {
    int node; // -1 once past the tree, padding remains
    std::vector<std::optional<PureState>> factors;
    std::string outcome;
    std::vector<int> order;
  };
  std::vector<Frame> stack{{tree.root, std::vector<std::optional<PureState>>(n), "", {}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.node >= 0 &&
        tree.nodes[f.node].type == ProtocolTree::Node::Type::Measure) {
      const auto& node = tree.nodes[f.node];
      for (int outcome = 1; outcome >= 0; --outcome) {
        Frame next = f;
        next.factors[node.party - 1] = outcome ? node.basis.v_perp : node.basis.v;
        next.outcome += outcome ? '1' : '0';
        next.order.push_back(node.party);
        next.node = node.child[outcome];
        stack.push_back(std::move(next));
      }
      continue;
    }
    // Pad the first unmeasured party with the computational basis.
    int missing = -1;
    for (int q = 1; q <= n && missing < 0; ++q)
      if (!f.factors[q - 1]) missing = q;
    if (missing < 0) {
      std::vector<PureState> factors;
      for (auto& opt : f.factors) factors.push_back(*opt);
      out.push_back({f.outcome, f.order, tensor(factors)});
      continue;
    }
    for (int bit = 1; bit >= 0; --bit) {
      Frame next = f;
      next.node = -1;
      next.factors[missing - 1] = basis_state(1, bit);
      next.outcome += bit ? '1' : '0';
      next.order.push_back(missing);
      stack.push_back(std::move(next));
    }
  }
  std::sort(out.begin(), out.end(), [](const OutcomeProduct& a, const OutcomeProduct& b) {
    return a.outcome < b.outcome;
  });
  return out;
}

} // namespace locq
