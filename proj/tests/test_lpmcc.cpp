#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "locq/corpus.hpp"
#include "locq/lpmcc.hpp"
#include "locq/prodfind.hpp"
#include "locq/rng.hpp"
#include "locq/upb.hpp"
#include "support/oracles.hpp"

using namespace locq;

namespace {

DensityOperator pure_density(const PureState& psi) { return DensityOperator::from_pure(psi); }

PureState bell() {
  Vec v = Vec::Zero(4);
  v(0) = v(3) = 1.0;
  return PureState{2, v}.normalized();
}

PureState plus_plus() {
  Vec v = Vec::Ones(4);
  return PureState{2, v}.normalized();
}

std::vector<LabeledState> computational_set(int n) {
  std::vector<LabeledState> out;
  for (unsigned i = 0; i < (1u << n); ++i)
    out.push_back({"b" + std::to_string(i), pure_density(basis_state(n, i))});
  return out;
}

bool all_computational(const ProtocolTree& tree) {
  for (const auto& node : tree.nodes)
    if (node.type == ProtocolTree::Node::Type::Measure)
      if (std::abs(std::abs(node.basis.bloch.z()) - 1.0) > 1e-9) return false;
  return true;
}

} // namespace

TEST_CASE("candidate sets for canonical pairs") {
  auto sphere = ok_candidates({pure_density(basis_state(2, 0)), pure_density(basis_state(2, 3))}, 1);
  CHECK(sphere.kind == CandidateSet::Kind::Sphere);

  auto finite = ok_candidates({pure_density(basis_state(2, 0)), pure_density(basis_state(2, 2))}, 1);
  REQUIRE(finite.kind == CandidateSet::Kind::Finite);
  REQUIRE(finite.finite.size() == 1);
  CHECK(std::abs(std::abs(finite.finite[0].bloch.z()) - 1.0) < 1e-9);

  auto upb = corpus_get("upb3");
  std::vector<DensityOperator> members;
  for (const auto& s : upb.states) members.push_back(s.rho);
  for (int party = 1; party <= 3; ++party) {
    auto cs = ok_candidates(members, party);
    CHECK(cs.kind == CandidateSet::Kind::Empty);
    CHECK(cs.finite.empty()); // annihilation candidates all break orthogonality
  }

  CHECK_THROWS_AS(
      ok_candidates({pure_density(basis_state(2, 0)), pure_density(plus_plus())}, 1),
      std::invalid_argument);
}

TEST_CASE("finite candidates satisfy every plane constraint") {
  auto gen = rng::engine(41);
  int found = 0;
  for (int t = 0; t < 40 && found < 15; ++t) {
    int n = 2 + static_cast<int>(gen() % 2);
    int count = 2 + static_cast<int>(gen() % 3);
    auto states = testsup::random_orthogonal_set(n, count, gen, t % 2 == 0);
    for (int party = 1; party <= n; ++party) {
      auto cs = ok_candidates(states, party);
      if (cs.kind != CandidateSet::Kind::Finite) continue;
      ++found;
      for (const auto& b : cs.finite)
        for (const auto& normal : cs.constraints)
          CHECK(std::abs(normal.dot(b.bloch)) <= 1e-7);
    }
  }
  CHECK(found > 0);
}

TEST_CASE("grid oracle agrees with the analytic candidate sets") {
  auto gen = rng::engine(42);
  for (int t = 0; t < 10; ++t) {
    int n = 2 + static_cast<int>(gen() % 2);
    int count = 2 + static_cast<int>(gen() % 3);
    auto states = testsup::random_orthogonal_set(n, count, gen, t % 3 == 0);
    int party = 1 + static_cast<int>(gen() % n);
    auto cs = ok_candidates(states, party);
    auto agreement = testsup::grid_candidate_agreement(states, party, cs);
    INFO(agreement.detail);
    CHECK(agreement.ok);
  }
}

TEST_CASE("computational sets and the phase basis are distinguishable") {
  auto d = decide(computational_set(2));
  REQUIRE(d.verdict == Verdict::Distinguishable);
  CHECK(all_computational(*d.tree));
  auto check = verify_protocol(*d.tree, computational_set(2));
  CHECK(check.valid);
  CHECK(check.success_probability >= 1.0 - 1e-9);

  auto ub1 = corpus_get("ub1");
  auto d2 = decide(ub1.states);
  REQUIRE(d2.verdict == Verdict::Distinguishable);
  CHECK(all_computational(*d2.tree));
  auto check2 = verify_protocol(*d2.tree, ub1.states);
  CHECK(check2.valid);
  CHECK(check2.success_probability >= 1.0 - 1e-9);
}

TEST_CASE("the canonical product basis span members are locally indistinguishable") {
  auto upb = corpus_get("upb3");
  auto d = decide(upb.states);
  CHECK(d.verdict == Verdict::Indistinguishable);
  CHECK_FALSE(d.certificate.empty());
}

TEST_CASE("first mover criterion") {
  // {|00>, |1+>}: the computational basis keeps branch orthogonality.
  Vec oneplus = Vec::Zero(4);
  oneplus(0b10) = oneplus(0b11) = 1.0;
  auto res = first_mover_exists(
      {pure_density(basis_state(2, 0)), pure_density(PureState{2, oneplus}.normalized())}, 1);
  CHECK(res.exists);
  REQUIRE(res.basis);
  CHECK(std::abs(std::abs(res.basis->bloch.z()) - 1.0) < 1e-9);

  auto pair = corpus_get("data_hiding_pair");
  for (int party : {1, 2}) {
    auto hiding = first_mover_exists({pair.states[0].rho, pair.states[1].rho}, party);
    CHECK_FALSE(hiding.exists);
  }

  // Two orthogonal pure states always admit a first move; for {Bell, |01>}
  // the computational basis works on either qubit, confirmed against the
  // brute-force grid oracle.
  std::vector<DensityOperator> bell_pair = {pure_density(bell()),
                                            pure_density(basis_state(2, 1))};
  for (int party : {1, 2}) {
    auto r = first_mover_exists(bell_pair, party);
    CHECK(r.exists);
    testsup::GridOracle oracle(bell_pair, party);
    REQUIRE(r.basis);
    CHECK(oracle.residual(r.basis->v) <= 1e-8);
  }
}

TEST_CASE("verify_protocol accounts for every branch") {
  auto states = computational_set(2);
  auto d = decide(states);
  REQUIRE(d.tree);

  // The same tree applied to different states with clashing labels leaks
  // the Bell state's mass into two differently labeled leaves.
  std::vector<LabeledState> other = {{"b0", pure_density(bell())},
                                     {"b1", pure_density(basis_state(2, 1))}};
  auto check = verify_protocol(*d.tree, other);
  CHECK_FALSE(check.valid);
  CHECK(check.success_probability <= 0.5 + 1e-9);

  // Round trip on a distinguishable set.
  auto ub1 = corpus_get("ub1");
  auto d2 = decide(ub1.states);
  auto check2 = verify_protocol(*d2.tree, ub1.states);
  CHECK(check2.valid);
  for (const auto& [label, outcomes] : check2.partition) CHECK(outcomes.size() == 2);

  // Measuring one party twice on a path is a structural error.
  ProtocolTree broken;
  broken.n_qubits = 2;
  ProtocolTree::Node leaf;
  leaf.type = ProtocolTree::Node::Type::Identified;
  leaf.label = "b0";
  broken.nodes.assign(4, leaf);
  ProtocolTree::Node inner;
  inner.type = ProtocolTree::Node::Type::Measure;
  inner.party = 1;
  inner.basis = MeasurementBasis::from_bloch(1, {0, 0, 1});
  inner.child[0] = 0;
  inner.child[1] = 1;
  broken.nodes.push_back(inner); // node 4
  ProtocolTree::Node root = inner;
  root.child[0] = 4; // measures party 1 again underneath
  root.child[1] = 3;
  broken.nodes.push_back(root);
  broken.root = 5;
  CHECK_THROWS_AS(verify_protocol(broken, states), std::invalid_argument);
}

TEST_CASE("protocol trees induce orthonormal product bases") {
  auto d = decide(computational_set(2));
  auto products = protocol_to_product_basis(*d.tree);
  REQUIRE(products.size() == 4);
  for (const auto& p : products) CHECK(is_product(p.state));

  // Conditional tree: party 2 measures {|+>,|->} under outcome 0.
  ProtocolTree tree;
  tree.n_qubits = 2;
  ProtocolTree::Node id0, id1;
  id0.type = ProtocolTree::Node::Type::Identified;
  id0.label = "a";
  id1 = id0;
  id1.label = "b";
  tree.nodes.push_back(id0); // 0
  tree.nodes.push_back(id1); // 1
  ProtocolTree::Node plus_node;
  plus_node.type = ProtocolTree::Node::Type::Measure;
  plus_node.party = 2;
  plus_node.basis = MeasurementBasis::from_bloch(2, {1, 0, 0});
  plus_node.child[0] = 0;
  plus_node.child[1] = 1;
  tree.nodes.push_back(plus_node); // 2
  ProtocolTree::Node comp_node = plus_node;
  comp_node.party = 2;
  comp_node.basis = MeasurementBasis::from_bloch(2, {0, 0, 1});
  tree.nodes.push_back(comp_node); // 3
  ProtocolTree::Node root;
  root.type = ProtocolTree::Node::Type::Measure;
  root.party = 1;
  root.basis = MeasurementBasis::from_bloch(1, {0, 0, 1});
  root.child[0] = 2;
  root.child[1] = 3;
  tree.nodes.push_back(root); // 4
  tree.root = 4;
  auto prods = protocol_to_product_basis(tree);
  REQUIRE(prods.size() == 4);
  Vec zp = Vec::Zero(4), zm = Vec::Zero(4);
  zp(0b00) = zp(0b01) = 1.0;
  zm(0b00) = 1.0;
  zm(0b01) = -1.0;
  std::vector<PureState> expected = {PureState{2, zp}.normalized(),
                                     PureState{2, zm}.normalized(), basis_state(2, 0b10),
                                     basis_state(2, 0b11)};
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& p : prods)
      if (fubini_study_distance(p.state, e) < 1e-9) found = true;
    CHECK(found);
  }

  // Partition blocks span the states they identify.
  auto ub1 = corpus_get("ub1");
  auto d2 = decide(ub1.states);
  auto check = verify_protocol(*d2.tree, ub1.states);
  auto basis = protocol_to_product_basis(*d2.tree);
  CHECK(basis.size() == 8);
  for (const auto& s : ub1.states) {
    Mat block = Mat::Zero(8, 8);
    for (const auto& p : basis) {
      bool in_block = false;
      for (const auto& o : check.partition[s.label])
        if (o == p.outcome) in_block = true;
      if (in_block) block += p.state.amps * p.state.amps.adjoint();
    }
    Mat supp = support(s.rho).projector;
    CHECK(((Mat::Identity(8, 8) - block) * supp).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("soundness: every distinguishable verdict verifies") {
  auto gen = rng::engine(43);
  for (int t = 0; t < 30; ++t) {
    int n = 2 + static_cast<int>(gen() % 2);
    int count = 2 + static_cast<int>(gen() % 3);
    auto densities = testsup::random_orthogonal_set(n, count, gen, false);
    std::vector<LabeledState> states;
    for (std::size_t i = 0; i < densities.size(); ++i)
      states.push_back({"s" + std::to_string(i), densities[i]});
    auto d = decide(states);
    if (d.verdict == Verdict::Distinguishable) {
      auto check = verify_protocol(*d.tree, states);
      CHECK(check.valid);
      CHECK(check.success_probability >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("two orthogonal pure states are always distinguishable") {
  auto gen = rng::engine(44);
  for (int t = 0; t < 100; ++t) {
    int n = 2 + (t % 2);
    auto vs = testsup::random_orthonormal(n, 2, gen);
    std::vector<LabeledState> states = {{"a", pure_density(vs[0])}, {"b", pure_density(vs[1])}};
    auto d = decide(states);
    CHECK(d.verdict == Verdict::Distinguishable);
  }
}

TEST_CASE("verdicts are invariant under qubit relabeling") {
  auto gen = rng::engine(45);
  auto upb = corpus_get("upb3");
  std::vector<std::vector<int>> perms = {{2, 1, 3}, {3, 1, 2}, {1, 3, 2}};
  for (const auto& perm : perms) {
    std::vector<LabeledState> permuted;
    for (const auto& s : upb.states) permuted.push_back({s.label, permute_qubits(s.rho, perm)});
    CHECK(decide(permuted).verdict == Verdict::Indistinguishable);
  }
  for (int t = 0; t < 10; ++t) {
    int n = 3;
    auto densities = testsup::random_orthogonal_set(n, 2 + (t % 2), gen, false);
    std::vector<LabeledState> states, permuted;
    for (std::size_t i = 0; i < densities.size(); ++i) {
      states.push_back({"s" + std::to_string(i), densities[i]});
      permuted.push_back({"s" + std::to_string(i), permute_qubits(densities[i], {2, 3, 1})});
    }
    CHECK(decide(states).verdict == decide(permuted).verdict);
  }
}

TEST_CASE("triples with two ghz-type members are indistinguishable") {
  auto gen = rng::engine(46);
  for (int t = 0; t < 20; ++t) {
    int n = 2 + (t % 2);
    std::uniform_real_distribution<double> uni(0.1, 0.9);
    double a = uni(gen);
    Cx alpha = std::sqrt(a);
    Cx beta = std::polar(std::sqrt(1 - a), 2 * M_PI * uni(gen));
    Vec g1 = Vec::Zero(1 << n), g2 = Vec::Zero(1 << n);
    g1(0) = alpha;
    g1((1 << n) - 1) = beta;
    g2(0) = std::conj(beta);
    g2((1 << n) - 1) = -std::conj(alpha);
    Vec third = rng::gaussian_vector(1 << n, gen);
    third(0) = 0;
    third((1 << n) - 1) = 0;
    std::vector<LabeledState> states = {
        {"g1", pure_density({n, g1})},
        {"g2", pure_density({n, g2})},
        {"x", pure_density(PureState{n, third}.normalized())}};
    CHECK(decide(states).verdict == Verdict::Indistinguishable);
  }
}

TEST_CASE("three single-excitation-type states are indistinguishable") {
  auto gen = rng::engine(47);
  for (int t = 0; t < 20; ++t) {
    Mat u = rng::haar_unitary(3, gen);
    bool ok = true;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        if (std::abs(u(r, c)) < 1e-6) ok = false;
    if (!ok) continue;
    std::vector<LabeledState> states;
    for (int k = 0; k < 3; ++k) {
      Vec v = Vec::Zero(8);
      v(0b001) = u(k, 0);
      v(0b010) = u(k, 1);
      v(0b100) = u(k, 2);
      states.push_back({"w" + std::to_string(k), pure_density({3, v})});
    }
    CHECK(decide(states).verdict == Verdict::Indistinguishable);
  }
}

TEST_CASE("size validation") {
  auto states = computational_set(2);
  SearchConfig cfg;
  cfg.max_qubits = 1;
  CHECK_THROWS_AS(decide(states, cfg), std::invalid_argument);
  std::vector<LabeledState> dup = {states[0], states[0]};
  CHECK_THROWS_AS(decide(dup), std::invalid_argument);
}
