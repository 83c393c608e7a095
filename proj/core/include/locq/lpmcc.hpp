#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "locq/config.hpp"
#include "locq/qstate.hpp"

namespace locq {

// One binary projective measurement on a qubit.
struct MeasurementBasis {
  int party = 1; // original qubit index
  PureState v;
  PureState v_perp;
  Eigen::Vector3d bloch{0, 0, 1}; // r(v); r(v_perp) is the exact negative

  static MeasurementBasis from_direction(int party, const PureState& v);
  static MeasurementBasis from_bloch(int party, const Eigen::Vector3d& r);
};

// Solution set of the orthogonality-keeping plane constraints for one party,
// classified by the rank of the stacked plane normals: 0 -> Sphere,
// 1 -> Circle, 2 -> Finite (one antipodal pair = one basis), 3 -> Empty.
// Verified annihilation bases are folded into `finite` for Empty/Finite
// kinds and listed separately for continuous kinds (they lie inside).
struct CandidateSet {
  enum class Kind { Empty, Finite, Circle, Sphere };
  Kind kind = Kind::Sphere;
  std::vector<MeasurementBasis> finite;
  Eigen::Vector3d circle_u{1, 0, 0}, circle_v{0, 1, 0}; // span of the circle plane
  std::vector<Eigen::Vector3d> constraints;             // unit plane normals
  std::vector<MeasurementBasis> annihilation;           // verified, continuous kinds
};

// Adaptive protocol: each node measures one unmeasured qubit, children are
// the two outcomes, leaves identify a label or fail.
struct ProtocolTree {
  struct Node {
    enum class Type { Measure, Identified, Fail };
    Type type = Type::Fail;
    int party = 0;           // Measure nodes
    MeasurementBasis basis;  // Measure nodes
    int child[2] = {-1, -1}; // Measure nodes: outcome 0 / outcome 1
    std::string label;       // Identified leaves
    std::vector<std::string> surviving; // labels alive entering this node
  };
  std::vector<Node> nodes;
  int root = -1;
  int n_qubits = 0;
};

struct LabeledState {
  std::string label;
  DensityOperator rho;
};

struct SearchStats {
  long nodes_explored = 0;
  long families_sampled = 0;
};

enum class Verdict { Distinguishable, Indistinguishable, Inconclusive };

struct Decision {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<ProtocolTree> tree;      // Distinguishable
  std::vector<std::string> certificate;  // Indistinguishable evidence
  std::string caveat;                    // Inconclusive reason
  SearchStats stats;
};

// All orthogonality-keeping bases for `party`, from the Bloch-plane
// constraints of every support-vector pair, plus direct-verified
// annihilation candidates. States must be pairwise orthogonal.
CandidateSet ok_candidates(const std::vector<DensityOperator>& states, int party,
                           const SearchConfig& cfg = {});

// Depth-first search over adaptive local projective protocols. Sound by
// direct verification of every emitted tree; Indistinguishable only after
// exhausting finite candidate sets (a certified Schmidt-sum excess also
// suffices); failures that pruned sampled continuous families downgrade to
// Inconclusive.
Decision decide(const std::vector<LabeledState>& states, const SearchConfig& cfg = {});

struct FirstMoverResult {
  bool exists = false;
  std::optional<MeasurementBasis> basis;
};

// Can `party` open the protocol with an orthogonality-keeping measurement
// whose both branches stay pairwise orthogonal?
FirstMoverResult first_mover_exists(const std::vector<DensityOperator>& states, int party,
                                    const SearchConfig& cfg = {});

struct ProtocolCheck {
  bool valid = false;
  double success_probability = 0.0;
  std::map<std::string, std::vector<std::string>> partition; // label -> outcomes
};

// Simulates every branch of the tree against the states; valid iff each
// state's mass reaches only its own Identified leaves.
ProtocolCheck verify_protocol(const ProtocolTree& tree, const std::vector<LabeledState>& states,
                              const SearchConfig& cfg = {});

struct OutcomeProduct {
  std::string outcome;          // outcome bits in measurement order
  std::vector<int> party_order; // measured parties in path order
  PureState state;
};

// The orthonormal product basis induced by the tree, with unmeasured
// parties padded by the computational basis.
std::vector<OutcomeProduct> protocol_to_product_basis(const ProtocolTree& tree);

} // namespace locq
