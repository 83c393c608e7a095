#include "locq/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "locq/upb.hpp"

namespace locq {

namespace {

PureState from_terms(int n, const std::vector<std::pair<unsigned, Cx>>& terms) {
  Vec v = Vec::Zero(1 << n);
  for (const auto& [idx, amp] : terms) v(idx) = amp;
  return PureState{n, v}.normalized();
}

LabeledState pure_entry(const std::string& label, const PureState& psi) {
  return {label, DensityOperator::from_pure(psi.normalized())};
}

std::vector<double> ub_phases_or_default(const CorpusParams& p) {
  std::vector<double> phases = p.phases;
  if (phases.empty()) phases = {0.0, M_PI / 5, M_PI / 3, M_PI / 2};
  if (phases.size() != 4)
    throw std::invalid_argument("ub entries take exactly four phases");
  if (!(phases[0] >= 0 && phases[0] <= phases[1] && phases[1] <= phases[2] &&
        phases[2] <= phases[3] && phases[3] < 2 * M_PI))
    throw std::invalid_argument("ub phases must satisfy 0 <= t1 <= t2 <= t3 <= t4 < 2pi");
  if (std::abs((phases[3] - phases[2]) - (phases[1] - phases[0])) < 1e-12)
    throw std::invalid_argument("ub phases must satisfy t4 - t3 != t2 - t1");
  return phases;
}

std::vector<LabeledState> ub_states(const std::vector<double>& t, double sign) {
  std::vector<LabeledState> out;
  auto phase = [&](int k) { return sign * std::polar(1.0, t[k]); };
  out.push_back(pure_entry("state1", from_terms(3, {{0b000, 1.0}, {0b111, phase(0)}})));
  out.push_back(pure_entry("state2", from_terms(3, {{0b001, 1.0}, {0b110, phase(1)}})));
  out.push_back(pure_entry("state3", from_terms(3, {{0b010, 1.0}, {0b101, phase(2)}})));
  out.push_back(pure_entry("state4", from_terms(3, {{0b011, 1.0}, {0b100, phase(3)}})));
  return out;
}

upb::UpbAngles upb_angles_or_default(const CorpusParams& p) {
  upb::UpbAngles a{M_PI / 4, M_PI / 3, M_PI / 6};
  if (!p.angles.empty()) {
    if (p.angles.size() != 3) throw std::invalid_argument("upb3 takes exactly three angles");
    a = {p.angles[0], p.angles[1], p.angles[2]};
  }
  a.validate();
  return a;
}

} // namespace

std::vector<std::string> corpus_names() {
  return {"ghz", "w", "upb3", "ub1", "ub2", "s3", "s5", "data_hiding_pair"};
}

CorpusEntry corpus_get(const std::string& name_in, const CorpusParams& params) {
  std::string name = name_in;
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  CorpusEntry entry;
  entry.name = name;

  if (name == "ghz") {
    if (std::abs(params.alpha) < 1e-12 || std::abs(params.beta) < 1e-12)
      throw std::invalid_argument("ghz needs two nonzero amplitudes");
    if (params.n < 2 || params.n > 4)
      throw std::invalid_argument("ghz supports 2..4 qubits");
    entry.n_qubits = params.n;
    entry.states.push_back(pure_entry(
        "ghz", from_terms(params.n, {{0u, params.alpha},
                                     {static_cast<unsigned>((1 << params.n) - 1), params.beta}})));
    entry.params["n"] = params.n;
    entry.expected.push_back({"schmidt_exact", "2", "two-term superposition of orthogonal products"});
    return entry;
  }

  if (name == "w") {
    if (params.n < 2 || params.n > 4) throw std::invalid_argument("w supports 2..4 qubits");
    entry.n_qubits = params.n;
    std::vector<std::pair<unsigned, Cx>> terms;
    for (int k = 0; k < params.n; ++k) terms.push_back({1u << k, 1.0});
    entry.states.push_back(pure_entry("w", from_terms(params.n, terms)));
    entry.params["n"] = params.n;
    entry.expected.push_back(
        {"schmidt_upper", std::to_string(params.n), "spanned by the single-excitation basis states"});
    if (params.n == 3)
      entry.expected.push_back({"schmidt_lower", "3", "no two orthogonal products span it"});
    return entry;
  }

  if (name == "upb3") {
    upb::UpbAngles a = upb_angles_or_default(params);
    entry.n_qubits = 3;
    auto members = upb::canonical_upb(a);
    const char* labels[4] = {"s1", "s2", "s3", "s4"};
    for (int k = 0; k < 4; ++k) entry.states.push_back(pure_entry(labels[k], members[k]));
    entry.params = {{"theta1", a.theta1}, {"theta2", a.theta2}, {"theta3", a.theta3}};
    entry.expected.push_back(
        {"decide", "indistinguishable", "no orthogonality-keeping first measurement survives"});
    entry.expected.push_back({"upb_check", "unextendible", "complement of the span holds no product state"});
    entry.expected.push_back({"products_in_span", "4", "the span contains exactly its four members as products"});
    return entry;
  }

  if (name == "ub1" || name == "ub2") {
    auto phases = ub_phases_or_default(params);
    entry.n_qubits = 3;
    entry.states = ub_states(phases, name == "ub1" ? +1.0 : -1.0);
    for (int k = 0; k < 4; ++k) entry.params["theta" + std::to_string(k + 1)] = phases[k];
    entry.expected.push_back({"upb_check", "unextendible",
                              "complement holds no product state for admissible phases"});
    if (name == "ub1")
      entry.expected.push_back(
          {"decide", "distinguishable", "computational measurements separate all four"});
    return entry;
  }

  if (name == "s3") {
    entry.n_qubits = 3;
    entry.states.push_back(pure_entry("psi1", from_terms(3, {{0b000, 1.0}})));
    entry.states.push_back(pure_entry("psi2", from_terms(3, {{0b100, 1.0}, {0b010, -1.0}})));
    entry.states.push_back(
        pure_entry("psi3", from_terms(3, {{0b100, 1.0}, {0b010, 1.0}, {0b001, 1.0}})));
    entry.expected.push_back({"decide", "indistinguishable",
                              "three-dimensional locally indistinguishable subspace"});
    return entry;
  }

  if (name == "s5") {
    entry.n_qubits = 3;
    entry.states.push_back(pure_entry("psi1", from_terms(3, {{0b000, 1.0}})));
    entry.states.push_back(pure_entry("psi2", from_terms(3, {{0b001, 1.0}, {0b100, -1.0}})));
    entry.states.push_back(pure_entry("psi3", from_terms(3, {{0b110, 1.0}, {0b011, -1.0}})));
    entry.states.push_back(
        pure_entry("psi4", from_terms(3, {{0b001, 1.0}, {0b010, 1.0}, {0b100, 1.0}})));
    entry.states.push_back(
        pure_entry("psi5", from_terms(3, {{0b110, 1.0}, {0b101, 1.0}, {0b011, 1.0}})));
    entry.expected.push_back(
        {"products_in_span", "1", "the only product state in the span is |000>"});
    entry.expected.push_back({"schmidt_sum", ">8", "any orthonormal basis carries at least 2*4+1 = 9"});
    entry.expected.push_back({"decide", "indistinguishable",
                              "five-dimensional locally indistinguishable subspace"});
    return entry;
  }

  if (name == "data_hiding_pair") {
    entry.n_qubits = 2;
    PureState p00 = basis_state(2, 0b00);
    PureState ppp = from_terms(2, {{0b00, 0.5}, {0b01, 0.5}, {0b10, 0.5}, {0b11, 0.5}});
    PureState oneminus = from_terms(2, {{0b10, 1.0}, {0b11, -1.0}});
    PureState minusone = from_terms(2, {{0b01, 1.0}, {0b11, -1.0}});
    entry.states.push_back(
        {"rho1", DensityOperator::mixture({{0.5, p00}, {0.5, ppp}})});
    entry.states.push_back(
        {"rho2", DensityOperator::mixture({{0.5, oneminus}, {0.5, minusone}})});
    entry.expected.push_back({"schmidt_exact", "3,3", "each mixture needs three orthogonal products"});
    entry.expected.push_back(
        {"decide", "indistinguishable", "schmidt sum 6 exceeds the two-qubit dimension 4"});
    return entry;
  }

  throw std::invalid_argument("unknown corpus entry: " + name_in);
}

} // namespace locq
