#pragma once

#include <map>
#include <string>
#include <vector>

#include "locq/lpmcc.hpp"
#include "locq/qstate.hpp"

namespace locq {

// An expected check outcome with a short factual note printed on failure.
struct CorpusExpectation {
  std::string check;
  std::string expected;
  std::string note;
};

struct CorpusEntry {
  std::string name;
  int n_qubits = 0;
  std::vector<LabeledState> states; // normalized; subspaces given as a basis
  std::map<std::string, double> params;
  std::vector<CorpusExpectation> expected;
};

struct CorpusParams {
  std::vector<double> angles; // upb3: three angles in (0, pi/2)
  std::vector<double> phases; // ub1/ub2: four ordered phases in [0, 2pi)
  int n = 3;                  // ghz / w qubit count
  Cx alpha{M_SQRT1_2, 0.0};   // ghz amplitudes, both nonzero
  Cx beta{M_SQRT1_2, 0.0};
};

// Canonical named constructions, each paired with its expected verdicts.
// Throws std::invalid_argument on unknown names or out-of-range parameters.
CorpusEntry corpus_get(const std::string& name, const CorpusParams& params = {});

std::vector<std::string> corpus_names();

} // namespace locq
