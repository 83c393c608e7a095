#pragma once

#include <string>
#include <vector>

#include "locq/config.hpp"
#include "locq/lpmcc.hpp"
#include "locq/qstate.hpp"

namespace locq::cli {

// Parsed state file. Pure entries keep their amplitude vectors so emission
// round-trips; every state is normalized on ingest (with a warning).
struct FileState {
  std::string label;
  bool pure = true;
  PureState psi;       // valid when pure
  DensityOperator rho; // always valid
};

struct StateFile {
  int qubits = 0;
  std::vector<FileState> states;
  std::vector<std::string> warnings;

  std::vector<LabeledState> labeled() const;
  std::vector<DensityOperator> densities() const;
  std::vector<PureState> pure_states() const; // throws if any entry is mixed
};

// Throws std::invalid_argument with a diagnostic on malformed input.
StateFile parse_state_file(const std::string& text, const Tolerances& tol = {});

std::string write_state_file(int qubits, const std::vector<LabeledState>& states);

} // namespace locq::cli
