#include "stateio.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace locq::cli {

using json = nlohmann::ordered_json;

namespace {

Cx parse_complex(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument(std::string("expected [re, im] pair in ") + where);
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_out(const Cx& c) { return json::array({c.real(), c.imag()}); }

} // namespace

std::vector<LabeledState> StateFile::labeled() const {
  std::vector<LabeledState> out;
  for (const auto& s : states) out.push_back({s.label, s.rho});
  return out;
}

std::vector<DensityOperator> StateFile::densities() const {
  std::vector<DensityOperator> out;
  for (const auto& s : states) out.push_back(s.rho);
  return out;
}

std::vector<PureState> StateFile::pure_states() const {
  std::vector<PureState> out;
  for (const auto& s : states) {
    if (!s.pure)
      throw std::invalid_argument("this command requires pure states, but '" + s.label +
                                  "' is mixed");
    out.push_back(s.psi);
  }
  return out;
}

StateFile parse_state_file(const std::string& text, const Tolerances& tol) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("state file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("qubits") || !j.contains("states"))
    throw std::invalid_argument("state file must be an object with 'qubits' and 'states'");
  if (!j["qubits"].is_number_integer())
    throw std::invalid_argument("'qubits' must be an integer");
  StateFile file;
  file.qubits = j["qubits"].get<int>();
  if (file.qubits < 1 || file.qubits > 10)
    throw std::invalid_argument("'qubits' out of supported range");
  int dim = 1 << file.qubits;
  if (!j["states"].is_array() || j["states"].empty())
    throw std::invalid_argument("'states' must be a nonempty array");

  int unnamed = 0;
  for (const auto& js : j["states"]) {
    if (!js.is_object() || !js.contains("kind"))
      throw std::invalid_argument("each state needs a 'kind' of 'pure' or 'mixed'");
    FileState fs;
    fs.label = js.contains("label") ? js["label"].get<std::string>()
                                    : "state" + std::to_string(++unnamed);
    std::string kind = js["kind"].get<std::string>();
    if (kind == "pure") {
      if (!js.contains("amps") || !js["amps"].is_array() ||
          static_cast<int>(js["amps"].size()) != dim)
        throw std::invalid_argument("pure state '" + fs.label + "' needs 2^n 'amps' pairs");
      Vec amps(dim);
      for (int i = 0; i < dim; ++i) amps(i) = parse_complex(js["amps"][i], "amps");
      PureState psi{file.qubits, amps};
      double norm = psi.norm();
      if (norm <= tol.vanish)
        throw std::invalid_argument("pure state '" + fs.label + "' is the zero vector");
      if (std::abs(norm * norm - 1.0) > tol.norm)
        file.warnings.push_back("state '" + fs.label + "' was normalized on ingest");
      fs.pure = true;
      fs.psi = psi.normalized();
      fs.rho = DensityOperator::from_pure(fs.psi);
    } else if (kind == "mixed") {
      if (!js.contains("matrix") || !js["matrix"].is_array() ||
          static_cast<int>(js["matrix"].size()) != dim)
        throw std::invalid_argument("mixed state '" + fs.label + "' needs a 2^n x 2^n 'matrix'");
      Mat m(dim, dim);
      for (int r = 0; r < dim; ++r) {
        const auto& row = js["matrix"][r];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
          throw std::invalid_argument("mixed state '" + fs.label + "' has a malformed row");
        for (int c = 0; c < dim; ++c) m(r, c) = parse_complex(row[c], "matrix");
      }
      DensityOperator rho{file.qubits, m};
      rho.validate(tol, false);
      double tr = rho.trace();
      if (tr <= tol.vanish)
        throw std::invalid_argument("mixed state '" + fs.label + "' has vanishing trace");
      if (std::abs(tr - 1.0) > tol.norm)
        file.warnings.push_back("state '" + fs.label + "' was normalized on ingest");
      rho.mat /= tr;
      fs.pure = false;
      fs.rho = rho;
    } else {
      throw std::invalid_argument("unknown state kind '" + kind + "'");
    }
    file.states.push_back(std::move(fs));
  }
  return file;
}

std::string write_state_file(int qubits, const std::vector<LabeledState>& states) {
  json j;
  j["qubits"] = qubits;
  j["states"] = json::array();
  for (const auto& s : states) {
    json js;
    js["label"] = s.label;
    Eigen::SelfAdjointEigenSolver<Mat> es((s.rho.mat + s.rho.mat.adjoint()) / 2.0);
    int dim = s.rho.dim();
    bool rank1 = true;
    for (int k = 0; k < dim - 1; ++k)
      if (es.eigenvalues()(k) > 1e-10) rank1 = false;
    if (rank1) {
      Vec v = es.eigenvectors().col(dim - 1);
      // Deterministic gauge: largest entry real positive.
      int imax = 0;
      for (int i = 0; i < dim; ++i)
        if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
      if (std::abs(v(imax)) > 0) v *= std::conj(v(imax)) / std::abs(v(imax));
      js["kind"] = "pure";
      js["amps"] = json::array();
      for (int i = 0; i < dim; ++i) js["amps"].push_back(complex_out(v(i)));
    } else {
      js["kind"] = "mixed";
      js["matrix"] = json::array();
      for (int r = 0; r < dim; ++r) {
        json row = json::array();
        for (int c = 0; c < dim; ++c) row.push_back(complex_out(s.rho.mat(r, c)));
        js["matrix"].push_back(row);
      }
    }
    j["states"].push_back(std::move(js));
  }
  return j.dump(2) + "\n";
}

} // namespace locq::cli
