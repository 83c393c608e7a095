#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "locq/corpus.hpp"
#include "locq/prodfind.hpp"
#include "locq/schmidt.hpp"
#include "locq/upb.hpp"
#include "report.hpp"
#include "stateio.hpp"

namespace locq::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Defaults may come from a JSON config file named by LOCQ_CONFIG;
// command-line flags override it.
void load_config_file(RunConfig& cfg) {
  const char* path = std::getenv("LOCQ_CONFIG");
  if (!path || !*path) return;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(std::string("LOCQ_CONFIG file not readable: ") + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("LOCQ_CONFIG is not valid JSON: ") + e.what());
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("restarts")) cfg.restarts = j["restarts"].get<int>();
  if (j.contains("circle_samples")) cfg.circle_samples = j["circle_samples"].get<int>();
  if (j.contains("witness_restarts")) cfg.witness_restarts = j["witness_restarts"].get<int>();
  if (j.contains("max_qubits")) cfg.max_qubits = j["max_qubits"].get<int>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (t.contains("norm")) cfg.tol.norm = t["norm"].get<double>();
    if (t.contains("herm")) cfg.tol.herm = t["herm"].get<double>();
    if (t.contains("orth")) cfg.tol.orth = t["orth"].get<double>();
    if (t.contains("rank")) cfg.tol.rank = t["rank"].get<double>();
    if (t.contains("plane")) cfg.tol.plane = t["plane"].get<double>();
    if (t.contains("vanish")) cfg.tol.vanish = t["vanish"].get<double>();
    if (t.contains("prod")) cfg.tol.prod = t["prod"].get<double>();
  }
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("-f,--format", cfg.format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--seed", cfg.seed, "Seed for every randomized search");
  cmd->add_option("--restarts", cfg.restarts, "Product-search restarts")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--circle-samples", cfg.circle_samples,
                  "Samples per continuous candidate family")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--witness-restarts", cfg.witness_restarts,
                  "Witness-search restarts")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-qubits", cfg.max_qubits, "Largest supported qubit count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-norm", cfg.tol.norm, "Normalization tolerance");
  cmd->add_option("--tol-herm", cfg.tol.herm, "Hermiticity tolerance");
  cmd->add_option("--tol-orth", cfg.tol.orth, "Orthogonality tolerance");
  cmd->add_option("--tol-rank", cfg.tol.rank, "Numerical rank tolerance");
  cmd->add_option("--tol-plane", cfg.tol.plane, "Constraint plane rank tolerance");
  cmd->add_option("--tol-vanish", cfg.tol.vanish, "Branch vanishing tolerance");
  cmd->add_option("--tol-prod", cfg.tol.prod, "Product reconstruction tolerance");
}

std::vector<double> parse_list(const std::string& text, std::size_t expected,
                               const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (...) {
      throw std::invalid_argument(std::string("cannot parse ") + what + ": " + text);
    }
  }
  if (expected && values.size() != expected)
    throw std::invalid_argument(std::string(what) + " needs " + std::to_string(expected) +
                                " comma-separated values");
  return values;
}

int cmd_decide(const std::string& path, const RunConfig& cfg, std::ostream& out,
               std::ostream& err) {
  StateFile file = parse_state_file(read_file(path), cfg.tol);
  for (const auto& w : file.warnings) err << "warning: " << w << "\n";
  DecideReport rep;
  rep.decision = decide(file.labeled(), cfg.search());
  if (rep.decision.tree)
    rep.check = verify_protocol(*rep.decision.tree, file.labeled(), cfg.search());
  out << render_decide(rep, cfg);
  return verdict_exit_code(rep.decision.verdict);
}

int cmd_schmidt(const std::string& path, const RunConfig& cfg, std::ostream& out,
                std::ostream& err) {
  StateFile file = parse_state_file(read_file(path), cfg.tol);
  for (const auto& w : file.warnings) err << "warning: " << w << "\n";
  SchmidtReport rep;
  for (const auto& s : file.states)
    rep.per_state.push_back(
        {s.label, orth_schmidt_number(s.rho, 1 << file.qubits, cfg.search())});
  bool orthogonal = true;
  auto densities = file.densities();
  for (std::size_t i = 0; i < densities.size() && orthogonal; ++i)
    for (std::size_t j = i + 1; j < densities.size(); ++j)
      if (!states_orthogonal(densities[i], densities[j], 1e-8, cfg.tol.rank))
        orthogonal = false;
  if (orthogonal && densities.size() >= 2) {
    rep.sum = schmidt_sum_criterion(densities, cfg.search());
  } else {
    rep.sum.dimension_bound = 1 << file.qubits;
    for (const auto& [label, b] : rep.per_state) rep.sum.sum_lower += b.lower;
    rep.sum.passes = rep.sum.sum_lower <= rep.sum.dimension_bound;
    if (!orthogonal) err << "warning: states are not pairwise orthogonal\n";
  }
  out << render_schmidt(rep, cfg);
  return 0;
}

int cmd_products(const std::string& path, const RunConfig& cfg, std::ostream& out,
                 std::ostream& err) {
  StateFile file = parse_state_file(read_file(path), cfg.tol);
  for (const auto& w : file.warnings) err << "warning: " << w << "\n";
  Subspace span = Subspace::span(file.qubits, file.pure_states(), cfg.tol.rank);
  auto res = product_states_in_subspace(span, cfg.search());
  out << render_products(res, span, cfg);
  return 0;
}

int cmd_upb_check(const std::string& path, const RunConfig& cfg, std::ostream& out,
                  std::ostream& err) {
  StateFile file = parse_state_file(read_file(path), cfg.tol);
  for (const auto& w : file.warnings) err << "warning: " << w << "\n";
  auto res = upb_check(file.pure_states(), cfg.search());
  out << render_upb_check(res, cfg);
  return 0;
}

int cmd_scan(const std::string& angles_text, int trials, const RunConfig& cfg,
             std::ostream& out) {
  auto values = parse_list(angles_text, 3, "--angles");
  upb::UpbAngles angles{values[0], values[1], values[2]};
  auto rep = upb::basis_scan(angles, trials, cfg.seed, cfg.search());
  out << render_scan(rep, cfg);
  return 0;
}

int cmd_corpus(const std::string& name, bool emit, const std::string& angles_text,
               const std::string& phases_text, int n_override, const RunConfig& cfg,
               std::ostream& out) {
  CorpusParams params;
  if (!angles_text.empty()) params.angles = parse_list(angles_text, 3, "--angles");
  if (!phases_text.empty()) params.phases = parse_list(phases_text, 4, "--phases");
  if (n_override > 0) params.n = n_override;
  CorpusEntry entry = corpus_get(name, params);
  if (emit) {
    out << write_state_file(entry.n_qubits, entry.states);
    return 0;
  }
  out << render_corpus(entry, cfg);
  return 0;
}

} // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"LOCC distinguishability of multi-qubit states"};
  app.require_subcommand(1);

  RunConfig cfg;
  try {
    load_config_file(cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::string file_decide, file_schmidt, file_products, file_upb;
  std::string angles_text, phases_text, corpus_name;
  int trials = 50;
  int corpus_n = 0;
  bool emit = false;

  auto* decide_cmd = app.add_subcommand("decide", "Decide LOCC distinguishability");
  decide_cmd->add_option("file", file_decide, "State file")->required();
  add_common_flags(decide_cmd, cfg);

  auto* schmidt_cmd =
      app.add_subcommand("schmidt", "Orthogonal Schmidt bounds and the sum criterion");
  schmidt_cmd->add_option("file", file_schmidt, "State file")->required();
  add_common_flags(schmidt_cmd, cfg);

  auto* products_cmd =
      app.add_subcommand("products", "Product states in the span of the input states");
  products_cmd->add_option("file", file_products, "State file (pure states)")->required();
  add_common_flags(products_cmd, cfg);

  auto* upb_cmd = app.add_subcommand("upb-check", "Orthonormal-product and unextendibility checks");
  upb_cmd->add_option("file", file_upb, "State file (pure states)")->required();
  add_common_flags(upb_cmd, cfg);

  auto* scan_cmd = app.add_subcommand("scan-basis", "Decide random orthonormal bases of a UPB span");
  scan_cmd->add_option("--angles", angles_text, "Three UPB angles, comma separated")->required();
  scan_cmd->add_option("--trials", trials, "Number of random bases")->check(CLI::PositiveNumber);
  add_common_flags(scan_cmd, cfg);

  auto* corpus_cmd = app.add_subcommand("corpus", "Named constructions with expected verdicts");
  corpus_cmd->add_option("name", corpus_name, "Entry name")->required();
  corpus_cmd->add_flag("--emit", emit, "Emit the entry as a state file");
  corpus_cmd->add_option("--angles", angles_text, "Angle parameters, comma separated");
  corpus_cmd->add_option("--phases", phases_text, "Phase parameters, comma separated");
  corpus_cmd->add_option("--n", corpus_n, "Qubit count for ghz/w entries");
  add_common_flags(corpus_cmd, cfg);

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) { // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (decide_cmd->parsed()) return cmd_decide(file_decide, cfg, out, err);
    if (schmidt_cmd->parsed()) return cmd_schmidt(file_schmidt, cfg, out, err);
    if (products_cmd->parsed()) return cmd_products(file_products, cfg, out, err);
    if (upb_cmd->parsed()) return cmd_upb_check(file_upb, cfg, out, err);
    if (scan_cmd->parsed()) return cmd_scan(angles_text, trials, cfg, out);
    if (corpus_cmd->parsed())
      return cmd_corpus(corpus_name, emit, angles_text, phases_text, corpus_n, cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

} // namespace locq::cli
