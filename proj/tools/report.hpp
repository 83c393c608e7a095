#pragma once

#include <string>

#include "locq/corpus.hpp"
#include "locq/lpmcc.hpp"
#include "locq/prodfind.hpp"
#include "locq/schmidt.hpp"
#include "locq/upb.hpp"

namespace locq::cli {

struct RunConfig {
  Tolerances tol;
  int circle_samples = 64;
  int restarts = 512;
  int witness_restarts = 64;
  std::uint64_t seed = 0;
  int max_qubits = 4;
  std::string format = "text"; // text | json

  SearchConfig search() const;
};

// All numeric output carries 12 significant digits.
std::string sig12(double x);
double round12(double x);

std::string verdict_name(Verdict v);
int verdict_exit_code(Verdict v);

struct DecideReport {
  Decision decision;
  ProtocolCheck check; // populated for distinguishable verdicts
};

std::string render_decide(const DecideReport& rep, const RunConfig& cfg);

struct SchmidtReport {
  std::vector<std::pair<std::string, SchmidtBounds>> per_state;
  SumCriterion sum;
};

std::string render_schmidt(const SchmidtReport& rep, const RunConfig& cfg);

std::string render_products(const ProductSearchResult& res, const Subspace& span,
                            const RunConfig& cfg);

std::string render_upb_check(const UpbCheckResult& res, const RunConfig& cfg);

std::string render_scan(const upb::ScanReport& rep, const RunConfig& cfg);

std::string render_corpus(const CorpusEntry& entry, const RunConfig& cfg);

} // namespace locq::cli
