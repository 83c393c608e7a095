#include "report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace locq::cli {

using json = nlohmann::ordered_json;

SearchConfig RunConfig::search() const {
  SearchConfig s;
  s.tol = tol;
  s.circle_samples = circle_samples;
  s.restarts = restarts;
  s.witness_restarts = witness_restarts;
  s.seed = seed;
  s.max_qubits = max_qubits;
  return s;
}

std::string sig12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

double round12(double x) { return std::stod(sig12(x)); }

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Distinguishable: return "distinguishable";
    case Verdict::Indistinguishable: return "indistinguishable";
    default: return "inconclusive";
  }
}

int verdict_exit_code(Verdict v) {
  switch (v) {
    case Verdict::Distinguishable: return 0;
    case Verdict::Indistinguishable: return 3;
    default: return 4;
  }
}

namespace {

json num(double x) { return json(round12(x)); }

json complex_out(const Cx& c) { return json::array({num(c.real()), num(c.imag())}); }

json amps_out(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(complex_out(v(i)));
  return a;
}

json bloch_out(const Eigen::Vector3d& r) {
  return json::array({num(r.x()), num(r.y()), num(r.z())});
}

json config_out(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["restarts"] = cfg.restarts;
  j["circle_samples"] = cfg.circle_samples;
  j["max_qubits"] = cfg.max_qubits;
  j["tolerances"] = {{"norm", num(cfg.tol.norm)},   {"herm", num(cfg.tol.herm)},
                     {"orth", num(cfg.tol.orth)},   {"rank", num(cfg.tol.rank)},
                     {"plane", num(cfg.tol.plane)}, {"vanish", num(cfg.tol.vanish)},
                     {"prod", num(cfg.tol.prod)}};
  return j;
}

json protocol_node_out(const ProtocolTree& tree, int idx) {
  const auto& node = tree.nodes[idx];
  json j;
  switch (node.type) {
    case ProtocolTree::Node::Type::Measure:
      j["type"] = "measure";
      j["party"] = node.party;
      j["basis"] = {{"bloch", bloch_out(node.basis.bloch)}, {"v", amps_out(node.basis.v.amps)}};
      j["surviving"] = node.surviving;
      j["outcome0"] = protocol_node_out(tree, node.child[0]);
      j["outcome1"] = protocol_node_out(tree, node.child[1]);
      break;
    case ProtocolTree::Node::Type::Identified:
      j["type"] = "identified";
      j["label"] = node.label;
      break;
    default:
      j["type"] = "fail";
  }
  return j;
}

void render_protocol_text(std::ostringstream& os, const ProtocolTree& tree, int idx,
                          const std::string& indent) {
  const auto& node = tree.nodes[idx];
  switch (node.type) {
    case ProtocolTree::Node::Type::Measure:
      os << indent << "measure party " << node.party << " along bloch ["
         << sig12(node.basis.bloch.x()) << ", " << sig12(node.basis.bloch.y()) << ", "
         << sig12(node.basis.bloch.z()) << "]\n";
      os << indent << "outcome 0:\n";
      render_protocol_text(os, tree, node.child[0], indent + "  ");
      os << indent << "outcome 1:\n";
      render_protocol_text(os, tree, node.child[1], indent + "  ");
      break;
    case ProtocolTree::Node::Type::Identified:
      os << indent << "identified: " << node.label << "\n";
      break;
    default:
      os << indent << "unreachable\n";
  }
}

json schmidt_bounds_out(const SchmidtBounds& b) {
  json j;
  j["lower"] = b.lower;
  if (b.upper_certified)
    j["upper"] = b.upper;
  else
    j["upper"] = nullptr;
  j["exact"] = b.exact;
  j["inconclusive"] = b.inconclusive();
  if (b.witness_upper) {
    json w = json::array();
    for (const auto& psi : *b.witness_upper) w.push_back(amps_out(psi.amps));
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json hit_out(const ProductStateHit& h) {
  json j;
  j["coefficients"] = amps_out(h.coefficients);
  json f = json::array();
  for (const auto& factor : h.factors) f.push_back(amps_out(factor.amps));
  j["factors"] = f;
  j["amps"] = amps_out(tensor(h.factors).normalized().amps);
  j["residual"] = num(h.residual);
  j["family_dim"] = h.family_dim;
  return j;
}

} // namespace

std::string render_decide(const DecideReport& rep, const RunConfig& cfg) {
  const Decision& d = rep.decision;
  if (cfg.format == "json") {
    json j;
    j["command"] = "decide";
    j["verdict"] = verdict_name(d.verdict);
    j["exit_code"] = verdict_exit_code(d.verdict);
    if (d.tree) {
      j["protocol"] = protocol_node_out(*d.tree, d.tree->root);
      json part = json::object();
      for (const auto& [label, outcomes] : rep.check.partition) part[label] = outcomes;
      j["partition"] = part;
      j["success_probability"] = num(rep.check.success_probability);
    } else {
      j["protocol"] = nullptr;
      j["partition"] = nullptr;
      j["success_probability"] = nullptr;
    }
    j["certificate"] = d.certificate;
    j["caveat"] = d.caveat.empty() ? json(nullptr) : json(d.caveat);
    j["stats"] = {{"nodes_explored", d.stats.nodes_explored},
                  {"families_sampled", d.stats.families_sampled}};
    j["citations"] = json::array();
    j["config"] = config_out(cfg);
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "verdict: " << verdict_name(d.verdict) << "\n";
  if (d.tree) {
    os << "success probability: " << sig12(rep.check.success_probability) << "\n";
    os << "protocol:\n";
    render_protocol_text(os, *d.tree, d.tree->root, "  ");
    os << "outcome partition:\n";
    for (const auto& [label, outcomes] : rep.check.partition) {
      os << "  " << label << ":";
      for (const auto& o : outcomes) os << " " << o;
      os << "\n";
    }
  }
  for (const auto& c : d.certificate) os << "certificate: " << c << "\n";
  if (!d.caveat.empty()) os << "caveat: " << d.caveat << "\n";
  os << "nodes explored: " << d.stats.nodes_explored
     << ", families sampled: " << d.stats.families_sampled << "\n";
  return os.str();
}

std::string render_schmidt(const SchmidtReport& rep, const RunConfig& cfg) {
  if (cfg.format == "json") {
    json j;
    j["command"] = "schmidt";
    j["states"] = json::array();
    for (const auto& [label, bounds] : rep.per_state) {
      json js = schmidt_bounds_out(bounds);
      js["label"] = label;
      j["states"].push_back(js);
    }
    j["sum"] = {{"lower", rep.sum.sum_lower},
                {"upper", rep.sum.upper_certified ? json(rep.sum.sum_upper) : json(nullptr)},
                {"passes", rep.sum.passes},
                {"dimension_bound", rep.sum.dimension_bound},
                {"certified_indistinguishable", rep.sum.certified_indistinguishable}};
    j["citations"] = json::array();
    j["config"] = config_out(cfg);
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  for (const auto& [label, bounds] : rep.per_state) {
    os << label << ": lower " << bounds.lower << ", upper ";
    if (bounds.upper_certified)
      os << bounds.upper;
    else
      os << "unresolved";
    os << (bounds.exact ? " (exact)" : "") << "\n";
  }
  os << "sum of lower bounds: " << rep.sum.sum_lower << " (dimension bound "
     << rep.sum.dimension_bound << ")\n";
  os << "criterion " << (rep.sum.passes ? "passes" : "fails");
  if (rep.sum.certified_indistinguishable) os << ": certified locally indistinguishable";
  os << "\n";
  return os.str();
}

std::string render_products(const ProductSearchResult& res, const Subspace& span,
                            const RunConfig& cfg) {
  if (cfg.format == "json") {
    json j;
    j["command"] = "products";
    j["subspace_dimension"] = span.dim();
    j["hits"] = json::array();
    for (const auto& h : res.hits) j["hits"].push_back(hit_out(h));
    j["complete"] = res.complete;
    j["restarts"] = res.restarts_used;
    j["config"] = config_out(cfg);
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "product states found: " << res.hits.size()
     << (res.complete ? " (search saturated)" : " (search not saturated)") << "\n";
  for (std::size_t i = 0; i < res.hits.size(); ++i) {
    const auto& h = res.hits[i];
    os << "hit " << (i + 1) << ": residual " << sig12(h.residual) << ", family dim "
       << h.family_dim << "\n";
    PureState psi = tensor(h.factors).normalized();
    os << "  amps:";
    for (int k = 0; k < psi.dim(); ++k)
      os << " (" << sig12(psi.amps(k).real()) << "," << sig12(psi.amps(k).imag()) << ")";
    os << "\n";
  }
  return os.str();
}

std::string render_upb_check(const UpbCheckResult& res, const RunConfig& cfg) {
  if (cfg.format == "json") {
    json j;
    j["command"] = "upb-check";
    j["orthonormal_products"] = res.orthonormal_products;
    j["unextendible"] = res.unextendible;
    j["complement_hits"] = json::array();
    for (const auto& h : res.complement_hits.hits) j["complement_hits"].push_back(hit_out(h));
    j["complete"] = res.complement_hits.complete;
    j["config"] = config_out(cfg);
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "orthonormal products: " << (res.orthonormal_products ? "yes" : "no") << "\n";
  os << "complement product states: " << res.complement_hits.hits.size()
     << (res.complement_hits.complete ? " (search saturated)" : " (search not saturated)")
     << "\n";
  os << "unextendible: " << (res.unextendible ? "yes" : "no") << "\n";
  return os.str();
}

std::string render_scan(const upb::ScanReport& rep, const RunConfig& cfg) {
  if (cfg.format == "json") {
    json j;
    j["command"] = "scan-basis";
    j["angles"] = json::array(
        {num(rep.angles.theta1), num(rep.angles.theta2), num(rep.angles.theta3)});
    j["trials"] = rep.trials;
    j["seed"] = rep.seed;
    j["counts"] = {{"distinguishable", rep.distinguishable},
                   {"indistinguishable", rep.indistinguishable},
                   {"inconclusive", rep.inconclusive}};
    json v = json::array();
    for (auto verdict : rep.verdicts) v.push_back(verdict_name(verdict));
    j["trial_verdicts"] = v;
    j["config"] = config_out(cfg);
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "basis scan: " << rep.trials << " trials at angles (" << sig12(rep.angles.theta1)
     << ", " << sig12(rep.angles.theta2) << ", " << sig12(rep.angles.theta3) << ")\n";
  os << "distinguishable: " << rep.distinguishable << "\n";
  os << "indistinguishable: " << rep.indistinguishable << "\n";
  os << "inconclusive: " << rep.inconclusive << "\n";
  return os.str();
}

std::string render_corpus(const CorpusEntry& entry, const RunConfig& cfg) {
  if (cfg.format == "json") {
    json j;
    j["command"] = "corpus";
    j["name"] = entry.name;
    j["qubits"] = entry.n_qubits;
    json params = json::object();
    for (const auto& [k, v] : entry.params) params[k] = num(v);
    j["params"] = params;
    json exp = json::array();
    for (const auto& e : entry.expected)
      exp.push_back({{"check", e.check}, {"expected", e.expected}, {"note", e.note}});
    j["expected"] = exp;
    json labels = json::array();
    for (const auto& s : entry.states) labels.push_back(s.label);
    j["states"] = labels;
    j["config"] = config_out(cfg);
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "corpus entry: " << entry.name << " (" << entry.n_qubits << " qubits, "
     << entry.states.size() << " states)\n";
  for (const auto& [k, v] : entry.params) os << "  param " << k << " = " << sig12(v) << "\n";
  for (const auto& e : entry.expected)
    os << "  expected " << e.check << " = " << e.expected << "  [" << e.note << "]\n";
  return os.str();
}

} // namespace locq::cli
