// config.cpp
#include "patro/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace patro {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& what) {
  std::ostringstream msg;
  msg << origin << ":" << line << ": " << what;
  throw std::invalid_argument(msg.str());
}

double parse_real(const std::string& origin, int line, const std::string& key,
                  const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "' needs a number, got '" + value + "'");
  }
}

long parse_integer(const std::string& origin, int line, const std::string& key,
                   const std::string& value) {
  try {
    std::size_t used = 0;
    const long x = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    fail(origin, line,
         "key '" + key + "' needs an integer, got '" + value + "'");
  }
}

std::vector<long> parse_integer_list(const std::string& origin, int line,
                                     const std::string& key,
                                     const std::string& value) {
  std::string normalized = value;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::vector<long> out;
  std::string token;
  while (in >> token)
    out.push_back(parse_integer(origin, line, key, token));
  if (out.empty()) fail(origin, line, "key '" + key + "' needs values");
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};
using Section = std::map<std::string, Entry>;

const Entry* find(const Section& section, const std::string& key) {
  const auto it = section.find(key);
  return it == section.end() ? nullptr : &it->second;
}

const Entry& require(const std::string& origin, const std::string& section,
                     const Section& entries, const std::string& key) {
  const Entry* e = find(entries, key);
  if (!e)
    throw std::invalid_argument(origin + ": section [" + section +
                                "] is missing key '" + key + "'");
  return *e;
}

void reject_unknown(const std::string& origin, const std::string& section,
                    const Section& entries, const std::set<std::string>& known) {
  for (const auto& [key, entry] : entries)
    if (!known.count(key))
      fail(origin, entry.line,
           "unknown key '" + key + "' in section [" + section + "]");
}

}  // namespace

ScenarioConfig parse_scenario(std::istream& in, const std::string& origin) {
  std::map<std::string, Section> sections;
  std::string current;  // "" is the top level
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) fail(origin, lineno, "empty section name");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(origin, lineno, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(origin, lineno, "expected 'key = value', got '" + line + "'");
    auto [it, inserted] = sections[current].emplace(key, Entry{value, lineno});
    if (!inserted)
      fail(origin, lineno,
           "duplicate key '" + key + "' (first set on line " +
               std::to_string(it->second.line) + ")");
  }

  static const std::set<std::string> known_sections = {
      "", "model", "prior", "design", "noise", "solver", "simulate"};
  for (const auto& [name, entries] : sections)
    if (!known_sections.count(name))
      throw std::invalid_argument(origin + ": unknown section [" + name + "]");

  ScenarioConfig cfg;

  const Section& top = sections[""];
  reject_unknown(origin, "top level", top, {"seed", "label"});
  if (const Entry* e = find(top, "seed"))
    cfg.seed = static_cast<std::uint64_t>(
        parse_integer(origin, e->line, "seed", e->value));
  if (const Entry* e = find(top, "label")) cfg.label = e->value;

  const Section& model = sections["model"];
  const std::string kind =
      require(origin, "model", model, "kind").value;
  cfg.kind = kind;
  const Entry& kind_entry = *find(model, "kind");
  if (kind == "newsvendor") {
    reject_unknown(origin, "model", model,
                   {"kind", "p", "c_u", "c_o", "mu"});
    cfg.price = parse_real(origin, 0, "p",
                           require(origin, "model", model, "p").value);
    cfg.underage = parse_real(origin, 0, "c_u",
                              require(origin, "model", model, "c_u").value);
    cfg.overage = parse_real(origin, 0, "c_o",
                             require(origin, "model", model, "c_o").value);
    cfg.mu = parse_real(origin, 0, "mu",
                        require(origin, "model", model, "mu").value);
  } else if (kind == "service") {
    reject_unknown(origin, "model", model, {"kind", "p", "s", "a"});
    cfg.service_price = parse_real(origin, 0, "p",
                                   require(origin, "model", model, "p").value);
    cfg.capacity_cost = parse_real(origin, 0, "s",
                                   require(origin, "model", model, "s").value);
    cfg.a = parse_real(origin, 0, "a",
                       require(origin, "model", model, "a").value);
  } else if (kind == "pricing_linear" || kind == "pricing_loglinear") {
    reject_unknown(origin, "model", model, {"kind", "a", "b"});
    cfg.a = parse_real(origin, 0, "a",
                       require(origin, "model", model, "a").value);
    cfg.b_price = parse_real(origin, 0, "b",
                             require(origin, "model", model, "b").value);
  } else {
    fail(origin, kind_entry.line, "unknown model kind '" + kind + "'");
  }

  const Section& prior = sections["prior"];
  reject_unknown(origin, "prior", prior, {"m0", "v0"});
  if (const Entry* e = find(prior, "m0"))
    cfg.prior.m0 = parse_real(origin, e->line, "m0", e->value);
  cfg.prior.v0 = parse_real(origin, 0, "v0",
                            require(origin, "prior", prior, "v0").value);

  const Section& design = sections["design"];
  reject_unknown(origin, "design", design, {"n", "n_list", "gamma"});
  const Entry* n_single = find(design, "n");
  const Entry* n_many = find(design, "n_list");
  if (n_single && n_many)
    fail(origin, n_many->line, "give either 'n' or 'n_list', not both");
  if (n_single) {
    cfg.n_list = {parse_integer(origin, n_single->line, "n", n_single->value)};
  } else if (n_many) {
    cfg.n_list = parse_integer_list(origin, n_many->line, "n_list",
                                    n_many->value);
  } else {
    throw std::invalid_argument(origin +
                                ": section [design] needs 'n' or 'n_list'");
  }
  for (long n : cfg.n_list)
    if (n < 2)
      throw std::invalid_argument(origin + ": experiment sizes must be >= 2");
  cfg.design.n = cfg.n_list.front();
  cfg.design.gamma = parse_real(
      origin, 0, "gamma", require(origin, "design", design, "gamma").value);

  const Section& noise = sections["noise"];
  reject_unknown(origin, "noise", noise, {"sigma_eps", "b"});
  cfg.noise.sigma_eps =
      parse_real(origin, 0, "sigma_eps",
                 require(origin, "noise", noise, "sigma_eps").value);
  if (const Entry* e = find(noise, "b"))
    cfg.noise.b = parse_real(origin, e->line, "b", e->value);

  const Section& solver = sections["solver"];
  reject_unknown(origin, "solver", solver,
                 {"root_tol", "alt_tol", "max_alt_iters", "bracket_halfwidth",
                  "inner_nodes", "outer_nodes", "tail_sd"});
  if (const Entry* e = find(solver, "root_tol"))
    cfg.solver.root_tol = parse_real(origin, e->line, "root_tol", e->value);
  if (const Entry* e = find(solver, "alt_tol"))
    cfg.solver.alt_tol = parse_real(origin, e->line, "alt_tol", e->value);
  if (const Entry* e = find(solver, "max_alt_iters"))
    cfg.solver.max_alt_iters = static_cast<int>(
        parse_integer(origin, e->line, "max_alt_iters", e->value));
  if (const Entry* e = find(solver, "bracket_halfwidth"))
    cfg.solver.bracket_halfwidth =
        parse_real(origin, e->line, "bracket_halfwidth", e->value);
  if (const Entry* e = find(solver, "inner_nodes"))
    cfg.quadrature.inner_nodes = static_cast<int>(
        parse_integer(origin, e->line, "inner_nodes", e->value));
  if (const Entry* e = find(solver, "outer_nodes"))
    cfg.quadrature.outer_nodes = static_cast<int>(
        parse_integer(origin, e->line, "outer_nodes", e->value));
  if (const Entry* e = find(solver, "tail_sd"))
    cfg.quadrature.tail_sd = parse_real(origin, e->line, "tail_sd", e->value);

  const Section& simulate = sections["simulate"];
  reject_unknown(origin, "simulate", simulate, {"replications"});
  if (const Entry* e = find(simulate, "replications"))
    cfg.replications = parse_integer(origin, e->line, "replications", e->value);
  if (cfg.replications < 100)
    throw std::invalid_argument(origin + ": replications must be >= 100");

  check_spec(cfg.quadrature);
  cfg.make_model(cfg.design.n);  // surface bad model parameters at parse time
  cfg.make_belief(cfg.design.n);
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open scenario file '" + path + "'");
  return parse_scenario(in, path);
}

std::unique_ptr<SnrModel> ScenarioConfig::make_model(long n) const {
  if (kind == "newsvendor")
    return std::make_unique<NewsvendorSnr>(price, underage, overage, mu,
                                           noise.sigma_eps, n);
  if (kind == "service")
    return std::make_unique<ServiceCapacitySnr>(service_price, capacity_cost,
                                                a, noise.sigma_eps, n);
  if (kind == "pricing_linear")
    return std::make_unique<PricingSnr>(a, b_price, noise.sigma_eps,
                                        LambdaKind::Linear, n);
  if (kind == "pricing_loglinear")
    return std::make_unique<PricingSnr>(a, b_price, noise.sigma_eps,
                                        LambdaKind::LogLinear, n);
  throw std::invalid_argument("unknown model kind '" + kind + "'");
}

BeliefSystem ScenarioConfig::make_belief(long n) const {
  ExperimentDesign d = design;
  d.n = n;
  return build_belief_system(prior, d, noise);
}

}  // namespace patro
