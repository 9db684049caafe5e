#include "latdens/cli.hpp"

#include "latdens/density.hpp"
#include "latdens/errors.hpp"
#include "latdens/invariant_chain.hpp"
#include "latdens/json_io.hpp"
#include "latdens/mass.hpp"
#include "latdens/normal_form.hpp"
#include "latdens/odd_prime.hpp"
#include "latdens/oracle.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace latdens {
namespace {

struct JobConfig {
  std::string input;
  std::uint64_t prime = 2;
  std::optional<int> residue_degree;
  std::optional<int> precision;
  int max_level = 6;
  int split_depth = 2;
  int jobs = 1;
  std::optional<int> sum_squares;
  std::string field_data;
  bool json = false;
  bool text = false;
};

Json read_json(const std::string& source) {
  std::string text;
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (source[first] == '{' || source[first] == '[')) {
    text = source;
  } else {
    std::ifstream in(source);
    if (!in) throw InvalidInput("cannot read input file '" + source + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

LatticeInput load_lattice(const JobConfig& cfg) {
  if (cfg.input.empty()) throw InvalidInput("--input is required");
  return parse_lattice_input(read_json(cfg.input), {cfg.residue_degree, cfg.precision});
}

void check_prime(std::uint64_t p) {
  if (p < 2) throw InvalidInput("--prime must be a prime");
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw InvalidInput("--prime must be a prime");
}

Json analyze(const JobConfig& cfg) {
  if (cfg.prime != 2) throw InvalidInput("analyze works at p = 2");
  const QuadLattice lattice = to_lattice(load_lattice(cfg));
  const JordanSymbol symbol = jordan_split(lattice);
  const ChainReport chain = analyze_chain(symbol);
  const Discriminant disc = discriminant(lattice);
  return {{"rank", lattice.rank()},
          {"residueDegree", lattice.ring().degree()},
          {"normIdeal", norm_ideal(lattice)},
          {"scaleIdeal", scale_ideal(lattice)},
          {"discriminant", {{"valuation", disc.valuation}, {"unitMod8", disc.unit_mod8}}},
          {"jordan", to_json(symbol)},
          {"chain", to_json(chain)}};
}

Json density(const JobConfig& cfg) {
  check_prime(cfg.prime);
  const LatticeInput input = load_lattice(cfg);
  if (cfg.prime == 2) return to_json(density_report(to_lattice(input)));
  const OddJordanSymbol symbol = odd_jordan(rational_gram(input), BigInt(cfg.prime));
  return {{"prime", cfg.prime}, {"jordan", to_json(symbol)}, {"density", to_json(odd_prime_density(symbol))}};
}

Json mass(const JobConfig& cfg) {
  if (cfg.sum_squares) {
    const NumberFieldData field =
        cfg.field_data.empty() ? NumberFieldData::rationals() : parse_field_data(read_json(cfg.field_data));
    return to_json(sum_squares_mass_report(*cfg.sum_squares, field));
  }
  const LatticeInput input = load_lattice(cfg);
  const Matrix<Rational> g = rational_gram(input);
  Matrix<BigInt> gram(g.rows(), g.cols(), BigInt(0));
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) {
      if (den(g(r, c)) != 1) throw InvalidInput("mass needs an integral Gram matrix");
      gram(r, c) = num(g(r, c));
    }
  return to_json(mass_via_local(gram));
}

Json oracle(const JobConfig& cfg) {
  check_prime(cfg.prime);
  const OracleProblem problem = oracle_problem(load_lattice(cfg), cfg.prime);
  check_oracle_budget(problem, cfg.max_level);
  OracleOptions options;
  options.split_depth = cfg.split_depth;
  options.jobs = cfg.jobs;
  Json out = to_json(density_estimate(problem, cfg.max_level, options));
  out["prime"] = cfg.prime;
  return out;
}

Json normal_form(const JobConfig& cfg) {
  const QuadLattice lattice = to_lattice(load_lattice(cfg));
  const JordanSymbol symbol = jordan_split(lattice);
  Json out = Json::array();
  for (const auto& c : symbol.constituents) {
    Json entry = to_json(unimodular_normal_form(c.unimodular));
    entry["scale"] = c.scale;
    out.push_back(entry);
  }
  return {{"constituents", out}};
}

void render_text(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_text(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& v) { return v.is_structured(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local densities and masses of quadratic lattices", "latdens"};
  app.require_subcommand(1);
  JobConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Lattice JSON file or inline JSON document");
    sub->add_option("--prime", cfg.prime, "Residue characteristic")->capture_default_str();
    sub->add_option("--residue-degree", cfg.residue_degree, "Residue degree f (overrides the input)");
    sub->add_option("--precision", cfg.precision, "Relative precision K (overrides the input)");
    sub->add_flag("--json", cfg.json, "JSON report (default)");
    sub->add_flag("--text", cfg.text, "Plain text report");
  };
  auto* analyze_cmd = app.add_subcommand("analyze", "Jordan splitting, chain invariants, types, alpha and beta");
  auto* density_cmd = app.add_subcommand("density", "Local density");
  auto* mass_cmd = app.add_subcommand("mass", "Mass of a genus or of the sum-of-squares lattice");
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force congruence counts");
  auto* nf_cmd = app.add_subcommand("normal-form", "Unimodular normal form of each Jordan constituent");
  for (auto* sub : {analyze_cmd, density_cmd, mass_cmd, oracle_cmd, nf_cmd}) common(sub);
  mass_cmd->add_option("--sum-squares", cfg.sum_squares, "Rank n of the sum-of-squares lattice");
  mass_cmd->add_option("--field-data", cfg.field_data, "Totally real field data JSON");
  oracle_cmd->add_option("--max-level", cfg.max_level, "Highest congruence level")->capture_default_str();
  oracle_cmd->add_option("--split-depth", cfg.split_depth, "Level at which subtrees become work items")
      ->capture_default_str();
  oracle_cmd->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (cfg.json && cfg.text) throw InvalidInput("--json and --text are exclusive");
    if (cfg.precision && *cfg.precision < RingDescriptor::kMinPrecision) throw InvalidInput("precision must be at least 10");
    if (cfg.residue_degree && *cfg.residue_degree < 1) throw InvalidInput("residue degree must be at least 1");
    Json report;
    if (analyze_cmd->parsed()) report = analyze(cfg);
    else if (density_cmd->parsed()) report = density(cfg);
    else if (mass_cmd->parsed()) report = mass(cfg);
    else if (oracle_cmd->parsed()) report = oracle(cfg);
    else report = normal_form(cfg);
    if (cfg.text) render_text(report, "", out);
    else out << report.dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace latdens
