#include "latdens/json_io.hpp"

#include "latdens/errors.hpp"

namespace latdens {
namespace {

std::string to_plain(const BigInt& n) { return n.str(); }

Json bigint_json(const BigInt& n) {
  if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max())
    return Json(static_cast<std::int64_t>(n));
  return Json(n.str());
}

int int_field(const Json& doc, const char* key, int fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number_integer()) throw InvalidInput(std::string("field '") + key + "' must be an integer");
  return doc[key].get<int>();
}

std::vector<Rational> parse_entry(const Json& entry, int f) {
  std::vector<Rational> coords(f, Rational(0));
  if (entry.is_array()) {
    if (static_cast<int>(entry.size()) != f) throw InvalidInput("coordinate array length must equal the residue degree");
    for (int i = 0; i < f; ++i) coords[i] = parse_rational_token(entry[i]);
  } else {
    coords[0] = parse_rational_token(entry);
  }
  return coords;
}

std::string chain_class(const ConstituentType& t) {
  if (t.vbar_dim == 0) return "trivial";
  return to_string(t.vbar_class);
}

}  // namespace

Rational parse_rational_token(const Json& token) {
  if (token.is_number_integer()) return Rational(BigInt(token.get<std::int64_t>()));
  if (token.is_string()) return parse_rational(token.get<std::string>());
  throw InvalidInput("ring entries must be integers, rational strings or coordinate arrays");
}

LatticeInput parse_lattice_input(const Json& doc, const InputOverrides& overrides) {
  if (!doc.is_object()) throw InvalidInput("lattice document must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (key != "gram" && key != "residue_degree" && key != "precision" && key != "modulus" && key != "prime")
      throw InvalidInput("unknown lattice field '" + key + "'");
  LatticeInput in;
  in.residue_degree = overrides.residue_degree.value_or(int_field(doc, "residue_degree", 1));
  in.precision = overrides.precision.value_or(int_field(doc, "precision", 24));
  if (in.residue_degree < 1) throw InvalidInput("residue degree must be at least 1");
  if (in.precision < RingDescriptor::kMinPrecision) throw InvalidInput("precision must be at least 10");
  if (doc.contains("modulus")) {
    if (!doc["modulus"].is_array()) throw InvalidInput("modulus must be an array of integers");
    for (const auto& c : doc["modulus"]) {
      if (!c.is_number_integer()) throw InvalidInput("modulus must be an array of integers");
      in.modulus.push_back(c.get<std::int64_t>());
    }
  }
  if (!doc.contains("gram") || !doc["gram"].is_array()) throw InvalidInput("lattice document needs a 'gram' array");
  const Json& rows = doc["gram"];
  const std::size_t n = rows.size();
  if (n == 0) throw InvalidInput("lattice must have positive rank");
  in.gram = Matrix<std::vector<Rational>>(n, n, {});
  for (std::size_t r = 0; r < n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n) throw InvalidInput("Gram matrix must be square");
    for (std::size_t c = 0; c < n; ++c) in.gram(r, c) = parse_entry(rows[r][c], in.residue_degree);
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c)
      if (in.gram(r, c) != in.gram(c, r)) throw InvalidInput("Gram matrix must be symmetric");
  return in;
}

QuadLattice to_lattice(const LatticeInput& input) {
  const RingDescriptor& ring = RingDescriptor::get(input.residue_degree, input.precision, input.modulus);
  const std::size_t n = input.rank();
  RingMatrix g(n, n, RingElem::zero(ring));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) g(r, c) = RingElem::from_coordinates(ring, input.gram(r, c));
  return QuadLattice(ring, std::move(g));
}

QuadLattice parse_lattice(const Json& doc) { return to_lattice(parse_lattice_input(doc)); }

Matrix<Rational> rational_gram(const LatticeInput& input) {
  if (input.residue_degree != 1) throw InvalidInput("odd primes need residue degree 1");
  Matrix<Rational> g(input.rank(), input.rank(), Rational(0));
  for (std::size_t r = 0; r < input.rank(); ++r)
    for (std::size_t c = 0; c < input.rank(); ++c) g(r, c) = input.gram(r, c)[0];
  return g;
}

OracleProblem oracle_problem(const LatticeInput& input, std::uint64_t p) {
  OracleProblem problem;
  problem.p = p;
  problem.degree = input.residue_degree;
  problem.modulus = input.modulus;
  const std::size_t n = input.rank();
  problem.gram = Matrix<std::vector<std::int64_t>>(n, n, {});
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      for (const Rational& x : input.gram(r, c)) {
        if (den(x) != 1) throw InvalidInput("oracle needs an integral Gram matrix");
        if (abs(num(x)) > BigInt(1) << 40) throw InvalidInput("oracle Gram entries are too large");
        problem.gram(r, c).push_back(static_cast<std::int64_t>(num(x)));
      }
  return problem;
}

Json to_json(const Rational& r) { return to_string(r); }

Json ring_element_json(const RingElem& x) {
  const std::vector<Rational> coords =
      x.is_zero() ? std::vector<Rational>(x.ring() ? x.ring()->degree() : 1, Rational(0)) : x.to_coordinates();
  auto token = [](const Rational& c) -> Json {
    if (den(c) == 1) return bigint_json(num(c));
    return to_plain(num(c)) + "/2^" + std::to_string(valuation(den(c), BigInt(2)));
  };
  if (coords.size() == 1) return token(coords[0]);
  Json arr = Json::array();
  for (const auto& c : coords) arr.push_back(token(c));
  return arr;
}

Json serialize_lattice(const QuadLattice& lattice) {
  Json doc;
  doc["residue_degree"] = lattice.ring().degree();
  doc["precision"] = lattice.ring().precision();
  doc["modulus"] = lattice.ring().modulus();
  Json rows = Json::array();
  for (std::size_t r = 0; r < lattice.rank(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < lattice.rank(); ++c) row.push_back(ring_element_json(lattice.gram()(r, c)));
    rows.push_back(row);
  }
  doc["gram"] = rows;
  return doc;
}

Json to_json(const JordanSymbol& symbol) {
  Json out = Json::array();
  for (const auto& c : symbol.constituents)
    out.push_back({{"scale", c.scale}, {"rank", c.rank()}, {"parity", to_string(c.parity)}});
  return out;
}

Json to_json(const ChainReport& chain) {
  Json scales = Json::array();
  for (const auto& t : chain.constituents)
    scales.push_back({{"i", t.scale},
                      {"n_i", t.rank},
                      {"parity", to_string(t.parity)},
                      {"type", to_string(t.type)},
                      {"bound", t.bound},
                      {"dimVbar", t.vbar_dim},
                      {"vbarClass", chain_class(t)}});
  return {{"scales", scales}, {"alpha", chain.alpha}, {"beta", chain.beta}};
}

Json to_json(const ExponentReport& e) {
  Json d = Json::object();
  for (const auto& [i, v] : e.d) d[std::to_string(i)] = v;
  return {{"t", e.t}, {"b", e.b}, {"c", e.c}, {"d", d}, {"cross", e.cross}, {"NM", e.nm}, {"NQ", e.nq}, {"N", e.n}};
}

Json to_json(const GroupOrderReport& g) {
  Json factors = Json::array();
  for (const auto& f : g.factors)
    factors.push_back({{"scale", f.scale}, {"group", f.label()}, {"order", bigint_json(f.order)}});
  return {{"dimG", g.dim_g},
          {"dimRu", g.dim_ru},
          {"factors", factors},
          {"componentExponent", g.component_exponent},
          {"order", bigint_json(g.special_fiber_order)}};
}

Json to_json(const DensityReport& report) {
  return {{"jordan", to_json(report.symbol)},
          {"chain", to_json(report.chain)},
          {"exponents", to_json(report.exponents)},
          {"group", to_json(report.group)},
          {"density", to_json(report.density)}};
}

Json to_json(const OddJordanSymbol& symbol) {
  Json out = Json::array();
  for (const auto& c : symbol.constituents)
    out.push_back({{"scale", c.scale}, {"rank", c.rank}, {"unitDeterminant", to_json(c.unit_determinant)}});
  return out;
}

Json to_json(const UnimodularProfile& p) {
  Json out;
  out["parity"] = to_string(p.parity);
  out["rank"] = p.rank;
  out["hyperbolicPlanes"] = p.hyperbolic_planes;
  out["normValuation"] = p.norm_valuation;
  out["weightValuation"] = p.weight_valuation;
  out["weightIdealValuation"] = p.weight_ideal_valuation;
  if (p.k_lambda) out["K"] = {{"lambda", ring_element_json(*p.k_lambda)}};
  if (p.kprime_epsilon) {
    Json kp = {{"epsilon", ring_element_json(*p.kprime_epsilon)}};
    if (p.kprime_gamma) kp["gamma"] = ring_element_json(*p.kprime_gamma);
    out["Kprime"] = kp;
  }
  if (p.terminal) out["terminal"] = {ring_element_json(p.terminal->first), ring_element_json(p.terminal->second)};
  Json gram = Json::array();
  for (std::size_t r = 0; r < p.assembled.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < p.assembled.cols(); ++c) row.push_back(ring_element_json(p.assembled(r, c)));
    gram.push_back(row);
  }
  out["gram"] = gram;
  return out;
}

Json to_json(const ArchimedeanConstant& c) { return {{"rational", to_json(c.rational)}, {"piPower", c.pi_power}}; }

Json to_json(const MassReport& report) {
  Json local = Json::array();
  for (const auto& f : report.local) local.push_back({{"p", bigint_json(f.p)}, {"density", to_json(f.density)}});
  Json out = {{"local", local}, {"archimedean", to_json(report.archimedean)}, {"mass", to_json(report.mass)}};
  if (report.analytic) out["analytic"] = *report.analytic;
  return out;
}

Json to_json(const StabilizationReport& report) {
  Json levels = Json::array();
  Json ratios = Json::array();
  for (const auto& c : report.counts) levels.push_back(bigint_json(c));
  for (const auto& r : report.ratios) ratios.push_back(to_json(r));
  Json out = {{"levels", levels},
              {"ratios", ratios},
              {"stabilized", report.stabilized},
              {"firstAdmissibleLevel", report.first_admissible_level}};
  out["value"] = report.stabilized ? to_json(report.value) : Json(nullptr);
  if (report.stabilized) out["stabilizedLevel"] = report.stabilized_level;
  return out;
}

NumberFieldData parse_field_data(const Json& doc) {
  if (!doc.is_object()) throw InvalidInput("field data must be a JSON object");
  NumberFieldData f;
  f.degree = int_field(doc, "degree", 1);
  if (f.degree < 1) throw InvalidInput("field degree must be positive");
  if (doc.contains("discriminant")) f.discriminant = num(parse_rational_token(doc["discriminant"]));
  if (doc.contains("dyadic_residue_degrees")) {
    f.dyadic_residue_degrees.clear();
    int total = 0;
    for (const auto& v : doc["dyadic_residue_degrees"]) {
      if (!v.is_number_integer() || v.get<int>() < 1) throw InvalidInput("dyadic residue degrees must be positive integers");
      f.dyadic_residue_degrees.push_back(v.get<int>());
      total += v.get<int>();
    }
    if (total > f.degree) throw InvalidInput("dyadic residue degrees exceed the field degree");
  }
  auto rational_map = [&](const char* key, std::map<int, Rational>& out) {
    if (!doc.contains(key)) return;
    for (const auto& [k, v] : doc[key].items()) out[std::stoi(k)] = parse_rational_token(v);
  };
  auto double_map = [&](const char* key, std::map<int, double>& out) {
    if (!doc.contains(key)) return;
    for (const auto& [k, v] : doc[key].items()) {
      if (!v.is_number()) throw InvalidInput(std::string("field '") + key + "' needs numeric values");
      out[std::stoi(k)] = v.get<double>();
    }
  };
  rational_map("zeta_negative", f.zeta_negative);
  rational_map("l_negative", f.l_negative);
  double_map("zeta_positive", f.zeta_positive);
  double_map("l_positive", f.l_positive);
  if (doc.contains("conductor_norm")) f.conductor_norm = num(parse_rational_token(doc["conductor_norm"]));
  if (doc.contains("root_number")) {
    const int e = doc["root_number"].get<int>();
    if (e != 1 && e != -1) throw InvalidInput("root number must be ±1");
    f.root_number = e;
  }
  return f;
}

}  // namespace latdens
