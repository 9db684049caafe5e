#pragma once

#include "latdens/density.hpp"
#include "latdens/lattice.hpp"
#include "latdens/mass.hpp"
#include "latdens/normal_form.hpp"
#include "latdens/odd_prime.hpp"
#include "latdens/oracle.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace latdens {

using Json = nlohmann::json;

// Lattice document before it is bound to a ring: entries as coordinate vectors of length f.
struct LatticeInput {
  int residue_degree = 1;
  int precision = 24;
  std::vector<std::int64_t> modulus;
  Matrix<std::vector<Rational>> gram;
  std::size_t rank() const { return gram.rows(); }
};

struct InputOverrides {
  std::optional<int> residue_degree;
  std::optional<int> precision;
};

LatticeInput parse_lattice_input(const Json& doc, const InputOverrides& overrides = {});
QuadLattice to_lattice(const LatticeInput& input);
QuadLattice parse_lattice(const Json& doc);
Matrix<Rational> rational_gram(const LatticeInput& input);
OracleProblem oracle_problem(const LatticeInput& input, std::uint64_t p);

Rational parse_rational_token(const Json& token);
Json ring_element_json(const RingElem& x);
Json serialize_lattice(const QuadLattice& lattice);

Json to_json(const Rational& r);
Json to_json(const JordanSymbol& symbol);
Json to_json(const ChainReport& chain);
Json to_json(const ExponentReport& e);
Json to_json(const GroupOrderReport& g);
Json to_json(const DensityReport& report);
Json to_json(const OddJordanSymbol& symbol);
Json to_json(const UnimodularProfile& profile);
Json to_json(const ArchimedeanConstant& c);
Json to_json(const MassReport& report);
Json to_json(const StabilizationReport& report);

NumberFieldData parse_field_data(const Json& doc);

}  // namespace latdens
