#include "latdens/cli.hpp"
#include "latdens/errors.hpp"
#include "latdens/json_io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace latdens;
using namespace latdens::testing;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args) {
  const CliRun r = run(std::move(args));
  EXPECT_EQ(r.code, 0) << r.err;
  return Json::parse(r.out);
}

std::string temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST(Cli, DensityOfIdentity) {
  const std::string path = temp_file("latdens_i2.json", R"({"gram":[[1,0],[0,1]]})");
  const Json j = run_json({"density", "--input", path});
  EXPECT_EQ(j["density"], "4/1");
  EXPECT_EQ(j["exponents"]["N"], 1);
  EXPECT_EQ(j["group"]["dimRu"], 1);
}

TEST(Cli, SumOfSquaresMass) {
  const Json j = run_json({"mass", "--sum-squares", "3"});
  EXPECT_EQ(j["mass"], "1/48");
  EXPECT_EQ(j["archimedean"]["piPower"], -2);
}

TEST(Cli, MassOfGramMatrix) {
  const Json j = run_json({"mass", "--input", R"({"gram":[[2,1],[1,2]]})"});
  EXPECT_EQ(j["mass"], "1/12");
}

TEST(Cli, FieldData) {
  const std::string path = temp_file(
      "latdens_field.json", R"({"degree":2,"discriminant":5,"dyadic_residue_degrees":[2],"zeta_negative":{"1":"1/30"}})");
  const Json j = run_json({"mass", "--sum-squares", "3", "--field-data", path});
  EXPECT_EQ(j["mass"], "5/48");
  EXPECT_EQ(run({"mass", "--sum-squares", "2", "--field-data", path}).code, 2);
}

TEST(Cli, OddPrimeDensity) {
  const Json j = run_json({"density", "--prime", "3", "--input", R"({"gram":[[1,0],[0,3]]})"});
  EXPECT_EQ(j["density"], "6/1");
}

TEST(Cli, Oracle) {
  const Json j = run_json({"oracle", "--max-level", "6", "--jobs", "2", "--input", R"({"gram":[[1]]})"});
  EXPECT_EQ(j["levels"], Json::parse("[1,2,4,4,4,4]"));
  EXPECT_EQ(j["stabilized"], true);
  EXPECT_EQ(j["value"], "4/1");
  EXPECT_EQ(j["ratios"][0], "1/1");
}

TEST(Cli, AnalyzeAndNormalForm) {
  const Json a = run_json({"analyze", "--input", R"({"gram":[[1,0],[0,1]]})"});
  EXPECT_EQ(a["chain"]["alpha"], 1);
  EXPECT_EQ(a["chain"]["beta"], 1);
  EXPECT_EQ(a["chain"]["scales"][0]["type"], "Ie1");
  EXPECT_EQ(a["chain"]["scales"][0]["dimVbar"], 1);
  const Json nf = run_json({"normal-form", "--input", R"({"gram":[[0,1],[1,0]]})"});
  EXPECT_EQ(nf["constituents"][0]["parity"], "II");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"analyze", "--input", R"({"gram":[]})"}).code, 2);
  EXPECT_EQ(run({"analyze", "--input", "{not json"}).code, 2);
  EXPECT_EQ(run({"analyze", "--input", "/nonexistent/file.json"}).code, 2);
  EXPECT_EQ(run({"density", "--precision", "5", "--input", R"({"gram":[[1]]})"}).code, 2);
  EXPECT_EQ(run({"density", "--input", R"({"gram":[[1,2],[0,1]]})"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"density", "--input", R"({"gram":[[1,1],[1,1]]})"}).code, 3);
  EXPECT_EQ(run({"oracle", "--max-level", "4", "--input", R"({"gram":[[1,0,0],[0,1,0],[0,0,1]]})", "--residue-degree",
                 "2"})
                .code,
            4);
  EXPECT_EQ(run({"oracle", "--max-level", "3", "--input",
                 R"({"gram":[[1,0,0,0,0],[0,1,0,0,0],[0,0,1,0,0],[0,0,0,1,0],[0,0,0,0,1]]})"})
                .code,
            4);
}

TEST(Cli, DeterministicSortedOutput) {
  const std::vector<std::string> args{"density", "--input", R"({"gram":[[2,1,0],[1,2,0],[0,0,4]]})"};
  const CliRun a = run(args);
  const CliRun b = run(args);
  EXPECT_EQ(a.out, b.out);
  const Json j = Json::parse(a.out);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  EXPECT_NE(a.out.find("\"density\""), std::string::npos);
}

TEST(Cli, TextOutput) {
  const CliRun r = run({"density", "--text", "--input", R"({"gram":[[1]]})"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("density: 2/1"), std::string::npos);
}

TEST(LatticeParsing, Examples) {
  const QuadLattice a = parse_lattice(Json::parse(R"({"residue_degree":1,"precision":24,"gram":[[1,0],[0,2]]})"));
  EXPECT_EQ(a.rank(), 2u);
  EXPECT_EQ(a.gram()(1, 1), RingElem::from_int(a.ring(), 2));
  const QuadLattice b = parse_lattice(Json::parse(R"({"gram":[["1/2",1],[1,"3"]]})"));
  EXPECT_EQ(b.gram()(0, 0).valuation(), -1);
  const QuadLattice c = parse_lattice(Json::parse(R"({"residue_degree":2,"gram":[[[1,0]]]})"));
  EXPECT_EQ(c.ring().degree(), 2);
  EXPECT_TRUE(c.gram()(0, 0).is_unit());
  EXPECT_THROW(parse_lattice(Json::parse(R"({"gram":[[1,0]]})")), InvalidInput);
  EXPECT_THROW(parse_lattice(Json::parse(R"({"gram":[[1]],"extra":1})")), InvalidInput);
  EXPECT_THROW(parse_lattice(Json::parse(R"({"residue_degree":2,"gram":[[[1,0,0]]]})")), InvalidInput);
}

TEST(LatticeParsing, RoundTrip) {
  LatticeSampler sampler(21);
  for (int t = 0; t < 50; ++t) {
    const int f = sampler.uniform(1, 2);
    const RingDescriptor& ring = RingDescriptor::get(f, 30);
    const auto n = static_cast<std::size_t>(sampler.uniform(1, 5));
    const QuadLattice l =
        QuadLattice(ring, sampler.random_jordan_gram(ring, n, -1, 3)).transformed(sampler.random_unimodular(ring, n));
    const QuadLattice back = parse_lattice(serialize_lattice(l));
    EXPECT_EQ(&back.ring(), &l.ring());
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        EXPECT_EQ(back.gram()(r, c), l.gram()(r, c));
        EXPECT_EQ(back.gram()(r, c).valuation_bound(), l.gram()(r, c).valuation_bound());
      }
  }
}
