#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "mcsv/config.hpp"
#include "mcsv/error.hpp"

using namespace mcsv;

namespace {

const std::string kMinimal = R"(
grid_n = 64
[vortices]
positives = [[0.5, 0.5]]
)";

Error parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "parse succeeded:\n" << text;
  return Error(ErrorKind::Io, "");
}

}  // namespace

TEST(Config, MinimalUsesDefaults) {
  const RunConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.grid_n, 64);
  EXPECT_EQ(c.profile, "cp1");
  EXPECT_EQ(c.s, 0.0);
  EXPECT_FALSE(c.lambda.has_value());
  EXPECT_DOUBLE_EQ(c.lambda_factor, 1.2);
  EXPECT_DOUBLE_EQ(c.eps, 0.01);
  EXPECT_EQ(c.eps_ladder, (std::vector<double>{0.2, 0.1, 0.05, 0.02, 0.01}));
  EXPECT_EQ(c.vortices.m(), 1);
  EXPECT_EQ(c.vortices.n(), 0);
  const ModelParams p = c.model(3.0);
  EXPECT_DOUBLE_EQ(p.lambda, 3.6);
  EXPECT_DOUBLE_EQ(p.eps, 0.01);
}

TEST(Config, ExplicitValuesCommentsAndSolverSection) {
  const RunConfig c = parse_config(R"(# header comment
grid_n = 32   # trailing
lambda = 7.5
s = 0.25
output = "x # not a comment"
[vortices]
positives = [[0.3, 0.3], [0.7, 0.7]]
negatives = [[0.5, 0.2]]
[solver]
path_nodes = 9
mp_tol = 1e-4
)");
  EXPECT_EQ(c.grid_n, 32);
  ASSERT_TRUE(c.lambda.has_value());
  EXPECT_DOUBLE_EQ(*c.lambda, 7.5);
  EXPECT_DOUBLE_EQ(c.model(100.0).lambda, 7.5);
  EXPECT_EQ(c.output, "x # not a comment");
  EXPECT_EQ(c.solver.path_nodes, 9);
  EXPECT_DOUBLE_EQ(c.solver.mp_tol, 1e-4);
  EXPECT_EQ(c.vortices.n(), 1);
}

TEST(Config, EqualVortexCountsOutOfScope) {
  const Error e = parse_error(R"(
[vortices]
positives = [[0.2, 0.2]]
negatives = [[0.6, 0.6]]
)");
  EXPECT_EQ(e.kind(), ErrorKind::Scope);
  EXPECT_NE(std::string(e.what()).find("m > n"), std::string::npos);
  EXPECT_EQ(parse_error("grid_n = 64\n").kind(), ErrorKind::Scope);
}

TEST(Config, LevelOutsideBracketRejectedByAudit) {
  const Error e = parse_error("s = 1.5\n" + kMinimal);
  EXPECT_EQ(e.kind(), ErrorKind::Parameter);
  EXPECT_NE(std::string(e.what()).find("audit"), std::string::npos);
}

TEST(Config, SyntaxErrorsCarryLineNumbers) {
  struct Case {
    std::string text;
    std::string line;
  };
  for (const Case& c : {Case{"grid_n = 64\nbogus = 1\n", "line 2"},
                        Case{"grid_n = 64\ngrid_n = 32\n", "line 2"},
                        Case{"\n\ngrid_n 64\n", "line 3"},
                        Case{"grid_n = [1,\n", "line 1"},
                        Case{"[nowhere]\n", "line 1"},
                        Case{"grid_n = 63\n", "line 1"},
                        Case{"eps = -1\n", "line 1"},
                        Case{"eps_ladder = [0.1, 0.2]\n", "line 1"},
                        Case{"[solver\n", "line 1"},
                        Case{"[solver]\narmijo = 0.7\n", "line 2"}}) {
    const Error e = parse_error(c.text + "[vortices]\npositives = [[0.5, 0.5]]\n");
    EXPECT_EQ(e.kind(), ErrorKind::Config) << c.text;
    EXPECT_NE(std::string(e.what()).find(c.line), std::string::npos) << e.what();
  }
}

TEST(Config, PhysicalSectionMapsParameters) {
  const RunConfig c = parse_config(kMinimal + "[physical]\nq = 2.0\nkappa = 4.0\nS = -0.25\n");
  ASSERT_TRUE(c.physical.has_value());
  ASSERT_TRUE(c.lambda.has_value());
  EXPECT_DOUBLE_EQ(*c.lambda, 0.5);
  EXPECT_DOUBLE_EQ(c.eps, 0.125);
  EXPECT_DOUBLE_EQ(c.s, 0.25);
  EXPECT_EQ(parse_error("eps = 0.1\n" + kMinimal + "[physical]\nq = 1\nkappa = 1\nS = 0\n").kind(),
            ErrorKind::Config);
  EXPECT_EQ(parse_error(kMinimal + "[physical]\nq = 1\n").kind(), ErrorKind::Config);
}

TEST(Config, SerializeRoundTripIsIdempotent) {
  for (const std::string& text :
       {kMinimal, "lambda = 3\ns = -0.5\n" + kMinimal + "[solver]\ntau = 2.0\n",
        kMinimal + "[physical]\nq = 2.0\nkappa = 4.0\nS = -0.25\n",
        std::string("grid_n = 96\neps_ladder = [0.3, 0.1]\nseed = 42\n[vortices]\n"
                    "positives = [[0.3, 0.3], [0.7, 0.7]]\nnegatives = [[0.5, 0.2]]\n")}) {
    const RunConfig a = parse_config(text);
    const std::string s1 = serialize_config(a);
    const RunConfig b = parse_config(s1);
    EXPECT_EQ(serialize_config(b), s1);
    EXPECT_EQ(b.grid_n, a.grid_n);
    EXPECT_EQ(b.lambda, a.lambda);
    EXPECT_EQ(b.eps, a.eps);
    EXPECT_EQ(b.s, a.s);
    EXPECT_EQ(b.seed, a.seed);
    EXPECT_EQ(b.eps_ladder, a.eps_ladder);
    EXPECT_EQ(b.solver.tau, a.solver.tau);
    EXPECT_EQ(b.vortices.m(), a.vortices.m());
  }
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "mcsv_config_test.toml";
  {
    std::ofstream out(path);
    out << kMinimal;
  }
  EXPECT_EQ(load_config(path).grid_n, 64);
  std::filesystem::remove(path);
  try {
    load_config(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST(Config, ShippedConfigsParse) {
  const std::filesystem::path dir = MCSV_SOURCE_DIR "/configs";
  EXPECT_EQ(load_config(dir / "single_vortex.toml").vortices.m(), 1);
  const RunConfig m = load_config(dir / "multi_vortex.toml");
  EXPECT_EQ(m.vortices.m(), 2);
  EXPECT_EQ(m.vortices.n(), 1);
}
