#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "breuil/blocks.hpp"
#include "cli.hpp"

using namespace breuil;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = breuil_cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(BREUIL_CLI_DATA) + "/" + name; }

// Parses `text` and returns the ParseError position as "line:column".
std::string error_position(const std::string& text) {
  try {
    parse_job(text);
  } catch (const ParseError& e) {
    return std::to_string(e.line()) + ":" + std::to_string(e.column());
  }
  return "no error";
}

}  // namespace

TEST(Cli, NuExample) {
  CliRun r = run({"nu", "-p", "3", "-a", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "nu = 1\n");
}

TEST(Cli, NuReadsFrameFromInput) {
  CliRun r = run({"nu", data("frame.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "nu = 3\n");
}

TEST(Cli, ValidateRejectsNonEisensteinFrame) {
  CliRun r = run({"validate", data("bad_frame.txt")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "frame.valid = false\nframe violations:\n  - a0 not divisible by p\n");
  CliRun m = run({"--machine", "validate", data("bad_frame.txt")});
  EXPECT_EQ(m.code, 1);
  EXPECT_EQ(m.out, "frame.valid = false\nframe.violation.1 = a0 not divisible by p\n");
}

TEST(Cli, ValidateAcceptsWindow) {
  CliRun r = run({"--machine", "validate", data("window.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "frame.valid = true\nwindow.1.valid = true\nwindow.1.level = 2\nwindow.1.lie_rank = 1\n");
}

TEST(Cli, SolveIsoClosedForm) {
  CliRun r = run({"solve-iso", data("solve_iso.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "X = 1 - 3*v\nresidual = 0\n");
}

TEST(Cli, ModuleOfMultiplicationByP) {
  CliRun r = run({"--machine", "module", data("module.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "m = 2\norder = 9\nvalid = true\n");
}

TEST(Cli, SpecialFiber) {
  CliRun r = run({"--machine", "special-fiber", data("window.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "height = 2\ndim = 1\nA0 = [[1, 0], [2, 1]]\nPhi0 = [[1, 0], [-6, 3]]\nnilpotent = false\n");
}

TEST(Cli, DisplayIsValid) {
  CliRun r = run({"--machine", "display", data("window.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("valid = true\n"), std::string::npos);
  EXPECT_NE(r.out.find("lie_rank = 1\n"), std::string::npos);
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
  const std::vector<std::vector<std::string>> commands = {
      {"validate", data("window.txt")},       {"special-fiber", data("window.txt")},
      {"display", data("window.txt")},        {"--machine", "display", data("window.txt")},
      {"solve-iso", data("solve_iso.txt")},   {"module", data("module.txt")},
      {"validate", data("bad_frame.txt")},    {"nu", "-p", "5", "-a", "7"},
  };
  for (const auto& args : commands) {
    CliRun first = run(args), second = run(args);
    EXPECT_EQ(first.code, second.code);
    EXPECT_EQ(first.out, second.out);
    EXPECT_EQ(first.err, second.err);
  }
}

TEST(Cli, ExitCodeCorpus) {
  const std::vector<std::pair<std::vector<std::string>, int>> corpus = {
      {{"validate", data("window.txt")}, 0},
      {{"special-fiber", data("window.txt")}, 0},
      {{"display", data("window.txt")}, 0},
      {{"solve-iso", data("solve_iso.txt")}, 0},
      {{"module", data("module.txt")}, 0},
      {{"nu", "-p", "3", "-a", "4"}, 0},
      {{"validate", data("bad_frame.txt")}, 1},
      {{"validate", data("bad_window.txt")}, 1},
      {{"display", data("bad_window.txt")}, 1},
      {{"display", data("bad_frame.txt")}, 2},
      {{"module", data("not_a_morphism.txt")}, 1},
      {{"solve-iso", data("iso_shape_mismatch.txt")}, 1},
      {{"solve-iso", data("window.txt")}, 2},
      {{"validate", data("bad_syntax.txt")}, 2},
      {{"validate", data("missing.txt")}, 2},
      {{"solve-iso", data("bad_frame.txt")}, 2},
      {{"module", data("window.txt")}, 2},
      {{"display", data("solve_iso.txt")}, 2},
      {{"solve-iso", data("module.txt")}, 2},
      {{"validate", data("module.txt")}, 2},
      {{"nu", data("window.txt")}, 2},
      {{"validate", data("solve_iso.txt")}, 0},
      {{"nu", data("frame.txt")}, 0},
      {{"nu"}, 2},
      {{"frobnicate"}, 2},
      {{}, 2},
      {{"validate"}, 2},
  };
  for (const auto& [args, code] : corpus) {
    CliRun r = run(args);
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    EXPECT_EQ(r.code, code) << joined << "\n" << r.out << r.err;
  }
}

TEST(Cli, ParseErrorsArePositional) {
  CliRun r = run({"validate", data("bad_syntax.txt")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err, "parse error: 6:9: unexpected character '*'\n");
}

TEST(Blocks, Diagnostics) {
  EXPECT_EQ(error_position("p = 3\n"), "1:1");
  EXPECT_EQ(error_position("[frame]\np = 3\np = 5\n"), "3:1");
  EXPECT_EQ(error_position("[frame]\np = 3\ne = 1\na = 1\nN = 4\n"), "1:1");
  EXPECT_EQ(error_position("[frame]\n  q = 3\n"), "2:3");
  EXPECT_EQ(error_position("[frame]\np =\n"), "2:4");
  EXPECT_EQ(error_position("[windo]\n"), "1:1");
  EXPECT_EQ(error_position("[window]\nd = 1\nc = 0\n"), "1:1");
  EXPECT_EQ(error_position("[frame\n"), "1:1");
}

TEST(Blocks, ParsesAllBlocks) {
  std::ifstream in(data("module.txt"));
  std::stringstream ss;
  ss << in.rdbuf();
  JobSpec job = parse_job(ss.str());
  ASSERT_TRUE(job.frame);
  EXPECT_EQ(job.frame->p, 3u);
  EXPECT_EQ(job.frame->a, 2);
  EXPECT_EQ(job.frame->L, 2);
  ASSERT_EQ(job.windows.size(), 2u);
  EXPECT_EQ(job.windows[0].d, 1);
  EXPECT_EQ(job.windows[0].rows.size(), 2u);
  ASSERT_TRUE(job.matrix);
  EXPECT_EQ(job.matrix->rows[1][1].text, "3");
  Frame f(*job.frame);
  Window w = build_window(f, job.windows[0], f.a());
  EXPECT_EQ(w.level, 2);
  EXPECT_EQ(w.d, 1);
}

TEST(Blocks, MatrixShapeIsChecked) {
  JobSpec job = parse_job("[frame]\np = 3\ne = 1\na = 1\nN = 4\nE = u + 3\n[window]\nd = 1\nc = 1\nrow = 1\n");
  Frame f(*job.frame);
  EXPECT_THROW(build_window(f, job.windows[0], 1), ParseError);
  JobSpec ragged = parse_job("[frame]\np = 3\ne = 1\na = 1\nN = 4\nE = u + 3\n[matrix]\nrow = 1, 2\nrow = 3\n");
  EXPECT_THROW(build_matrix(f.series(1), ragged.matrix->rows), ParseError);
}
