#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "clab/problem_config.hpp"
#include "clab/solution_io.hpp"

using namespace clab;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("clab_test_" + std::to_string(::getpid()) + "_" + name)).string();
}

}  // namespace

TEST(SolutionIo, RoundTrip) {
  MeshOptions o;
  o.h = 0.125;
  o.radii = {0.4};
  const auto u = interpolate(disk_mesh(o), named_function("harmonic:2"));
  const std::string bytes = encode_solution(u);
  EXPECT_EQ(bytes.substr(0, 5), "CLAB1");
  const auto v = decode_solution(bytes);
  ASSERT_EQ(v.mesh.num_nodes(), u.mesh.num_nodes());
  ASSERT_EQ(v.mesh.num_cells(), u.mesh.num_cells());
  EXPECT_EQ((v.values - u.values).norm(), 0.0);
  for (std::size_t i = 0; i < u.mesh.num_nodes(); ++i) EXPECT_EQ(v.mesh.nodes[i], u.mesh.nodes[i]);
  EXPECT_EQ(v.mesh.cells, u.mesh.cells);
  EXPECT_EQ(v.mesh.side, u.mesh.side);
  EXPECT_EQ(encode_solution(v), bytes);

  const std::string p = tmp_path("sol.bin");
  write_solution(p, u);
  EXPECT_FALSE(std::filesystem::exists(p + ".tmp"));
  EXPECT_EQ(encode_solution(read_solution(p)), bytes);
  std::filesystem::remove(p);
}

TEST(SolutionIo, MalformedInput) {
  MeshOptions o;
  o.h = 0.25;
  const std::string bytes = encode_solution(interpolate(disk_mesh(o), named_function("harmonic:1")));
  EXPECT_THROW(decode_solution(bytes.substr(0, bytes.size() - 1)), IoError);
  EXPECT_THROW(decode_solution("CLAB2" + bytes.substr(5)), IoError);
  EXPECT_THROW(decode_solution(""), IoError);
  std::string bad = bytes;
  bad[8] = 9;  // version
  EXPECT_THROW(decode_solution(bad), IoError);
  EXPECT_THROW(read_solution(tmp_path("does_not_exist.bin")), ConfigError);
}

TEST(ProblemConfig, ValidConfigs) {
  const auto c = parse_problem_config(R"({"metric":"identity","coefficient":{"plus":1,"minus":2},
      "boundary":{"type":"dirichlet","data":"piecewise-linear"},"h":0.125,"radii":[0.5]})");
  EXPECT_EQ(c.mesh.h, 0.125);
  const auto [pb, mesh] = c.instantiate();
  EXPECT_EQ(pb.bc.kind, BoundaryCondition::Kind::Dirichlet);
  EXPECT_EQ(pb.a(Vec(0, 0.1, 0), Side::Lower), 2.0);
  const auto u = solve(pb, mesh, 1);
  EXPECT_LT(l2_error(u, pb.bc.data), 1e-12);

  const auto n = parse_problem_config(R"({"coefficient":{"plus":{"closure":"affine","base":2,"slope":0.5},
      "minus":{"closure":"one"}},"boundary":{"type":"neumann","data":"cos"},"h":0.125,
      "inclusion":{"radius":0.3,"contrast":4}})");
  const auto [pn, mn] = n.instantiate();
  ASSERT_TRUE(pn.inclusion.has_value());
  EXPECT_NEAR(pn.a(Vec(0.4, 0.2, 0), Side::Upper), 2.2, 1e-15);
  EXPECT_NEAR(pn.a.gamma0, 1.0, 1e-15);
  EXPECT_LT(solve(pn, mn, 1).stats.residual, 1e-10);

  const auto r = parse_problem_config(R"json({"metric":"paraboloid(0.25)","coefficient":{"plus":{"closure":"radial"},
      "minus":3},"boundary":{"type":"dirichlet","data":"harmonic:2"},"h":0.25})json");
  EXPECT_EQ(r.problem.metric.dim(), 2);
}

TEST(ProblemConfig, RejectsInvalidConfigs) {
  const char* bad[] = {
      R"({"boundary":{"type":"dirichlet","data":"cos"},"h":0.1,"extra":1})",
      R"({"boundary":{"type":"dirichlet","data":"cos"}})",
      R"({"boundary":{"type":"robin","data":"cos"},"h":0.1})",
      R"({"boundary":{"type":"dirichlet","data":"cos"},"h":0})",
      R"({"boundary":{"type":"dirichlet","data":"cos"},"h":0.1,"coefficient":{"plus":-1,"minus":1}})",
      R"({"boundary":{"type":"dirichlet","data":"cos"},"h":0.1,"coefficient":{"plus":{"closure":"wavy"},"minus":1}})",
      R"({"boundary":{"type":"dirichlet","data":"cos"},"h":0.1,"coefficient":{"plus":{"closure":"affine","slope":3},"minus":1}})",
      R"({"boundary":{"type":"dirichlet","data":"piecewise-linear"},"h":0.1,"coefficient":{"plus":{"closure":"radial"},"minus":1}})",
      R"({"boundary":{"type":"dirichlet","data":"nonsense"},"h":0.1})",
      R"({"boundary":{"type":"dirichlet","data":"cos"},"h":0.1,"inclusion":{"radius":0.2,"contrast":1}})",
      R"({"boundary":{"type":"dirichlet","data":"cos"},"h":0.1,"metric":"sphere"})",
      R"({"boundary":{"type":"dirichlet","data":"cos"},"h":0.1,"metric":{"type":"identity","dim":3}})",
      R"({"boundary":)",
  };
  for (const char* text : bad) EXPECT_THROW(parse_problem_config(text), ConfigError) << text;
  EXPECT_THROW(load_problem_config(tmp_path("missing.json")), ConfigError);
}

TEST(ProblemConfig, SchemaMatchesPublishedFile) {
  std::ifstream f(CLAB_SCHEMA_PATH);
  ASSERT_TRUE(f.good());
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, problem_schema());
}

TEST(AtomicWrite, ReplacesExistingFile) {
  const std::string p = tmp_path("atomic.txt");
  write_file_atomic(p, "first");
  write_file_atomic(p, "second");
  std::ifstream f(p);
  std::string s;
  f >> s;
  EXPECT_EQ(s, "second");
  std::filesystem::remove(p);
  EXPECT_THROW(write_file_atomic("/nonexistent-dir/x/y.txt", "z"), IoError);
}
