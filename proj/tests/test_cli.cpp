#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

#include "campana/report.hpp"

using namespace campana;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + CAMPANA_CLI + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json payload(const Run& r) { return json::parse(r.out).at("payload"); }

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("campana_test_" + name)).string();
}

std::string fan(const std::string& name) { return std::string(CAMPANA_DATA_DIR) + "/fans/" + name + ".json"; }

}  // namespace

TEST(Report, Fnv1aVectors) {
  EXPECT_EQ(report::fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(report::fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(report::fnv1a("foobar"), 0x85944171f73967e8ull);
}

TEST(Report, CsvFormatting) {
  report::Table t{{"B", "ratio"}, {{"10", report::format_real(0.5L)}, {"a,b", "x\"y"}}};
  EXPECT_EQ(report::to_csv(t), "B,ratio\n10,0.5\n\"a,b\",\"x\"\"y\"\n");
  EXPECT_EQ(report::to_csv({{"B", "N"}, {}}), "B,N\n");
  EXPECT_EQ(report::format_real(1e-20L), "1e-20");
  EXPECT_EQ(report::format_real(INFINITY), "inf");
}

TEST(Report, EnvelopeShape) {
  report::Envelope env("count", 7);
  env.hash_input("x");
  env.warn("w");
  env.warn("w");
  env.payload()["N"] = "3";
  const json j = env.to_json();
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["warnings"].size(), 1u);
  EXPECT_FALSE(j.contains("timings"));
  EXPECT_EQ(j["input_hash"].get<std::string>().size(), 16u);
}

TEST(Cli, Validate) {
  const auto r = run("validate --fan " + fan("p2"));
  ASSERT_EQ(r.code, 0);
  const auto p = payload(r);
  EXPECT_TRUE(p["smooth"].get<bool>());
  EXPECT_TRUE(p["complete"].get<bool>());
  EXPECT_EQ(p["r"], 1);
}

TEST(Cli, LpOnProductOfLines) {
  const auto r = run("lp --fan " + fan("p1xp1"));
  ASSERT_EQ(r.code, 0);
  const auto p = payload(r);
  EXPECT_EQ(p["a"], "1");
  EXPECT_EQ(p["b"], 2);
  EXPECT_EQ(p["dual_optimum"], "1");
}

TEST(Cli, CountOnProjectiveLine) {
  const auto r = run("count --fan p1 --bound 10000");
  ASSERT_EQ(r.code, 0);
  const auto p = payload(r);
  EXPECT_EQ(p["N"], "12174");
  EXPECT_NEAR(p["ratio"].get<double>(), 1.0, 0.01);
}

TEST(Cli, MfullCommands) {
  auto r = run("mfull count --m 2 -B 100 --d 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(payload(r)["F"], 8);
  r = run("mfull constants --m 2 --mu-max 9");
  ASSERT_EQ(r.code, 0);
  const auto p = payload(r);
  EXPECT_EQ(p["a_coefficients"], json({"1", "0", "-1", "-1", "0", "1", "1"}));
  EXPECT_EQ(p["kappa"], "1/3");
  r = run("mfull verify --m 3 --d 6 -B 1e4");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(payload(r)["all_hold"].get<bool>());
}

TEST(Cli, HyperbolaDemo) {
  const auto r = run("hyperbola demo -B 1e4");
  ASSERT_EQ(r.code, 0);
  const auto p = payload(r);
  EXPECT_TRUE(p["sandwich"]["holds"].get<bool>());
  EXPECT_EQ(p["k"], 1);
}

TEST(Cli, HyperbolaSystemFile) {
  const auto r = run("hyperbola estimate --exact --system " + std::string(CAMPANA_DATA_DIR) +
                     "/systems/square_corner.json -B 1e3");
  ASSERT_EQ(r.code, 0);
  EXPECT_DOUBLE_EQ(payload(r)["ratio"].get<double>(), 1.0);
}

TEST(Cli, AsymptoticCsv) {
  const std::string path = tmp("asym.csv");
  auto r = run("asymptotic --fan p1 --bounds 100,1000 --out " + path);
  ASSERT_EQ(r.code, 0);
  std::string csv = read_text_file(path);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "B,N,prediction,ratio");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  r = run("asymptotic --fan p1 --out " + path);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(read_text_file(path), "B,N,prediction,ratio\n");
  std::filesystem::remove(path);
}

TEST(Cli, SliceCsv) {
  const std::string path = tmp("slice.csv");
  const auto r = run("slice --fan p2 --out " + path);
  ASSERT_EQ(r.code, 0);
  const std::string csv = read_text_file(path);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "delta,volume,residual");
  EXPECT_EQ(payload(r)["predicted_exponent"], 2);
  std::filesystem::remove(path);
}

TEST(Cli, ByteIdenticalOutput) {
  for (const std::string args : {"count --fan p2 -B 2000 --seed 5", "slice --fan p1xp1", "mfull constants --m 3"}) {
    const auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
  EXPECT_EQ(json::parse(run("count --fan p2 -B 100 --seed 5").out)["seed"], 5);
  EXPECT_NE(json::parse(run("count --fan p2 -B 100").out)["input_hash"],
            json::parse(run("count --fan p2 -B 101").out)["input_hash"]);
}

TEST(Cli, WarningsReachEnvelope) {
  const auto r = run("mfull constants --m 4");
  ASSERT_EQ(r.code, 0);
  const auto w = json::parse(r.out)["warnings"];
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].get<std::string>().rfind("KmDivergent", 0), 0u);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("count --fan p1").code, 1);
  EXPECT_EQ(run("count --fan p1 -B 1.5").code, 1);
  EXPECT_EQ(run("validate --fan /nonexistent.json").code, 2);

  const std::string bad = tmp("bad.json");
  report::write_text(bad, "{\"dim\":1,\"rays\":[[2],[-1]],\"max_cones\":[[1],[2]]}");
  EXPECT_EQ(run("validate --fan " + bad).code, 13);
  report::write_text(bad, "{\"dim\":2,\"rays\":[[1,0],[1,2],[-1,-1]],\"max_cones\":[[1,2],[2,3],[1,3]]}");
  EXPECT_EQ(run("validate --fan " + bad).code, 11);
  report::write_text(bad, "{\"dim\":2,\"rays\":[[1,0],[0,1],[-1,-1]],\"max_cones\":[[1,2],[2,3]]}");
  EXPECT_EQ(run("validate --fan " + bad).code, 12);
  report::write_text(bad, "not json");
  EXPECT_EQ(run("validate --fan " + bad).code, 10);
  std::filesystem::remove(bad);

  EXPECT_EQ(run("mfull count --m 2 -B 100 --d 12").code, 14);
  EXPECT_EQ(run("count --fan p2 -B 1e5", "CAMPANA_WORK_CAP=10").code, 20);
  EXPECT_EQ(run("count --fan p2 -B 1e5", "CAMPANA_WORK_CAP=zero").code, 1);
  EXPECT_EQ(run("constant --fan bl1p2 --m 1,1,1,1").code, 0);
  EXPECT_EQ(run("mfull verify --m 2 --d 1 -B 100").code, 34);

  const std::string pulled = tmp("pullback.json");
  json j = json::parse(read_text_file(fan("bl1p2")));
  j["L"] = {0, 0, 1, 0};
  report::write_text(pulled, j.dump());
  EXPECT_EQ(run("constant --fan " + pulled).code, 30);
  std::filesystem::remove(pulled);

  const std::string sys = tmp("unbounded.json");
  report::write_text(sys, "{\"alpha\":[[1,0]]}");
  EXPECT_EQ(run("hyperbola estimate -B 100 --system " + sys).code, 31);
  std::filesystem::remove(sys);
}
