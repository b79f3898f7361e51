#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(MODEQ_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

nlohmann::json parse(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Classify, DiagonalPairAtLengthThree) {
  auto r = run("classify --lambda1 0 --mu1 0 --lambda2 1 --mu2 1 --n -2 --l 3");
  EXPECT_EQ(r.code, 0);
  auto j = parse(r);
  EXPECT_EQ(j["outcome"], "Equivalent");
  EXPECT_EQ(j["witness"].size(), 3u);
  EXPECT_TRUE(j["failing_condition"].is_null());
}

TEST(Classify, BolPairAtLengthFive) {
  auto r = run("classify --lambda1 1 --mu1 3 --lambda2 0 --mu2 3 --n -5 --l 5");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(parse(r)["outcome"], "Equivalent");
}

TEST(Classify, RInvariantSeparates) {
  auto r = run("classify --lambda1 1/2 --mu1 5/2 --lambda2 1 --mu2 3 --n -1 --l 4");
  EXPECT_EQ(r.code, 1);
  auto f = parse(r)["failing_condition"];
  EXPECT_EQ(f["invariant"], "R");
  EXPECT_EQ(f["value_a"][0], "12/13");
  EXPECT_EQ(f["value_b"][0], "27/28");
}

TEST(Classify, ExperimentalPatternNeedsFlag) {
  auto r = run("classify --lambda1 1 --mu1 3 --lambda2 0 --mu2 3 --n 1/3 --pattern 0,2,3,4,6");
  EXPECT_EQ(r.code, 2);
  auto j = parse(r);
  EXPECT_EQ(j["outcome"], "Unsupported");
  EXPECT_FALSE(j["reason"].is_null());
  auto g = run("classify --lambda1 1 --mu1 3 --lambda2 1 --mu2 3 --n 1/3 --pattern 0,2,3,4,6 --experimental");
  EXPECT_EQ(g.code, 0);
}

TEST(Classify, UsageErrors) {
  EXPECT_GT(run("classify --n x --l 3").code, 2);
  EXPECT_GT(run("classify --lambda1 a --mu1 0 --lambda2 0 --mu2 0 --n 0 --l 3").code, 2);
  EXPECT_GT(run("classify --lambda1 0 --mu1 0 --lambda2 0 --mu2 0 --n 0").code, 2);
  EXPECT_GT(run("nosuch").code, 2);
}

TEST(Invariants, ValuesAndUndefined) {
  auto r = run("invariants --lambda 1/2 --mu 5/2 --n -1/2 --kinds I,J,R");
  ASSERT_EQ(r.code, 0);
  auto v = parse(r)["invariants"];
  EXPECT_EQ(v["I"], nlohmann::json::array({"1", "0"}));
  EXPECT_EQ(v["J"], "undefined");
  EXPECT_EQ(v["R"][0], "12/13");
  EXPECT_GT(run("invariants --lambda 0 --mu 0 --n 0 --kinds Q").code, 2);
}

TEST(Pencil, CsvHeaderBasePointsAndDeterminism) {
  const std::string args = "pencil --family M --n6 6.35 --levels 0,1,inf --window -5,10,-5,5 --out csv";
  auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out.rfind("family,level,x,y\n", 0), 0u);
  EXPECT_NE(a.out.find("M,base,"), std::string::npos);
  EXPECT_NE(a.out.find("M,inf,"), std::string::npos);
  EXPECT_EQ(a.out, b.out);
}

TEST(Pencil, SvgShape) {
  auto r = run("pencil --family Rtilde --levels 1,2 --window -4,4,-4,4 --out svg");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("viewBox=\"-4.000000 -4.000000 8.000000 8.000000\""), std::string::npos);
  std::size_t paths = 0;
  for (auto p = r.out.find("<path"); p != std::string::npos; p = r.out.find("<path", p + 1)) ++paths;
  EXPECT_EQ(paths, 2u);
  EXPECT_NE(r.out.find("<circle"), std::string::npos);
}

TEST(Pencil, BadInput) {
  EXPECT_GT(run("pencil --family I --levels 1 --window -1,1,-1,1").code, 2);
  EXPECT_GT(run("pencil --family Rtilde --levels 1 --window 1,-1,-1,1").code, 2);
  EXPECT_GT(run("pencil --family Q --levels 1 --window -1,1,-1,1").code, 2);
}

TEST(Oracle, PqSkipsResonantAndIntertwinerPasses) {
  auto pq = run("oracle --check pq --grid small");
  EXPECT_EQ(pq.code, 0);
  auto j = parse(pq);
  EXPECT_EQ(j["summary"]["skip"], 1);
  EXPECT_EQ(j["summary"]["fail"], 0);
  auto it = run("oracle --check intertwiner --grid small");
  EXPECT_EQ(it.code, 0);
  auto cells = parse(it)["cells"];
  EXPECT_EQ(cells.back()["intertwiner"], "found");
}

TEST(Oracle, ThreadCountDoesNotChangeOutput) {
  auto one = run("oracle --check cmz --grid small");
  std::string cmd = "env MODEQ_THREADS=1 " + std::string(MODEQ_CLI_PATH) + " oracle --check cmz --grid small";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  pclose(p);
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(one.out, out);
  EXPECT_GT(run("oracle --check cmz --degree 4").code, 2);
}

TEST(Tables, ClassLists) {
  auto r = run("tables --which DO97");
  ASSERT_EQ(r.code, 0);
  auto j = parse(r);
  EXPECT_EQ(j["name"], "DO97");
  EXPECT_EQ(j["classes"].size(), 2u);
  EXPECT_GT(run("tables --which nope").code, 2);
}
