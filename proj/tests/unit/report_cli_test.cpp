#include "congsub/report.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support.hpp"

namespace congsub {
namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun cli(const std::string& args) {
  std::string cmd = std::string(CONGSUB_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Json without_timing(const std::string& text) {
  Json j = Json::parse(text);
  j.erase("timing");
  return j;
}

TEST(Report, DigestIgnoresTiming) {
  Report a;
  a.command = "phi";
  a.config["p"] = 3;
  a.cases.push_back(Json{{"x", 1}});
  Report b = a;
  b.seconds = 12.5;
  EXPECT_EQ(a.digest(), b.digest());
  EXPECT_EQ(a.digest().size(), 16U);
  b.failures.push_back("boom");
  EXPECT_NE(a.digest(), b.digest());
  EXPECT_FALSE(b.to_json()["aggregate"]["pass"].get<bool>());
}

TEST(Report, FieldOrderIsFixed) {
  Report r;
  r.command = "count";
  const Json j = r.to_json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"schema_version", "command", "config", "cases", "result", "aggregate",
                                            "anomalies", "digest", "timing"}));
}

TEST(Report, MergeIsOrderIndependent) {
  Report a, b;
  a.command = "phi";
  a.cases.push_back(Json{{"v", 1}});
  b.command = "cdelta";
  b.cases.push_back(Json{{"v", 2}});
  b.anomalies.push_back("note");
  Report ab = merge_reports({a, b}), ba = merge_reports({b, a});
  EXPECT_EQ(ab.digest(), ba.digest());
  EXPECT_EQ(ab.cases.size(), 2U);
  EXPECT_EQ(ab.cases[0]["source"], "cdelta");
  EXPECT_EQ(report_from_json(ab.to_json()).digest(), ab.digest());
}

TEST(Report, CsvProjection) {
  Report r;
  r.cases.push_back(Json{{"p", 3}, {"ratio", "1/4"}, {"x", Json::array({1, 2})}});
  EXPECT_EQ(r.cases_csv(), "p,ratio,x\n3,1/4,\"[1,2]\"\n");
}

TEST(Cli, ExplogSelftest) {
  CliRun r = cli("explog-selftest --p 5 --N 6 --seed 7");
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["result"]["round_trips_per_domain"], 500);
  EXPECT_TRUE(j["aggregate"]["pass"].get<bool>());
}

TEST(Cli, WorstCaseCertificate) {
  CliRun r = cli("approx --worst-case --p 3 --n 4 --certify-optimality");
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["result"]["m_achieved"], 2);
  EXPECT_EQ(j["result"]["optimal_refuted_at"], 3);
}

TEST(Cli, LatticeInputFile) {
  std::string path = ::testing::TempDir() + "congsub_lattice.json";
  std::ofstream(path) << R"({"p":3,"N":7,"generators":[[[1,0],[0,-1]],[9,0,0],[0,0,81]]})";
  CliRun r = cli("approx --n 4 --input " + path);
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_GE(j["result"]["m_achieved"].get<int>(), 2);
  std::ofstream(path) << R"({"p":3,"N":7,"generators":[[[1,1],[0,1]]]})";
  EXPECT_EQ(cli("approx --input " + path).code, 2);
}

TEST(Cli, PhiExample) {
  CliRun r = cli("phi --p 3 --n 2 --K gamma0 --x \"[[1,1],[0,1]]\"");
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["result"]["ratio"], "1/4");
  EXPECT_EQ(j["result"]["closed_form"], "1/4");
  EXPECT_TRUE(j["result"]["match"].get<bool>());
}

TEST(Cli, MatrixLiteralRange) {
  EXPECT_EQ(cli("phi --p 3 --n 2 --x '{\"p\":3,\"N\":2,\"mat\":[[1,1],[0,1]]}'").code, 0);
  EXPECT_EQ(cli("phi --p 3 --n 2 --x '{\"p\":3,\"N\":2,\"mat\":[[1,10],[0,1]]}'").code, 2);
  EXPECT_EQ(cli("phi --p 3 --n 2 --x '[[1,1],[1,1]]'").code, 2);
}

TEST(Cli, CountModes) {
  CliRun r = cli("count --poly \"x0^2+x1^2\" --p 3 --n 2 --mode affine");
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_TRUE(j["result"].contains("bound_form"));
  EXPECT_TRUE(j["result"]["pass"].get<bool>());
  EXPECT_EQ(cli("count --poly \"a-d\" --p 5 --mode sl2").code, 0);
  EXPECT_EQ(cli("count --poly \"x^2-y^2\" --p 5 --mode schmidt").code, 0);
  EXPECT_EQ(cli("count --poly \"x^2\" --p 3 --mode nonsense").code, 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("--bogus").code, 2);
  EXPECT_EQ(cli("approx --nope").code, 2);
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("nori --p 3 --roundtrip").code, 2);
  EXPECT_EQ(cli("count --poly \"x^\" --p 3").code, 2);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, BudgetExitCode) {
  std::string cmd = "CONGSUB_GROUP_CAP=10 " + std::string(CONGSUB_CLI_PATH) + " phi --p 3 --n 2 >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 3);
}

TEST(Cli, NoriReport) {
  CliRun r = cli("nori --p 5 --roundtrip");
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["result"]["subgroup_count"], 8);
  EXPECT_EQ(j["result"]["algebra_count"], 8);
  EXPECT_EQ(j["result"]["smallest_passing_p_so_far"], 5);
  EXPECT_TRUE(j["result"]["failures"].empty());
}

TEST(Cli, DeterministicModuloTiming) {
  for (std::string args : {"explog-selftest --p 7 --N 5 --seed 3 --points 50", "count --sweep --seed 11",
                           "nori --p 5 --padic --samples 5 --seed 2", "cdelta --decay-table"}) {
    CliRun a = cli(args), b = cli(args);
    ASSERT_EQ(a.code, 0) << args;
    EXPECT_EQ(without_timing(a.out), without_timing(b.out)) << args;
    EXPECT_EQ(Json::parse(a.out)["digest"], Json::parse(b.out)["digest"]);
  }
}

TEST(Cli, SerialFlagGivesSameContent) {
  Json a = without_timing(cli("phi --p 3 --n 2 --orbital").out);
  Json b = without_timing(cli("--serial phi --p 3 --n 2 --orbital").out);
  EXPECT_EQ(a["result"], b["result"]);
}

TEST(Cli, SchemaAndMerge) {
  CliRun s = cli("--json-schema");
  ASSERT_EQ(s.code, 0);
  EXPECT_TRUE(Json::parse(s.out).contains("properties"));
  std::string dir = ::testing::TempDir();
  ASSERT_EQ(cli("cdelta --gamma0 9 --out " + dir + "c.json").code, 0);
  ASSERT_EQ(cli("phi --p 3 --n 2 --out " + dir + "p.json").code, 0);
  CliRun m1 = cli("report-merge " + dir + "c.json " + dir + "p.json");
  CliRun m2 = cli("report-merge " + dir + "p.json " + dir + "c.json");
  ASSERT_EQ(m1.code, 0);
  EXPECT_EQ(Json::parse(m1.out)["digest"], Json::parse(m2.out)["digest"]);
}

TEST(Cli, CsvTable) {
  std::string path = ::testing::TempDir() + "congsub_decay.csv";
  ASSERT_EQ(cli("cdelta --decay-table --csv " + path).code, 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "p,n,M,count,index,ratio,expected,equal,decay_bound");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 9);
}

}  // namespace
}  // namespace congsub
