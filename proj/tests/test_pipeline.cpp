#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"

using namespace acf;
namespace fs = std::filesystem;

namespace {

const std::string kInstances = ACF_INSTANCE_DIR;

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(ACF_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) out += buf;
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::path(::testing::TempDir()) / ("acf_pipeline_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  f << content;
}

void write_all(const fs::path& dir, const CommandResult& r) {
  for (const auto& [name, content] : r.files) write(dir / name, content);
}

}  // namespace

TEST(Build, DeterministicAndPathIndependent) {
  const auto a = cmd_build(kInstances + "/d18_cx.json", std::nullopt);
  const auto b = cmd_build(kInstances + "/d18_cx.json", std::nullopt);
  EXPECT_EQ(a.files, b.files);
  const fs::path dir = scratch("copy");
  fs::copy_file(kInstances + "/d18_cx.json", dir / "renamed.json");
  const auto c = cmd_build((dir / "renamed.json").string(), std::nullopt);
  EXPECT_EQ(c.files.at("sigma.json"), a.files.at("sigma.json"));
  EXPECT_EQ(c.files.at("construction_log.json"), a.files.at("construction_log.json"));
  EXPECT_NE(c.files.at("manifest.json"), a.files.at("manifest.json"));
  const Json m = Json::parse(a.files.at("manifest.json"));
  EXPECT_EQ(Json::parse(a.files.at("sigma.json"))["manifest_hash"], m["manifest_hash"]);
  EXPECT_NE(cmd_build(kInstances + "/d18_cx.json", 2).files.at("sigma.json"), a.files.at("sigma.json"));
}

TEST(Build, InvariantViolationExitsTwo) {
  const fs::path dir = scratch("bad_instance");
  Json inst = read_json_file(kInstances + "/d18_cx.json");
  inst["N"] = 18;
  write(dir / "bad.json", inst.dump());
  EXPECT_THROW(cmd_build((dir / "bad.json").string(), std::nullopt), ContractError);
  EXPECT_EQ(run_cli("build " + (dir / "bad.json").string() + " --out " + (dir / "out").string()).code, kExitInput);
}

TEST(VerifyAc, BuildOutputPassesAndYdxFails) {
  const fs::path dir = scratch("verify_ac");
  write_all(dir, cmd_build(kInstances + "/d18_cx.json", std::nullopt));
  const Instance inst = instance_from_json(read_json_file(kInstances + "/d18_cx.json"));
  write(dir / "C.json", dump(series_to_json(inst.C)));
  write(dir / "D.json", dump(series_to_json(inst.D)));
  const auto r = cmd_verify_ac((dir / "sigma.json").string(), (dir / "C.json").string(), (dir / "D.json").string());
  EXPECT_EQ(r.exit_code, kExitOk);
  TruncSeries y(2, 4);
  y.add_component(HomogPoly::variable(2, 1));
  write(dir / "ydx.json", dump(one_form_to_json(OneForm({y, TruncSeries(2, 4)}))));
  write(dir / "zero.json", dump(series_to_json(TruncSeries(2, 4))));
  const auto f = run_cli("verify-ac --sigma " + (dir / "ydx.json").string() + " --C " + (dir / "zero.json").string() +
                         " --D " + (dir / "zero.json").string() + " --format json");
  EXPECT_EQ(f.code, kExitFail);
  EXPECT_EQ(Json::parse(f.out)["first_failure"], 0);
  write(dir / "broken.json", "{\"kind\": \"one_form\", ");
  EXPECT_EQ(run_cli("verify-ac --sigma " + (dir / "broken.json").string() + " --C " + (dir / "zero.json").string() +
                    " --D " + (dir / "zero.json").string())
                .code,
            kExitInput);
}

TEST(Decide, CounterexampleCertificateAudit) {
  const fs::path dir = scratch("decide");
  ASSERT_EQ(run_cli("build " + kInstances + "/d18_cx.json --out " + dir.string()).code, kExitOk);
  const auto r = run_cli("decide --sigma " + (dir / "sigma.json").string() + " --order 21 --out " + (dir / "dec").string());
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_NE(r.out.find("failing degree 20"), std::string::npos);
  ASSERT_TRUE(fs::exists(dir / "dec" / "certificate.json"));
  const Json outcome = read_json_file((dir / "dec" / "outcome.json").string());
  EXPECT_EQ(outcome["verdict"], "infeasible");
  EXPECT_EQ(outcome["failing_degree"], 20);
  EXPECT_EQ(run_cli("verify-cert --sigma " + (dir / "sigma.json").string() + " --cert " +
                    (dir / "dec" / "certificate.json").string())
                .code,
            kExitOk);
  Json cert = read_json_file((dir / "dec" / "certificate.json").string());
  cert["rows"][0] = "12345";
  write(dir / "tampered.json", cert.dump());
  EXPECT_EQ(run_cli("verify-cert --sigma " + (dir / "sigma.json").string() + " --cert " + (dir / "tampered.json").string()).code,
            kExitFail);
  // every chart certificate in the outcome passes the same audit
  for (std::size_t i = 0; i < outcome["chart_certificates"].size(); ++i) {
    const auto p = dir / ("chart" + std::to_string(i) + ".json");
    write(p, outcome["chart_certificates"][i].dump());
    EXPECT_EQ(run_cli("verify-cert --sigma " + (dir / "sigma.json").string() + " --cert " + p.string()).code, kExitOk);
  }
}

TEST(Decide, ExactDifferentialAndTruncation) {
  const fs::path dir = scratch("decide_exact");
  const auto r = run_cli("decide --sigma " + kInstances + "/dx7y7.json --order 10 --out " + dir.string());
  EXPECT_EQ(r.code, kExitOk);
  const TruncSeries phi = series_from_json(read_json_file((dir / "phi.json").string()));
  EXPECT_EQ(phi.component(7), HomogPoly::monomial(2, {7, 0}) + HomogPoly::monomial(2, {0, 7}));
  EXPECT_EQ(run_cli("verify-potential --phi " + (dir / "phi.json").string() + " --form " + kInstances +
                    "/dx7y7.json --order 10")
                .code,
            kExitOk);
  EXPECT_EQ(run_cli("decide --sigma " + kInstances + "/dx7y7.json --order 12").code, kExitInput);
}

TEST(Decide, RepeatedRunsAreByteIdentical) {
  const fs::path dir = scratch("repeat");
  write_all(dir, cmd_build(kInstances + "/d18_cx.json", std::nullopt));
  const auto a = cmd_decide((dir / "sigma.json").string(), 21, 0);
  const auto b = cmd_decide((dir / "sigma.json").string(), 21, 0);
  EXPECT_EQ(a.files, b.files);
  EXPECT_EQ(a.out, b.out);
}

TEST(Batch, VerdictsAndEmptyGlob) {
  const auto r = cmd_batch(kInstances + "/d18_cx.json", 2, std::nullopt, 2, OutputFormat::json);
  const Json s = Json::parse(r.out);
  ASSERT_EQ(s["runs"].size(), 2u);
  for (const auto& run : s["runs"]) {
    EXPECT_EQ(run["verdict"], "infeasible");
    EXPECT_EQ(run["failing_degree"], 20);
    EXPECT_EQ(run["certificates_verified"], true);
  }
  const auto closed = cmd_batch(kInstances + "/d6_closed.json", 3, std::nullopt, 1, OutputFormat::json);
  EXPECT_EQ(Json::parse(closed.out)["counts"]["feasible_up_to_M"], 3);
  // thread count does not change the result
  EXPECT_EQ(cmd_batch(kInstances + "/d6_closed.json", 3, std::nullopt, 3, OutputFormat::json).out, closed.out);
  EXPECT_THROW(cmd_batch(kInstances + "/nothing_*.json", 1, std::nullopt, 1), InputError);
  EXPECT_EQ(run_cli("batch --glob '" + kInstances + "/nothing_*.json'").code, kExitInput);
}

TEST(SmallCommands, Outputs) {
  EXPECT_EQ(Json::parse(cmd_obstruction(kInstances + "/C_x.json", kInstances + "/D_zero.json", OutputFormat::json).out)["obstruction"],
            "1");
  EXPECT_EQ(Json::parse(cmd_obstruction(kInstances + "/C_x.json", kInstances + "/D_my.json", OutputFormat::json).out)["obstruction"],
            "0");
  const Json cb = Json::parse(cmd_converge_bound(kInstances + "/C_1px.json", kInstances + "/D_zero.json", OutputFormat::json).out);
  EXPECT_EQ(cb["C_const"], "2");
  EXPECT_EQ(cb["radius_lower_bound"], "1/16");
  const Json t = Json::parse(cmd_tilde(kInstances + "/C_x.json", kInstances + "/D_zero.json", OutputFormat::json).out);
  EXPECT_EQ(t["C1_tilde"]["text"], "x");
  EXPECT_EQ(run_cli("ideal min-power " + kInstances + "/ideal_x2_y2.json").out, "3\n");
  EXPECT_EQ(run_cli("ideal colength " + kInstances + "/ideal_x2_y2.json").out, "4\n");
  EXPECT_EQ(run_cli("no-such-command").code, kExitInput);
}
