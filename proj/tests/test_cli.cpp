// End-to-end runs of the ppfs binary: spawn it, capture output and exit
// code, parse the JSON report. PPFS_BIN and PPFS_DATA come from the build.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

struct RunOut {
  int code = -1;
  std::string text;
};

RunOut run(const std::string& args) {
  RunOut out;
  std::string cmd = std::string(PPFS_BIN) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.text.append(buf, got);
  int status = pclose(p);
  out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

json report(const RunOut& out) {
  CAPTURE(out.text);
  REQUIRE(out.code == 0);
  return json::parse(out.text);
}

std::string walk_csv() { return std::string(PPFS_DATA) + "/walk.csv"; }

// unique scratch path inside the test's working directory
std::string scratch(const std::string& stem) {
  static int n = 0;
  return "cli_scratch_" + std::to_string(n++) + "_" + stem;
}

std::string write_file(const std::string& stem, const std::string& body) {
  auto path = scratch(stem);
  std::ofstream f(path);
  f << body;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("reduct on the walk dataset") {
  auto rep = report(run("reduct --input " + walk_csv() + " --no-timestamp"));
  CHECK(rep["schema"] == "ppfs-report/1");
  CHECK(rep["selected_attributes"] == json::array({"Age", "LEMS"}));
  CHECK(rep["final_gamma"] == "5/7");
  CHECK(rep["gamma_trace"] == json::array({"2/7", "5/7"}));
  CHECK(rep["stop"] == "converged");
  CHECK(rep["evaluations"].size() == 4);
  CHECK(rep["evaluations"][0]["gamma"] == "0/1");
  CHECK(rep["runtime_ms"] == 0);  // zeroed by --no-timestamp
  CHECK(!rep.contains("timestamp"));
}

TEST_CASE("reduct on a column that mirrors the class") {
  auto csv = write_file("mirror.csv", "shade,label\nred,r\nblue,b\nred,r\n");
  auto rep = report(run("reduct --input " + csv + " --no-timestamp"));
  CHECK(rep["selected_attributes"] == json::array({"shade"}));
  CHECK(rep["final_gamma"] == "1/1");
}

TEST_CASE("reduct on a uniform class") {
  auto csv = write_file("uniform.csv", "a,b,cls\nx,p,same\ny,q,same\nx,q,same\n");
  auto rep = report(run("reduct --input " + csv + " --no-timestamp"));
  CHECK(rep["selected_attributes"] == json::array());
  CHECK(rep["note"] == "uniform decision");
  CHECK(rep["stop"] == "uniform_decision");
  CHECK(rep["final_gamma"] == "1/1");
}

TEST_CASE("simulate over horizontal rows") {
  auto rep = report(run("simulate --input " + walk_csv() +
                        " --cuts 4,3 --no-timestamp"));
  CHECK(rep["partition"] == "horizontal rows 4|3");
  CHECK(rep["parties"] == 2);
  CHECK(rep["gamma_trace"] == json::array({"2/7", "5/7"}));
  CHECK(rep["final_gamma"] == "5/7");
  CHECK(rep["messages"]["per_kind"]["MaskedSum"]["count"] == 27);
  CHECK(rep["messages"]["per_kind"]["FingerprintSet"]["count"] == 8);
  CHECK(rep["messages"]["per_party_sent"].size() == 2);
}

TEST_CASE("simulate over vertical groups") {
  auto rep = report(run("simulate --input " + walk_csv() +
                        " --partition vertical --groups Age\\|LEMS"
                        " --no-timestamp"));
  CHECK(rep["partition"] == "vertical attrs 0|1");
  CHECK(rep["final_gamma"] == "5/7");
  CHECK(rep["selected_attributes"] == json::array({"Age", "LEMS"}));
  CHECK(rep["messages"]["per_kind"]["BlockLabels"]["count"] == 2);
}

TEST_CASE("simulate eigen matches the local run") {
  auto csv = write_file("num.csv",
                        "f0,f1,f2,y\n1.0,2.0,0.5,a\n2.0,1.5,0.25,b\n"
                        "3.0,4.0,0.75,a\n4.5,0.5,1.0,b\n5.0,3.25,1.25,a\n");
  for (const char* part : {"horizontal", "vertical"}) {
    auto rep = report(run("simulate --input " + csv +
                          " --protocol eigen --delta 0.5 --partition " + part +
                          " --no-timestamp"));
    CAPTURE(part);
    CHECK(rep["matches_local_run"] == true);
    CHECK(rep["pairing"] == "rank");
    CHECK(rep["corr_eigenvalues"].size() == 3);

    auto local = report(run("reduct --input " + csv +
                            " --protocol eigen --delta 0.5 --no-timestamp"));
    CHECK(local["kept_ranks"] == rep["kept_ranks"]);
  }
}

TEST_CASE("verify passes on clean runs in both modes") {
  auto hp = report(run("verify --input " + walk_csv() +
                       " --cuts 4,3 --no-timestamp"));
  CHECK(hp["pass"] == true);
  CHECK(hp["gammas_match"] == true);
  CHECK(hp["reducts_match"] == true);
  CHECK(hp["audit_clean"] == true);
  CHECK(hp["subsets"].size() == 4);
  CHECK(hp["subsets"][3]["distributed"] == "5/7");
  CHECK(hp["subsets"][1]["attrs"] == json::array({"Age"}));

  auto vp = report(run("verify --input " + walk_csv() +
                       " --partition vertical --groups Age\\|LEMS"
                       " --no-timestamp"));
  CHECK(vp["pass"] == true);
  CHECK(vp["table_digest"] == hp["table_digest"]);
}

TEST_CASE("verify flags a planted corruption") {
  auto out = run("verify --input " + walk_csv() +
                 " --cuts 4,3 --corrupt 0 --no-timestamp");
  CHECK(out.code == 5);
  auto rep = json::parse(out.text);
  CHECK(rep["pass"] == false);
  REQUIRE(rep["failures"].size() >= 1);
  CHECK(rep["failures"][0] ==
        "subset {0}: distributed 3/7, reference 2/7");
  CHECK(rep["subsets"][1]["equal"] == false);
}

TEST_CASE("verify fuzz campaign") {
  auto rep = report(run("verify --fuzz 20 --seed 11 --no-timestamp"));
  CHECK(rep["pass"] == true);
  CHECK(rep["fuzz"]["cases"] == 20);
  CHECK(rep["fuzz"]["failures"] == 0);
}

TEST_CASE("ingestion failures exit 2") {
  CHECK(run("reduct --input does_not_exist.csv").code == 2);
  auto ragged = write_file("ragged.csv", "a,b,c\n1,2\n");
  auto out = run("reduct --input " + ragged);
  CHECK(out.code == 2);
  CHECK(out.text.find("ingest error:") != std::string::npos);
}

TEST_CASE("config failures exit 3") {
  CHECK(run("reduct --input " + walk_csv() + " --protocol bogus").code == 3);
  CHECK(run("frobnicate").code == 3);
  CHECK(run("reduct").code == 3);  // --input missing
  auto out = run("simulate --input " + walk_csv() + " --cuts 9,9");
  CHECK(out.code == 3);
  CHECK(out.text.find("config error:") != std::string::npos);
  CHECK(run("simulate --input " + walk_csv() +
            " --partition vertical --groups Age\\|Wrong")
            .code == 3);
  CHECK(run("verify --input " + walk_csv() + " --protocol eigen").code == 3);
}

TEST_CASE("reports are byte-identical under --no-timestamp") {
  std::string args = "simulate --input " + walk_csv() +
                     " --cuts 4,3 --seed 42 --no-timestamp";
  auto a = run(args);
  auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.text == b.text);

  auto c = run("verify --fuzz 10 --seed 3 --no-timestamp");
  auto d = run("verify --fuzz 10 --seed 3 --no-timestamp");
  CHECK(c.text == d.text);
}

TEST_CASE("transcript file is NDJSON, payloads only on request") {
  auto path = scratch("transcript.ndjson");
  report(run("simulate --input " + walk_csv() +
             " --cuts 4,3 --no-timestamp --transcript " + path));
  auto body = slurp(path);
  auto first_line = body.substr(0, body.find('\n'));
  auto line = json::parse(first_line);
  CHECK(line.contains("kind"));
  CHECK(line.contains("digest"));
  CHECK(!line.contains("payload_b64"));

  report(run("simulate --input " + walk_csv() +
             " --cuts 4,3 --no-timestamp --audit-full --transcript " + path));
  auto full = json::parse(slurp(path).substr(0, slurp(path).find('\n')));
  CHECK(full.contains("payload_b64"));
}

TEST_CASE("--out writes the report to a file") {
  auto path = scratch("report.json");
  auto out = run("reduct --input " + walk_csv() + " --no-timestamp --out " +
                 path);
  REQUIRE(out.code == 0);
  CHECK(out.text.empty());
  auto rep = json::parse(slurp(path));
  CHECK(rep["final_gamma"] == "5/7");
}
