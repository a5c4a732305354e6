#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "freeprod/documents.hpp"

using namespace freeprod;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FREEPROD_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("freeprod_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

void check_round_trip(const Run& r) {
  const Json j = parse_json(r.out, "cli");
  CHECK(j.dump(2) + "\n" == r.out);
}

const char* kZ2 = R"({"name": "Z2", "zero_cells": ["x"], "units": {"x": "1"},
  "irreducibles": [{"label": "1", "source": "x", "target": "x", "dual": "1", "qdim": 1},
                   {"label": "s", "source": "x", "target": "x", "dual": "s", "qdim": 1}],
  "fusion": [{"left": "1", "right": "1", "result": {"1": 1}}, {"left": "1", "right": "s", "result": {"s": 1}},
             {"left": "s", "right": "1", "result": {"s": 1}}, {"left": "s", "right": "s", "result": {"1": 1}}]})";

}  // namespace

TEST_CASE("decompose") {
  const Run z = run("decompose '[g@1][g@1]' --spec 'rep(Z2)' --spec 'rep(Z2)'");
  CHECK(z.code == 0);
  CHECK(z.out.rfind("()@a : 1", 0) == 0);

  const Run s = run("decompose '[std@1][std@1]' --spec 'rep(S3)' --spec 'rep(Z2)'");
  CHECK(s.code == 0);
  CHECK(s.out.find("()@a : 1") != std::string::npos);
  CHECK(s.out.find("[sgn@1] : 1") != std::string::npos);
  CHECK(s.out.find("[std@1] : 1") != std::string::npos);
  CHECK(s.out.find("qdim 4 = 4") != std::string::npos);

  const Run t = run("decompose '[f1@1][f1@2][f1@1]' --spec 'tlj(2.5)' --spec 'tlj(3)'");
  CHECK(t.code == 0);
  CHECK(t.out.rfind("[f1@1][f1@2][f1@1] : 1", 0) == 0);
}

TEST_CASE("validate") {
  CHECK(run("validate --spec " + write_temp("z2.json", kZ2)).code == 0);
  Json broken = parse_json(kZ2, "z2");
  broken["irreducibles"][1]["dual"] = "1";
  const Run b = run("validate --spec " + write_temp("broken.json", broken.dump()));
  CHECK(b.code == 1);
  CHECK(b.out.find("dual-involution") != std::string::npos);
  CHECK(run("validate --spec 'tlj(1.5)'").code == 2);
  CHECK(run("validate --spec 'tlj(2.5)' --spec 'rep(S3)'").code == 0);
  CHECK(run("validate --spec " + write_temp("garbage.json", "{\"zero_cells\": 3}")).code == 2);
}

TEST_CASE("box dimensions") {
  const Run c = run("box-dims 6 --spec 'pointed-tlj(2.5)'");
  CHECK(c.code == 0);
  CHECK(c.out == "0 : 1\n1 : 1\n2 : 2\n3 : 5\n4 : 14\n5 : 42\n6 : 132\n");
  const Run f = run("box-dims 5 --spec 'pointed-tlj(2)' --spec 'pointed-tlj(3)'");
  CHECK(f.out == "0 : 1\n1 : 1\n2 : 3\n3 : 12\n4 : 55\n5 : 273\n");
  CHECK(run("box-dims 0 --spec 'pointed-tlj(2)'").out == "0 : 1\n");
  CHECK(run("box-dims 3 --spec 'tlj(2)'").code == 2);
  const Run fc = run("free-compose 3 --spec 'pointed-tlj(2)' --spec 'pointed-tlj(3)'");
  CHECK(fc.code == 0);
  CHECK(fc.out.find("3 : 12") != std::string::npos);
}

TEST_CASE("verify") {
  const Run ok = run("verify --spec 'rep(Z3)' --spec 'rep(Z2)'");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  CHECK(run("verify --spec 'tlj(2)' --spec 'rep(Z2)'").code == 2);
  const Run strict = run("verify --spec 'rep(S3)' --spec 'rep(Z2)' --depth 2 --tolerance 1e-30");
  CHECK(strict.code == 1);
  CHECK(strict.out.find("FAIL") != std::string::npos);
}

TEST_CASE("custom group files") {
  const std::string g = write_temp("g.json", R"({"name": "Z2", "order": 2, "table": [[0, 1], [1, 0]]})");
  const std::string r = write_temp("r.json", R"({"irreps": [{"label": "1", "matrices": [[[1]], [[1]]]},
                                                           {"label": "s", "matrices": [[[1]], [[-1]]]}]})");
  const Run v = run("verify --depth 2 --spec 'rep(" + g + "," + r + ")' --spec 'rep(Z3)'");
  CHECK(v.code == 0);
  CHECK(run("decompose '[s@1][s@1]' --spec 'rep(" + g + "," + r + ")' --spec 'rep(Z3)'").out.rfind("()@a : 1", 0) == 0);
}

TEST_CASE("usage and lookup errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("decompose '[x@1]' --spec 'rep(Z2)'").code == 2);
  CHECK(run("decompose '[g@1' --spec 'rep(Z2)'").code == 2);
  CHECK(run("decompose '[g@1]'").code == 2);
  CHECK(run("decompose '[g@1]' --spec 'rep(Z2)' --format xml").code == 2);
  CHECK(run("decompose '[f1@1][f1@1]' --spec 'tlj(2.5)' --irr-depth 1").code == 2);
  CHECK(run("decompose '[g@1]' --spec 'rep(Z2)' --spec 'rep(Z2)' --amalgamate 'bad'").code == 2);
  CHECK(run("decompose '[g@1]' --spec missing.json").code == 2);
  CHECK(run("hom-dim '[g@1]' --spec 'rep(Z2)'").code == 2);
}

TEST_CASE("amalgamation flag") {
  const std::string args = " --spec 'pointed-tlj(2)' --spec 'pointed-tlj(2)' --amalgamate 'c:b@1=a@2'";
  const Run d = run("decompose '[f1_ab@1][f1_ab@2]'" + args);
  CHECK(d.code == 0);
  CHECK(run("decompose '[f1_ab@1][f1_ba@2]'" + args).code == 2);
  CHECK(run("hom-dim '[f1_ab@1][f1_ab@2]' '[f1_ab@1][f1_ab@2]'" + args).out == "1\n");
}

TEST_CASE("machine output round-trips") {
  const std::string fp2 = " --spec 'rep(S3)' --spec 'rep(Z2)' --format machine";
  check_round_trip(run("decompose '[std@1][g@2][g@2][std@1]'" + fp2));
  check_round_trip(run("hom-dim '[std@1][std@1]' '[std@1]'" + fp2));
  check_round_trip(run("irreducibles --max-len 3" + fp2));
  check_round_trip(run("validate" + fp2));
  check_round_trip(run("box-dims 4 --spec 'pointed-tlj(2.5)' --format machine"));
  check_round_trip(run("free-compose 3 --spec 'pointed-tlj(2.5)' --spec 'pointed-tlj(2)' --format machine"));

  const Run v = run("verify --depth 2" + fp2);
  check_round_trip(v);
  CHECK(report_to_json(report_from_json(parse_json(v.out, "report"))).dump(2) + "\n" == v.out);
  CHECK(run("verify --depth 2" + fp2).out == v.out);

  const Run p = run("free-product --max-len 2" + fp2);
  CHECK(p.code == 0);
  check_round_trip(p);
  CHECK(table_to_json(table_from_json(parse_json(p.out, "product"))).dump(2) + "\n" == p.out);
  const std::string file = write_temp("product.json", p.out);
  const Run nested = run("decompose '[[std@1][g@2]@1][[g@2][std@1]@1]' --spec " + file);
  CHECK(nested.code == 0);
  CHECK(nested.out.rfind("()@a : 1", 0) == 0);
  CHECK(nested.out.find("[[std@1]@1] : 1") != std::string::npos);
}
