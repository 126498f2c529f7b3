#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "dex/errors.hpp"
#include "dex/examples.hpp"
#include "dex/io.hpp"
#include "dex/report.hpp"

using namespace dex;

namespace {

struct TempDir {
  std::string path;
  TempDir() {
    char tmpl[] = "/tmp/dex_test_XXXXXX";
    path = mkdtemp(tmpl);
  }
  std::string file(const std::string& name) const { return path + "/" + name; }
};

}  // namespace

TEST_CASE("economy files round trip") {
  Economy e = examples::ex2_economy();
  Economy back = economy_from_json(economy_to_json(e));
  CHECK(back.objects == e.objects);
  CHECK(back.agents == e.agents);
  CHECK(back.endowments == e.endowments);
  CHECK(economy_digest(back) == economy_digest(e));
  for (AgentId i = 0; i < e.num_agents(); ++i) {
    auto table = eval_table(e, i), back_table = eval_table(back, i);
    CHECK(table == back_table);
  }
}

TEST_CASE("cmd_validate") {
  TempDir tmp;
  CommandOptions opts;
  SUBCASE("the bundled shoe economy is ok") {
    save_economy(examples::ex2_economy(), tmp.file("ex2.json"));
    RunReport r = cmd_validate(tmp.file("ex2.json"), opts);
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("ok") == true);
  }
  SUBCASE("truncated files raise parse errors") {
    std::ofstream out(tmp.file("bad.json"));
    out << "{\"objects\": [\"a\"";
    out.close();
    CHECK_THROWS_AS(cmd_validate(tmp.file("bad.json"), opts), ParseError);
  }
  SUBCASE("overlapping endowments exit 1 with a violation list") {
    nlohmann::json j;
    j["objects"] = {"a"};
    j["agents"] = {"1", "2"};
    j["endowments"] = {{"1", {"a"}}, {"2", {"a"}}};
    j["utilities"] = {{"1", {{"kind", "dichotomous"}, {"good", {"a"}}}},
                      {"2", {{"kind", "dichotomous"}, {"good", {"a"}}}}};
    std::ofstream out(tmp.file("overlap.json"));
    out << j.dump();
    out.close();
    RunReport r = cmd_validate(tmp.file("overlap.json"), opts);
    CHECK(r.exit_code == 1);
    CHECK_FALSE(r.payload.at("violations").empty());
  }
}

TEST_CASE("cmd_gen is deterministic and self-validating") {
  TempDir tmp;
  CommandOptions opts;
  InstanceSpec spec{"dichotomous", 3, 5, {}, 7};
  RunReport a = cmd_gen(spec, tmp.file("a.json"), opts);
  RunReport b = cmd_gen(spec, tmp.file("b.json"), opts);
  CHECK(a.payload.at("economy") == b.payload.at("economy"));
  CHECK(a.payload.at("digest") == b.payload.at("digest"));
  std::ifstream fa(tmp.file("a.json")), fb(tmp.file("b.json"));
  std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  CHECK(ca == cb);

  RunReport housing = cmd_gen({"housing", 5, 0, {}, 3}, tmp.file("h.json"), opts);
  CHECK(housing.exit_code == 0);
  RunReport v = cmd_validate(tmp.file("h.json"), opts);
  CHECK(v.exit_code == 0);
}

TEST_CASE("generated additive-common economies satisfy discrete TU") {
  TempDir tmp;
  CommandOptions opts;
  cmd_gen({"additive-common", 3, 5, {}, 41}, tmp.file("ac.json"), opts);
  RunReport r = cmd_check(tmp.file("ac.json"), "dtu", opts);
  CHECK(r.exit_code == 0);
  CHECK(r.payload.at("ok") == true);
}

TEST_CASE("cmd_solve dispatches ttc and talgo") {
  TempDir tmp;
  CommandOptions opts;
  cmd_gen({"housing", 4, 0, {}, 9}, tmp.file("h4.json"), opts);
  RunReport ttc = cmd_solve(tmp.file("h4.json"), "ttc", opts);
  CHECK(ttc.exit_code == 0);
  CHECK(ttc.payload.contains("ttc"));

  RunReport talgo = cmd_solve(tmp.file("h4.json"), "talgo", opts);
  CHECK(talgo.exit_code == 0);
  CHECK(talgo.payload.at("t_fixed") == true);
  CHECK(talgo.payload.contains("allocation"));
}

TEST_CASE("cmd_solve bargaining runs the full pipeline") {
  TempDir tmp;
  CommandOptions opts;
  save_economy(examples::dtu_pair_economy(), tmp.file("pair.json"));
  RunReport r = cmd_solve(tmp.file("pair.json"), "bargaining", opts);
  CHECK(r.exit_code == 0);
  CHECK(r.payload.at("in_bargaining_set") == true);
  CHECK(r.payload.at("individually_rational") == true);
  CHECK(r.payload.at("pairs").size() == 1);
}

TEST_CASE("cmd_solve bargaining rejects unmet preconditions") {
  TempDir tmp;
  CommandOptions opts;
  cmd_gen({"dichotomous", 3, 4, {}, 5}, tmp.file("d.json"), opts);
  CHECK_THROWS_AS(cmd_solve(tmp.file("d.json"), "bargaining", opts), InputError);
}

TEST_CASE("cmd_check covers economies and games") {
  TempDir tmp;
  CommandOptions opts;
  save_economy(examples::ex2_economy(), tmp.file("ex2.json"));
  RunReport gft = cmd_check(tmp.file("ex2.json"), "gft", opts);
  CHECK(gft.exit_code == 1);
  CHECK(gft.payload.at("ok") == false);
  CHECK(gft.payload.at("violation").at("s") == nlohmann::json::array({"1", "2"}));
  CHECK(gft.payload.at("violation").at("s_prime") == nlohmann::json::array({"1", "3"}));

  std::ofstream out(tmp.file("roommate.ntu.json"));
  out << ntu_game_to_json(examples::roommate_game()).dump();
  out.close();
  RunReport bal = cmd_check(tmp.file("roommate.ntu.json"), "balanced", opts);
  CHECK(bal.exit_code == 1);
  CHECK(bal.payload.at("ok") == false);
}

TEST_CASE("cmd_examples reproduce the bundled claims") {
  TempDir tmp;
  CommandOptions opts;
  opts.out_dir = tmp.path;
  SUBCASE("ex1") {
    RunReport r = cmd_examples("ex1", opts);
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("strong_core_is_exactly_X") == true);
    CHECK(r.payload.at("weak_core_contains_X_and_Y") == true);
  }
  SUBCASE("ex2") {
    RunReport r = cmd_examples("ex2", opts);
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("weak_core_empty") == true);
  }
  SUBCASE("roommate") {
    RunReport r = cmd_examples("roommate", opts);
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("ntu_weak_core_empty") == true);
    CHECK(r.payload.at("balanced") == false);
  }
  SUBCASE("shoes-gft") {
    RunReport r = cmd_examples("shoes-gft", opts);
    CHECK(r.exit_code == 0);
    CHECK(r.payload.at("gains_from_trade") == false);
  }
}

TEST_CASE("cmd_round replays a matrix dump") {
  TempDir tmp;
  CommandOptions opts;
  nlohmann::json j;
  j["mode"] = "dichotomous";
  j["objects"] = {"a", "b"};
  j["rows"] = nlohmann::json::array();
  j["rows"].push_back({{"agent", "1"}, {"target", 1},
                       {"entries", {{"a", "1/2"}, {"b", "1/2"}}}});
  j["rows"].push_back({{"agent", "2"}, {"target", 1},
                       {"entries", {{"a", "1/2"}, {"b", "1/2"}}}});
  std::ofstream out(tmp.file("m.json"));
  out << j.dump();
  out.close();
  RunReport r = cmd_round(tmp.file("m.json"), opts);
  CHECK(r.exit_code == 0);
  CHECK(r.payload.at("initial_fractional") == 4);
}

TEST_CASE("reports are byte-identical for identical inputs") {
  TempDir tmp;
  CommandOptions opts;
  save_economy(examples::ex2_economy(), tmp.file("ex2.json"));
  RunReport a = cmd_solve(tmp.file("ex2.json"), "weak-core", opts);
  RunReport b = cmd_solve(tmp.file("ex2.json"), "weak-core", opts);
  CHECK(a.payload.dump() == b.payload.dump());
}
