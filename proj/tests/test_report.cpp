#include <catch_amalgamated.hpp>

#include "lucent/report.h"
#include "support/corpus.h"

using namespace lucent;
using lucent::testing::corpus;

TEST_CASE("small formatting helpers")
{
	auto [ring3, r3] = corpus("ring2x3");
	CHECK(tuple_string(r3) == "(2,1)");
	CHECK(to_json(ring3, r3).dump() == R"({"p1":2,"p2":1})");
	CHECK(to_json(ring3, Marking(2)).dump() == "{}");
	CHECK(names_string(ring3, ring3.transitions()) == "{t1, t2}");
	CHECK(names_string(ring3, {}) == "{}");
	CHECK(names_json(ring3, ring3.all_nodes()).dump() == R"(["p1","p2","t1","t2"])");
	Path p{{ring3.at("p1"), ring3.at("t1")}};
	CHECK(to_json(ring3, p).dump() == R"(["p1","t1"])");
}

TEST_CASE("analysis of the corpus")
{
	auto [fig1, f0] = corpus("fig1");
	auto a = analyze(fig1, f0);
	CHECK(a.complete);
	CHECK(a.free_choice);
	CHECK_FALSE(a.t_net);
	CHECK(a.strongly_connected);
	CHECK(a.live == true);
	CHECK(a.safe == true);
	CHECK(a.bound == 1u);
	CHECK(a.states < 10000);
	CHECK(a.regeneration_clusters.size() == 6);

	auto [ring3, r3] = corpus("ring2x3");
	auto b = analyze(ring3, r3);
	CHECK(b.bound == 3u);
	CHECK(b.safe == false);
	CHECK(b.regeneration_clusters.empty());
	std::string text = to_text(ring3, r3, b);
	CHECK(text.find("bounded: yes (3)\n") != std::string::npos);
	CHECK(text.find("safe: no\n") != std::string::npos);
	CHECK(text.find("perpetual: no\n") != std::string::npos);

	AnalysisOptions capped;
	capped.state_cap = 2;
	auto c = analyze(ring3, r3, capped);
	CHECK_FALSE(c.complete);
	CHECK_FALSE(c.live.has_value());
	CHECK_FALSE(c.bound.has_value());
	CHECK(c.warnings.size() == 1);
	Json j = to_json(ring3, r3, c);
	CHECK(j["complete"] == false);
	CHECK(j["live"].is_null());
}

TEST_CASE("analysis JSON layout")
{
	auto [choice, m0] = corpus("choice1");
	Json j = to_json(choice, m0, analyze(choice, m0));
	std::vector<std::string> keys;
	for (auto it = j.begin(); it != j.end(); ++it)
		keys.push_back(it.key());
	CHECK(keys == std::vector<std::string>{"net", "places", "transitions", "arcs", "initial", "weakly_connected",
					       "free_choice", "t_net", "strongly_connected", "clusters", "states",
					       "complete", "live", "bound", "safe", "regeneration_clusters", "perpetual",
					       "warnings"});
	CHECK(j["clusters"][0].dump() == R"(["p0","ta","tb"])");
	CHECK(j["initial"].dump() == R"({"p0":1})");
}

TEST_CASE("reachability and lucency JSON")
{
	auto [ring3, r3] = corpus("ring2x3");
	auto rg = explore(ring3, r3);
	Json g = to_json(rg);
	CHECK(g["complete"] == true);
	CHECK(g["states"].size() == 4);
	CHECK(g["states"][0]["marking"].dump() == R"({"p1":2,"p2":1})");
	CHECK(g["states"][0]["enabled"].dump() == R"(["t1","t2"])");
	CHECK(g["edges"].size() == rg.edges().size());

	Json l = to_json(rg, lucency_bruteforce(rg));
	CHECK(l["verdict"] == "not_lucent");
	REQUIRE(l["witnesses"].size() == 1);
	CHECK(l["witnesses"][0]["markings"][1].dump() == R"({"p1":1,"p2":2})");
	CHECK(l["witnesses"][0]["enabled"].dump() == R"(["t1","t2"])");
}

TEST_CASE("exhaustion JSON and DOT")
{
	auto [choice, m0] = corpus("choice1");
	auto exh = cp_exhaustion(choice, cluster_of(choice, choice.at("p0")));
	Json j = to_json(choice, exh);
	CHECK(j["layers"][0]["nodes"].dump() == R"(["p1","ta","tc"])");
	CHECK(j["layers"][0]["way_in"] == "ta");
	CHECK(j["layers"][0]["way_outs"].dump() == R"(["tc"])");
	CHECK(j["final_tnet"].dump() == R"(["p0","p2","tb","td"])");
	CHECK(j["way_in_places"].dump() == R"(["p0"])");
	CHECK(j["critical_transitions"].dump() == R"(["tb"])");

	std::string dot = to_dot(choice, m0, exh);
	CHECK(dot.starts_with("digraph \"CHOICE1\" {\n"));
	CHECK(dot.find("subgraph cluster_layer0 {") != std::string::npos);
	CHECK(dot.find("subgraph cluster_final {") != std::string::npos);
	CHECK(dot.find("\"p0\" [shape=circle, label=\"p0\\n1\"];") != std::string::npos);
	CHECK(dot.find("\"tc\" -> \"p0\";") != std::string::npos);
	CHECK(dot.ends_with("}\n"));

	std::string plain = to_dot(choice, m0);
	CHECK(plain.find("subgraph") == std::string::npos);
	CHECK(plain.find("\"ta\" [shape=box];") != std::string::npos);
	std::size_t arcs = 0;
	for (std::size_t at = plain.find("->"); at != std::string::npos; at = plain.find("->", at + 2))
		++arcs;
	CHECK(arcs == choice.arcs().size());
}
