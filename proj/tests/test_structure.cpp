#include <catch_amalgamated.hpp>

#include <set>

#include "lucent/cp_exhaust.h"
#include "lucent/reachability.h"
#include "lucent/structure.h"
#include "support/corpus.h"
#include "support/generator.h"
#include "support/oracles.h"

using namespace lucent;
using lucent::testing::corpus;

namespace {

Path path_of(const Net &net, std::initializer_list<std::string_view> names)
{
	Path p;
	for (auto n : names)
		p.nodes.push_back(net.at(n));
	return p;
}

// Small T-systems: the corpus rings plus random marked graphs.
std::vector<lucent::testing::Generated> small_tsystems()
{
	auto out = lucent::testing::random_perpetual_tsystems(3, 25, 12);
	for (std::string stem : {"ring2", "ring4"}) {
		auto [net, m] = corpus(stem);
		Cluster cl = cluster_of(net, net.at("t1"));
		out.push_back({std::move(net), std::move(m), std::move(cl), stem});
	}
	return out;
}

bool spans_p_subnet(const Net &net, const Path &circuit)
{
	NodeSet nodes(net.node_count(), circuit.nodes);
	for (Node t : circuit.nodes) {
		if (!net.is_transition(t))
			continue;
		auto in = std::count_if(net.pre(t).begin(), net.pre(t).end(), [&](Node p) { return nodes.contains(p); });
		auto out = std::count_if(net.post(t).begin(), net.post(t).end(), [&](Node p) { return nodes.contains(p); });
		if (in != 1 || out != 1)
			return false;
	}
	return true;
}

} // namespace

TEST_CASE("strong connectivity")
{
	Net choice = corpus("choice1").net;
	CHECK(is_strongly_connected(choice));
	CHECK_FALSE(is_strongly_connected(span(choice, choice.set_of({"ta", "p1", "tc"}))));
	CHECK(is_strongly_connected(choice, choice.set_of({"p2"})));
	CHECK_FALSE(is_strongly_connected(choice, choice.empty_set()));

	for (const auto &g : lucent::testing::random_perpetual_systems(21, 15)) {
		CHECK(is_strongly_connected(g.net) == oracle::strongly_connected(g.net, g.net.nodes()));
		for (const auto &c : clusters(g.net)) {
			NodeSet rest = c.nodes.inverted();
			CHECK(is_strongly_connected(g.net, rest) == oracle::strongly_connected(g.net, rest.nodes()));
		}
	}
}

TEST_CASE("elementary circuits")
{
	Net ring = corpus("ring2").net;
	auto rc = elementary_circuits(ring);
	REQUIRE(rc.size() == 1);
	CHECK(rc.front() == path_of(ring, {"p1", "t1", "p2", "t2"}));

	Net choice = corpus("choice1").net;
	auto cc = elementary_circuits(choice);
	REQUIRE(cc.size() == 2);
	for (const auto &c : cc)
		CHECK(c.nodes.front() == choice.at("p0"));
	CHECK(elementary_circuits(choice, choice.set_of({"ta", "p1", "tc"})).empty());

	CHECK_THROWS_AS(elementary_circuits(choice, 1), CapExceeded);
}

TEST_CASE("elementary circuits and paths match brute force")
{
	for (const auto &g : lucent::testing::random_perpetual_systems(8, 12, {14, 3000, 3})) {
		std::set<std::vector<Node>> ours;
		for (const auto &c : elementary_circuits(g.net))
			ours.insert(c.nodes);
		CHECK(ours == oracle::elementary_circuits(g.net));

		std::set<std::vector<Node>> paths;
		for_each_elementary_path(g.net, g.net.all_nodes(), std::nullopt, default_enum_cap, [&](const Path &p) {
			paths.insert(p.nodes);
			return true;
		});
		CHECK(paths == oracle::elementary_paths(g.net, std::vector<bool>(g.net.node_count(), true)));
	}
}

TEST_CASE("P-components")
{
	Net choice = corpus("choice1").net;
	// CHOICE1 is a state machine: closing p0 under its pre- and postset
	// pulls in both branches, so the whole net is the only component.
	auto comps = p_components(choice);
	REQUIRE(comps.size() == 1);
	CHECK(comps.front().nodes == choice.all_nodes());
	CHECK(is_covered_by_p_components(choice));

	Net ring = corpus("ring2").net;
	auto rcomps = p_components(ring);
	REQUIRE(rcomps.size() == 1);
	CHECK(rcomps.front().nodes == ring.all_nodes());

	// Two places feeding one joining transition and fed back by a fork: no
	// single component can hold the join with both places.
	NetSpec spec{"join", {"a", "b"}, {"fork", "join"}, {{"a", "join"}, {"b", "join"}, {"join", "a"}, {"fork", "b"}}};
	spec.arcs.emplace_back("b", "fork");
	Net join = Net::from_spec(spec);
	std::set<std::vector<Node>> ours;
	for (const auto &c : p_components(join))
		ours.insert(c.nodes.nodes());
	CHECK(ours == oracle::p_components(join));
	for (const auto &c : ours) {
		std::size_t places = 0;
		for (Node n : c)
			places += join.is_place(n);
		CHECK(places == 1);
	}
}

TEST_CASE("P-components match subset enumeration and cover well-formed nets")
{
	auto systems = lucent::testing::random_perpetual_systems(17, 20, {24, 3000, 3});
	for (std::string stem : {"choice1", "fig1"}) {
		auto [net, m] = corpus(stem);
		systems.push_back({std::move(net), std::move(m), {}, stem});
	}
	for (const auto &g : systems) {
		auto comps = p_components(g.net);
		std::set<std::vector<Node>> ours;
		for (const auto &c : comps)
			ours.insert(c.nodes.nodes());
		CHECK(ours == oracle::p_components(g.net));
		CHECK(is_covered_by(g.net, comps));
		// Every circuit spanning a P-subnet lies in some P-component.
		for (const auto &circuit : elementary_circuits(g.net)) {
			if (!spans_p_subnet(g.net, circuit))
				continue;
			bool inside = std::any_of(comps.begin(), comps.end(), [&](const PComponent &c) {
				return std::all_of(circuit.nodes.begin(), circuit.nodes.end(),
						   [&](Node n) { return c.nodes.contains(n); });
			});
			CHECK(inside);
		}
	}
}

TEST_CASE("P-components of a T-net are its elementary circuits")
{
	for (const auto &g : small_tsystems()) {
		std::set<std::vector<Node>> a, b;
		for (const auto &c : p_components(g.net))
			a.insert(c.nodes.nodes());
		for (const auto &c : elementary_circuits(g.net)) {
			auto nodes = c.nodes;
			std::sort(nodes.begin(), nodes.end());
			b.insert(nodes);
		}
		CHECK(a == b);
	}
}

TEST_CASE("token-free feeding paths")
{
	Net ring = corpus("ring2").net;
	auto w = token_free_feed(ring, Marking::of(ring, {{"p2", 1}}), ring.at("t1"), ring.at("p1"));
	CHECK(w.tau == ring.at("t2"));
	CHECK(w.delta == path_of(ring, {"t2", "p1", "t1"}));

	Net ring4 = corpus("ring4").net;
	auto w4 = token_free_feed(ring4, Marking::of(ring4, {{"p1", 1}}), ring4.at("t3"), ring4.at("p3"));
	CHECK(w4.tau == ring4.at("t1"));
	CHECK(w4.delta == path_of(ring4, {"t1", "p2", "t2", "p3", "t3"}));

	CHECK_THROWS_AS(token_free_feed(ring, Marking::of(ring, {{"p1", 1}}), ring.at("t1"), ring.at("p1")),
			PreconditionError);
	Net choice = corpus("choice1").net;
	try {
		token_free_feed(choice, Marking::of(choice, {{"p0", 1}}), choice.at("tc"), choice.at("p1"));
		FAIL("expected PreconditionError");
	} catch (const PreconditionError &e) {
		CHECK(std::string(e.what()) == "not a T-net");
	}
	CHECK_THROWS_AS(token_free_feed(ring, Marking(2), ring.at("t1"), ring.at("p1")), CheckFailure);
}

TEST_CASE("feeding path reaching back around a ring")
{
	// Ring t0 -> a -> t1 -> b -> t2 -> c -> t3 -> d -> t0 with one token on b.
	// The only enabled transition is t2, three places upstream of a.
	NetSpec spec{"split", {"a", "b", "c", "d"}, {"t0", "t1", "t2", "t3"},
		     {{"t0", "a"}, {"a", "t1"}, {"t1", "b"}, {"b", "t2"}, {"t2", "c"}, {"c", "t3"}, {"t3", "d"}, {"d", "t0"}}};
	Net net = Net::from_spec(spec);
	Marking m = Marking::of(net, {{"b", 1}});
	auto w = token_free_feed(net, m, net.at("t1"), net.at("a"));
	CHECK(w.tau == net.at("t2"));
	CHECK(w.delta == path_of(net, {"t2", "c", "t3", "d", "t0", "a", "t1"}));
	CHECK(w.iterations <= net.node_count());
}

TEST_CASE("feeding witnesses agree with the brute-force path oracle")
{
	std::size_t queries = 0;
	for (const auto &g : small_tsystems()) {
		REQUIRE(g.net.node_count() <= 12);
		auto rg = explore(g.net, g.initial);
		REQUIRE(is_live(rg));
		for (const auto &m : rg.states())
			for (Node t : g.net.transitions())
				for (Node q : g.net.pre(t)) {
					if (m[q] != 0)
						continue;
					++queries;
					auto expected = oracle::feed_paths(g.net, m, t, q);
					std::set<std::vector<Node>> all;
					for (const auto &w : all_feed_witnesses(g.net, m, t, q))
						all.insert(w.delta.nodes);
					CHECK(all == expected);

					auto w = token_free_feed(g.net, m, t, q);
					CHECK(expected.contains(w.delta.nodes));
					CHECK(w.iterations <= g.net.node_count());
				}
	}
	CHECK(queries > 50);
}

TEST_CASE("with a marked pre-place some feeding path avoids the cluster transition")
{
	for (const auto &g : small_tsystems()) {
		auto rg = explore(g.net, g.initial);
		Node t_cl = g.cluster.transitions.front();
		for (const auto &m : rg.states())
			for (Node t : g.net.transitions()) {
				auto pre = g.net.pre(t);
				if (std::none_of(pre.begin(), pre.end(), [&](Node p) { return m[p] == 1; }))
					continue;
				for (Node q : pre) {
					if (m[q] != 0)
						continue;
					auto paths = oracle::feed_paths(g.net, m, t, q);
					bool avoids = std::any_of(paths.begin(), paths.end(), [&](const std::vector<Node> &p) {
						return std::find(p.begin(), p.end() - 1, t_cl) == p.end() - 1;
					});
					CHECK(avoids);
				}
			}
	}
}

TEST_CASE("path token counts")
{
	Net ring = corpus("ring2").net;
	CHECK(max_path_token_count(ring, Marking::of(ring, {{"p1", 1}}), ring.at("t1")) == 1);
	CHECK(max_path_token_count(ring, Marking(2), std::nullopt) == 0);
	CHECK(max_path_token_count(ring, Marking::of(ring, {{"p1", 1}, {"p2", 1}}), std::nullopt) == 2);
	CHECK_THROWS_AS(max_path_token_count(ring, Marking(2), std::nullopt, 2), CapExceeded);

	for (const auto &g : small_tsystems()) {
		auto rg = explore(g.net, g.initial);
		Node t_cl = g.cluster.transitions.front();
		for (const auto &m : rg.states())
			CHECK(max_path_token_count(g.net, m, t_cl) <= 1);
	}
}

TEST_CASE("a circuit through both branches of a fork lies in no P-component")
{
	// Live and safe free-choice system: s forks into q1, q2; the cluster
	// {q1, q2, r, x} either exits or loops via w and b, which forks again.
	NetSpec spec{"forkloop", {"a", "q1", "q2", "w", "z"}, {"b", "r", "s", "x", "y"},
		     {{"a", "s"}, {"s", "q1"}, {"s", "q2"}, {"q1", "r"}, {"q2", "r"}, {"q1", "x"}, {"q2", "x"},
		      {"r", "w"}, {"w", "b"}, {"b", "q1"}, {"b", "q2"}, {"x", "z"}, {"z", "y"}, {"y", "a"}}};
	Net net = Net::from_spec(spec);
	Path circuit = path_of(net, {"a", "s", "q1", "r", "w", "b", "q2", "x", "z", "y"});
	REQUIRE(is_path(net, circuit));
	auto circuits = elementary_circuits(net);
	CHECK(std::find(circuits.begin(), circuits.end(), circuit) != circuits.end());
	CHECK_FALSE(spans_p_subnet(net, circuit));
	for (const auto &c : p_components(net))
		CHECK_FALSE((c.nodes.contains(net.at("q1")) && c.nodes.contains(net.at("q2"))));
	CHECK(is_covered_by_p_components(net));
}
