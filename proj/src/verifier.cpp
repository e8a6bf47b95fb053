#include "lucent/verifier.h"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "lucent/dsl.h"
#include "lucent/shutdown.h"
#include "lucent/structure.h"

namespace lucent {

std::string to_string(CheckStatus s)
{
	return s == CheckStatus::passed ? "passed" : "failed";
}

namespace {

const std::map<std::string, std::string> &anchors()
{
	static const std::map<std::string, std::string> table{
		{"premise.net", "the input is a connected ordinary net"},
		{"premise.free_choice", "the system is free-choice"},
		{"premise.cluster", "the distinguished node set is a cluster of the net"},
		{"premise.state_space", "the reachable state space is finite within the cap"},
		{"premise.live_bounded", "the system is live and bounded"},
		{"premise.regeneration_cluster", "the cluster marking is a home marking"},
		{"fundamental_property",
		 "every P-component holds one place of the regeneration cluster and one token; the system is safe"},
		{"exhaustion.construct", "a cluster-adapted CP-exhaustion exists for a well-formed free-choice net"},
		{"exhaustion.host_revalidation", "a CP-subnet of a complement is also a CP-subnet of the host"},
		{"exhaustion.adaptedness_equivalence",
		 "a CP-subnet misses the cluster iff its complement holds a cluster transition iff it holds all cluster places"},
		{"exhaustion.partition", "layers and the final T-net partition the net and the cluster survives"},
		{"layers.acyclic", "an adapted CP-subnet has no circuits"},
		{"layers.path_token_bound", "every path in an adapted CP-subnet carries at most one token"},
		{"layers.shutdown_empties", "firing a shutdown sequence removes all tokens from an adapted CP-subnet"},
		{"layers.enabling_by_layer_firing",
		 "a transition at the end of a marked path in the layer can be enabled without the way-in"},
		{"layers.marking_equality", "enabling-equivalent restrictions to an adapted CP-subnet are equal"},
		{"layers.common_shutdown",
		 "a shutdown sequence at one marking is a shutdown sequence at every layer-equivalent marking"},
		{"propagation.perpetuality",
		 "after a shutdown the complement of an adapted CP-subnet is perpetual with the remaining cluster"},
		{"global_shutdown.common", "enabling-equivalent markings share a global shutdown sequence"},
		{"global_shutdown.difference_identity",
		 "the global shutdown preserves the marking difference on the final T-net"},
		{"global_shutdown.untouched_places", "the global shutdown only adds tokens to way-in places of the final T-net"},
		{"final_tnet.reachable_and_equivalent",
		 "shut-down restrictions are reachable and enabling-equivalent in the final T-system"},
		{"tsystem.perpetual", "the final T-system is perpetual"},
		{"tsystem.fundamental_property", "every circuit passes the cluster transition and holds exactly one token"},
		{"tsystem.feed_witnesses",
		 "an unmarked pre-place is reached by a token-free elementary path from an enabled transition"},
		{"tsystem.frozen_token_witness",
		 "with a marked pre-place the feeding path can avoid the cluster transition"},
		{"tsystem.path_token_bound", "every elementary path avoiding the cluster transition holds at most one token"},
		{"tsystem.pair_refutation", "distinct reachable markings of the T-system enable different transitions"},
		{"tsystem.lucent", "the perpetual T-system is lucent"},
		{"synthesis.marking_equality", "enabling-equivalent reachable markings are equal"},
		{"cross_validation.bruteforce", "exhaustive search confirms lucency"},
		{"diagnostic.token_free_feeding",
		 "each unmarked pre-place is fed along a token-free elementary path from an enabled transition"},
		{"diagnostic.distinct_pair_path",
		 "distinct enabling-equivalent markings expose a cluster-avoiding path with two tokens"},
		{"diagnostic.cluster_avoiding_safeness", "every elementary path avoiding the cluster holds at most one token"},
	};
	return table;
}

// A failed check with structured witness data.
class Violation : public CheckFailure {
public:
	Violation(const std::string &what, Json witness) : CheckFailure(what), witness_(std::move(witness)) {}

	const Json &witness() const { return witness_; }

private:
	Json witness_;
};

Json with_error(Json witness, const std::string &message)
{
	Json out;
	out["error"] = message;
	for (auto &[k, v] : witness.items())
		out[k] = v;
	return out;
}

class Runner {
public:
	explicit Runner(std::vector<CheckRecord> &records) : records_(records) {}

	bool failed() const { return failed_; }

	// Takes over the records of a check group run elsewhere.
	void append(std::vector<CheckRecord> records)
	{
		for (auto &r : records) {
			failed_ = failed_ || !r.passed();
			records_.push_back(std::move(r));
		}
	}

	bool run(const std::string &id, const std::function<Json()> &body)
	{
		if (failed_)
			return false;
		CheckRecord r;
		r.id = id;
		r.anchor = anchor_of(id);
		try {
			r.witness = body();
		} catch (const Violation &v) {
			r.status = CheckStatus::failed;
			r.witness = with_error(v.witness(), v.what());
		} catch (const CapExceeded &e) {
			r.status = CheckStatus::failed;
			r.indeterminate = true;
			r.witness = with_error(Json::object(), e.what());
		} catch (const Error &e) {
			r.status = CheckStatus::failed;
			r.witness = with_error(Json::object(), e.what());
		}
		failed_ = !r.passed();
		records_.push_back(std::move(r));
		return !failed_;
	}

private:
	std::vector<CheckRecord> &records_;
	bool failed_ = false;
};

bool contains(const std::vector<Node> &sorted, Node n)
{
	return std::binary_search(sorted.begin(), sorted.end(), n);
}

Json pair_json(const ReachabilityGraph &rg, std::size_t i, std::size_t j)
{
	Json out;
	out["states"] = {i, j};
	out["markings"] = {to_json(rg.net(), rg.states()[i]), to_json(rg.net(), rg.states()[j])};
	return out;
}

Json sequence_json(const Net &net, const FiringSequence &seq)
{
	return names_json(net, seq.transitions);
}

// The place lists of all elementary paths inside `nodes`.
std::vector<std::vector<Node>> path_places(const Net &net, const NodeSet &nodes, std::size_t cap)
{
	std::vector<std::vector<Node>> out;
	std::set<std::vector<Node>> seen;
	for_each_elementary_path(net, nodes, std::nullopt, cap, [&](const Path &p) {
		std::vector<Node> places;
		for (Node n : p.nodes)
			if (net.is_place(n))
				places.push_back(n);
		if (!places.empty() && seen.insert(places).second)
			out.push_back(std::move(places));
		return true;
	});
	return out;
}

std::optional<std::size_t> overloaded_path(const std::vector<std::vector<Node>> &paths, const Marking &m,
					 std::uint64_t limit)
{
	for (std::size_t i = 0; i < paths.size(); ++i) {
		std::uint64_t count = 0;
		for (Node p : paths[i])
			count += m[p];
		if (count > limit)
			return i;
	}
	return std::nullopt;
}

// Transitions of `net` enabled at some marking reachable from m by firing
// only `allowed` transitions.
NodeSet enabled_somewhere(const Net &net, const Marking &m, const std::vector<Node> &allowed, std::size_t cap)
{
	NodeSet out = net.empty_set();
	std::unordered_set<Marking, MarkingHash> seen{m};
	std::deque<Marking> queue{m};
	while (!queue.empty()) {
		Marking cur = std::move(queue.front());
		queue.pop_front();
		for (Node t : enabled(net, cur))
			out.insert(t);
		for (Node t : allowed) {
			if (!is_enabled(net, cur, t))
				continue;
			Marking next = fire(net, cur, t);
			if (seen.insert(next).second) {
				if (seen.size() > cap)
					throw CapExceeded("layer exploration exceeded the state cap");
				queue.push_back(std::move(next));
			}
		}
	}
	return out;
}

NodeSet forward_within(const Net &net, const NodeSet &nodes, Node from)
{
	NodeSet seen = net.empty_set();
	std::deque<Node> queue{from};
	seen.insert(from);
	while (!queue.empty()) {
		Node x = queue.front();
		queue.pop_front();
		for (Node y : net.post(x))
			if (nodes.contains(y) && !seen.contains(y)) {
				seen.insert(y);
				queue.push_back(y);
			}
	}
	return seen;
}

struct LayerView {
	Net net;
	CpSubnet cp;
};

// The layer as a standalone net, with its CP-subnet data translated.
LayerView layer_view(const Net &host, const CpSubnet &layer)
{
	LayerView v{span(host, layer.nodes).induced(), {}};
	v.cp.nodes = v.net.all_nodes();
	v.cp.way_in = v.net.at(host.node_name(layer.way_in));
	for (Node t : layer.way_outs)
		v.cp.way_outs.push_back(v.net.at(host.node_name(t)));
	return v;
}

Cluster cluster_in(const Net &from, const Cluster &cl, const Net &to)
{
	return make_cluster(to, translate(from, cl.nodes, to));
}

void require_tsystem(const ReachabilityGraph &rg, const Cluster &cl)
{
	const Net &net = rg.net();
	if (!is_t_net(net))
		throw PreconditionError("not a T-net");
	if (!rg.complete())
		throw PreconditionError("indeterminate: state cap hit");
	if (cl.nodes.universe() != net.node_count() || cl.nodes.empty() ||
	    !(cluster_of(net, cl.nodes.nodes().front()) == cl))
		throw PreconditionError("not a cluster of '" + net.name() + "'");
	if (!is_live(rg))
		throw PreconditionError("not perpetual: not live");
	if (!is_home_marking(rg, cluster_marking(net, cl)))
		throw PreconditionError("not perpetual: cluster marking is not a home marking");
}

enum class Refutation { first_transition, tau_q, tau_p };

// Replays the distinguishing argument for two distinct markings of a
// perpetual T-system and returns the transition that tells them apart.
std::pair<Refutation, Node> refute_pair(const Net &tnet, const Marking &m1, const Marking &m2, Node t_cl)
{
	const Marking *a = &m1, *b = &m2;
	std::optional<Node> p;
	for (int round = 0; round < 2 && !p; ++round) {
		for (Node x : tnet.places())
			if ((*a)[x] > (*b)[x]) {
				p = x;
				break;
			}
		if (!p)
			std::swap(a, b);
	}
	if (!p)
		throw CheckFailure("pair refutation called on equal markings");
	Node t = tnet.post(*p).front();
	bool en_a = is_enabled(tnet, *a, t), en_b = is_enabled(tnet, *b, t);
	if (en_a != en_b)
		return {Refutation::first_transition, t};
	if (en_a)
		throw Violation("both markings enable the successor of a place they disagree on",
				Json{{"place", tnet.node_name(*p)}, {"transition", tnet.node_name(t)}});

	Node q = *p;
	for (Node x : tnet.pre(t))
		if ((*a)[x] == 0) {
			q = x;
			break;
		}
	FeedWitness wq = token_free_feed(tnet, *a, t, q);
	if (!is_enabled(tnet, *b, wq.tau))
		return {Refutation::tau_q, wq.tau};

	FeedWitness wp = token_free_feed(tnet, *b, t, *p);
	if (!is_enabled(tnet, *a, wp.tau))
		return {Refutation::tau_p, wp.tau};

	// Both feeders are enabled everywhere: firing tau_p at the first marking
	// puts two tokens on the segment up to p.
	Marking after = fire(tnet, *a, wp.tau);
	Path segment{{wp.delta.nodes.begin(), wp.delta.nodes.end() - 1}};
	Json w{{"transition", tnet.node_name(t)},
	       {"segment", to_json(tnet, segment)},
	       {"tokens", token_count(tnet, after, segment)},
	       {"avoids_cluster", std::find(segment.nodes.begin(), segment.nodes.end(), t_cl) == segment.nodes.end()}};
	throw Violation("enabling-equivalent distinct markings: feeding segment carries two tokens", w);
}

} // namespace

std::string anchor_of(const std::string &id)
{
	auto it = anchors().find(id);
	return it == anchors().end() ? std::string{} : it->second;
}

std::vector<CheckRecord> verify_tsystem_lucency(const Net &tnet, const Marking &m0, const Cluster &cl,
						const VerifierOptions &options)
{
	auto rg = explore(tnet, m0, options.state_cap);
	require_tsystem(rg, cl);
	Node t_cl = cl.transitions.front();

	std::vector<CheckRecord> records;
	Runner run(records);
	run.run("tsystem.perpetual", [&] { return Json{{"states", rg.size()}, {"cluster_transition", tnet.node_name(t_cl)}}; });

	run.run("tsystem.fundamental_property", [&] {
		auto report = check_fundamental_property(rg, cl, options.enum_cap);
		if (!report.ok())
			throw Violation(report.failures.front(), Json{{"failures", report.failures}});
		return Json{{"circuits", report.circuits}, {"p_components", report.components}};
	});

	run.run("tsystem.feed_witnesses", [&] {
		std::size_t queries = 0, max_iterations = 0;
		for (std::size_t s = 0; s < rg.size(); ++s) {
			const Marking &m = rg.states()[s];
			for (Node t : tnet.transitions())
				for (Node q : tnet.pre(t)) {
					if (m[q] != 0)
						continue;
					++queries;
					auto where = [&] {
						return Json{{"state", s}, {"marking", to_json(tnet, m)}, {"transition", tnet.node_name(t)},
							    {"place", tnet.node_name(q)}};
					};
					FeedWitness w = token_free_feed(tnet, m, t, q);
					max_iterations = std::max(max_iterations, w.iterations);
					const auto &nodes = w.delta.nodes;
					bool shape = nodes.size() >= 3 && nodes.front() == w.tau && nodes.back() == t &&
						     nodes[nodes.size() - 2] == q;
					if (!shape || !is_path(tnet, w.delta) || !w.delta.is_elementary() ||
					    !is_enabled(tnet, m, w.tau) || token_count(tnet, m, w.delta) != 0)
						throw Violation("invalid feeding witness",
								with_error(where(), to_string(tnet, w.delta)));
					auto all = all_feed_witnesses(tnet, m, t, q, options.enum_cap);
					bool listed = std::any_of(all.begin(), all.end(),
								  [&](const FeedWitness &x) { return x.delta == w.delta; });
					if (!listed)
						throw Violation("feeding witness missing from the exhaustive list",
								with_error(where(), to_string(tnet, w.delta)));
				}
		}
		return Json{{"queries", queries}, {"max_iterations", max_iterations}};
	});

	run.run("tsystem.frozen_token_witness", [&] {
		std::size_t queries = 0;
		for (std::size_t s = 0; s < rg.size(); ++s) {
			const Marking &m = rg.states()[s];
			for (Node t : tnet.transitions()) {
				auto pre = tnet.pre(t);
				bool frozen = std::any_of(pre.begin(), pre.end(), [&](Node p) { return m[p] == 1; });
				if (!frozen)
					continue;
				for (Node q : pre) {
					if (m[q] != 0)
						continue;
					++queries;
					auto all = all_feed_witnesses(tnet, m, t, q, options.enum_cap);
					bool found = std::any_of(all.begin(), all.end(), [&](const FeedWitness &w) {
						if (token_count(tnet, m, w.delta) != 0)
							return false;
						return std::find(w.delta.nodes.begin(), w.delta.nodes.end() - 1, t_cl) ==
						       w.delta.nodes.end() - 1;
					});
					if (!found)
						throw Violation("no token-free feeding path avoiding the cluster transition",
								Json{{"state", s}, {"marking", to_json(tnet, m)},
								     {"transition", tnet.node_name(t)}, {"place", tnet.node_name(q)}});
				}
			}
		}
		return Json{{"queries", queries}};
	});

	run.run("tsystem.path_token_bound", [&] {
		NodeSet allowed = tnet.all_nodes();
		allowed.erase(t_cl);
		auto paths = path_places(tnet, allowed, options.enum_cap);
		for (std::size_t s = 0; s < rg.size(); ++s)
			if (auto heavy = overloaded_path(paths, rg.states()[s], 1))
				throw Violation("path avoiding the cluster transition holds two tokens",
						Json{{"state", s}, {"marking", to_json(tnet, rg.states()[s])},
						     {"places", names_json(tnet, paths[*heavy])}});
		return Json{{"paths", paths.size()}, {"states", rg.size()}};
	});

	run.run("tsystem.pair_refutation", [&] {
		std::size_t pairs = 0, by_t = 0, by_q = 0, by_p = 0;
		for (std::size_t i = 0; i < rg.size(); ++i)
			for (std::size_t j = i + 1; j < rg.size(); ++j) {
				++pairs;
				std::pair<Refutation, Node> r;
				try {
					r = refute_pair(tnet, rg.states()[i], rg.states()[j], t_cl);
				} catch (const Violation &v) {
					Json w = pair_json(rg, i, j);
					for (auto &[k, x] : v.witness().items())
						w[k] = x;
					throw Violation(v.what(), w);
				}
				bool differs = contains(rg.enabled_at(i), r.second) != contains(rg.enabled_at(j), r.second);
				if (!differs)
					throw Violation("refutation named a transition enabled at both markings",
							with_error(pair_json(rg, i, j), tnet.node_name(r.second)));
				(r.first == Refutation::first_transition ? by_t : r.first == Refutation::tau_q ? by_q : by_p)++;
			}
		return Json{{"pairs", pairs}, {"by_place_successor", by_t}, {"by_first_feeder", by_q}, {"by_second_feeder", by_p}};
	});

	run.run("tsystem.lucent", [&] {
		auto report = lucency_bruteforce(rg);
		if (report.verdict != LucencyVerdict::lucent) {
			auto [i, j] = report.witnesses.front();
			throw Violation("brute-force search found enabling-equivalent distinct markings", pair_json(rg, i, j));
		}
		return Json{{"states", rg.size()}};
	});
	return records;
}

std::vector<CheckRecord> verify_layer_token_counts(const ReachabilityGraph &rg, const CpExhaustion &exh,
						   const VerifierOptions &options)
{
	require_complete(rg);
	const Net &net = rg.net();
	std::vector<CheckRecord> records;
	Runner run(records);

	run.run("layers.acyclic", [&] {
		for (std::size_t i = 0; i < exh.layers.size(); ++i) {
			auto circuits = elementary_circuits(net, exh.layers[i].nodes, options.enum_cap);
			if (!circuits.empty())
				throw Violation("layer has a circuit",
						Json{{"layer", i}, {"circuit", to_json(net, circuits.front())}});
		}
		return Json{{"layers", exh.layers.size()}};
	});

	run.run("layers.path_token_bound", [&] {
		std::size_t total = 0;
		for (std::size_t i = 0; i < exh.layers.size(); ++i) {
			auto paths = path_places(net, exh.layers[i].nodes, options.enum_cap);
			total += paths.size();
			for (std::size_t s = 0; s < rg.size(); ++s)
				if (auto heavy = overloaded_path(paths, rg.states()[s], 1))
					throw Violation("layer path holds two tokens",
							Json{{"layer", i}, {"state", s}, {"marking", to_json(net, rg.states()[s])},
							     {"places", names_json(net, paths[*heavy])}});
		}
		return Json{{"paths", total}, {"states", rg.size()}};
	});

	run.run("layers.shutdown_empties", [&] {
		std::size_t longest = 0;
		for (std::size_t i = 0; i < exh.layers.size(); ++i) {
			const auto &layer = exh.layers[i];
			Subnet sub = span(net, layer.nodes);
			for (std::size_t s = 0; s < rg.size(); ++s) {
				Shutdown sd = shutdown_sequence(net, layer, rg.states()[s], options.state_cap);
				longest = std::max(longest, sd.sequence.transitions.size());
				auto &seq = sd.sequence.transitions;
				if (std::find(seq.begin(), seq.end(), layer.way_in) != seq.end())
					throw Violation("shutdown sequence fires the way-in", Json{{"layer", i}, {"state", s}});
				if (!restrict(net, sd.marking, sub).is_zero())
					throw Violation("shutdown left tokens in the layer",
							Json{{"layer", i}, {"state", s}, {"sequence", sequence_json(net, sd.sequence)},
							     {"marking", to_json(net, sd.marking)}});
			}
		}
		return Json{{"shutdowns", exh.layers.size() * rg.size()}, {"longest", longest}};
	});

	run.run("layers.enabling_by_layer_firing", [&] {
		std::size_t queries = 0;
		for (std::size_t i = 0; i < exh.layers.size(); ++i) {
			LayerView v = layer_view(net, exh.layers[i]);
			Subnet sub = span(net, exh.layers[i].nodes);
			auto allowed = shutdown_transitions(v.net, v.cp);
			for (std::size_t s = 0; s < rg.size(); ++s) {
				Marking local = restrict(net, rg.states()[s], sub);
				std::optional<NodeSet> reachable;
				for (Node p : v.net.places()) {
					if (local[p] != 1)
						continue;
					if (!reachable)
						reachable = enabled_somewhere(v.net, local, allowed, options.state_cap);
					for (Node t : forward_within(v.net, v.cp.nodes, p).nodes()) {
						if (!v.net.is_transition(t))
							continue;
						++queries;
						if (!reachable->contains(t))
							throw Violation("transition after a marked place cannot be enabled inside the layer",
									Json{{"layer", i}, {"state", s}, {"place", v.net.node_name(p)},
									     {"transition", v.net.node_name(t)}});
					}
				}
			}
		}
		return Json{{"queries", queries}};
	});
	return records;
}

std::vector<CheckRecord> verify_marking_equality_on_layers(const ReachabilityGraph &rg, const CpExhaustion &exh,
							   const VerifierOptions &options)
{
	require_complete(rg);
	const Net &net = rg.net();
	std::vector<CheckRecord> records;
	Runner run(records);

	// Per layer: states grouped by the enabled set of their restriction.
	std::vector<std::vector<std::vector<std::size_t>>> groups(exh.layers.size());
	for (std::size_t i = 0; i < exh.layers.size(); ++i) {
		LayerView v = layer_view(net, exh.layers[i]);
		Subnet sub = span(net, exh.layers[i].nodes);
		std::map<std::vector<std::string>, std::vector<std::size_t>> by_enabled;
		for (std::size_t s = 0; s < rg.size(); ++s) {
			auto en = enabled(v.net, restrict(net, rg.states()[s], sub));
			std::vector<std::string> key;
			for (Node t : en)
				key.push_back(v.net.node_name(t));
			by_enabled[key].push_back(s);
		}
		for (auto &[key, members] : by_enabled)
			groups[i].push_back(std::move(members));
	}

	run.run("layers.marking_equality", [&] {
		Json classes = Json::array();
		for (std::size_t i = 0; i < exh.layers.size(); ++i) {
			Subnet sub = span(net, exh.layers[i].nodes);
			for (const auto &members : groups[i]) {
				Marking first = restrict(net, rg.states()[members.front()], sub);
				for (std::size_t s : members)
					if (!(restrict(net, rg.states()[s], sub) == first)) {
						Json w = pair_json(rg, members.front(), s);
						w["layer"] = i;
						throw Violation("layer restrictions are enabling-equivalent but differ", w);
					}
			}
			classes.push_back(groups[i].size());
		}
		return Json{{"classes_per_layer", classes}};
	});

	run.run("layers.common_shutdown", [&] {
		std::size_t pairs = 0;
		for (std::size_t i = 0; i < exh.layers.size(); ++i) {
			const auto &layer = exh.layers[i];
			for (const auto &members : groups[i])
				for (std::size_t a : members) {
					Shutdown sd = shutdown_sequence(net, layer, rg.states()[a], options.state_cap);
					for (std::size_t b : members) {
						++pairs;
						Json w = pair_json(rg, a, b);
						w["layer"] = i;
						w["sequence"] = sequence_json(net, sd.sequence);
						Marking after;
						try {
							after = fire_sequence(net, rg.states()[b], sd.sequence.transitions);
						} catch (const NotEnabledError &e) {
							throw Violation(std::string("shutdown sequence not enabled: ") + e.what(), w);
						}
						if (!is_shut_down(net, layer, after))
							throw Violation("shutdown sequence leaves a layer transition enabled", w);
					}
				}
		}
		return Json{{"pairs", pairs}};
	});
	return records;
}

std::vector<CheckRecord> verify_perpetuality_chain(const ReachabilityGraph &rg, const CpExhaustion &exh,
						   const Cluster &cl, const VerifierOptions &options)
{
	require_complete(rg);
	const Net &net = rg.net();
	std::vector<CheckRecord> records;
	Runner run(records);

	run.run("propagation.perpetuality", [&] {
		Net level = net;
		Marking level_m = rg.initial();
		Cluster level_cl = cluster_in(net, cl, level);
		Json levels = Json::array();
		for (std::size_t j = 0; j < exh.layers.size(); ++j) {
			auto check = is_cp_subnet(level, translate(net, exh.layers[j].nodes, level), options.cp());
			if (!check)
				throw Violation("layer is not a CP-subnet of its level",
						Json{{"layer", j}, {"violation", check.violation}});
			const CpSubnet &cp = *check.subnet;
			auto level_rg = explore(level, level_m, options.state_cap);
			if (!level_rg.complete())
				throw CapExceeded("level " + std::to_string(j) + " state space exceeds the cap");
			for (std::size_t s = 0; s < level_rg.size(); ++s) {
				try {
					propagate_perpetual(level, cp, level_cl, level_rg.states()[s], options.state_cap);
				} catch (const CheckFailure &e) {
					throw Violation(e.what(), Json{{"layer", j}, {"state", s},
								       {"marking", to_json(level, level_rg.states()[s])}});
				}
			}
			levels.push_back(Json{{"layer", j}, {"states", level_rg.size()}});
			Propagation next = propagate_perpetual(level, cp, level_cl, level_m, options.state_cap);
			level = std::move(next.complement);
			level_m = std::move(next.marking);
			level_cl = cluster_in(net, cl, level);
		}
		return Json{{"levels", levels}, {"final_marking", to_json(level, level_m)}};
	});
	return records;
}

std::vector<CheckRecord> verify_propagation(const ReachabilityGraph &rg, const CpExhaustion &exh, const Cluster &cl,
					    const VerifierOptions &options)
{
	require_complete(rg);
	const Net &net = rg.net();
	std::vector<CheckRecord> records;
	Runner run(records);

	Subnet final_sub = span(net, exh.final_tnet);
	Net final_net = final_sub.induced();
	Cluster final_cl = cluster_in(net, cl, final_net);
	auto pairs = enabling_equivalent_pairs(rg, true);

	std::map<std::size_t, Shutdown> shutdowns;
	auto shutdown_at = [&](std::size_t s) -> const Shutdown & {
		auto it = shutdowns.find(s);
		if (it == shutdowns.end())
			it = shutdowns.emplace(s, global_shutdown(net, exh, rg.states()[s], options.state_cap)).first;
		return it->second;
	};
	std::map<std::pair<std::size_t, std::size_t>, Marking> second;

	run.run("global_shutdown.common", [&] {
		for (auto [i, j] : pairs) {
			const Shutdown &sd = shutdown_at(i);
			Json w = pair_json(rg, i, j);
			w["sequence"] = sequence_json(net, sd.sequence);
			Marking after;
			try {
				after = fire_sequence(net, rg.states()[j], sd.sequence.transitions);
			} catch (const NotEnabledError &e) {
				throw Violation(std::string("global shutdown not enabled at the second marking: ") + e.what(), w);
			}
			for (const auto &layer : exh.layers)
				if (!is_shut_down(net, layer, after))
					throw Violation("global shutdown does not shut down the second marking", w);
			second.emplace(std::make_pair(i, j), std::move(after));
		}
		return Json{{"pairs", pairs.size()}};
	});

	run.run("global_shutdown.difference_identity", [&] {
		for (auto [i, j] : pairs) {
			const Marking &a = shutdown_at(i).marking;
			const Marking &b = second.at({i, j});
			for (Node p : final_sub.places()) {
				auto lhs = static_cast<std::int64_t>(a[p]) - static_cast<std::int64_t>(b[p]);
				auto rhs = static_cast<std::int64_t>(rg.states()[i][p]) - static_cast<std::int64_t>(rg.states()[j][p]);
				if (lhs != rhs) {
					Json w = pair_json(rg, i, j);
					w["place"] = net.node_name(p);
					throw Violation("marking difference changed on the final T-net", w);
				}
			}
		}
		return Json{{"pairs", pairs.size()}};
	});

	run.run("global_shutdown.untouched_places", [&] {
		std::size_t states = 0;
		for (std::size_t s = 0; s < rg.size(); ++s) {
			const Marking &after = shutdown_at(s).marking;
			++states;
			for (Node p : final_sub.places())
				if (!contains(exh.way_in_places, p) && after[p] != rg.states()[s][p])
					throw Violation("global shutdown changed a place that is not a way-in place",
							Json{{"state", s}, {"place", net.node_name(p)}});
		}
		return Json{{"states", states}};
	});

	run.run("final_tnet.reachable_and_equivalent", [&] {
		auto final_rg = explore(final_net, cluster_marking(final_net, final_cl), options.state_cap);
		if (!final_rg.complete())
			throw CapExceeded("final T-system state space exceeds the cap");
		for (auto [i, j] : pairs) {
			Marking a = restrict(net, shutdown_at(i).marking, final_sub);
			Marking b = restrict(net, second.at({i, j}), final_sub);
			Json w = pair_json(rg, i, j);
			if (!final_rg.index_of(a) || !final_rg.index_of(b))
				throw Violation("shut-down restriction is not reachable in the final T-system", w);
			if (enabled(final_net, a) != enabled(final_net, b))
				throw Violation("shut-down restrictions are not enabling-equivalent", w);
		}
		return Json{{"pairs", pairs.size()}, {"final_states", final_rg.size()}};
	});
	return records;
}

std::string Certificate::verdict() const
{
	switch (outcome) {
	case Outcome::lucent_proved:
		return "lucent_proved";
	case Outcome::indeterminate:
		return "indeterminate(" + failed_step + ")";
	case Outcome::failed:
		break;
	}
	return "failed(" + failed_step + ")";
}

Certificate prove_lucency(const Net &net, const Marking &m0, const Cluster &cl, const VerifierOptions &options)
{
	Certificate cert;
	cert.net_name = net.name();
	cert.net_hash = net_hash(net, m0);
	if (cl.nodes.universe() != net.node_count())
		throw PreconditionError("cluster does not belong to net '" + net.name() + "'");
	cert.cluster = net.names_of(cl.nodes);

	Runner run(cert.checks);
	std::optional<ReachabilityGraph> rg;
	std::optional<CpExhaustion> exh;

	auto finish = [&]() -> Certificate & {
		auto failed = std::find_if(cert.checks.begin(), cert.checks.end(), [](const CheckRecord &r) { return !r.passed(); });
		if (failed == cert.checks.end()) {
			cert.outcome = Outcome::lucent_proved;
		} else {
			cert.failed_step = failed->id;
			cert.outcome = failed->indeterminate ? Outcome::indeterminate : Outcome::failed;
		}
		return cert;
	};
	// Appends a group of records; the group stops at its own first failure.
	auto group = [&](const std::string &fallback_id, const std::function<std::vector<CheckRecord>()> &body) {
		if (run.failed())
			return false;
		std::vector<CheckRecord> records;
		try {
			records = body();
		} catch (const Error &e) {
			bool cap = dynamic_cast<const CapExceeded *>(&e) != nullptr;
			CheckRecord r{fallback_id, anchor_of(fallback_id), CheckStatus::failed,
				      with_error(Json::object(), e.what()), cap};
			records.push_back(std::move(r));
		}
		run.append(std::move(records));
		return !run.failed();
	};

	run.run("premise.net", [&] {
		auto report = validate_net(net);
		if (!report.ok())
			throw Violation("invalid net", Json{{"errors", report.errors}});
		if (!report.weakly_connected)
			throw Violation("net is not weakly connected", Json::object());
		return Json{{"places", net.place_count()}, {"transitions", net.transition_count()}};
	});
	run.run("premise.free_choice", [&] {
		if (!is_free_choice(net))
			throw Violation("net is not free-choice", Json::object());
		return Json();
	});
	run.run("premise.cluster", [&] {
		if (cl.nodes.empty() || !(cluster_of(net, cl.nodes.nodes().front()) == cl))
			throw Violation("node set is not a cluster", Json{{"nodes", cert.cluster}});
		return Json();
	});
	run.run("premise.state_space", [&] {
		rg.emplace(explore(net, m0, options.state_cap));
		if (!rg->complete())
			throw CapExceeded("indeterminate: state cap " + std::to_string(options.state_cap) + " hit");
		return Json{{"states", rg->size()}, {"edges", rg->edges().size()}};
	});
	run.run("premise.live_bounded", [&] {
		if (!is_live(*rg))
			throw Violation("not perpetual: not live", Json::object());
		return Json{{"bound", bound(*rg)}};
	});
	run.run("premise.regeneration_cluster", [&] {
		if (!is_home_marking(*rg, cluster_marking(net, cl)))
			throw Violation("not perpetual: cluster marking is not a home marking",
					Json{{"cluster_marking", to_json(net, cluster_marking(net, cl))}});
		return Json();
	});

	run.run("fundamental_property", [&] {
		auto report = check_fundamental_property(*rg, cl, options.enum_cap);
		if (!report.ok())
			throw Violation(report.failures.front(), Json{{"failures", report.failures}});
		return Json{{"p_components", report.components}, {"safe", report.safe}};
	});

	run.run("exhaustion.construct", [&] {
		exh.emplace(cp_exhaustion(net, cl, options.cp()));
		cert.exhaustion = to_json(net, *exh);
		return Json{{"layers", exh->layers.size()}};
	});
	run.run("exhaustion.host_revalidation", [&] {
		std::vector<NodeSet> layers;
		for (const auto &l : exh->layers)
			layers.push_back(l.nodes);
		auto problems = validate_exhaustion(net, layers, cl, options.cp());
		if (!problems.empty())
			throw Violation(problems.front(), Json{{"problems", problems}});
		return Json{{"layers", layers.size()}};
	});
	run.run("exhaustion.adaptedness_equivalence", [&] {
		for (std::size_t i = 0; i < exh->layers.size(); ++i) {
			auto report = adaptedness_equivalences(net, exh->layers[i], cl);
			if (!report.not_contained)
				throw Violation("layer contains the cluster", Json{{"layer", i}});
		}
		return Json{{"layers", exh->layers.size()}};
	});
	run.run("exhaustion.partition", [&] {
		NodeSet covered = exh->final_tnet;
		for (std::size_t i = 0; i < exh->layers.size(); ++i) {
			if (covered.intersects(exh->layers[i].nodes))
				throw Violation("layers overlap", Json{{"layer", i}});
			covered = covered | exh->layers[i].nodes;
		}
		if (!(covered == net.all_nodes()))
			throw Violation("layers and final T-net miss nodes", Json{{"missing", names_json(net, covered.inverted())}});
		for (Node p : cl.places)
			if (!exh->final_tnet.contains(p))
				throw Violation("cluster place outside the final T-net", Json{{"place", net.node_name(p)}});
		return Json{{"final_nodes", exh->final_tnet.size()}};
	});

	group("layers", [&] { return verify_layer_token_counts(*rg, *exh, options); });
	group("layers", [&] { return verify_marking_equality_on_layers(*rg, *exh, options); });
	group("propagation.perpetuality", [&] { return verify_perpetuality_chain(*rg, *exh, cl, options); });
	group("global_shutdown", [&] { return verify_propagation(*rg, *exh, cl, options); });
	group("tsystem.perpetual", [&] {
		Net final_net = span(net, exh->final_tnet).induced();
		Cluster final_cl = cluster_in(net, cl, final_net);
		return verify_tsystem_lucency(final_net, cluster_marking(final_net, final_cl), final_cl, options);
	});

	run.run("synthesis.marking_equality", [&] {
		Subnet final_sub = span(net, exh->final_tnet);
		std::size_t pairs = 0;
		for (auto [i, j] : enabling_equivalent_pairs(*rg, false)) {
			++pairs;
			const Marking &a = rg->states()[i];
			const Marking &b = rg->states()[j];
			Json w = pair_json(*rg, i, j);
			for (std::size_t l = 0; l < exh->layers.size(); ++l) {
				Subnet sub = span(net, exh->layers[l].nodes);
				if (!(restrict(net, a, sub) == restrict(net, b, sub))) {
					w["layer"] = l;
					throw Violation("enabling-equivalent markings differ on a layer", w);
				}
			}
			if (!(restrict(net, a, final_sub) == restrict(net, b, final_sub)))
				throw Violation("enabling-equivalent markings differ on the final T-net", w);
			throw Violation("enabling-equivalent markings are distinct", w);
		}
		return Json{{"pairs", pairs}, {"states", rg->size()}};
	});
	run.run("cross_validation.bruteforce", [&] {
		auto report = lucency_bruteforce(*rg);
		if (report.verdict != LucencyVerdict::lucent)
			throw Violation("replay and brute force disagree", Json{{"bruteforce", to_string(report.verdict)}});
		return Json{{"verdict", to_string(report.verdict)}, {"classes", report.classes.size()}};
	});

	return finish();
}

Json to_json(const CheckRecord &record)
{
	Json out;
	out["id"] = record.id;
	out["anchor"] = record.anchor;
	out["status"] = to_string(record.status);
	if (!record.witness.is_null())
		out["witness"] = record.witness;
	return out;
}

Json to_json(const Certificate &cert)
{
	Json out;
	out["net"] = Json{{"name", cert.net_name}, {"hash", cert.net_hash}};
	out["cluster"] = cert.cluster;
	out["exhaustion"] = cert.exhaustion;
	Json checks = Json::array();
	for (const auto &r : cert.checks)
		checks.push_back(to_json(r));
	out["checks"] = std::move(checks);
	out["verdict"] = cert.verdict();
	return out;
}

std::string to_text(const Certificate &cert)
{
	std::ostringstream out;
	out << "net: " << cert.net_name << " (sha256 " << cert.net_hash << ")\n";
	out << "cluster: {";
	for (std::size_t i = 0; i < cert.cluster.size(); ++i)
		out << (i ? ", " : "") << cert.cluster[i];
	out << "}\n";
	for (const auto &r : cert.checks) {
		out << "[" << (r.passed() ? "ok" : "FAIL") << "] " << r.id;
		if (!r.passed() && r.witness.contains("error"))
			out << ": " << r.witness["error"].get<std::string>();
		out << "\n";
	}
	out << "verdict: " << cert.verdict() << "\n";
	return out.str();
}

std::vector<CheckRecord> concluding_diagnostics(const ReachabilityGraph &rg, const Cluster &cl,
						const VerifierOptions &options)
{
	require_complete(rg);
	const Net &net = rg.net();
	NodeSet avoiding = net.all_nodes();
	for (Node t : cl.transitions)
		avoiding.erase(t);

	// Each diagnostic runs independently: a failing one does not hide the rest.
	std::vector<CheckRecord> records;
	auto diagnose = [&](const std::string &id, const std::function<Json()> &body) {
		std::vector<CheckRecord> one;
		Runner(one).run(id, body);
		records.push_back(std::move(one.front()));
	};

	diagnose("diagnostic.token_free_feeding", [&] {
		std::size_t queries = 0;
		for (std::size_t s = 0; s < rg.size(); ++s) {
			const Marking &m = rg.states()[s];
			for (Node t : net.transitions())
				for (Node q : net.pre(t)) {
					if (m[q] != 0)
						continue;
					++queries;
					if (all_feed_witnesses(net, m, t, q, options.enum_cap).empty())
						throw Violation("no token-free feeding path",
								Json{{"state", s}, {"transition", net.node_name(t)}, {"place", net.node_name(q)}});
				}
		}
		return Json{{"queries", queries}};
	});

	auto paths = path_places(net, avoiding, options.enum_cap);

	diagnose("diagnostic.distinct_pair_path", [&] {
		auto pairs = enabling_equivalent_pairs(rg, false);
		for (auto [i, j] : pairs) {
			bool found = false;
			for (std::size_t s : {i, j}) {
				found = found || overloaded_path(paths, rg.states()[s], 1).has_value();
				for (std::size_t e : rg.out_edges(s))
					found = found || overloaded_path(paths, rg.states()[rg.edges()[e].to], 1).has_value();
			}
			if (!found)
				throw Violation("no cluster-avoiding path with two tokens near the pair", pair_json(rg, i, j));
		}
		return Json{{"pairs", pairs.size()}};
	});

	diagnose("diagnostic.cluster_avoiding_safeness", [&] {
		for (std::size_t s = 0; s < rg.size(); ++s)
			if (auto heavy = overloaded_path(paths, rg.states()[s], 1))
				throw Violation("cluster-avoiding path holds two tokens",
						Json{{"state", s}, {"places", names_json(net, paths[*heavy])}});
		return Json{{"paths", paths.size()}, {"states", rg.size()}};
	});
	return records;
}

} // namespace lucent
