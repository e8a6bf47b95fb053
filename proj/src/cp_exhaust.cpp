#include "lucent/cp_exhaust.h"

#include <algorithm>
#include <deque>
#include <set>

namespace lucent {

std::vector<Node> CpSubnet::places(const Net &net) const
{
	std::vector<Node> out;
	for (Node n : nodes.nodes())
		if (net.is_place(n))
			out.push_back(n);
	return out;
}

std::vector<Node> CpSubnet::transitions(const Net &net) const
{
	std::vector<Node> out;
	for (Node n : nodes.nodes())
		if (net.is_transition(n))
			out.push_back(n);
	return out;
}

namespace {

bool weakly_connected_within(const Net &net, const NodeSet &nodes)
{
	if (nodes.empty())
		return false;
	NodeSet seen = net.empty_set();
	Node root = nodes.nodes().front();
	std::deque<Node> queue{root};
	seen.insert(root);
	while (!queue.empty()) {
		Node x = queue.front();
		queue.pop_front();
		auto visit = [&](Node y) {
			if (nodes.contains(y) && !seen.contains(y)) {
				seen.insert(y);
				queue.push_back(y);
			}
		};
		for (Node y : net.pre(x))
			visit(y);
		for (Node y : net.post(x))
			visit(y);
	}
	return seen.size() == nodes.size();
}

CpCheck reject(std::string why)
{
	return CpCheck{std::nullopt, std::move(why)};
}

} // namespace

CpCheck is_cp_subnet(const Net &net, const NodeSet &nodes, const CpOptions &options)
{
	if (nodes.universe() != net.node_count())
		throw NetError("node set does not belong to net '" + net.name() + "'");
	if (nodes.empty())
		return reject("empty subnet");

	std::vector<Node> places, transitions;
	for (Node n : nodes.nodes())
		(net.is_place(n) ? places : transitions).push_back(n);
	if (places.empty() && !options.allow_place_free)
		return reject("place-free subnet (not enabled)");
	if (!weakly_connected_within(net, nodes))
		return reject("not weakly connected");
	Subnet sub = span(net, nodes);
	if (!is_transition_bordered(net, sub))
		return reject("not transition-bordered");
	for (Node p : places)
		if (net.pre(p).size() != 1 || net.post(p).size() != 1)
			return reject("not a T-subnet: place '" + net.node_name(p) + "' branches");

	NodeSet rest = nodes.inverted();
	bool rest_has_transition = false;
	for (Node n : rest.nodes())
		rest_has_transition |= net.is_transition(n);
	if (!rest_has_transition)
		return reject("complement contains no transition");
	if (!is_strongly_connected(net, rest))
		return reject("complement is not strongly connected");

	std::vector<Node> way_ins, way_outs;
	for (Node t : transitions) {
		if (std::any_of(net.pre(t).begin(), net.pre(t).end(), [&](Node p) { return rest.contains(p); }))
			way_ins.push_back(t);
		if (std::any_of(net.post(t).begin(), net.post(t).end(), [&](Node p) { return rest.contains(p); }))
			way_outs.push_back(t);
	}
	if (way_ins.size() != 1)
		return reject("expected a unique way-in transition, found " + std::to_string(way_ins.size()));
	if (way_outs.empty())
		return reject("no way-out transition");

	// Every place must be reachable from the way-in inside the subnet.
	NodeSet seen = net.empty_set();
	std::deque<Node> queue{way_ins.front()};
	seen.insert(way_ins.front());
	while (!queue.empty()) {
		Node x = queue.front();
		queue.pop_front();
		for (Node y : net.post(x))
			if (nodes.contains(y) && !seen.contains(y)) {
				seen.insert(y);
				queue.push_back(y);
			}
	}
	for (Node p : places)
		if (!seen.contains(p))
			return reject("place '" + net.node_name(p) + "' not reachable from the way-in transition");

	return CpCheck{CpSubnet{nodes, way_ins.front(), std::move(way_outs)}, {}};
}

bool is_adapted(const CpSubnet &cp, const Cluster &cl)
{
	return !cl.nodes.is_subset_of(cp.nodes);
}

namespace {

// Enumerates connected subsets of a graph given by adjacency lists over
// vertices 0..n-1; each subset is produced once (ESU scheme).
class ConnectedSubsets {
public:
	ConnectedSubsets(const std::vector<std::vector<std::size_t>> &adj, std::size_t cap,
			 std::function<void(const std::vector<std::size_t> &)> visit)
		: adj_(adj), cap_(cap), visit_(std::move(visit))
	{
	}

	void run()
	{
		for (std::size_t v = 0; v < adj_.size(); ++v) {
			std::vector<std::size_t> sub{v};
			std::vector<std::size_t> ext;
			for (std::size_t u : adj_[v])
				if (u > v)
					ext.push_back(u);
			grow(sub, ext, v);
		}
	}

private:
	void grow(std::vector<std::size_t> &sub, std::vector<std::size_t> ext, std::size_t root)
	{
		if (++count_ > cap_)
			throw CapExceeded("search cap exceeded (" + std::to_string(cap_) + " candidate sets)");
		visit_(sub);
		while (!ext.empty()) {
			std::size_t w = ext.back();
			ext.pop_back();
			std::vector<std::size_t> next_ext = ext;
			for (std::size_t u : adj_[w]) {
				if (u <= root || in(sub, u) || in(next_ext, u) || u == w)
					continue;
				// exclusive neighbourhood: not adjacent to the current subset
				bool touches = false;
				for (std::size_t s : sub)
					if (in(adj_[s], u))
						touches = true;
				if (!touches)
					next_ext.push_back(u);
			}
			sub.push_back(w);
			grow(sub, std::move(next_ext), root);
			sub.pop_back();
		}
	}

	static bool in(const std::vector<std::size_t> &v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

	const std::vector<std::vector<std::size_t>> &adj_;
	std::size_t cap_;
	std::function<void(const std::vector<std::size_t> &)> visit_;
	std::size_t count_ = 0;
};

} // namespace

std::vector<CpSubnet> find_cp_subnets(const Net &net, const std::optional<Cluster> &adapt_to,
				      const CpOptions &options)
{
	std::vector<Node> candidates;
	for (Node p : net.places())
		if (net.pre(p).size() == 1 && net.post(p).size() == 1)
			candidates.push_back(p);

	// Two candidate places are adjacent when they share a transition.
	std::vector<std::vector<std::size_t>> adj(candidates.size());
	for (std::size_t i = 0; i < candidates.size(); ++i)
		for (std::size_t j = i + 1; j < candidates.size(); ++j) {
			Node a = candidates[i], b = candidates[j];
			bool shared = net.pre(a)[0] == net.pre(b)[0] || net.pre(a)[0] == net.post(b)[0] ||
				      net.post(a)[0] == net.pre(b)[0] || net.post(a)[0] == net.post(b)[0];
			if (shared) {
				adj[i].push_back(j);
				adj[j].push_back(i);
			}
		}

	std::vector<CpSubnet> out;
	auto consider = [&](const NodeSet &nodes) {
		auto check = is_cp_subnet(net, nodes, options);
		if (!check)
			return;
		if (adapt_to && !is_adapted(*check.subnet, *adapt_to))
			return;
		out.push_back(std::move(*check.subnet));
	};

	ConnectedSubsets subsets(adj, options.enum_cap, [&](const std::vector<std::size_t> &members) {
		NodeSet nodes = net.empty_set();
		for (std::size_t i : members) {
			Node p = candidates[i];
			nodes.insert(p);
			nodes.insert(net.pre(p)[0]);
			nodes.insert(net.post(p)[0]);
		}
		consider(nodes);
	});
	subsets.run();

	if (options.allow_place_free)
		for (Node t : net.transitions()) {
			NodeSet nodes = net.empty_set();
			nodes.insert(t);
			consider(nodes);
		}

	std::sort(out.begin(), out.end(), [](const CpSubnet &a, const CpSubnet &b) {
		if (a.nodes.size() != b.nodes.size())
			return a.nodes.size() < b.nodes.size();
		return a.nodes.nodes() < b.nodes.nodes();
	});
	return out;
}

AdaptednessReport adaptedness_equivalences(const Net &net, const CpSubnet &cp, const Cluster &cl)
{
	AdaptednessReport report;
	NodeSet rest = cp.nodes.inverted();
	report.not_contained = is_adapted(cp, cl);
	report.shares_transition =
		std::any_of(cl.transitions.begin(), cl.transitions.end(), [&](Node t) { return rest.contains(t); });
	report.places_in_complement =
		std::all_of(cl.places.begin(), cl.places.end(), [&](Node p) { return rest.contains(p); });
	if (!report.consistent())
		throw CheckFailure("adaptedness conditions disagree for cluster " + to_string(net, Path{cl.nodes.nodes()}));
	return report;
}

Boundary boundary(const Net &net, const std::vector<CpSubnet> &layers, const NodeSet &final_tnet)
{
	NodeSet layer_transitions = net.empty_set();
	for (const auto &layer : layers)
		for (Node t : layer.transitions(net))
			layer_transitions.insert(t);

	Boundary b;
	NodeSet critical = net.empty_set();
	for (Node p : postset(net, layer_transitions).nodes()) {
		if (!final_tnet.contains(p))
			continue;
		b.way_in_places.push_back(p);
		for (Node t : net.post(p))
			if (final_tnet.contains(t))
				critical.insert(t);
	}
	b.critical_transitions = critical.nodes();
	return b;
}

namespace {

// Depth-first search for a sequence of layers. Each layer is an adapted
// CP-subnet of the current complement and of the host; a complement can
// turn a host choice place into a non-branching one, so the second
// condition is not automatic and a greedy pick may run into a dead end.
class ExhaustionSearch {
public:
	ExhaustionSearch(const Net &host, const CpOptions &options) : host_(host), options_(options) {}

	bool run(const Net &current, const NodeSet &cl_in_current)
	{
		if (is_t_net(current))
			return is_strongly_connected(current) && (final_ = translate(current, current.all_nodes(), host_), true);
		auto key = translate(current, current.all_nodes(), host_).nodes();
		if (dead_.contains(key))
			return false;

		for (const auto &c : find_cp_subnets(current, make_cluster(current, cl_in_current), options_)) {
			if (++steps_ > options_.enum_cap)
				throw CapExceeded("search cap exceeded (" + std::to_string(options_.enum_cap) +
						  " exhaustion steps)");
			auto host_check = is_cp_subnet(host_, translate(current, c.nodes, host_), options_);
			if (!host_check) {
				if (!first_rejection_)
					first_rejection_ = "layer " + std::to_string(layers_.size()) +
							   " is not a CP-subnet of the host: " + host_check.violation;
				continue;
			}
			Net next = complement(current, span(current, c.nodes)).induced();
			if (!is_free_choice(next) || !is_strongly_connected(next))
				continue;
			NodeSet next_cl = translate(current, cl_in_current, next);
			if (next_cl.empty() || !(cluster_of(next, next_cl.nodes().front()).nodes == next_cl))
				continue;
			layers_.push_back(std::move(*host_check.subnet));
			if (run(next, next_cl))
				return true;
			layers_.pop_back();
		}
		dead_.insert(std::move(key));
		return false;
	}

	std::vector<CpSubnet> take_layers() { return std::move(layers_); }
	const NodeSet &final_tnet() const { return final_; }
	const std::optional<std::string> &first_rejection() const { return first_rejection_; }

private:
	const Net &host_;
	const CpOptions &options_;
	std::size_t steps_ = 0;
	std::vector<CpSubnet> layers_;
	NodeSet final_;
	std::set<std::vector<Node>> dead_;
	std::optional<std::string> first_rejection_;
};

} // namespace

CpExhaustion cp_exhaustion(const Net &net, const Cluster &cl, const CpOptions &options)
{
	if (cl.nodes.universe() != net.node_count() || cl.nodes.empty())
		throw PreconditionError("cluster does not belong to net '" + net.name() + "'");

	ExhaustionSearch search(net, options);
	if (!search.run(net, cl.nodes)) {
		std::string msg = "no adapted CP-exhaustion found";
		if (search.first_rejection())
			msg += " (" + *search.first_rejection() + ")";
		throw CheckFailure(msg);
	}
	CpExhaustion exh;
	exh.layers = search.take_layers();
	exh.final_tnet = search.final_tnet();
	auto b = boundary(net, exh.layers, exh.final_tnet);
	exh.way_in_places = std::move(b.way_in_places);
	exh.critical_transitions = std::move(b.critical_transitions);
	return exh;
}

std::vector<std::string> validate_exhaustion(const Net &net, const std::vector<NodeSet> &layers,
					     const std::optional<Cluster> &cl, const CpOptions &options)
{
	std::vector<std::string> problems;
	NodeSet used = net.empty_set();
	for (std::size_t i = 0; i < layers.size(); ++i) {
		auto check = is_cp_subnet(net, layers[i], options);
		if (!check)
			problems.push_back("layer " + std::to_string(i) + ": " + check.violation);
		else if (cl && !is_adapted(*check.subnet, *cl))
			problems.push_back("layer " + std::to_string(i) + " contains the cluster");
		if (layers[i].intersects(used))
			problems.push_back("layer " + std::to_string(i) + " overlaps an earlier layer");
		used = used | layers[i];
	}
	NodeSet rest = used.inverted();
	if (rest.empty()) {
		problems.push_back("nothing left after removing the layers");
		return problems;
	}
	Net final_net = span(net, rest).induced();
	if (!is_t_net(final_net))
		problems.push_back("remaining net is not a T-net");
	if (!is_strongly_connected(final_net))
		problems.push_back("remaining net is not strongly connected");
	return problems;
}

} // namespace lucent
