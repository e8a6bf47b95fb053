#include "lucent/shutdown.h"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

namespace lucent {

Marking restrict(const Net &net, const Marking &m, const Subnet &sub)
{
	check_domain(net, m);
	if (&sub.host() != &net)
		throw NetError("subnet belongs to a different net");
	// Induced nets keep the host's relative place order.
	std::vector<std::uint32_t> counts;
	for (Node p : sub.places())
		counts.push_back(m[p]);
	return Marking(std::move(counts));
}

Marking extend(const Net &net, const Subnet &sub, const Marking &on_sub, const Marking &on_rest)
{
	auto inside = sub.places();
	std::vector<Node> outside;
	for (Node p : net.places())
		if (!sub.nodes().contains(p))
			outside.push_back(p);
	if (on_sub.size() != inside.size() || on_rest.size() != outside.size())
		throw NetError("marking domains do not match the subnet and its complement");
	Marking m(net.place_count());
	for (std::size_t i = 0; i < inside.size(); ++i)
		m.set(inside[i], on_sub.counts()[i]);
	for (std::size_t i = 0; i < outside.size(); ++i)
		m.set(outside[i], on_rest.counts()[i]);
	return m;
}

std::vector<Node> shutdown_transitions(const Net &net, const CpSubnet &cp)
{
	std::vector<Node> out;
	for (Node t : cp.transitions(net))
		if (t != cp.way_in)
			out.push_back(t);
	return out;
}

bool is_shut_down(const Net &net, const CpSubnet &cp, const Marking &m)
{
	for (Node t : shutdown_transitions(net, cp))
		if (is_enabled(net, m, t))
			return false;
	return true;
}

namespace {

std::optional<Shutdown> breadth_first_shutdown(const Net &net, const CpSubnet &cp, const Marking &m,
					       const std::vector<Node> &allowed, std::size_t cap)
{
	std::vector<Marking> states{m};
	std::vector<std::pair<std::size_t, Node>> parent{{0, Node{}}};
	std::unordered_map<Marking, std::size_t, MarkingHash> index{{m, 0}};
	for (std::size_t cur = 0; cur < states.size(); ++cur) {
		if (is_shut_down(net, cp, states[cur])) {
			Shutdown sd;
			sd.marking = states[cur];
			for (std::size_t s = cur; s != 0; s = parent[s].first)
				sd.sequence.transitions.push_back(parent[s].second);
			std::reverse(sd.sequence.transitions.begin(), sd.sequence.transitions.end());
			return sd;
		}
		for (Node t : allowed) {
			if (!is_enabled(net, states[cur], t))
				continue;
			Marking next = fire(net, states[cur], t);
			if (index.contains(next))
				continue;
			if (states.size() >= cap)
				return std::nullopt;
			index.emplace(next, states.size());
			states.push_back(std::move(next));
			parent.emplace_back(cur, t);
		}
	}
	return std::nullopt;
}

} // namespace

Shutdown shutdown_sequence(const Net &net, const CpSubnet &cp, const Marking &m, std::size_t cap)
{
	check_domain(net, m);
	auto allowed = shutdown_transitions(net, cp);

	Shutdown sd{{}, m};
	std::unordered_set<Marking, MarkingHash> visited{m};
	while (true) {
		auto next = std::find_if(allowed.begin(), allowed.end(),
					 [&](Node t) { return is_enabled(net, sd.marking, t); });
		if (next == allowed.end())
			return sd;
		sd.marking = fire(net, sd.marking, *next);
		sd.sequence.transitions.push_back(*next);
		if (!visited.insert(sd.marking).second || visited.size() > cap)
			break;
	}

	if (auto found = breadth_first_shutdown(net, cp, m, allowed, cap))
		return *found;
	throw CheckFailure("no shutdown found from " + to_string(net, m));
}

Shutdown global_shutdown(const Net &net, const CpExhaustion &exh, const Marking &m, std::size_t cap)
{
	Shutdown total{{}, m};
	for (std::size_t i = 0; i < exh.layers.size(); ++i) {
		Shutdown sd = shutdown_sequence(net, exh.layers[i], total.marking, cap);
		for (Node t : sd.sequence.transitions) {
			total.sequence.transitions.push_back(t);
			total.sequence.layers.push_back(i);
		}
		total.marking = std::move(sd.marking);
	}
	for (std::size_t i = 0; i < exh.layers.size(); ++i)
		if (!is_shut_down(net, exh.layers[i], total.marking))
			throw CheckFailure("layer " + std::to_string(i) + " has an enabled transition after the global shutdown");
	return total;
}

Propagation propagate_perpetual(const Net &net, const CpSubnet &cp, const Cluster &cl, const Marking &m,
				std::size_t state_cap)
{
	if (!is_adapted(cp, cl))
		throw PreconditionError("CP-subnet is not adapted to the cluster");
	Shutdown sd = shutdown_sequence(net, cp, m, state_cap);

	Subnet layer = span(net, cp.nodes);
	if (!restrict(net, sd.marking, layer).is_zero())
		throw CheckFailure("propagation check failed: shutdown left tokens in the CP-subnet at " +
				   to_string(net, sd.marking));

	Subnet rest = complement(net, layer);
	Propagation out{sd.sequence, rest.induced(), Marking{}, Cluster{}};
	out.marking = restrict(net, sd.marking, rest);
	out.cluster = make_cluster(out.complement, translate(net, cl.nodes, out.complement));
	if (out.cluster.nodes.empty() || !(cluster_of(out.complement, out.cluster.nodes.nodes().front()) == out.cluster))
		throw CheckFailure("propagation check failed: remaining cluster is not a cluster of the complement");

	auto rg = explore(out.complement, out.marking, state_cap);
	if (!rg.complete())
		throw CheckFailure("propagation check failed: complement state space exceeds the cap");
	if (!is_regeneration_cluster(rg, out.cluster))
		throw CheckFailure("propagation check failed: remaining cluster is not a regeneration cluster of the "
				   "complement system");
	return out;
}

} // namespace lucent
