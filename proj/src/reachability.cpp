#include "lucent/reachability.h"

#include <algorithm>
#include <deque>
#include <map>

namespace lucent {

std::optional<std::size_t> ReachabilityGraph::index_of(const Marking &m) const
{
	auto it = index_.find(m);
	if (it == index_.end())
		return std::nullopt;
	return it->second;
}

ReachabilityGraph explore(const Net &net, const Marking &m0, std::size_t cap)
{
	check_domain(net, m0);
	if (cap == 0)
		throw PreconditionError("state cap must be positive");

	ReachabilityGraph rg;
	rg.net_ = &net;
	auto add_state = [&](const Marking &m) {
		std::size_t id = rg.states_.size();
		rg.states_.push_back(m);
		rg.index_.emplace(m, id);
		rg.out_.emplace_back();
		rg.in_.emplace_back();
		rg.enabled_.push_back(enabled(net, m));
		return id;
	};
	add_state(m0);

	for (std::size_t cur = 0; cur < rg.states_.size(); ++cur) {
		for (Node t : rg.enabled_[cur]) {
			Marking next = fire(net, rg.states_[cur], t);
			std::size_t to;
			if (auto known = rg.index_.find(next); known != rg.index_.end()) {
				to = known->second;
			} else if (rg.states_.size() >= cap) {
				if (rg.complete_) {
					rg.complete_ = false;
					rg.warnings_.push_back("state cap " + std::to_string(cap) + " hit; graph is partial");
				}
				continue;
			} else {
				to = add_state(next);
			}
			rg.out_[cur].push_back(rg.edges_.size());
			rg.in_[to].push_back(rg.edges_.size());
			rg.edges_.push_back(Edge{cur, t, to});
		}
	}
	return rg;
}

void require_complete(const ReachabilityGraph &rg)
{
	if (!rg.complete())
		throw PreconditionError("indeterminate: state cap hit");
}

std::vector<bool> backward_closure(const ReachabilityGraph &rg, std::size_t target)
{
	std::vector<bool> seen(rg.size(), false);
	std::deque<std::size_t> queue{target};
	seen[target] = true;
	while (!queue.empty()) {
		std::size_t s = queue.front();
		queue.pop_front();
		for (std::size_t e : rg.in_edges(s)) {
			std::size_t from = rg.edges()[e].from;
			if (!seen[from]) {
				seen[from] = true;
				queue.push_back(from);
			}
		}
	}
	return seen;
}

bool is_live(const ReachabilityGraph &rg)
{
	require_complete(rg);
	const Net &net = rg.net();
	for (Node t : net.transitions()) {
		// Backward closure of every state that enables t.
		std::vector<bool> seen(rg.size(), false);
		std::deque<std::size_t> queue;
		for (std::size_t s = 0; s < rg.size(); ++s) {
			const auto &en = rg.enabled_at(s);
			if (std::binary_search(en.begin(), en.end(), t)) {
				seen[s] = true;
				queue.push_back(s);
			}
		}
		while (!queue.empty()) {
			std::size_t s = queue.front();
			queue.pop_front();
			for (std::size_t e : rg.in_edges(s)) {
				std::size_t from = rg.edges()[e].from;
				if (!seen[from]) {
					seen[from] = true;
					queue.push_back(from);
				}
			}
		}
		if (std::find(seen.begin(), seen.end(), false) != seen.end())
			return false;
	}
	return true;
}

std::uint32_t bound(const ReachabilityGraph &rg)
{
	require_complete(rg);
	std::uint32_t k = 0;
	for (const auto &m : rg.states())
		k = std::max(k, m.max_count());
	return k;
}

bool is_safe(const ReachabilityGraph &rg)
{
	return bound(rg) <= 1;
}

bool is_home_marking(const ReachabilityGraph &rg, const Marking &m)
{
	require_complete(rg);
	auto idx = rg.index_of(m);
	if (!idx)
		return false;
	auto seen = backward_closure(rg, *idx);
	return std::find(seen.begin(), seen.end(), false) == seen.end();
}

bool is_regeneration_cluster(const ReachabilityGraph &rg, const Cluster &cl)
{
	require_complete(rg);
	return is_live(rg) && is_home_marking(rg, cluster_marking(rg.net(), cl));
}

std::vector<Cluster> regeneration_clusters(const ReachabilityGraph &rg)
{
	require_complete(rg);
	std::vector<Cluster> out;
	// Complete graphs are bounded by construction.
	if (!is_live(rg))
		return out;
	for (auto &cl : clusters(rg.net()))
		if (is_home_marking(rg, cluster_marking(rg.net(), cl)))
			out.push_back(std::move(cl));
	return out;
}

bool is_perpetual(const ReachabilityGraph &rg)
{
	return !regeneration_clusters(rg).empty();
}

FundamentalPropertyReport check_fundamental_property(const ReachabilityGraph &rg, const Cluster &cl,
						     std::size_t enum_cap)
{
	require_complete(rg);
	const Net &net = rg.net();
	FundamentalPropertyReport report;

	auto components = p_components(net, enum_cap);
	report.components = components.size();
	for (const auto &c : components) {
		std::size_t cl_places = 0;
		for (Node p : cl.places)
			cl_places += c.nodes.contains(p);
		if (cl_places != 1)
			report.failures.push_back("P-component " + to_string(net, Path{c.nodes.nodes()}) + " contains " +
						  std::to_string(cl_places) + " places of the cluster");
		for (std::size_t s = 0; s < rg.size(); ++s) {
			auto count = token_count(net, rg.states()[s], c.nodes);
			if (count != 1) {
				report.failures.push_back("P-component " + to_string(net, Path{c.nodes.nodes()}) +
							  " has token count " + std::to_string(count) + " at " +
							  to_string(net, rg.states()[s]));
				break;
			}
		}
	}

	report.safe = is_safe(rg);
	if (!report.safe)
		report.failures.push_back("system is not safe (bound " + std::to_string(bound(rg)) + ")");

	if (is_t_net(net)) {
		if (cl.transitions.size() != 1) {
			report.failures.push_back("cluster of a T-net has " + std::to_string(cl.transitions.size()) +
						  " transitions");
		} else {
			Node t_cl = cl.transitions.front();
			for (const auto &circuit : elementary_circuits(net, enum_cap)) {
				++report.circuits;
				if (std::find(circuit.nodes.begin(), circuit.nodes.end(), t_cl) == circuit.nodes.end())
					report.failures.push_back("circuit " + to_string(net, circuit) + " avoids " +
								  net.node_name(t_cl));
				for (std::size_t s = 0; s < rg.size(); ++s) {
					auto count = token_count(net, rg.states()[s], circuit);
					if (count != 1) {
						report.failures.push_back("circuit " + to_string(net, circuit) +
									  " has token count " + std::to_string(count));
						break;
					}
				}
			}
		}
	}
	return report;
}

std::string to_string(LucencyVerdict v)
{
	switch (v) {
	case LucencyVerdict::lucent:
		return "lucent";
	case LucencyVerdict::not_lucent:
		return "not_lucent";
	case LucencyVerdict::indeterminate:
		break;
	}
	return "indeterminate";
}

LucencyReport lucency_bruteforce(const ReachabilityGraph &rg)
{
	LucencyReport report;
	std::map<std::vector<Node>, std::vector<std::size_t>> by_enabled;
	for (std::size_t s = 0; s < rg.size(); ++s)
		by_enabled[rg.enabled_at(s)].push_back(s);
	for (auto &[en, members] : by_enabled)
		report.classes.push_back(std::move(members));
	std::sort(report.classes.begin(), report.classes.end());

	for (const auto &cls : report.classes)
		for (std::size_t i = 0; i < cls.size(); ++i)
			for (std::size_t j = i + 1; j < cls.size(); ++j)
				report.witnesses.emplace_back(cls[i], cls[j]);
	std::sort(report.witnesses.begin(), report.witnesses.end());

	if (!report.witnesses.empty())
		report.verdict = LucencyVerdict::not_lucent;
	else
		report.verdict = rg.complete() ? LucencyVerdict::lucent : LucencyVerdict::indeterminate;
	return report;
}

std::vector<std::pair<std::size_t, std::size_t>> enabling_equivalent_pairs(const ReachabilityGraph &rg,
									    bool include_diagonal)
{
	auto pairs = lucency_bruteforce(rg).witnesses;
	if (include_diagonal)
		for (std::size_t s = 0; s < rg.size(); ++s)
			pairs.emplace_back(s, s);
	return pairs;
}

} // namespace lucent
