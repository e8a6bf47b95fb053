#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lucent/net.h"
#include "lucent/structure.h"

namespace lucent {

inline constexpr std::size_t default_state_cap = 1000000;

struct Edge {
	std::size_t from;
	Node transition;
	std::size_t to;

	friend bool operator==(const Edge &, const Edge &) = default;
};

// Breadth-first state space of a marked net. State 0 is the initial marking;
// states are numbered in discovery order with transitions tried in node
// order, so the numbering depends only on the input.
class ReachabilityGraph {
public:
	const Net &net() const { return *net_; }
	const Marking &initial() const { return states_.front(); }
	const std::vector<Marking> &states() const { return states_; }
	const std::vector<Edge> &edges() const { return edges_; }
	std::size_t size() const { return states_.size(); }
	bool complete() const { return complete_; }
	const std::vector<std::string> &warnings() const { return warnings_; }

	std::optional<std::size_t> index_of(const Marking &m) const;
	const std::vector<std::size_t> &out_edges(std::size_t state) const { return out_.at(state); }
	const std::vector<std::size_t> &in_edges(std::size_t state) const { return in_.at(state); }
	// Enabled transitions of a state, in node order.
	const std::vector<Node> &enabled_at(std::size_t state) const { return enabled_.at(state); }

	friend ReachabilityGraph explore(const Net &net, const Marking &m0, std::size_t cap);

private:
	const Net *net_ = nullptr;
	std::vector<Marking> states_;
	std::vector<Edge> edges_;
	std::vector<std::vector<std::size_t>> out_;
	std::vector<std::vector<std::size_t>> in_;
	std::vector<std::vector<Node>> enabled_;
	std::unordered_map<Marking, std::size_t, MarkingHash> index_;
	bool complete_ = true;
	std::vector<std::string> warnings_;
};

// Explores at most `cap` states. When more exist the graph is returned
// partial with complete() == false and a warning. The net must outlive the
// graph.
ReachabilityGraph explore(const Net &net, const Marking &m0, std::size_t cap = default_state_cap);

// Throws PreconditionError("indeterminate: state cap hit") on partial graphs.
void require_complete(const ReachabilityGraph &rg);

bool is_live(const ReachabilityGraph &rg);
// Largest token count of any place over all states.
std::uint32_t bound(const ReachabilityGraph &rg);
bool is_safe(const ReachabilityGraph &rg);
bool is_home_marking(const ReachabilityGraph &rg, const Marking &m);

// States from which `target` is reachable.
std::vector<bool> backward_closure(const ReachabilityGraph &rg, std::size_t target);

std::vector<Cluster> regeneration_clusters(const ReachabilityGraph &rg);
bool is_perpetual(const ReachabilityGraph &rg);
bool is_regeneration_cluster(const ReachabilityGraph &rg, const Cluster &cl);

struct FundamentalPropertyReport {
	std::size_t components = 0;
	std::size_t circuits = 0;
	bool safe = false;
	std::vector<std::string> failures;

	bool ok() const { return failures.empty(); }
};

// Every P-component holds exactly one place of cl and one token at each
// state; the system is safe; for T-nets every elementary circuit passes the
// unique transition of cl and holds one token.
FundamentalPropertyReport check_fundamental_property(const ReachabilityGraph &rg, const Cluster &cl,
						     std::size_t enum_cap = default_enum_cap);

enum class LucencyVerdict { lucent, not_lucent, indeterminate };

std::string to_string(LucencyVerdict v);

struct LucencyReport {
	LucencyVerdict verdict = LucencyVerdict::indeterminate;
	// States grouped by enabled set; classes ordered by least member.
	std::vector<std::vector<std::size_t>> classes;
	// (i, j) with i < j, equal enabled sets and different markings.
	std::vector<std::pair<std::size_t, std::size_t>> witnesses;
};

LucencyReport lucency_bruteforce(const ReachabilityGraph &rg);

// Unordered pairs (i < j) of states with equal enabled sets, optionally
// followed by the diagonal pairs (i, i).
std::vector<std::pair<std::size_t, std::size_t>> enabling_equivalent_pairs(const ReachabilityGraph &rg,
									    bool include_diagonal = false);

} // namespace lucent
