#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "lucent/cp_exhaust.h"
#include "lucent/net.h"
#include "lucent/reachability.h"

namespace lucent {

using Json = nlohmann::ordered_json;

Json names_json(const Net &net, const std::vector<Node> &nodes);
Json names_json(const Net &net, const NodeSet &nodes);
// Nonzero counts only, in place order.
Json to_json(const Net &net, const Marking &m);
Json to_json(const Net &net, const Path &path);
Json to_json(const Net &net, const CpExhaustion &exh);
Json to_json(const ReachabilityGraph &rg);
Json to_json(const ReachabilityGraph &rg, const LucencyReport &report);

// "(2,1)": counts in place order.
std::string tuple_string(const Marking &m);
std::string names_string(const Net &net, const std::vector<Node> &nodes);

struct AnalysisOptions {
	std::size_t state_cap = default_state_cap;
	std::size_t enum_cap = default_enum_cap;
};

struct Analysis {
	std::size_t places = 0, transitions = 0, arcs = 0;
	bool weakly_connected = false;
	bool free_choice = false;
	bool t_net = false;
	bool strongly_connected = false;
	std::vector<Cluster> clusters;
	std::size_t states = 0;
	bool complete = false;
	std::vector<std::string> warnings;
	// Unset when the state space is partial.
	std::optional<bool> live;
	std::optional<std::uint32_t> bound;
	std::optional<bool> safe;
	std::vector<Cluster> regeneration_clusters;
};

Analysis analyze(const Net &net, const Marking &m0, const AnalysisOptions &options = {});
Json to_json(const Net &net, const Marking &m0, const Analysis &a);
std::string to_text(const Net &net, const Marking &m0, const Analysis &a);

// Places as circles labelled with their tokens, transitions as boxes.
std::string to_dot(const Net &net, const Marking &m);
// Same, with one cluster subgraph per exhaustion layer and one for the
// final T-net.
std::string to_dot(const Net &net, const Marking &m, const CpExhaustion &exh);

} // namespace lucent
