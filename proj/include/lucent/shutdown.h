#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lucent/cp_exhaust.h"
#include "lucent/net.h"
#include "lucent/reachability.h"

namespace lucent {

struct FiringSequence {
	std::vector<Node> transitions;
	// Layer index of each step, when produced by a global shutdown.
	std::vector<std::size_t> layers;

	bool empty() const { return transitions.empty(); }
	friend bool operator==(const FiringSequence &, const FiringSequence &) = default;
};

// Counts of the places of the subnet, as a marking of sub.induced().
Marking restrict(const Net &net, const Marking &m, const Subnet &sub);
// Glues a marking of sub.induced() and one of the complement's induced net
// into a marking of the host.
Marking extend(const Net &net, const Subnet &sub, const Marking &on_sub, const Marking &on_rest);

struct Shutdown {
	FiringSequence sequence;
	Marking marking;
};

// Transitions of cp other than its way-in.
std::vector<Node> shutdown_transitions(const Net &net, const CpSubnet &cp);

// True when no non-way-in transition of cp is enabled at m.
bool is_shut_down(const Net &net, const CpSubnet &cp, const Marking &m);

// Fires only non-way-in transitions of cp until none of them is enabled.
// Greedy (least enabled transition first); falls back to a breadth-first
// search over those firings if the greedy run revisits a marking. Throws
// CheckFailure("no shutdown found") if no such marking is reachable within
// `cap` markings.
Shutdown shutdown_sequence(const Net &net, const CpSubnet &cp, const Marking &m,
			   std::size_t cap = default_state_cap);

// Shuts the layers down one after another in exhaustion order and checks
// that afterwards no non-way-in transition of any layer is enabled.
Shutdown global_shutdown(const Net &net, const CpExhaustion &exh, const Marking &m,
			 std::size_t cap = default_state_cap);

struct Propagation {
	FiringSequence shutdown;
	Net complement;
	Marking marking;
	// The part of the cluster left in the complement (nodes of `complement`).
	Cluster cluster;
};

// Removes an adapted CP-subnet from a perpetual system: shuts it down from m,
// restricts to the complement, and checks by exploration that the result is
// perpetual with the remaining cluster as a regeneration cluster. Also checks
// that the shutdown emptied the subnet. Throws CheckFailure("propagation check
// failed: ...") otherwise.
Propagation propagate_perpetual(const Net &net, const CpSubnet &cp, const Cluster &cl, const Marking &m,
				std::size_t state_cap = default_state_cap);

} // namespace lucent
