#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lucent/net.h"
#include "lucent/structure.h"

namespace lucent {

struct CpOptions {
	std::size_t enum_cap = default_enum_cap;
	// Admit candidates made of a single transition and no place.
	bool allow_place_free = false;
};

// A validated CP-subnet: a nonempty, weakly connected, transition-bordered
// T-subnet whose complement is strongly connected and holds a transition.
struct CpSubnet {
	NodeSet nodes;
	Node way_in;
	std::vector<Node> way_outs;

	std::vector<Node> places(const Net &net) const;
	std::vector<Node> transitions(const Net &net) const;
};

// Either a CpSubnet or the first clause it violates.
struct CpCheck {
	std::optional<CpSubnet> subnet;
	std::string violation;

	explicit operator bool() const { return subnet.has_value(); }
};

CpCheck is_cp_subnet(const Net &net, const NodeSet &nodes, const CpOptions &options = {});

// Adaptedness of a CP-subnet to a cluster: cl is not inside the subnet.
bool is_adapted(const CpSubnet &cp, const Cluster &cl);

// Enumerates CP-subnets built from connected sets of non-branching places,
// sorted by node count and then by node list. With `adapt_to` only the
// subnets adapted to that cluster are kept. Throws CapExceeded when more
// than options.enum_cap candidate sets are generated.
std::vector<CpSubnet> find_cp_subnets(const Net &net, const std::optional<Cluster> &adapt_to,
				      const CpOptions &options = {});

struct AdaptednessReport {
	bool not_contained = false;        // cl not inside the subnet
	bool shares_transition = false;    // complement holds a transition of cl
	bool places_in_complement = false; // every place of cl lies in the complement

	bool consistent() const { return not_contained == shares_transition && shares_transition == places_in_complement; }
};

// Evaluates the three equivalent forms of adaptedness; throws CheckFailure
// when they disagree.
AdaptednessReport adaptedness_equivalences(const Net &net, const CpSubnet &cp, const Cluster &cl);

struct CpExhaustion {
	std::vector<CpSubnet> layers;
	NodeSet final_tnet;
	std::vector<Node> way_in_places;
	std::vector<Node> critical_transitions;
};

// Builds a cl-adapted CP-exhaustion by repeatedly removing the first adapted
// CP-subnet of the current complement until a T-net is left. Every layer is
// revalidated as a CP-subnet of the host. Throws CheckFailure when no adapted
// CP-subnet exists on a non-T-net complement, when the remaining part of cl
// would vanish, or when a revalidation fails.
CpExhaustion cp_exhaustion(const Net &net, const Cluster &cl, const CpOptions &options = {});

struct Boundary {
	std::vector<Node> way_in_places;
	std::vector<Node> critical_transitions;
};

// Way-in places use host arcs out of layer transitions; critical
// transitions are their successors inside the final T-net.
Boundary boundary(const Net &net, const std::vector<CpSubnet> &layers, const NodeSet &final_tnet);

// Structural validation of an exhaustion given as node sets (layers in
// order): pairwise disjoint CP-subnets of the host, adapted to cl when
// given, whose removal leaves a strongly connected T-net. Returns the list
// of problems, empty when valid.
std::vector<std::string> validate_exhaustion(const Net &net, const std::vector<NodeSet> &layers,
					     const std::optional<Cluster> &cl, const CpOptions &options = {});

} // namespace lucent
