#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lucent/net.h"

namespace lucent {

inline constexpr std::size_t default_enum_cap = 100000;

// Strong connectivity of the full subnet on `nodes` (host arcs between
// members only). A single node counts as strongly connected, an empty set
// does not.
bool is_strongly_connected(const Net &net, const NodeSet &nodes);
bool is_strongly_connected(const Net &net);
bool is_strongly_connected(const Subnet &sub);

// Calls `visit` once per elementary circuit of the full subnet on `nodes`,
// each rotated to start at its least node. Circuits are produced in
// lexicographic order. Throws CapExceeded once more than `cap` circuits
// exist; returning false from `visit` stops early.
void for_each_elementary_circuit(const Net &net, const NodeSet &nodes, std::size_t cap,
				 const std::function<bool(const Path &)> &visit);
std::vector<Path> elementary_circuits(const Net &net, std::size_t cap = default_enum_cap);
std::vector<Path> elementary_circuits(const Net &net, const NodeSet &nodes, std::size_t cap = default_enum_cap);

// Every elementary path (including single nodes) inside `nodes` that avoids
// `avoid`. Same cap semantics as above.
void for_each_elementary_path(const Net &net, const NodeSet &nodes, std::optional<Node> avoid, std::size_t cap,
			      const std::function<bool(const Path &)> &visit);

struct PComponent {
	NodeSet nodes;
	std::vector<Node> places;
	std::vector<Node> transitions;
};

// All P-components, ordered by their sorted node lists. Exhaustive
// backtracking over the forced pre/post place choices; throws CapExceeded
// when the search visits more than `cap` partial components.
std::vector<PComponent> p_components(const Net &net, std::size_t cap = default_enum_cap);
bool is_covered_by_p_components(const Net &net, std::size_t cap = default_enum_cap);
bool is_covered_by(const Net &net, const std::vector<PComponent> &components);

// A transition tau enabled at the queried marking together with a
// token-free elementary path (tau, ..., q, t).
struct FeedWitness {
	Node tau;
	Path delta;
	std::size_t iterations = 0;
};

// Finds a FeedWitness for a transition t of a live T-system whose pre-place q
// is unmarked. Follows the token-forwarding iteration: look for an enabled
// feeder of the current unmarked place, keep the token-free tail of its path,
// and restart from an unmarked pre-place of the split transition until the
// path is token-free from an enabled transition.
//
// Choice points resolve to the shortest feeder path, ties by node order.
// Throws PreconditionError if `tnet` is not a T-net or q is not an unmarked
// pre-place of t, and CheckFailure("no witness ...") if the system cannot be
// live.
FeedWitness token_free_feed(const Net &tnet, const Marking &m, Node t, Node q);

// All FeedWitness pairs for (t, q) by exhaustive backward search.
std::vector<FeedWitness> all_feed_witnesses(const Net &tnet, const Marking &m, Node t, Node q,
					    std::size_t cap = default_enum_cap);

// Largest token count of an elementary path avoiding `avoid`.
std::uint64_t max_path_token_count(const Net &tnet, const Marking &m, std::optional<Node> avoid,
				   std::size_t cap = default_enum_cap);

} // namespace lucent
