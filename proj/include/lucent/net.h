#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lucent/error.h"

namespace lucent {

enum class NodeKind : std::uint8_t { place, transition };

// Index of a node inside one Net. Places occupy [0, place_count), transitions
// the rest; inside each kind nodes are sorted by name, so comparing two Nodes
// of the same net is the (kind, name) order used for every tie-break.
struct Node {
	std::uint32_t id = 0;

	friend auto operator<=>(Node, Node) = default;
};

// Dense membership set over the nodes of one net.
class NodeSet {
public:
	NodeSet() = default;
	explicit NodeSet(std::size_t universe) : bits_(universe, false) {}
	NodeSet(std::size_t universe, std::span<const Node> nodes);

	std::size_t universe() const { return bits_.size(); }
	bool contains(Node n) const { return n.id < bits_.size() && bits_[n.id]; }
	void insert(Node n);
	void erase(Node n);
	std::size_t size() const { return count_; }
	bool empty() const { return count_ == 0; }

	// Members in ascending order.
	std::vector<Node> nodes() const;

	bool is_subset_of(const NodeSet &other) const;
	bool intersects(const NodeSet &other) const;
	NodeSet operator|(const NodeSet &other) const;
	NodeSet operator&(const NodeSet &other) const;
	NodeSet operator-(const NodeSet &other) const;
	// Complement relative to the universe.
	NodeSet inverted() const;

	friend bool operator==(const NodeSet &a, const NodeSet &b) { return a.bits_ == b.bits_; }

private:
	std::vector<bool> bits_;
	std::size_t count_ = 0;
};

// Raw declarations of a net, before any checking. The DSL parser produces
// this; Net::from_spec turns it into the indexed representation.
struct NetSpec {
	std::string name;
	std::vector<std::string> places;
	std::vector<std::string> transitions;
	std::vector<std::pair<std::string, std::string>> arcs;
};

struct ValidationReport {
	std::vector<std::string> errors;
	bool weakly_connected = false;

	bool ok() const { return errors.empty(); }
};

ValidationReport validate_net(const NetSpec &spec);

class Net {
public:
	using Arc = std::pair<Node, Node>;

	Net() = default;

	// Throws NetError listing every structural violation reported by
	// validate_net. Weak connectivity is not required here: complements of
	// subnets may legitimately fall apart.
	static Net from_spec(const NetSpec &spec);

	const std::string &name() const { return name_; }
	std::size_t place_count() const { return place_count_; }
	std::size_t transition_count() const { return names_.size() - place_count_; }
	std::size_t node_count() const { return names_.size(); }

	NodeKind kind(Node n) const { return n.id < place_count_ ? NodeKind::place : NodeKind::transition; }
	bool is_place(Node n) const { return n.id < place_count_; }
	bool is_transition(Node n) const { return n.id >= place_count_ && n.id < names_.size(); }

	Node place(std::size_t i) const { return Node{static_cast<std::uint32_t>(i)}; }
	Node transition(std::size_t i) const { return Node{static_cast<std::uint32_t>(place_count_ + i)}; }
	std::vector<Node> places() const;
	std::vector<Node> transitions() const;
	std::vector<Node> nodes() const;

	const std::string &node_name(Node n) const { return names_.at(n.id); }
	std::optional<Node> find(std::string_view name) const;
	// Like find, but throws NetError("unknown node ...").
	Node at(std::string_view name) const;

	std::span<const Node> pre(Node n) const { return pre_.at(n.id); }
	std::span<const Node> post(Node n) const { return post_.at(n.id); }
	bool has_arc(Node from, Node to) const;
	const std::vector<Arc> &arcs() const { return arcs_; }

	NodeSet empty_set() const { return NodeSet(node_count()); }
	NodeSet all_nodes() const;
	NodeSet set_of(std::initializer_list<std::string_view> names) const;

	std::vector<std::string> names_of(const NodeSet &set) const;

private:
	std::string name_;
	std::vector<std::string> names_;
	std::size_t place_count_ = 0;
	std::vector<std::vector<Node>> pre_;
	std::vector<std::vector<Node>> post_;
	std::vector<Arc> arcs_;
	std::unordered_map<std::string, Node> index_;
};

ValidationReport validate_net(const Net &net);

// Maps the members of `set` (a node set of `from`) to the equally named
// nodes of `to`; names missing from `to` are dropped.
NodeSet translate(const Net &from, const NodeSet &set, const Net &to);

NodeSet preset(const Net &net, Node x);
NodeSet postset(const Net &net, Node x);
NodeSet preset(const Net &net, const NodeSet &xs);
NodeSet postset(const Net &net, const NodeSet &xs);

bool is_weakly_connected(const Net &net);
bool is_free_choice(const Net &net);
bool is_t_net(const Net &net);
bool is_p_net(const Net &net);

struct Cluster {
	std::vector<Node> places;
	std::vector<Node> transitions;
	NodeSet nodes;

	friend bool operator==(const Cluster &a, const Cluster &b) { return a.nodes == b.nodes; }
};

Cluster cluster_of(const Net &net, Node x);
// The partition of all nodes into clusters, ordered by least member.
std::vector<Cluster> clusters(const Net &net);
Cluster make_cluster(const Net &net, const NodeSet &nodes);

// A subnet given by its node set. Full subnets carry exactly the host arcs
// between their nodes; non-full ones list their arcs explicitly.
class Subnet {
public:
	Subnet(const Net &host, NodeSet nodes);
	Subnet(const Net &host, NodeSet nodes, std::vector<Net::Arc> arcs);

	const Net &host() const { return *host_; }
	const NodeSet &nodes() const { return nodes_; }
	bool full() const { return full_; }
	std::vector<Net::Arc> arcs() const;

	std::vector<Node> places() const;
	std::vector<Node> transitions() const;

	// The subnet as a standalone net with the same node names. Only
	// defined for full subnets.
	Net induced(std::string name = {}) const;

private:
	const Net *host_;
	NodeSet nodes_;
	bool full_ = true;
	std::vector<Net::Arc> arcs_;
};

Subnet span(const Net &net, const NodeSet &nodes);
Subnet complement(const Net &net, const Subnet &sub);
bool is_transition_bordered(const Net &net, const Subnet &sub);

class Marking {
public:
	Marking() = default;
	explicit Marking(std::size_t places) : counts_(places, 0) {}
	explicit Marking(std::vector<std::uint32_t> counts) : counts_(std::move(counts)) {}

	// Zero everywhere except the listed places. Throws NetError on unknown
	// or non-place names.
	static Marking of(const Net &net, std::initializer_list<std::pair<std::string_view, std::uint32_t>> counts);

	std::size_t size() const { return counts_.size(); }
	std::uint32_t operator[](Node p) const { return counts_.at(p.id); }
	void set(Node p, std::uint32_t value) { counts_.at(p.id) = value; }
	const std::vector<std::uint32_t> &counts() const { return counts_; }
	std::uint64_t total() const;
	bool is_zero() const { return total() == 0; }
	std::uint32_t max_count() const;

	friend bool operator==(const Marking &, const Marking &) = default;
	friend auto operator<=>(const Marking &, const Marking &) = default;

private:
	std::vector<std::uint32_t> counts_;
};

struct MarkingHash {
	std::size_t operator()(const Marking &m) const noexcept;
};

// "{p0:1, p1:0}" listing every place in net order.
std::string to_string(const Net &net, const Marking &m);

// Copies counts of `to`'s places from the equally named places of `from`.
Marking project(const Net &from, const Marking &m, const Net &to);

struct Path {
	std::vector<Node> nodes;

	bool is_elementary() const;
	friend bool operator==(const Path &, const Path &) = default;
	friend auto operator<=>(const Path &, const Path &) = default;
};

bool is_path(const Net &net, const Path &path);
std::string to_string(const Net &net, const Path &path);

void check_domain(const Net &net, const Marking &m);
bool is_enabled(const Net &net, const Marking &m, Node t);
std::vector<Node> enabled(const Net &net, const Marking &m);
Marking fire(const Net &net, const Marking &m, Node t);
Marking fire_sequence(const Net &net, const Marking &m, std::span<const Node> seq);

std::uint64_t token_count(const Net &net, const Marking &m, const NodeSet &nodes);
// Counts every occurrence of a place on the path.
std::uint64_t token_count(const Net &net, const Marking &m, const Path &path);

Marking cluster_marking(const Net &net, const Cluster &cl);

} // namespace lucent
