#include "lucent/net.h"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace lucent {

NodeSet::NodeSet(std::size_t universe, std::span<const Node> nodes) : bits_(universe, false)
{
	for (Node n : nodes)
		insert(n);
}

void NodeSet::insert(Node n)
{
	if (!bits_.at(n.id)) {
		bits_[n.id] = true;
		++count_;
	}
}

void NodeSet::erase(Node n)
{
	if (bits_.at(n.id)) {
		bits_[n.id] = false;
		--count_;
	}
}

std::vector<Node> NodeSet::nodes() const
{
	std::vector<Node> out;
	out.reserve(count_);
	for (std::uint32_t i = 0; i < bits_.size(); ++i)
		if (bits_[i])
			out.push_back(Node{i});
	return out;
}

bool NodeSet::is_subset_of(const NodeSet &other) const
{
	for (std::uint32_t i = 0; i < bits_.size(); ++i)
		if (bits_[i] && !other.contains(Node{i}))
			return false;
	return true;
}

bool NodeSet::intersects(const NodeSet &other) const
{
	for (std::uint32_t i = 0; i < bits_.size(); ++i)
		if (bits_[i] && other.contains(Node{i}))
			return true;
	return false;
}

NodeSet NodeSet::operator|(const NodeSet &other) const
{
	NodeSet out = *this;
	for (Node n : other.nodes())
		out.insert(n);
	return out;
}

NodeSet NodeSet::operator&(const NodeSet &other) const
{
	NodeSet out(universe());
	for (Node n : nodes())
		if (other.contains(n))
			out.insert(n);
	return out;
}

NodeSet NodeSet::operator-(const NodeSet &other) const
{
	NodeSet out(universe());
	for (Node n : nodes())
		if (!other.contains(n))
			out.insert(n);
	return out;
}

NodeSet NodeSet::inverted() const
{
	NodeSet out(universe());
	for (std::uint32_t i = 0; i < bits_.size(); ++i)
		if (!bits_[i])
			out.insert(Node{i});
	return out;
}

namespace {

// BFS reachability over an undirected adjacency list.
bool connected(std::size_t n, const std::vector<std::vector<std::size_t>> &adj)
{
	if (n == 0)
		return false;
	std::vector<bool> seen(n, false);
	std::deque<std::size_t> queue{0};
	seen[0] = true;
	std::size_t reached = 1;
	while (!queue.empty()) {
		std::size_t x = queue.front();
		queue.pop_front();
		for (std::size_t y : adj[x])
			if (!seen[y]) {
				seen[y] = true;
				++reached;
				queue.push_back(y);
			}
	}
	return reached == n;
}

} // namespace

ValidationReport validate_net(const NetSpec &spec)
{
	ValidationReport report;
	if (spec.places.empty() && spec.transitions.empty()) {
		report.errors.push_back("empty node set");
		return report;
	}

	std::unordered_map<std::string, std::pair<NodeKind, std::size_t>> index;
	auto declare = [&](const std::string &name, NodeKind kind) {
		if (name.empty()) {
			report.errors.push_back("empty node name");
			return;
		}
		auto [it, inserted] = index.emplace(name, std::pair{kind, index.size()});
		if (!inserted)
			report.errors.push_back("duplicate node name '" + name + "'");
	};
	for (const auto &p : spec.places)
		declare(p, NodeKind::place);
	for (const auto &t : spec.transitions)
		declare(t, NodeKind::transition);

	std::vector<std::vector<std::size_t>> adj(index.size());
	std::set<std::pair<std::string, std::string>> seen_arcs;
	for (const auto &[src, dst] : spec.arcs) {
		auto s = index.find(src);
		auto d = index.find(dst);
		if (s == index.end() || d == index.end()) {
			report.errors.push_back("dangling arc endpoint in arc " + src + " -> " + dst);
			continue;
		}
		if (s->second.first == d->second.first) {
			report.errors.push_back("non-bipartite edge " + src + " -> " + dst);
			continue;
		}
		if (!seen_arcs.emplace(src, dst).second) {
			report.errors.push_back("duplicate arc " + src + " -> " + dst);
			continue;
		}
		adj[s->second.second].push_back(d->second.second);
		adj[d->second.second].push_back(s->second.second);
	}
	report.weakly_connected = connected(index.size(), adj);
	return report;
}

Net Net::from_spec(const NetSpec &spec)
{
	ValidationReport report = validate_net(spec);
	if (!report.ok()) {
		std::string msg = "invalid net '" + spec.name + "':";
		for (const auto &e : report.errors)
			msg += " " + e + ";";
		throw NetError(msg);
	}

	Net net;
	net.name_ = spec.name;
	std::vector<std::string> places = spec.places;
	std::vector<std::string> transitions = spec.transitions;
	std::sort(places.begin(), places.end());
	std::sort(transitions.begin(), transitions.end());
	net.place_count_ = places.size();
	net.names_ = std::move(places);
	net.names_.insert(net.names_.end(), transitions.begin(), transitions.end());
	for (std::uint32_t i = 0; i < net.names_.size(); ++i)
		net.index_.emplace(net.names_[i], Node{i});

	net.pre_.assign(net.names_.size(), {});
	net.post_.assign(net.names_.size(), {});
	for (const auto &[src, dst] : spec.arcs) {
		Node s = net.index_.at(src);
		Node d = net.index_.at(dst);
		net.arcs_.emplace_back(s, d);
		net.post_[s.id].push_back(d);
		net.pre_[d.id].push_back(s);
	}
	std::sort(net.arcs_.begin(), net.arcs_.end());
	for (auto &v : net.pre_)
		std::sort(v.begin(), v.end());
	for (auto &v : net.post_)
		std::sort(v.begin(), v.end());
	return net;
}

std::vector<Node> Net::places() const
{
	std::vector<Node> out;
	for (std::size_t i = 0; i < place_count_; ++i)
		out.push_back(place(i));
	return out;
}

std::vector<Node> Net::transitions() const
{
	std::vector<Node> out;
	for (std::size_t i = 0; i < transition_count(); ++i)
		out.push_back(transition(i));
	return out;
}

std::vector<Node> Net::nodes() const
{
	std::vector<Node> out;
	for (std::uint32_t i = 0; i < names_.size(); ++i)
		out.push_back(Node{i});
	return out;
}

std::optional<Node> Net::find(std::string_view name) const
{
	auto it = index_.find(std::string(name));
	if (it == index_.end())
		return std::nullopt;
	return it->second;
}

Node Net::at(std::string_view name) const
{
	if (auto n = find(name))
		return *n;
	throw NetError("unknown node '" + std::string(name) + "' in net '" + name_ + "'");
}

bool Net::has_arc(Node from, Node to) const
{
	auto out = post(from);
	return std::binary_search(out.begin(), out.end(), to);
}

NodeSet Net::all_nodes() const
{
	return empty_set().inverted();
}

NodeSet Net::set_of(std::initializer_list<std::string_view> names) const
{
	NodeSet out = empty_set();
	for (auto name : names)
		out.insert(at(name));
	return out;
}

std::vector<std::string> Net::names_of(const NodeSet &set) const
{
	std::vector<std::string> out;
	for (Node n : set.nodes())
		out.push_back(node_name(n));
	return out;
}

ValidationReport validate_net(const Net &net)
{
	ValidationReport report;
	if (net.node_count() == 0)
		report.errors.push_back("empty node set");
	report.weakly_connected = is_weakly_connected(net);
	return report;
}

NodeSet translate(const Net &from, const NodeSet &set, const Net &to)
{
	NodeSet out = to.empty_set();
	for (Node n : set.nodes())
		if (auto m = to.find(from.node_name(n)))
			out.insert(*m);
	return out;
}

NodeSet preset(const Net &net, Node x)
{
	return NodeSet(net.node_count(), net.pre(x));
}

NodeSet postset(const Net &net, Node x)
{
	return NodeSet(net.node_count(), net.post(x));
}

NodeSet preset(const Net &net, const NodeSet &xs)
{
	NodeSet out = net.empty_set();
	for (Node x : xs.nodes())
		for (Node y : net.pre(x))
			out.insert(y);
	return out;
}

NodeSet postset(const Net &net, const NodeSet &xs)
{
	NodeSet out = net.empty_set();
	for (Node x : xs.nodes())
		for (Node y : net.post(x))
			out.insert(y);
	return out;
}

bool is_weakly_connected(const Net &net)
{
	std::vector<std::vector<std::size_t>> adj(net.node_count());
	for (const auto &[s, d] : net.arcs()) {
		adj[s.id].push_back(d.id);
		adj[d.id].push_back(s.id);
	}
	return connected(net.node_count(), adj);
}

bool is_free_choice(const Net &net)
{
	for (const auto &[p, t] : net.arcs()) {
		if (!net.is_place(p))
			continue;
		for (Node q : net.pre(t))
			for (Node u : net.post(p))
				if (!net.has_arc(q, u))
					return false;
	}
	return true;
}

bool is_t_net(const Net &net)
{
	for (Node p : net.places())
		if (net.pre(p).size() != 1 || net.post(p).size() != 1)
			return false;
	return true;
}

bool is_p_net(const Net &net)
{
	for (Node t : net.transitions())
		if (net.pre(t).size() != 1 || net.post(t).size() != 1)
			return false;
	return true;
}

Cluster make_cluster(const Net &net, const NodeSet &nodes)
{
	Cluster cl;
	cl.nodes = nodes;
	for (Node n : nodes.nodes())
		(net.is_place(n) ? cl.places : cl.transitions).push_back(n);
	return cl;
}

Cluster cluster_of(const Net &net, Node x)
{
	NodeSet members = net.empty_set();
	std::deque<Node> queue{x};
	members.insert(x);
	while (!queue.empty()) {
		Node n = queue.front();
		queue.pop_front();
		auto next = net.is_place(n) ? net.post(n) : net.pre(n);
		for (Node m : next)
			if (!members.contains(m)) {
				members.insert(m);
				queue.push_back(m);
			}
	}
	return make_cluster(net, members);
}

std::vector<Cluster> clusters(const Net &net)
{
	std::vector<Cluster> out;
	NodeSet covered = net.empty_set();
	for (Node n : net.nodes()) {
		if (covered.contains(n))
			continue;
		Cluster cl = cluster_of(net, n);
		covered = covered | cl.nodes;
		out.push_back(std::move(cl));
	}
	std::sort(out.begin(), out.end(), [](const Cluster &a, const Cluster &b) {
		return a.nodes.nodes().front() < b.nodes.nodes().front();
	});
	return out;
}

Subnet::Subnet(const Net &host, NodeSet nodes) : host_(&host), nodes_(std::move(nodes))
{
	if (nodes_.universe() != host.node_count())
		throw NetError("subnet node set does not match host net");
}

Subnet::Subnet(const Net &host, NodeSet nodes, std::vector<Net::Arc> arcs)
	: host_(&host), nodes_(std::move(nodes)), full_(false), arcs_(std::move(arcs))
{
	if (nodes_.universe() != host.node_count())
		throw NetError("subnet node set does not match host net");
	std::sort(arcs_.begin(), arcs_.end());
	for (const auto &[s, d] : arcs_)
		if (!nodes_.contains(s) || !nodes_.contains(d) || !host.has_arc(s, d))
			throw NetError("subnet arc not contained in host");
}

std::vector<Net::Arc> Subnet::arcs() const
{
	if (!full_)
		return arcs_;
	std::vector<Net::Arc> out;
	for (const auto &arc : host_->arcs())
		if (nodes_.contains(arc.first) && nodes_.contains(arc.second))
			out.push_back(arc);
	return out;
}

std::vector<Node> Subnet::places() const
{
	std::vector<Node> out;
	for (Node n : nodes_.nodes())
		if (host_->is_place(n))
			out.push_back(n);
	return out;
}

std::vector<Node> Subnet::transitions() const
{
	std::vector<Node> out;
	for (Node n : nodes_.nodes())
		if (host_->is_transition(n))
			out.push_back(n);
	return out;
}

Net Subnet::induced(std::string name) const
{
	if (!full_)
		throw NetError("induced net of a non-full subnet");
	NetSpec spec;
	spec.name = name.empty() ? host_->name() : std::move(name);
	for (Node p : places())
		spec.places.push_back(host_->node_name(p));
	for (Node t : transitions())
		spec.transitions.push_back(host_->node_name(t));
	for (const auto &[s, d] : arcs())
		spec.arcs.emplace_back(host_->node_name(s), host_->node_name(d));
	if (spec.places.empty() && spec.transitions.empty())
		throw NetError("induced net of an empty subnet");
	return Net::from_spec(spec);
}

Subnet span(const Net &net, const NodeSet &nodes)
{
	return Subnet(net, nodes);
}

Subnet complement(const Net &net, const Subnet &sub)
{
	if (!sub.full())
		throw PreconditionError("complement of a non-full subnet");
	return Subnet(net, sub.nodes().inverted());
}

bool is_transition_bordered(const Net &net, const Subnet &sub)
{
	for (Node p : sub.places()) {
		for (Node t : net.pre(p))
			if (!sub.nodes().contains(t))
				return false;
		for (Node t : net.post(p))
			if (!sub.nodes().contains(t))
				return false;
	}
	return true;
}

Marking Marking::of(const Net &net, std::initializer_list<std::pair<std::string_view, std::uint32_t>> counts)
{
	Marking m(net.place_count());
	for (const auto &[name, value] : counts) {
		Node p = net.at(name);
		if (!net.is_place(p))
			throw NetError("'" + std::string(name) + "' is not a place");
		m.set(p, value);
	}
	return m;
}

std::uint64_t Marking::total() const
{
	std::uint64_t sum = 0;
	for (auto c : counts_)
		sum += c;
	return sum;
}

std::uint32_t Marking::max_count() const
{
	return counts_.empty() ? 0 : *std::max_element(counts_.begin(), counts_.end());
}

std::size_t MarkingHash::operator()(const Marking &m) const noexcept
{
	std::size_t h = 1469598103934665603ull;
	for (auto c : m.counts()) {
		h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
	}
	return h;
}

std::string to_string(const Net &net, const Marking &m)
{
	std::ostringstream os;
	os << "{";
	for (std::size_t i = 0; i < m.size(); ++i) {
		if (i)
			os << ", ";
		os << net.node_name(net.place(i)) << ":" << m.counts()[i];
	}
	os << "}";
	return os.str();
}

Marking project(const Net &from, const Marking &m, const Net &to)
{
	check_domain(from, m);
	Marking out(to.place_count());
	for (Node p : to.places()) {
		auto q = from.find(to.node_name(p));
		if (!q || !from.is_place(*q))
			throw NetError("place '" + to.node_name(p) + "' missing from net '" + from.name() + "'");
		out.set(p, m[*q]);
	}
	return out;
}

bool Path::is_elementary() const
{
	std::vector<Node> sorted = nodes;
	std::sort(sorted.begin(), sorted.end());
	return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool is_path(const Net &net, const Path &path)
{
	if (path.nodes.empty())
		return false;
	for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i)
		if (!net.has_arc(path.nodes[i], path.nodes[i + 1]))
			return false;
	return true;
}

std::string to_string(const Net &net, const Path &path)
{
	std::string out = "(";
	for (std::size_t i = 0; i < path.nodes.size(); ++i) {
		if (i)
			out += ",";
		out += net.node_name(path.nodes[i]);
	}
	return out + ")";
}

void check_domain(const Net &net, const Marking &m)
{
	if (m.size() != net.place_count())
		throw NetError("marking has " + std::to_string(m.size()) + " places, net '" + net.name() + "' has " +
			       std::to_string(net.place_count()));
}

bool is_enabled(const Net &net, const Marking &m, Node t)
{
	for (Node p : net.pre(t))
		if (m[p] == 0)
			return false;
	return true;
}

std::vector<Node> enabled(const Net &net, const Marking &m)
{
	check_domain(net, m);
	std::vector<Node> out;
	for (Node t : net.transitions())
		if (is_enabled(net, m, t))
			out.push_back(t);
	return out;
}

namespace {

Marking fire_unchecked(const Net &net, const Marking &m, Node t)
{
	std::vector<std::uint32_t> counts = m.counts();
	for (Node p : net.pre(t))
		--counts[p.id];
	for (Node p : net.post(t))
		++counts[p.id];
	return Marking(std::move(counts));
}

std::string not_enabled_message(const Net &net, const Marking &m, Node t)
{
	std::string msg = "transition '" + net.node_name(t) + "' not enabled; unmarked pre-places:";
	for (Node p : net.pre(t))
		if (m[p] == 0)
			msg += " " + net.node_name(p);
	return msg;
}

} // namespace

Marking fire(const Net &net, const Marking &m, Node t)
{
	check_domain(net, m);
	if (!net.is_transition(t))
		throw NetError("cannot fire non-transition node");
	if (!is_enabled(net, m, t))
		throw NotEnabledError(not_enabled_message(net, m, t), 0);
	return fire_unchecked(net, m, t);
}

Marking fire_sequence(const Net &net, const Marking &m, std::span<const Node> seq)
{
	check_domain(net, m);
	Marking cur = m;
	for (std::size_t i = 0; i < seq.size(); ++i) {
		if (!net.is_transition(seq[i]) || !is_enabled(net, cur, seq[i]))
			throw NotEnabledError("not enabled at step " + std::to_string(i) + ": " +
						      not_enabled_message(net, cur, seq[i]),
					      i);
		cur = fire_unchecked(net, cur, seq[i]);
	}
	return cur;
}

std::uint64_t token_count(const Net &net, const Marking &m, const NodeSet &nodes)
{
	check_domain(net, m);
	std::uint64_t sum = 0;
	for (Node n : nodes.nodes())
		if (net.is_place(n))
			sum += m[n];
	return sum;
}

std::uint64_t token_count(const Net &net, const Marking &m, const Path &path)
{
	check_domain(net, m);
	std::uint64_t sum = 0;
	for (Node n : path.nodes)
		if (net.is_place(n))
			sum += m[n];
	return sum;
}

Marking cluster_marking(const Net &net, const Cluster &cl)
{
	Marking m(net.place_count());
	for (Node p : cl.places)
		m.set(p, 1);
	return m;
}

} // namespace lucent
