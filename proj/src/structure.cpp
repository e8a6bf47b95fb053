#include "lucent/structure.h"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace lucent {

namespace {

NodeSet reach(const Net &net, const NodeSet &nodes, Node from, bool forward)
{
	NodeSet seen = net.empty_set();
	std::deque<Node> queue{from};
	seen.insert(from);
	while (!queue.empty()) {
		Node x = queue.front();
		queue.pop_front();
		for (Node y : forward ? net.post(x) : net.pre(x))
			if (nodes.contains(y) && !seen.contains(y)) {
				seen.insert(y);
				queue.push_back(y);
			}
	}
	return seen;
}

} // namespace

bool is_strongly_connected(const Net &net, const NodeSet &nodes)
{
	if (nodes.empty())
		return false;
	Node root = nodes.nodes().front();
	return nodes.is_subset_of(reach(net, nodes, root, true)) && nodes.is_subset_of(reach(net, nodes, root, false));
}

bool is_strongly_connected(const Net &net)
{
	return is_strongly_connected(net, net.all_nodes());
}

bool is_strongly_connected(const Subnet &sub)
{
	if (sub.full())
		return is_strongly_connected(sub.host(), sub.nodes());
	// Non-full: run on the explicit arc list.
	NetSpec spec;
	spec.name = sub.host().name();
	for (Node p : sub.places())
		spec.places.push_back(sub.host().node_name(p));
	for (Node t : sub.transitions())
		spec.transitions.push_back(sub.host().node_name(t));
	for (const auto &[s, d] : sub.arcs())
		spec.arcs.emplace_back(sub.host().node_name(s), sub.host().node_name(d));
	if (spec.places.empty() && spec.transitions.empty())
		return false;
	return is_strongly_connected(Net::from_spec(spec));
}

void for_each_elementary_circuit(const Net &net, const NodeSet &nodes, std::size_t cap,
				 const std::function<bool(const Path &)> &visit)
{
	std::size_t found = 0;
	bool stop = false;
	std::vector<Node> stack;
	NodeSet on_stack = net.empty_set();

	// Circuits rooted at `root` use only nodes >= root, so each circuit is
	// produced exactly once, starting from its least node.
	std::function<void(Node, Node)> extend = [&](Node root, Node x) {
		for (Node y : net.post(x)) {
			if (stop)
				return;
			if (!nodes.contains(y) || y < root)
				continue;
			if (y == root) {
				if (++found > cap)
					throw CapExceeded("circuit cap exceeded (" + std::to_string(cap) + ")");
				if (!visit(Path{stack}))
					stop = true;
				continue;
			}
			if (on_stack.contains(y))
				continue;
			stack.push_back(y);
			on_stack.insert(y);
			extend(root, y);
			on_stack.erase(y);
			stack.pop_back();
		}
	};

	for (Node root : nodes.nodes()) {
		if (stop)
			return;
		stack = {root};
		on_stack = net.empty_set();
		on_stack.insert(root);
		extend(root, root);
	}
}

std::vector<Path> elementary_circuits(const Net &net, std::size_t cap)
{
	return elementary_circuits(net, net.all_nodes(), cap);
}

std::vector<Path> elementary_circuits(const Net &net, const NodeSet &nodes, std::size_t cap)
{
	std::vector<Path> out;
	for_each_elementary_circuit(net, nodes, cap, [&](const Path &c) {
		out.push_back(c);
		return true;
	});
	std::sort(out.begin(), out.end());
	return out;
}

void for_each_elementary_path(const Net &net, const NodeSet &nodes, std::optional<Node> avoid, std::size_t cap,
			      const std::function<bool(const Path &)> &visit)
{
	std::size_t found = 0;
	bool stop = false;
	Path path;
	NodeSet on_path = net.empty_set();

	auto report = [&] {
		if (++found > cap)
			throw CapExceeded("path cap exceeded (" + std::to_string(cap) + ")");
		if (!visit(path))
			stop = true;
	};

	std::function<void(Node)> extend = [&](Node x) {
		for (Node y : net.post(x)) {
			if (stop)
				return;
			if (!nodes.contains(y) || on_path.contains(y) || (avoid && y == *avoid))
				continue;
			path.nodes.push_back(y);
			on_path.insert(y);
			report();
			extend(y);
			on_path.erase(y);
			path.nodes.pop_back();
		}
	};

	for (Node start : nodes.nodes()) {
		if (stop)
			return;
		if (avoid && start == *avoid)
			continue;
		path.nodes = {start};
		on_path = net.empty_set();
		on_path.insert(start);
		report();
		extend(start);
	}
}

namespace {

struct ComponentSearch {
	const Net &net;
	std::size_t cap;
	std::size_t steps = 0;
	std::set<std::vector<Node>> seen;
	std::vector<PComponent> found;

	// `places` is the tentative place set; every transition adjacent to it
	// must end up with exactly one pre-place and one post-place in it.
	void search(NodeSet places)
	{
		if (++steps > cap)
			throw CapExceeded("component search cap exceeded (" + std::to_string(cap) + ")");

		NodeSet transitions = preset(net, places) | postset(net, places);
		std::optional<Node> open;
		bool open_is_pre = false;
		for (Node t : transitions.nodes()) {
			std::size_t in = 0, out = 0;
			for (Node p : net.pre(t))
				in += places.contains(p);
			for (Node p : net.post(t))
				out += places.contains(p);
			if (in > 1 || out > 1)
				return;
			if (!open && (in == 0 || out == 0)) {
				open = t;
				open_is_pre = in == 0;
			}
		}

		if (!open) {
			NodeSet nodes = places | transitions;
			auto key = places.nodes();
			if (!seen.insert(key).second)
				return;
			if (!is_strongly_connected(net, nodes))
				return;
			PComponent c;
			c.nodes = nodes;
			c.places = std::move(key);
			c.transitions = transitions.nodes();
			found.push_back(std::move(c));
			return;
		}

		for (Node p : open_is_pre ? net.pre(*open) : net.post(*open)) {
			NodeSet next = places;
			next.insert(p);
			search(std::move(next));
		}
	}
};

} // namespace

std::vector<PComponent> p_components(const Net &net, std::size_t cap)
{
	ComponentSearch search{net, cap, 0, {}, {}};
	for (Node p : net.places()) {
		NodeSet start = net.empty_set();
		start.insert(p);
		search.search(start);
	}
	std::sort(search.found.begin(), search.found.end(), [](const PComponent &a, const PComponent &b) {
		return a.nodes.nodes() < b.nodes.nodes();
	});
	return search.found;
}

bool is_covered_by(const Net &net, const std::vector<PComponent> &components)
{
	NodeSet covered = net.empty_set();
	for (const auto &c : components)
		covered = covered | c.nodes;
	return covered == net.all_nodes();
}

bool is_covered_by_p_components(const Net &net, std::size_t cap)
{
	return is_covered_by(net, p_components(net, cap));
}

namespace {

// Shortest backward path (tau, ..., q, target) from q to an enabled
// transition, never entering `target`.
std::optional<Path> nearest_feeder(const Net &tnet, const Marking &m, Node q, Node target)
{
	std::map<Node, Node> parent; // node -> successor towards q
	NodeSet seen = tnet.empty_set();
	seen.insert(q);
	seen.insert(target);
	std::vector<Node> level{q};

	auto unwind = [&](Node tau) {
		Path p;
		for (Node x = tau;; x = parent.at(x)) {
			p.nodes.push_back(x);
			if (x == q)
				break;
		}
		p.nodes.push_back(target);
		return p;
	};

	while (!level.empty()) {
		std::vector<Node> next;
		std::optional<Node> best;
		for (Node x : level)
			for (Node y : tnet.pre(x)) {
				if (seen.contains(y))
					continue;
				seen.insert(y);
				parent.emplace(y, x);
				next.push_back(y);
				if (tnet.is_transition(y) && is_enabled(tnet, m, y) && (!best || y < *best))
					best = y;
			}
		if (best)
			return unwind(*best);
		std::sort(next.begin(), next.end());
		level = std::move(next);
	}
	return std::nullopt;
}

Path concat(const Path &head, const Path &tail)
{
	// head ends where tail starts
	Path out = head;
	out.nodes.insert(out.nodes.end(), tail.nodes.begin() + 1, tail.nodes.end());
	return out;
}

} // namespace

FeedWitness token_free_feed(const Net &tnet, const Marking &m, Node t, Node q)
{
	check_domain(tnet, m);
	if (!is_t_net(tnet))
		throw PreconditionError("not a T-net");
	if (!tnet.is_transition(t) || !tnet.is_place(q) || !tnet.has_arc(q, t))
		throw PreconditionError("'" + tnet.node_name(q) + "' is not a pre-place of '" + tnet.node_name(t) + "'");
	if (m[q] != 0)
		throw PreconditionError("pre-place '" + tnet.node_name(q) + "' is marked");

	Path tail{{t}};
	Node place = q;
	Node target = t;
	for (std::size_t iteration = 1; iteration <= tnet.node_count(); ++iteration) {
		auto feeder = nearest_feeder(tnet, m, place, target);
		if (!feeder)
			throw CheckFailure("no witness for '" + tnet.node_name(q) + "' -> '" + tnet.node_name(t) +
					   "': system is not live");

		FeedWitness result;
		result.iterations = iteration;
		if (token_count(tnet, m, *feeder) == 0) {
			result.tau = feeder->nodes.front();
			result.delta = concat(*feeder, tail);
		} else {
			std::size_t last_marked = 0;
			for (std::size_t i = 0; i < feeder->nodes.size(); ++i)
				if (tnet.is_place(feeder->nodes[i]) && m[feeder->nodes[i]] > 0)
					last_marked = i;
			Path split{{feeder->nodes.begin() + static_cast<std::ptrdiff_t>(last_marked) + 1,
				    feeder->nodes.end()}};
			Path grown = concat(split, tail);
			if (grown.nodes.size() <= tail.nodes.size())
				throw CheckFailure("token-free tail did not grow");
			Node t_split = split.nodes.front();
			if (!is_enabled(tnet, m, t_split)) {
				for (Node p : tnet.pre(t_split))
					if (m[p] == 0) {
						place = p;
						break;
					}
				target = t_split;
				tail = std::move(grown);
				continue;
			}
			result.tau = t_split;
			result.delta = std::move(grown);
		}
		if (!result.delta.is_elementary())
			throw CheckFailure("no witness: token-free circuit through '" + tnet.node_name(q) +
					   "', system is not live");
		return result;
	}
	throw CheckFailure("token-forwarding iteration exceeded the node count");
}

std::vector<FeedWitness> all_feed_witnesses(const Net &tnet, const Marking &m, Node t, Node q, std::size_t cap)
{
	check_domain(tnet, m);
	std::vector<FeedWitness> out;
	if (!tnet.has_arc(q, t) || m[q] != 0)
		return out;

	// Backward DFS through unmarked places; stop at enabled transitions.
	std::vector<Node> rev{t, q};
	NodeSet used = tnet.empty_set();
	used.insert(t);
	used.insert(q);
	std::size_t steps = 0;
	std::function<void()> extend = [&] {
		if (++steps > cap)
			throw CapExceeded("path cap exceeded (" + std::to_string(cap) + ")");
		Node x = rev.back();
		for (Node y : tnet.pre(x)) {
			if (used.contains(y))
				continue;
			if (tnet.is_place(y) && m[y] > 0)
				continue;
			rev.push_back(y);
			used.insert(y);
			if (tnet.is_transition(y) && is_enabled(tnet, m, y)) {
				FeedWitness w;
				w.tau = y;
				w.delta.nodes.assign(rev.rbegin(), rev.rend());
				out.push_back(std::move(w));
			} else {
				extend();
			}
			used.erase(y);
			rev.pop_back();
		}
	};
	extend();
	std::sort(out.begin(), out.end(), [](const FeedWitness &a, const FeedWitness &b) { return a.delta < b.delta; });
	return out;
}

std::uint64_t max_path_token_count(const Net &tnet, const Marking &m, std::optional<Node> avoid, std::size_t cap)
{
	check_domain(tnet, m);
	std::uint64_t best = 0;
	for_each_elementary_path(tnet, tnet.all_nodes(), avoid, cap, [&](const Path &p) {
		best = std::max(best, token_count(tnet, m, p));
		return true;
	});
	return best;
}

} // namespace lucent
