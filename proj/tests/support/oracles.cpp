#include "support/oracles.h"

#include <functional>

namespace lucent::oracle {

Adjacency adjacency(const Net &net)
{
	Adjacency a(net.node_count(), std::vector<bool>(net.node_count(), false));
	for (const auto &[x, y] : net.arcs())
		a[x.id][y.id] = true;
	return a;
}

bool enabled(const Net &net, const Marking &m, Node t)
{
	auto a = adjacency(net);
	for (Node p : net.places())
		if (a[p.id][t.id] && m[p] == 0)
			return false;
	return true;
}

Marking fire(const Net &net, const Marking &m, Node t)
{
	auto a = adjacency(net);
	Marking out = m;
	for (Node p : net.places()) {
		int delta = int(a[t.id][p.id]) - int(a[p.id][t.id]);
		out.set(p, static_cast<std::uint32_t>(int(m[p]) + delta));
	}
	return out;
}

namespace {

std::set<Marking> successors(const Net &net, const Marking &m)
{
	std::set<Marking> out;
	for (Node t : net.transitions())
		if (oracle::enabled(net, m, t))
			out.insert(oracle::fire(net, m, t));
	return out;
}

} // namespace

std::set<Marking> reachable(const Net &net, const Marking &m0)
{
	std::set<Marking> seen{m0};
	std::vector<Marking> stack{m0};
	while (!stack.empty()) {
		Marking m = stack.back();
		stack.pop_back();
		for (const auto &next : successors(net, m))
			if (seen.insert(next).second)
				stack.push_back(next);
	}
	return seen;
}

bool live(const Net &net, const Marking &m0)
{
	for (const auto &m : reachable(net, m0)) {
		auto ahead = reachable(net, m);
		for (Node t : net.transitions()) {
			bool ok = false;
			for (const auto &x : ahead)
				ok = ok || enabled(net, x, t);
			if (!ok)
				return false;
		}
	}
	return true;
}

bool home(const Net &net, const Marking &m0, const Marking &target)
{
	for (const auto &m : reachable(net, m0))
		if (!reachable(net, m).contains(target))
			return false;
	return true;
}

std::set<std::vector<Node>> clusters(const Net &net)
{
	std::vector<std::size_t> parent(net.node_count());
	for (std::size_t i = 0; i < parent.size(); ++i)
		parent[i] = i;
	std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
		return parent[x] == x ? x : parent[x] = root(parent[x]);
	};
	for (const auto &[x, y] : net.arcs())
		if (net.is_place(x))
			parent[root(x.id)] = root(y.id);
	std::map<std::size_t, std::vector<Node>> groups;
	for (Node n : net.nodes())
		groups[root(n.id)].push_back(n);
	std::set<std::vector<Node>> out;
	for (auto &[r, members] : groups)
		out.insert(members);
	return out;
}

bool strongly_connected(const Net &net, const std::vector<Node> &nodes)
{
	if (nodes.empty())
		return false;
	auto a = adjacency(net);
	std::size_t n = nodes.size();
	std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = 0; j < n; ++j)
			r[i][j] = i == j || a[nodes[i].id][nodes[j].id];
	for (std::size_t k = 0; k < n; ++k)
		for (std::size_t i = 0; i < n; ++i)
			for (std::size_t j = 0; j < n; ++j)
				if (r[i][k] && r[k][j])
					r[i][j] = true;
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = 0; j < n; ++j)
			if (!r[i][j])
				return false;
	return true;
}

bool free_choice(const Net &net)
{
	auto a = adjacency(net);
	for (Node p : net.places())
		for (Node t : net.transitions()) {
			if (!a[p.id][t.id])
				continue;
			for (Node p2 : net.places())
				for (Node t2 : net.transitions())
					if (a[p2.id][t.id] && a[p.id][t2.id] && !a[p2.id][t2.id])
						return false;
		}
	return true;
}

std::set<std::vector<Node>> elementary_paths(const Net &net, const std::vector<bool> &allowed)
{
	auto a = adjacency(net);
	std::set<std::vector<Node>> out;
	std::vector<Node> path;
	std::vector<bool> used(net.node_count(), false);
	std::function<void()> grow = [&] {
		out.insert(path);
		for (Node y : net.nodes()) {
			if (!allowed[y.id] || used[y.id] || !a[path.back().id][y.id])
				continue;
			used[y.id] = true;
			path.push_back(y);
			grow();
			path.pop_back();
			used[y.id] = false;
		}
	};
	for (Node x : net.nodes()) {
		if (!allowed[x.id])
			continue;
		path = {x};
		used.assign(net.node_count(), false);
		used[x.id] = true;
		grow();
	}
	return out;
}

std::set<std::vector<Node>> elementary_circuits(const Net &net)
{
	auto a = adjacency(net);
	std::set<std::vector<Node>> out;
	for (const auto &p : elementary_paths(net, std::vector<bool>(net.node_count(), true))) {
		// Closed by an arc back to the start; keep the rotation starting at the least node.
		if (p.size() < 2 || !a[p.back().id][p.front().id])
			continue;
		if (std::min_element(p.begin(), p.end()) == p.begin())
			out.insert(p);
	}
	return out;
}

std::set<std::vector<Node>> feed_paths(const Net &net, const Marking &m, Node t, Node q)
{
	std::set<std::vector<Node>> out;
	for (const auto &p : elementary_paths(net, std::vector<bool>(net.node_count(), true))) {
		if (p.size() < 3 || p.back() != t || p[p.size() - 2] != q)
			continue;
		if (!net.is_transition(p.front()) || !enabled(net, m, p.front()))
			continue;
		bool token_free = true;
		for (Node x : p)
			if (net.is_place(x) && m[x] > 0)
				token_free = false;
		if (token_free)
			out.insert(p);
	}
	return out;
}

namespace {

bool weakly_connected(const Adjacency &a, const std::vector<Node> &nodes)
{
	std::vector<bool> in(a.size(), false), seen(a.size(), false);
	for (Node n : nodes)
		in[n.id] = true;
	std::vector<std::size_t> stack{nodes.front().id};
	seen[nodes.front().id] = true;
	std::size_t count = 1;
	while (!stack.empty()) {
		std::size_t x = stack.back();
		stack.pop_back();
		for (std::size_t y = 0; y < a.size(); ++y)
			if (in[y] && !seen[y] && (a[x][y] || a[y][x])) {
				seen[y] = true;
				++count;
				stack.push_back(y);
			}
	}
	return count == nodes.size();
}

} // namespace

std::set<std::vector<Node>> cp_subnets(const Net &net)
{
	auto a = adjacency(net);
	std::size_t n = net.node_count();
	std::set<std::vector<Node>> out;
	for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
		std::vector<Node> inside, rest;
		for (Node x : net.nodes())
			((mask >> x.id) & 1 ? inside : rest).push_back(x);
		auto member = [&](Node x) { return ((mask >> x.id) & 1) != 0; };

		bool has_place = false, ok = true;
		for (Node x : inside) {
			if (!net.is_place(x))
				continue;
			has_place = true;
			std::size_t pre = 0, post = 0;
			for (Node y : net.nodes()) {
				if (a[y.id][x.id]) {
					++pre;
					ok = ok && member(y);
				}
				if (a[x.id][y.id]) {
					++post;
					ok = ok && member(y);
				}
			}
			ok = ok && pre == 1 && post == 1;
		}
		if (!has_place || !ok || !weakly_connected(a, inside))
			continue;
		bool rest_has_transition = false;
		for (Node x : rest)
			rest_has_transition = rest_has_transition || net.is_transition(x);
		if (!rest_has_transition || !strongly_connected(net, rest))
			continue;

		std::vector<Node> ins;
		bool has_out = false;
		for (Node t : inside) {
			if (!net.is_transition(t))
				continue;
			bool in_from_rest = false, out_to_rest = false;
			for (Node p : rest) {
				in_from_rest = in_from_rest || a[p.id][t.id];
				out_to_rest = out_to_rest || a[t.id][p.id];
			}
			if (in_from_rest)
				ins.push_back(t);
			has_out = has_out || out_to_rest;
		}
		if (ins.size() != 1 || !has_out)
			continue;
		std::vector<bool> seen(n, false);
		std::vector<Node> stack{ins.front()};
		seen[ins.front().id] = true;
		while (!stack.empty()) {
			Node x = stack.back();
			stack.pop_back();
			for (Node y : inside)
				if (!seen[y.id] && a[x.id][y.id]) {
					seen[y.id] = true;
					stack.push_back(y);
				}
		}
		bool all = true;
		for (Node x : inside)
			if (net.is_place(x) && !seen[x.id])
				all = false;
		if (all)
			out.insert(inside);
	}
	return out;
}

bool has_adapted_exhaustion(const Net &net, const std::vector<Node> &cl)
{
	std::vector<std::vector<Node>> layers;
	for (const auto &c : cp_subnets(net))
		if (!std::includes(c.begin(), c.end(), cl.begin(), cl.end()))
			layers.push_back(c);

	auto a = adjacency(net);
	auto leaves_tnet = [&](const std::vector<bool> &used) {
		std::vector<Node> rest;
		for (Node x : net.nodes())
			if (!used[x.id])
				rest.push_back(x);
		if (rest.empty())
			return false;
		for (Node p : rest) {
			if (!net.is_place(p))
				continue;
			std::size_t pre = 0, post = 0;
			for (Node y : rest) {
				pre += a[y.id][p.id];
				post += a[p.id][y.id];
			}
			if (pre != 1 || post != 1)
				return false;
		}
		return strongly_connected(net, rest);
	};

	std::vector<bool> used(net.node_count(), false);
	std::function<bool(std::size_t)> extend = [&](std::size_t from) {
		if (leaves_tnet(used))
			return true;
		for (std::size_t i = from; i < layers.size(); ++i) {
			if (std::any_of(layers[i].begin(), layers[i].end(), [&](Node x) { return used[x.id]; }))
				continue;
			for (Node x : layers[i])
				used[x.id] = true;
			bool found = extend(i + 1);
			for (Node x : layers[i])
				used[x.id] = false;
			if (found)
				return true;
		}
		return false;
	};
	return extend(0);
}

std::set<std::vector<Node>> p_components(const Net &net)
{
	auto a = adjacency(net);
	std::size_t np = net.place_count();
	std::set<std::vector<Node>> out;
	for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << np); ++mask) {
		std::vector<bool> in(net.node_count(), false);
		for (Node p : net.places())
			if ((mask >> p.id) & 1)
				in[p.id] = true;
		for (Node t : net.transitions())
			for (Node p : net.places())
				if (in[p.id] && (a[p.id][t.id] || a[t.id][p.id]))
					in[t.id] = true;
		bool ok = true;
		for (Node t : net.transitions()) {
			if (!in[t.id])
				continue;
			std::size_t pre = 0, post = 0;
			for (Node p : net.places()) {
				pre += in[p.id] && a[p.id][t.id];
				post += in[p.id] && a[t.id][p.id];
			}
			ok = ok && pre == 1 && post == 1;
		}
		std::vector<Node> nodes;
		for (Node x : net.nodes())
			if (in[x.id])
				nodes.push_back(x);
		if (ok && strongly_connected(net, nodes))
			out.insert(nodes);
	}
	return out;
}

std::vector<std::pair<Marking, Marking>> lucency_violations(const Net &net, const Marking &m0)
{
	std::map<std::vector<Node>, std::vector<Marking>> by_enabled;
	for (const auto &m : reachable(net, m0)) {
		std::vector<Node> en;
		for (Node t : net.transitions())
			if (enabled(net, m, t))
				en.push_back(t);
		by_enabled[en].push_back(m);
	}
	std::vector<std::pair<Marking, Marking>> out;
	for (const auto &[en, ms] : by_enabled)
		for (std::size_t i = 0; i < ms.size(); ++i)
			for (std::size_t j = i + 1; j < ms.size(); ++j)
				out.emplace_back(ms[i], ms[j]);
	return out;
}

} // namespace lucent::oracle
