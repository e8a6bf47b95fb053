#include "support/generator.h"

#include <set>

#include "lucent/dsl.h"
#include "lucent/reachability.h"

namespace lucent::testing {

namespace {

class Builder {
public:
	Builder(std::mt19937 &rng, bool tnet_only, int max_depth) : rng_(rng), tnet_only_(tnet_only), max_depth_(max_depth) {}

	std::string place(const std::string &hint = "p")
	{
		std::string name = hint + std::to_string(spec.places.size());
		spec.places.push_back(name);
		return name;
	}

	std::string trans(const std::string &hint = "t")
	{
		std::string name = hint + std::to_string(spec.transitions.size());
		spec.transitions.push_back(name);
		return name;
	}

	void arc(const std::string &a, const std::string &b) { spec.arcs.emplace_back(a, b); }

	// Connects `in` to `out`; only adds post-transitions to `in` whose
	// preset is {in} (or a cluster sharing exactly the same places) and only
	// pre-transitions to `out`.
	std::string block(const std::string &in, const std::string &out, int depth)
	{
		int kinds = tnet_only_ ? 3 : 6;
		int kind = depth >= max_depth_ ? 0 : pick(kinds);
		switch (kind) {
		case 1: {
			std::string mid = place();
			std::string a = block(in, mid, depth + 1);
			std::string b = block(mid, out, depth + 1);
			return "seq(" + a + "," + b + ")";
		}
		case 2: {
			std::string split = trans("s"), join = trans("j");
			std::string i1 = place(), i2 = place(), o1 = place(), o2 = place();
			arc(in, split);
			arc(split, i1);
			arc(split, i2);
			arc(o1, join);
			arc(o2, join);
			arc(join, out);
			std::string a = block(i1, o1, depth + 1);
			std::string b = block(i2, o2, depth + 1);
			return "and(" + a + "," + b + ")";
		}
		case 3: {
			std::string a = block(in, out, depth + 1);
			std::string b = block(in, out, depth + 1);
			return "xor(" + a + "," + b + ")";
		}
		case 4: {
			std::string mid = place();
			std::string body = block(in, mid, depth + 1);
			std::string exit = trans("x"), redo = trans("r");
			arc(mid, exit);
			arc(exit, out);
			arc(mid, redo);
			arc(redo, in);
			return "loop(" + body + ")";
		}
		case 5: {
			// Synchronised choice: both branches of a fork decide together
			// whether to leave or to go round once more.
			std::string split = trans("s");
			std::string q1 = place("q"), q2 = place("q");
			arc(in, split);
			arc(split, q1);
			arc(split, q2);
			std::string exit = trans("x");
			arc(q1, exit);
			arc(q2, exit);
			arc(exit, out);
			int redos = 1 + pick(2);
			for (int i = 0; i < redos; ++i) {
				std::string go = trans("r"), back = trans("b"), r = place("w");
				arc(q1, go);
				arc(q2, go);
				arc(go, r);
				arc(r, back);
				arc(back, q1);
				arc(back, q2);
			}
			return "choice_loop(" + std::to_string(redos) + ")";
		}
		default: {
			std::string t = trans();
			arc(in, t);
			arc(t, out);
			return "a";
		}
		}
	}

	NetSpec spec;

private:
	int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

	std::mt19937 &rng_;
	bool tnet_only_;
	int max_depth_;
};

Generated build(std::mt19937 &rng, const std::string &name, bool tnet_only, int max_depth)
{
	Builder b(rng, tnet_only, max_depth);
	b.spec.name = name;
	b.spec.places.push_back("start");
	b.spec.places.push_back("end");
	std::string shape = b.block("start", "end", 0);
	b.spec.transitions.push_back("t*");
	b.arc("end", "t*");
	b.arc("t*", "start");
	Net net = Net::from_spec(b.spec);
	Marking m = Marking::of(net, {{"start", 1}});
	Cluster cl = cluster_of(net, net.at("start"));
	return Generated{std::move(net), std::move(m), std::move(cl), shape};
}

// Moves the initial marking forward by a few random firings.
Marking wander(std::mt19937 &rng, const Net &net, Marking m)
{
	int steps = std::uniform_int_distribution<int>(0, 6)(rng);
	for (int i = 0; i < steps; ++i) {
		auto en = enabled(net, m);
		if (en.empty())
			break;
		m = fire(net, m, en[std::uniform_int_distribution<std::size_t>(0, en.size() - 1)(rng)]);
	}
	return m;
}

std::vector<Generated> collect(std::uint32_t seed, std::size_t count, bool tnet_only, const GeneratorLimits &limits,
			       const std::string &prefix)
{
	std::mt19937 rng(seed);
	std::vector<Generated> out;
	std::set<std::string> seen;
	for (std::size_t attempt = 0; out.size() < count && attempt < count * 200; ++attempt) {
		Generated g = build(rng, prefix + std::to_string(out.size()), tnet_only, limits.max_depth);
		if (g.net.node_count() > limits.max_nodes || !is_free_choice(g.net))
			continue;
		g.initial = wander(rng, g.net, g.initial);
		std::string body = emit_net(g.net, g.initial);
		if (!seen.insert(body.substr(body.find('\n'))).second)
			continue;
		auto rg = explore(g.net, g.initial, limits.max_states);
		if (!rg.complete())
			continue;
		auto regen = regeneration_clusters(rg);
		if (regen.empty())
			continue;
		g.cluster = regen[std::uniform_int_distribution<std::size_t>(0, regen.size() - 1)(rng)];
		out.push_back(std::move(g));
	}
	return out;
}

} // namespace

Generated random_block_net(std::mt19937 &rng, const std::string &name, const GeneratorLimits &limits)
{
	return build(rng, name, false, limits.max_depth);
}

std::vector<Generated> random_perpetual_systems(std::uint32_t seed, std::size_t count, const GeneratorLimits &limits)
{
	return collect(seed, count, false, limits, "GEN");
}

std::vector<Generated> random_perpetual_tsystems(std::uint32_t seed, std::size_t count, std::size_t max_nodes)
{
	GeneratorLimits limits;
	limits.max_nodes = max_nodes;
	return collect(seed, count, true, limits, "TGEN");
}

} // namespace lucent::testing
