#include "lucent/report.h"

#include <sstream>

namespace lucent {

Json names_json(const Net &net, const std::vector<Node> &nodes)
{
	Json out = Json::array();
	for (Node n : nodes)
		out.push_back(net.node_name(n));
	return out;
}

Json names_json(const Net &net, const NodeSet &nodes)
{
	return names_json(net, nodes.nodes());
}

Json to_json(const Net &net, const Marking &m)
{
	Json out = Json::object();
	for (Node p : net.places())
		if (m[p] > 0)
			out[net.node_name(p)] = m[p];
	return out;
}

Json to_json(const Net &net, const Path &path)
{
	return names_json(net, path.nodes);
}

Json to_json(const Net &net, const CpExhaustion &exh)
{
	Json layers = Json::array();
	for (const auto &layer : exh.layers) {
		Json l;
		l["nodes"] = names_json(net, layer.nodes);
		l["way_in"] = net.node_name(layer.way_in);
		l["way_outs"] = names_json(net, layer.way_outs);
		layers.push_back(std::move(l));
	}
	Json out;
	out["layers"] = std::move(layers);
	out["final_tnet"] = names_json(net, exh.final_tnet);
	out["way_in_places"] = names_json(net, exh.way_in_places);
	out["critical_transitions"] = names_json(net, exh.critical_transitions);
	return out;
}

Json to_json(const ReachabilityGraph &rg)
{
	const Net &net = rg.net();
	Json states = Json::array();
	for (std::size_t s = 0; s < rg.size(); ++s) {
		Json st;
		st["id"] = s;
		st["marking"] = to_json(net, rg.states()[s]);
		st["enabled"] = names_json(net, rg.enabled_at(s));
		states.push_back(std::move(st));
	}
	Json edges = Json::array();
	for (const auto &e : rg.edges())
		edges.push_back(Json{{"from", e.from}, {"transition", net.node_name(e.transition)}, {"to", e.to}});
	Json out;
	out["complete"] = rg.complete();
	out["warnings"] = rg.warnings();
	out["states"] = std::move(states);
	out["edges"] = std::move(edges);
	return out;
}

Json to_json(const ReachabilityGraph &rg, const LucencyReport &report)
{
	const Net &net = rg.net();
	Json out;
	out["net"] = net.name();
	out["verdict"] = to_string(report.verdict);
	out["states"] = rg.size();
	out["complete"] = rg.complete();
	out["classes"] = report.classes.size();
	Json witnesses = Json::array();
	for (auto [i, j] : report.witnesses) {
		Json w;
		w["states"] = {i, j};
		w["markings"] = {to_json(net, rg.states()[i]), to_json(net, rg.states()[j])};
		w["enabled"] = names_json(net, rg.enabled_at(i));
		witnesses.push_back(std::move(w));
	}
	out["witnesses"] = std::move(witnesses);
	out["warnings"] = rg.warnings();
	return out;
}

std::string tuple_string(const Marking &m)
{
	std::string out = "(";
	for (std::size_t i = 0; i < m.size(); ++i) {
		if (i)
			out += ",";
		out += std::to_string(m.counts()[i]);
	}
	return out + ")";
}

std::string names_string(const Net &net, const std::vector<Node> &nodes)
{
	std::string out = "{";
	for (std::size_t i = 0; i < nodes.size(); ++i) {
		if (i)
			out += ", ";
		out += net.node_name(nodes[i]);
	}
	return out + "}";
}

Analysis analyze(const Net &net, const Marking &m0, const AnalysisOptions &options)
{
	Analysis a;
	a.places = net.place_count();
	a.transitions = net.transition_count();
	a.arcs = net.arcs().size();
	a.weakly_connected = is_weakly_connected(net);
	a.free_choice = is_free_choice(net);
	a.t_net = is_t_net(net);
	a.strongly_connected = is_strongly_connected(net);
	a.clusters = clusters(net);

	auto rg = explore(net, m0, options.state_cap);
	a.states = rg.size();
	a.complete = rg.complete();
	a.warnings = rg.warnings();
	if (rg.complete()) {
		a.live = is_live(rg);
		a.bound = bound(rg);
		a.safe = *a.bound <= 1;
		a.regeneration_clusters = regeneration_clusters(rg);
	}
	return a;
}

namespace {

Json optional_json(const auto &value)
{
	return value ? Json(*value) : Json(nullptr);
}

std::string yes_no(bool b)
{
	return b ? "yes" : "no";
}

std::string optional_text(const std::optional<bool> &b)
{
	return b ? yes_no(*b) : "unknown";
}

} // namespace

Json to_json(const Net &net, const Marking &m0, const Analysis &a)
{
	Json out;
	out["net"] = net.name();
	out["places"] = a.places;
	out["transitions"] = a.transitions;
	out["arcs"] = a.arcs;
	out["initial"] = to_json(net, m0);
	out["weakly_connected"] = a.weakly_connected;
	out["free_choice"] = a.free_choice;
	out["t_net"] = a.t_net;
	out["strongly_connected"] = a.strongly_connected;
	Json cls = Json::array();
	for (const auto &cl : a.clusters)
		cls.push_back(names_json(net, cl.nodes));
	out["clusters"] = std::move(cls);
	out["states"] = a.states;
	out["complete"] = a.complete;
	out["live"] = optional_json(a.live);
	out["bound"] = optional_json(a.bound);
	out["safe"] = optional_json(a.safe);
	Json regen = Json::array();
	for (const auto &cl : a.regeneration_clusters)
		regen.push_back(names_json(net, cl.nodes));
	out["regeneration_clusters"] = std::move(regen);
	out["perpetual"] = a.complete ? Json(!a.regeneration_clusters.empty()) : Json(nullptr);
	out["warnings"] = a.warnings;
	return out;
}

std::string to_text(const Net &net, const Marking &m0, const Analysis &a)
{
	std::ostringstream out;
	out << "net: " << net.name() << "\n";
	out << "places: " << a.places << ", transitions: " << a.transitions << ", arcs: " << a.arcs << "\n";
	out << "initial marking: " << to_string(net, m0) << "\n";
	out << "weakly connected: " << yes_no(a.weakly_connected) << "\n";
	out << "strongly connected: " << yes_no(a.strongly_connected) << "\n";
	out << "free-choice: " << yes_no(a.free_choice) << "\n";
	out << "T-net: " << yes_no(a.t_net) << "\n";
	out << "clusters:";
	for (const auto &cl : a.clusters)
		out << " " << names_string(net, cl.nodes.nodes());
	out << "\n";
	out << "states: " << a.states << (a.complete ? "" : " (partial)") << "\n";
	out << "live: " << optional_text(a.live) << "\n";
	out << "bounded: " << (a.bound ? "yes (" + std::to_string(*a.bound) + ")" : std::string("unknown")) << "\n";
	out << "safe: " << optional_text(a.safe) << "\n";
	out << "regeneration clusters:";
	if (!a.complete)
		out << " unknown";
	else if (a.regeneration_clusters.empty())
		out << " none";
	for (const auto &cl : a.regeneration_clusters)
		out << " " << names_string(net, cl.nodes.nodes());
	out << "\n";
	out << "perpetual: " << (a.complete ? yes_no(!a.regeneration_clusters.empty()) : "unknown") << "\n";
	for (const auto &w : a.warnings)
		out << "warning: " << w << "\n";
	return out.str();
}

namespace {

std::string quoted(const std::string &s)
{
	std::string out = "\"";
	for (char c : s) {
		if (c == '"' || c == '\\')
			out += '\\';
		out += c;
	}
	return out + "\"";
}

void emit_node(std::ostringstream &out, const Net &net, const Marking &m, Node n, const std::string &indent)
{
	const std::string &name = net.node_name(n);
	if (net.is_place(n)) {
		std::string label = m[n] > 0 ? name + "\\n" + std::to_string(m[n]) : name;
		out << indent << quoted(name) << " [shape=circle, label=\"" << label << "\"];\n";
	} else {
		out << indent << quoted(name) << " [shape=box];\n";
	}
}

void emit_arcs(std::ostringstream &out, const Net &net)
{
	for (const auto &[a, b] : net.arcs())
		out << "  " << quoted(net.node_name(a)) << " -> " << quoted(net.node_name(b)) << ";\n";
}

} // namespace

std::string to_dot(const Net &net, const Marking &m)
{
	check_domain(net, m);
	std::ostringstream out;
	out << "digraph " << quoted(net.name()) << " {\n";
	for (Node n : net.nodes())
		emit_node(out, net, m, n, "  ");
	emit_arcs(out, net);
	out << "}\n";
	return out.str();
}

std::string to_dot(const Net &net, const Marking &m, const CpExhaustion &exh)
{
	check_domain(net, m);
	static constexpr const char *colors[] = {"lightblue", "lightsalmon", "palegreen", "khaki", "plum", "lightcyan"};
	std::ostringstream out;
	out << "digraph " << quoted(net.name()) << " {\n";
	for (std::size_t i = 0; i < exh.layers.size(); ++i) {
		out << "  subgraph cluster_layer" << i << " {\n";
		out << "    label=\"layer " << i << "\";\n    style=filled;\n    color="
		    << colors[i % std::size(colors)] << ";\n";
		for (Node n : exh.layers[i].nodes.nodes())
			emit_node(out, net, m, n, "    ");
		out << "  }\n";
	}
	out << "  subgraph cluster_final {\n    label=\"final T-net\";\n    style=dashed;\n";
	for (Node n : exh.final_tnet.nodes())
		emit_node(out, net, m, n, "    ");
	out << "  }\n";
	emit_arcs(out, net);
	out << "}\n";
	return out.str();
}

} // namespace lucent
