#include "lucent/cli.h"

#include <fstream>
#include <ostream>

#include "CLI11.hpp"

#include "lucent/cp_exhaust.h"
#include "lucent/dsl.h"
#include "lucent/report.h"
#include "lucent/verifier.h"

namespace lucent {

namespace {

struct Config {
	std::size_t state_cap = default_state_cap;
	std::size_t enum_cap = default_enum_cap;
	bool allow_place_free = false;
	std::string format = "text";
	std::string file;
	std::string cluster;
	std::string dot_out;
	std::string cert_out;

	VerifierOptions verifier() const { return VerifierOptions{state_cap, enum_cap, allow_place_free}; }
};

void add_common(CLI::App *cmd, Config &cfg, bool dot_allowed)
{
	cmd->add_option("file", cfg.file, "net description")->required();
	cmd->add_option("--cap", cfg.state_cap, "state cap for reachability")
		->check(CLI::PositiveNumber)
		->capture_default_str();
	cmd->add_option("--enum-cap", cfg.enum_cap, "cap for path, circuit and subnet enumerations")
		->check(CLI::PositiveNumber)
		->capture_default_str();
	std::vector<std::string> formats{"text", "json"};
	if (dot_allowed)
		formats.push_back("dot");
	cmd->add_option("--format", cfg.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
	cmd->add_flag("--allow-place-free-cp", cfg.allow_place_free, "admit single-transition CP-subnets");
}

void write_file(const std::string &path, const std::string &text)
{
	std::ofstream f(path, std::ios::binary);
	if (!f)
		throw Error("cannot write '" + path + "'");
	f << text;
}

std::string dump(const Json &j)
{
	return j.dump(2) + "\n";
}

Cluster named_cluster(const Net &net, const std::string &node)
{
	return cluster_of(net, net.at(node));
}

int cmd_analyze(const Config &cfg, std::ostream &out)
{
	auto [net, m0] = load_net(cfg.file);
	if (cfg.format == "dot") {
		out << to_dot(net, m0);
		return exit_ok;
	}
	Analysis a = analyze(net, m0, AnalysisOptions{cfg.state_cap, cfg.enum_cap});
	out << (cfg.format == "json" ? dump(to_json(net, m0, a)) : to_text(net, m0, a));
	return a.complete ? exit_ok : exit_indeterminate;
}

int cmd_exhaust(const Config &cfg, std::ostream &out, std::ostream &err)
{
	auto [net, m0] = load_net(cfg.file);
	Cluster cl = named_cluster(net, cfg.cluster);
	CpExhaustion exh;
	try {
		exh = cp_exhaustion(net, cl, cfg.verifier().cp());
	} catch (const CheckFailure &e) {
		err << "exhaustion failed: " << e.what() << "\n";
		return exit_violation;
	}
	std::vector<NodeSet> layers;
	for (const auto &l : exh.layers)
		layers.push_back(l.nodes);
	auto problems = validate_exhaustion(net, layers, cl, cfg.verifier().cp());

	if (!cfg.dot_out.empty())
		write_file(cfg.dot_out, to_dot(net, m0, exh));
	if (cfg.format == "dot") {
		out << to_dot(net, m0, exh);
	} else if (cfg.format == "json") {
		Json j;
		j["net"] = net.name();
		j["cluster"] = names_json(net, cl.nodes);
		j["exhaustion"] = to_json(net, exh);
		j["valid"] = problems.empty();
		j["problems"] = problems;
		out << dump(j);
	} else {
		out << "net: " << net.name() << "\n";
		out << "cluster: " << names_string(net, cl.nodes.nodes()) << "\n";
		for (std::size_t i = 0; i < exh.layers.size(); ++i) {
			const auto &l = exh.layers[i];
			out << "layer " << i << ": " << names_string(net, l.nodes.nodes()) << " way-in "
			    << net.node_name(l.way_in) << ", way-outs " << names_string(net, l.way_outs) << "\n";
		}
		out << "final T-net: " << names_string(net, exh.final_tnet.nodes()) << "\n";
		out << "way-in places: " << names_string(net, exh.way_in_places) << "\n";
		out << "critical transitions: " << names_string(net, exh.critical_transitions) << "\n";
		out << "valid: " << (problems.empty() ? "yes" : "no") << "\n";
		for (const auto &p : problems)
			out << "problem: " << p << "\n";
	}
	return problems.empty() ? exit_ok : exit_violation;
}

int cmd_lucency(const Config &cfg, std::ostream &out)
{
	auto [net, m0] = load_net(cfg.file);
	auto rg = explore(net, m0, cfg.state_cap);
	auto report = lucency_bruteforce(rg);
	if (cfg.format == "json") {
		out << dump(to_json(rg, report));
	} else {
		out << "net: " << net.name() << "\n";
		out << "states: " << rg.size() << (rg.complete() ? "" : " (partial)") << "\n";
		out << "verdict: " << to_string(report.verdict) << "\n";
		for (auto [i, j] : report.witnesses)
			out << "witness: " << tuple_string(rg.states()[i]) << " " << tuple_string(rg.states()[j])
			    << " states " << i << ", " << j << " enabled " << names_string(net, rg.enabled_at(i)) << "\n";
		for (const auto &w : rg.warnings())
			out << "warning: " << w << "\n";
	}
	switch (report.verdict) {
	case LucencyVerdict::lucent:
		return exit_ok;
	case LucencyVerdict::not_lucent:
		return exit_violation;
	case LucencyVerdict::indeterminate:
		break;
	}
	return exit_indeterminate;
}

int outcome_code(Outcome o)
{
	switch (o) {
	case Outcome::lucent_proved:
		return exit_ok;
	case Outcome::indeterminate:
		return exit_indeterminate;
	case Outcome::failed:
		break;
	}
	return exit_violation;
}

int cmd_prove(const Config &cfg, std::ostream &out)
{
	auto [net, m0] = load_net(cfg.file);
	Certificate cert = prove_lucency(net, m0, named_cluster(net, cfg.cluster), cfg.verifier());
	if (!cfg.cert_out.empty())
		write_file(cfg.cert_out, dump(to_json(cert)));
	out << (cfg.format == "json" ? dump(to_json(cert)) : to_text(cert));
	return outcome_code(cert.outcome);
}

int cmd_verify(const Config &cfg, std::ostream &out)
{
	auto [net, m0] = load_net(cfg.file);
	auto rg = explore(net, m0, cfg.state_cap);
	if (!rg.complete()) {
		out << "indeterminate: state cap " << cfg.state_cap << " hit\n";
		return exit_indeterminate;
	}
	auto regen = regeneration_clusters(rg);
	Json report;
	report["net"] = net.name();
	report["perpetual"] = !regen.empty();
	report["runs"] = Json::array();
	int code = regen.empty() ? exit_violation : exit_ok;
	if (cfg.format != "json") {
		out << "net: " << net.name() << "\n";
		if (regen.empty())
			out << "not perpetual: no regeneration cluster, lemma suites do not apply\n";
	}
	for (const auto &cl : regen) {
		Certificate cert = prove_lucency(net, m0, cl, cfg.verifier());
		auto diagnostics = concluding_diagnostics(rg, cl, cfg.verifier());
		if (cert.outcome != Outcome::lucent_proved)
			code = std::max(code, outcome_code(cert.outcome));
		if (cfg.format == "json") {
			Json run;
			run["certificate"] = to_json(cert);
			run["diagnostics"] = Json::array();
			for (const auto &d : diagnostics)
				run["diagnostics"].push_back(to_json(d));
			report["runs"].push_back(std::move(run));
		} else {
			out << "cluster " << names_string(net, cl.nodes.nodes()) << ": " << cert.verdict() << " ("
			    << cert.checks.size() << " checks)\n";
			for (const auto &r : cert.checks)
				if (!r.passed())
					out << "  failed " << r.id << ": " << r.witness.value("error", "") << "\n";
			for (const auto &d : diagnostics)
				out << "  diagnostic " << d.id << ": " << (d.passed() ? "holds" : "does not hold") << "\n";
		}
	}
	if (cfg.format == "json")
		out << dump(report);
	return code;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
	CLI::App app{"Free-choice Petri net analysis: exhaustion, shutdown and lucency proofs", "lucent"};
	app.require_subcommand(1);
	Config cfg;

	auto *analyze_cmd = app.add_subcommand("analyze", "structural and behavioural report");
	add_common(analyze_cmd, cfg, true);
	auto *exhaust_cmd = app.add_subcommand("exhaust", "compute and validate a cluster-adapted CP-exhaustion");
	add_common(exhaust_cmd, cfg, true);
	exhaust_cmd->add_option("--cluster", cfg.cluster, "any node of the cluster")->required();
	exhaust_cmd->add_option("--dot", cfg.dot_out, "also write the exhaustion as DOT");
	auto *lucency_cmd = app.add_subcommand("lucency", "decide lucency by exhaustive search");
	add_common(lucency_cmd, cfg, false);
	auto *prove_cmd = app.add_subcommand("prove", "replay the lucency proof and emit a certificate");
	add_common(prove_cmd, cfg, false);
	prove_cmd->add_option("--cluster", cfg.cluster, "any node of the regeneration cluster")->required();
	prove_cmd->add_option("--cert", cfg.cert_out, "write the certificate as JSON");
	auto *verify_cmd = app.add_subcommand("verify", "run every check suite for each regeneration cluster");
	add_common(verify_cmd, cfg, false);

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		int code = app.exit(e, out, err);
		return code == 0 ? exit_ok : exit_usage;
	}

	try {
		if (analyze_cmd->parsed())
			return cmd_analyze(cfg, out);
		if (exhaust_cmd->parsed())
			return cmd_exhaust(cfg, out, err);
		if (lucency_cmd->parsed())
			return cmd_lucency(cfg, out);
		if (prove_cmd->parsed())
			return cmd_prove(cfg, out);
		return cmd_verify(cfg, out);
	} catch (const CapExceeded &e) {
		err << "indeterminate: " << e.what() << "\n";
		return exit_indeterminate;
	} catch (const PreconditionError &e) {
		std::string what = e.what();
		err << "error: " << what << "\n";
		return what.rfind("indeterminate", 0) == 0 ? exit_indeterminate : exit_usage;
	} catch (const Error &e) {
		err << "error: " << e.what() << "\n";
		return exit_usage;
	}
}

} // namespace lucent
