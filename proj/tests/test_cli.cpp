#include <catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lucent/cli.h"
#include "support/corpus.h"

using lucent::testing::corpus_path;

namespace {

struct Run {
	int code;
	std::string out, err;
};

Run run(std::vector<std::string> args)
{
	args.insert(args.begin(), "lucent");
	std::vector<const char *> argv;
	for (const auto &a : args)
		argv.push_back(a.c_str());
	std::ostringstream out, err;
	int code = lucent::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
	return Run{code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path &p)
{
	std::ifstream in(p);
	std::ostringstream buf;
	buf << in.rdbuf();
	return buf.str();
}

std::filesystem::path scratch(const std::string &name)
{
	auto dir = std::filesystem::temp_directory_path() / "lucent_cli_test";
	std::filesystem::create_directories(dir);
	return dir / name;
}

} // namespace

TEST_CASE("analyze")
{
	auto r = run({"analyze", corpus_path("fig1")});
	CHECK(r.code == 0);
	CHECK(r.out.find("free-choice: yes") != std::string::npos);

	auto j = run({"analyze", corpus_path("choice1"), "--format", "json"});
	CHECK(j.code == 0);
	auto parsed = nlohmann::json::parse(j.out);
	CHECK(parsed["net"] == "CHOICE1");
	CHECK(parsed["perpetual"] == true);

	auto dot = run({"analyze", corpus_path("choice1"), "--format", "dot"});
	CHECK(dot.code == 0);
	CHECK(dot.out.starts_with("digraph \"CHOICE1\" {"));

	CHECK(run({"analyze", corpus_path("ring2x3"), "--cap", "2"}).code == 3);
}

TEST_CASE("lucency")
{
	CHECK(run({"lucency", corpus_path("fig1")}).code == 0);
	auto r = run({"lucency", corpus_path("ring2x3")});
	CHECK(r.code == 1);
	CHECK(r.out.find("verdict: not_lucent\n") != std::string::npos);
	CHECK(r.out.find("witness: (2,1) (1,2)") != std::string::npos);
}

TEST_CASE("exhaust")
{
	auto r = run({"exhaust", corpus_path("choice1"), "--cluster", "p0"});
	CHECK(r.code == 0);
	CHECK(r.out.find("valid: yes\n") != std::string::npos);

	auto dot_file = scratch("fig1_exh.dot");
	std::filesystem::remove(dot_file);
	auto j = run({"exhaust", corpus_path("fig1"), "--cluster", "start", "--format", "json", "--dot",
		      dot_file.string()});
	CHECK(j.code == 0);
	CHECK(nlohmann::json::parse(j.out)["valid"] == true);
	CHECK(slurp(dot_file).find("subgraph cluster_layer0") != std::string::npos);

	auto none = run({"exhaust", corpus_path("no_exhaustion"), "--cluster", "start"});
	CHECK(none.code == 1);
	CHECK(none.err.find("no adapted CP-exhaustion found") != std::string::npos);

	CHECK(run({"exhaust", corpus_path("iteration"), "--cluster", "end"}).code == 1);
	CHECK(run({"exhaust", corpus_path("iteration"), "--cluster", "end", "--allow-place-free-cp"}).code == 0);
}

TEST_CASE("prove and verify")
{
	auto cert_file = scratch("fig1.cert.json");
	std::filesystem::remove(cert_file);
	auto r = run({"prove", corpus_path("fig1"), "--cluster", "start", "--cert", cert_file.string()});
	CHECK(r.code == 0);
	auto cert = nlohmann::json::parse(slurp(cert_file));
	CHECK(cert["verdict"] == "lucent_proved");

	auto again = run({"prove", corpus_path("fig1"), "--cluster", "start", "--format", "json"});
	CHECK(again.code == 0);
	CHECK(nlohmann::json::parse(again.out) == cert);

	CHECK(run({"prove", corpus_path("ring2x3"), "--cluster", "p1"}).code == 1);
	CHECK(run({"prove", corpus_path("fig1"), "--cluster", "start", "--cap", "3"}).code == 3);

	CHECK(run({"verify", corpus_path("fig1")}).code == 0);
	auto bad = run({"verify", corpus_path("ring2x3")});
	CHECK(bad.code == 1);
	CHECK(bad.out.find("not perpetual") != std::string::npos);
	CHECK(run({"verify", corpus_path("fig1"), "--cap", "3"}).code == 3);
}

TEST_CASE("usage and input errors")
{
	CHECK(run({}).code == 2);
	CHECK(run({"frobnicate"}).code == 2);
	CHECK(run({"exhaust", corpus_path("choice1")}).code == 2);
	CHECK(run({"analyze", corpus_path("choice1"), "--format", "xml"}).code == 2);

	auto missing = run({"analyze", "/nonexistent/x.net"});
	CHECK(missing.code == 2);
	CHECK(missing.err.find("cannot open") != std::string::npos);

	auto unknown = run({"prove", corpus_path("choice1"), "--cluster", "zz"});
	CHECK(unknown.code == 2);
	CHECK(unknown.err.find("unknown node 'zz'") != std::string::npos);

	auto bad_net = scratch("bad.net");
	std::ofstream(bad_net) << "net B\nplace p\nfoo q\n";
	auto parse = run({"analyze", bad_net.string()});
	CHECK(parse.code == 2);
	CHECK(parse.err.find("line 3, column 1") != std::string::npos);

	auto help = run({"--help"});
	CHECK(help.code == 0);
	CHECK(help.out.find("prove") != std::string::npos);
}
