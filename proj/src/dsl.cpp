#include "lucent/dsl.h"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include <openssl/sha.h>

namespace lucent {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string &message)
	: Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
	  line_(line), column_(column), message_(message)
{
}

namespace {

struct Token {
	std::string_view text;
	std::size_t column;
};

std::vector<Token> tokenize(std::string_view line)
{
	if (auto hash = line.find('#'); hash != std::string_view::npos)
		line = line.substr(0, hash);
	std::vector<Token> out;
	std::size_t i = 0;
	while (i < line.size()) {
		while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
			++i;
		std::size_t start = i;
		while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
			++i;
		if (i > start)
			out.push_back(Token{line.substr(start, i - start), start + 1});
	}
	return out;
}

struct Declared {
	NodeKind kind;
	std::size_t line;
};

struct PendingArc {
	Token src, dst;
	std::size_t line;
};

} // namespace

MarkedNet parse_net(std::string_view text)
{
	NetSpec spec;
	bool named = false;
	std::map<std::string, Declared, std::less<>> declared;
	std::map<std::string, std::uint32_t> tokens;
	std::vector<PendingArc> arcs;

	std::size_t line_no = 0;
	std::size_t pos = 0;
	while (pos <= text.size()) {
		std::size_t end = text.find('\n', pos);
		if (end == std::string_view::npos)
			end = text.size();
		std::string_view line = text.substr(pos, end - pos);
		pos = end + 1;
		++line_no;

		auto toks = tokenize(line);
		if (toks.empty())
			continue;
		const Token &kw = toks[0];
		auto expect = [&](std::size_t lo, std::size_t hi) {
			if (toks.size() < lo)
				throw ParseError(line_no, line.size() + 1,
						 "'" + std::string(kw.text) + "' expects more arguments");
			if (toks.size() > hi)
				throw ParseError(line_no, toks[hi].column,
						 "unexpected '" + std::string(toks[hi].text) + "'");
		};
		auto declare = [&](const Token &id, NodeKind kind) {
			std::string name(id.text);
			if (auto it = declared.find(name); it != declared.end())
				throw ParseError(line_no, id.column,
						 "duplicate id '" + name + "' (first declared on line " +
							 std::to_string(it->second.line) + ")");
			declared.emplace(name, Declared{kind, line_no});
			(kind == NodeKind::place ? spec.places : spec.transitions).push_back(std::move(name));
		};

		if (kw.text == "net") {
			expect(2, 2);
			if (named)
				throw ParseError(line_no, kw.column, "duplicate 'net' declaration");
			named = true;
			spec.name = std::string(toks[1].text);
		} else if (kw.text == "place") {
			expect(2, 3);
			declare(toks[1], NodeKind::place);
			if (toks.size() == 3) {
				std::string_view opt = toks[2].text;
				constexpr std::string_view prefix = "tokens=";
				if (opt.substr(0, prefix.size()) != prefix)
					throw ParseError(line_no, toks[2].column, "expected tokens=<n>, got '" + std::string(opt) + "'");
				std::string_view digits = opt.substr(prefix.size());
				std::uint32_t n = 0;
				auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
				if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size())
					throw ParseError(line_no, toks[2].column + prefix.size(),
							 "invalid token count '" + std::string(digits) + "'");
				tokens[std::string(toks[1].text)] = n;
			}
		} else if (kw.text == "trans") {
			expect(2, 2);
			declare(toks[1], NodeKind::transition);
		} else if (kw.text == "arc") {
			expect(3, 3);
			arcs.push_back(PendingArc{toks[1], toks[2], line_no});
		} else {
			throw ParseError(line_no, kw.column, "unknown declaration '" + std::string(kw.text) + "'");
		}
	}

	if (spec.places.empty() && spec.transitions.empty())
		throw ParseError(line_no, 1, "empty net");

	std::set<std::pair<std::string_view, std::string_view>> seen_arcs;
	for (const auto &arc : arcs) {
		auto src = declared.find(arc.src.text);
		if (src == declared.end())
			throw ParseError(arc.line, arc.src.column, "unknown arc endpoint '" + std::string(arc.src.text) + "'");
		auto dst = declared.find(arc.dst.text);
		if (dst == declared.end())
			throw ParseError(arc.line, arc.dst.column, "unknown arc endpoint '" + std::string(arc.dst.text) + "'");
		if (src->second.kind == dst->second.kind)
			throw ParseError(arc.line, arc.src.column,
					 "arc '" + std::string(arc.src.text) + "' -> '" + std::string(arc.dst.text) +
						 "' joins two nodes of the same kind");
		if (!seen_arcs.emplace(arc.src.text, arc.dst.text).second)
			throw ParseError(arc.line, arc.src.column,
					 "duplicate arc '" + std::string(arc.src.text) + "' -> '" + std::string(arc.dst.text) + "'");
		spec.arcs.emplace_back(std::string(arc.src.text), std::string(arc.dst.text));
	}
	if (!named)
		spec.name = "unnamed";

	MarkedNet out{Net::from_spec(spec), Marking{}};
	out.initial = Marking(out.net.place_count());
	for (const auto &[name, n] : tokens)
		out.initial.set(out.net.at(name), n);
	return out;
}

MarkedNet load_net(const std::string &path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw Error("cannot open '" + path + "'");
	std::ostringstream buf;
	buf << in.rdbuf();
	return parse_net(buf.str());
}

std::string emit_net(const Net &net, const Marking &m)
{
	check_domain(net, m);
	std::string out = "net " + net.name() + "\n";
	for (Node p : net.places()) {
		out += "place " + net.node_name(p);
		if (m[p] > 0)
			out += " tokens=" + std::to_string(m[p]);
		out += "\n";
	}
	for (Node t : net.transitions())
		out += "trans " + net.node_name(t) + "\n";
	for (const auto &[a, b] : net.arcs())
		out += "arc " + net.node_name(a) + " " + net.node_name(b) + "\n";
	return out;
}

std::string net_hash(const Net &net, const Marking &m)
{
	std::string text = emit_net(net, m);
	unsigned char digest[SHA256_DIGEST_LENGTH];
	SHA256(reinterpret_cast<const unsigned char *>(text.data()), text.size(), digest);
	static constexpr char hex[] = "0123456789abcdef";
	std::string out;
	for (unsigned char c : digest) {
		out += hex[c >> 4];
		out += hex[c & 0xf];
	}
	return out;
}

} // namespace lucent
