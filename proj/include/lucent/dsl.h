#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "lucent/error.h"
#include "lucent/net.h"

namespace lucent {

// Syntax or semantic error in a net description, with a 1-based location.
class ParseError : public Error {
public:
	ParseError(std::size_t line, std::size_t column, const std::string &message);

	std::size_t line() const { return line_; }
	std::size_t column() const { return column_; }
	const std::string &message() const { return message_; }

private:
	std::size_t line_;
	std::size_t column_;
	std::string message_;
};

struct MarkedNet {
	Net net;
	Marking initial;
};

// Line-oriented format:
//
//   net <name>
//   place <id> [tokens=<n>]
//   trans <id>
//   arc <src> <dst>
//
// '#' starts a comment. Arcs may name nodes declared further down.
MarkedNet parse_net(std::string_view text);
MarkedNet load_net(const std::string &path);

// Canonical text: places, transitions and arcs in node order, tokens only
// where nonzero. parse_net(emit_net(...)) reproduces the same net.
std::string emit_net(const Net &net, const Marking &m);

// Lowercase hex SHA-256 of emit_net(net, m).
std::string net_hash(const Net &net, const Marking &m);

} // namespace lucent
