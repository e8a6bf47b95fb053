#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lucent {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Unknown node names, domain mismatches, malformed nets.
class NetError : public Error {
public:
	using Error::Error;
};

// A transition (or a step of a sequence) was fired while not enabled.
class NotEnabledError : public Error {
public:
	NotEnabledError(const std::string &what, std::size_t step)
		: Error(what), step_(step) {}

	std::size_t step() const { return step_; }

private:
	std::size_t step_;
};

// An operation was called outside its documented precondition.
class PreconditionError : public Error {
public:
	using Error::Error;
};

// An enumeration ran past its configured cap.
class CapExceeded : public Error {
public:
	using Error::Error;
};

// A structural or behavioural claim that must hold failed at runtime.
class CheckFailure : public Error {
public:
	using Error::Error;
};

} // namespace lucent
