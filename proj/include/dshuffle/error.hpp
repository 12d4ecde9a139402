#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dshuffle {

// Every error raised by the library derives from Error so callers can catch
// the whole family at once. The subclasses carry the error category.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Non-finite samples, malformed spectra.
class InvalidInputError : public Error {
public:
	using Error::Error;
};

// Lengths or shapes that do not fit together.
class SizeError : public Error {
public:
	using Error::Error;
};

// Out-of-range hyper-parameters (k = 0, rates outside (0,1), empty band, ...).
class ParameterError : public Error {
public:
	using Error::Error;
};

// Malformed text input. Carries the 1-based line number.
class ParseError : public Error {
public:
	ParseError(const std::string& message, std::size_t line)
	    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

	std::size_t line() const noexcept { return line_; }

private:
	std::size_t line_;
};

// Well-formed input whose content is unusable (missing cells, constant variates).
class DataError : public Error {
public:
	using Error::Error;
};

// Linear-algebra failures such as a singular normal-equation system.
class NumericError : public Error {
public:
	using Error::Error;
};

class IoError : public Error {
public:
	using Error::Error;
};

} // namespace dshuffle
