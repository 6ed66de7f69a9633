#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "revtm/machine.hpp"

namespace revtm {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using ParsedMachine = std::variant<Machine, QuintupleMachine>;

/// Parses the textual machine format (see docs/formats.md).
ParsedMachine parse_machine(std::string_view text);
ParsedMachine load_machine_file(const std::string& path);

/// Quadruple form of a parsed machine (quintuple files are normalized).
Machine as_quadruple(const ParsedMachine& parsed);

/// Canonical text rendering; parse_machine(format_machine(m)) reproduces m.
std::string format_machine(const Machine& m);
std::string format_machine(const QuintupleMachine& m);

/// Configuration snapshot text: bit-exact layout documented in docs/formats.md.
std::string format_configuration(const Machine& m, const Configuration& c);
Configuration parse_configuration(const Machine& m, std::string_view text);

}  // namespace revtm
