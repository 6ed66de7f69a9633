#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace revtm {

/// Index into a tape alphabet. Symbol 0 is always the blank.
using Symbol = std::uint16_t;
using StateId = std::uint32_t;

inline constexpr Symbol kBlank = 0;

struct Alphabet {
  std::vector<std::string> symbols;  // symbols[0] is the blank

  std::optional<Symbol> find(std::string_view name) const;
  std::size_t size() const { return symbols.size(); }
  const std::string& name(Symbol s) const { return symbols.at(s); }
};

enum class RuleKind { ReadWrite, Shift };

/// Quadruple rule. A ReadWrite rule rewrites the scanned cell of every tape;
/// a Shift rule moves every head by -1, 0 or +1 without reading.
struct Rule {
  RuleKind kind = RuleKind::ReadWrite;
  StateId from = 0;
  StateId to = 0;
  std::vector<Symbol> read;   // ReadWrite only
  std::vector<Symbol> write;  // ReadWrite only
  std::vector<int> shift;     // Shift only

  static Rule read_write(StateId from, std::vector<Symbol> read, std::vector<Symbol> write,
                         StateId to);
  static Rule shift_rule(StateId from, std::vector<int> shift, StateId to);

  bool operator==(const Rule&) const = default;
};

struct Machine {
  std::string name;
  std::vector<Alphabet> alphabets;  // one per tape
  std::vector<std::string> states;
  StateId start = 0;
  std::vector<StateId> halt_states;
  std::vector<Rule> rules;
  std::size_t output_tape = 0;

  std::size_t tape_count() const { return alphabets.size(); }
  std::optional<StateId> find_state(std::string_view name) const;
  /// Adds a state by name, returning the existing id when present.
  StateId add_state(const std::string& name);
};

/// Quintuple rule (q, a -> b, shift, q'), only used as a parser/normalizer input.
struct QuintupleRule {
  StateId from = 0;
  StateId to = 0;
  std::vector<Symbol> read;
  std::vector<Symbol> write;
  std::vector<int> shift;
};

struct QuintupleMachine {
  std::string name;
  std::vector<Alphabet> alphabets;
  std::vector<std::string> states;
  StateId start = 0;
  std::vector<StateId> halt_states;
  std::vector<QuintupleRule> rules;
  std::size_t output_tape = 0;

  std::size_t tape_count() const { return alphabets.size(); }
};

/// Structural error (unknown symbol or state, bad tuple arity, ...).
class MachineError : public std::runtime_error {
 public:
  MachineError(const std::string& what, std::optional<std::size_t> rule = std::nullopt)
      : std::runtime_error(what), rule_(rule) {}
  std::optional<std::size_t> rule() const { return rule_; }

 private:
  std::optional<std::size_t> rule_;
};

struct RulePair {
  std::size_t first;
  std::size_t second;
  bool operator==(const RulePair&) const = default;
};

struct ValidationReport {
  std::vector<RulePair> conflicts;  // rules with overlapping domains
  std::vector<StateId> unreachable;

  bool deterministic() const { return conflicts.empty(); }
};

/// Throws MachineError on malformed machines; otherwise reports domain overlaps.
ValidationReport validate_machine(const Machine& m);

/// Structural checks only (the part of validate_machine that throws).
void check_structure(const Machine& m);

struct Configuration {
  StateId state = 0;
  std::vector<std::vector<Symbol>> tapes;
  std::vector<std::size_t> heads;
  std::uint64_t steps = 0;

  Symbol scanned(std::size_t tape) const {
    const auto& t = tapes[tape];
    return heads[tape] < t.size() ? t[heads[tape]] : kBlank;
  }
  /// Drops trailing blanks so equal configurations compare equal.
  void normalize();
  bool same_as(const Configuration& other) const;
};

enum class Outcome { Halted, BudgetExceeded };

struct RunResult {
  Outcome outcome = Outcome::Halted;
  Configuration final;
  std::uint64_t steps = 0;
  std::string output;
};

/// Lookup structure for fast stepping. Holds its own copy of the machine.
class Executable {
 public:
  explicit Executable(Machine m);

  const Machine& machine() const { return machine_; }
  /// Index of the rule applicable in `c`, if any.
  std::optional<std::size_t> applicable(const Configuration& c) const;
  /// Applies one rule in place. Returns false (and leaves `c` untouched) on halt.
  bool step(Configuration& c) const;
  /// Steps until halt or until c.steps reaches `budget`.
  Outcome run(Configuration& c, std::uint64_t budget) const;

 private:
  std::uint64_t tuple_code(const Configuration& c) const;
  std::uint64_t tuple_code(const std::vector<Symbol>& tuple) const;

  Machine machine_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t tuple_space_ = 1;
  std::vector<std::int64_t> shift_rule_;  // per state, -1 if none
  std::unordered_map<std::uint64_t, std::uint32_t> rw_index_;
};

Configuration initial_configuration(const Machine& m, const std::vector<Symbol>& input);
/// Converts a string of single-character symbol names into tape-1 symbols.
std::vector<Symbol> encode_input(const Machine& m, std::string_view input, std::size_t tape = 0);
/// Maximal blank-free prefix of a tape, symbol names concatenated.
std::string tape_output(const Machine& m, const Configuration& c, std::size_t tape);
std::string tape_output(const Alphabet& alphabet, const std::vector<Symbol>& cells);

struct StepOutcome {
  bool halted = false;
  Configuration next;  // unchanged input when halted
};

StepOutcome step(const Machine& m, const Configuration& c);
RunResult run(const Machine& m, std::string_view input, std::uint64_t budget);
RunResult run(const Executable& exe, Configuration start, std::uint64_t budget);

/// Splits every quintuple into a ReadWrite rule into a fresh state plus a Shift rule.
Machine normalize_to_quadruples(const QuintupleMachine& m5);

/// Direct quintuple interpreter, used to check normalization.
RunResult run_quintuple(const QuintupleMachine& m5, std::string_view input, std::uint64_t budget);

}  // namespace revtm
