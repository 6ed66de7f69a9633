#include "revtm/machine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace revtm {

std::optional<Symbol> Alphabet::find(std::string_view name) const {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] == name) return static_cast<Symbol>(i);
  }
  return std::nullopt;
}

Rule Rule::read_write(StateId from, std::vector<Symbol> read, std::vector<Symbol> write,
                      StateId to) {
  Rule r;
  r.kind = RuleKind::ReadWrite;
  r.from = from;
  r.to = to;
  r.read = std::move(read);
  r.write = std::move(write);
  return r;
}

Rule Rule::shift_rule(StateId from, std::vector<int> shift, StateId to) {
  Rule r;
  r.kind = RuleKind::Shift;
  r.from = from;
  r.to = to;
  r.shift = std::move(shift);
  return r;
}

std::optional<StateId> Machine::find_state(std::string_view name) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == name) return static_cast<StateId>(i);
  }
  return std::nullopt;
}

StateId Machine::add_state(const std::string& name) {
  if (auto id = find_state(name)) return *id;
  states.push_back(name);
  return static_cast<StateId>(states.size() - 1);
}

void check_structure(const Machine& m) {
  if (m.tape_count() == 0) throw MachineError("machine '" + m.name + "' has no tapes");
  for (std::size_t t = 0; t < m.tape_count(); ++t) {
    if (m.alphabets[t].size() == 0) {
      throw MachineError("tape " + std::to_string(t + 1) + " has an empty alphabet");
    }
  }
  if (m.states.empty()) throw MachineError("machine '" + m.name + "' has no states");
  if (m.start >= m.states.size()) throw MachineError("start state out of range");
  if (m.output_tape >= m.tape_count()) throw MachineError("output tape out of range");
  std::set<StateId> halts;
  for (StateId h : m.halt_states) {
    if (h >= m.states.size()) throw MachineError("halt state out of range");
    halts.insert(h);
  }
  for (std::size_t i = 0; i < m.rules.size(); ++i) {
    const Rule& r = m.rules[i];
    auto fail = [&](const std::string& why) {
      throw MachineError("rule " + std::to_string(i) + ": " + why, i);
    };
    if (r.from >= m.states.size() || r.to >= m.states.size()) fail("unknown state");
    if (halts.count(r.from)) fail("source state '" + m.states[r.from] + "' is a halt state");
    if (r.kind == RuleKind::ReadWrite) {
      if (r.read.size() != m.tape_count() || r.write.size() != m.tape_count()) {
        fail("tuple arity does not match tape count");
      }
      for (std::size_t t = 0; t < m.tape_count(); ++t) {
        if (r.read[t] >= m.alphabets[t].size() || r.write[t] >= m.alphabets[t].size()) {
          fail("unknown symbol on tape " + std::to_string(t + 1));
        }
      }
    } else {
      if (r.shift.size() != m.tape_count()) fail("shift arity does not match tape count");
      for (int d : r.shift) {
        if (d < -1 || d > 1) fail("shift component outside {-1, 0, +1}");
      }
    }
  }
}

ValidationReport validate_machine(const Machine& m) {
  check_structure(m);
  ValidationReport report;

  std::map<StateId, std::vector<std::size_t>> by_state;
  for (std::size_t i = 0; i < m.rules.size(); ++i) by_state[m.rules[i].from].push_back(i);

  for (const auto& [state, idx] : by_state) {
    std::map<std::vector<Symbol>, std::vector<std::size_t>> by_read;
    std::vector<std::size_t> shifts;
    for (std::size_t i : idx) {
      if (m.rules[i].kind == RuleKind::Shift) {
        shifts.push_back(i);
      } else {
        by_read[m.rules[i].read].push_back(i);
      }
    }
    // A Shift rule's domain is every read, so it overlaps all rules from its state.
    for (std::size_t s : shifts) {
      for (std::size_t i : idx) {
        if (i == s) continue;
        bool other_shift = m.rules[i].kind == RuleKind::Shift;
        if (other_shift && i < s) continue;  // pair already reported
        report.conflicts.push_back({std::min(s, i), std::max(s, i)});
      }
    }
    for (const auto& [read, same] : by_read) {
      for (std::size_t a = 0; a < same.size(); ++a) {
        for (std::size_t b = a + 1; b < same.size(); ++b) {
          report.conflicts.push_back({same[a], same[b]});
        }
      }
    }
  }
  std::sort(report.conflicts.begin(), report.conflicts.end(),
            [](const RulePair& a, const RulePair& b) {
              return std::tie(a.first, a.second) < std::tie(b.first, b.second);
            });

  std::vector<bool> seen(m.states.size(), false);
  std::deque<StateId> queue{m.start};
  seen[m.start] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    auto it = by_state.find(s);
    if (it == by_state.end()) continue;
    for (std::size_t i : it->second) {
      StateId t = m.rules[i].to;
      if (!seen[t]) {
        seen[t] = true;
        queue.push_back(t);
      }
    }
  }
  for (StateId s = 0; s < m.states.size(); ++s) {
    if (!seen[s]) report.unreachable.push_back(s);
  }
  return report;
}

void Configuration::normalize() {
  for (auto& t : tapes) {
    while (!t.empty() && t.back() == kBlank) t.pop_back();
  }
}

bool Configuration::same_as(const Configuration& other) const {
  Configuration a = *this;
  Configuration b = other;
  a.normalize();
  b.normalize();
  return a.state == b.state && a.tapes == b.tapes && a.heads == b.heads && a.steps == b.steps;
}

Executable::Executable(Machine m) : machine_(std::move(m)) {
  check_structure(machine_);
  const std::size_t k = machine_.tape_count();
  strides_.resize(k);
  for (std::size_t t = k; t-- > 0;) {
    strides_[t] = tuple_space_;
    const std::uint64_t size = machine_.alphabets[t].size();
    if (tuple_space_ > (std::uint64_t{1} << 40) / size) {
      throw MachineError("machine '" + machine_.name + "' has too many symbol tuples to index");
    }
    tuple_space_ *= size;
  }
  if (machine_.states.size() > (std::uint64_t{1} << 62) / tuple_space_) {
    throw MachineError("machine '" + machine_.name + "' is too large to index");
  }
  shift_rule_.assign(machine_.states.size(), -1);
  rw_index_.reserve(machine_.rules.size());
  for (std::size_t i = 0; i < machine_.rules.size(); ++i) {
    const Rule& r = machine_.rules[i];
    if (r.kind == RuleKind::Shift) {
      if (shift_rule_[r.from] < 0) shift_rule_[r.from] = static_cast<std::int64_t>(i);
    } else {
      std::uint64_t key = r.from * tuple_space_ + tuple_code(r.read);
      rw_index_.emplace(key, static_cast<std::uint32_t>(i));  // first rule wins on overlap
    }
  }
}

std::uint64_t Executable::tuple_code(const std::vector<Symbol>& tuple) const {
  std::uint64_t code = 0;
  for (std::size_t t = 0; t < tuple.size(); ++t) code += tuple[t] * strides_[t];
  return code;
}

std::uint64_t Executable::tuple_code(const Configuration& c) const {
  std::uint64_t code = 0;
  for (std::size_t t = 0; t < strides_.size(); ++t) code += c.scanned(t) * strides_[t];
  return code;
}

std::optional<std::size_t> Executable::applicable(const Configuration& c) const {
  if (shift_rule_[c.state] >= 0) return static_cast<std::size_t>(shift_rule_[c.state]);
  auto it = rw_index_.find(c.state * tuple_space_ + tuple_code(c));
  if (it == rw_index_.end()) return std::nullopt;
  return it->second;
}

bool Executable::step(Configuration& c) const {
  auto idx = applicable(c);
  if (!idx) return false;
  const Rule& r = machine_.rules[*idx];
  if (r.kind == RuleKind::ReadWrite) {
    for (std::size_t t = 0; t < r.write.size(); ++t) {
      auto& tape = c.tapes[t];
      std::size_t h = c.heads[t];
      if (h >= tape.size()) {
        if (r.write[t] == kBlank) continue;
        tape.resize(h + 1, kBlank);
      }
      tape[h] = r.write[t];
    }
  } else {
    for (std::size_t t = 0; t < r.shift.size(); ++t) {
      if (r.shift[t] < 0) {
        if (c.heads[t] > 0) --c.heads[t];  // one-way tape: clamp at cell 0
      } else {
        c.heads[t] += static_cast<std::size_t>(r.shift[t]);
      }
    }
  }
  c.state = r.to;
  ++c.steps;
  return true;
}

Outcome Executable::run(Configuration& c, std::uint64_t budget) const {
  while (true) {
    // Halting is checked before the budget.
    if (!applicable(c)) return Outcome::Halted;
    if (c.steps >= budget) return Outcome::BudgetExceeded;
    step(c);
  }
}

Configuration initial_configuration(const Machine& m, const std::vector<Symbol>& input) {
  Configuration c;
  c.state = m.start;
  c.tapes.assign(m.tape_count(), {});
  c.heads.assign(m.tape_count(), 0);
  c.tapes[0] = input;
  c.normalize();
  return c;
}

std::vector<Symbol> encode_input(const Machine& m, std::string_view input, std::size_t tape) {
  std::vector<Symbol> out;
  out.reserve(input.size());
  for (char ch : input) {
    auto s = m.alphabets.at(tape).find(std::string(1, ch));
    if (!s || *s == kBlank) {
      throw MachineError("input symbol '" + std::string(1, ch) + "' is not a non-blank symbol of tape " +
                         std::to_string(tape + 1));
    }
    out.push_back(*s);
  }
  return out;
}

std::string tape_output(const Alphabet& alphabet, const std::vector<Symbol>& cells) {
  std::string out;
  for (Symbol s : cells) {
    if (s == kBlank) break;
    out += alphabet.name(s);
  }
  return out;
}

std::string tape_output(const Machine& m, const Configuration& c, std::size_t tape) {
  return tape_output(m.alphabets.at(tape), c.tapes.at(tape));
}

StepOutcome step(const Machine& m, const Configuration& c) {
  Executable exe(m);
  StepOutcome out;
  out.next = c;
  out.halted = !exe.step(out.next);
  return out;
}

RunResult run(const Executable& exe, Configuration start, std::uint64_t budget) {
  RunResult result;
  result.outcome = exe.run(start, budget);
  result.steps = start.steps;
  result.output = tape_output(exe.machine(), start, exe.machine().output_tape);
  start.normalize();
  result.final = std::move(start);
  return result;
}

RunResult run(const Machine& m, std::string_view input, std::uint64_t budget) {
  Executable exe(m);
  return run(exe, initial_configuration(m, encode_input(m, input)), budget);
}

Machine normalize_to_quadruples(const QuintupleMachine& m5) {
  Machine m;
  m.name = m5.name;
  m.alphabets = m5.alphabets;
  m.states = m5.states;
  m.start = m5.start;
  m.halt_states = m5.halt_states;
  m.output_tape = m5.output_tape;
  for (std::size_t i = 0; i < m5.rules.size(); ++i) {
    const QuintupleRule& q = m5.rules[i];
    std::string fresh = m5.states.at(q.from) + "~" + std::to_string(i);
    while (m.find_state(fresh)) fresh += "'";
    StateId mid = m.add_state(fresh);
    m.rules.push_back(Rule::read_write(q.from, q.read, q.write, mid));
    m.rules.push_back(Rule::shift_rule(mid, q.shift, q.to));
  }
  return m;
}

RunResult run_quintuple(const QuintupleMachine& m5, std::string_view input, std::uint64_t budget) {
  std::map<std::pair<StateId, std::vector<Symbol>>, std::size_t> index;
  for (std::size_t i = 0; i < m5.rules.size(); ++i) {
    index.emplace(std::make_pair(m5.rules[i].from, m5.rules[i].read), i);
  }
  Machine shape;
  shape.alphabets = m5.alphabets;
  Configuration c;
  c.state = m5.start;
  c.tapes.assign(m5.tape_count(), {});
  c.heads.assign(m5.tape_count(), 0);
  c.tapes[0] = encode_input(shape, input);
  RunResult result;
  while (true) {
    std::vector<Symbol> scanned(m5.tape_count());
    for (std::size_t t = 0; t < scanned.size(); ++t) scanned[t] = c.scanned(t);
    auto it = index.find({c.state, scanned});
    if (it == index.end()) {
      result.outcome = Outcome::Halted;
      break;
    }
    if (c.steps >= budget) {
      result.outcome = Outcome::BudgetExceeded;
      break;
    }
    const QuintupleRule& r = m5.rules[it->second];
    for (std::size_t t = 0; t < scanned.size(); ++t) {
      auto& tape = c.tapes[t];
      if (c.heads[t] >= tape.size()) tape.resize(c.heads[t] + 1, kBlank);
      tape[c.heads[t]] = r.write[t];
      if (r.shift[t] < 0) {
        if (c.heads[t] > 0) --c.heads[t];
      } else {
        c.heads[t] += static_cast<std::size_t>(r.shift[t]);
      }
    }
    c.state = r.to;
    ++c.steps;
  }
  result.steps = c.steps;
  result.output = tape_output(m5.alphabets.at(m5.output_tape), c.tapes.at(m5.output_tape));
  c.normalize();
  result.final = std::move(c);
  return result;
}

}  // namespace revtm
