#include "revtm/machine_format.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace revtm {
namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::size_t parse_count(std::size_t line, const std::string& tok, const char* what) {
  try {
    std::size_t pos = 0;
    unsigned long v = std::stoul(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, std::string("expected ") + what + ", got '" + tok + "'");
  }
}

int parse_shift(std::size_t line, const std::string& tok) {
  if (tok == "-1") return -1;
  if (tok == "0") return 0;
  if (tok == "+1") return 1;
  throw ParseError(line, "shift must be -1, 0 or +1, got '" + tok + "'");
}

struct Header {
  std::string name = "machine";
  std::size_t tapes = 0;
  std::vector<Alphabet> alphabets;
  std::vector<std::string> states;
  std::string start;
  std::vector<std::string> halts;
  std::size_t output = 0;
  bool quintuple = false;
};

struct RawRule {
  std::size_t line;
  std::string from;
  std::string to;
  bool shift_only = false;
  std::vector<std::string> read;
  std::vector<std::string> write;
  std::vector<std::string> shift;
};

// Expands '*' positions of a read tuple into every symbol of that tape.
void expand(const Header& h, const RawRule& raw,
            const std::function<void(std::vector<Symbol>, std::vector<Symbol>)>& emit) {
  const std::size_t k = h.tapes;
  std::vector<std::vector<Symbol>> choices(k);
  for (std::size_t t = 0; t < k; ++t) {
    if (raw.read[t] == "*") {
      for (std::size_t s = 0; s < h.alphabets[t].size(); ++s) choices[t].push_back(static_cast<Symbol>(s));
    } else {
      auto s = h.alphabets[t].find(raw.read[t]);
      if (!s) throw ParseError(raw.line, "unknown symbol '" + raw.read[t] + "' on tape " + std::to_string(t + 1));
      choices[t].push_back(*s);
    }
  }
  std::vector<Symbol> fixed_write(k);
  for (std::size_t t = 0; t < k; ++t) {
    if (raw.write[t] == "*") {
      if (raw.read[t] != "*") throw ParseError(raw.line, "write '*' requires read '*' on the same tape");
      continue;
    }
    auto s = h.alphabets[t].find(raw.write[t]);
    if (!s) throw ParseError(raw.line, "unknown symbol '" + raw.write[t] + "' on tape " + std::to_string(t + 1));
    fixed_write[t] = *s;
  }
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    std::vector<Symbol> read(k), write(k);
    for (std::size_t t = 0; t < k; ++t) {
      read[t] = choices[t][idx[t]];
      write[t] = raw.write[t] == "*" ? read[t] : fixed_write[t];
    }
    emit(std::move(read), std::move(write));
    std::size_t t = k;
    while (t > 0) {
      --t;
      if (++idx[t] < choices[t].size()) break;
      idx[t] = 0;
      if (t == 0) return;
    }
    if (k == 0) return;
  }
}

}  // namespace

ParsedMachine parse_machine(std::string_view text) {
  Header h;
  std::vector<RawRule> raws;
  bool saw_tapes = false;
  bool saw_start = false;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::string& kw = tok[0];
    if (kw == "machine") {
      if (tok.size() != 2) throw ParseError(lineno, "usage: machine <name>");
      h.name = tok[1];
    } else if (kw == "tapes") {
      if (tok.size() != 2) throw ParseError(lineno, "usage: tapes <count>");
      h.tapes = parse_count(lineno, tok[1], "tape count");
      if (h.tapes == 0) throw ParseError(lineno, "tape count must be positive");
      h.alphabets.assign(h.tapes, {});
      saw_tapes = true;
    } else if (kw == "alphabet") {
      if (!saw_tapes) throw ParseError(lineno, "'tapes' must precede 'alphabet'");
      if (tok.size() < 3) throw ParseError(lineno, "usage: alphabet <tape> <blank> <symbol>...");
      std::size_t t = parse_count(lineno, tok[1], "tape number");
      if (t == 0 || t > h.tapes) throw ParseError(lineno, "tape number out of range");
      Alphabet a;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const std::string& s = tok[i];
        if (s == "*" || s == "/" || s == "->" || s.find(',') != std::string::npos) {
          throw ParseError(lineno, "reserved symbol name '" + s + "'");
        }
        if (a.find(s)) throw ParseError(lineno, "duplicate symbol '" + s + "'");
        a.symbols.push_back(s);
      }
      h.alphabets[t - 1] = std::move(a);
    } else if (kw == "start") {
      if (tok.size() != 2) throw ParseError(lineno, "usage: start <state>");
      h.start = tok[1];
      saw_start = true;
    } else if (kw == "halt") {
      for (std::size_t i = 1; i < tok.size(); ++i) h.halts.push_back(tok[i]);
    } else if (kw == "states") {
      for (std::size_t i = 1; i < tok.size(); ++i) h.states.push_back(tok[i]);
    } else if (kw == "output") {
      if (tok.size() != 2) throw ParseError(lineno, "usage: output <tape>");
      std::size_t t = parse_count(lineno, tok[1], "tape number");
      if (t == 0) throw ParseError(lineno, "tape numbers start at 1");
      h.output = t - 1;
    } else if (kw == "form") {
      if (tok.size() != 2 || (tok[1] != "quadruple" && tok[1] != "quintuple")) {
        throw ParseError(lineno, "usage: form quadruple|quintuple");
      }
      h.quintuple = tok[1] == "quintuple";
    } else {
      // Rule line.
      if (!saw_tapes) throw ParseError(lineno, "rule before 'tapes' header");
      RawRule r;
      r.line = lineno;
      r.from = tok[0];
      auto arrow = std::find(tok.begin(), tok.end(), std::string("->"));
      if (arrow == tok.end() || arrow - tok.begin() != 2) throw ParseError(lineno, "expected '<state> <read> -> ...'");
      std::vector<std::string> rhs(arrow + 1, tok.end());
      if (h.quintuple) {
        if (tok[1] == "/") throw ParseError(lineno, "shift-only rules are not allowed in quintuple form");
        if (rhs.size() != 3) throw ParseError(lineno, "quintuple rule: <state> <read> -> <write> <shift> <state>");
        r.read = split_commas(tok[1]);
        r.write = split_commas(rhs[0]);
        r.shift = split_commas(rhs[1]);
        r.to = rhs[2];
      } else if (tok[1] == "/") {
        if (rhs.size() != 2) throw ParseError(lineno, "shift rule: <state> / -> <shift> <state>");
        r.shift_only = true;
        r.shift = split_commas(rhs[0]);
        r.to = rhs[1];
      } else {
        if (rhs.size() != 2) throw ParseError(lineno, "read-write rule: <state> <read> -> <write> <state>");
        r.read = split_commas(tok[1]);
        r.write = split_commas(rhs[0]);
        r.to = rhs[1];
      }
      auto arity = [&](const std::vector<std::string>& v, const char* what) {
        if (!v.empty() && v.size() != h.tapes) {
          throw ParseError(lineno, std::string(what) + " tuple has " + std::to_string(v.size()) +
                                       " components, machine has " + std::to_string(h.tapes) + " tapes");
        }
      };
      arity(r.read, "read");
      arity(r.write, "write");
      arity(r.shift, "shift");
      raws.push_back(std::move(r));
    }
    if (end == text.size()) break;
  }

  if (!saw_tapes) throw ParseError(lineno, "missing 'tapes' header");
  if (!saw_start) throw ParseError(lineno, "missing 'start' header");
  for (std::size_t t = 0; t < h.tapes; ++t) {
    if (h.alphabets[t].size() == 0) {
      throw ParseError(lineno, "missing alphabet for tape " + std::to_string(t + 1));
    }
  }
  if (h.output >= h.tapes) throw ParseError(lineno, "output tape out of range");

  std::vector<std::string> states = h.states;
  auto state_id = [&](const std::string& name) -> StateId {
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i] == name) return static_cast<StateId>(i);
    }
    states.push_back(name);
    return static_cast<StateId>(states.size() - 1);
  };
  StateId start = state_id(h.start);
  std::vector<StateId> halts;
  for (const auto& s : h.halts) halts.push_back(state_id(s));

  if (h.quintuple) {
    QuintupleMachine m;
    m.name = h.name;
    m.alphabets = h.alphabets;
    m.start = start;
    m.halt_states = halts;
    m.output_tape = h.output;
    for (const RawRule& raw : raws) {
      StateId from = state_id(raw.from);
      StateId to = state_id(raw.to);
      std::vector<int> shift;
      for (const auto& s : raw.shift) shift.push_back(parse_shift(raw.line, s));
      expand(h, raw, [&](std::vector<Symbol> read, std::vector<Symbol> write) {
        m.rules.push_back({from, to, std::move(read), std::move(write), shift});
      });
    }
    m.states = states;
    return m;
  }

  Machine m;
  m.name = h.name;
  m.alphabets = h.alphabets;
  m.start = start;
  m.halt_states = halts;
  m.output_tape = h.output;
  for (const RawRule& raw : raws) {
    StateId from = state_id(raw.from);
    StateId to = state_id(raw.to);
    if (raw.shift_only) {
      std::vector<int> shift;
      for (const auto& s : raw.shift) shift.push_back(parse_shift(raw.line, s));
      m.rules.push_back(Rule::shift_rule(from, std::move(shift), to));
    } else {
      expand(h, raw, [&](std::vector<Symbol> read, std::vector<Symbol> write) {
        m.rules.push_back(Rule::read_write(from, std::move(read), std::move(write), to));
      });
    }
  }
  m.states = states;
  try {
    check_structure(m);
  } catch (const MachineError& e) {
    throw ParseError(lineno, e.what());
  }
  return m;
}

ParsedMachine load_machine_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open machine file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_machine(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
  }
}

Machine as_quadruple(const ParsedMachine& parsed) {
  if (const auto* m = std::get_if<Machine>(&parsed)) return *m;
  return normalize_to_quadruples(std::get<QuintupleMachine>(parsed));
}

namespace {

template <typename M>
void format_header(std::ostringstream& out, const M& m, bool quintuple) {
  out << "machine " << m.name << "\n";
  out << "tapes " << m.tape_count() << "\n";
  for (std::size_t t = 0; t < m.tape_count(); ++t) {
    out << "alphabet " << t + 1;
    for (const auto& s : m.alphabets[t].symbols) out << ' ' << s;
    out << "\n";
  }
  out << "states";
  for (const auto& s : m.states) out << ' ' << s;
  out << "\n";
  out << "start " << m.states.at(m.start) << "\n";
  if (!m.halt_states.empty()) {
    out << "halt";
    for (StateId h : m.halt_states) out << ' ' << m.states.at(h);
    out << "\n";
  }
  out << "output " << m.output_tape + 1 << "\n";
  if (quintuple) out << "form quintuple\n";
}

template <typename M>
std::string tuple(const M& m, const std::vector<Symbol>& syms) {
  std::string out;
  for (std::size_t t = 0; t < syms.size(); ++t) {
    if (t) out += ',';
    out += m.alphabets[t].name(syms[t]);
  }
  return out;
}

std::string shifts(const std::vector<int>& v) {
  std::string out;
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (t) out += ',';
    out += v[t] < 0 ? "-1" : v[t] > 0 ? "+1" : "0";
  }
  return out;
}

}  // namespace

std::string format_machine(const Machine& m) {
  std::ostringstream out;
  format_header(out, m, false);
  for (const Rule& r : m.rules) {
    out << m.states.at(r.from) << ' ';
    if (r.kind == RuleKind::ReadWrite) {
      out << tuple(m, r.read) << " -> " << tuple(m, r.write);
    } else {
      out << "/ -> " << shifts(r.shift);
    }
    out << ' ' << m.states.at(r.to) << "\n";
  }
  return out.str();
}

std::string format_machine(const QuintupleMachine& m) {
  std::ostringstream out;
  format_header(out, m, true);
  for (const QuintupleRule& r : m.rules) {
    out << m.states.at(r.from) << ' ' << tuple(m, r.read) << " -> " << tuple(m, r.write) << ' '
        << shifts(r.shift) << ' ' << m.states.at(r.to) << "\n";
  }
  return out.str();
}

std::string format_configuration(const Machine& m, const Configuration& c) {
  Configuration n = c;
  n.normalize();
  std::ostringstream out;
  out << "config " << m.name << "\n";
  out << "state " << m.states.at(n.state) << "\n";
  out << "steps " << n.steps << "\n";
  for (std::size_t t = 0; t < n.tapes.size(); ++t) {
    out << "tape " << t + 1 << " head " << n.heads[t];
    for (Symbol s : n.tapes[t]) out << ' ' << m.alphabets.at(t).name(s);
    out << "\n";
  }
  return out.str();
}

Configuration parse_configuration(const Machine& m, std::string_view text) {
  Configuration c;
  c.tapes.assign(m.tape_count(), {});
  c.heads.assign(m.tape_count(), 0);
  std::vector<bool> seen(m.tape_count(), false);
  bool saw_state = false;
  bool saw_steps = false;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "config") {
      continue;
    } else if (tok[0] == "state") {
      if (tok.size() != 2) throw ParseError(lineno, "usage: state <name>");
      auto s = m.find_state(tok[1]);
      if (!s) throw ParseError(lineno, "unknown state '" + tok[1] + "'");
      c.state = *s;
      saw_state = true;
    } else if (tok[0] == "steps") {
      if (tok.size() != 2) throw ParseError(lineno, "usage: steps <n>");
      c.steps = parse_count(lineno, tok[1], "step count");
      saw_steps = true;
    } else if (tok[0] == "tape") {
      if (tok.size() < 4 || tok[2] != "head") throw ParseError(lineno, "usage: tape <t> head <h> <symbol>...");
      std::size_t t = parse_count(lineno, tok[1], "tape number");
      if (t == 0 || t > m.tape_count()) throw ParseError(lineno, "tape number out of range");
      --t;
      c.heads[t] = parse_count(lineno, tok[3], "head position");
      for (std::size_t i = 4; i < tok.size(); ++i) {
        auto s = m.alphabets[t].find(tok[i]);
        if (!s) throw ParseError(lineno, "unknown symbol '" + tok[i] + "' on tape " + std::to_string(t + 1));
        c.tapes[t].push_back(*s);
      }
      seen[t] = true;
    } else {
      throw ParseError(lineno, "unexpected '" + tok[0] + "'");
    }
  }
  if (!saw_state || !saw_steps) throw ParseError(lineno, "configuration needs 'state' and 'steps' lines");
  for (std::size_t t = 0; t < seen.size(); ++t) {
    if (!seen[t]) throw ParseError(lineno, "missing tape " + std::to_string(t + 1));
  }
  c.normalize();
  return c;
}

}  // namespace revtm
