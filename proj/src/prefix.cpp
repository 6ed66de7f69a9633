#include "revtm/prefix.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "revtm/corpus.hpp"
#include "revtm/digest.hpp"
#include "revtm/machine_format.hpp"

namespace revtm {

std::string to_string(PrefixOutcome o) {
  switch (o) {
    case PrefixOutcome::Halted: return "halted";
    case PrefixOutcome::BudgetExceeded: return "budget_exceeded";
    case PrefixOutcome::TapeExhausted: return "tape_exhausted";
  }
  return "?";
}

std::string to_string(Variant v) { return v == Variant::General ? "gen" : "rev"; }

bool is_prefix_machine(const Machine& m) {
  if (m.tape_count() != 4 || m.output_tape != kOutputTape) return false;
  const Alphabet& p = m.alphabets[kProgramTape];
  const Alphabet& a = m.alphabets[kAuxTape];
  if (!p.find("$") || !p.find("0") || !p.find("1") || !a.find("0") || !a.find("1")) return false;
  for (const Rule& r : m.rules) {
    if (r.kind == RuleKind::ReadWrite) {
      if (r.read[kProgramTape] != r.write[kProgramTape] || r.read[kAuxTape] != r.write[kAuxTape]) return false;
    } else if (r.shift[kProgramTape] < 0) {
      return false;
    }
  }
  return true;
}

void require_prefix_machine(const Machine& m) {
  check_structure(m);
  if (!is_prefix_machine(m)) {
    throw MachineError("'" + m.name +
                       "' is not a prefix machine (4 tapes: read-only program with '$', read-only aux, work, output)");
  }
}

namespace {

std::vector<Symbol> bit_symbols(const Alphabet& a, const Bits& bits) {
  const Symbol zero = *a.find("0");
  const Symbol one = *a.find("1");
  std::vector<Symbol> out;
  out.reserve(bits.size() + 1);
  for (char c : bits) out.push_back(c == '0' ? zero : one);
  return out;
}

}  // namespace

Configuration prefix_initial(const Machine& m, const Bits& bits, const Bits& aux) {
  Configuration c;
  c.state = m.start;
  c.tapes.assign(m.tape_count(), {});
  c.heads.assign(m.tape_count(), 0);
  c.tapes[kProgramTape].push_back(*m.alphabets[kProgramTape].find("$"));
  auto prog = bit_symbols(m.alphabets[kProgramTape], bits);
  c.tapes[kProgramTape].insert(c.tapes[kProgramTape].end(), prog.begin(), prog.end());
  c.tapes[kAuxTape] = bit_symbols(m.alphabets[kAuxTape], aux);
  return c;
}

PrefixRunResult run_prefix(const Machine& m, const Bits& bits, const Bits& aux, std::uint64_t budget) {
  require_prefix_machine(m);
  if (!is_bits(bits) || !is_bits(aux)) throw std::invalid_argument("program and aux must be binary strings");
  Executable exe(m);
  Configuration c = prefix_initial(m, bits, aux);
  PrefixRunResult r;
  while (true) {
    if (!exe.applicable(c)) {
      r.outcome = PrefixOutcome::Halted;
      break;
    }
    if (c.steps >= budget) {
      r.outcome = PrefixOutcome::BudgetExceeded;
      break;
    }
    exe.step(c);
    if (c.heads[kProgramTape] > bits.size()) {
      r.outcome = PrefixOutcome::TapeExhausted;
      break;
    }
  }
  r.steps = c.steps;
  r.program = bits.substr(0, std::min(c.heads[kProgramTape], bits.size()));
  if (r.outcome == PrefixOutcome::Halted) r.output = tape_output(m, c, kOutputTape);
  return r;
}

// ---------------------------------------------------------------------------
// Raw table encoding.

namespace {

constexpr std::uint64_t kMaxField = 1u << 16;

void put_nat(Bits& out, std::uint64_t n) { out += encode_index(n); }

void put_byte(Bits& out, unsigned char c) {
  for (int b = 7; b >= 0; --b) out.push_back(((c >> b) & 1) ? '1' : '0');
}

class BitReader {
 public:
  explicit BitReader(const Bits& bits) : bits_(bits) {}

  std::optional<std::uint64_t> nat() {
    auto parsed = parse_self_delimited(std::string_view(bits_).substr(pos_));
    if (parsed.status != SelfDelimitedParse::Status::Complete) return std::nullopt;
    pos_ += parsed.consumed;
    auto v = bijective_value(parsed.value);
    if (!v || *v > kMaxField) return std::nullopt;
    return v;
  }
  std::optional<int> bit() {
    if (pos_ >= bits_.size()) return std::nullopt;
    return bits_[pos_++] - '0';
  }
  std::optional<unsigned char> byte() {
    if (pos_ + 8 > bits_.size()) return std::nullopt;
    unsigned char c = 0;
    for (int i = 0; i < 8; ++i) c = static_cast<unsigned char>((c << 1) | (bits_[pos_++] - '0'));
    return c;
  }
  bool done() const { return pos_ == bits_.size(); }

 private:
  const Bits& bits_;
  std::size_t pos_ = 0;
};

}  // namespace

Bits serialize_machine(const Machine& m) {
  check_structure(m);
  Bits out;
  put_nat(out, m.tape_count());
  for (const Alphabet& a : m.alphabets) {
    put_nat(out, a.size());
    for (const std::string& name : a.symbols) {
      put_nat(out, name.size());
      for (char c : name) put_byte(out, static_cast<unsigned char>(c));
    }
  }
  put_nat(out, m.states.size());
  put_nat(out, m.start);
  put_nat(out, m.halt_states.size());
  for (StateId h : m.halt_states) put_nat(out, h);
  put_nat(out, m.output_tape);
  put_nat(out, m.rules.size());
  for (const Rule& r : m.rules) {
    out.push_back(r.kind == RuleKind::ReadWrite ? '0' : '1');
    put_nat(out, r.from);
    put_nat(out, r.to);
    if (r.kind == RuleKind::ReadWrite) {
      for (std::size_t t = 0; t < m.tape_count(); ++t) {
        put_nat(out, r.read[t]);
        put_nat(out, r.write[t]);
      }
    } else {
      for (int d : r.shift) out += d == 0 ? "00" : d > 0 ? "01" : "10";
    }
  }
  return out;
}

std::optional<Machine> deserialize_machine(const Bits& table) {
  if (!is_bits(table)) return std::nullopt;
  BitReader in(table);
  Machine m;
  m.name = "enum";
  auto k = in.nat();
  if (!k || *k == 0) return std::nullopt;
  for (std::uint64_t t = 0; t < *k; ++t) {
    auto size = in.nat();
    if (!size || *size == 0) return std::nullopt;
    Alphabet a;
    for (std::uint64_t s = 0; s < *size; ++s) {
      auto len = in.nat();
      if (!len || *len == 0) return std::nullopt;
      std::string name;
      for (std::uint64_t i = 0; i < *len; ++i) {
        auto c = in.byte();
        if (!c || *c <= ' ' || *c == ',' || *c == '#' || *c > '~') return std::nullopt;
        name.push_back(static_cast<char>(*c));
      }
      if (name == "*" || name == "/" || name == "->" || a.find(name)) return std::nullopt;
      a.symbols.push_back(name);
    }
    m.alphabets.push_back(std::move(a));
  }
  auto states = in.nat();
  if (!states || *states == 0) return std::nullopt;
  for (std::uint64_t q = 0; q < *states; ++q) m.states.push_back("q" + std::to_string(q));
  auto start = in.nat();
  if (!start) return std::nullopt;
  m.start = static_cast<StateId>(*start);
  auto halts = in.nat();
  if (!halts) return std::nullopt;
  for (std::uint64_t i = 0; i < *halts; ++i) {
    auto h = in.nat();
    if (!h) return std::nullopt;
    m.halt_states.push_back(static_cast<StateId>(*h));
  }
  auto output = in.nat();
  if (!output) return std::nullopt;
  m.output_tape = *output;
  auto rules = in.nat();
  if (!rules) return std::nullopt;
  for (std::uint64_t i = 0; i < *rules; ++i) {
    auto kind = in.bit();
    auto from = in.nat();
    auto to = in.nat();
    if (!kind || !from || !to) return std::nullopt;
    if (*kind == 0) {
      std::vector<Symbol> read, write;
      for (std::uint64_t t = 0; t < *k; ++t) {
        auto r = in.nat();
        auto w = in.nat();
        if (!r || !w) return std::nullopt;
        read.push_back(static_cast<Symbol>(*r));
        write.push_back(static_cast<Symbol>(*w));
      }
      m.rules.push_back(Rule::read_write(static_cast<StateId>(*from), read, write, static_cast<StateId>(*to)));
    } else {
      std::vector<int> shift;
      for (std::uint64_t t = 0; t < *k; ++t) {
        auto a = in.bit();
        auto b = in.bit();
        if (!a || !b || (*a == 1 && *b == 1)) return std::nullopt;
        shift.push_back(*a == 1 ? -1 : *b == 1 ? 1 : 0);
      }
      m.rules.push_back(Rule::shift_rule(static_cast<StateId>(*from), shift, static_cast<StateId>(*to)));
    }
  }
  if (!in.done()) return std::nullopt;
  try {
    if (!validate_machine(m).deterministic()) return std::nullopt;
  } catch (const MachineError&) {
    return std::nullopt;
  }
  return m;
}

MachineIndex serialize_index(const Machine& m) { return {"1" + serialize_machine(m)}; }

namespace {

Machine prefix_shell(const std::string& name) {
  Machine m;
  m.name = name;
  m.alphabets = {Alphabet{{"_", "$", "0", "1"}}, Alphabet{{"_", "0", "1"}}, Alphabet{{"_"}},
                 Alphabet{{"_", "0", "1"}}};
  m.states = {"q0"};
  m.start = 0;
  m.output_tape = kOutputTape;
  return m;
}

}  // namespace

Machine canonical_diverger() {
  Machine m = prefix_shell("diverge");
  m.rules.push_back(Rule::shift_rule(0, {0, 0, 0, 0}, 0));
  return m;
}

bool is_canonical_diverger(const Machine& m) {
  static const Machine d = canonical_diverger();
  return m.alphabets.size() == d.alphabets.size() && m.rules == d.rules && m.states.size() == d.states.size() &&
         m.start == d.start && [&] {
           for (std::size_t t = 0; t < d.alphabets.size(); ++t) {
             if (m.alphabets[t].symbols != d.alphabets[t].symbols) return false;
           }
           return true;
         }();
}

Machine halting_machine() {
  Machine m = prefix_shell("halt");
  m.halt_states = {0};
  return m;
}

const std::vector<Machine>& catalog() {
  static const std::vector<Machine> machines = [] {
    std::vector<Machine> out;
    for (const char* name : {"print", "repeat", "echo_aux", "copy3"}) {
      out.push_back(corpus_machine(name).quadruple);
    }
    return out;
  }();
  return machines;
}

MachineIndex catalog_index(std::size_t c) { return {"0" + bijective_binary(c)}; }

Machine enumerate_machine(const MachineIndex& index) {
  const Bits& d = index.description;
  if (d.empty() || !is_bits(d)) return canonical_diverger();
  if (d[0] == '0') {
    auto c = bijective_value(std::string_view(d).substr(1));
    if (!c || *c >= catalog().size()) return canonical_diverger();
    return catalog()[*c];
  }
  Bits table = d.substr(1);
  if (table.empty()) return halting_machine();
  auto m = deserialize_machine(table);
  return m ? *m : canonical_diverger();
}

Machine enumerate_machine(std::uint64_t i) { return enumerate_machine(MachineIndex::from_value(i)); }

// ---------------------------------------------------------------------------
// Universal machine.

UniversalMachine::UniversalMachine() {
  std::ostringstream id;
  id << "revtm-universal/1\n"
     << "index: bijective description, bits doubled, terminator 01\n"
     << "descriptions: 0+bij(c) catalog, 1+raw table, 1 = halting machine\n"
     << "steps: one per index bit; simulated steps; reversible adds bennett steps and one per index bit undone\n";
  for (const Machine& m : catalog()) id << format_machine(m);
  id << format_machine(canonical_diverger()) << format_machine(halting_machine());
  digest_ = sha256_hex(id.str());
}

std::shared_ptr<const UniversalMachine::Resolved> UniversalMachine::resolve(const Bits& description) const {
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(description);
    if (it != cache_.end()) return it->second;
  }
  auto r = std::make_shared<Resolved>();
  r->machine = enumerate_machine(MachineIndex{description});
  r->runnable = is_prefix_machine(r->machine) && !is_canonical_diverger(r->machine);
  if (r->runnable) r->exe = std::make_unique<Executable>(r->machine);
  std::lock_guard lock(mutex_);
  auto [it, inserted] = cache_.emplace(description, std::move(r));
  return it->second;
}

const BennettMachine& UniversalMachine::bennett_machine_of(const Resolved& r) const {
  std::call_once(r.bennett_once, [&] {
    r.bennett = std::make_unique<BennettMachine>(bennett_transform_multi(r.machine));
    r.bennett_exe = std::make_unique<Executable>(r.bennett->machine);
  });
  return *r.bennett;
}

const Executable& UniversalMachine::bennett_of(const Resolved& r) const {
  bennett_machine_of(r);
  return *r.bennett_exe;
}

PrefixRunResult UniversalMachine::run(const Bits& bits, const Bits& aux, std::uint64_t budget) const {
  UniversalSession s(*this, Variant::General, bits, aux);
  s.advance(budget);
  return s.result(budget);
}

ReversiblePrefixRunResult UniversalMachine::run_reversible(const Bits& bits, const Bits& aux,
                                                           std::uint64_t budget) const {
  UniversalSession s(*this, Variant::Reversible, bits, aux);
  s.advance(budget);
  return {s.result(budget), s.restored()};
}

UniversalSession::UniversalSession(const UniversalMachine& u, Variant variant, Bits bits, Bits aux)
    : u_(u), variant_(variant), tape_(std::move(bits)), aux_(std::move(aux)) {
  if (!is_bits(tape_.bits()) || !is_bits(aux_)) throw std::invalid_argument("program and aux must be binary strings");
}

void UniversalSession::finish(PrefixOutcome outcome) {
  outcome_ = outcome;
  phase_ = Phase::Done;
}

void UniversalSession::start_simulation() {
  index_bits_ = tape_.cursor();
  resolved_ = u_.resolve(description_);
  if (!resolved_->runnable) {
    diverges_ = true;
    finish(PrefixOutcome::BudgetExceeded);
    return;
  }
  rest_ = tape_.rest();
  Configuration c = prefix_initial(resolved_->machine, rest_, aux_);
  if (variant_ == Variant::Reversible) {
    exe_ = &u_.bennett_of(*resolved_);
    config_ = bennett_initial(u_.bennett_machine_of(*resolved_), c);
  } else {
    exe_ = resolved_->exe.get();
    config_ = std::move(c);
  }
  start_config_ = config_;
  sim_base_ = steps_;
  phase_ = Phase::Simulate;
}

void UniversalSession::advance(std::uint64_t limit) {
  while (phase_ == Phase::Decode) {
    if (steps_ >= limit) return;
    if (tape_.exhausted()) {
      finish(PrefixOutcome::TapeExhausted);
      return;
    }
    pair_.push_back(tape_.read());
    ++steps_;
    if (pair_.size() < 2) continue;
    if (pair_[0] == pair_[1]) {
      description_.push_back(pair_[0]);
    } else if (pair_ == "01") {
      start_simulation();
    } else {
      diverges_ = true;  // "10" can never complete an index
      finish(PrefixOutcome::BudgetExceeded);
    }
    pair_.clear();
  }
  if (phase_ == Phase::Simulate) {
    while (true) {
      if (!exe_->applicable(config_)) {
        if (variant_ == Variant::Reversible) {
          const BennettMachine& bm = u_.bennett_machine_of(*resolved_);
          output_ = tape_output(bm.machine, config_, bm.output_tape);
          Configuration now = config_;
          Configuration then = start_config_;
          now.normalize();
          then.normalize();
          restored_ = now.state == *bm.machine.find_state("done") && now.tapes[bm.history_tape].empty();
          for (std::size_t t = 0; t < bm.source_tapes; ++t) {
            restored_ = restored_ && now.tapes[t] == then.tapes[t] && now.heads[t] == then.heads[t];
          }
          undo_left_ = index_bits_;
          phase_ = Phase::Undo;
        } else {
          output_ = tape_output(resolved_->machine, config_, kOutputTape);
          finish(PrefixOutcome::Halted);
        }
        break;
      }
      if (steps_ >= limit) return;
      exe_->step(config_);
      ++steps_;
      std::size_t head = config_.heads[kProgramTape];
      max_head_ = std::max(max_head_, head);
      if (head > rest_.size()) {
        finish(PrefixOutcome::TapeExhausted);
        return;
      }
    }
  }
  if (phase_ == Phase::Undo) {
    // Un-reading the index: one reverse step per index bit.
    while (undo_left_ > 0) {
      if (steps_ >= limit) return;
      --undo_left_;
      ++steps_;
    }
    finish(PrefixOutcome::Halted);
  }
}

PrefixRunResult UniversalSession::result(std::uint64_t budget) const {
  PrefixRunResult r;
  if (phase_ != Phase::Done || diverges_) {
    r.outcome = PrefixOutcome::BudgetExceeded;
    r.steps = budget;
    r.diverges = diverges_;
  } else {
    r.outcome = outcome_;
    r.steps = steps_;
  }
  if (phase_ == Phase::Decode || resolved_ == nullptr || !resolved_->runnable) {
    r.program = tape_.consumed();
  } else {
    r.program = tape_.bits().substr(0, index_bits_) + rest_.substr(0, std::min(max_head_, rest_.size()));
  }
  if (r.outcome == PrefixOutcome::Halted) r.output = output_;
  return r;
}

// ---------------------------------------------------------------------------

std::vector<Bits> all_bit_strings(std::size_t max_len) {
  std::vector<Bits> out;
  for (std::size_t len = 0; len <= max_len; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      Bits b(len, '0');
      for (std::size_t i = 0; i < len; ++i) {
        if ((v >> (len - 1 - i)) & 1) b[i] = '1';
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

PrefixCheckReport prefix_free_check(std::size_t max_len, const ProgramRunner& runner) {
  PrefixCheckReport report;
  std::set<Bits> programs;
  for (const Bits& b : all_bit_strings(max_len)) {
    ++report.runs;
    PrefixRunResult r = runner(b);
    if (r.outcome == PrefixOutcome::Halted) programs.insert(r.program);
  }
  report.programs.assign(programs.begin(), programs.end());
  for (const Bits& p : report.programs) {
    for (std::size_t len = 0; len < p.size(); ++len) {
      Bits prefix = p.substr(0, len);
      if (programs.count(prefix)) report.violations.emplace_back(prefix, p);
    }
  }
  return report;
}

PrefixCheckReport prefix_free_check(const UniversalMachine& u, std::size_t max_len, std::uint64_t budget,
                                    const Bits& aux) {
  return prefix_free_check(max_len, [&](const Bits& b) { return u.run(b, aux, budget); });
}

}  // namespace revtm
