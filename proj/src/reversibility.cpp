#include "revtm/reversibility.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "revtm/digest.hpp"
#include "revtm/machine_format.hpp"

namespace revtm {

ReversibilityReport verify_reversible(const Machine& m) {
  check_structure(m);
  ReversibilityReport report;
  std::map<StateId, std::vector<std::size_t>> by_target;
  for (std::size_t i = 0; i < m.rules.size(); ++i) by_target[m.rules[i].to].push_back(i);

  for (const auto& [state, idx] : by_target) {
    std::map<std::vector<Symbol>, std::vector<std::size_t>> by_write;
    std::vector<std::size_t> shifts;
    for (std::size_t i : idx) {
      if (m.rules[i].kind == RuleKind::Shift) {
        shifts.push_back(i);
      } else {
        by_write[m.rules[i].write].push_back(i);
      }
    }
    // A Shift rule's range is every symbol tuple in its target state.
    for (std::size_t s : shifts) {
      for (std::size_t i : idx) {
        if (i == s) continue;
        if (m.rules[i].kind == RuleKind::Shift && i < s) continue;
        report.conflicts.push_back({std::min(s, i), std::max(s, i)});
      }
    }
    for (const auto& [write, same] : by_write) {
      for (std::size_t a = 0; a < same.size(); ++a) {
        for (std::size_t b = a + 1; b < same.size(); ++b) report.conflicts.push_back({same[a], same[b]});
      }
    }
  }
  std::sort(report.conflicts.begin(), report.conflicts.end(), [](const RulePair& a, const RulePair& b) {
    return std::tie(a.first, a.second) < std::tie(b.first, b.second);
  });
  return report;
}

namespace {

Rule inverse_rule(const Rule& r) {
  if (r.kind == RuleKind::ReadWrite) return Rule::read_write(r.to, r.write, r.read, r.from);
  std::vector<int> back(r.shift.size());
  for (std::size_t t = 0; t < back.size(); ++t) back[t] = -r.shift[t];
  return Rule::shift_rule(r.to, std::move(back), r.from);
}

}  // namespace

Machine invert(const Machine& m) {
  auto report = verify_reversible(m);
  if (!report.reversible()) {
    std::string msg = "machine '" + m.name + "' is not reversible; conflicting rule pairs:";
    for (const auto& c : report.conflicts) msg += " (" + std::to_string(c.first) + "," + std::to_string(c.second) + ")";
    throw NotReversibleError(msg, report.conflicts);
  }
  Machine inv = m;
  inv.halt_states.clear();
  for (Rule& r : inv.rules) r = inverse_rule(r);
  return inv;
}

std::string machine_digest(const Machine& m) { return sha256_hex(format_machine(m)); }

namespace {

using Tuple = std::vector<Symbol>;

void for_each_tuple(const std::vector<std::vector<Symbol>>& choices, const std::function<void(const Tuple&)>& fn) {
  const std::size_t k = choices.size();
  for (const auto& c : choices) {
    if (c.empty()) return;
  }
  Tuple cur(k);
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    for (std::size_t t = 0; t < k; ++t) cur[t] = choices[t][idx[t]];
    fn(cur);
    std::size_t t = k;
    while (true) {
      if (t == 0) return;
      --t;
      if (++idx[t] < choices[t].size()) break;
      idx[t] = 0;
    }
  }
}

class BennettBuilder {
 public:
  explicit BennettBuilder(const Machine& src) : src_(src), k_(src.tape_count()) {
    auto report = validate_machine(src);
    if (!report.deterministic()) {
      throw MachineError("Bennett transform needs a forward-deterministic source; '" + src.name +
                         "' has overlapping rules");
    }
    hist_ = k_;
    out_ = k_ + 1;
    o_ = src.output_tape;
    marked_.assign(k_, false);
    marked_[o_] = true;
    for (const Rule& r : src.rules) {
      if (r.kind != RuleKind::Shift) continue;
      for (std::size_t t = 0; t < k_; ++t) {
        if (r.shift[t] < 0) marked_[t] = true;
      }
    }
    sizes_.resize(k_);
    for (std::size_t t = 0; t < k_; ++t) sizes_[t] = src.alphabets[t].size();
  }

  BennettMachine build() {
    setup_alphabets();
    build_compute();
    build_copy();
    build_retrace();

    BennettMachine bm;
    bm.machine = std::move(m_);
    bm.stage_of_state = std::move(stages_);
    bm.source_digest = machine_digest(src_);
    bm.source_tapes = k_;
    bm.history_tape = hist_;
    bm.output_tape = out_;
    bm.source_alphabet_sizes = sizes_;
    return bm;
  }

 private:
  bool is_marked(std::size_t t, Symbol s) const { return marked_[t] && s >= sizes_[t]; }
  Symbol unmark(std::size_t t, Symbol s) const { return is_marked(t, s) ? static_cast<Symbol>(s - sizes_[t]) : s; }
  Symbol mark(std::size_t t, Symbol s) const { return marked_[t] ? static_cast<Symbol>(s + sizes_[t]) : s; }
  Symbol with_mark_of(std::size_t t, Symbol plain, Symbol like) const {
    return is_marked(t, like) ? mark(t, plain) : plain;
  }

  std::string unique_name(const Alphabet& a, std::string base) {
    while (a.find(base)) base += "'";
    return base;
  }

  void setup_alphabets() {
    m_.name = src_.name + ".rev";
    m_.alphabets.resize(k_ + 2);
    for (std::size_t t = 0; t < k_; ++t) {
      Alphabet a = src_.alphabets[t];
      if (marked_[t]) {
        for (std::size_t s = 0; s < sizes_[t]; ++s) {
          a.symbols.push_back(unique_name(a, src_.alphabets[t].symbols[s] + "'"));
        }
      }
      m_.alphabets[t] = std::move(a);
      std::vector<Symbol> all;
      for (std::size_t s = 0; s < m_.alphabets[t].size(); ++s) all.push_back(static_cast<Symbol>(s));
      all_.push_back(std::move(all));
    }
    Alphabet& h = m_.alphabets[hist_];
    h.symbols = {"_", "L"};
    for (StateId q = 0; q < src_.states.size(); ++q) {
      halt_record_.push_back(static_cast<Symbol>(h.symbols.size()));
      h.symbols.push_back("h" + std::to_string(q));
    }
    rule_record_.assign(src_.rules.size(), {});
    for (std::size_t j = 0; j < src_.rules.size(); ++j) {
      const Rule& r = src_.rules[j];
      if (r.kind == RuleKind::ReadWrite) {
        rule_record_[j].push_back(static_cast<Symbol>(h.symbols.size()));
        h.symbols.push_back("r" + std::to_string(j));
      } else {
        std::size_t left = left_tapes(r).size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << left); ++mask) {
          rule_record_[j].push_back(static_cast<Symbol>(h.symbols.size()));
          h.symbols.push_back("r" + std::to_string(j) + "m" + std::to_string(mask));
        }
      }
    }
    m_.alphabets[out_] = src_.alphabets[o_];
    m_.output_tape = out_;
  }

  std::vector<std::size_t> left_tapes(const Rule& r) const {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < k_; ++t) {
      if (r.shift[t] < 0) out.push_back(t);
    }
    return out;
  }

  StateId state(const std::string& name, Stage stage) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    StateId id = static_cast<StateId>(m_.states.size());
    m_.states.push_back(name);
    stages_.push_back(stage);
    ids_.emplace(name, id);
    return id;
  }

  Tuple full(const Tuple& src, Symbol h, Symbol o) const {
    Tuple t = src;
    t.push_back(h);
    t.push_back(o);
    return t;
  }

  std::vector<int> shift_vec(std::vector<int> src, int h, int o) const {
    src.push_back(h);
    src.push_back(o);
    return src;
  }

  std::vector<int> only(std::size_t tape, int d) const {
    std::vector<int> v(k_ + 2, 0);
    v[tape] = d;
    return v;
  }

  void compute_rw(StateId from, Tuple read, Tuple write, StateId to) {
    compute_.push_back(Rule::read_write(from, std::move(read), std::move(write), to));
    m_.rules.push_back(compute_.back());
  }
  void compute_shift(StateId from, std::vector<int> d, StateId to) {
    compute_.push_back(Rule::shift_rule(from, std::move(d), to));
    m_.rules.push_back(compute_.back());
  }
  void rw(StateId from, Tuple read, Tuple write, StateId to) {
    m_.rules.push_back(Rule::read_write(from, std::move(read), std::move(write), to));
  }
  void sh(StateId from, std::vector<int> d, StateId to) {
    m_.rules.push_back(Rule::shift_rule(from, std::move(d), to));
  }

  StateId cstate(StateId q) { return state("c:" + src_.states[q], Stage::Compute); }
  StateId cadv(StateId q) { return state("c:" + src_.states[q] + "+", Stage::Compute); }

  void build_compute() {
    init_ = state("init", Stage::Compute);
    m_.start = init_;
    a0_ = state("y:seek", Stage::Copy);
    for (StateId q = 0; q < src_.states.size(); ++q) {
      cstate(q);
      cadv(q);
    }

    // Preamble: mark cell 0 of every marked tape.
    std::vector<std::vector<Symbol>> plain(k_);
    for (std::size_t t = 0; t < k_; ++t) {
      for (std::size_t s = 0; s < sizes_[t]; ++s) plain[t].push_back(static_cast<Symbol>(s));
    }
    for_each_tuple(plain, [&](const Tuple& u) {
      Tuple w = u;
      for (std::size_t t = 0; t < k_; ++t) w[t] = mark(t, u[t]);
      compute_rw(init_, full(u, kBlank, kBlank), full(w, kBlank, kBlank), cstate(src_.start));
    });

    std::vector<std::vector<std::size_t>> rules_from(src_.states.size());
    for (std::size_t j = 0; j < src_.rules.size(); ++j) rules_from[src_.rules[j].from].push_back(j);

    for (StateId q = 0; q < src_.states.size(); ++q) {
      compute_shift(cstate(q), only(hist_, +1), cadv(q));
      std::optional<std::size_t> shift_rule;
      std::map<Tuple, std::size_t> by_read;
      for (std::size_t j : rules_from[q]) {
        if (src_.rules[j].kind == RuleKind::Shift) {
          shift_rule = j;
        } else {
          by_read.emplace(src_.rules[j].read, j);
        }
      }
      if (shift_rule) {
        build_source_shift(q, *shift_rule);
        continue;
      }
      for_each_tuple(all_, [&](const Tuple& hat) {
        Tuple plain_read(k_);
        for (std::size_t t = 0; t < k_; ++t) plain_read[t] = unmark(t, hat[t]);
        auto it = by_read.find(plain_read);
        if (it == by_read.end()) {
          // Source halts here: record the halting state and enter the copy stage.
          compute_rw(cadv(q), full(hat, kBlank, kBlank), full(hat, halt_record_[q], kBlank), a0_);
          halting_[q].push_back(hat);
          return;
        }
        const Rule& r = src_.rules[it->second];
        Tuple w(k_);
        for (std::size_t t = 0; t < k_; ++t) w[t] = with_mark_of(t, r.write[t], hat[t]);
        compute_rw(cadv(q), full(hat, kBlank, kBlank), full(w, rule_record_[it->second][0], kBlank),
                   cstate(r.to));
      });
    }
  }

  void build_source_shift(StateId q, std::size_t j) {
    const Rule& r = src_.rules[j];
    auto left = left_tapes(r);
    std::vector<StateId> moved(rule_record_[j].size());
    for (std::size_t mask = 0; mask < rule_record_[j].size(); ++mask) {
      std::string tag = "c:" + std::to_string(j) + "m" + std::to_string(mask);
      StateId f = state(tag, Stage::Compute);
      moved[mask] = state(tag + "'", Stage::Compute);
      std::vector<int> d = r.shift;
      for (std::size_t i = 0; i < left.size(); ++i) {
        if (mask & (std::size_t{1} << i)) d[left[i]] = 0;  // head at cell 0: clamp
      }
      compute_shift(f, shift_vec(d, 0, 0), moved[mask]);
    }
    for_each_tuple(all_, [&](const Tuple& hat) {
      std::size_t mask = 0;
      for (std::size_t i = 0; i < left.size(); ++i) {
        if (is_marked(left[i], hat[left[i]])) mask |= std::size_t{1} << i;
      }
      Symbol rec = rule_record_[j][mask];
      std::string tag = "c:" + std::to_string(j) + "m" + std::to_string(mask);
      compute_rw(cadv(q), full(hat, kBlank, kBlank), full(hat, rec, kBlank), state(tag, Stage::Compute));
    });
    for (std::size_t mask = 0; mask < moved.size(); ++mask) {
      Symbol rec = rule_record_[j][mask];
      for_each_tuple(all_, [&](const Tuple& hat) {
        compute_rw(moved[mask], full(hat, rec, kBlank), full(hat, rec, kBlank), cstate(r.to));
      });
    }
  }

  void build_copy() {
    const Symbol L = 1;
    StateId a1 = state("y:seek1", Stage::Copy);
    StateId a2 = state("y:seek2", Stage::Copy);
    StateId a3 = state("y:seek3", Stage::Copy);
    StateId b0 = state("y:copy", Stage::Copy);
    StateId b1 = state("y:copy1", Stage::Copy);
    StateId b2 = state("y:copy2", Stage::Copy);
    StateId c0 = state("y:return", Stage::Copy);
    StateId c1 = state("y:return1", Stage::Copy);
    StateId c2 = state("y:return2", Stage::Copy);
    d0_ = state("y:restore", Stage::Copy);
    StateId d1 = state("y:restore1", Stage::Copy);
    StateId d2 = state("y:restore2", Stage::Copy);
    StateId d3 = state("y:restore3", Stage::Copy);

    // Seek the output head to cell 0, logging each move as L on the history tape.
    sh(a0_, only(hist_, +1), a1);
    for_each_tuple(all_, [&](const Tuple& hat) {
      rw(a1, full(hat, kBlank, kBlank), full(hat, kBlank, kBlank), is_marked(o_, hat[o_]) ? b0 : a2);
      rw(a3, full(hat, kBlank, kBlank), full(hat, L, kBlank), a0_);
    });
    sh(a2, only(o_, -1), a3);

    // Copy the blank-free prefix onto the output tape.
    for_each_tuple(all_, [&](const Tuple& hat) {
      Symbol plain = unmark(o_, hat[o_]);
      if (plain != kBlank) {
        rw(b0, full(hat, kBlank, kBlank), full(hat, kBlank, plain), b1);
      } else {
        rw(b0, full(hat, kBlank, kBlank), full(hat, kBlank, kBlank), c0);
      }
      if (!is_marked(o_, hat[o_])) rw(b2, full(hat, kBlank, kBlank), full(hat, kBlank, kBlank), b0);
    });
    {
      std::vector<int> d(k_ + 2, 0);
      d[o_] = 1;
      d[out_] = 1;
      sh(b1, d, b2);
    }

    // Return the source output head to cell 0; the copy head stays put.
    for_each_tuple(all_, [&](const Tuple& hat) {
      rw(c0, full(hat, kBlank, kBlank), full(hat, kBlank, kBlank), is_marked(o_, hat[o_]) ? d0_ : c1);
      if (unmark(o_, hat[o_]) != kBlank) rw(c2, full(hat, kBlank, kBlank), full(hat, kBlank, kBlank), c0);
    });
    sh(c1, only(o_, -1), c2);

    // Replay the L log to put the source output head back where the source halted.
    sh(d0_, only(hist_, -1), d1);
    for_each_tuple(all_, [&](const Tuple& hat) {
      rw(d1, full(hat, L, kBlank), full(hat, kBlank, kBlank), d2);
      if (!is_marked(o_, hat[o_])) rw(d3, full(hat, kBlank, kBlank), full(hat, kBlank, kBlank), d0_);
    });
    sh(d2, only(o_, +1), d3);
    d1_ = d1;
  }

  void build_retrace() {
    auto retrace_state = [&](StateId compute_state) -> StateId {
      if (compute_state == init_) return state("done", Stage::Retrace);
      return state("r:" + m_.states[compute_state].substr(2), Stage::Retrace);
    };
    // Undo the halting record directly from the restore loop.
    for (const auto& [q, tuples] : halting_) {
      StateId target = retrace_state(cadv(q));
      for (const Tuple& hat : tuples) {
        rw(d1_, full(hat, halt_record_[q], kBlank), full(hat, kBlank, kBlank), target);
      }
    }
    for (const Rule& r : compute_) {
      if (r.to == a0_) continue;  // halting records, handled above
      Rule inv = inverse_rule(r);
      inv.from = retrace_state(r.to);
      inv.to = retrace_state(r.from);
      m_.rules.push_back(std::move(inv));
    }
    m_.halt_states = {state("done", Stage::Retrace)};
  }

  const Machine& src_;
  std::size_t k_;
  std::size_t hist_ = 0;
  std::size_t out_ = 0;
  std::size_t o_ = 0;
  std::vector<bool> marked_;
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<Symbol>> all_;
  std::vector<Symbol> halt_record_;
  std::vector<std::vector<Symbol>> rule_record_;
  std::map<StateId, std::vector<Tuple>> halting_;
  std::vector<Rule> compute_;

  Machine m_;
  std::vector<Stage> stages_;
  std::unordered_map<std::string, StateId> ids_;
  StateId init_ = 0;
  StateId a0_ = 0;
  StateId d0_ = 0;
  StateId d1_ = 0;
};

}  // namespace

BennettMachine bennett_transform_multi(const Machine& m) { return BennettBuilder(m).build(); }

BennettMachine bennett_transform(const Machine& m) {
  if (m.tape_count() != 1) {
    throw MachineError("bennett_transform takes a 1-tape machine; '" + m.name + "' has " +
                       std::to_string(m.tape_count()) + " tapes");
  }
  return bennett_transform_multi(m);
}

Configuration bennett_initial(const BennettMachine& bm, const Configuration& source_start) {
  Configuration c;
  c.state = bm.machine.start;
  c.tapes = source_start.tapes;
  c.heads = source_start.heads;
  c.tapes.resize(bm.source_tapes + 2);
  c.heads.resize(bm.source_tapes + 2, 0);
  c.steps = 0;
  c.normalize();
  return c;
}

ReverseResult run_reverse(const Machine& m, const Configuration& final, std::uint64_t budget) {
  Executable inv(invert(m));
  Configuration c = final;
  c.steps = 0;
  ReverseResult result;
  const std::uint64_t limit = std::min(budget, final.steps);
  result.outcome = inv.run(c, limit);
  if (c.steps == final.steps) result.outcome = Outcome::Halted;  // back at step 0
  result.steps = c.steps;
  c.steps = final.steps >= result.steps ? final.steps - result.steps : 0;
  c.normalize();
  result.configuration = std::move(c);
  return result;
}

ReverseResult run_reverse(const BennettMachine& bm, const Configuration& final, std::uint64_t budget) {
  return run_reverse(bm.machine, final, budget);
}

}  // namespace revtm
