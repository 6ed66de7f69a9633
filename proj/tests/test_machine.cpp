#include <random>

#include "doctest.h"
#include "revtm/corpus.hpp"
#include "revtm/machine.hpp"
#include "revtm/machine_format.hpp"
#include "revtm/prefix.hpp"

using namespace revtm;

namespace {

// Pairwise domain overlap straight from the definition.
std::vector<RulePair> naive_domain_conflicts(const Machine& m) {
  std::vector<RulePair> out;
  for (std::size_t i = 0; i < m.rules.size(); ++i) {
    for (std::size_t j = i + 1; j < m.rules.size(); ++j) {
      const Rule& a = m.rules[i];
      const Rule& b = m.rules[j];
      if (a.from != b.from) continue;
      bool overlap = a.kind == RuleKind::Shift || b.kind == RuleKind::Shift || a.read == b.read;
      if (overlap) out.push_back({i, j});
    }
  }
  return out;
}

Machine random_machine(std::mt19937& rng, std::size_t tapes) {
  Machine m;
  m.name = "random";
  for (std::size_t t = 0; t < tapes; ++t) m.alphabets.push_back(Alphabet{{"_", "0", "1"}});
  m.states = {"a", "b", "c"};
  std::uniform_int_distribution<int> sym(0, 2), st(0, 2), sh(-1, 1), kind(0, 3);
  for (int r = 0; r < 6; ++r) {
    if (kind(rng) == 0) {
      std::vector<int> s;
      for (std::size_t t = 0; t < tapes; ++t) s.push_back(sh(rng));
      m.rules.push_back(Rule::shift_rule(st(rng), s, st(rng)));
    } else {
      std::vector<Symbol> rd, wr;
      for (std::size_t t = 0; t < tapes; ++t) {
        rd.push_back(sym(rng));
        wr.push_back(sym(rng));
      }
      m.rules.push_back(Rule::read_write(st(rng), rd, wr, st(rng)));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("validate_machine agrees with the pairwise oracle") {
  for (const CorpusMachine& cm : corpus()) {
    CAPTURE(cm.name);
    auto r = validate_machine(cm.quadruple);
    CHECK(r.conflicts == naive_domain_conflicts(cm.quadruple));
    CHECK(r.deterministic());
  }
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    Machine m = random_machine(rng, 1 + i % 2);
    CHECK(validate_machine(m).conflicts == naive_domain_conflicts(m));
  }
}

TEST_CASE("structural errors carry the rule index") {
  Machine m;
  m.alphabets = {Alphabet{{"_", "1"}}};
  m.states = {"a"};
  m.rules.push_back(Rule::read_write(0, {1}, {1}, 0));
  m.rules.push_back(Rule::read_write(0, {5}, {1}, 0));
  try {
    validate_machine(m);
    FAIL("expected MachineError");
  } catch (const MachineError& e) {
    CHECK(e.rule() == 1);
  }
}

TEST_CASE("flipper hand trace") {
  const Machine& m = corpus_machine("flipper").quadruple;
  Configuration c = initial_configuration(m, encode_input(m, "10"));
  // read-write on cell 0, shift, read-write on cell 1, shift, halt on blank
  std::vector<std::size_t> heads;
  while (true) {
    StepOutcome s = step(m, c);
    if (s.halted) break;
    c = s.next;
    heads.push_back(c.heads[0]);
  }
  CHECK(heads == std::vector<std::size_t>{0, 1, 1, 2});
  CHECK(tape_output(m, c, 0) == "01");
  CHECK(c.steps == 4);
}

TEST_CASE("left shift at cell 0 keeps the head in place") {
  Machine m;
  m.alphabets = {Alphabet{{"_", "1"}}};
  m.states = {"a", "b"};
  m.halt_states = {1};
  m.rules.push_back(Rule::shift_rule(0, {-1}, 1));
  RunResult r = run(m, "1", 10);
  CHECK(r.outcome == Outcome::Halted);
  CHECK(r.final.heads[0] == 0);
  CHECK(r.steps == 1);
}

TEST_CASE("halting is checked before the budget") {
  const Machine& m = corpus_machine("flipper").quadruple;
  CHECK(run(m, "10", 4).outcome == Outcome::Halted);
  CHECK(run(m, "10", 3).outcome == Outcome::BudgetExceeded);
  CHECK(run(m, "10", 3).steps == 3);
  CHECK(run(corpus_machine("diverger").quadruple, "", 1000000).outcome == Outcome::BudgetExceeded);
}

TEST_CASE("Executable and the reference step agree") {
  for (const CorpusExpectation& e : corpus_expectations()) {
    const CorpusMachine& cm = corpus_machine(e.machine);
    if (cm.prefix) continue;
    CAPTURE(e.machine);
    Configuration a = initial_configuration(cm.quadruple, encode_input(cm.quadruple, e.input));
    Configuration b = a;
    Executable exe(cm.quadruple);
    for (int i = 0; i < 300; ++i) {
      StepOutcome s = step(cm.quadruple, a);
      bool moved = exe.step(b);
      CHECK(moved == !s.halted);
      if (s.halted) break;
      a = s.next;
      CHECK(a.same_as(b));
    }
  }
}

TEST_CASE("corpus expectations hold") {
  auto expectations = corpus_expectations();
  CHECK(corpus().size() >= 20);
  for (const CorpusExpectation& e : expectations) {
    const CorpusMachine& cm = corpus_machine(e.machine);
    CAPTURE(e.machine);
    CAPTURE(e.input);
    if (cm.prefix) {
      auto r = run_prefix(cm.quadruple, e.input, "", 100000);
      CHECK((r.outcome == PrefixOutcome::Halted) == e.halts);
      if (e.halts) CHECK(r.output == e.output);
    } else {
      auto r = run(cm.quadruple, e.input, 100000);
      CHECK((r.outcome == Outcome::Halted) == e.halts);
      if (e.halts) CHECK(r.output == e.output);
    }
  }
}

TEST_CASE("quintuple machines normalize to equivalent quadruple machines") {
  for (const CorpusMachine& cm : corpus()) {
    if (!cm.quintuple) continue;
    CAPTURE(cm.name);
    const auto& m5 = std::get<QuintupleMachine>(cm.parsed);
    const auto& syms = m5.alphabets[0].symbols;
    const std::size_t k = syms.size() - 1;
    for (std::size_t len = 0; len <= 5; ++len) {
      std::size_t count = 1;
      for (std::size_t i = 0; i < len; ++i) count *= k;
      for (std::size_t v = 0; v < count; ++v) {
        std::string in;
        for (std::size_t i = 0, r = v; i < len; ++i, r /= k) in += syms[1 + r % k];
        RunResult a = run_quintuple(m5, in, 10000);
        RunResult b = run(cm.quadruple, in, 20000);
        CHECK(a.outcome == b.outcome);
        CHECK(a.output == b.output);
        if (a.outcome == Outcome::Halted) CHECK(b.steps == 2 * a.steps);
      }
    }
  }
}
