#include "doctest.h"
#include "revtm/corpus.hpp"
#include "revtm/machine_format.hpp"
#include "revtm/prefix.hpp"
#include "revtm/reversibility.hpp"

using namespace revtm;

namespace {

// Pairwise range overlap from the definition: a shift rule's range is every
// configuration in its target state; read-write ranges overlap when target
// state and written tuple coincide.
std::vector<RulePair> naive_range_conflicts(const Machine& m) {
  std::vector<RulePair> out;
  for (std::size_t i = 0; i < m.rules.size(); ++i) {
    for (std::size_t j = i + 1; j < m.rules.size(); ++j) {
      const Rule& a = m.rules[i];
      const Rule& b = m.rules[j];
      if (a.to != b.to) continue;
      if (a.kind == RuleKind::Shift || b.kind == RuleKind::Shift || a.write == b.write) out.push_back({i, j});
    }
  }
  return out;
}

Configuration start_of(const CorpusMachine& cm, const std::string& input) {
  return cm.prefix ? prefix_initial(cm.quadruple, input, "")
                   : initial_configuration(cm.quadruple, encode_input(cm.quadruple, input));
}

}  // namespace

TEST_CASE("verify_reversible agrees with the pairwise oracle") {
  for (const CorpusMachine& cm : corpus()) {
    CAPTURE(cm.name);
    CHECK(verify_reversible(cm.quadruple).conflicts == naive_range_conflicts(cm.quadruple));
  }
  CHECK_FALSE(verify_reversible(corpus_machine("eraser").quadruple).reversible());
  CHECK(verify_reversible(corpus_machine("flipper").quadruple).reversible());
}

TEST_CASE("invert refuses irreversible machines") {
  CHECK_THROWS_AS(invert(corpus_machine("eraser").quadruple), NotReversibleError);
  Machine inv = invert(corpus_machine("flipper").quadruple);
  CHECK(validate_machine(inv).deterministic());
  CHECK(verify_reversible(inv).reversible());
}

TEST_CASE("single-tape Bennett machine on flipper") {
  BennettMachine bm = bennett_transform(corpus_machine("flipper").quadruple);
  CHECK(bm.machine.tape_count() == 3);
  CHECK(validate_machine(bm.machine).deterministic());
  CHECK(verify_reversible(bm.machine).reversible());
  const Machine& src = corpus_machine("flipper").quadruple;
  Configuration c = bennett_initial(bm, initial_configuration(src, encode_input(src, "110")));
  Executable exe(bm.machine);
  CHECK(exe.run(c, 10000) == Outcome::Halted);
  c.normalize();
  CHECK(bm.machine.states[c.state] == "done");
  CHECK(tape_output(bm.machine, c, bm.output_tape) == "001");
  CHECK(tape_output(bm.machine, c, 0) == "110");
  CHECK(c.tapes[bm.history_tape].empty());
  CHECK_THROWS(bennett_transform(corpus_machine("copy3").quadruple));
}

TEST_CASE("Bennett machines restore their source tapes") {
  for (const CorpusExpectation& e : corpus_expectations()) {
    if (!e.halts) continue;
    const CorpusMachine& cm = corpus_machine(e.machine);
    CAPTURE(e.machine);
    BennettMachine bm = bennett_transform_multi(cm.quadruple);
    CHECK(verify_reversible(bm.machine).reversible());
    CHECK(validate_machine(bm.machine).deterministic());
    Configuration src = start_of(cm, e.input);
    Configuration c = bennett_initial(bm, src);
    CHECK(Executable(bm.machine).run(c, 1000000) == Outcome::Halted);
    c.normalize();
    src.normalize();
    for (std::size_t t = 0; t < bm.source_tapes; ++t) {
      CHECK(c.tapes[t] == src.tapes[t]);
      CHECK(c.heads[t] == 0);
    }
    CHECK(tape_output(bm.machine, c, bm.output_tape) == e.output);
  }
}

TEST_CASE("reverse runs undo forward runs") {
  const Machine& m = corpus_machine("flipper").quadruple;
  Configuration start = initial_configuration(m, encode_input(m, "0110"));
  RunResult fwd = run(Executable(m), start, 100);
  ReverseResult back = run_reverse(m, fwd.final, fwd.steps);
  CHECK(back.steps == fwd.steps);
  CHECK(back.configuration.same_as(start));
  CHECK(back.configuration.steps == 0);
}

TEST_CASE("machine digests are stable and distinguish machines") {
  CHECK(machine_digest(corpus_machine("flipper").quadruple) ==
        machine_digest(as_quadruple(parse_machine(format_machine(corpus_machine("flipper").quadruple)))));
  CHECK(machine_digest(corpus_machine("flipper").quadruple) != machine_digest(corpus_machine("zeroer").quadruple));
}
