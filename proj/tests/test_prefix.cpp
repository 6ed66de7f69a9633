#include <random>

#include "doctest.h"
#include "revtm/corpus.hpp"
#include "revtm/prefix.hpp"
#include "revtm/reversibility.hpp"

using namespace revtm;

namespace {

const UniversalMachine& universal() {
  static const UniversalMachine u;
  return u;
}

Bits random_bits(std::mt19937& rng, std::size_t len) {
  Bits b;
  for (std::size_t i = 0; i < len; ++i) b.push_back(rng() % 2 ? '1' : '0');
  return b;
}

}  // namespace

TEST_CASE("raw tables round-trip") {
  for (const CorpusMachine& cm : corpus()) {
    CAPTURE(cm.name);
    const Machine& m = cm.quadruple;
    auto back = deserialize_machine(serialize_machine(m));
    REQUIRE(back.has_value());
    CHECK(back->rules == m.rules);
    CHECK(back->states.size() == m.states.size());
    CHECK(back->start == m.start);
    CHECK(back->halt_states == m.halt_states);
    CHECK(back->output_tape == m.output_tape);
    for (std::size_t t = 0; t < m.tape_count(); ++t) CHECK(back->alphabets[t].symbols == m.alphabets[t].symbols);
    Bits table = serialize_machine(m);
    CHECK_FALSE(deserialize_machine(table + "0").has_value());
    CHECK_FALSE(deserialize_machine(table.substr(0, table.size() - 1)).has_value());
  }
}

TEST_CASE("descriptions decode to catalog, raw or diverger") {
  CHECK(catalog().size() == 4);
  CHECK(catalog_index(0).encoding() == "0001");
  CHECK(catalog_index(1).encoding() == "000001");
  CHECK(catalog_index(2).encoding() == "001101");
  CHECK(catalog_index(3).encoding() == "00000001");
  CHECK(is_canonical_diverger(enumerate_machine(MachineIndex{""})));
  CHECK(is_canonical_diverger(enumerate_machine(MachineIndex{"0" + bijective_binary(9)})));
  CHECK(enumerate_machine(MachineIndex{"1"}).rules.empty());
  CHECK(MachineIndex{"1"}.encoding() == "1101");
  CHECK(enumerate_machine(catalog_index(1)).name == "repeat");
  CHECK(MachineIndex::from_value(5).description == "10");
  CHECK(MachineIndex{"10"}.value() == 5);
  Machine flipper4 = corpus_machine("copy3").quadruple;
  CHECK(enumerate_machine(serialize_index(flipper4)).rules == flipper4.rules);
}

TEST_CASE("U runs a catalog machine on the rest of the program") {
  std::mt19937 rng(3);
  for (std::size_t c = 0; c < catalog().size(); ++c) {
    Bits enc = catalog_index(c).encoding();
    for (int trial = 0; trial < 60; ++trial) {
      Bits rest = random_bits(rng, trial % 10);
      Bits aux = random_bits(rng, trial % 4);
      PrefixRunResult direct = run_prefix(catalog()[c], rest, aux, 20000);
      PrefixRunResult viaU = universal().run(enc + rest, aux, 20000 + enc.size());
      CAPTURE(enc + rest);
      CHECK(viaU.outcome == direct.outcome);
      if (direct.outcome == PrefixOutcome::BudgetExceeded) continue;
      CHECK(viaU.program == enc + direct.program);
      CHECK(viaU.output == direct.output);
      CHECK(viaU.steps == enc.size() + direct.steps);
    }
  }
}

TEST_CASE("malformed and exhausted programs") {
  const UniversalMachine& u = universal();
  PrefixRunResult bad = u.run("10", "", 500);
  CHECK(bad.outcome == PrefixOutcome::BudgetExceeded);
  CHECK(bad.diverges);
  CHECK(bad.steps == 500);
  PrefixRunResult empty_desc = u.run("01", "", 500);
  CHECK(empty_desc.diverges);
  CHECK(u.run("00", "", 500).outcome == PrefixOutcome::TapeExhausted);
  CHECK(u.run("", "", 500).outcome == PrefixOutcome::TapeExhausted);
  PrefixRunResult h = u.run("1101", "", 500);
  CHECK(h.outcome == PrefixOutcome::Halted);
  CHECK(h.steps == 4);
  CHECK(h.output.empty());
  // print with an extra trailing bit still halts after scanning its program only
  PrefixRunResult p = u.run("0001000110", "", 500);
  CHECK(p.outcome == PrefixOutcome::Halted);
  CHECK(p.program == "000100011");
  CHECK(p.output == "1");
  CHECK(u.run("00010001", "", 500).outcome == PrefixOutcome::TapeExhausted);
}

TEST_CASE("echo_aux copies the auxiliary input") {
  PrefixRunResult r = universal().run("001101", "0110", 1000);
  CHECK(r.outcome == PrefixOutcome::Halted);
  CHECK(r.output == "0110");
}

TEST_CASE("sliced sessions equal one-shot runs") {
  std::mt19937 rng(11);
  for (Variant v : {Variant::General, Variant::Reversible}) {
    for (const Bits& p : {Bits("00000101110"), Bits("0001110110"), Bits("1101"), Bits("0001100"), Bits("10")}) {
      CAPTURE(p);
      UniversalSession one(universal(), v, p, "");
      one.advance(100000);
      UniversalSession sliced(universal(), v, p, "");
      std::uint64_t limit = 0;
      while (!sliced.finished() && limit < 100000) {
        limit = std::min<std::uint64_t>(100000, limit + 1 + rng() % 37);
        sliced.advance(limit);
      }
      CHECK(one.result(100000) == sliced.result(100000));
      CHECK(one.restored() == sliced.restored());
    }
  }
}

TEST_CASE("U_rev pairs the program with the output of U") {
  const UniversalMachine& u = universal();
  for (const Bits& p : {Bits("1101"), Bits("00000100"), Bits("000001011110"), Bits("0001110101"),
                        Bits("00000001101"), Bits("001101")}) {
    CAPTURE(p);
    PrefixRunResult g = u.run(p, "", 100000);
    ReversiblePrefixRunResult r = u.run_reversible(p, "", 1000000);
    CHECK(r.run.outcome == PrefixOutcome::Halted);
    CHECK(r.restored);
    CHECK(r.run.program == g.program);
    CHECK(r.run.output == g.output);
    CHECK(r.run.steps > g.steps);
  }
}

TEST_CASE("prefix-freeness and its negative control") {
  PrefixCheckReport ok = prefix_free_check(universal(), 10, 10000);
  CHECK(ok.prefix_free());
  CHECK(ok.runs == 2047);
  CHECK(std::find(ok.programs.begin(), ok.programs.end(), "1101") != ok.programs.end());

  // A runner that also reports running off the end as halting is not prefix-free.
  PrefixCheckReport bad = prefix_free_check(10, [&](const Bits& b) {
    PrefixRunResult r = universal().run(b, "", 10000);
    if (r.outcome == PrefixOutcome::TapeExhausted) r.outcome = PrefixOutcome::Halted;
    return r;
  });
  CHECK_FALSE(bad.prefix_free());
}

TEST_CASE("U digest is stable") {
  CHECK(UniversalMachine().digest() == universal().digest());
  CHECK(universal().digest().size() == 64);
}
