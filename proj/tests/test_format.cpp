#include "doctest.h"
#include "revtm/corpus.hpp"
#include "revtm/machine_format.hpp"

using namespace revtm;

TEST_CASE("format and parse round-trip every corpus machine") {
  for (const CorpusMachine& cm : corpus()) {
    CAPTURE(cm.name);
    std::string text = std::visit([](const auto& m) { return format_machine(m); }, cm.parsed);
    ParsedMachine again = parse_machine(text);
    CHECK(as_quadruple(again).rules == cm.quadruple.rules);
    CHECK(as_quadruple(again).states == cm.quadruple.states);
    CHECK(std::visit([](const auto& m) { return format_machine(m); }, again) == text);
  }
}

TEST_CASE("wildcards expand over the alphabet") {
  Machine m = as_quadruple(parse_machine(
      "machine w\ntapes 2\nalphabet 1 _ 0 1\nalphabet 2 _ a\nstart s\nhalt h\n"
      "s *,a -> *,_ h\n"));
  CHECK(m.rules.size() == 3);
  for (const Rule& r : m.rules) {
    CHECK(r.read[0] == r.write[0]);
    CHECK(r.write[1] == kBlank);
  }
}

TEST_CASE("parse errors report the line") {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_machine(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("machine m\ntapes 1\nalphabet 1 _ 0\nstart q\nq 0 -> 0\n") == 5);
  CHECK(line_of("machine m\ntapes 1\nalphabet 1 _ 0\nstart q\nq 2 -> 0 q\n") == 5);
  CHECK(line_of("machine m\nalphabet 1 _ 0\n") == 2);
  CHECK(line_of("machine m\ntapes 1\nalphabet 1 _ 0\nstart q\nq / -> +2 q\n") == 5);
  CHECK(line_of("machine m\ntapes 1\nalphabet 1 _ 0 0\n") == 3);
  CHECK(line_of("machine m\ntapes 1\nalphabet 1 _ 0\nform quintuple\nstart q\nq / -> +1 q\n") == 6);
}

TEST_CASE("configuration text round-trips") {
  const Machine& m = corpus_machine("flipper").quadruple;
  Configuration c = initial_configuration(m, encode_input(m, "1011"));
  Executable(m).run(c, 3);
  std::string text = format_configuration(m, c);
  Configuration back = parse_configuration(m, text);
  CHECK(back.same_as(c));
  CHECK(back.steps == c.steps);
  CHECK_THROWS_AS(parse_configuration(m, "config x\nstate nowhere\n"), ParseError);
}
