#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "revtm/machine_format.hpp"

namespace revtm {

struct CorpusSource {
  std::string name;
  std::string text;
};

/// Machine files bundled from corpus/ at build time.
const std::vector<CorpusSource>& corpus_sources();
std::string_view corpus_expectations_text();

struct CorpusMachine {
  std::string name;
  ParsedMachine parsed;
  Machine quadruple;  // normalized form
  bool quintuple = false;
  /// 4-tape program/aux/work/output layout run through run_prefix.
  bool prefix = false;
};

const std::vector<CorpusMachine>& corpus();
const CorpusMachine& corpus_machine(std::string_view name);

struct CorpusExpectation {
  std::string machine;
  std::string input;
  bool halts = true;
  std::string output;
};

std::vector<CorpusExpectation> corpus_expectations();

}  // namespace revtm
