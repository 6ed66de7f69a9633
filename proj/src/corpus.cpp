#include "revtm/corpus.hpp"

#include <sstream>
#include <stdexcept>

namespace revtm {

namespace {

bool looks_like_prefix_machine(const Machine& m) {
  if (m.tape_count() != 4 || m.output_tape != 3) return false;
  return m.alphabets[0].find("$").has_value();
}

}  // namespace

const std::vector<CorpusMachine>& corpus() {
  static const std::vector<CorpusMachine> machines = [] {
    std::vector<CorpusMachine> out;
    for (const CorpusSource& src : corpus_sources()) {
      CorpusMachine cm;
      cm.name = src.name;
      cm.parsed = parse_machine(src.text);
      cm.quintuple = std::holds_alternative<QuintupleMachine>(cm.parsed);
      cm.quadruple = as_quadruple(cm.parsed);
      cm.prefix = looks_like_prefix_machine(cm.quadruple);
      out.push_back(std::move(cm));
    }
    return out;
  }();
  return machines;
}

const CorpusMachine& corpus_machine(std::string_view name) {
  for (const CorpusMachine& cm : corpus()) {
    if (cm.name == name) return cm;
  }
  throw std::out_of_range("no corpus machine named '" + std::string(name) + "'");
}

std::vector<CorpusExpectation> corpus_expectations() {
  std::vector<CorpusExpectation> out;
  std::istringstream in{std::string(corpus_expectations_text())};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == '\t') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    fields.push_back(cur);
    if (fields.size() != 4) throw std::runtime_error("malformed corpus expectation: " + line);
    out.push_back({fields[0], fields[1], fields[2] == "halted", fields[3]});
  }
  return out;
}

}  // namespace revtm
