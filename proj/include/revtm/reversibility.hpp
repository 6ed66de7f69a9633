#pragma once

#include <string>
#include <vector>

#include "revtm/machine.hpp"

namespace revtm {

struct ReversibilityReport {
  std::vector<RulePair> conflicts;  // rules with overlapping ranges
  bool reversible() const { return conflicts.empty(); }
};

/// Backward-determinism check on rule ranges. Throws MachineError on malformed input.
ReversibilityReport verify_reversible(const Machine& m);

class NotReversibleError : public std::runtime_error {
 public:
  NotReversibleError(const std::string& what, std::vector<RulePair> conflicts)
      : std::runtime_error(what), conflicts_(std::move(conflicts)) {}
  const std::vector<RulePair>& conflicts() const { return conflicts_; }

 private:
  std::vector<RulePair> conflicts_;
};

/// Swaps the direction of every rule. Refuses machines that are not reversible.
Machine invert(const Machine& m);

enum class Stage { Compute, Copy, Retrace };

struct BennettMachine {
  Machine machine;
  std::string source_digest;
  std::vector<Stage> stage_of_state;  // indexed by state id
  std::size_t source_tapes = 1;       // source tapes keep their positions
  std::size_t history_tape = 1;
  std::size_t output_tape = 2;
  /// Source alphabet sizes; symbols at or above this index on a tape are the marked variants.
  std::vector<std::size_t> source_alphabet_sizes;
};

/// Bennett's compute/copy/retrace construction for a 1-tape quadruple machine.
/// The result has tapes (work, history, output).
BennettMachine bennett_transform(const Machine& m);

/// Same construction for any tape count; history and output tapes are appended
/// after the source tapes, and the source's output tape is the one copied.
BennettMachine bennett_transform_multi(const Machine& m);

/// Lays a source start configuration onto the Bennett machine's tapes.
Configuration bennett_initial(const BennettMachine& bm, const Configuration& source_start);

struct ReverseResult {
  Outcome outcome = Outcome::Halted;
  Configuration configuration;
  std::uint64_t steps = 0;  // reverse steps taken
};

/// Runs invert(m) from `final` for at most final.steps steps (back to step 0),
/// or `budget` steps if that is smaller.
ReverseResult run_reverse(const Machine& m, const Configuration& final, std::uint64_t budget);
ReverseResult run_reverse(const BennettMachine& bm, const Configuration& final, std::uint64_t budget);

/// Analytic step bound of the construction:
/// steps_rev <= kSourceFactor*steps_src + kSizeFactor*(|input|+|output|) + kConstant.
struct BennettBound {
  static constexpr std::uint64_t kSourceFactor = 16;
  static constexpr std::uint64_t kSizeFactor = 6;
  static constexpr std::uint64_t kConstant = 12;

  static std::uint64_t limit(std::uint64_t source_steps, std::uint64_t sizes) {
    return kSourceFactor * source_steps + kSizeFactor * sizes + kConstant;
  }
};

std::string machine_digest(const Machine& m);

}  // namespace revtm
