#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "revtm/bits.hpp"
#include "revtm/machine.hpp"
#include "revtm/reversibility.hpp"

namespace revtm {

// Prefix machines have four tapes: program (read-only, never moves left, cell 0
// holds '$'), auxiliary (read-only), work, and output.
inline constexpr std::size_t kProgramTape = 0;
inline constexpr std::size_t kAuxTape = 1;
inline constexpr std::size_t kWorkTape = 2;
inline constexpr std::size_t kOutputTape = 3;

/// One-way read-only program stream. The cursor counts bits consumed.
class ProgramTape {
 public:
  explicit ProgramTape(Bits bits) : bits_(std::move(bits)) {}
  bool exhausted() const { return cursor_ >= bits_.size(); }
  char read() { return bits_.at(cursor_++); }
  std::size_t cursor() const { return cursor_; }
  Bits consumed() const { return bits_.substr(0, cursor_); }
  Bits rest() const { return bits_.substr(cursor_); }
  const Bits& bits() const { return bits_; }

 private:
  Bits bits_;
  std::size_t cursor_ = 0;
};

enum class PrefixOutcome { Halted, BudgetExceeded, TapeExhausted };

std::string to_string(PrefixOutcome o);

struct PrefixRunResult {
  PrefixOutcome outcome = PrefixOutcome::Halted;
  Bits program;  // bits scanned; on Halted this is the program
  Bits output;  // empty unless Halted
  std::uint64_t steps = 0;
  /// Set when the run is known never to halt (malformed index or the canonical diverger).
  bool diverges = false;

  bool operator==(const PrefixRunResult&) const = default;
};

/// A U_rev run: `run.program` and `run.output` form the pair (p, x).
struct ReversiblePrefixRunResult {
  PrefixRunResult run;
  /// Program, auxiliary and work tapes back in their initial state with a blank history.
  bool restored = false;
};

bool is_prefix_machine(const Machine& m);
void require_prefix_machine(const Machine& m);
Configuration prefix_initial(const Machine& m, const Bits& bits, const Bits& aux);

PrefixRunResult run_prefix(const Machine& m, const Bits& bits, const Bits& aux, std::uint64_t budget);

/// Machine index i, carried as its description d (the bijective binary of i).
struct MachineIndex {
  Bits description;

  static MachineIndex from_value(std::uint64_t i) { return {bijective_binary(i)}; }
  std::optional<std::uint64_t> value() const { return bijective_value(description); }
  /// <i>: the self-delimiting program prefix selecting this machine.
  Bits encoding() const { return self_delimit(description); }
  bool operator==(const MachineIndex&) const = default;
};

/// Raw table encoding of any machine (docs/formats.md).
Bits serialize_machine(const Machine& m);
std::optional<Machine> deserialize_machine(const Bits& table);
/// "1" + serialize_machine(m).
MachineIndex serialize_index(const Machine& m);

/// 4-tape machine with a single self-loop shift rule.
Machine canonical_diverger();
bool is_canonical_diverger(const Machine& m);
/// 4-tape machine with no rules.
Machine halting_machine();

/// The built-in catalog selected by descriptions "0" + bij(c).
const std::vector<Machine>& catalog();
MachineIndex catalog_index(std::size_t c);

/// Decodes a description. Malformed descriptions give the canonical diverger.
Machine enumerate_machine(const MachineIndex& index);
Machine enumerate_machine(std::uint64_t i);

/// Reference universal prefix machine U and its reversible emulation U_rev.
class UniversalMachine {
 public:
  UniversalMachine();

  const std::string& digest() const { return digest_; }

  PrefixRunResult run(const Bits& bits, const Bits& aux, std::uint64_t budget) const;
  ReversiblePrefixRunResult run_reversible(const Bits& bits, const Bits& aux, std::uint64_t budget) const;

  struct Resolved {
    Machine machine;
    bool runnable = false;  // a prefix machine other than the canonical diverger
    std::unique_ptr<Executable> exe;
    mutable std::once_flag bennett_once;
    mutable std::unique_ptr<BennettMachine> bennett;
    mutable std::unique_ptr<Executable> bennett_exe;
  };
  /// Cached decode of a description; thread-safe.
  std::shared_ptr<const Resolved> resolve(const Bits& description) const;
  const Executable& bennett_of(const Resolved& r) const;
  const BennettMachine& bennett_machine_of(const Resolved& r) const;

 private:
  std::string digest_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Bits, std::shared_ptr<const Resolved>> cache_;
};

enum class Variant { General, Reversible };

std::string to_string(Variant v);

/// Resumable universal run, used by the dovetailer to hand out step slices.
class UniversalSession {
 public:
  UniversalSession(const UniversalMachine& u, Variant variant, Bits bits, Bits aux);

  /// Runs until the step counter reaches `limit` or the run finishes.
  void advance(std::uint64_t limit);
  bool finished() const { return phase_ == Phase::Done; }
  std::uint64_t steps() const { return steps_; }
  /// Final result, treating an unfinished run as BudgetExceeded at `budget`.
  PrefixRunResult result(std::uint64_t budget) const;
  bool restored() const { return restored_; }

 private:
  enum class Phase { Decode, Simulate, Undo, Done };

  void finish(PrefixOutcome outcome);
  void start_simulation();

  const UniversalMachine& u_;
  Variant variant_;
  ProgramTape tape_;
  Bits aux_;
  Phase phase_ = Phase::Decode;
  std::uint64_t steps_ = 0;
  Bits pair_;
  Bits description_;
  std::size_t index_bits_ = 0;
  std::size_t undo_left_ = 0;
  std::shared_ptr<const UniversalMachine::Resolved> resolved_;
  const Executable* exe_ = nullptr;
  Configuration config_;
  Configuration start_config_;
  std::uint64_t sim_base_ = 0;
  Bits rest_;
  std::size_t max_head_ = 0;
  PrefixOutcome outcome_ = PrefixOutcome::BudgetExceeded;
  bool diverges_ = false;
  bool restored_ = false;
  Bits output_;
};

using ProgramRunner = std::function<PrefixRunResult(const Bits& bits)>;

struct PrefixCheckReport {
  std::size_t runs = 0;
  std::vector<Bits> programs;  // distinct halting programs, sorted
  std::vector<std::pair<Bits, Bits>> violations;  // (prefix, extension)
  bool prefix_free() const { return violations.empty(); }
};

/// Runs every bit string of length <= max_len and checks that the halting
/// programs form an antichain under the prefix order.
PrefixCheckReport prefix_free_check(std::size_t max_len, const ProgramRunner& runner);
PrefixCheckReport prefix_free_check(const UniversalMachine& u, std::size_t max_len, std::uint64_t budget,
                                    const Bits& aux = {});

/// All bit strings of length <= max_len in (length, lexicographic) order.
std::vector<Bits> all_bit_strings(std::size_t max_len);

}  // namespace revtm
