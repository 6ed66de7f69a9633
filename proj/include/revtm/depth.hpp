#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "revtm/bits.hpp"
#include "revtm/prefix.hpp"

namespace revtm {

struct Budget {
  std::size_t max_len = 0;    // L: longest program run
  std::uint64_t steps = 0;    // D: steps per run

  bool operator==(const Budget&) const = default;
};

/// One universal run as stored in the ledger.
struct LedgerEntry {
  PrefixRunResult run;
  bool restored = false;  // reversible runs only

  bool operator==(const LedgerEntry&) const = default;
};

/// Cache of universal runs keyed by (variant, program bits, aux, D) for one
/// universal machine digest. Optionally persisted as
/// `<dir>/ledger-<digest>.tsv`.
class RunLedger {
 public:
  explicit RunLedger(std::string digest, std::optional<std::filesystem::path> dir = std::nullopt);
  ~RunLedger();
  RunLedger(const RunLedger&) = delete;
  RunLedger& operator=(const RunLedger&) = delete;

  const std::string& digest() const { return digest_; }
  std::optional<LedgerEntry> find(Variant v, const Bits& bits, const Bits& aux, std::uint64_t budget) const;
  void store(Variant v, const Bits& bits, const Bits& aux, std::uint64_t budget, const LedgerEntry& e);
  /// Appends entries added since the last flush to the ledger file.
  void flush();

  std::size_t size() const;
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }
  std::optional<std::filesystem::path> file() const { return file_; }

 private:
  static std::string key(Variant v, const Bits& bits, const Bits& aux, std::uint64_t budget);
  void load();

  std::string digest_;
  std::optional<std::filesystem::path> file_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, LedgerEntry> entries_;
  std::vector<std::string> pending_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
};

/// Cache directory from $REVTM_CACHE_DIR, if set.
std::optional<std::filesystem::path> cache_dir_from_env();

struct DovetailOptions {
  unsigned workers = 1;
  RunLedger* ledger = nullptr;
  std::uint64_t first_slice = 64;  // steps granted in the first round, doubled each round
};

/// Runs every program for up to `budget` steps, interleaving step slices
/// round-robin. Results are in the order of `programs` and equal sequential runs.
std::vector<LedgerEntry> dovetail(const UniversalMachine& u, Variant v, const std::vector<Bits>& programs,
                                  const Bits& aux, std::uint64_t budget, const DovetailOptions& opts = {});

struct ComplexityRecord {
  Bits x;
  Bits aux;
  std::optional<std::size_t> k_upper;  // empty: NoWitness
  std::vector<Bits> witnesses;         // every halting program of length k_upper with output x
  Budget budget;
  bool exhaustive = false;
  /// Shorter strings stopped by the budget with no divergence certificate.
  std::size_t undecided = 0;

  bool found() const { return k_upper.has_value(); }
  bool operator==(const ComplexityRecord&) const = default;
};

struct DepthRecord {
  Bits x;
  std::size_t b = 0;
  Variant variant = Variant::General;
  Budget budget;
  std::optional<std::uint64_t> ld;  // empty: NoWitness
  Bits witness;
  std::optional<std::size_t> k_upper;  // of x
  std::size_t candidates = 0;          // programs passing the length test
  bool exhaustive = false;
  /// General variant: some candidate had no nested witness, so L+1 stood in for its K.
  bool nested_fallback = false;

  bool found() const { return ld.has_value(); }
  bool operator==(const DepthRecord&) const = default;
};

/// A program admitted at significance b, with its halting step count.
struct Candidate {
  Bits program;
  std::uint64_t steps = 0;
  std::size_t nested_k = 0;   // K estimate of the program (general variant)
  bool nested_found = true;

  bool operator==(const Candidate&) const = default;
};

enum class TableKind { Psi, Phi, F };
std::string to_string(TableKind k);

struct GrowthRow {
  std::size_t n = 0;
  bool conclusive = false;
  std::int64_t value = 0;
  Bits x;
  std::optional<std::size_t> b;  // F tables only
  Bits program;

  bool operator==(const GrowthRow&) const = default;
};

struct GrowthTable {
  TableKind kind = TableKind::Psi;
  Variant variant = Variant::Reversible;
  Budget budget;
  std::vector<GrowthRow> rows;

  bool operator==(const GrowthTable&) const = default;
};

/// Budget-relative complexity and depth computations over one run census:
/// every bit string of length <= L run on U, and the U-halting ones on U_rev.
class DepthLab {
 public:
  DepthLab(const UniversalMachine& u, Budget budget, Bits aux = {}, DovetailOptions opts = {});

  const Budget& budget() const { return budget_; }
  const Bits& aux() const { return aux_; }

  ComplexityRecord k_bounded(const Bits& x) const;
  std::vector<Bits> shortest_programs(const Bits& x) const;
  /// Halting programs for x with |p| <= K(p) + b, K(p) estimated from the census.
  std::vector<Candidate> incompressible_programs(const Bits& x, std::size_t b) const;
  /// U_rev programs for x, restoring their input, with |p| <= k_upper(x) + b.
  std::vector<Candidate> reversible_candidates(const Bits& x, std::size_t b) const;
  DepthRecord logical_depth_general(const Bits& x, std::size_t b) const;
  DepthRecord logical_depth_reversible(const Bits& x, std::size_t b) const;
  DepthRecord logical_depth(const Bits& x, std::size_t b, Variant v) const;

  GrowthTable psi_table(std::size_t n_max) const;
  GrowthTable phi_table(std::size_t n_max) const;
  GrowthTable f_table(std::size_t n_max, Variant v = Variant::Reversible) const;

  /// Census entry for a string of length <= L.
  const LedgerEntry& general_run(const Bits& bits) const;
  const LedgerEntry* reversible_run(const Bits& bits) const;

 private:
  struct Census;
  const Census& general() const;
  const Census& reversible() const;
  GrowthTable min_steps_table(std::size_t n_max, Variant v) const;

  const UniversalMachine& u_;
  Budget budget_;
  Bits aux_;
  DovetailOptions opts_;
  std::vector<Bits> strings_;
  mutable std::once_flag general_once_, reversible_once_;
  mutable std::shared_ptr<Census> general_, reversible_;
};

/// Index of a bit string in (length, lexicographic) order.
std::size_t string_rank(const Bits& s);

}  // namespace revtm
