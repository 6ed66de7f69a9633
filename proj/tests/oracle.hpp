#pragma once

// Ledger-free brute force over every bit string of length <= L, computing the
// complexity and depth values straight from their definitions. Shares nothing
// with DepthLab except the universal machine itself.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "revtm/prefix.hpp"

namespace oracle {

using revtm::Bits;

struct Run {
  revtm::PrefixRunResult gen;
  revtm::PrefixRunResult rev;
  bool restored = false;
};

struct Best {
  std::uint64_t steps;
  Bits program;
};

class BruteForce {
 public:
  BruteForce(const revtm::UniversalMachine& u, std::size_t max_len, std::uint64_t budget) : max_len_(max_len) {
    // Plain nested loops instead of all_bit_strings, so the enumeration is independent too.
    for (std::size_t len = 0; len <= max_len; ++len) {
      for (unsigned long v = 0; v < (1ul << len); ++v) {
        Bits p;
        for (std::size_t i = len; i-- > 0;) p.push_back((v >> i) & 1 ? '1' : '0');
        Run r;
        r.gen = u.run(p, "", budget);
        auto rv = u.run_reversible(p, "", budget);
        r.rev = rv.run;
        r.restored = rv.restored;
        runs_.emplace(p, r);
      }
    }
  }

  bool halts_as_program(const Bits& p) const {
    const auto& r = runs_.at(p).gen;
    return r.outcome == revtm::PrefixOutcome::Halted && r.program == p;
  }

  std::optional<std::size_t> k(const Bits& x) const {
    std::optional<std::size_t> best;
    for (const auto& [p, r] : runs_) {
      if (halts_as_program(p) && r.gen.output == x && (!best || p.size() < *best)) best = p.size();
    }
    return best;
  }

  std::vector<Bits> witnesses(const Bits& x) const {
    std::vector<Bits> out;
    auto kx = k(x);
    if (!kx) return out;
    for (const auto& [p, r] : runs_) {
      if (p.size() == *kx && halts_as_program(p) && r.gen.output == x) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::optional<Best> ld_general(const Bits& x, std::size_t b) const {
    std::optional<Best> best;
    for (const auto& [p, r] : runs_) {
      if (!halts_as_program(p) || r.gen.output != x) continue;
      std::size_t kp = k(p).value_or(max_len_ + 1);
      if (p.size() > kp + b) continue;
      consider(best, r.gen.steps, p);
    }
    return best;
  }

  std::optional<Best> ld_reversible(const Bits& x, std::size_t b) const {
    auto kx = k(x);
    if (!kx) return std::nullopt;
    std::optional<Best> best;
    for (const auto& [p, r] : runs_) {
      if (p.size() > *kx + b) continue;
      if (r.rev.outcome != revtm::PrefixOutcome::Halted || r.rev.program != p || !r.restored) continue;
      if (r.rev.output != x) continue;
      consider(best, r.rev.steps, p);
    }
    return best;
  }

 private:
  static void consider(std::optional<Best>& best, std::uint64_t steps, const Bits& p) {
    auto key = [](std::uint64_t s, const Bits& q) { return std::make_tuple(s, q.size(), q); };
    if (!best || key(steps, p) < key(best->steps, best->program)) best = Best{steps, p};
  }

  std::size_t max_len_;
  std::map<Bits, Run> runs_;
};

}  // namespace oracle
