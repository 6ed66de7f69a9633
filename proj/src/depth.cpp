#include "revtm/depth.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace revtm {

// ---------------------------------------------------------------------------
// Ledger.

namespace {

std::string field(const Bits& b) { return b.empty() ? "-" : b; }
Bits unfield(const std::string& s) { return s == "-" ? Bits{} : s; }

std::optional<PrefixOutcome> parse_outcome(const std::string& s) {
  for (auto o : {PrefixOutcome::Halted, PrefixOutcome::BudgetExceeded, PrefixOutcome::TapeExhausted}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

std::optional<Variant> parse_variant(const std::string& s) {
  if (s == "gen") return Variant::General;
  if (s == "rev") return Variant::Reversible;
  return std::nullopt;
}

constexpr const char* kLedgerHeader = "# revtm run ledger v1";

}  // namespace

RunLedger::RunLedger(std::string digest, std::optional<std::filesystem::path> dir) : digest_(std::move(digest)) {
  if (dir) {
    std::filesystem::create_directories(*dir);
    file_ = *dir / ("ledger-" + digest_ + ".tsv");
    load();
  }
}

RunLedger::~RunLedger() {
  try {
    flush();
  } catch (...) {
  }
}

std::string RunLedger::key(Variant v, const Bits& bits, const Bits& aux, std::uint64_t budget) {
  return to_string(v) + '|' + bits + '|' + aux + '|' + std::to_string(budget);
}

std::optional<LedgerEntry> RunLedger::find(Variant v, const Bits& bits, const Bits& aux,
                                           std::uint64_t budget) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key(v, bits, aux, budget));
  if (it == entries_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return it->second;
}

void RunLedger::store(Variant v, const Bits& bits, const Bits& aux, std::uint64_t budget, const LedgerEntry& e) {
  std::unique_lock lock(mutex_);
  auto [it, inserted] = entries_.emplace(key(v, bits, aux, budget), e);
  if (!inserted) return;
  if (!file_) return;
  const PrefixRunResult& r = e.run;
  std::ostringstream line;
  line << to_string(v) << '\t' << field(bits) << '\t' << field(aux) << '\t' << budget << '\t' << to_string(r.outcome)
       << '\t' << field(r.program) << '\t' << field(r.output) << '\t' << r.steps << '\t' << r.diverges << '\t'
       << e.restored;
  pending_.push_back(line.str());
}

std::size_t RunLedger::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void RunLedger::load() {
  std::ifstream in(*file_);
  if (!in) return;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, '\t');) cols.push_back(c);
    auto bad = [&] {
      return std::runtime_error(file_->string() + ":" + std::to_string(lineno) + ": malformed ledger line");
    };
    if (cols.size() != 10) throw bad();
    auto v = parse_variant(cols[0]);
    auto o = parse_outcome(cols[4]);
    if (!v || !o) throw bad();
    LedgerEntry e;
    try {
      e.run.outcome = *o;
      e.run.program = unfield(cols[5]);
      e.run.output = unfield(cols[6]);
      e.run.steps = std::stoull(cols[7]);
      e.run.diverges = cols[8] == "1";
      e.restored = cols[9] == "1";
      entries_.emplace(key(*v, unfield(cols[1]), unfield(cols[2]), std::stoull(cols[3])), e);
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
}

void RunLedger::flush() {
  std::unique_lock lock(mutex_);
  if (!file_ || pending_.empty()) return;
  bool fresh = !std::filesystem::exists(*file_);
  std::ofstream out(*file_, std::ios::app);
  if (!out) throw std::runtime_error("cannot write ledger " + file_->string());
  if (fresh) out << kLedgerHeader << ' ' << digest_ << '\n';
  for (const std::string& l : pending_) out << l << '\n';
  if (!out) throw std::runtime_error("cannot write ledger " + file_->string());
  pending_.clear();
}

std::optional<std::filesystem::path> cache_dir_from_env() {
  const char* dir = std::getenv("REVTM_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

// ---------------------------------------------------------------------------
// Dovetailing.

std::vector<LedgerEntry> dovetail(const UniversalMachine& u, Variant v, const std::vector<Bits>& programs,
                                  const Bits& aux, std::uint64_t budget, const DovetailOptions& opts) {
  std::vector<LedgerEntry> out(programs.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < programs.size(); ++i) {
    if (opts.ledger) {
      if (auto hit = opts.ledger->find(v, programs[i], aux, budget)) {
        out[i] = *hit;
        continue;
      }
    }
    todo.push_back(i);
  }
  if (todo.empty()) return out;

  const std::size_t workers = std::clamp<std::size_t>(opts.workers, 1, todo.size());
  auto work = [&](std::size_t w) {
    struct Slot {
      std::size_t index;
      std::unique_ptr<UniversalSession> session;
    };
    std::vector<Slot> live;
    for (std::size_t k = w; k < todo.size(); k += workers) {
      live.push_back({todo[k], std::make_unique<UniversalSession>(u, v, programs[todo[k]], aux)});
    }
    std::uint64_t slice = std::max<std::uint64_t>(1, opts.first_slice);
    while (!live.empty()) {
      const std::uint64_t limit = std::min(budget, slice);
      for (Slot& s : live) s.session->advance(limit);
      std::erase_if(live, [&](Slot& s) {
        if (!s.session->finished() && limit < budget) return false;
        out[s.index] = {s.session->result(budget), s.session->restored()};
        return true;
      });
      slice = slice > budget / 2 ? budget : slice * 2;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  if (opts.ledger) {
    for (std::size_t i : todo) opts.ledger->store(v, programs[i], aux, budget, out[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Census-backed computations.

std::size_t string_rank(const Bits& s) {
  std::size_t value = 0;
  for (char c : s) value = value * 2 + (c == '1');
  return ((std::size_t{1} << s.size()) - 1) + value;
}

std::string to_string(TableKind k) {
  switch (k) {
    case TableKind::Psi: return "psi";
    case TableKind::Phi: return "phi";
    case TableKind::F: return "f";
  }
  return "?";
}

struct DepthLab::Census {
  std::vector<std::optional<LedgerEntry>> runs;  // by string rank
  // Output -> ranks of programs that halt on exactly themselves, ascending.
  std::unordered_map<Bits, std::vector<std::size_t>> by_output;
};

namespace {

bool completes(const LedgerEntry& e, const Bits& bits, Variant v) {
  return e.run.outcome == PrefixOutcome::Halted && e.run.program == bits &&
         (v == Variant::General || e.restored);
}

bool by_steps_then_string(const Candidate& a, const Candidate& b) {
  if (a.steps != b.steps) return a.steps < b.steps;
  if (a.program.size() != b.program.size()) return a.program.size() < b.program.size();
  return a.program < b.program;
}

}  // namespace

DepthLab::DepthLab(const UniversalMachine& u, Budget budget, Bits aux, DovetailOptions opts)
    : u_(u), budget_(budget), aux_(std::move(aux)), opts_(opts) {
  if (!is_bits(aux_)) throw std::invalid_argument("aux must be a binary string");
  if (budget_.max_len > 24) throw std::invalid_argument("max program length above 24 is not supported");
  strings_ = all_bit_strings(budget_.max_len);
}

const DepthLab::Census& DepthLab::general() const {
  std::call_once(general_once_, [&] {
    auto c = std::make_shared<Census>();
    auto runs = dovetail(u_, Variant::General, strings_, aux_, budget_.steps, opts_);
    c->runs.resize(strings_.size());
    for (std::size_t i = 0; i < strings_.size(); ++i) {
      if (completes(runs[i], strings_[i], Variant::General)) c->by_output[runs[i].run.output].push_back(i);
      c->runs[i] = std::move(runs[i]);
    }
    general_ = std::move(c);
  });
  return *general_;
}

const DepthLab::Census& DepthLab::reversible() const {
  std::call_once(reversible_once_, [&] {
    // A string that does not halt on U as a program cannot do so on U_rev,
    // which scans the program tape the same way.
    const Census& g = general();
    std::vector<std::size_t> ranks;
    std::vector<Bits> programs;
    for (const auto& [x, list] : g.by_output) {
      for (std::size_t r : list) ranks.push_back(r);
    }
    std::sort(ranks.begin(), ranks.end());
    for (std::size_t r : ranks) programs.push_back(strings_[r]);
    auto runs = dovetail(u_, Variant::Reversible, programs, aux_, budget_.steps, opts_);
    auto c = std::make_shared<Census>();
    c->runs.resize(strings_.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      if (completes(runs[i], programs[i], Variant::Reversible)) c->by_output[runs[i].run.output].push_back(ranks[i]);
      c->runs[ranks[i]] = std::move(runs[i]);
    }
    reversible_ = std::move(c);
  });
  return *reversible_;
}

const LedgerEntry& DepthLab::general_run(const Bits& bits) const {
  if (bits.size() > budget_.max_len) throw std::out_of_range("string longer than the census bound");
  return *general().runs[string_rank(bits)];
}

const LedgerEntry* DepthLab::reversible_run(const Bits& bits) const {
  if (bits.size() > budget_.max_len) throw std::out_of_range("string longer than the census bound");
  const auto& e = reversible().runs[string_rank(bits)];
  return e ? &*e : nullptr;
}

ComplexityRecord DepthLab::k_bounded(const Bits& x) const {
  if (!is_bits(x)) throw std::invalid_argument("x must be a binary string");
  const Census& g = general();
  ComplexityRecord rec;
  rec.x = x;
  rec.aux = aux_;
  rec.budget = budget_;
  auto it = g.by_output.find(x);
  if (it == g.by_output.end()) return rec;
  const std::size_t k = strings_[it->second.front()].size();
  rec.k_upper = k;
  for (std::size_t r : it->second) {
    if (strings_[r].size() != k) break;
    rec.witnesses.push_back(strings_[r]);
  }
  // Every string shorter than k was run to a halt or to D.
  rec.exhaustive = true;
  for (std::size_t r = 0; r < strings_.size() && strings_[r].size() < k; ++r) {
    const PrefixRunResult& run = g.runs[r]->run;
    if (run.outcome == PrefixOutcome::BudgetExceeded && !run.diverges) ++rec.undecided;
  }
  return rec;
}

std::vector<Bits> DepthLab::shortest_programs(const Bits& x) const { return k_bounded(x).witnesses; }

std::vector<Candidate> DepthLab::incompressible_programs(const Bits& x, std::size_t b) const {
  const Census& g = general();
  std::vector<Candidate> out;
  auto it = g.by_output.find(x);
  if (it == g.by_output.end()) return out;
  for (std::size_t r : it->second) {
    const Bits& p = strings_[r];
    ComplexityRecord nested = k_bounded(p);
    Candidate c;
    c.program = p;
    c.steps = g.runs[r]->run.steps;
    c.nested_found = nested.found();
    c.nested_k = nested.found() ? *nested.k_upper : budget_.max_len + 1;
    if (p.size() <= c.nested_k + b) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), by_steps_then_string);
  return out;
}

std::vector<Candidate> DepthLab::reversible_candidates(const Bits& x, std::size_t b) const {
  std::vector<Candidate> out;
  ComplexityRecord k = k_bounded(x);
  if (!k.found()) return out;
  const Census& rv = reversible();
  auto it = rv.by_output.find(x);
  if (it == rv.by_output.end()) return out;
  for (std::size_t r : it->second) {
    const Bits& p = strings_[r];
    if (p.size() > *k.k_upper + b) continue;
    Candidate c;
    c.program = p;
    c.steps = rv.runs[r]->run.steps;
    c.nested_k = *k.k_upper;
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), by_steps_then_string);
  return out;
}

DepthRecord DepthLab::logical_depth(const Bits& x, std::size_t b, Variant v) const {
  DepthRecord rec;
  rec.x = x;
  rec.b = b;
  rec.variant = v;
  rec.budget = budget_;
  ComplexityRecord k = k_bounded(x);
  rec.k_upper = k.k_upper;
  std::vector<Candidate> cands = v == Variant::General ? incompressible_programs(x, b) : reversible_candidates(x, b);
  rec.candidates = cands.size();
  for (const Candidate& c : cands) rec.nested_fallback = rec.nested_fallback || !c.nested_found;
  if (cands.empty()) return rec;
  rec.ld = cands.front().steps;
  rec.witness = cands.front().program;
  rec.exhaustive = v == Variant::General ? true : *k.k_upper + b <= budget_.max_len;
  return rec;
}

DepthRecord DepthLab::logical_depth_general(const Bits& x, std::size_t b) const {
  return logical_depth(x, b, Variant::General);
}

DepthRecord DepthLab::logical_depth_reversible(const Bits& x, std::size_t b) const {
  return logical_depth(x, b, Variant::Reversible);
}

GrowthTable DepthLab::min_steps_table(std::size_t n_max, Variant v) const {
  const Census& c = v == Variant::General ? general() : reversible();
  GrowthTable t;
  t.kind = v == Variant::General ? TableKind::Phi : TableKind::Psi;
  t.variant = v;
  t.budget = budget_;
  for (std::size_t n = 0; n <= n_max; ++n) {
    GrowthRow row;
    row.n = n;
    row.conclusive = true;
    bool any = false;
    for (const Bits& x : all_bit_strings(n)) {
      if (x.size() != n) continue;
      auto it = c.by_output.find(x);
      if (it == c.by_output.end()) {
        row.conclusive = false;
        continue;
      }
      const std::size_t r = it->second.front();  // canonical shortest program
      const auto steps = static_cast<std::int64_t>(c.runs[r]->run.steps);
      if (!any || steps > row.value) {
        row.value = steps;
        row.x = x;
        row.program = strings_[r];
        any = true;
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

GrowthTable DepthLab::psi_table(std::size_t n_max) const { return min_steps_table(n_max, Variant::Reversible); }

GrowthTable DepthLab::phi_table(std::size_t n_max) const { return min_steps_table(n_max, Variant::General); }

GrowthTable DepthLab::f_table(std::size_t n_max, Variant v) const {
  GrowthTable t;
  t.kind = TableKind::F;
  t.variant = v;
  t.budget = budget_;
  for (std::size_t n = 0; n <= n_max; ++n) {
    GrowthRow row;
    row.n = n;
    row.conclusive = true;
    bool any = false;
    for (const Bits& x : all_bit_strings(n)) {
      if (x.size() != n) continue;
      DepthRecord next = logical_depth(x, 0, v);
      for (std::size_t b = 0; b <= n; ++b) {
        DepthRecord cur = std::move(next);
        next = logical_depth(x, b + 1, v);
        if (!cur.found() || !next.found()) {
          row.conclusive = false;
          continue;
        }
        const auto diff = static_cast<std::int64_t>(*cur.ld) - static_cast<std::int64_t>(*next.ld);
        if (!any || diff > row.value) {
          row.value = diff;
          row.x = x;
          row.b = b;
          row.program = cur.witness;
          any = true;
        }
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace revtm
