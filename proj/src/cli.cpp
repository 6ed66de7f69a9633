#include "revtm/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "revtm/corpus.hpp"
#include "revtm/depth.hpp"
#include "revtm/envelope.hpp"
#include "revtm/machine_format.hpp"
#include "revtm/prefix.hpp"
#include "revtm/reversibility.hpp"

namespace revtm {
namespace {

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// A machine argument: a file path, or corpus:<name> for a bundled machine.
ParsedMachine load_machine_arg(const std::string& arg) {
  if (arg.rfind("corpus:", 0) == 0) {
    try {
      return corpus_machine(arg.substr(7)).parsed;
    } catch (const std::out_of_range&) {
      throw IoError("no corpus machine named '" + arg.substr(7) + "'");
    }
  }
  std::string text = read_file(arg);
  try {
    return parse_machine(text);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), arg + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
  }
}

void require_bits(const std::string& what, const std::string& s) {
  if (!is_bits(s)) throw CLI::ValidationError(what, "'" + s + "' is not a binary string");
}

Variant parse_variant_flag(const std::string& s) { return s == "gen" ? Variant::General : Variant::Reversible; }

struct Options {
  // global
  unsigned workers = 1;
  std::string cache_dir;
  // shared by subcommands
  std::string machine;
  std::string input;
  std::string config;
  std::string output_file;
  std::string aux;
  std::string variant = "gen";
  std::string bits;
  std::string description;
  std::string table;
  std::uint64_t steps = 0;
  std::uint64_t index = 0;
  std::size_t max_len = 0;
  std::size_t b = 0;
  std::size_t n_max = 0;
};

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int main(const std::vector<std::string>& args);

 private:
  void build(CLI::App& app);
  void emit(const std::string& kind, Json payload, std::optional<Budget> budget = std::nullopt,
            std::string digest = {});
  RunLedger* ledger(const UniversalMachine& u);
  DovetailOptions dovetail_options(const UniversalMachine& u) {
    return {std::max(1u, o_.workers), ledger(u)};
  }

  int machine_validate();
  int machine_run(bool trace);
  int rev_verify();
  int rev_compile();
  int rev_reverse();
  int univ_run();
  int univ_enumerate();
  int univ_check_prefix();
  int depth_k();
  int depth_ld();
  int depth_table();

  std::ostream& out_;
  std::ostream& err_;
  Options o_;
  std::function<int()> action_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  std::unique_ptr<RunLedger> ledger_;
};

void Cli::emit(const std::string& kind, Json payload, std::optional<Budget> budget, std::string digest) {
  Envelope e;
  e.kind = kind;
  e.payload = std::move(payload);
  e.budget = budget;
  e.digest = std::move(digest);
  e.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  out_ << e.line() << '\n';
}

RunLedger* Cli::ledger(const UniversalMachine& u) {
  if (!ledger_) {
    std::optional<std::filesystem::path> dir;
    if (!o_.cache_dir.empty()) {
      dir = o_.cache_dir;
    } else {
      dir = cache_dir_from_env();
    }
    try {
      ledger_ = std::make_unique<RunLedger>(u.digest(), dir);
    } catch (const std::filesystem::filesystem_error& e) {
      throw IoError(e.what());
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
  }
  return ledger_.get();
}

void Cli::build(CLI::App& app) {
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--workers", o_.workers, "Worker threads for enumeration")->default_val(1)->check(CLI::Range(1, 256));
  app.add_option("--cache-dir", o_.cache_dir, "Run ledger directory (default: $REVTM_CACHE_DIR, else none)");

  auto machine_arg = [&](CLI::App* c) {
    c->add_option("machine", o_.machine, "Machine file, or corpus:<name>")->required();
  };
  // Subcommands share option storage, so defaults are applied when one is selected.
  auto budget_opt = [&](CLI::App* c, std::uint64_t def) {
    c->add_option("--budget", o_.steps, "Step budget [" + std::to_string(def) + "]");
    c->preparse_callback([this, def](std::size_t) { o_.steps = def; });
  };
  auto variant_opt = [&](CLI::App* c, const std::string& def, const std::string& help) {
    c->add_option("--variant", o_.variant, help + " [" + def + "]")->check(CLI::IsMember({"gen", "rev"}));
    c->preparse_callback([this, def](std::size_t) { o_.variant = def; });
  };

  auto* machine = app.add_subcommand("machine", "Parse, check and run machines");
  machine->require_subcommand(1);
  {
    auto* c = machine->add_subcommand("validate", "Check structure and forward determinism");
    machine_arg(c);
    c->callback([&] { action_ = [&] { return machine_validate(); }; });
  }
  for (bool trace : {false, true}) {
    auto* c = machine->add_subcommand(trace ? "trace" : "run",
                                      trace ? "Run and record every configuration" : "Run on an input");
    machine_arg(c);
    c->add_option("input", o_.input, "Input written on tape 1, one character per symbol")->default_val("");
    budget_opt(c, trace ? 1000 : 1000000);
    c->callback([&, trace] { action_ = [&, trace] { return machine_run(trace); }; });
  }

  auto* rev = app.add_subcommand("rev", "Reversibility checks and the Bennett construction");
  rev->require_subcommand(1);
  {
    auto* c = rev->add_subcommand("verify", "Check backward determinism");
    machine_arg(c);
    c->callback([&] { action_ = [&] { return rev_verify(); }; });
  }
  {
    auto* c = rev->add_subcommand("compile", "Build the reversible compute/copy/retrace machine");
    machine_arg(c);
    c->add_option("-o,--output", o_.output_file, "Write the machine text to this file");
    c->callback([&] { action_ = [&] { return rev_compile(); }; });
  }
  {
    auto* c = rev->add_subcommand("reverse", "Run a reversible machine backwards from a configuration");
    machine_arg(c);
    c->add_option("--config", o_.config, "Configuration file to start from")->required();
    budget_opt(c, 1000000);
    c->callback([&] { action_ = [&] { return rev_reverse(); }; });
  }

  auto* univ = app.add_subcommand("univ", "The universal prefix machine");
  univ->require_subcommand(1);
  {
    auto* c = univ->add_subcommand("run", "Run a program on U or U_rev");
    c->add_option("program", o_.bits, "Program bits")->required();
    c->add_option("--aux", o_.aux, "Auxiliary input bits")->default_val("");
    variant_opt(c, "gen", "gen (U) or rev (U_rev)");
    budget_opt(c, 10000);
    c->callback([&] { action_ = [&] { return univ_run(); }; });
  }
  {
    auto* c = univ->add_subcommand("enumerate", "Decode a machine index");
    auto* idx = c->add_option("index", o_.index, "Machine index i");
    auto* desc = c->add_option("--description", o_.description, "Description bits d instead of i");
    idx->excludes(desc);
    c->callback([&] { action_ = [&] { return univ_enumerate(); }; });
  }
  {
    auto* c = univ->add_subcommand("check-prefix", "Check that halting programs form a prefix-free set");
    c->add_option("--max-len", o_.max_len, "Longest bit string run")->required();
    c->add_option("--budget", o_.steps, "Step budget")->required();
    c->add_option("--aux", o_.aux, "Auxiliary input bits")->default_val("");
    c->callback([&] { action_ = [&] { return univ_check_prefix(); }; });
  }

  auto* depth = app.add_subcommand("depth", "Budget-bounded complexity and logical depth");
  depth->require_subcommand(1);
  auto bounds = [&](CLI::App* c) {
    c->add_option("--max-len", o_.max_len, "Longest program length L (required)")->required()->check(
        CLI::Range(0, 24));
    c->add_option("--budget", o_.steps, "Steps per run D (required)")->required();
  };
  {
    auto* c = depth->add_subcommand("k", "Shortest programs for x");
    c->add_option("x", o_.bits, "Target string")->required();
    c->add_option("--aux", o_.aux, "Auxiliary input bits")->default_val("");
    bounds(c);
    c->callback([&] { action_ = [&] { return depth_k(); }; });
  }
  {
    auto* c = depth->add_subcommand("ld", "Logical depth at significance b");
    c->add_option("x", o_.bits, "Target string")->required();
    c->add_option("--b", o_.b, "Significance level")->default_val(0);
    variant_opt(c, "rev", "gen or rev");
    bounds(c);
    c->callback([&] { action_ = [&] { return depth_ld(); }; });
  }
  {
    auto* c = depth->add_subcommand("table", "Growth tables psi, phi and f");
    c->add_option("table", o_.table, "psi, phi or f")->required()->check(CLI::IsMember({"psi", "phi", "f"}));
    c->add_option("--n-max", o_.n_max, "Largest string length")->default_val(3);
    variant_opt(c, "rev", "Variant for f: rev or gen");
    bounds(c);
    c->callback([&] { action_ = [&] { return depth_table(); }; });
  }
}

int Cli::main(const std::vector<std::string>& args) {
  CLI::App app{"Reversible Turing machines, universal prefix machines and budgeted logical depth", "revtm"};
  build(app);
  if (args.empty()) {
    err_ << app.help();
    return kExitUsage;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out_ << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out_ << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err_ << "revtm: " << e.what() << "\n";
    err_ << "run 'revtm --help' for usage\n";
    return kExitUsage;
  }
  try {
    int code = action_();
    if (ledger_) ledger_->flush();
    return code;
  } catch (const CLI::ValidationError& e) {
    err_ << "revtm: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err_ << "revtm: parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotReversibleError& e) {
    err_ << "revtm: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const MachineError& e) {
    err_ << "revtm: invalid machine: " << e.what();
    if (e.rule()) err_ << " (rule " << *e.rule() + 1 << ")";
    err_ << "\n";
    return kExitInvalid;
  } catch (const IoError& e) {
    err_ << "revtm: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err_ << "revtm: " << e.what() << "\n";
    return kExitUsage;
  }
}

// ---------------------------------------------------------------------------

int Cli::machine_validate() {
  Machine m = as_quadruple(load_machine_arg(o_.machine));
  ValidationReport r = validate_machine(m);
  emit("validation", to_json(r, m));
  return r.deterministic() ? kExitOk : kExitInvalid;
}

int Cli::machine_run(bool trace) {
  Machine m = as_quadruple(load_machine_arg(o_.machine));
  ValidationReport v = validate_machine(m);
  if (!v.deterministic()) throw MachineError("machine is not deterministic", v.conflicts.front().second);
  Executable exe(m);
  Configuration c = initial_configuration(m, encode_input(m, o_.input));
  Json steps = Json::array();
  if (trace) steps.push_back(to_json(c, m));
  Outcome outcome = Outcome::Halted;
  while (exe.applicable(c)) {
    if (c.steps >= o_.steps) {
      outcome = Outcome::BudgetExceeded;
      break;
    }
    exe.step(c);
    if (trace) steps.push_back(to_json(c, m));
  }
  Json payload{{"machine", m.name},
               {"input", o_.input},
               {"outcome", outcome == Outcome::Halted ? "halted" : "budget_exceeded"},
               {"steps", c.steps},
               {"output", tape_output(m, c, m.output_tape)}};
  if (trace) {
    payload["trace"] = std::move(steps);
  } else {
    payload["final"] = to_json(c, m);
    payload["final_text"] = format_configuration(m, c);
  }
  emit(trace ? "trace" : "run", std::move(payload), Budget{0, o_.steps});
  return kExitOk;
}

int Cli::rev_verify() {
  Machine m = as_quadruple(load_machine_arg(o_.machine));
  ReversibilityReport r = verify_reversible(m);
  ValidationReport v = validate_machine(m);
  Json conflicts = Json::array();
  for (const RulePair& p : r.conflicts) conflicts.push_back(Json::array({p.first + 1, p.second + 1}));
  emit("reversibility", Json{{"machine", m.name},
                             {"reversible", r.reversible()},
                             {"deterministic", v.deterministic()},
                             {"range_conflicts", std::move(conflicts)}});
  return r.reversible() && v.deterministic() ? kExitOk : kExitInvalid;
}

int Cli::rev_compile() {
  Machine m = as_quadruple(load_machine_arg(o_.machine));
  BennettMachine bm = bennett_transform_multi(m);
  std::string text = format_machine(bm.machine);
  Json payload{{"source", m.name},
               {"source_digest", bm.source_digest},
               {"digest", machine_digest(bm.machine)},
               {"tapes", bm.machine.tape_count()},
               {"states", bm.machine.states.size()},
               {"rules", bm.machine.rules.size()},
               {"history_tape", bm.history_tape + 1},
               {"output_tape", bm.output_tape + 1}};
  if (!o_.output_file.empty()) {
    std::ofstream f(o_.output_file);
    if (!(f << text)) throw IoError("cannot write '" + o_.output_file + "'");
    payload["written"] = o_.output_file;
  } else {
    payload["machine"] = text;
  }
  emit("compile", std::move(payload));
  return kExitOk;
}

int Cli::rev_reverse() {
  Machine m = as_quadruple(load_machine_arg(o_.machine));
  Configuration c = parse_configuration(m, read_file(o_.config));
  ReverseResult r = run_reverse(m, c, o_.steps);
  emit("reverse", Json{{"machine", m.name},
                       {"outcome", r.outcome == Outcome::Halted ? "halted" : "budget_exceeded"},
                       {"reverse_steps", r.steps},
                       {"configuration", to_json(r.configuration, m)},
                       {"text", format_configuration(m, r.configuration)}},
       Budget{0, o_.steps});
  return kExitOk;
}

int Cli::univ_run() {
  require_bits("program", o_.bits);
  require_bits("--aux", o_.aux);
  UniversalMachine u;
  Json payload;
  if (parse_variant_flag(o_.variant) == Variant::General) {
    payload = to_json(u.run(o_.bits, o_.aux, o_.steps));
  } else {
    ReversiblePrefixRunResult r = u.run_reversible(o_.bits, o_.aux, o_.steps);
    payload = to_json(r.run);
    payload["restored"] = r.restored;
  }
  payload["variant"] = o_.variant;
  payload["aux"] = o_.aux;
  emit("universal_run", std::move(payload), Budget{o_.bits.size(), o_.steps}, u.digest());
  return kExitOk;
}

int Cli::univ_enumerate() {
  UniversalMachine u;
  MachineIndex idx;
  if (!o_.description.empty()) {
    require_bits("--description", o_.description);
    idx.description = o_.description;
  } else {
    idx = MachineIndex::from_value(o_.index);
  }
  Machine m = enumerate_machine(idx);
  auto value = idx.value();
  emit("enumerate", Json{{"index", value ? Json(*value) : Json(nullptr)},
                         {"description", idx.description},
                         {"encoding", idx.encoding()},
                         {"diverger", is_canonical_diverger(m)},
                         {"prefix_machine", is_prefix_machine(m)},
                         {"machine", format_machine(m)}},
       std::nullopt, u.digest());
  return kExitOk;
}

int Cli::univ_check_prefix() {
  require_bits("--aux", o_.aux);
  UniversalMachine u;
  std::vector<Bits> strings = all_bit_strings(o_.max_len);
  auto runs = dovetail(u, Variant::General, strings, o_.aux, o_.steps, dovetail_options(u));
  std::size_t i = 0;
  PrefixCheckReport r = prefix_free_check(o_.max_len, [&](const Bits&) { return runs[i++].run; });
  Json violations = Json::array();
  for (const auto& [p, q] : r.violations) violations.push_back(Json::array({p, q}));
  emit("prefix_check", Json{{"runs", r.runs},
                            {"halting_programs", r.programs.size()},
                            {"prefix_free", r.prefix_free()},
                            {"violations", std::move(violations)}},
       Budget{o_.max_len, o_.steps}, u.digest());
  return r.prefix_free() ? kExitOk : kExitInvalid;
}

int Cli::depth_k() {
  require_bits("x", o_.bits);
  require_bits("--aux", o_.aux);
  UniversalMachine u;
  DepthLab lab(u, {o_.max_len, o_.steps}, o_.aux, dovetail_options(u));
  ComplexityRecord r = lab.k_bounded(o_.bits);
  emit("complexity", to_json(r), lab.budget(), u.digest());
  return r.found() ? kExitOk : kExitNoWitness;
}

int Cli::depth_ld() {
  require_bits("x", o_.bits);
  UniversalMachine u;
  DepthLab lab(u, {o_.max_len, o_.steps}, {}, dovetail_options(u));
  DepthRecord r = lab.logical_depth(o_.bits, o_.b, parse_variant_flag(o_.variant));
  emit("depth", to_json(r), lab.budget(), u.digest());
  return r.found() ? kExitOk : kExitNoWitness;
}

int Cli::depth_table() {
  UniversalMachine u;
  DepthLab lab(u, {o_.max_len, o_.steps}, {}, dovetail_options(u));
  GrowthTable t = o_.table == "psi"   ? lab.psi_table(o_.n_max)
                  : o_.table == "phi" ? lab.phi_table(o_.n_max)
                                      : lab.f_table(o_.n_max, parse_variant_flag(o_.variant));
  emit("table", to_json(t), lab.budget(), u.digest());
  bool conclusive = std::all_of(t.rows.begin(), t.rows.end(), [](const GrowthRow& r) { return r.conclusive; });
  return conclusive ? kExitOk : kExitNoWitness;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  return cli.main(args);
}

}  // namespace revtm
