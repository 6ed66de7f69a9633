#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "revtm/cli.hpp"

using namespace revtm;

namespace {

struct Result {
  int code;
  std::vector<nlohmann::json> lines;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = run_cli(args, out, err);
  std::istringstream in(out.str());
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] == '{') r.lines.push_back(nlohmann::json::parse(line));
  }
  r.err = err.str();
  return r;
}

std::string corpus_file(const char* name) { return std::string(REVTM_SOURCE_DIR) + "/corpus/" + name; }

}  // namespace

TEST_CASE("usage") {
  Result none = cli({});
  CHECK(none.code == kExitUsage);
  CHECK(none.err.find("Usage") != std::string::npos);
  CHECK(cli({"machine", "validate", "x.tm", "--bogus"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"depth", "k", "01", "--budget", "10"}).code == kExitUsage);
  CHECK(cli({"depth", "k", "01", "--max-len", "3"}).code == kExitUsage);
  CHECK(cli({"depth", "k", "0a", "--max-len", "3", "--budget", "5"}).code == kExitUsage);
}

TEST_CASE("machine subcommands") {
  Result v = cli({"machine", "validate", corpus_file("flipper.tm")});
  CHECK(v.code == kExitOk);
  REQUIRE(v.lines.size() == 1);
  CHECK(v.lines[0]["payload"]["conflicts"].empty());
  CHECK(v.lines[0]["tool"] == "revtm");

  Result r = cli({"machine", "run", "corpus:flipper", "10"});
  CHECK(r.code == kExitOk);
  CHECK(r.lines[0]["payload"]["output"] == "01");
  CHECK(r.lines[0]["budget"]["steps"] == 1000000);

  Result t = cli({"machine", "trace", "corpus:flipper", "10"});
  CHECK(t.lines[0]["payload"]["trace"].size() == 5);

  CHECK(cli({"machine", "run", "/nonexistent.tm"}).code == kExitIo);
  CHECK(cli({"machine", "run", "corpus:nope"}).code == kExitIo);
}

TEST_CASE("rev subcommands") {
  CHECK(cli({"rev", "verify", "corpus:flipper"}).code == kExitOk);
  Result bad = cli({"rev", "verify", "corpus:eraser"});
  CHECK(bad.code == kExitInvalid);
  CHECK(bad.lines[0]["payload"]["range_conflicts"].size() == 1);

  auto dir = std::filesystem::temp_directory_path() / "revtm-cli-test";
  std::filesystem::create_directories(dir);
  std::string out = (dir / "flip_rev.tm").string();
  Result c = cli({"rev", "compile", "corpus:flipper", "-o", out});
  CHECK(c.code == kExitOk);
  Result cv = cli({"rev", "verify", out});
  CHECK(cv.code == kExitOk);
  CHECK(cli({"rev", "reverse", "corpus:eraser", "--config", out}).code != kExitOk);

  Result fwd = cli({"machine", "run", "corpus:flipper", "0110"});
  std::string cfg = (dir / "final.cfg").string();
  std::ofstream(cfg) << fwd.lines[0]["payload"]["final_text"].get<std::string>();
  Result back = cli({"rev", "reverse", "corpus:flipper", "--config", cfg});
  CHECK(back.code == kExitOk);
  CHECK(back.lines[0]["payload"]["reverse_steps"] == 8);
  CHECK(back.lines[0]["payload"]["configuration"]["steps"] == 0);
  CHECK(back.lines[0]["payload"]["configuration"]["tapes"][0]["cells"] ==
        nlohmann::json::array({"0", "1", "1", "0"}));
  std::filesystem::remove_all(dir);
}

TEST_CASE("univ subcommands") {
  Result r = cli({"univ", "run", "000100011"});
  CHECK(r.code == kExitOk);
  CHECK(r.lines[0]["payload"]["output"] == "1");
  CHECK(r.lines[0]["digest"].is_string());
  Result rv = cli({"univ", "run", "000100011", "--variant", "rev"});
  CHECK(rv.lines[0]["payload"]["restored"] == true);
  Result e = cli({"univ", "enumerate", "--description", "1"});
  CHECK(e.lines[0]["payload"]["encoding"] == "1101");
  Result p = cli({"univ", "check-prefix", "--max-len", "8", "--budget", "1000"});
  CHECK(p.code == kExitOk);
  CHECK(p.lines[0]["payload"]["prefix_free"] == true);
}

TEST_CASE("depth subcommands") {
  Result ld = cli({"depth", "ld", "101", "--b", "0", "--variant", "rev", "--max-len", "14", "--budget", "100000"});
  CHECK(ld.code == kExitOk);
  REQUIRE(ld.lines.size() == 1);
  CHECK(ld.lines[0]["kind"] == "depth");
  CHECK(ld.lines[0]["payload"]["witness"].is_string());

  Result nw = cli({"depth", "k", "0101", "--max-len", "6", "--budget", "100"});
  CHECK(nw.code == kExitNoWitness);
  CHECK(nw.lines[0]["payload"]["status"] == "no_witness");

  Result a = cli({"depth", "table", "psi", "--n-max", "2", "--max-len", "12", "--budget", "10000"});
  Result b = cli({"--workers", "3", "depth", "table", "psi", "--n-max", "2", "--max-len", "12", "--budget", "10000"});
  CHECK(a.code == kExitOk);
  CHECK(a.lines[0]["payload"] == b.lines[0]["payload"]);
  Result inc = cli({"depth", "table", "phi", "--n-max", "3", "--max-len", "9", "--budget", "10000"});
  CHECK(inc.code == kExitNoWitness);
  CHECK(inc.lines[0]["payload"]["status"] == "inconclusive");
}

TEST_CASE("cache directory from flag") {
  auto dir = std::filesystem::temp_directory_path() / "revtm-cli-cache";
  std::filesystem::remove_all(dir);
  Result a = cli({"--cache-dir", dir.string(), "depth", "k", "0", "--max-len", "8", "--budget", "1000"});
  Result b = cli({"depth", "k", "0", "--max-len", "8", "--budget", "1000", "--cache-dir", dir.string()});
  CHECK(a.lines[0]["payload"] == b.lines[0]["payload"]);
  CHECK(std::filesystem::exists(dir / ("ledger-" + a.lines[0]["digest"].get<std::string>() + ".tsv")));
  std::filesystem::remove_all(dir);
}
