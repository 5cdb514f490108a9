#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "ideaminer/config.hpp"
#include "ideaminer/error.hpp"
#include "ideaminer/io.hpp"
#include "ideaminer/phase_log.hpp"
#include "ideaminer/pipeline.hpp"
#include "ideaminer/rng.hpp"

using namespace ideaminer;
namespace fs = std::filesystem;

namespace {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("ideaminer_" + name + "_" + std::to_string(Rng(std::hash<std::string>{}(name)).next() % 100000))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// 30 documents per year over 2010-2015 drawn from a rising safety theme and
// a stable sensing theme.
void write_fixture(const fs::path& dir) {
  const std::vector<std::string> safety = {"pedestrian", "collision", "crash", "injury", "warning", "braking"};
  const std::vector<std::string> sensing = {"lidar", "radar", "camera", "fusion", "calibration", "detection"};
  Rng rng(42);
  std::ofstream out(dir / "records.csv");
  out << "Authors,Title,Year,Source title,DOI,Abstract\n";
  int serial = 0;
  for (int year = 2010; year <= 2015; ++year) {
    for (int d = 0; d < 30; ++d, ++serial) {
      const bool safety_doc = d % 2 == 0;
      std::string abstract;
      for (int i = 0; i < 25; ++i) {
        const bool pick_safety = (rng.uniform() < 0.8) == safety_doc;
        const auto& theme = pick_safety ? safety : sensing;
        // "pedestrian" gains weight over the years within the safety theme.
        size_t w = rng.index(theme.size());
        if (pick_safety && rng.uniform() < 0.05 * (year - 2009)) w = 0;
        abstract += (i ? " " : "") + theme[w];
      }
      out << "A. Author," << "Study " << serial << " of " << (safety_doc ? "safety" : "sensing") << "," << year
          << ",Journal,10.1000/fx." << serial << "," << abstract << "\n";
    }
  }
}

std::string fixture_config(const fs::path& out) {
  return "goals = test goals\n"
         "input = records.csv\n"
         "min_doc_count = 5\n"
         "k_candidates = 2,3\n"
         "lda_iterations = 40\n"
         "dtm_max_em_iters = 4\n"
         "horizon_years = 2\n"
         "seed = 99\n"
         "out = " + out.string() + "\n";
}

config::PipelineConfig make_config(const TempDir& dir, const fs::path& out, const config::Overrides& overrides = {}) {
  write_fixture(dir.path());
  return config::parse_config(fixture_config(out), dir.path(), {}, overrides);
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = io::read_file(e.path());
  }
  return files;
}

const report::PhaseEntry& entry_of(const fs::path& out, const std::string& sub) {
  static report::PhaseLog log;
  log = report::PhaseLog::from_json(io::read_file(out / pipeline::kPhaseLogFile));
  const auto* e = log.last_of(sub);
  REQUIRE(e != nullptr);
  return *e;
}

}  // namespace

TEST_CASE("config: seed, unknown keys, ranges and overrides") {
  const fs::path base = "/tmp";
  CHECK_THROWS_WITH_AS(config::parse_config("input = a.csv\n", base), doctest::Contains("no seed"), Error);
  CHECK_THROWS_WITH_AS(config::parse_config("seed = 1\ninput = a.csv\nbogus = 3\n", base),
                       doctest::Contains("bogus"), Error);
  CHECK_THROWS_AS(config::parse_config("seed = 1\ninput = a.csv\nseed = 2\n", base), Error);
  CHECK_THROWS_AS(config::parse_config("seed = 1\n", base), Error);
  CHECK_THROWS_AS(config::parse_config("seed = 1\ninput = a.csv\nmin_r = 1.5\n", base), Error);
  CHECK_THROWS_AS(config::parse_config("seed = 1\ninput = a.csv\nk_candidates = 1,2\n", base), Error);
  CHECK_THROWS_AS(config::parse_config("seed = 1\ninput = a.csv\nfrom_year = 2020\nto_year = 2010\n", base), Error);
  CHECK_THROWS_AS(config::parse_config("seed = 1\ninput = a.csv\nmode = lemma\n", base), Error);
  CHECK_THROWS_AS(config::parse_config("seed = 1\ninput = a.csv\ndtm_k = 1\n", base), Error);

  const auto c = config::parse_config("# comment\nseed = 7\ninput = a.csv, b.csv\nmin_doc_count = 4\n", base);
  CHECK(c.seed == 7);
  CHECK(c.inputs == std::vector<fs::path>{"/tmp/a.csv", "/tmp/b.csv"});
  CHECK(c.min_doc_count == 4);
  CHECK(c.dtm_chain_variance == 0.005);
  CHECK(c.max_doc_fraction == 0.95);

  config::Environment env = [](const std::string& key) -> std::optional<std::string> {
    if (key == "IDEAMINER_MIN_DOC_COUNT") return "12";
    if (key == "IDEAMINER_FIELD_TITLE") return "Document Title";
    return std::nullopt;
  };
  const auto e = config::parse_config("seed = 7\ninput = a.csv\nmin_doc_count = 4\n", base, env);
  CHECK(e.min_doc_count == 12);
  CHECK(e.field_map.title == "Document Title");
  const auto o = config::parse_config("seed = 7\ninput = a.csv\n", base, env, {{"seed", "8"}, {"min_doc_count", "3"}});
  CHECK(o.seed == 8);
  CHECK(o.min_doc_count == 3);

  const auto defaults = config::default_config_text();
  CHECK(defaults.find("dtm_chain_variance = 0.005") != std::string::npos);
  CHECK(defaults.find("min_doc_count = 100") != std::string::npos);
}

TEST_CASE("canonical config text ignores the output location") {
  const auto a = config::parse_config("seed = 7\ninput = a.csv\nout = x\n", "/tmp/one");
  const auto b = config::parse_config("seed = 7\ninput = a.csv\nout = y\n", "/tmp/two");
  CHECK(config::canonical_text(a) == config::canonical_text(b));
  const auto c = config::parse_config("seed = 8\ninput = a.csv\n", "/tmp/one");
  CHECK(config::canonical_text(a) != config::canonical_text(c));
}

TEST_CASE("select-k before preprocess names preprocess") {
  TempDir dir("order");
  pipeline::Pipeline p(make_config(dir, dir.path() / "out"));
  CHECK_THROWS_WITH_AS(p.select_k(), doctest::Contains("run `ideaminer preprocess` first"), Error);
  CHECK(p.ingest() == pipeline::kExitOk);
  CHECK_THROWS_WITH_AS(p.fit(), doctest::Contains("ideaminer select-k"), Error);
  CHECK_THROWS_WITH_AS(p.report(), doctest::Contains("first"), Error);
}

TEST_CASE("empty vocabulary is a no-go back to data collection") {
  TempDir dir("novocab");
  const fs::path out = dir.path() / "out";
  pipeline::Pipeline p(make_config(dir, out, {{"min_doc_count", "100000"}}));
  CHECK(p.ingest() == pipeline::kExitOk);
  CHECK(p.preprocess() == pipeline::kExitNoGo);
  const auto& e = entry_of(out, "preprocess");
  CHECK_FALSE(e.go);
  REQUIRE(e.back_transition.has_value());
  CHECK(report::phase_name(*e.back_transition) == "Data Collection and Understanding");
  CHECK_THROWS_WITH_AS(p.select_k(), doctest::Contains("no-go"), Error);
  // run halts at the no-go with the same exit code.
  CHECK(p.run() == pipeline::kExitNoGo);
  CHECK_FALSE(fs::exists(out / pipeline::kReportDir));
}

TEST_CASE("fit warnings record the option of returning to data preparation") {
  TempDir dir("fitwarn");
  const fs::path out = dir.path() / "out";
  pipeline::Pipeline p(make_config(dir, out, {{"dtm_max_em_iters", "1"}}));
  CHECK(p.ingest() == pipeline::kExitOk);
  CHECK(p.preprocess() == pipeline::kExitOk);
  CHECK(p.select_k() == pipeline::kExitOk);
  CHECK(p.fit() == pipeline::kExitOk);
  const auto& e = entry_of(out, "fit");
  CHECK(e.go);
  REQUIRE(e.back_transition.has_value());
  CHECK(report::phase_name(*e.back_transition) == "Data Preparation");
}

TEST_CASE("run equals the six subcommands in sequence") {
  TempDir dir("runseq");
  const fs::path a = dir.path() / "a", b = dir.path() / "b";
  auto cfg = make_config(dir, a);
  pipeline::Pipeline whole(cfg);
  CHECK(whole.run() == pipeline::kExitOk);

  cfg.out = b;
  pipeline::Pipeline steps(cfg);
  for (auto sub : report::kSubcommands) CHECK(steps.execute(sub) == pipeline::kExitOk);

  const auto ta = read_tree(a / pipeline::kReportDir);
  const auto tb = read_tree(b / pipeline::kReportDir);
  CHECK(ta.size() >= 10);
  CHECK(ta == tb);
  CHECK(io::read_file(a / pipeline::kPhaseLogFile) == io::read_file(b / pipeline::kPhaseLogFile));

  // Re-running a middle subcommand truncates later entries and keeps order.
  CHECK(steps.preprocess() == pipeline::kExitOk);
  const auto log = report::PhaseLog::from_json(io::read_file(b / pipeline::kPhaseLogFile));
  CHECK(log.last_of("fit") == nullptr);
  CHECK(log.entries().back().subcommand == "preprocess");
  CHECK_THROWS_AS(steps.fit(), Error);

  // No temp files survive the atomic writes.
  for (const auto& e : fs::recursive_directory_iterator(b)) {
    CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
  }
  CHECK_FALSE(fs::exists(b / ".lock"));
}

TEST_CASE("a locked output directory is refused") {
  TempDir dir("lock");
  const fs::path out = dir.path() / "out";
  fs::create_directories(out);
  io::write_file_atomic(out / ".lock", "busy\n");
  pipeline::Pipeline p(make_config(dir, out));
  CHECK_THROWS_WITH_AS(p.ingest(), doctest::Contains("locked"), Error);
  CHECK(fs::exists(out / ".lock"));
  {
    io::DirectoryLock hold(dir.path() / "other");
    CHECK_THROWS_AS(io::DirectoryLock(dir.path() / "other"), Error);
  }
  io::DirectoryLock again(dir.path() / "other");
}

TEST_CASE("atomic writes replace whole files") {
  TempDir dir("atomic");
  const fs::path f = dir.path() / "artifact.json";
  io::write_file_atomic(f, "first version, longer content\n");
  io::write_file_atomic(f, "second\n");
  CHECK(io::read_file(f) == "second\n");
  size_t count = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path())) ++count;
  CHECK(count == 1);
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(io::format_number(0.1) == "0.1");
}
