#include "instgen/inst/external_policy.hpp"
#include "instgen/pipeline/attempt.hpp"
#include "instgen/pipeline/coverage.hpp"
#include "instgen/pipeline/loop.hpp"
#include "instgen/pipeline/report.hpp"
#include "instgen/pipeline/split.hpp"
#include "instgen/pipeline/sweep.hpp"
#include "instgen/tptp/cnf.hpp"

#include "../support/replay_check.hpp"
#include "../support/scripted_policy.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <unistd.h>

using namespace instgen;
using namespace instgen::pipeline;
using instgen::testing::replay_defect;
using instgen::testing::ScriptedPolicy;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag)
{
  static int counter = 0;
  auto dir = fs::temp_directory_path() /
             ("instgen_pipeline_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::vector<tptp::Problem>& corpus()
{
  static const auto problems = tptp::load_problems(INSTGEN_CORPUS_DIR);
  return problems;
}

const tptp::Problem& corpus_problem(const std::string& name)
{
  for (const auto& p : corpus()) {
    if (p.name == name) { return p; }
  }
  throw std::out_of_range(name);
}

std::string read_file(const fs::path& path)
{
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Records with the fields that legitimately vary between identical runs cleared.
std::vector<tptp::SolutionRecord> stable(std::vector<tptp::SolutionRecord> records)
{
  for (auto& r : records) {
    r.wall_time_s = 0;
    r.checkpoint.clear();
  }
  return records;
}

std::vector<std::size_t> curve_oracle(const std::vector<tptp::SolutionRecord>& records, int runs)
{
  std::vector<std::size_t> out;
  std::set<std::string> seen;
  for (int r = 0; r < runs; ++r) {
    for (const auto& rec : records) {
      if (rec.run == r && rec.status == tptp::SolverStatus::unsat) { seen.insert(rec.problem); }
    }
    out.push_back(seen.size());
  }
  return out;
}

std::string server_cmd(const std::string& args)
{
  return std::string("exec:") + FAKE_POLICY_SERVER + " " + args;
}

ScriptedPolicy deepening_oracle()
{
  ScriptedPolicy oracle;
  oracle.script["0:~p(f(X0,X1))"] = { { "t", "g" } };
  oracle.script["1:~p(f(t(X0,X1),g(X2)))"] = { { "c", "c", "e" } };
  oracle.script["1:p(f(t(c,c),g(e)))"] = { {} };
  return oracle;
}

DatasetSplit corpus_split()
{
  DatasetSplit s;
  for (const auto& p : corpus()) { s.train.insert(p.family); }
  for (const auto* f : { "group", "eqax" }) {
    s.train.erase(f);
    s.test.insert(f);
  }
  s.train.erase("sat");
  s.dev.insert("sat");
  return s;
}

}  // namespace

TEST_CASE("split sizes")
{
  struct Row
  {
    std::size_t families, train, dev, test;
  };
  // test = 10% of all rounded half up, dev = 5% of the rest rounded half up, both at least one
  for (const auto& row : { Row{ 100, 85, 5, 10 }, Row{ 3, 1, 1, 1 }, Row{ 15, 12, 1, 2 }, Row{ 50, 43, 2, 5 },
                           Row{ 30, 26, 1, 3 }, Row{ 25, 21, 1, 3 }, Row{ 1000, 855, 45, 100 } }) {
    CAPTURE(row.families);
    const auto s = split_sizes(row.families);
    CHECK(s.train == row.train);
    CHECK(s.dev == row.dev);
    CHECK(s.test == row.test);
  }
}

TEST_CASE("split keeps families together and is seeded")
{
  std::vector<tptp::Problem> problems;
  for (int f = 0; f < 100; ++f) {
    for (int k = 0; k < 3; ++k) {
      const auto fam = "fam" + std::to_string(f);
      problems.push_back(tptp::parse_cnf("cnf(c1, axiom, p(a)).\n", fam + "__" + std::to_string(k), fam));
    }
  }
  const auto s = split_dataset(problems, 7);
  CHECK(s.train.size() == 85);
  CHECK(s.dev.size() == 5);
  CHECK(s.test.size() == 10);
  for (int f = 0; f < 100; ++f) {
    const auto fam = "fam" + std::to_string(f);
    CHECK(s.train.count(fam) + s.dev.count(fam) + s.test.count(fam) == 1);
  }
  CHECK(split_dataset(problems, 7) == s);
  CHECK(split_dataset(problems, 8).test != s.test);
  CHECK(DatasetSplit::from_json(s.to_json()) == s);

  std::vector<tptp::Problem> two(problems.begin(), problems.begin() + 6);
  CHECK_THROWS_AS(split_dataset(two, 0), std::invalid_argument);
}

TEST_CASE("run_attempt on the deepening example with an oracle policy")
{
  const auto& p = corpus_problem("deepening__example");
  auto oracle = deepening_oracle();
  const auto o = run_attempt(p, oracle, {}, 1);
  REQUIRE(o.record.status == tptp::SolverStatus::unsat);
  REQUIRE(o.record.instances.size() == 1);
  const auto& inst = o.record.instances[0];
  CHECK(inst.parent == "c1");
  CHECK(inst.levels == std::vector<tptp::LevelAssignment>{ { { "X0", "t" }, { "X1", "g" } },
                                                           { { "X0", "c" }, { "X1", "c" }, { "X2", "e" } } });
  CHECK(inst.ground_clause == "~p(f(t(c,c),g(e)))");
  CHECK(replay_defect(p, o.record).empty());
  CHECK(o.record.seed == 1);
  CHECK(o.record.policy == "scripted");
}

TEST_CASE("run_attempt statuses")
{
  inst::RandomPolicy random;
  const auto skipped = run_attempt(corpus_problem("noconst__succ"), random, {}, 0);
  CHECK(skipped.record.status == tptp::SolverStatus::skipped);
  CHECK(!skipped.record.reason.empty());
  CHECK(skipped.record.instances.empty());

  const auto sat = run_attempt(corpus_problem("sat__split"), random, {}, 0);
  CHECK(sat.record.status == tptp::SolverStatus::sat);
  CHECK(sat.record.instances.empty());

  // Ground unsat problems need no instances.
  const auto ground = run_attempt(corpus_problem("php__3_2"), random, {}, 0);
  CHECK(ground.record.status == tptp::SolverStatus::unsat);
  CHECK(ground.record.instances.empty());
  CHECK(replay_defect(corpus_problem("php__3_2"), ground.record).empty());
}

TEST_CASE("sweep over the bundled corpus")
{
  const auto dir = scratch("sweep");
  inst::RandomPolicy random;
  SweepConfig cfg;
  cfg.runs = 10;
  cfg.base_seed = 11;
  const tptp::SolutionStore store(dir / "a.jsonl");
  const auto rep = sweep(corpus(), random, cfg, store);
  const auto records = store.load();

  SUBCASE("records and curve")
  {
    CHECK(records.size() == corpus().size() * 10);
    CHECK(rep.curve.cumulative == curve_oracle(records, 10));
    CHECK(rep.curve.cumulative.front() > 0);
    CHECK(std::is_sorted(rep.curve.cumulative.begin(), rep.curve.cumulative.end()));
    CHECK(rep.max_instances_per_input <= inst::instance_bound(cfg.attempt.passes));
    CHECK(rep.skipped == 10);  // the constant-free problem in every run
    CHECK(rep.errors == 0);
    for (const auto& r : records) {
      CAPTURE(r.problem);
      CHECK(r.seed == attempt_seed(11, r.problem, static_cast<std::uint64_t>(*r.run)));
      if (r.status == tptp::SolverStatus::unsat) { CHECK(replay_defect(corpus_problem(r.problem), r).empty()); }
    }
  }

  SUBCASE("same seed, same records")
  {
    const tptp::SolutionStore again(dir / "b.jsonl");
    sweep(corpus(), random, cfg, again);
    CHECK(stable(again.load()) == stable(records));
  }

  SUBCASE("a second call resumes instead of repeating")
  {
    const auto before = read_file(store.path());
    const auto rep2 = sweep(corpus(), random, cfg, store);
    CHECK(rep2.attempts == 0);
    CHECK(rep2.resumed == 10);
    CHECK(read_file(store.path()) == before);
    CHECK(rep2.curve.cumulative == rep.curve.cumulative);
  }

  SUBCASE("interrupted sweep resumes to the same records")
  {
    const tptp::SolutionStore cut(dir / "cut.jsonl");
    auto killing = cfg;
    killing.on_run = [](int run, const auto&) {
      if (run == 3) { throw std::runtime_error("killed"); }
    };
    CHECK_THROWS(sweep(corpus(), random, killing, cut));
    CHECK(cut.load().size() == corpus().size() * 4);
    {
      // A writer killed mid-line leaves a partial record behind.
      std::ofstream torn(cut.path(), std::ios::app);
      torn << R"({"problem":"deepening__example","status":"un)";
    }
    const auto resumed = sweep(corpus(), random, cfg, cut);
    CHECK(resumed.resumed == 4);
    CHECK(resumed.attempts == corpus().size() * 6);
    CHECK(stable(cut.load()) == stable(records));
  }

  SUBCASE("parallel jobs give the same records")
  {
    auto parallel = cfg;
    parallel.jobs = 4;
    const tptp::SolutionStore par(dir / "par.jsonl");
    sweep(corpus(), random, parallel, par);
    CHECK(stable(par.load()) == stable(records));
  }
}

TEST_CASE("cumulative_curve counts the union of solved problems")
{
  auto rec = [](std::string p, int run, bool solved) {
    tptp::SolutionRecord r;
    r.problem = std::move(p);
    r.run = run;
    r.status = solved ? tptp::SolverStatus::unsat : tptp::SolverStatus::sat;
    return r;
  };
  const std::vector<tptp::SolutionRecord> records{ rec("a", 0, true),  rec("b", 0, false), rec("a", 1, true),
                                                   rec("b", 1, true),  rec("c", 1, false), rec("a", 2, false),
                                                   rec("c", 2, false), rec("b", 3, false) };
  const auto c = cumulative_curve(records, 4);
  CHECK(c.solved == std::vector<std::size_t>{ 1, 2, 0, 0 });
  CHECK(c.cumulative == std::vector<std::size_t>{ 1, 2, 2, 2 });
}

TEST_CASE("report tables and plot")
{
  const auto dir = scratch("report");
  inst::RandomPolicy random;
  SweepConfig cfg;
  cfg.runs = 3;
  const tptp::SolutionStore store(dir / "s.jsonl");
  sweep(corpus(), random, cfg, store);
  const auto rep = build_report(store.load());
  const auto files = write_report_files(rep, dir / "out");
  REQUIRE(files.size() == 3);

  const auto csv = read_file(dir / "out" / "cumulative.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "run,solved,cumulative");
  for (int r = 1; r <= 3; ++r) {
    REQUIRE(std::getline(lines, line));
    CHECK(line.rfind(std::to_string(r) + ",", 0) == 0);
  }
  CHECK(!std::getline(lines, line));

  const auto problems = read_file(dir / "out" / "problems.csv");
  CHECK(static_cast<std::size_t>(std::count(problems.begin(), problems.end(), '\n')) == corpus().size() + 1);
  const auto svg = read_file(dir / "out" / "cumulative.svg");
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  std::size_t counted = 0;
  for (const auto& [status, n] : rep.status_counts) { counted += n; }
  CHECK(counted == corpus().size() * 3);
}

TEST_CASE("quantile interpolates linearly")
{
  CHECK(quantile({ 3.0 }, 0.9) == 3.0);
  CHECK(quantile({ 4.0, 1.0, 3.0, 2.0 }, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({ 0.0, 10.0 }, 0.1) == doctest::Approx(1.0));
  CHECK(quantile({ 1.0, 2.0, 3.0, 4.0, 5.0 }, 0.9) == doctest::Approx(4.6));
  CHECK(std::isnan(quantile({}, 0.5)));
}

TEST_CASE("coverage against an oracle, a stopping and a random policy")
{
  const auto& p = corpus_problem("deepening__example");
  auto oracle = deepening_oracle();
  const auto reference = run_attempt(p, oracle, {}, 0).record;
  REQUIRE(reference.status == tptp::SolverStatus::unsat);

  const auto labels = coverage_labels(p, reference);
  REQUIRE(labels[0].size() == 1);
  REQUIRE(labels[1].size() == 1);
  CHECK(labels[0][0].heads == std::vector<std::string>{ "t", "g" });
  CHECK(labels[1][0].heads == std::vector<std::string>{ "c", "c", "e" });

  const std::map<std::string, const tptp::Problem*> problems{ { p.name, &p } };
  const auto full = coverage_eval(problems, { reference }, oracle, default_coverage_grid, 0);
  CHECK(full.problems == std::array<std::size_t, 2>{ 1, 1 });
  for (const auto& level : full.cells) {
    for (const auto& row : level) {
      for (double v : row) { CHECK(v == 1.0); }
    }
  }

  ScriptedPolicy nothing;
  const auto none = coverage_eval(problems, { reference }, nothing, default_coverage_grid, 0);
  for (const auto& level : none.cells) {
    for (const auto& row : level) {
      for (double v : row) { CHECK(v == 0.0); }
    }
  }

  // Random: per problem the fraction is non-decreasing in the sample count.
  inst::RandomPolicy random;
  const auto dir = scratch("coverage");
  SweepConfig cfg;
  cfg.runs = 2;
  const tptp::SolutionStore store(dir / "ref.jsonl");
  sweep(corpus(), random, cfg, store);
  std::map<std::string, const tptp::Problem*> all;
  for (const auto& q : corpus()) { all.emplace(q.name, &q); }
  const auto table = coverage_eval(all, store.load(), random, default_coverage_grid, 5);
  CHECK(table.problems[0] > 5);
  for (const auto& pc : table.per_problem) {
    CAPTURE(pc.problem);
    CHECK(std::is_sorted(pc.by_samples.begin(), pc.by_samples.end()));
    for (double v : pc.by_samples) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  const auto csv = table.to_csv();
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == 1 + 2 * default_coverage_grid.size());
}

TEST_CASE("coverage of uniform draws at level 0 matches the closed form")
{
  // One start clause with two variables over five function symbols: a label is
  // hit within s draws with probability 1 - (24/25)^s.
  const auto& p = corpus_problem("deepening__example");
  auto oracle = deepening_oracle();
  const auto reference = run_attempt(p, oracle, {}, 0).record;
  const std::map<std::string, const tptp::Problem*> problems{ { p.name, &p } };
  inst::RandomPolicy random;
  const std::vector<std::size_t> grid{ 1, 5, 25 };
  std::vector<double> hits(grid.size(), 0.0);
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const auto table = coverage_eval(problems, { reference }, random, grid, static_cast<std::uint64_t>(t));
    for (std::size_t g = 0; g < grid.size(); ++g) { hits[g] += table.per_problem[0].by_samples[g]; }
  }
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double expected = 1.0 - std::pow(24.0 / 25.0, static_cast<double>(grid[g]));
    const double sd = std::sqrt(expected * (1 - expected) / trials);
    CAPTURE(grid[g]);
    CHECK(std::abs(hits[g] / trials - expected) < 4 * sd);
  }
}

TEST_CASE("self-improvement loop against the fake policy server")
{
  const auto dir = scratch("loop");
  const auto split = corpus_split();
  auto files_in = [](const fs::path& d) {
    return LoopFiles{ d / "state.json", d / "train.jsonl", d / "eval.jsonl", d / "train_log.tsv" };
  };
  LoopConfig cfg;
  cfg.attempts_per_iter = 12;
  cfg.train_samples_per_iter = 20;
  cfg.eval_every = 2;
  cfg.seed = 3;

  SUBCASE("iterations, evaluation and the leakage guard")
  {
    const auto files = files_in(dir);
    inst::ExternalPolicy policy(inst::Endpoint::parse(server_cmd("--mode memo")), 20);
    std::vector<std::size_t> solved;
    for (int it = 1; it <= 4; ++it) {
      cfg.until_iteration = it;
      const auto state = self_improve_loop(corpus(), split, policy, cfg, files);
      CHECK(state.iteration == it);
      solved.push_back(state.solved);
    }
    CHECK(std::is_sorted(solved.begin(), solved.end()));
    CHECK(solved.back() > 0);

    const auto train = tptp::SolutionStore(files.train_store).load();
    CHECK(train.size() == 12 * 4);
    for (const auto& r : train) {
      CHECK(split.part_of(corpus_problem(r.problem).family) == Part::train);
      CHECK(r.phase == "train");
      CHECK(r.policy == "external");
    }
    const auto eval = tptp::SolutionStore(files.eval_store).load();
    std::set<int> eval_runs;
    for (const auto& r : eval) {
      CHECK(split.part_of(corpus_problem(r.problem).family) == Part::test);
      eval_runs.insert(*r.run);
    }
    CHECK(eval_runs == std::set<int>{ 1, 3 });

    std::ifstream log(files.train_log);
    std::string it, problem, family;
    std::size_t lines = 0;
    while (log >> it >> problem >> family) {
      ++lines;
      CHECK(split.part_of(family) == Part::train);
      CHECK(corpus_problem(problem).family == family);
    }
    CHECK(lines > 0);
    CHECK(lines % 20 == 0);
    CHECK(LoopState::load(files.state).checkpoint == "fake-r0-v" + std::to_string(lines / 20));

    // Restarting the model keeps every stored solution.
    cfg.until_iteration = 5;
    cfg.restart_fresh_model = true;
    const auto restarted = self_improve_loop(corpus(), split, policy, cfg, files);
    CHECK(restarted.restarts == 1);
    CHECK(restarted.checkpoint.rfind("fake-r1-", 0) == 0);
    CHECK(tptp::SolutionStore(files.train_store).load().size() == 12 * 5);
    CHECK(restarted.solved >= solved.back());
  }

  SUBCASE("no attempts means nothing solved and nothing trained")
  {
    const auto files = files_in(dir);
    inst::ExternalPolicy policy(inst::Endpoint::parse(server_cmd("--mode random")), 20);
    cfg.attempts_per_iter = 0;
    cfg.eval_every = 0;
    cfg.until_iteration = 3;
    const auto state = self_improve_loop(corpus(), split, policy, cfg, files);
    CHECK(state.iteration == 3);
    CHECK(state.solved == 0);
    CHECK(!fs::exists(files.train_log));
    CHECK(tptp::SolutionStore(files.train_store).load().empty());
  }

  SUBCASE("a policy that dies mid-loop interrupts, and the loop resumes")
  {
    cfg.until_iteration = 4;
    const auto ref_files = files_in(dir / "ref");
    fs::create_directories(dir / "ref");
    {
      inst::ExternalPolicy policy(inst::Endpoint::parse(server_cmd("--mode random")), 20);
      self_improve_loop(corpus(), split, policy, cfg, ref_files);
    }

    const auto files = files_in(dir / "cut");
    fs::create_directories(dir / "cut");
    {
      inst::ExternalPolicy dying(inst::Endpoint::parse(server_cmd("--mode random --die-after 30")), 20);
      CHECK_THROWS_AS(self_improve_loop(corpus(), split, dying, cfg, files), LoopInterrupted);
    }
    const auto saved = LoopState::load(files.state);
    CHECK(saved.iteration < 4);
    {
      inst::ExternalPolicy policy(inst::Endpoint::parse(server_cmd("--mode random")), 20);
      const auto state = self_improve_loop(corpus(), split, policy, cfg, files);
      CHECK(state.iteration == 4);
    }
    CHECK(stable(tptp::SolutionStore(files.train_store).load()) ==
          stable(tptp::SolutionStore(ref_files.train_store).load()));
    CHECK(stable(tptp::SolutionStore(files.eval_store).load()) ==
          stable(tptp::SolutionStore(ref_files.eval_store).load()));
  }

  SUBCASE("records of families moved to test are never trained on")
  {
    // Stored proofs of a family later moved to test are never sent.
    const auto files = files_in(dir);
    inst::ExternalPolicy policy(inst::Endpoint::parse(server_cmd("--mode random")), 20);
    cfg.until_iteration = 1;
    cfg.eval_every = 0;
    self_improve_loop(corpus(), split, policy, cfg, files);
    auto moved = split;
    for (const auto& f : std::set<std::string>(moved.train)) {
      moved.train.erase(f);
      moved.test.insert(f);
    }
    moved.train.insert("sat");
    moved.dev.erase("sat");
    fs::remove(files.train_log);
    cfg.until_iteration = 2;
    self_improve_loop(corpus(), moved, policy, cfg, files);
    std::ifstream log(files.train_log);
    std::string line;
    while (std::getline(log, line)) { CHECK(line.find("\tsat") != std::string::npos); }
  }
}
