#include "instgen/tptp/solution.hpp"

#include "instgen/fol/deepen.hpp"

#include <json.hpp>

#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <sys/file.h>
#include <unistd.h>

namespace instgen::tptp {

using json = nlohmann::ordered_json;

std::string_view to_string(SolverStatus status)
{
  switch (status) {
  case SolverStatus::unsat: return "unsat";
  case SolverStatus::sat: return "sat";
  case SolverStatus::timeout: return "timeout";
  case SolverStatus::skipped: return "skipped";
  case SolverStatus::error: return "error";
  }
  return "error";
}

SolverStatus parse_status(std::string_view text)
{
  for (auto s : { SolverStatus::unsat, SolverStatus::sat, SolverStatus::timeout, SolverStatus::skipped,
                  SolverStatus::error }) {
    if (to_string(s) == text) { return s; }
  }
  throw std::invalid_argument("unknown solver status '" + std::string(text) + "'");
}

RecordError::RecordError(const std::string& message, std::size_t index)
  : std::runtime_error("record " + std::to_string(index) + ": " + message), index_(index)
{}

void validate(const SolutionRecord& record, std::size_t index)
{
  if (record.problem.empty()) { throw RecordError("missing problem name", index); }
  if (record.status != SolverStatus::unsat && !record.instances.empty()) {
    throw RecordError("status " + std::string(to_string(record.status)) + " cannot carry an instance core", index);
  }
  for (const auto& inst : record.instances) {
    if (inst.levels.empty() || inst.levels.size() > static_cast<std::size_t>(fol::max_instantiation_level)) {
      throw RecordError("instance of '" + inst.parent + "' has " + std::to_string(inst.levels.size()) + " levels",
                        index);
    }
  }
}

std::string write_solution(const SolutionRecord& record)
{
  validate(record);
  json j;
  j["problem"] = record.problem;
  j["status"] = std::string(to_string(record.status));
  j["policy"] = record.policy;
  if (!record.checkpoint.empty()) { j["checkpoint"] = record.checkpoint; }
  j["seed"] = record.seed;
  if (record.run) { j["run"] = *record.run; }
  if (!record.phase.empty()) { j["phase"] = record.phase; }
  if (!record.reason.empty()) { j["reason"] = record.reason; }
  j["wall_time_s"] = record.wall_time_s;
  auto instances = json::array();
  for (const auto& inst : record.instances) {
    json ji;
    ji["parent"] = inst.parent;
    auto levels = json::array();
    for (const auto& level : inst.levels) {
      json jl = json::object();
      for (const auto& [var, sym] : level) { jl[var] = sym; }
      levels.push_back(std::move(jl));
    }
    ji["levels"] = std::move(levels);
    ji["ground_clause"] = inst.ground_clause;
    instances.push_back(std::move(ji));
  }
  j["instances"] = std::move(instances);
  return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

SolutionRecord read_solution(std::string_view line, std::size_t index)
{
  SolutionRecord r;
  try {
    const auto j = json::parse(line);
    if (!j.is_object()) { throw RecordError("not a JSON object", index); }
    r.problem = j.at("problem").get<std::string>();
    r.status = parse_status(j.at("status").get<std::string>());
    r.policy = j.at("policy").get<std::string>();
    r.checkpoint = j.value("checkpoint", std::string{});
    r.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("run")) { r.run = j.at("run").get<int>(); }
    r.phase = j.value("phase", std::string{});
    r.reason = j.value("reason", std::string{});
    r.wall_time_s = j.at("wall_time_s").get<double>();
    for (const auto& ji : j.at("instances")) {
      InstanceRecord inst;
      inst.parent = ji.at("parent").get<std::string>();
      for (const auto& jl : ji.at("levels")) {
        LevelAssignment level;
        for (const auto& [var, sym] : jl.items()) { level.emplace_back(var, sym.get<std::string>()); }
        inst.levels.push_back(std::move(level));
      }
      inst.ground_clause = ji.at("ground_clause").get<std::string>();
      r.instances.push_back(std::move(inst));
    }
  } catch (const RecordError&) {
    throw;
  } catch (const std::exception& e) {
    throw RecordError(e.what(), index);
  }
  validate(r, index);
  return r;
}

fol::Clause replay_instance(const Problem& problem, const InstanceRecord& instance)
{
  const auto* parent = problem.find_clause(instance.parent);
  if (parent == nullptr) {
    throw std::runtime_error("problem '" + problem.name + "' has no clause '" + instance.parent + "'");
  }
  fol::Clause current = *parent;
  int step = 0;
  for (const auto& level : instance.levels) {
    fol::HeadAssignment assignment{ current.id, {} };
    for (std::size_t i = 0; i < level.size(); ++i) {
      const auto& [var, name] = level[i];
      if (var != "X" + std::to_string(i)) {
        throw std::runtime_error("level " + std::to_string(step) + " lists variable '" + var + "' out of order");
      }
      auto sym = problem.signature.find(name);
      if (!sym || sym->kind != fol::SymbolKind::function) {
        throw std::runtime_error("unknown function symbol '" + name + "' in derivation");
      }
      assignment.heads.push_back(*sym);
    }
    current = fol::deepen(current, assignment, instance.parent + "/" + std::to_string(++step), &problem.signature);
  }
  return current;
}

namespace {

class Fd
{
public:
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd()
  {
    if (fd_ >= 0) { ::close(fd_); }
  }
  [[nodiscard]] int get() const { return fd_; }

private:
  int fd_;
};

[[noreturn]] void throw_errno(const std::string& what)
{
  throw std::runtime_error(what + ": " + std::strerror(errno));
}

std::string read_all(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { return {}; }
  return { std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>() };
}

std::vector<SolutionRecord> parse_lines(std::string_view text)
{
  std::vector<SolutionRecord> out;
  std::size_t index = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty()) { out.push_back(read_solution(line, index++)); }
    if (nl == std::string_view::npos) { break; }
    text.remove_prefix(nl + 1);
  }
  return out;
}

}  // namespace

void SolutionStore::append(const SolutionRecord& record) const { append(std::vector<SolutionRecord>{ record }); }

void SolutionStore::append(const std::vector<SolutionRecord>& records) const
{
  if (records.empty()) { return; }
  std::string buffer;
  for (const auto& r : records) {
    buffer += write_solution(r);
    buffer += '\n';
  }
  if (path_.has_parent_path()) { std::filesystem::create_directories(path_.parent_path()); }
  Fd fd(::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644));
  if (fd.get() < 0) { throw_errno("cannot open " + path_.string()); }
  if (::flock(fd.get(), LOCK_EX) != 0) { throw_errno("cannot lock " + path_.string()); }
  std::size_t written = 0;
  while (written < buffer.size()) {
    auto n = ::write(fd.get(), buffer.data() + written, buffer.size() - written);
    if (n < 0) {
      if (errno == EINTR) { continue; }
      throw_errno("cannot write " + path_.string());
    }
    written += static_cast<std::size_t>(n);
  }
  ::flock(fd.get(), LOCK_UN);
}

std::vector<SolutionRecord> SolutionStore::load() const { return parse_lines(read_all(path_)); }

std::vector<SolutionRecord> SolutionStore::recover() const
{
  auto text = read_all(path_);
  if (!text.empty() && text.back() != '\n') {
    const auto keep = text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1;
    text.resize(keep);
    std::filesystem::resize_file(path_, keep);
  }
  return parse_lines(text);
}

}  // namespace instgen::tptp
