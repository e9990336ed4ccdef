#include "instgen/inst/external_policy.hpp"

#include "instgen/fol/deepen.hpp"
#include "instgen/util/deadline.hpp"

#include <spdlog/spdlog.h>

#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <unordered_map>
#include <unordered_set>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/un.h>
#include <sys/wait.h>
#include <unistd.h>

namespace instgen::inst {

using json = nlohmann::ordered_json;

Endpoint Endpoint::parse(std::string_view text)
{
  Endpoint e;
  if (text.starts_with("tcp://")) {
    const auto rest = text.substr(6);
    const auto colon = rest.rfind(':');
    if (colon == std::string_view::npos || colon == 0) { throw std::invalid_argument("tcp endpoint needs host:port"); }
    e.kind = Kind::tcp;
    e.target = std::string(rest.substr(0, colon));
    const auto port = std::string(rest.substr(colon + 1));
    char* end = nullptr;
    const long value = std::strtol(port.c_str(), &end, 10);
    if (port.empty() || *end != '\0' || value <= 0 || value > 65535) {
      throw std::invalid_argument("bad port in endpoint: " + std::string(text));
    }
    e.port = static_cast<int>(value);
  } else if (text.starts_with("unix://")) {
    e.kind = Kind::unix_socket;
    e.target = std::string(text.substr(7));
  } else if (text.starts_with("exec:")) {
    e.kind = Kind::exec;
    e.target = std::string(text.substr(5));
  } else {
    throw std::invalid_argument("endpoint must start with tcp://, unix:// or exec: (" + std::string(text) + ")");
  }
  if (e.target.empty()) { throw std::invalid_argument("empty endpoint target"); }
  return e;
}

std::string Endpoint::to_string() const
{
  switch (kind) {
    case Kind::tcp: return "tcp://" + target + ":" + std::to_string(port);
    case Kind::unix_socket: return "unix://" + target;
    case Kind::exec: return "exec:" + target;
  }
  return {};
}

std::optional<Endpoint> endpoint_from_env()
{
  const char* value = std::getenv(endpoint_env_var);
  if (value == nullptr || *value == '\0') { return std::nullopt; }
  return Endpoint::parse(value);
}

std::string_view to_string(IssueKind kind)
{
  switch (kind) {
    case IssueKind::unknown_clause: return "unknown_clause";
    case IssueKind::unknown_symbol: return "unknown_symbol";
    case IssueKind::arity_violation: return "arity_violation";
    case IssueKind::not_constant: return "not_constant";
    case IssueKind::malformed: return "malformed";
    case IssueKind::truncated: return "truncated";
  }
  return "?";
}

// Line-delimited byte stream to the policy process.
class Connection
{
public:
  Connection(int read_fd, int write_fd, pid_t child) : read_fd_(read_fd), write_fd_(write_fd), child_(child) {}
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  ~Connection()
  {
    if (write_fd_ != read_fd_ && write_fd_ >= 0) { ::close(write_fd_); }
    if (read_fd_ >= 0) { ::close(read_fd_); }
    if (child_ > 0) {
      int status = 0;
      for (int i = 0; i < 50; ++i) {
        if (::waitpid(child_, &status, WNOHANG) != 0) { return; }
        ::usleep(2000);
      }
      ::kill(child_, SIGTERM);
      ::waitpid(child_, &status, 0);
    }
  }

  void send_line(const std::string& line)
  {
    std::string data = line + "\n";
    std::size_t done = 0;
    while (done < data.size()) {
      const auto n = child_ > 0 ? ::write(write_fd_, data.data() + done, data.size() - done)
                                : ::send(write_fd_, data.data() + done, data.size() - done, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) { continue; }
        throw TransportError(std::string("write to policy failed: ") + std::strerror(errno));
      }
      done += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(double timeout_s)
  {
    const auto deadline = Deadline::after(timeout_s);
    for (;;) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        auto line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      const double left = deadline.remaining_s();
      if (left <= 0.0) { throw PolicyTimeout("policy did not answer within " + std::to_string(timeout_s) + " s"); }
      pollfd p{ read_fd_, POLLIN, 0 };
      const int ready = ::poll(&p, 1, static_cast<int>(std::min(left * 1000.0 + 1.0, 1e9)));
      if (ready < 0) {
        if (errno == EINTR) { continue; }
        throw TransportError(std::string("poll failed: ") + std::strerror(errno));
      }
      if (ready == 0) { continue; }
      char chunk[65536];
      const auto n = ::read(read_fd_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR) { continue; }
        throw TransportError(std::string("read from policy failed: ") + std::strerror(errno));
      }
      if (n == 0) { throw TransportError("policy closed the connection"); }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

private:
  int read_fd_;
  int write_fd_;
  pid_t child_;
  std::string buffer_;
};

namespace {

std::unique_ptr<Connection> open_connection(const Endpoint& e)
{
  if (e.kind == Endpoint::Kind::exec) {
    // A dead child must surface as a write error, not kill the caller.
    struct sigaction old{};
    ::sigaction(SIGPIPE, nullptr, &old);
    if (old.sa_handler == SIG_DFL) { std::signal(SIGPIPE, SIG_IGN); }
    int to_child[2];
    int from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0) { throw TransportError("pipe failed"); }
    if (::pipe2(from_child, O_CLOEXEC) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw TransportError("pipe failed");
    }
    const pid_t pid = ::fork();
    if (pid < 0) { throw TransportError("fork failed"); }
    if (pid == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", e.target.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    return std::make_unique<Connection>(from_child[0], to_child[1], pid);
  }

  int fd = -1;
  if (e.kind == Endpoint::Kind::unix_socket) {
    sockaddr_un addr{};
    addr.sun_family = AF_UNIX;
    if (e.target.size() >= sizeof addr.sun_path) { throw TransportError("socket path too long: " + e.target); }
    std::memcpy(addr.sun_path, e.target.c_str(), e.target.size() + 1);
    fd = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (fd < 0 || ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
      const std::string why = std::strerror(errno);
      if (fd >= 0) { ::close(fd); }
      throw TransportError("cannot connect to " + e.to_string() + ": " + why);
    }
  } else {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    if (::getaddrinfo(e.target.c_str(), std::to_string(e.port).c_str(), &hints, &found) != 0) {
      throw TransportError("cannot resolve " + e.target);
    }
    for (auto* a = found; a != nullptr; a = a->ai_next) {
      fd = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
      if (fd >= 0 && ::connect(fd, a->ai_addr, a->ai_addrlen) == 0) { break; }
      if (fd >= 0) { ::close(fd); }
      fd = -1;
    }
    ::freeaddrinfo(found);
    if (fd < 0) { throw TransportError("cannot connect to " + e.to_string()); }
  }
  return std::make_unique<Connection>(fd, fd, 0);
}

}  // namespace

json encode_propose(const PolicyRequest& request, std::uint64_t id)
{
  tptp::Problem pass;
  pass.name = request.problem->name;
  pass.family = request.problem->family;
  // The whole input problem travels with every request so the policy always
  // sees the full signature; instances of this pass are appended to it.
  pass.clauses = request.problem->clauses;
  std::unordered_set<std::string> present;
  for (const auto& c : pass.clauses) { present.insert(c.id); }
  for (const auto& c : request.clauses) {
    if (present.insert(c.id).second) { pass.clauses.push_back(c); }
  }
  json ids = json::array();
  for (const auto& c : request.clauses) { ids.push_back(c.id); }
  return json{ { "id", id },
               { "verb", "propose" },
               { "level", request.level },
               { "samples", request.samples },
               { "constants_only", request.constants_only },
               { "seed", request.seed },
               { "problem", tptp::serialize_cnf(pass) },
               { "clause_ids", std::move(ids) } };
}

namespace {

// Returns the clause's proposals, or nullopt after recording why the clause is rejected.
std::optional<std::vector<fol::Proposal>> decode_clause(const json& assignments,
                                                        const fol::Clause& clause,
                                                        const PolicyRequest& request,
                                                        std::vector<ClauseIssue>& issues)
{
  auto reject = [&](IssueKind kind, std::string detail) {
    issues.push_back({ clause.id, kind, std::move(detail) });
    return std::nullopt;
  };
  if (!assignments.is_array()) { return reject(IssueKind::malformed, "assignments is not a list"); }
  const auto n = fol::variable_count(clause);
  const auto& sig = request.problem->signature;
  std::vector<fol::Proposal> out;
  for (const auto& a : assignments) {
    if (!a.is_array()) { return reject(IssueKind::malformed, "assignment is not a list"); }
    if (a.size() == 1 && a[0].is_string() && a[0].get<std::string>() == stop_marker) {
      out.emplace_back(fol::Stop{});
      continue;
    }
    if (a.size() != n) {
      return reject(IssueKind::arity_violation,
                    "assignment has " + std::to_string(a.size()) + " symbols for " + std::to_string(n) + " variables");
    }
    fol::HeadAssignment h{ clause.id, {} };
    for (const auto& name : a) {
      if (!name.is_string()) { return reject(IssueKind::malformed, "symbol name is not a string"); }
      const auto symbol = sig.find(name.get<std::string>());
      if (!symbol) { return reject(IssueKind::unknown_symbol, "'" + name.get<std::string>() + "' is not in the signature"); }
      if (symbol->kind != fol::SymbolKind::function) {
        return reject(IssueKind::arity_violation, "'" + symbol->name + "' is a predicate");
      }
      if (request.constants_only && !symbol->is_constant()) {
        return reject(IssueKind::not_constant, "'" + symbol->name + "' is not a constant");
      }
      h.heads.push_back(*symbol);
    }
    out.emplace_back(std::move(h));
  }
  if (out.size() > request.samples) {
    issues.push_back({ clause.id, IssueKind::truncated,
                       std::to_string(out.size()) + " assignments cut to " + std::to_string(request.samples) });
    out.resize(request.samples);
  }
  return out;
}

}  // namespace

ProposalSet decode_proposals(const json& response,
                             const PolicyRequest& request,
                             std::uint64_t id,
                             std::vector<ClauseIssue>& issues)
{
  if (!response.is_object()) { throw ProtocolError("response is not an object"); }
  if (!response.contains("id") || response["id"] != id) { throw ProtocolError("response id does not match request"); }
  if (response.contains("error")) { throw ProtocolError("policy error: " + response["error"].dump()); }
  if (!response.contains("proposals") || !response["proposals"].is_array()) {
    throw ProtocolError("response has no proposals list");
  }
  ProposalSet out(request.clauses.size());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < request.clauses.size(); ++i) { index.emplace(request.clauses[i].id, i); }
  std::vector<bool> answered(request.clauses.size(), false);
  for (const auto& entry : response["proposals"]) {
    if (!entry.is_object() || !entry.contains("clause_id") || !entry["clause_id"].is_string()) {
      issues.push_back({ "", IssueKind::malformed, "proposal entry without clause_id" });
      continue;
    }
    const auto cid = entry["clause_id"].get<std::string>();
    auto it = index.find(cid);
    if (it == index.end()) {
      issues.push_back({ cid, IssueKind::unknown_clause, "clause was not requested" });
      continue;
    }
    if (answered[it->second]) {
      issues.push_back({ cid, IssueKind::malformed, "clause answered twice" });
      out[it->second].clear();
      continue;
    }
    answered[it->second] = true;
    const json empty = json::array();
    auto decoded = decode_clause(entry.contains("assignments") ? entry["assignments"] : empty,
                                 request.clauses[it->second], request, issues);
    if (decoded) { out[it->second] = std::move(*decoded); }
  }
  return out;
}

ExternalPolicy::ExternalPolicy(Endpoint endpoint, double timeout_s)
  : endpoint_(std::move(endpoint)), timeout_s_(timeout_s)
{}

ExternalPolicy::~ExternalPolicy() = default;

std::string ExternalPolicy::checkpoint() const
{
  std::lock_guard lock(mutex_);
  return checkpoint_;
}

std::vector<ClauseIssue> ExternalPolicy::issues() const
{
  std::lock_guard lock(mutex_);
  return issues_;
}

json ExternalPolicy::round_trip(json request)
{
  // Caller holds mutex_.
  if (!connection_) { connection_ = open_connection(endpoint_); }
  try {
    connection_->send_line(request.dump());
    const auto line = connection_->read_line(timeout_s_);
    try {
      auto response = json::parse(line);
      if (response.is_object() && response.contains("checkpoint") && response["checkpoint"].is_string()) {
        checkpoint_ = response["checkpoint"].get<std::string>();
      }
      return response;
    } catch (const json::parse_error& e) {
      throw ProtocolError(std::string("response is not JSON: ") + e.what());
    }
  } catch (const TransportError&) {
    // The stream may be out of step now; start over on the next request.
    connection_.reset();
    throw;
  }
}

ProposalSet ExternalPolicy::propose(const PolicyRequest& request)
{
  std::lock_guard lock(mutex_);
  const auto id = next_id_++;
  const auto response = round_trip(encode_propose(request, id));
  std::vector<ClauseIssue> found;
  auto out = decode_proposals(response, request, id, found);
  for (const auto& issue : found) {
    spdlog::warn("policy response for {} clause {}: {} ({})", request.problem->name, issue.clause,
                 to_string(issue.kind), issue.detail);
  }
  issues_.insert(issues_.end(), found.begin(), found.end());
  return out;
}

std::string ExternalPolicy::train(const std::vector<TrainItem>& items, std::size_t steps)
{
  std::lock_guard lock(mutex_);
  const auto id = next_id_++;
  json records = json::array();
  for (const auto& item : items) {
    auto r = json::parse(tptp::write_solution(item.record));
    r["cnf"] = item.cnf;
    records.push_back(std::move(r));
  }
  const auto response =
    round_trip(json{ { "id", id }, { "verb", "train" }, { "records", std::move(records) }, { "steps", steps } });
  if (!response.is_object() || !response.contains("id") || response["id"] != id) {
    throw ProtocolError("train response id does not match request");
  }
  if (response.contains("error")) { throw ProtocolError("policy error: " + response["error"].dump()); }
  return checkpoint_;
}

std::string ExternalPolicy::reset()
{
  std::lock_guard lock(mutex_);
  const auto id = next_id_++;
  const auto response = round_trip(json{ { "id", id }, { "verb", "reset" } });
  if (!response.is_object() || !response.contains("id") || response["id"] != id) {
    throw ProtocolError("reset response id does not match request");
  }
  if (response.contains("error")) { throw ProtocolError("policy error: " + response["error"].dump()); }
  return checkpoint_;
}

}  // namespace instgen::inst
