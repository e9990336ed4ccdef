#ifndef INSTGEN_INST_EXTERNAL_POLICY_HPP
#define INSTGEN_INST_EXTERNAL_POLICY_HPP

#include "instgen/inst/policy.hpp"
#include "instgen/tptp/solution.hpp"

#include <json.hpp>

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace instgen::inst {

/// Marker for a whole-clause Stop in the wire format.
inline constexpr std::string_view stop_marker = "⊥stop";
inline constexpr const char* endpoint_env_var = "INSTGEN_POLICY_ENDPOINT";

/// tcp://host:port, unix://path or exec:shell command (speaks over the child's stdio).
struct Endpoint
{
  enum class Kind { tcp, unix_socket, exec };
  Kind kind = Kind::exec;
  std::string target;  // host, socket path or command
  int port = 0;

  static Endpoint parse(std::string_view text);
  [[nodiscard]] std::string to_string() const;
};

/// Endpoint named by INSTGEN_POLICY_ENDPOINT, if set.
std::optional<Endpoint> endpoint_from_env();

class TransportError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class PolicyTimeout : public TransportError
{
public:
  using TransportError::TransportError;
};

enum class IssueKind { unknown_clause, unknown_symbol, arity_violation, not_constant, malformed, truncated };

std::string_view to_string(IssueKind kind);

/// A per-clause problem in a policy response. All kinds but `truncated` turn
/// the clause's proposals into Stop.
struct ClauseIssue
{
  std::string clause;
  IssueKind kind;
  std::string detail;
};

nlohmann::ordered_json encode_propose(const PolicyRequest& request, std::uint64_t id);

/// Validates a propose response against the request. Whole-response defects
/// (wrong id, missing proposals array, an error field) throw ProtocolError;
/// per-clause defects are appended to `issues`.
ProposalSet decode_proposals(const nlohmann::ordered_json& response,
                             const PolicyRequest& request,
                             std::uint64_t id,
                             std::vector<ClauseIssue>& issues);

/// A stored proof together with its problem text, as sent to the train verb.
struct TrainItem
{
  tptp::SolutionRecord record;
  std::string cnf;
};

class Connection;

/**
 * Policy served by another process. Requests on one client are serialized;
 * the connection is opened lazily and reopened after a transport failure.
 */
class ExternalPolicy final : public Policy
{
public:
  explicit ExternalPolicy(Endpoint endpoint, double timeout_s = 120.0);
  ~ExternalPolicy() override;

  ProposalSet propose(const PolicyRequest& request) override;
  [[nodiscard]] std::string kind() const override { return "external"; }
  [[nodiscard]] std::string checkpoint() const override;
  [[nodiscard]] bool forces_constants() const override { return false; }

  /// Sends stored proofs to the train verb; returns the new checkpoint id.
  std::string train(const std::vector<TrainItem>& items, std::size_t steps);
  /// Reinitializes the remote model; returns the new checkpoint id.
  std::string reset();

  [[nodiscard]] std::vector<ClauseIssue> issues() const;
  [[nodiscard]] const Endpoint& endpoint() const { return endpoint_; }

private:
  nlohmann::ordered_json round_trip(nlohmann::ordered_json request);

  Endpoint endpoint_;
  double timeout_s_;
  mutable std::mutex mutex_;
  std::unique_ptr<Connection> connection_;
  std::uint64_t next_id_ = 1;
  std::string checkpoint_;
  std::vector<ClauseIssue> issues_;
};

}  // namespace instgen::inst

#endif
