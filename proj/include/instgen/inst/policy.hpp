#ifndef INSTGEN_INST_POLICY_HPP
#define INSTGEN_INST_POLICY_HPP

#include "instgen/fol/syntax.hpp"
#include "instgen/tptp/cnf.hpp"
#include "instgen/util/rng.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace instgen::inst {

/// Raised when constants-only grounding is requested for a problem without constants.
class NoConstants : public std::runtime_error
{
public:
  explicit NoConstants(const std::string& problem);
};

/// A policy answer that cannot be applied; names the offending clause.
class ProtocolError : public std::runtime_error
{
public:
  ProtocolError(const std::string& message, std::string clause = {});
  [[nodiscard]] const std::string& clause() const { return clause_; }

private:
  std::string clause_;
};

enum class SymbolMode { any_function, constants_only };

/**
 * Draws a head for every variable of `clause`, uniformly and independently
 * over the signature's functions (or constants). A ground clause gets the
 * empty assignment.
 *
 * Throws NoConstants in constants_only mode when the clause has variables and
 * the signature has no constants.
 */
fol::HeadAssignment random_assignment(const fol::Clause& clause,
                                      const fol::Signature& signature,
                                      SymbolMode mode,
                                      Rng& rng);

struct PolicyRequest
{
  const tptp::Problem* problem = nullptr;  // supplies the signature and the name
  std::span<const fol::Clause> clauses;    // the pass input, in order
  int level = 0;
  std::size_t samples = 0;  // per clause
  bool constants_only = false;
  std::uint64_t seed = 0;
};

/// One list of proposals per requested clause, in request order.
using ProposalSet = std::vector<std::vector<fol::Proposal>>;

class Policy
{
public:
  virtual ~Policy() = default;

  virtual ProposalSet propose(const PolicyRequest& request) = 0;

  /// "random" or "external"; stored in solution records.
  [[nodiscard]] virtual std::string kind() const = 0;
  /// Model version for external policies, empty otherwise.
  [[nodiscard]] virtual std::string checkpoint() const { return {}; }
  /// Whether the second pass forces constants by default for this policy.
  [[nodiscard]] virtual bool forces_constants() const = 0;
};

/// Uniform head symbols. Stateless: draws depend only on the request seed, the
/// level and the clause position.
class RandomPolicy final : public Policy
{
public:
  ProposalSet propose(const PolicyRequest& request) override;
  [[nodiscard]] std::string kind() const override { return "random"; }
  [[nodiscard]] bool forces_constants() const override { return true; }
};

}  // namespace instgen::inst

#endif
