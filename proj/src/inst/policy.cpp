#include "instgen/inst/policy.hpp"

#include "instgen/fol/deepen.hpp"

namespace instgen::inst {

NoConstants::NoConstants(const std::string& problem)
  : std::runtime_error("no constants in the signature of '" + problem + "'")
{}

ProtocolError::ProtocolError(const std::string& message, std::string clause)
  : std::runtime_error(clause.empty() ? message : "clause " + clause + ": " + message), clause_(std::move(clause))
{}

fol::HeadAssignment random_assignment(const fol::Clause& clause,
                                      const fol::Signature& signature,
                                      SymbolMode mode,
                                      Rng& rng)
{
  fol::HeadAssignment out{ clause.id, {} };
  const auto n = fol::variable_count(clause);
  if (n == 0) { return out; }
  const auto pool = mode == SymbolMode::constants_only ? signature.constants() : signature.functions();
  if (pool.empty()) { throw NoConstants(clause.id); }
  out.heads.reserve(n);
  for (std::size_t i = 0; i < n; ++i) { out.heads.push_back(pool[rng.below(pool.size())]); }
  return out;
}

ProposalSet RandomPolicy::propose(const PolicyRequest& request)
{
  const auto& sig = request.problem->signature;
  const auto mode = request.constants_only ? SymbolMode::constants_only : SymbolMode::any_function;
  if (mode == SymbolMode::constants_only && sig.constants().empty()) {
    for (const auto& c : request.clauses) {
      if (!fol::is_ground(c)) { throw NoConstants(request.problem->name); }
    }
  }
  ProposalSet out(request.clauses.size());
  for (std::size_t i = 0; i < request.clauses.size(); ++i) {
    const auto& clause = request.clauses[i];
    if (request.samples == 0) { continue; }
    if (fol::is_ground(clause)) {
      out[i].emplace_back(fol::HeadAssignment{ clause.id, {} });
      continue;
    }
    Rng rng(splitmix64(request.seed ^ splitmix64(static_cast<std::uint64_t>(request.level) * 0x10000 + i)));
    for (std::size_t s = 0; s < request.samples; ++s) {
      out[i].emplace_back(random_assignment(clause, sig, mode, rng));
    }
  }
  return out;
}

}  // namespace instgen::inst
