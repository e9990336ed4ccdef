#include "instgen/inst/grounding.hpp"

#include "instgen/fol/deepen.hpp"

#include <algorithm>

namespace instgen::inst {

void Provenance::add_input(const fol::Clause& clause)
{
  clauses_.insert_or_assign(clause.id, clause);
  roots_.insert_or_assign(clause.id, clause.id);
}

void Provenance::add_instance(const fol::Clause& clause)
{
  const auto& origin = std::get<fol::InstanceOrigin>(clause.origin);
  const auto parent = roots_.find(origin.parent);
  if (parent == roots_.end()) { throw std::logic_error("instance " + clause.id + " has unknown parent " + origin.parent); }
  roots_.insert_or_assign(clause.id, parent->second);
  clauses_.insert_or_assign(clause.id, clause);
}

const fol::Clause* Provenance::find(const std::string& id) const
{
  auto it = clauses_.find(id);
  return it == clauses_.end() ? nullptr : &it->second;
}

const std::string& Provenance::root(const std::string& id) const
{
  auto it = roots_.find(id);
  if (it == roots_.end()) { throw std::out_of_range("unknown clause " + id); }
  return it->second;
}

std::vector<const fol::Clause*> Provenance::chain(const std::string& id) const
{
  std::vector<const fol::Clause*> out;
  const fol::Clause* c = find(id);
  while (c != nullptr && c->is_instance()) {
    out.push_back(c);
    c = find(std::get<fol::InstanceOrigin>(c->origin).parent);
  }
  if (c == nullptr) { throw std::out_of_range("broken derivation for " + id); }
  std::reverse(out.begin(), out.end());
  return out;
}

tptp::InstanceRecord Provenance::record(const std::string& id) const
{
  tptp::InstanceRecord rec;
  rec.parent = root(id);
  for (const auto* step : chain(id)) {
    const auto& heads = std::get<fol::InstanceOrigin>(step->origin).assignment.heads;
    tptp::LevelAssignment level;
    for (std::size_t i = 0; i < heads.size(); ++i) { level.emplace_back("X" + std::to_string(i), heads[i].name); }
    rec.levels.push_back(std::move(level));
  }
  rec.ground_clause = fol::literals_to_string(*find(id));
  return rec;
}

std::string Provenance::fresh_id()
{
  std::string id;
  do { id = "inst_" + std::to_string(next_++); } while (clauses_.contains(id));
  return id;
}

std::vector<fol::Clause> expand_pass(const tptp::Problem& problem,
                                     std::span<const fol::Clause> clauses,
                                     Policy& policy,
                                     int level,
                                     std::size_t samples,
                                     bool constants_only,
                                     std::uint64_t seed,
                                     Provenance& provenance)
{
  const PolicyRequest request{ &problem, clauses, level, samples, constants_only, seed };
  const auto proposals = policy.propose(request);
  if (proposals.size() != clauses.size()) {
    throw ProtocolError("expected " + std::to_string(clauses.size()) + " proposal lists, got "
                        + std::to_string(proposals.size()));
  }
  std::vector<fol::Clause> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const auto& clause = clauses[i];
    if (proposals[i].size() > samples) {
      throw ProtocolError(std::to_string(proposals[i].size()) + " proposals exceed the cap of "
                            + std::to_string(samples),
                          clause.id);
    }
    for (const auto& proposal : proposals[i]) {
      if (std::holds_alternative<fol::Stop>(proposal)) { continue; }
      const auto& assignment = std::get<fol::HeadAssignment>(proposal);
      if (assignment.clause != clause.id) {
        throw ProtocolError("assignment is addressed to " + assignment.clause, clause.id);
      }
      if (constants_only
          && std::any_of(assignment.heads.begin(), assignment.heads.end(),
                         [](const fol::Symbol& s) { return !s.is_constant(); })) {
        throw ProtocolError("non-constant head in a constants-only pass", clause.id);
      }
      fol::Clause derived;
      try {
        derived = fol::deepen(clause, assignment, {}, &problem.signature);
      } catch (const fol::MalformedAssignment& e) {
        throw ProtocolError(e.what(), clause.id);
      }
      if (!seen.insert(fol::canonical_key(derived)).second) { continue; }
      if (derived.id.empty()) {
        derived.id = provenance.fresh_id();
        provenance.add_instance(derived);
      }
      out.push_back(std::move(derived));
    }
  }
  return out;
}

GroundingResult two_pass_ground(const tptp::Problem& problem,
                                Policy& policy,
                                const PassConfig& config,
                                std::uint64_t seed)
{
  GroundingResult result;
  auto& prov = result.provenance;
  for (const auto& c : problem.clauses) { prov.add_input(c); }
  const bool constants_only = config.grounding_pass_constants_only.value_or(policy.forces_constants());

  const auto pass1 = expand_pass(problem, problem.clauses, policy, 0, config.level0_samples, false, seed, prov);
  result.pass1_outputs = pass1.size();

  std::vector<fol::Clause> pass2_input;
  std::unordered_set<std::string> seen;
  for (const auto* part : { &problem.clauses, &pass1 }) {
    for (const auto& c : *part) {
      if (seen.insert(fol::canonical_key(c)).second) { pass2_input.push_back(c); }
    }
  }
  result.pass2_inputs = pass2_input.size();

  const auto pass2 = expand_pass(problem, pass2_input, policy, 1, config.level1_samples, constants_only, seed, prov);
  result.pass2_outputs = pass2.size();

  seen.clear();
  for (const auto& c : problem.clauses) {
    if (fol::is_ground(c) && seen.insert(fol::canonical_key(c)).second) { result.ground.push_back(c); }
  }
  for (const auto& c : pass2) {
    if (!fol::is_ground(c) || !seen.insert(fol::canonical_key(c)).second) { continue; }
    if (c.is_instance()) { ++result.instances_per_input[prov.root(c.id)]; }
    result.ground.push_back(c);
  }
  return result;
}

}  // namespace instgen::inst
