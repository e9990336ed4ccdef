#include "instgen/ground/congruence.hpp"

#include <algorithm>
#include <map>

namespace instgen::ground {

CongruenceClosure::CongruenceClosure(const TermBank& terms)
  : terms_(terms), parent_(terms.size()), size_(terms.size(), 1), use_(terms.size()), forest_(terms.size())
{
  for (TermId t = 0; t < terms.size(); ++t) {
    parent_[t] = t;
    const auto args = terms.args(t);
    if (args.empty()) { continue; }
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (std::find(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(i), args[i])
          == args.begin() + static_cast<std::ptrdiff_t>(i)) {
        use_[args[i]].push_back(t);
      }
    }
    table_.emplace(signature(t), t);
  }
}

TermId CongruenceClosure::find(TermId t) const
{
  TermId root = t;
  while (parent_[root] != root) { root = parent_[root]; }
  while (parent_[t] != root) {
    const TermId next = parent_[t];
    parent_[t] = root;
    t = next;
  }
  return root;
}

std::vector<std::uint32_t> CongruenceClosure::signature(TermId t) const
{
  std::vector<std::uint32_t> sig;
  const auto args = terms_.args(t);
  sig.reserve(args.size() + 1);
  sig.push_back(terms_.head(t));
  for (auto a : args) { sig.push_back(find(a)); }
  return sig;
}

void CongruenceClosure::assert_equal(TermId a, TermId b, Var reason)
{
  pending_.push_back({ a, b, Justification{ false, reason, 0, 0 } });
  propagate();
}

void CongruenceClosure::propagate()
{
  while (!pending_.empty()) {
    const Pending p = pending_.front();
    pending_.pop_front();
    TermId ra = find(p.a);
    TermId rb = find(p.b);
    if (ra == rb) { continue; }
    forest_[p.a].push_back({ p.b, p.why });
    forest_[p.b].push_back({ p.a, p.why });
    ++merges_;
    if (size_[ra] > size_[rb]) { std::swap(ra, rb); }
    parent_[ra] = rb;
    size_[rb] += size_[ra];
    for (TermId u : use_[ra]) {
      auto sig = signature(u);
      auto [it, inserted] = table_.try_emplace(std::move(sig), u);
      if (!inserted && find(it->second) != find(u)) {
        pending_.push_back({ u, it->second, Justification{ true, 0, u, it->second } });
      }
      use_[rb].push_back(u);
    }
    use_[ra].clear();
  }
}

std::vector<const CongruenceClosure::Edge*> CongruenceClosure::forest_path(TermId from, TermId to) const
{
  // Breadth-first search; the forest has exactly one path between connected nodes.
  std::map<TermId, std::pair<TermId, const Edge*>> prev;
  std::deque<TermId> queue{ from };
  prev.emplace(from, std::make_pair(from, nullptr));
  while (!queue.empty()) {
    const TermId t = queue.front();
    queue.pop_front();
    if (t == to) { break; }
    for (const auto& e : forest_[t]) {
      if (prev.emplace(e.to, std::make_pair(t, &e)).second) { queue.push_back(e.to); }
    }
  }
  std::vector<const Edge*> path;
  if (!prev.contains(to)) { return path; }
  for (TermId t = to; t != from; t = prev.at(t).first) { path.push_back(prev.at(t).second); }
  return path;
}

void CongruenceClosure::explain_into(TermId a,
                                     TermId b,
                                     std::set<Var>& out,
                                     std::set<std::pair<TermId, TermId>>& done) const
{
  if (a == b) { return; }
  if (!done.insert(std::minmax(a, b)).second) { return; }
  for (const Edge* e : forest_path(a, b)) {
    if (!e->why.congruence) {
      out.insert(e->why.atom);
      continue;
    }
    const auto la = terms_.args(e->why.left);
    const auto ra = terms_.args(e->why.right);
    for (std::size_t i = 0; i < la.size(); ++i) { explain_into(la[i], ra[i], out, done); }
  }
}

std::vector<Var> CongruenceClosure::explain(TermId a, TermId b) const
{
  std::set<Var> out;
  std::set<std::pair<TermId, TermId>> done;
  explain_into(a, b, out, done);
  return { out.begin(), out.end() };
}

std::vector<std::vector<TermId>> CongruenceClosure::classes() const
{
  std::map<TermId, std::vector<TermId>> by_root;
  for (TermId t = 0; t < parent_.size(); ++t) { by_root[find(t)].push_back(t); }
  std::vector<std::vector<TermId>> out;
  for (auto& [root, members] : by_root) {
    if (members.size() > 1) { out.push_back(std::move(members)); }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CongruenceResult congruence_check(const std::vector<bool>& model,
                                  const AtomTable& atoms,
                                  const TermBank& terms,
                                  std::size_t max_conflicts,
                                  std::size_t* merges)
{
  CongruenceClosure cc(terms);
  for (Var v = 0; v < atoms.size(); ++v) {
    const auto& a = atoms.atom(v);
    if (a.equality && model.at(v)) { cc.assert_equal(a.args[0], a.args[1], v); }
  }
  if (merges != nullptr) { *merges = cc.merges(); }

  CongruenceResult result;
  auto block = [&](const std::vector<Var>& because, std::initializer_list<Lit> extra) {
    PropClause clause;
    for (Var e : because) { clause.push_back(Lit::neg(e)); }
    clause.insert(clause.end(), extra.begin(), extra.end());
    result.blocking.push_back(std::move(clause));
    result.consistent = false;
  };

  for (Var v = 0; v < atoms.size() && result.blocking.size() < max_conflicts; ++v) {
    const auto& a = atoms.atom(v);
    if (a.equality && !model.at(v) && cc.equal(a.args[0], a.args[1])) {
      block(cc.explain(a.args[0], a.args[1]), { Lit::pos(v) });
    }
  }

  // Predicate atoms grouped by (predicate, argument classes); the first true
  // and the first false member of a group witness a congruence violation.
  std::unordered_map<std::vector<std::uint32_t>, std::pair<std::optional<Var>, std::optional<Var>>, VectorHash> groups;
  for (Var v = 0; v < atoms.size() && result.blocking.size() < max_conflicts; ++v) {
    const auto& a = atoms.atom(v);
    if (a.equality) { continue; }
    std::vector<std::uint32_t> key{ a.predicate };
    for (auto t : a.args) { key.push_back(cc.find(t)); }
    auto& [pos, neg] = groups[key];
    auto& slot = model.at(v) ? pos : neg;
    if (slot) { continue; }
    slot = v;
    if (pos && neg) {
      const auto& ta = atoms.atom(*pos);
      const auto& fa = atoms.atom(*neg);
      std::set<Var> because;
      for (std::size_t i = 0; i < ta.args.size(); ++i) {
        for (Var e : cc.explain(ta.args[i], fa.args[i])) { because.insert(e); }
      }
      block({ because.begin(), because.end() }, { Lit::neg(*pos), Lit::pos(*neg) });
    }
  }
  return result;
}

}  // namespace instgen::ground
