#include "instgen/ground/sat_solver.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>

namespace instgen::ground {

std::string to_string(Lit lit) { return (lit.negated() ? "-" : "") + std::to_string(lit.var() + 1); }

namespace {

using CRef = std::uint32_t;
constexpr CRef no_reason = std::numeric_limits<CRef>::max();

// lbool: 0 = true, 1 = false, 2 = undefined. value(lit) = assign ^ negated.
constexpr std::uint8_t l_true = 0;
constexpr std::uint8_t l_false = 1;
constexpr std::uint8_t l_undef = 2;

struct ClauseData
{
  std::vector<Lit> lits;
  double activity = 0.0;
  std::uint32_t lbd = 0;
  bool learnt = false;
  bool deleted = false;
};

struct Watcher
{
  CRef cref;
  Lit blocker;
};

// Max-heap of variables keyed by activity.
class VarHeap
{
public:
  explicit VarHeap(const std::vector<double>& activity) : activity_(activity) {}

  [[nodiscard]] bool empty() const { return heap_.empty(); }
  [[nodiscard]] bool contains(Var v) const { return v < index_.size() && index_[v] >= 0; }

  void grow(Var v)
  {
    if (v >= index_.size()) { index_.resize(v + 1, -1); }
  }

  void insert(Var v)
  {
    grow(v);
    if (contains(v)) { return; }
    index_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(heap_.size() - 1);
  }

  void increased(Var v)
  {
    if (contains(v)) { up(static_cast<std::size_t>(index_[v])); }
  }

  Var pop()
  {
    Var top = heap_.front();
    heap_.front() = heap_.back();
    index_[heap_.front()] = 0;
    heap_.pop_back();
    index_[top] = -1;
    if (!heap_.empty()) { down(0); }
    return top;
  }

private:
  bool less(Var a, Var b) const { return activity_[a] > activity_[b]; }

  void up(std::size_t i)
  {
    Var v = heap_[i];
    while (i > 0) {
      auto parent = (i - 1) / 2;
      if (!less(v, heap_[parent])) { break; }
      heap_[i] = heap_[parent];
      index_[heap_[i]] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = v;
    index_[v] = static_cast<int>(i);
  }

  void down(std::size_t i)
  {
    Var v = heap_[i];
    for (;;) {
      auto child = 2 * i + 1;
      if (child >= heap_.size()) { break; }
      if (child + 1 < heap_.size() && less(heap_[child + 1], heap_[child])) { ++child; }
      if (!less(heap_[child], v)) { break; }
      heap_[i] = heap_[child];
      index_[heap_[i]] = static_cast<int>(i);
      i = child;
    }
    heap_[i] = v;
    index_[v] = static_cast<int>(i);
  }

  const std::vector<double>& activity_;
  std::vector<Var> heap_;
  std::vector<int> index_;
};

double luby(double y, int x)
{
  int size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1.0;
  for (int i = 0; i < seq; ++i) { r *= y; }
  return r;
}

}  // namespace

struct SatSolver::Impl
{
  std::vector<ClauseData> clauses;
  std::vector<CRef> learnts;
  std::vector<std::vector<Watcher>> watches;  // indexed by the code of the watched literal

  std::vector<std::uint8_t> assigns;
  std::vector<int> level;
  std::vector<CRef> reason;
  std::vector<bool> polarity;  // saved phase: true = last assigned negatively
  std::vector<double> activity;
  std::vector<char> seen;
  VarHeap order{ activity };

  std::vector<Lit> trail;
  std::vector<std::size_t> trail_lim;
  std::size_t qhead = 0;

  std::vector<Lit> assumptions;
  std::vector<bool> model;
  std::vector<Lit> failed;

  double var_inc = 1.0;
  double var_decay = 0.95;
  double cla_inc = 1.0;
  double cla_decay = 0.999;
  double max_learnts = 0.0;
  bool ok = true;
  SatStats stats;

  [[nodiscard]] std::size_t num_vars() const { return assigns.size(); }
  [[nodiscard]] int decision_level() const { return static_cast<int>(trail_lim.size()); }
  [[nodiscard]] std::uint8_t value(Lit l) const
  {
    auto a = assigns[l.var()];
    return a == l_undef ? l_undef : static_cast<std::uint8_t>(a ^ (l.negated() ? 1U : 0U));
  }

  Var new_var()
  {
    const auto v = static_cast<Var>(assigns.size());
    assigns.push_back(l_undef);
    level.push_back(0);
    reason.push_back(no_reason);
    polarity.push_back(true);
    activity.push_back(0.0);
    seen.push_back(0);
    watches.emplace_back();
    watches.emplace_back();
    order.insert(v);
    return v;
  }

  void enqueue(Lit p, CRef from)
  {
    assigns[p.var()] = p.negated() ? l_false : l_true;
    level[p.var()] = decision_level();
    reason[p.var()] = from;
    trail.push_back(p);
  }

  void new_decision_level() { trail_lim.push_back(trail.size()); }

  void cancel_until(int target)
  {
    if (decision_level() <= target) { return; }
    for (auto i = trail.size(); i > trail_lim[static_cast<std::size_t>(target)]; --i) {
      const Var v = trail[i - 1].var();
      assigns[v] = l_undef;
      reason[v] = no_reason;
      polarity[v] = trail[i - 1].negated();
      order.insert(v);
    }
    trail.resize(trail_lim[static_cast<std::size_t>(target)]);
    trail_lim.resize(static_cast<std::size_t>(target));
    qhead = trail.size();
  }

  void attach(CRef cr)
  {
    const auto& c = clauses[cr];
    watches[c.lits[0].code()].push_back({ cr, c.lits[1] });
    watches[c.lits[1].code()].push_back({ cr, c.lits[0] });
  }

  bool add_clause(std::span<const Lit> input)
  {
    assert(decision_level() == 0);
    if (!ok) { return false; }
    std::vector<Lit> lits(input.begin(), input.end());
    for (auto l : lits) {
      while (l.var() >= num_vars()) { new_var(); }
    }
    std::sort(lits.begin(), lits.end());
    std::vector<Lit> kept;
    Lit prev;
    bool have_prev = false;
    for (auto l : lits) {
      if (value(l) == l_true || (have_prev && l == ~prev)) { return true; }
      if (value(l) != l_false && (!have_prev || l != prev)) { kept.push_back(l); }
      prev = l;
      have_prev = true;
    }
    if (kept.empty()) {
      ok = false;
      return false;
    }
    if (kept.size() == 1) {
      enqueue(kept[0], no_reason);
      ok = propagate() == no_reason;
      return ok;
    }
    const auto cr = static_cast<CRef>(clauses.size());
    clauses.push_back(ClauseData{ std::move(kept) });
    attach(cr);
    return true;
  }

  CRef propagate()
  {
    CRef conflict = no_reason;
    while (qhead < trail.size()) {
      const Lit p = trail[qhead++];
      const Lit false_lit = ~p;
      auto& ws = watches[false_lit.code()];
      ++stats.propagations;
      std::size_t i = 0;
      std::size_t j = 0;
      while (i < ws.size()) {
        const Watcher w = ws[i];
        if (value(w.blocker) == l_true) {
          ws[j++] = ws[i++];
          continue;
        }
        auto& c = clauses[w.cref];
        if (c.deleted) {
          ++i;
          continue;
        }
        if (c.lits[0] == false_lit) { std::swap(c.lits[0], c.lits[1]); }
        ++i;
        const Lit first = c.lits[0];
        if (first != w.blocker && value(first) == l_true) {
          ws[j++] = { w.cref, first };
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.lits.size(); ++k) {
          if (value(c.lits[k]) != l_false) {
            std::swap(c.lits[1], c.lits[k]);
            watches[c.lits[1].code()].push_back({ w.cref, first });
            moved = true;
            break;
          }
        }
        if (moved) { continue; }
        ws[j++] = { w.cref, first };
        if (value(first) == l_false) {
          conflict = w.cref;
          qhead = trail.size();
          while (i < ws.size()) { ws[j++] = ws[i++]; }
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != no_reason) { break; }
    }
    return conflict;
  }

  void bump_var(Var v)
  {
    if ((activity[v] += var_inc) > 1e100) {
      for (auto& a : activity) { a *= 1e-100; }
      var_inc *= 1e-100;
    }
    order.increased(v);
  }

  void bump_clause(ClauseData& c)
  {
    if ((c.activity += cla_inc) > 1e20) {
      for (auto cr : learnts) { clauses[cr].activity *= 1e-20; }
      cla_inc *= 1e-20;
    }
  }

  // A literal is redundant if every literal of its reason is already in the
  // learnt clause or fixed at level 0.
  bool redundant(Lit l) const
  {
    const CRef r = reason[l.var()];
    if (r == no_reason) { return false; }
    const auto& c = clauses[r];
    for (std::size_t k = 1; k < c.lits.size(); ++k) {
      const Var v = c.lits[k].var();
      if (seen[v] == 0 && level[v] > 0) { return false; }
    }
    return true;
  }

  void analyze(CRef conflict, std::vector<Lit>& out, int& backtrack_level, std::uint32_t& lbd)
  {
    out.clear();
    out.emplace_back();
    int path = 0;
    Lit p;
    bool have_p = false;
    auto index = trail.size();
    do {
      auto& c = clauses[conflict];
      if (c.learnt) { bump_clause(c); }
      for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
        const Lit q = c.lits[k];
        const Var v = q.var();
        if (seen[v] == 0 && level[v] > 0) {
          seen[v] = 1;
          bump_var(v);
          if (level[v] >= decision_level()) {
            ++path;
          } else {
            out.push_back(q);
          }
        }
      }
      while (seen[trail[--index].var()] == 0) {}
      p = trail[index];
      have_p = true;
      conflict = reason[p.var()];
      seen[p.var()] = 0;
      --path;
    } while (path > 0);
    out[0] = ~p;

    std::vector<Lit> all(out.begin(), out.end());
    std::size_t j = 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (!redundant(out[i])) { out[j++] = out[i]; }
    }
    out.resize(j);
    for (auto l : all) { seen[l.var()] = 0; }

    backtrack_level = 0;
    if (out.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < out.size(); ++i) {
        if (level[out[i].var()] > level[out[max_i].var()]) { max_i = i; }
      }
      std::swap(out[1], out[max_i]);
      backtrack_level = level[out[1].var()];
    }

    std::vector<int> levels;
    levels.reserve(out.size());
    for (auto l : out) { levels.push_back(level[l.var()]); }
    std::sort(levels.begin(), levels.end());
    lbd = static_cast<std::uint32_t>(std::unique(levels.begin(), levels.end()) - levels.begin());
  }

  // Collects the assumptions that imply `p` being false.
  void analyze_final(Lit p)
  {
    failed.clear();
    failed.push_back(~p);
    if (decision_level() == 0) { return; }
    seen[p.var()] = 1;
    // p itself may be an assumption decision when both polarities were assumed.
    for (auto i = trail.size(); i > trail_lim[0]; --i) {
      const Var v = trail[i - 1].var();
      if (seen[v] == 0) { continue; }
      const CRef r = reason[v];
      if (r == no_reason) {
        failed.push_back(trail[i - 1]);
      } else {
        const auto& c = clauses[r];
        for (std::size_t k = 1; k < c.lits.size(); ++k) {
          if (level[c.lits[k].var()] > 0) { seen[c.lits[k].var()] = 1; }
        }
      }
      seen[v] = 0;
    }
    seen[p.var()] = 0;
  }

  [[nodiscard]] bool locked(CRef cr) const
  {
    const auto& c = clauses[cr];
    const Var v = c.lits[0].var();
    return value(c.lits[0]) == l_true && reason[v] == cr;
  }

  void reduce_db()
  {
    std::sort(learnts.begin(), learnts.end(), [&](CRef a, CRef b) {
      const auto& ca = clauses[a];
      const auto& cb = clauses[b];
      if (ca.lbd != cb.lbd) { return ca.lbd > cb.lbd; }
      return ca.activity < cb.activity;
    });
    const auto half = learnts.size() / 2;
    std::vector<CRef> kept;
    kept.reserve(learnts.size());
    for (std::size_t i = 0; i < learnts.size(); ++i) {
      const CRef cr = learnts[i];
      auto& c = clauses[cr];
      if (i < half && c.lits.size() > 2 && c.lbd > 2 && !locked(cr)) {
        c.deleted = true;
        ++stats.deleted_clauses;
      } else {
        kept.push_back(cr);
      }
    }
    learnts = std::move(kept);
    for (auto& ws : watches) {
      std::erase_if(ws, [&](const Watcher& w) { return clauses[w.cref].deleted; });
    }
    for (auto& c : clauses) {
      if (c.deleted && !c.lits.empty()) {
        c.lits.clear();
        c.lits.shrink_to_fit();
      }
    }
  }

  bool pick_branch(Lit& out)
  {
    while (!order.empty()) {
      const Var v = order.pop();
      if (assigns[v] == l_undef) {
        out = Lit(v, polarity[v]);
        return true;
      }
    }
    return false;
  }

  // Returns sat/unsat, or unknown when the restart budget or deadline ran out.
  SatResult search(std::uint64_t conflict_budget, const Deadline& deadline, bool& timed_out)
  {
    std::uint64_t conflicts_here = 0;
    std::vector<Lit> learnt;
    std::uint64_t ticks = 0;
    for (;;) {
      const CRef conflict = propagate();
      if (conflict != no_reason) {
        ++stats.conflicts;
        ++conflicts_here;
        if (decision_level() == 0) {
          failed.clear();
          return SatResult::unsat;
        }
        int backtrack_level = 0;
        std::uint32_t lbd = 0;
        analyze(conflict, learnt, backtrack_level, lbd);
        cancel_until(backtrack_level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], no_reason);
        } else {
          const auto cr = static_cast<CRef>(clauses.size());
          clauses.push_back(ClauseData{ learnt, 0.0, lbd, true, false });
          learnts.push_back(cr);
          ++stats.learnt_clauses;
          attach(cr);
          bump_clause(clauses[cr]);
          enqueue(learnt[0], cr);
        }
        var_inc /= var_decay;
        cla_inc /= cla_decay;
        continue;
      }

      if (((++ticks) & 63U) == 0 && deadline.expired()) {
        timed_out = true;
        cancel_until(0);
        return SatResult::unknown;
      }
      if (conflicts_here >= conflict_budget) {
        cancel_until(0);
        return SatResult::unknown;
      }
      if (static_cast<double>(learnts.size()) >= max_learnts + static_cast<double>(trail.size())) {
        reduce_db();
        max_learnts *= 1.1;
      }

      Lit next;
      bool have_next = false;
      while (static_cast<std::size_t>(decision_level()) < assumptions.size()) {
        const Lit a = assumptions[static_cast<std::size_t>(decision_level())];
        if (value(a) == l_true) {
          new_decision_level();
        } else if (value(a) == l_false) {
          analyze_final(~a);
          return SatResult::unsat;
        } else {
          next = a;
          have_next = true;
          break;
        }
      }
      if (!have_next) {
        if (!pick_branch(next)) { return SatResult::sat; }
        ++stats.decisions;
      }
      new_decision_level();
      enqueue(next, no_reason);
    }
  }

  SatResult solve(std::span<const Lit> assumed, const Deadline& deadline)
  {
    model.clear();
    failed.clear();
    if (!ok) { return SatResult::unsat; }
    assumptions.assign(assumed.begin(), assumed.end());
    for (auto a : assumptions) {
      while (a.var() >= num_vars()) { new_var(); }
    }
    max_learnts = std::max(1000.0, static_cast<double>(clauses.size()) / 3.0);
    SatResult result = SatResult::unknown;
    bool timed_out = false;
    for (int restart = 0; result == SatResult::unknown && !timed_out; ++restart) {
      const auto budget = static_cast<std::uint64_t>(luby(2.0, restart) * 100.0);
      result = search(budget, deadline, timed_out);
      if (result == SatResult::unknown) { ++stats.restarts; }
    }
    if (result == SatResult::sat) {
      model.resize(num_vars());
      for (Var v = 0; v < num_vars(); ++v) { model[v] = assigns[v] == l_true; }
    }
    if (result == SatResult::unsat && failed.empty()) {
      // Refuted without assumptions: the clause set itself is unsatisfiable.
      ok = false;
    }
    cancel_until(0);
    return result;
  }
};

SatSolver::SatSolver() : impl_(std::make_unique<Impl>()) {}
SatSolver::~SatSolver() = default;
SatSolver::SatSolver(SatSolver&&) noexcept = default;
SatSolver& SatSolver::operator=(SatSolver&&) noexcept = default;

Var SatSolver::new_var() { return impl_->new_var(); }

void SatSolver::ensure_var(Var var)
{
  while (var >= impl_->num_vars()) { impl_->new_var(); }
}

std::size_t SatSolver::num_vars() const { return impl_->num_vars(); }

bool SatSolver::add_clause(std::span<const Lit> lits) { return impl_->add_clause(lits); }

SatResult SatSolver::solve(std::span<const Lit> assumptions, const Deadline& deadline)
{
  return impl_->solve(assumptions, deadline);
}

const std::vector<bool>& SatSolver::model() const { return impl_->model; }

const std::vector<Lit>& SatSolver::failed_assumptions() const { return impl_->failed; }

const SatStats& SatSolver::stats() const { return impl_->stats; }

// ---------------------------------------------------------------------------

void DpllSolver::add_clause(std::span<const Lit> lits)
{
  for (auto l : lits) { ensure_var(l.var()); }
  clauses_.emplace_back(lits.begin(), lits.end());
}

namespace {

// 0 = false, 1 = true, 2 = unassigned.
using Assignment = std::vector<std::uint8_t>;

bool lit_true(const Assignment& a, Lit l) { return a[l.var()] != 2 && (a[l.var()] == 1) != l.negated(); }
bool lit_false(const Assignment& a, Lit l) { return a[l.var()] != 2 && (a[l.var()] == 1) == l.negated(); }

// Unit propagation to fixpoint; false on conflict.
bool unit_propagate(const std::vector<PropClause>& clauses, Assignment& a)
{
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : clauses) {
      std::size_t open = 0;
      Lit last;
      bool satisfied = false;
      for (auto l : c) {
        if (lit_true(a, l)) {
          satisfied = true;
          break;
        }
        if (!lit_false(a, l)) {
          ++open;
          last = l;
        }
      }
      if (satisfied) { continue; }
      if (open == 0) { return false; }
      if (open == 1) {
        a[last.var()] = last.negated() ? 0 : 1;
        changed = true;
      }
    }
  }
  return true;
}

enum class Dpll { sat, unsat, timeout };

Dpll dpll(const std::vector<PropClause>& clauses, Assignment a, Assignment& model, const Deadline& deadline)
{
  if (deadline.expired()) { return Dpll::timeout; }
  if (!unit_propagate(clauses, a)) { return Dpll::unsat; }
  auto it = std::find(a.begin(), a.end(), std::uint8_t{ 2 });
  if (it == a.end()) {
    model = std::move(a);
    return Dpll::sat;
  }
  const auto v = static_cast<std::size_t>(it - a.begin());
  for (std::uint8_t value : { std::uint8_t{ 1 }, std::uint8_t{ 0 } }) {
    Assignment branch = a;
    branch[v] = value;
    auto r = dpll(clauses, std::move(branch), model, deadline);
    if (r != Dpll::unsat) { return r; }
  }
  return Dpll::unsat;
}

}  // namespace

SatResult DpllSolver::solve(std::span<const Lit> assumptions, const Deadline& deadline)
{
  model_.clear();
  failed_.clear();
  for (auto l : assumptions) { ensure_var(l.var()); }
  Assignment a(num_vars_, 2);
  for (auto l : assumptions) {
    if (lit_false(a, l)) {
      failed_.assign(assumptions.begin(), assumptions.end());
      return SatResult::unsat;
    }
    a[l.var()] = l.negated() ? 0 : 1;
  }
  Assignment model;
  switch (dpll(clauses_, std::move(a), model, deadline)) {
  case Dpll::sat:
    model_.resize(num_vars_);
    for (std::size_t v = 0; v < num_vars_; ++v) { model_[v] = model[v] == 1; }
    return SatResult::sat;
  case Dpll::unsat: failed_.assign(assumptions.begin(), assumptions.end()); return SatResult::unsat;
  case Dpll::timeout: return SatResult::unknown;
  }
  return SatResult::unknown;
}

}  // namespace instgen::ground
