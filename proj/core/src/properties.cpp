#include "cfsm/properties.hpp"

#include <algorithm>
#include <deque>

namespace cfsm {

std::string_view to_string(property_kind p) {
  switch (p) {
  case property_kind::deadlock_freedom: return "deadlock-freedom";
  case property_kind::lock_freedom: return "lock-freedom";
  case property_kind::strong_lock_freedom: return "strong-lock-freedom";
  }
  return "unknown";
}

std::string_view to_string(witness_kind k) {
  switch (k) {
  case witness_kind::deadlock: return "deadlock";
  case witness_kind::lock: return "lock";
  case witness_kind::slf_violation: return "slf-violation";
  }
  return "unknown";
}

std::vector<std::string> witness::evidence() const {
  std::vector<std::string> out;
  if (kind == witness_kind::lock) {
    for (const auto& c : reachable) out.push_back(to_string(c));
    return out;
  }
  for (const auto& l : labels) out.push_back(l.str());
  return out;
}

namespace {

using index = std::size_t;
constexpr index none = static_cast<index>(-1);

// Configurations in breadth-first order from the initial one, following the
// sorted edge lists.
std::vector<index> bfs_order(const sem_lts& lts) {
  std::vector<index> order;
  std::vector<bool> seen(lts.size(), false);
  order.push_back(lts.initial());
  seen[lts.initial()] = true;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto& e : lts.out_edges(order[i]))
      if (!seen[e.target]) {
        seen[e.target] = true;
        order.push_back(e.target);
      }
  return order;
}

// enabled[c][a]: participant a has a local transition at configuration c.
std::vector<std::vector<bool>> enabled_table(const system& sys,
                                             const sem_lts& lts) {
  const auto& parts = lts.participants();
  std::vector<std::vector<bool>> out(lts.size(),
                                     std::vector<bool>(parts.size(), false));
  for (index c = 0; c < lts.size(); ++c) {
    const auto& conf = lts.config(c);
    for (std::size_t a = 0; a < parts.size(); ++a)
      out[c][a] = sys.at(parts[a]).graph().out_degree(conf.at(parts[a])) > 0;
  }
  return out;
}

// Backward closure of `seeds` over edges accepted by `keep`.
template <class Keep>
std::vector<bool> backward_closure(const sem_lts& lts,
                                   const std::vector<bool>& seeds, Keep keep) {
  std::vector<std::vector<index>> pred(lts.size());
  for (const auto& e : lts.edges())
    if (keep(e)) pred[e.target].push_back(e.source);
  std::vector<bool> mark = seeds;
  std::vector<index> stack;
  for (index c = 0; c < lts.size(); ++c)
    if (mark[c]) stack.push_back(c);
  while (!stack.empty()) {
    auto c = stack.back();
    stack.pop_back();
    for (auto p : pred[c])
      if (!mark[p]) {
        mark[p] = true;
        stack.push_back(p);
      }
  }
  return mark;
}

// Iterative Tarjan over the edges accepted by `keep`; returns the component
// id of each configuration and whether that component contains an edge.
template <class Keep>
std::pair<std::vector<index>, std::vector<bool>>
cyclic_components(const sem_lts& lts, Keep keep) {
  const index n = lts.size();
  std::vector<index> comp(n, none), low(n, 0), num(n, none);
  std::vector<bool> on_stack(n, false);
  std::vector<index> stack;
  std::vector<std::pair<index, std::size_t>> call; // (node, next edge slot)
  index counter = 0, ncomp = 0;

  for (index root = 0; root < n; ++root) {
    if (num[root] != none) continue;
    call.push_back({root, 0});
    num[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, slot] = call.back();
      auto out = lts.out_edges(v);
      if (slot < out.size()) {
        const auto& e = out[slot++];
        if (!keep(e)) continue;
        auto w = e.target;
        if (num[w] == none) {
          num[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], num[w]);
        }
        continue;
      }
      if (low[v] == num[v]) {
        index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      auto done = v;
      call.pop_back();
      if (!call.empty())
        low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }

  std::vector<bool> cyclic(ncomp, false);
  for (const auto& e : lts.edges())
    if (keep(e) && comp[e.source] == comp[e.target]) cyclic[comp[e.source]] = true;
  return {std::move(comp), std::move(cyclic)};
}

// Shortest path from `from` to a configuration satisfying `goal`, following
// edges accepted by `keep`; edge list of the path, or nullopt.
template <class Keep, class Goal>
std::optional<std::vector<const sem_edge*>>
shortest_path(const sem_lts& lts, index from, Keep keep, Goal goal,
              bool nonempty = false) {
  std::vector<const sem_edge*> via(lts.size(), nullptr);
  std::vector<bool> seen(lts.size(), false);
  std::deque<index> queue;
  auto unwind = [&](index c) {
    std::vector<const sem_edge*> path;
    while (true) {
      auto* e = via[c];
      if (!e) break;
      path.push_back(e);
      c = e->source;
      if (c == from) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };
  if (!nonempty) {
    if (goal(from)) return std::vector<const sem_edge*>{};
    seen[from] = true;
  }
  queue.push_back(from);
  while (!queue.empty()) {
    auto c = queue.front();
    queue.pop_front();
    for (const auto& e : lts.out_edges(c)) {
      if (!keep(e) || seen[e.target]) continue;
      seen[e.target] = true;
      via[e.target] = &e;
      if (goal(e.target)) return unwind(e.target);
      queue.push_back(e.target);
    }
  }
  return std::nullopt;
}

void keep_witness(property_report& r, witness w, std::size_t cap) {
  r.holds = false;
  if (r.witnesses.size() < cap)
    r.witnesses.push_back(std::move(w));
  else
    r.truncated = true;
}

} // namespace

property_report find_deadlocks(const system& sys, const sem_lts& lts,
                               std::size_t max_witnesses) {
  property_report r;
  r.property = property_kind::deadlock_freedom;
  auto enabled = enabled_table(sys, lts);
  for (auto c : bfs_order(lts)) {
    if (!lts.out_edges(c).empty()) continue;
    if (std::none_of(enabled[c].begin(), enabled[c].end(),
                     [](bool b) { return b; }))
      continue;
    witness w;
    w.kind = witness_kind::deadlock;
    w.config = lts.config(c);
    w.trace = {w.config};
    keep_witness(r, std::move(w), max_witnesses);
  }
  return r;
}

property_report find_locks(const system& sys, const sem_lts& lts,
                           std::size_t max_witnesses) {
  property_report r;
  r.property = property_kind::lock_freedom;
  const auto& parts = lts.participants();
  auto enabled = enabled_table(sys, lts);

  // live[a][c]: some edge involving participant a is reachable from c
  std::vector<std::vector<bool>> live;
  for (const auto& p : parts) {
    std::vector<bool> seeds(lts.size(), false);
    for (const auto& e : lts.edges())
      if (e.label.involves(p)) seeds[e.source] = true;
    live.push_back(
        backward_closure(lts, seeds, [](const sem_edge&) { return true; }));
  }

  for (auto c : bfs_order(lts)) {
    for (std::size_t a = 0; a < parts.size(); ++a) {
      if (!enabled[c][a] || live[a][c]) continue;
      witness w;
      w.kind = witness_kind::lock;
      w.config = lts.config(c);
      w.who = parts[a];
      if (r.witnesses.size() < max_witnesses) {
        std::vector<bool> seen(lts.size(), false);
        std::vector<index> order{c};
        seen[c] = true;
        for (std::size_t i = 0; i < order.size(); ++i)
          for (const auto& e : lts.out_edges(order[i]))
            if (!seen[e.target]) {
              seen[e.target] = true;
              order.push_back(e.target);
            }
        std::sort(order.begin(), order.end());
        for (auto x : order) w.reachable.push_back(lts.config(x));
      }
      keep_witness(r, std::move(w), max_witnesses);
    }
  }
  return r;
}

property_report check_strong_lock_freedom(const system& sys,
                                          const sem_lts& lts,
                                          std::size_t max_witnesses) {
  property_report r;
  r.property = property_kind::strong_lock_freedom;
  const auto& parts = lts.participants();
  auto enabled = enabled_table(sys, lts);
  const auto order = bfs_order(lts);

  std::vector<bool> dead(lts.size(), false);
  for (index c = 0; c < lts.size(); ++c) dead[c] = lts.out_edges(c).empty();

  struct per_participant {
    std::vector<index> comp;
    std::vector<bool> cyclic_comp;
    std::vector<bool> bad;
  };
  std::vector<per_participant> info;
  for (const auto& p : parts) {
    auto avoid = [&p](const sem_edge& e) { return !e.label.involves(p); };
    auto [comp, cyclic] = cyclic_components(lts, avoid);
    std::vector<bool> seeds(lts.size(), false);
    for (index c = 0; c < lts.size(); ++c)
      seeds[c] = dead[c] || cyclic[comp[c]];
    auto bad = backward_closure(lts, seeds, avoid);
    info.push_back({std::move(comp), std::move(cyclic), std::move(bad)});
  }

  for (auto c : order) {
    for (std::size_t a = 0; a < parts.size(); ++a) {
      if (!enabled[c][a] || !info[a].bad[c]) continue;
      witness w;
      w.kind = witness_kind::slf_violation;
      w.config = lts.config(c);
      w.who = parts[a];
      if (r.witnesses.size() < max_witnesses) {
        const auto& pi = info[a];
        const auto& p = parts[a];
        auto avoid = [&p](const sem_edge& e) { return !e.label.involves(p); };
        auto stem = shortest_path(lts, c, avoid, [&](index x) {
          return dead[x] || pi.cyclic_comp[pi.comp[x]];
        });
        std::vector<const sem_edge*> path = stem.value();
        index end = path.empty() ? c : path.back()->target;
        if (!dead[end]) {
          // close the lasso inside the component of `end`
          auto same = [&](const sem_edge& e) {
            return avoid(e) && pi.comp[e.target] == pi.comp[end];
          };
          auto loop = shortest_path(
              lts, end, same, [&](index x) { return x == end; }, true);
          w.cycle_start = path.size();
          path.insert(path.end(), loop->begin(), loop->end());
        }
        w.trace.push_back(w.config);
        for (const auto* e : path) {
          w.labels.push_back(e->label);
          w.trace.push_back(lts.config(e->target));
        }
      }
      keep_witness(r, std::move(w), max_witnesses);
    }
  }
  return r;
}

bool validate_witness(const system& sys, const sem_lts& lts,
                      const witness& w) {
  auto start = lts.index_of(w.config);
  if (!start) return false;
  auto has_edge = [&](const configuration& from, const sem_label& l,
                      const configuration& to) {
    auto f = lts.index_of(from);
    auto t = lts.index_of(to);
    if (!f || !t) return false;
    for (const auto& e : lts.out_edges(*f))
      if (e.label == l && e.target == *t) return true;
    return false;
  };
  switch (w.kind) {
  case witness_kind::deadlock:
    return lts.out_edges(*start).empty() &&
           !enabled_participants(sys, w.config).empty();
  case witness_kind::lock: {
    if (!w.who || sys.at(*w.who).graph().out_degree(w.config.at(*w.who)) == 0)
      return false;
    std::set<std::size_t> listed;
    for (const auto& c : w.reachable) {
      auto i = lts.index_of(c);
      if (!i) return false;
      listed.insert(*i);
    }
    if (!listed.count(*start)) return false;
    // the listed set must be closed under edges, none of them involving who
    for (auto i : listed)
      for (const auto& e : lts.out_edges(i))
        if (e.label.involves(*w.who) || !listed.count(e.target)) return false;
    return true;
  }
  case witness_kind::slf_violation: {
    if (!w.who || w.trace.size() != w.labels.size() + 1 ||
        w.trace.front() != w.config)
      return false;
    if (!enabled_participants(sys, w.config).count(*w.who)) return false;
    for (std::size_t i = 0; i < w.labels.size(); ++i)
      if (w.labels[i].involves(*w.who) ||
          !has_edge(w.trace[i], w.labels[i], w.trace[i + 1]))
        return false;
    if (w.cycle_start)
      return *w.cycle_start < w.labels.size() &&
             w.trace[*w.cycle_start] == w.trace.back();
    auto last = lts.index_of(w.trace.back());
    return last && lts.out_edges(*last).empty();
  }
  }
  return false;
}

bool check_implication_chain(const system& sys, const sem_lts& lts) {
  auto df = find_deadlocks(sys, lts).holds;
  auto lf = find_locks(sys, lts).holds;
  auto slf = check_strong_lock_freedom(sys, lts).holds;
  if ((slf && !lf) || (lf && !df))
    throw error(errc::internal_inconsistency,
                "implication chain broken on " + sys.name() +
                    ": slf=" + std::to_string(slf) + " lf=" +
                    std::to_string(lf) + " df=" + std::to_string(df));
  return true;
}

} // namespace cfsm
