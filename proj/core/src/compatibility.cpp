#include "cfsm/compatibility.hpp"

#include <algorithm>

namespace cfsm {

std::string io_label::str() const {
  switch (kind_) {
  case kind::tau: return "tau";
  case kind::out: return "!" + msg_.name;
  case kind::in: return "?" + msg_.name;
  }
  return {};
}

io_label io_of(const action_label& l) {
  if (l.is_output()) return io_label::out(l.msg());
  if (l.is_input()) return io_label::in(l.msg());
  return io_label::tau();
}

io_fsa io_projection(const machine& m) {
  std::vector<io_fsa::transition> ts;
  ts.reserve(m.transitions().size());
  for (const auto& t : m.transitions())
    ts.push_back({t.source, io_of(t.label), t.target});
  return io_fsa(m.initial(), std::move(ts), m.states());
}

io_label dual_label(const io_label& l) {
  if (l.is_out()) return io_label::in(l.msg());
  if (l.is_in()) return io_label::out(l.msg());
  return l;
}

namespace {

struct indexed {
  std::vector<state_id> names;
  // per state: (label, target index)
  std::vector<std::vector<std::pair<io_label, std::size_t>>> out;

  explicit indexed(const io_fsa& f)
      : names(f.states().begin(), f.states().end()), out(names.size()) {
    for (const auto& t : f.transitions())
      out[of(t.source)].push_back({t.label, of(t.target)});
  }
  std::size_t of(const state_id& q) const {
    return static_cast<std::size_t>(
        std::lower_bound(names.begin(), names.end(), q) - names.begin());
  }
  bool terminal(std::size_t q) const { return out[q].empty(); }
};

// Returns the first failing clause for (q, r) against `in`, or 0.
template <class In>
int failing_clause(const indexed& a, const indexed& b, std::size_t q,
                   std::size_t r, In in) {
  if (a.terminal(q) != b.terminal(r)) return 1;
  for (const auto& [l, q2] : a.out[q]) {
    if (!l.is_out()) continue;
    bool matched = std::any_of(b.out[r].begin(), b.out[r].end(), [&](auto& x) {
      return x.first == dual_label(l) && in(q2, x.second);
    });
    if (!matched) return 2;
  }
  for (const auto& [l, r2] : b.out[r]) {
    if (!l.is_out()) continue;
    bool matched = std::any_of(a.out[q].begin(), a.out[q].end(), [&](auto& x) {
      return x.first == dual_label(l) && in(x.second, r2);
    });
    if (!matched) return 3;
  }
  for (const auto& [l, q2] : a.out[q])
    if (l.is_tau() && !in(q2, r)) return 4;
  for (const auto& [l, r2] : b.out[r])
    if (l.is_tau() && !in(q, r2)) return 5;
  return 0;
}

} // namespace

io_correspondence greatest_io_correspondence(const machine& m1,
                                             const machine& m2) {
  const indexed a(io_projection(m1)), b(io_projection(m2));
  const auto n1 = a.names.size(), n2 = b.names.size();
  std::vector<bool> rel(n1 * n2, true);
  auto in = [&](std::size_t q, std::size_t r) { return rel[q * n2 + r]; };

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t q = 0; q < n1; ++q)
      for (std::size_t r = 0; r < n2; ++r)
        if (rel[q * n2 + r] && failing_clause(a, b, q, r, in) != 0) {
          rel[q * n2 + r] = false;
          changed = true;
        }
  }

  io_correspondence out;
  for (std::size_t q = 0; q < n1; ++q)
    for (std::size_t r = 0; r < n2; ++r)
      if (rel[q * n2 + r]) out.pairs.emplace(a.names[q], b.names[r]);
  return out;
}

compatibility_result check_compatibility(const machine& m1,
                                         const machine& m2) {
  compatibility_result res;
  res.relation = greatest_io_correspondence(m1, m2);
  res.compatible = res.relation.contains(m1.initial(), m2.initial());
  return res;
}

std::vector<std::string> correspondence_violations(
    const machine& m1, const machine& m2, const io_correspondence& r) {
  const indexed a(io_projection(m1)), b(io_projection(m2));
  std::vector<std::string> out;
  auto in = [&](std::size_t q, std::size_t s) {
    return r.contains(a.names[q], b.names[s]);
  };
  for (const auto& [q, s] : r.pairs) {
    if (!m1.contains(q) || !m2.contains(s)) {
      out.push_back("(" + q + ", " + s + "): unknown state");
      continue;
    }
    if (int c = failing_clause(a, b, a.of(q), b.of(s), in))
      out.push_back("(" + q + ", " + s + "): clause " + std::to_string(c));
  }
  return out;
}

} // namespace cfsm
