#include "cfsm/io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace cfsm {

namespace {

struct token {
  enum class kind { ident, lbrace, rbrace, bang, question, end } type;
  std::string text;
  bool quoted = false;
  int line = 0;
  int column = 0;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

[[noreturn]] void syntax(int line, int col, std::string msg) {
  throw error({diagnostic{errc::syntax_error, std::move(msg), line, col}});
}

std::vector<token> tokenize(std::string_view text) {
  std::vector<token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    token t{token::kind::ident, {}, false, line, col};
    if (c == '{' || c == '}' || c == '!' || c == '?') {
      t.type = c == '{'   ? token::kind::lbrace
               : c == '}' ? token::kind::rbrace
               : c == '!' ? token::kind::bang
                          : token::kind::question;
      t.text = std::string(1, c);
      advance();
    } else if (c == '"') {
      t.quoted = true;
      advance();
      while (true) {
        if (i >= text.size() || text[i] == '\n')
          syntax(t.line, t.column, "unterminated quoted identifier");
        if (text[i] == '"') {
          advance();
          break;
        }
        if (text[i] == '\\' && i + 1 < text.size()) advance();
        t.text += text[i];
        advance();
      }
      if (t.text.empty()) syntax(t.line, t.column, "empty quoted identifier");
    } else if (ident_char(c)) {
      while (i < text.size() && ident_char(text[i])) {
        t.text += text[i];
        advance();
      }
    } else {
      syntax(line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  out.push_back({token::kind::end, {}, false, line, col});
  return out;
}

class parser {
public:
  explicit parser(std::string_view text) : toks_(tokenize(text)) {}

  raw_system parse(std::map<std::pair<participant, transition>,
                            std::pair<int, int>>& where) {
    raw_system sys;
    keyword("system");
    sys.name = ident("system name").text;
    std::map<participant, int> seen;
    while (is_keyword("machine")) {
      const auto& kw = next();
      auto owner = participant{ident("participant").text};
      if (seen.count(owner))
        syntax(kw.line, kw.column,
               "duplicate machine for " + owner.name + " (first on line " +
                   std::to_string(seen[owner]) + ")");
      seen[owner] = kw.line;
      expect(token::kind::lbrace, "'{'");
      keyword("init");
      auto init = ident("initial state").text;
      std::vector<transition> ts;
      while (peek().type != token::kind::rbrace) {
        if (peek().type == token::kind::end)
          syntax(peek().line, peek().column,
                 "missing '}' for machine " + owner.name);
        if (is_keyword("init"))
          syntax(peek().line, peek().column,
                 "duplicate init in machine " + owner.name);
        const auto start = peek();
        auto src = ident("state").text;
        transition t;
        try {
          if (is_keyword("tau")) {
            next();
            t = {src, action_label::tau(), ident("state").text};
          } else if (peek().type == token::kind::bang ||
                     peek().type == token::kind::question) {
            bool out = next().type == token::kind::bang;
            auto other = participant{ident("participant").text};
            auto msg = message{ident("message").text};
            auto tgt = ident("state").text;
            t = {src,
                 out ? action_label::output(owner, other, msg)
                     : action_label::input(other, owner, msg),
                 tgt};
          } else {
            syntax(peek().line, peek().column,
                   "expected 'tau', '!' or '?' but found " + describe(peek()));
          }
        } catch (const error& e) {
          if (e.code() != errc::invalid_label) throw;
          throw error({diagnostic{errc::invalid_label,
                                  owner.name + ": " +
                                      e.diagnostics().front().message,
                                  start.line, start.column}});
        }
        where.emplace(std::make_pair(owner, t),
                      std::make_pair(start.line, start.column));
        ts.push_back(std::move(t));
      }
      next();
      sys.machines.push_back({owner, fsa(init, std::move(ts)), kw.line});
    }
    if (sys.machines.empty())
      syntax(peek().line, peek().column,
             "expected 'machine' but found " + describe(peek()));
    if (peek().type != token::kind::end)
      syntax(peek().line, peek().column,
             "expected 'machine' or end of file but found " + describe(peek()));
    return sys;
  }

private:
  const token& peek() const { return toks_[pos_]; }
  const token& next() {
    const auto& t = toks_[pos_];
    if (t.type != token::kind::end) ++pos_;
    return t;
  }
  bool is_keyword(std::string_view kw) const {
    return peek().type == token::kind::ident && !peek().quoted &&
           peek().text == kw;
  }
  static std::string describe(const token& t) {
    if (t.type == token::kind::end) return "end of file";
    return "'" + t.text + "'";
  }
  void keyword(std::string_view kw) {
    if (!is_keyword(kw))
      syntax(peek().line, peek().column,
             "expected '" + std::string(kw) + "' but found " + describe(peek()));
    next();
  }
  const token& ident(std::string_view what) {
    if (peek().type != token::kind::ident)
      syntax(peek().line, peek().column,
             "expected " + std::string(what) + " but found " + describe(peek()));
    return next();
  }
  void expect(token::kind k, std::string_view what) {
    if (peek().type != k)
      syntax(peek().line, peek().column,
             "expected " + std::string(what) + " but found " + describe(peek()));
    next();
  }

  std::vector<token> toks_;
  std::size_t pos_ = 0;
};

bool is_keyword_text(std::string_view s) {
  return s == "system" || s == "machine" || s == "init" || s == "tau";
}

std::string quote(std::string_view id) {
  if (is_token(id) && !is_keyword_text(id)) return std::string(id);
  std::string out = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string edge_line(const transition& t) {
  std::string out = "  " + quote(t.source);
  if (t.label.is_tau()) {
    out += " tau ";
  } else {
    out += t.label.is_output() ? " ! " : " ? ";
    out += quote(t.label.partner().name) + " " + quote(t.label.msg().name) + " ";
  }
  return out + quote(t.target) + "\n";
}

std::string machine_block(const participant& owner, const fsa& g) {
  std::string out = "machine " + quote(owner.name) + " {\n";
  out += "  init " + quote(g.initial()) + "\n";
  for (const auto& t : g.transitions()) out += edge_line(t);
  return out + "}\n";
}

std::string dot_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string_view role_name(fresh_origin::role r) {
  switch (r) {
  case fresh_origin::role::peer_input: return "peer input";
  case fresh_origin::role::own_input: return "forwarded input";
  case fresh_origin::role::peer_output: return "forwarding output";
  }
  return "";
}

} // namespace

raw_system parse_raw_system(std::string_view text) {
  std::map<std::pair<participant, transition>, std::pair<int, int>> where;
  return parser(text).parse(where);
}

system parse_system_file(std::string_view text) {
  std::map<std::pair<participant, transition>, std::pair<int, int>> where;
  auto raw = parser(text).parse(where);
  auto locate = [&](const participant& p, const transition& t) {
    auto it = where.find({p, t});
    return it == where.end() ? std::make_pair(0, 0) : it->second;
  };

  std::vector<diagnostic> problems;
  std::map<participant, machine> ms;
  for (auto& rm : raw.machines) {
    const auto owner = rm.owner;
    auto vs = cfsm_violations(rm.graph, owner, [&](const transition& t) {
      return locate(owner, t);
    });
    if (!vs.empty()) {
      for (auto& d : vs) d.message = owner.name + ": " + d.message;
      problems.insert(problems.end(), vs.begin(), vs.end());
      continue;
    }
    ms.emplace(owner, validate_cfsm(std::move(rm.graph), owner));
  }
  if (!problems.empty()) throw error(std::move(problems));
  return validate_system(std::move(ms), raw.name, locate);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

system read_system_file(const std::filesystem::path& path) {
  return parse_system_file(read_text_file(path));
}

std::string serialize_system(const system& sys) {
  std::string out = "system " + quote(sys.name()) + "\n";
  for (const auto& [p, m] : sys.machines())
    out += "\n" + machine_block(p, m.graph());
  return out;
}

std::string serialize_raw_system(const raw_system& sys) {
  std::map<participant, const raw_machine*> sorted;
  for (const auto& m : sys.machines) sorted[m.owner] = &m;
  std::string out = "system " + quote(sys.name) + "\n";
  for (const auto& [p, m] : sorted) out += "\n" + machine_block(p, m->graph);
  return out;
}

std::string serialize_composed(const composed_system& cs) {
  std::string out = "# composition of " + cs.left.name() + " via " +
                    cs.h.name + " and " + cs.right.name() + " via " +
                    cs.k.name + (cs.forced ? " (forced)" : "") + "\n";
  out += "system " + quote(cs.sys.name()) + "\n";
  for (const auto& [p, m] : cs.sys.machines()) {
    out += "\n";
    const gateway* gw = p == cs.h   ? &cs.left_gateway
                        : p == cs.k ? &cs.right_gateway
                                    : nullptr;
    if (gw) {
      out += "# gateway of " + gw->owner().name + " towards " +
             gw->peer().name + "\n";
      for (const auto& [q, o] : gw->provenance())
        out += "#   " + quote(q) + ": " + std::string(role_name(o.kind)) +
               ", from " + to_string(o.origin) + "\n";
    }
    out += machine_block(p, m.graph());
  }
  return out;
}

std::string export_dot(const machine& m) {
  std::string out = "digraph " + dot_string(m.subject().name) + " {\n";
  out += "  rankdir=LR;\n  node [shape=circle];\n";
  for (const auto& q : m.states())
    out += "  " + dot_string(q) +
           (q == m.initial() ? " [shape=doublecircle];\n" : ";\n");
  for (const auto& t : m.transitions())
    out += "  " + dot_string(t.source) + " -> " + dot_string(t.target) +
           " [label=" + dot_string(t.label.str()) + "];\n";
  return out + "}\n";
}

std::string export_dot(const sem_lts& lts) {
  std::string out = "digraph lts {\n  node [shape=box];\n";
  for (std::size_t i = 0; i < lts.size(); ++i) {
    out += "  c" + std::to_string(i) + " [label=" +
           dot_string(to_string(lts.config(i)));
    if (i == lts.initial()) out += ", peripheries=2";
    out += "];\n";
  }
  for (const auto& e : lts.edges())
    out += "  c" + std::to_string(e.source) + " -> c" +
           std::to_string(e.target) + " [label=" + dot_string(e.label.str()) +
           "];\n";
  return out + "}\n";
}

std::string report_to_json(const property_report& r) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["property"] = std::string(to_string(r.property));
  doc["holds"] = r.holds;
  auto ws = ordered_json::array();
  for (const auto& w : r.witnesses) {
    ordered_json j;
    j["kind"] = std::string(to_string(w.kind));
    ordered_json conf = ordered_json::object();
    for (const auto& [p, q] : w.config) conf[p.name] = q;
    j["config"] = conf;
    if (w.who) j["participant"] = w.who->name;
    j["evidence"] = w.evidence();
    if (w.cycle_start) j["cycle_start"] = *w.cycle_start;
    ws.push_back(std::move(j));
  }
  doc["witnesses"] = std::move(ws);
  if (r.truncated) doc["truncated"] = true;
  return doc.dump(2) + "\n";
}

std::string certificate_to_json(const machine& m1, const machine& m2,
                                const compatibility_result& res) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["compatible"] = res.compatible;
  doc["left"] = {{"participant", m1.subject().name}, {"initial", m1.initial()}};
  doc["right"] = {{"participant", m2.subject().name}, {"initial", m2.initial()}};
  auto pairs = ordered_json::array();
  for (const auto& [q, r] : res.relation.pairs) pairs.push_back({q, r});
  doc["pairs"] = std::move(pairs);
  return doc.dump(2) + "\n";
}

} // namespace cfsm
