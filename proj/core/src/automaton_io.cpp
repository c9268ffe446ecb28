// Copyright 2026 The fieldsup Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fieldsup/automaton_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "fieldsup/errors.hpp"

namespace fieldsup {
namespace {

// Splits on whitespace; a double-quoted run is part of the current token
// and may contain spaces. Quotes are kept so the caller can tell labels.
std::vector<std::string> tokenize(std::string_view line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool have = false;
  for (char c : line) {
    if (quoted) {
      cur.push_back(c);
      if (c == '"') quoted = false;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      if (have) out.push_back(std::move(cur));
      cur.clear();
      have = false;
      continue;
    }
    if (c == '"') quoted = true;
    cur.push_back(c);
    have = true;
  }
  if (quoted) throw ParseError(lineno, "unterminated quoted label");
  if (have) out.push_back(std::move(cur));
  return out;
}

std::string unquote(std::string_view s, std::size_t lineno) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return std::string(s.substr(1, s.size() - 2));
  }
  if (s.find('"') != std::string_view::npos) {
    throw ParseError(lineno, "malformed label '" + std::string(s) + "'");
  }
  return std::string(s);
}

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (c == ':' || c == '"' || c == '#' || c == ' ' || c == '\t') return false;
  }
  return true;
}

struct StateDecl {
  std::string id;
  std::string label;
  std::size_t line;
};

struct TransDecl {
  std::string src, event, dst;
  std::size_t line;
};

}  // namespace

Fsa parse_fsa(std::string_view text, std::string default_name) {
  std::string name = std::move(default_name);
  std::vector<EventDef> events;
  std::map<std::string, std::size_t, std::less<>> event_line;
  std::vector<StateDecl> states;
  std::map<std::string, std::size_t, std::less<>> state_line;
  std::optional<std::pair<std::string, std::size_t>> initial;
  std::vector<std::pair<std::string, std::size_t>> marked;
  std::vector<TransDecl> trans;
  bool have_name = false;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;

    // Strip comments outside quotes.
    bool quoted = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    raw = raw.substr(0, cut);
    auto colon = raw.find(':');
    auto toks = tokenize(raw, lineno);
    if (toks.empty()) continue;
    if (colon == std::string_view::npos) {
      throw ParseError(lineno, "expected '<keyword>:'");
    }
    std::string key(raw.substr(0, colon));
    while (!key.empty() && (key.front() == ' ' || key.front() == '\t')) key.erase(0, 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    auto args = tokenize(raw.substr(colon + 1), lineno);

    if (key == "name") {
      if (have_name) throw ParseError(lineno, "duplicate name");
      if (args.size() != 1) throw ParseError(lineno, "name takes one value");
      name = unquote(args[0], lineno);
      have_name = true;
    } else if (key == "alphabet") {
      for (const auto& a : args) {
        auto c1 = a.find(':');
        if (c1 == std::string::npos) {
          throw ParseError(lineno, "event '" + a + "' lacks ':c' or ':u'");
        }
        std::string id = a.substr(0, c1);
        std::string rest = a.substr(c1 + 1);
        std::string kind = rest;
        std::string label;
        if (auto c2 = rest.find(':'); c2 != std::string::npos) {
          kind = rest.substr(0, c2);
          label = unquote(rest.substr(c2 + 1), lineno);
        }
        if (!valid_id(id)) throw ParseError(lineno, "bad event id '" + id + "'");
        if (kind != "c" && kind != "u") {
          throw ParseError(lineno, "event '" + id + "' kind must be c or u");
        }
        if (event_line.contains(id)) {
          throw ParseError(lineno, "duplicate event '" + id + "' (first on line " +
                                       std::to_string(event_line[id]) + ")");
        }
        event_line.emplace(id, lineno);
        events.push_back(EventDef{id, kind == "c", label});
      }
    } else if (key == "states") {
      for (const auto& a : args) {
        std::string id = a;
        std::string label;
        if (auto c1 = a.find(':'); c1 != std::string::npos) {
          id = a.substr(0, c1);
          label = unquote(a.substr(c1 + 1), lineno);
        }
        if (!valid_id(id)) throw ParseError(lineno, "bad state id '" + id + "'");
        if (state_line.contains(id)) {
          throw ParseError(lineno, "duplicate state '" + id + "'");
        }
        state_line.emplace(id, lineno);
        states.push_back(StateDecl{id, label, lineno});
      }
    } else if (key == "initial") {
      if (initial) throw ParseError(lineno, "duplicate initial");
      if (args.size() != 1) throw ParseError(lineno, "initial takes one state");
      initial.emplace(args[0], lineno);
    } else if (key == "marked") {
      for (const auto& a : args) marked.emplace_back(a, lineno);
    } else if (key == "trans") {
      if (args.size() != 3) {
        throw ParseError(lineno, "trans needs <src> <event> <dst>");
      }
      trans.push_back(TransDecl{args[0], args[1], args[2], lineno});
    } else {
      throw ParseError(lineno, "unknown keyword '" + key + "'");
    }
  }

  Alphabet alphabet;
  try {
    alphabet = Alphabet(events);
  } catch (const ModelError& e) {
    throw ParseError(0, e.what());
  }
  FsaBuilder b(name, alphabet);
  for (const auto& s : states) b.add_state(s.id, s.label);

  auto need_state = [&](const std::string& id, std::size_t line) {
    auto s = b.find_state(id);
    if (!s) throw ParseError(line, "undeclared state '" + id + "'");
    return *s;
  };
  if (!states.empty() && !initial) {
    throw ParseError(lineno, "missing initial state");
  }
  if (initial) b.set_initial(need_state(initial->first, initial->second));
  std::set<std::string> seen_marked;
  for (const auto& [id, line] : marked) {
    if (!seen_marked.insert(id).second) {
      throw ParseError(line, "state '" + id + "' marked twice");
    }
    b.mark(need_state(id, line));
  }
  std::set<std::pair<std::string, std::string>> seen_trans;
  for (const auto& t : trans) {
    StateId src = need_state(t.src, t.line);
    StateId dst = need_state(t.dst, t.line);
    auto e = alphabet.find(t.event);
    if (!e) throw ParseError(t.line, "undeclared event '" + t.event + "'");
    if (!seen_trans.emplace(t.src, t.event).second) {
      throw ParseError(t.line, "duplicate transition from '" + t.src +
                                   "' on '" + t.event + "'");
    }
    b.add_transition(src, *e, dst);
  }
  return std::move(b).build();
}

Fsa read_fsa(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_fsa(ss.str(), path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

namespace {

std::string label_suffix(const std::string& label) {
  if (label.empty()) return {};
  if (label.find_first_of("\"\n") != std::string::npos) {
    throw ModelError("label '" + label + "' contains a quote or newline");
  }
  return ":\"" + label + "\"";
}

}  // namespace

std::string write_fsa(const Fsa& a) {
  std::ostringstream os;
  if (!a.name().empty()) os << "name: " << a.name() << '\n';
  for (const auto& e : a.alphabet().events()) {
    os << "alphabet: " << e.id << ':' << (e.controllable ? 'c' : 'u')
       << label_suffix(e.label) << '\n';
  }
  for (StateId s = 0; s < a.num_states(); ++s) {
    os << "states: " << a.state_id(s) << label_suffix(a.state_label(s)) << '\n';
  }
  if (!a.empty()) os << "initial: " << a.state_id(a.initial()) << '\n';
  bool any = false;
  for (StateId s = 0; s < a.num_states(); ++s) {
    if (!a.is_marked(s)) continue;
    os << (any ? " " : "marked: ") << a.state_id(s);
    any = true;
  }
  if (any) os << '\n';
  for (StateId s = 0; s < a.num_states(); ++s) {
    for (const auto& t : a.out(s)) {
      os << "trans: " << a.state_id(s) << ' ' << a.alphabet()[t.event].id << ' '
         << a.state_id(t.target) << '\n';
    }
  }
  return os.str();
}

void save_fsa(const Fsa& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << write_fsa(a);
}

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string to_dot(const Fsa& a) {
  std::ostringstream os;
  os << "digraph " << dot_quote(a.name().empty() ? "fsa" : a.name()) << " {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=circle];\n";
  if (!a.empty()) os << "  __init [shape=point, style=invis];\n";
  for (StateId s = 0; s < a.num_states(); ++s) {
    const auto& label = a.state_label(s);
    os << "  " << dot_quote(a.state_id(s)) << " [label="
       << dot_quote(label.empty() ? a.state_id(s) : a.state_id(s) + "\n" + label);
    if (a.is_marked(s)) os << ", shape=doublecircle";
    os << "];\n";
  }
  if (!a.empty()) os << "  __init -> " << dot_quote(a.state_id(a.initial())) << ";\n";
  for (StateId s = 0; s < a.num_states(); ++s) {
    for (const auto& t : a.out(s)) {
      const auto& ev = a.alphabet()[t.event];
      os << "  " << dot_quote(a.state_id(s)) << " -> "
         << dot_quote(a.state_id(t.target)) << " [label=" << dot_quote(ev.id);
      if (!ev.controllable) os << ", style=dashed";
      os << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace fieldsup
