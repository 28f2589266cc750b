#include "rbnkit/text_format.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace rbnkit {

namespace {

struct Token {
  enum class Kind { Word, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

bool is_word_char(char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
         ch == '_' || ch == '\'';
}

// Splits one line into tokens. With `hash_comments`, `#` ends the line.
std::vector<Token> lex_line(std::string_view line, std::size_t line_no, bool hash_comments) {
  static constexpr std::string_view two_char[] = {"->", ">=", ".."};
  static constexpr std::string_view one_char = "@!?#=:[],*;&{}";
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char ch = line[i];
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      continue;
    }
    if (ch == '#' && hash_comments) break;
    const std::size_t col = i + 1;
    if (is_word_char(ch)) {
      std::size_t j = i;
      while (j < line.size() && is_word_char(line[j])) ++j;
      out.push_back({Token::Kind::Word, std::string(line.substr(i, j - i)), line_no, col});
      i = j;
      continue;
    }
    const auto rest = line.substr(i);
    auto two = std::find_if(std::begin(two_char), std::end(two_char),
                            [&](std::string_view s) { return rest.starts_with(s); });
    if (two != std::end(two_char)) {
      out.push_back({Token::Kind::Symbol, std::string(*two), line_no, col});
      i += 2;
      continue;
    }
    if (one_char.find(ch) != std::string_view::npos) {
      out.push_back({Token::Kind::Symbol, std::string(1, ch), line_no, col});
      ++i;
      continue;
    }
    throw ParseError(ErrorCode::ParseError, line_no, col,
                     std::string("unexpected character '") + ch + "'");
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

/// Cursor over the tokens of one line or clause.
class Cursor {
 public:
  Cursor(std::vector<Token> tokens, std::size_t line, std::size_t end_column)
      : tokens_(std::move(tokens)), line_(line), end_column_(end_column) {}

  [[nodiscard]] bool at_end() const { return pos_ >= tokens_.size(); }

  [[nodiscard]] const Token& peek(std::size_t ahead = 0) const {
    static const Token end{};
    return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : end;
  }

  [[nodiscard]] bool next_is(std::string_view symbol, std::size_t ahead = 0) const {
    const auto& t = peek(ahead);
    return t.kind == Token::Kind::Symbol && t.text == symbol;
  }

  bool accept(std::string_view symbol) {
    if (!next_is(symbol)) return false;
    ++pos_;
    return true;
  }

  const Token& expect(std::string_view symbol) {
    if (!next_is(symbol)) fail("expected '" + std::string(symbol) + "'");
    return tokens_[pos_++];
  }

  const Token& word(const char* what) {
    if (at_end() || peek().kind != Token::Kind::Word) fail(std::string("expected ") + what);
    return tokens_[pos_++];
  }

  Count number() {
    const auto& t = word("a number");
    Count value = 0;
    const auto* first = t.text.data();
    const auto* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
      throw ParseError(ErrorCode::ParseError, t.line, t.column, "'" + t.text + "' is not a number");
    }
    return value;
  }

  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }

  [[noreturn]] void fail(const std::string& msg, ErrorCode code = ErrorCode::ParseError) const {
    if (at_end()) throw ParseError(code, line_, end_column_, msg + " at end of line");
    throw ParseError(code, peek().line, peek().column, msg);
  }

  [[noreturn]] static void fail_at(const Token& t, const std::string& msg,
                                   ErrorCode code = ErrorCode::ParseError) {
    throw ParseError(code, t.line, t.column, msg);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t end_column_;
};

struct NetBuilder {
  std::optional<ModelKind> kind;
  std::vector<StateId> states;
  std::set<std::string> state_names;
  std::vector<MessageId> alphabet;
  std::set<std::string> message_names;
  std::vector<IOTransition> io;
  std::set<IOTransition> io_seen;
  std::vector<RBNTransition> rbn;
  std::set<RBNTransition> rbn_seen;

  StateId state(const Token& t) const {
    if (!state_names.contains(t.text)) {
      Cursor::fail_at(t, "undeclared state '" + t.text + "'", ErrorCode::UndeclaredState);
    }
    return StateId{t.text};
  }

  MessageId message(const Token& t) const {
    if (!message_names.contains(t.text)) {
      Cursor::fail_at(t, "undeclared message '" + t.text + "'", ErrorCode::UndeclaredState);
    }
    return MessageId{t.text};
  }

  void line(Cursor& cur) {
    const auto& head = cur.word("a keyword");
    if (!kind) {
      if (head.text == "ionet") {
        kind = ModelKind::IONet;
      } else if (head.text == "rbn") {
        kind = ModelKind::RBN;
      } else {
        Cursor::fail_at(head, "expected header 'ionet' or 'rbn'");
      }
      cur.expect_end();
      return;
    }
    if (head.text == "states") {
      while (!cur.at_end()) {
        const auto& t = cur.word("a state name");
        if (!state_names.insert(t.text).second) {
          Cursor::fail_at(t, "state '" + t.text + "' declared twice", ErrorCode::DuplicateState);
        }
        states.emplace_back(t.text);
      }
    } else if (head.text == "alphabet") {
      if (kind != ModelKind::RBN) Cursor::fail_at(head, "'alphabet' is only valid in rbn files");
      while (!cur.at_end()) {
        const auto& t = cur.word("a message name");
        if (!message_names.insert(t.text).second) {
          Cursor::fail_at(t, "message '" + t.text + "' declared twice", ErrorCode::DuplicateState);
        }
        alphabet.emplace_back(t.text);
      }
    } else if (head.text == "trans") {
      transition(cur, head);
    } else {
      Cursor::fail_at(head, "unknown keyword '" + head.text + "'");
    }
  }

  void transition(Cursor& cur, const Token& head) {
    const auto src = state(cur.word("a source state"));
    if (kind == ModelKind::IONet) {
      cur.expect("@");
      const auto observed = state(cur.word("an observed state"));
      cur.expect("->");
      const auto target = state(cur.word("a target state"));
      cur.expect_end();
      IOTransition t{src, observed, target};
      if (!io_seen.insert(t).second) {
        Cursor::fail_at(head, "duplicate transition " + to_string(t), ErrorCode::DuplicateTransition);
      }
      io.push_back(std::move(t));
      return;
    }
    bool is_broadcast = false;
    if (cur.accept("!")) {
      is_broadcast = true;
    } else if (!cur.accept("?")) {
      cur.fail("expected '!' or '?'");
    }
    const auto m = message(cur.word("a message"));
    cur.expect("->");
    const auto target = state(cur.word("a target state"));
    cur.expect_end();
    auto t = is_broadcast ? RBNTransition::broadcast(src, m, target)
                          : RBNTransition::receive(src, m, target);
    if (!rbn_seen.insert(t).second) {
      Cursor::fail_at(head, "duplicate transition " + to_string(t), ErrorCode::DuplicateTransition);
    }
    rbn.push_back(std::move(t));
  }
};

}  // namespace

Net parse_net(std::string_view text) {
  NetBuilder b;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto tokens = lex_line(lines[i], i + 1, true);
    if (tokens.empty()) continue;
    Cursor cur(std::move(tokens), i + 1, lines[i].size() + 1);
    b.line(cur);
  }
  if (!b.kind) throw ParseError(ErrorCode::ParseError, lines.size(), 1, "missing header line");
  if (b.kind == ModelKind::IONet) return IONet(std::move(b.states), std::move(b.io));
  return RBN(std::move(b.states), std::move(b.alphabet), std::move(b.rbn));
}

namespace {

template <typename Ids>
std::string joined(const char* keyword, const Ids& ids) {
  std::string out = keyword;
  for (const auto& id : ids) out += " " + id.str();
  return out + "\n";
}

}  // namespace

std::string serialize_net(const IONet& net) {
  std::string out = "ionet\n" + joined("states", net.states());
  for (const auto& t : net.transitions()) out += "trans " + to_string(t) + "\n";
  return out;
}

std::string serialize_net(const RBN& net) {
  std::string out = "rbn\n" + joined("states", net.states()) + joined("alphabet", net.alphabet());
  for (const auto& t : net.transitions()) out += "trans " + to_string(t) + "\n";
  return out;
}

std::string serialize_net(const Net& net) {
  return std::visit([](const auto& n) { return serialize_net(n); }, net);
}

// ---------------------------------------------------------------------------
// Queries

namespace {

Bounds cube_atom(Cursor& cur) {
  cur.expect(":");
  cur.expect("[");
  Bounds b;
  b.lower = cur.number();
  cur.expect(",");
  if (!cur.accept("*")) b.upper = cur.number();
  cur.expect("]");
  return b;
}

// Splits the query into clauses at `;` and line breaks.
std::vector<Cursor> query_clauses(std::string_view text) {
  std::vector<Cursor> clauses;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::vector<Token> current;
    for (auto& t : lex_line(lines[i], i + 1, false)) {
      if (t.kind == Token::Kind::Symbol && t.text == ";") {
        if (!current.empty()) clauses.emplace_back(std::move(current), i + 1, t.column);
        current.clear();
      } else {
        current.push_back(std::move(t));
      }
    }
    if (!current.empty()) clauses.emplace_back(std::move(current), i + 1, lines[i].size() + 1);
  }
  return clauses;
}

}  // namespace

QuerySpec parse_query(std::string_view text) {
  QuerySpec spec;
  bool seen_init = false;
  bool seen_target = false;
  bool init_has_cube = false;
  bool target_has_cube = false;
  std::set<StateId> support;
  std::set<StateId> present;
  std::set<StateId> absent;
  std::set<StateId> target_cube_states;

  for (auto& cur : query_clauses(text)) {
    const auto& head = cur.word("'init' or 'target'");
    cur.expect(":");
    if (head.text == "init") {
      if (seen_init) Cursor::fail_at(head, "duplicate init clause");
      seen_init = true;
      while (!cur.at_end()) {
        const auto& name = cur.word("a state name");
        StateId q{name.text};
        if (cur.next_is(":")) {
          init_has_cube = true;
          spec.from.set(q, cube_atom(cur));
        } else {
          support.insert(q);
          spec.from.set(q, Bounds::at_least(0));
        }
      }
    } else if (head.text == "target") {
      if (seen_target) Cursor::fail_at(head, "duplicate target clause");
      seen_target = true;
      bool first = true;
      while (!cur.at_end()) {
        if (!first) cur.accept("&");
        first = false;
        if (cur.accept("#")) {
          const auto& name = cur.word("a state name");
          StateId q{name.text};
          if (cur.accept(">=")) {
            const auto& one = cur.word("1");
            if (one.text != "1") Cursor::fail_at(one, "only '#q>=1' atoms are supported");
            if (absent.contains(q)) {
              Cursor::fail_at(name, "'" + name.text + "' is required both >=1 and =0",
                              ErrorCode::ContradictoryAtom);
            }
            present.insert(q);
          } else if (cur.accept("=")) {
            const auto& zero = cur.word("0");
            if (zero.text != "0") Cursor::fail_at(zero, "only '#q=0' atoms are supported");
            if (present.contains(q)) {
              Cursor::fail_at(name, "'" + name.text + "' is required both >=1 and =0",
                              ErrorCode::ContradictoryAtom);
            }
            absent.insert(q);
          } else {
            cur.fail("expected '>=1' or '=0'");
          }
        } else {
          const auto& name = cur.word("a cardinality atom or cube bound");
          StateId q{name.text};
          if (!target_cube_states.insert(q).second) {
            Cursor::fail_at(name, "'" + name.text + "' is bounded twice");
          }
          target_has_cube = true;
          spec.to.set(q, cube_atom(cur));
        }
      }
    } else {
      Cursor::fail_at(head, "unknown clause '" + head.text + "'");
    }
  }
  if (!seen_target) throw ParseError(ErrorCode::ParseError, 1, 1, "missing target clause");

  for (const auto& q : present) {
    if (target_cube_states.contains(q)) {
      throw Error(ErrorCode::InvalidQuery, "'" + q.str() + "' has both an atom and a cube bound");
    }
    spec.to.set(q, Bounds::at_least(1));
  }
  for (const auto& q : absent) {
    if (target_cube_states.contains(q)) {
      throw Error(ErrorCode::InvalidQuery, "'" + q.str() + "' has both an atom and a cube bound");
    }
    spec.to.set(q, Bounds::exactly(0));
  }
  if (!init_has_cube) spec.support = UnboundedInitialCube{support};
  if (!target_has_cube) {
    spec.crp = absent.empty() ? CrpQuery::geq1(present) : CrpQuery::geq1_eq0(present, absent);
  }
  return spec;
}

Configuration parse_config(std::string_view text) {
  Configuration out;
  const auto lines = split_lines(text);
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (auto& t : lex_line(lines[i], i + 1, false)) tokens.push_back(std::move(t));
  }
  Cursor cur(std::move(tokens), lines.size(), 1);
  const bool braced = cur.accept("{");
  bool first = true;
  while (!cur.at_end() && !cur.next_is("}")) {
    if (!first) cur.expect(",");
    first = false;
    const auto& name = cur.word("a state name");
    cur.expect(":");
    out.add(StateId{name.text}, cur.number());
  }
  if (braced) cur.expect("}");
  cur.expect_end();
  return out;
}

PopulationRange parse_population_range(std::string_view text) {
  Cursor cur(lex_line(text, 1, false), 1, text.size() + 1);
  PopulationRange r;
  r.first = cur.number();
  r.last = cur.accept("..") ? cur.number() : r.first;
  cur.expect_end();
  return r;
}

// ---------------------------------------------------------------------------
// Traces

std::string format_step(const Step& step) { return "step " + to_string(step); }

std::string format_trace(const Trace& trace) {
  std::string out = "config " + to_string(trace.initial) + "\n";
  for (const auto& s : trace.steps) {
    out += format_step(s.step) + "\n";
    out += "config " + to_string(s.after) + "\n";
  }
  return out;
}

namespace {

Configuration config_tokens(Cursor& cur) {
  Configuration out;
  cur.expect("{");
  bool first = true;
  while (!cur.next_is("}")) {
    if (!first) cur.expect(",");
    first = false;
    const auto& name = cur.word("a state name");
    cur.expect(":");
    out.add(StateId{name.text}, cur.number());
  }
  cur.expect("}");
  cur.expect_end();
  return out;
}

RBNTransition rbn_transition(Cursor& cur, bool broadcast) {
  StateId src{cur.word("a source state").text};
  cur.expect(broadcast ? "!" : "?");
  MessageId m{cur.word("a message").text};
  cur.expect("->");
  StateId dst{cur.word("a target state").text};
  return broadcast ? RBNTransition::broadcast(src, m, dst) : RBNTransition::receive(src, m, dst);
}

Step step_tokens(Cursor& cur) {
  const auto& kind = cur.word("'io' or 'bcast'");
  if (kind.text == "io") {
    StateId src{cur.word("a source state").text};
    cur.expect("@");
    StateId observed{cur.word("an observed state").text};
    cur.expect("->");
    StateId dst{cur.word("a target state").text};
    cur.expect_end();
    return IOTransition{src, observed, dst};
  }
  if (kind.text != "bcast") Cursor::fail_at(kind, "expected 'io' or 'bcast'");
  RBNStep step{rbn_transition(cur, true), {}};
  const auto& recv = cur.word("'recv'");
  if (recv.text != "recv") Cursor::fail_at(recv, "expected 'recv'");
  cur.expect("[");
  bool first = true;
  while (!cur.next_is("]")) {
    if (!first) cur.expect(",");
    first = false;
    step.receives.push_back(rbn_transition(cur, false));
  }
  cur.expect("]");
  cur.expect_end();
  return step;
}

}  // namespace

Trace parse_trace(std::string_view text) {
  Trace trace;
  bool have_initial = false;
  std::optional<Step> pending;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto tokens = lex_line(lines[i], i + 1, true);
    if (tokens.empty()) continue;
    Cursor cur(std::move(tokens), i + 1, lines[i].size() + 1);
    const auto& head = cur.word("'config' or 'step'");
    if (head.text == "config") {
      auto c = config_tokens(cur);
      if (!have_initial) {
        trace.initial = std::move(c);
        have_initial = true;
      } else if (pending) {
        trace.steps.push_back({std::move(*pending), std::move(c)});
        pending.reset();
      } else {
        Cursor::fail_at(head, "two configurations without a step between them");
      }
    } else if (head.text == "step") {
      if (!have_initial || pending) Cursor::fail_at(head, "a step must follow a configuration");
      pending = step_tokens(cur);
    } else {
      Cursor::fail_at(head, "expected 'config' or 'step'");
    }
  }
  if (!have_initial) throw ParseError(ErrorCode::ParseError, lines.size(), 1, "empty trace");
  if (pending) throw ParseError(ErrorCode::ParseError, lines.size(), 1, "trace ends with a step");
  return trace;
}

std::string format_certificate(const TranslationCertificate& cert) {
  std::ostringstream out;
  out << "# certificate\n";
  out << "#   source " << to_string(cert.source_kind) << "\n";
  out << "#   target " << to_string(cert.target_kind) << "\n";
  for (const auto& [from, to] : cert.state_map) {
    out << "#   map " << from.str() << " -> " << to.str() << "\n";
  }
  out << "#   padding " << to_string(cert.padding) << "\n";
  return out.str();
}

}  // namespace rbnkit
