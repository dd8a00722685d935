#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "trigsat/error.hpp"
#include "trigsat/problem.hpp"

namespace trigsat {

OrderingSpec ProblemOptions::ordering() const {
  OrderingSpec o;
  o.kind = order.value_or(OrderingKind::WeightPrecedence);
  o.precedence = precedence;
  o.weights = weights;
  o.precedence_dominant = precedence_dominant;
  return o;
}

std::vector<Clause> Problem::theory() const {
  std::vector<Clause> out;
  for (const Clause& c : clauses)
    if (!c.is_ground()) out.push_back(c);
  return out;
}

std::vector<Clause> Problem::ground() const {
  std::vector<Clause> out;
  for (const Clause& c : clauses)
    if (c.is_ground()) out.push_back(c);
  return out;
}

namespace {

bool ident_start(char ch) { return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_'; }
bool ident_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'';
}
bool is_variable_name(std::string_view s) {
  return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

// Arities seen so far, shared across the lines of one file.
struct Arities {
  std::map<std::string, std::size_t> functions;
  std::map<std::string, std::size_t> predicates;
};

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line, Arities& arities)
      : text_(text), line_(line), arities_(arities) {}

  // Returns the clause and the positions marked with `*`; `star_column` is
  // the column of the first marker (0 when none).
  Clause clause(std::vector<std::size_t>& selected, std::size_t& star_column) {
    skip();
    Clause c;
    if (text_.substr(pos_, 2) == "[]") {
      pos_ += 2;
      expect_end();
      return c;
    }
    while (true) {
      skip();
      bool starred = false;
      if (peek() == '*') {
        if (star_column == 0) star_column = pos_ + 1;
        starred = true;
        ++pos_;
        skip();
      }
      bool negative = false;
      if (peek() == '~') {
        negative = true;
        ++pos_;
        skip();
      }
      if (!starred && peek() == '*') {
        if (star_column == 0) star_column = pos_ + 1;
        starred = true;
        ++pos_;
        skip();
      }
      if (starred) selected.push_back(c.size());
      c.literals.push_back(Literal{atom(), !negative});
      skip();
      if (peek() == '|') {
        ++pos_;
        continue;
      }
      expect_end();
      return c;
    }
  }

  Literal literal() {
    skip();
    bool negative = false;
    if (peek() == '~') {
      negative = true;
      ++pos_;
      skip();
    }
    Literal l{atom(), !negative};
    expect_end();
    return l;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, line_, at + 1);
  }
  [[noreturn]] void unexpected(const std::string& wanted) const {
    if (pos_ >= text_.size()) fail("expected " + wanted + ", found end of line", pos_);
    fail("expected " + wanted + ", found '" + std::string(1, text_[pos_]) + "'", pos_);
  }
  void expect_end() {
    skip();
    if (pos_ < text_.size()) unexpected("'|' or end of line");
  }

  std::string identifier(const std::string& wanted) {
    skip();
    if (!ident_start(peek())) unexpected(wanted);
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::vector<Term> arguments() {
    std::vector<Term> args;
    skip();
    if (peek() != '(') return args;
    ++pos_;
    while (true) {
      args.push_back(term());
      skip();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ')') {
        ++pos_;
        return args;
      }
      unexpected("',' or ')'");
    }
  }

  void check_arity(std::map<std::string, std::size_t>& table, const std::string& name,
                   std::size_t arity, std::size_t at, const char* kind) {
    auto [it, inserted] = table.emplace(name, arity);
    if (!inserted && it->second != arity)
      fail(std::string(kind) + " '" + name + "' used with arity " + std::to_string(arity) +
               " and " + std::to_string(it->second),
           at);
  }

  Term term() {
    skip();
    const std::size_t at = pos_;
    std::string name = identifier("term");
    if (is_variable_name(name)) {
      skip();
      if (peek() == '(') fail("variable '" + name + "' applied to arguments", pos_);
      return Term::variable(std::move(name));
    }
    std::vector<Term> args = arguments();
    check_arity(arities_.functions, name, args.size(), at, "function");
    return Term::function(std::move(name), std::move(args));
  }

  Atom atom() {
    skip();
    const std::size_t at = pos_;
    std::string name = identifier("atom");
    if (is_variable_name(name)) fail("predicate '" + name + "' must start lowercase", at);
    std::vector<Term> args = arguments();
    check_arity(arities_.predicates, name, args.size(), at, "predicate");
    return Atom(std::move(name), std::move(args));
  }

  std::string_view text_;
  std::size_t line_;
  Arities& arities_;
  std::size_t pos_ = 0;
};

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

void parse_option(std::string_view body, std::size_t line, ProblemOptions& opts) {
  const std::vector<std::string> w = words(body);
  auto fail = [&](const std::string& msg) -> void { throw ParseError(msg, line, 1); };
  if (w.empty()) fail("empty option line");
  const std::string& key = w[0];
  auto arg = [&]() -> const std::string& {
    if (w.size() != 2) fail("option '" + key + "' takes one value");
    return w[1];
  };
  if (key == "order") {
    const std::string& v = arg();
    if (v == "weight") opts.order = OrderingKind::WeightPrecedence;
    else if (v == "subterm") opts.order = OrderingKind::SubtermProduct;
    else fail("unknown ordering '" + v + "'");
  } else if (key == "precedence") {
    try {
      opts.precedence = parse_precedence(arg());
    } catch (const Error& e) {
      fail(e.what());
    }
  } else if (key == "dominant") {
    opts.precedence_dominant = w.size() == 1 || w[1] == "true";
  } else if (key == "weight") {
    const std::string& v = arg();
    const auto eq = v.find('=');
    int value = 0;
    if (eq == std::string::npos || eq == 0 ||
        std::from_chars(v.data() + eq + 1, v.data() + v.size(), value).ec != std::errc{} ||
        value < 1)
      fail("weight expects symbol=N with N >= 1");
    opts.weights[v.substr(0, eq)] = value;
  } else if (key == "select") {
    const std::string& v = arg();
    if (v == "annotated") opts.select = SelectionStrategy::Annotated;
    else if (v == "max") opts.select = SelectionStrategy::MaxLiteral;
    else if (v == "maximal") opts.select = SelectionStrategy::AllMaximal;
    else if (v == "neg") opts.select = SelectionStrategy::AllNegative;
    else if (v == "all") opts.select = SelectionStrategy::AllLiterals;
    else fail("unknown selection strategy '" + v + "'");
  } else {
    fail("unknown option '" + key + "'");
  }
}

// Strips a trailing comment; `%!` at the start of a line is an option.
std::string_view code_part(std::string_view line) {
  const auto pct = line.find('%');
  return pct == std::string_view::npos ? line : line.substr(0, pct);
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(line, line_no);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

bool blank(std::string_view s) {
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace

Problem parse_problem(std::string_view text) {
  Problem p;
  Arities arities;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    std::size_t lead = 0;
    while (lead < line.size() && std::isspace(static_cast<unsigned char>(line[lead]))) ++lead;
    if (line.substr(lead, 2) == "%!") {
      parse_option(line.substr(lead + 2), line_no, p.options);
      return;
    }
    std::string_view code = code_part(line);
    if (blank(code)) return;
    std::vector<std::size_t> selected;
    std::size_t star_column = 0;
    Clause c = LineParser(code, line_no, arities).clause(selected, star_column);
    c.id = static_cast<ClauseId>(p.clauses.size() + 1);
    c.origin = c.is_ground() ? Origin::InputGround : Origin::InputNonGround;
    if (!selected.empty()) {
      if (c.is_ground()) throw ParseError("selection marker on a ground clause", line_no, star_column);
      p.selection.set(c.id, selected);
    }
    p.clauses.push_back(std::move(c));
  });
  return p;
}

Clause parse_clause(std::string_view text) {
  Arities arities;
  std::vector<std::size_t> selected;
  std::size_t star_column = 0;
  Clause c = LineParser(text, 1, arities).clause(selected, star_column);
  if (!selected.empty() && c.is_ground())
    throw ParseError("selection marker on a ground clause", 1, star_column);
  c.origin = c.is_ground() ? Origin::InputGround : Origin::InputNonGround;
  return c;
}

std::vector<Literal> parse_literals(std::string_view text) {
  std::vector<Literal> out;
  Arities arities;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    std::string_view code = code_part(line);
    if (blank(code)) return;
    Literal l = LineParser(code, line_no, arities).literal();
    if (!l.is_ground()) throw ParseError("model literal must be ground", line_no, 1);
    out.push_back(std::move(l));
  });
  return out;
}

std::string print_clause(const Clause& c, const std::vector<std::size_t>& selected) {
  if (c.empty()) return "[]";
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += " | ";
    const Literal& l = c.literals[i];
    if (!l.positive) s += '~';
    if (std::find(selected.begin(), selected.end(), i) != selected.end()) s += '*';
    s += l.atom.to_string();
  }
  return s;
}

std::string print_problem(const Problem& p) {
  std::string out;
  const ProblemOptions& o = p.options;
  if (o.order) out += "%! order " + std::string(ordering_name(*o.order)) + "\n";
  if (!o.precedence.empty()) {
    out += "%! precedence ";
    for (std::size_t i = 0; i < o.precedence.size(); ++i) out += (i ? ">" : "") + o.precedence[i];
    out += "\n";
  }
  if (o.precedence_dominant) out += "%! dominant\n";
  for (const auto& [sym, w] : o.weights) out += "%! weight " + sym + "=" + std::to_string(w) + "\n";
  if (o.select) out += "%! select " + std::string(strategy_name(*o.select)) + "\n";
  for (const Clause& c : p.clauses) {
    const bool marked = p.selection.contains(c.id);
    out += print_clause(c, marked ? p.selection.at(c.id) : std::vector<std::size_t>{}) + "\n";
  }
  return out;
}

}  // namespace trigsat
