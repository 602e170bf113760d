#pragma once

// LP text format writer and a reader for the writer's own output.
//
// Coefficients are exact decimals. A coefficient whose decimal expansion
// does not terminate is written rounded to 12 significant digits, preceded
// by a `\ exact <var> <p/q>` comment line that the reader uses to restore
// the exact value.

#include "greenroute/formulation.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace greenroute {

inline constexpr std::size_t kMaxLpNameLength = 255;

class NonRepresentable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LpParseError : public std::runtime_error {
 public:
  LpParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

class LpWriter {
 public:
  explicit LpWriter(const LinearModel& model) : model_(model) {
    for (const auto& v : model.variables) names_.push_back(checked(variable_name(v)));
  }

  std::string write() {
    out_ << "\\ energy-aware routing model, binary variables\n";
    out_ << "Minimize\n";
    statement("obj", model_.objective, nullptr);
    out_ << "Subject To\n";
    for (const auto& row : model_.constraints) statement(checked(row.name), row.terms, &row);
    out_ << "Bounds\n";
    for (const auto& name : names_) out_ << " 0 <= " << name << " <= 1\n";
    out_ << "Binary\n";
    for (std::size_t i = 0; i < names_.size(); ++i)
      out_ << ' ' << names_[i] << (i % 8 == 7 || i + 1 == names_.size() ? "\n" : "");
    out_ << "End\n";
    return out_.str();
  }

 private:
  static const std::string& checked(const std::string& name) {
    if (name.size() > kMaxLpNameLength)
      throw NonRepresentable("name longer than " + std::to_string(kMaxLpNameLength) +
                             " characters: " + name.substr(0, 40) + "...");
    return name;
  }

  // Magnitude text; records an exact-value comment when rounding was needed.
  std::string magnitude(const Rational& value, const std::string& label,
                        std::vector<std::string>& exact_notes) {
    Rational abs = value < 0 ? Rational(-value) : value;
    if (auto exact = to_exact_decimal(abs)) return *exact;
    exact_notes.push_back("\\ exact " + label + " " + abs.str());
    return to_approx_decimal(abs);
  }

  void statement(const std::string& name, const std::vector<Term>& terms, const Constraint* row) {
    std::vector<std::string> notes;
    std::vector<std::string> lines;
    std::string line = " " + name + ":";
    std::size_t on_line = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto& t = terms[i];
      const auto& var = names_.at(t.var);
      std::string piece = t.coefficient < 0 ? " - " : (i == 0 ? " " : " + ");
      piece += magnitude(t.coefficient, var, notes) + " " + var;
      if (on_line == 8) {
        lines.push_back(line);
        line = "  ";
        on_line = 0;
      }
      line += piece;
      ++on_line;
    }
    if (row) {
      line += " ";
      line += to_string(row->relation);
      line += row->rhs < 0 ? " -" : " ";
      line += magnitude(row->rhs, "rhs", notes);
    }
    lines.push_back(line);
    for (const auto& n : notes) out_ << n << '\n';
    for (const auto& l : lines) out_ << l << '\n';
  }

  const LinearModel& model_;
  std::vector<std::string> names_;
  std::ostringstream out_;
};

struct LpToken {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

inline bool is_number_start(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
}

inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '[' || c == ']' ||
         c == ',' || c == '.' || c == '(' || c == ')';
}

class LpReader {
 public:
  explicit LpReader(std::string_view text) { split_lines(text); }

  LinearModel read() {
    enum class Section { None, Objective, Constraints, Bounds, Binary, Done };
    Section section = Section::None;
    std::vector<LpToken> pending;  // tokens of the statement being assembled
    std::map<std::string, Rational> pending_exact;   // notes for `pending`
    std::map<std::string, Rational> upcoming_exact;  // notes for the next row
    std::vector<std::pair<std::vector<LpToken>, std::map<std::string, Rational>>> objective_parts,
        constraint_parts;
    std::vector<LpToken> declared;

    auto flush = [&](Section s) {
      if (pending.empty()) return;
      if (s == Section::Objective) objective_parts.emplace_back(pending, pending_exact);
      if (s == Section::Constraints) constraint_parts.emplace_back(pending, pending_exact);
      pending.clear();
      pending_exact.clear();
    };

    for (std::size_t i = 0; i < lines_.size(); ++i) {
      const std::size_t lineno = i + 1;
      std::string_view raw = lines_[i];
      std::string_view body = raw;
      std::string comment;
      if (auto bs = raw.find('\\'); bs != std::string_view::npos) {
        comment = std::string(raw.substr(bs + 1));
        body = raw.substr(0, bs);
      }
      const std::string keyword = lowercase(trim(body));

      if (section == Section::Done) {
        if (!keyword.empty()) throw LpParseError(lineno, 1, "content after End");
        continue;
      }

      auto enter = [&](Section next, std::initializer_list<Section> allowed_from) {
        bool ok = false;
        for (auto s : allowed_from) ok = ok || s == section;
        if (!ok) throw LpParseError(lineno, 1, "unexpected section '" + trim(body) + "'");
        flush(section);
        section = next;
      };
      if (keyword == "minimize" || keyword == "minimum" || keyword == "min") {
        enter(Section::Objective, {Section::None});
        continue;
      }
      if (keyword == "subject to" || keyword == "st" || keyword == "s.t.") {
        enter(Section::Constraints, {Section::Objective});
        continue;
      }
      if (keyword == "bounds") {
        enter(Section::Bounds, {Section::Constraints});
        continue;
      }
      if (keyword == "binary" || keyword == "binaries" || keyword == "bin") {
        enter(Section::Binary, {Section::Constraints, Section::Bounds});
        continue;
      }
      if (keyword == "end") {
        enter(Section::Done, {Section::Constraints, Section::Bounds, Section::Binary});
        continue;
      }

      if (!comment.empty()) {
        std::istringstream in(comment);
        std::string tag, var, value;
        if (in >> tag >> var >> value && tag == "exact") {
          try {
            upcoming_exact[var] = parse_rational(value);
          } catch (const NumberFormatError& e) {
            throw LpParseError(lineno, 1, e.what());
          }
        }
      }
      auto tokens = tokenize(body, lineno);
      if (tokens.empty()) continue;

      switch (section) {
        case Section::None:
          throw LpParseError(lineno, tokens.front().column, "expected 'Minimize'");
        case Section::Objective:
        case Section::Constraints:
          // In the constraint section a labelled line starts a new row.
          if (pending.empty() ||
              (section == Section::Constraints && tokens.front().text.back() == ':')) {
            flush(section);
            pending_exact = std::move(upcoming_exact);
            upcoming_exact.clear();
          }
          for (auto& t : tokens) pending.push_back(std::move(t));
          break;
        case Section::Bounds:
          check_bound(tokens);
          break;
        case Section::Binary:
          for (auto& t : tokens) declared.push_back(std::move(t));
          break;
        case Section::Done:
          break;
      }
    }
    if (section != Section::Done)
      throw LpParseError(lines_.size() + 1, 1, "missing 'End'");

    LinearModel model;
    std::map<std::string, std::size_t> position;
    for (const auto& tok : declared) {
      auto v = parse_variable_name(tok.text);
      if (!v) throw LpParseError(tok.line, tok.column, "unrecognized variable '" + tok.text + "'");
      if (!position.emplace(tok.text, model.variables.size()).second)
        throw LpParseError(tok.line, tok.column, "variable '" + tok.text + "' declared twice");
      model.variables.push_back(*v);
    }
    for (const auto& tok : bound_names_)
      if (!position.count(tok.text))
        throw LpParseError(tok.line, tok.column, "undeclared variable '" + tok.text + "'");

    if (objective_parts.size() > 1)
      throw LpParseError(objective_parts[1].first.front().line, 1, "more than one objective");
    if (!objective_parts.empty()) {
      auto row = parse_statement(objective_parts.front().first, objective_parts.front().second,
                                 position, /*constraint=*/false);
      model.objective = std::move(row.terms);
    }
    for (const auto& [tokens, notes] : constraint_parts)
      model.constraints.push_back(parse_statement(tokens, notes, position, /*constraint=*/true));
    return model;
  }

 private:
  static std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
  }

  static std::string lowercase(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    // collapse internal runs of whitespace
    std::string out;
    for (char c : s)
      if (!(c == ' ' && !out.empty() && out.back() == ' ')) out += c == '\t' ? ' ' : c;
    return out;
  }

  void split_lines(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto nl = text.find('\n', start);
      if (nl == std::string_view::npos) {
        if (start < text.size()) lines_.emplace_back(text.substr(start));
        break;
      }
      lines_.emplace_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }

  static std::vector<LpToken> tokenize(std::string_view body, std::size_t lineno) {
    std::vector<LpToken> tokens;
    std::size_t i = 0;
    bool first = true;
    while (i < body.size()) {
      const char c = body[i];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      const std::size_t col = i + 1;
      if (first) {
        // A leading `label:` is taken whole; labels may contain '='.
        auto space = body.find_first_of(" \t", i);
        auto word = body.substr(i, space == std::string_view::npos ? body.size() - i : space - i);
        if (auto colon = word.find(':'); colon != std::string_view::npos) {
          tokens.push_back({std::string(word.substr(0, colon + 1)), lineno, col});
          i += colon + 1;
          first = false;
          continue;
        }
      }
      first = false;
      if (c == '+' || c == '-') {
        tokens.push_back({std::string(1, c), lineno, col});
        ++i;
      } else if (c == '<' || c == '>' || c == '=') {
        std::size_t j = i + 1;
        if (j < body.size() && (body[j] == '=' || body[j] == '<' || body[j] == '>')) ++j;
        tokens.push_back({std::string(body.substr(i, j - i)), lineno, col});
        i = j;
      } else if (is_number_start(c)) {
        std::size_t j = i;
        while (j < body.size() &&
               (std::isdigit(static_cast<unsigned char>(body[j])) || body[j] == '.' ||
                body[j] == 'e' || body[j] == 'E' ||
                ((body[j] == '+' || body[j] == '-') && j > i &&
                 (body[j - 1] == 'e' || body[j - 1] == 'E'))))
          ++j;
        tokens.push_back({std::string(body.substr(i, j - i)), lineno, col});
        i = j;
      } else if (is_name_char(c)) {
        std::size_t j = i;
        while (j < body.size() && is_name_char(body[j])) ++j;
        tokens.push_back({std::string(body.substr(i, j - i)), lineno, col});
        i = j;
      } else {
        throw LpParseError(lineno, col, std::string("unexpected character '") + c + "'");
      }
    }
    return tokens;
  }

  void check_bound(const std::vector<LpToken>& tokens) {
    if (tokens.size() != 5 || tokens[0].text != "0" || tokens[1].text != "<=" ||
        tokens[3].text != "<=" || tokens[4].text != "1")
      throw LpParseError(tokens.front().line, tokens.front().column,
                         "expected a binary bound '0 <= name <= 1'");
    bound_names_.push_back(tokens[2]);
  }

  static Rational number(const LpToken& tok) {
    try {
      return parse_rational(tok.text);
    } catch (const NumberFormatError& e) {
      throw LpParseError(tok.line, tok.column, e.what());
    }
  }

  static Relation relation(const LpToken& tok) {
    if (tok.text == "<=" || tok.text == "=<" || tok.text == "<") return Relation::LessEqual;
    if (tok.text == ">=" || tok.text == "=>" || tok.text == ">") return Relation::GreaterEqual;
    if (tok.text == "=") return Relation::Equal;
    throw LpParseError(tok.line, tok.column, "expected a relation, got '" + tok.text + "'");
  }

  static bool is_relation(const LpToken& tok) {
    return tok.text == "<=" || tok.text == "=<" || tok.text == "<" || tok.text == ">=" ||
           tok.text == "=>" || tok.text == ">" || tok.text == "=";
  }

  static Constraint parse_statement(const std::vector<LpToken>& tokens,
                                    const std::map<std::string, Rational>& exact,
                                    const std::map<std::string, std::size_t>& position,
                                    bool constraint) {
    Constraint row;
    std::size_t i = 0;
    if (i < tokens.size() && tokens[i].text.back() == ':') {
      row.name = tokens[i].text.substr(0, tokens[i].text.size() - 1);
      if (row.name.empty()) throw LpParseError(tokens[i].line, tokens[i].column, "empty label");
      ++i;
    } else if (constraint) {
      throw LpParseError(tokens.front().line, tokens.front().column, "constraint needs a label");
    }

    auto at = [&](std::size_t j) -> const LpToken& {
      if (j >= tokens.size()) {
        const auto& last = tokens.back();
        throw LpParseError(last.line, last.column + last.text.size(), "unexpected end of row");
      }
      return tokens[j];
    };

    while (i < tokens.size() && !is_relation(tokens[i])) {
      bool negative = false;
      if (tokens[i].text == "+" || tokens[i].text == "-") {
        negative = tokens[i].text == "-";
        ++i;
      }
      const LpToken* coef = nullptr;
      if (is_number_start(at(i).text.front())) coef = &tokens[i++];
      const LpToken& var = at(i++);
      if (is_number_start(var.text.front()) || is_relation(var) || var.text == "+" ||
          var.text == "-")
        throw LpParseError(var.line, var.column, "expected a variable, got '" + var.text + "'");
      auto pos = position.find(var.text);
      if (pos == position.end())
        throw LpParseError(var.line, var.column, "undeclared variable '" + var.text + "'");
      Rational value = 1;
      if (coef) {
        auto ex = exact.find(var.text);
        value = ex != exact.end() ? ex->second : number(*coef);
      }
      row.terms.push_back(Term{negative ? Rational(-value) : value, pos->second});
    }

    if (!constraint) {
      if (i != tokens.size())
        throw LpParseError(tokens[i].line, tokens[i].column, "relation in objective");
      return row;
    }
    row.relation = relation(at(i++));
    bool negative = false;
    if (at(i).text == "+" || at(i).text == "-") {
      negative = at(i).text == "-";
      ++i;
    }
    const LpToken& rhs = at(i++);
    auto ex = exact.find("rhs");
    Rational value = ex != exact.end() ? ex->second : number(rhs);
    row.rhs = negative ? Rational(-value) : value;
    if (i != tokens.size())
      throw LpParseError(tokens[i].line, tokens[i].column,
                         "unexpected '" + tokens[i].text + "' after right-hand side");
    return row;
  }

  std::vector<std::string> lines_;
  std::vector<LpToken> bound_names_;
};

}  // namespace detail

/// Renders `model` as an LP document. Output is byte-for-byte deterministic.
inline std::string export_lp(const LinearModel& model) {
  return detail::LpWriter(model).write();
}

/// Reads a document written by export_lp back into a LinearModel.
inline LinearModel parse_lp(std::string_view document) {
  return detail::LpReader(document).read();
}

}  // namespace greenroute
