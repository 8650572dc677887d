#include "fuzzdss/dsl.hpp"

#include <algorithm>
#include <set>
#include <string_view>

#include "fuzzdss/number_format.hpp"
#include "utf8.hpp"

namespace fuzzdss {

namespace {

struct Token {
  std::string value;   // unescaped for strings
  std::size_t column;  // 1-based
  bool quoted = false;
};

struct Pos {
  std::size_t line = 1;
  std::size_t column = 1;
};

bool is_identifier(std::string_view text) {
  if (text.empty() || !(text[0] >= 'a' && text[0] <= 'z')) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out += c;
    }
  }
  out += '"';
  return out;
}

struct TermDecl {
  Pos label_pos;
};

struct VariableDecl {
  LinguisticVariable var;
  Pos name_pos;
  std::vector<TermDecl> terms;
  std::set<std::string> broken_terms;  // declared with bad breakpoints; not re-reported by rules
};

struct BandDecl {
  ClassificationBand band;
  Pos pos;
};

struct RuleDecl {
  Rule rule;
  Pos rule_pos;
  std::vector<Pos> variable_pos;
  std::vector<Pos> term_pos;
  Pos consequent_pos;
};

class Parser {
 public:
  explicit Parser(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) {
        if (start < text.size()) lines_.push_back(strip_cr(text.substr(start)));
        break;
      }
      lines_.push_back(strip_cr(text.substr(start, end - start)));
      start = end + 1;
    }
  }

  ParseResult run() {
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      line_ = i + 1;
      auto tokens = tokenize(lines_[i]);
      if (!tokens || tokens->empty()) continue;
      statement(*tokens);
    }
    finish();

    std::stable_sort(errors_.begin(), errors_.end(), [](const ParseError& a, const ParseError& b) {
      return a.line != b.line ? a.line < b.line : a.column < b.column;
    });
    ParseResult result;
    if (errors_.empty()) {
      Model model = build();
      auto problems = structural_errors(model);
      for (auto& message : problems) error({1, 1}, std::move(message));
      if (problems.empty()) result.model = std::move(model);
    }
    result.errors = std::move(errors_);
    return result;
  }

 private:
  static std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  }

  void error(Pos pos, std::string message) {
    const std::size_t line = std::clamp<std::size_t>(pos.line, 1, std::max<std::size_t>(lines_.size(), 1));
    std::string snippet = line <= lines_.size() ? std::string(lines_[line - 1]) : std::string();
    errors_.push_back({line, pos.column, std::move(message), std::move(snippet)});
  }

  Pos at(const Token& token) const { return {line_, token.column}; }

  Pos end_of_line() const { return {line_, lines_[line_ - 1].size() + 1}; }

  std::optional<std::vector<Token>> tokenize(std::string_view line) {
    if (auto bad = detail::invalid_utf8_offset(line); bad != std::string_view::npos) {
      error({line_, bad + 1}, "invalid UTF-8");
      return std::nullopt;
    }
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      const char c = line[i];
      if (c == ' ' || c == '\t') {
        ++i;
      } else if (c == '#') {
        break;
      } else if (c == '"') {
        Token token{"", i + 1, true};
        ++i;
        bool closed = false;
        while (i < line.size()) {
          char ch = line[i++];
          if (ch == '"') {
            closed = true;
            break;
          }
          if (ch == '\\') {
            if (i >= line.size()) break;
            char esc = line[i++];
            switch (esc) {
              case '"':
              case '\\':
                token.value += esc;
                break;
              case 'n':
                token.value += '\n';
                break;
              case 't':
                token.value += '\t';
                break;
              default:
                error({line_, i - 1}, std::string("unknown escape sequence '\\") + esc + "'");
                return std::nullopt;
            }
          } else {
            token.value += ch;
          }
        }
        if (!closed) {
          error({line_, token.column}, "unterminated string");
          return std::nullopt;
        }
        tokens.push_back(std::move(token));
      } else {
        const std::size_t begin = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '"' &&
               line[i] != '#') {
          ++i;
        }
        tokens.push_back({std::string(line.substr(begin, i - begin)), begin + 1, false});
      }
    }
    return tokens;
  }

  // Cursor over one line's tokens. Each expect_* records an error and returns
  // nullopt on mismatch; the caller then drops the rest of the line.
  class Cursor {
   public:
    Cursor(Parser& parser, const std::vector<Token>& tokens) : parser_(parser), tokens_(tokens) {}

    const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }
    bool at_end() const { return pos_ >= tokens_.size(); }
    const Token& last() const { return tokens_[pos_ - 1]; }

    bool expect_keyword(std::string_view keyword) {
      const Token* t = peek();
      if (!t || t->quoted || t->value != keyword) {
        fail(std::string("expected '") + std::string(keyword) + "'");
        return false;
      }
      ++pos_;
      return true;
    }

    std::optional<std::string> expect_identifier(std::string_view what) {
      const Token* t = peek();
      if (!t || t->quoted || !is_identifier(t->value)) {
        fail("expected " + std::string(what) + " (lowercase identifier)");
        return std::nullopt;
      }
      ++pos_;
      return t->value;
    }

    std::optional<std::string> expect_string(std::string_view what) {
      const Token* t = peek();
      if (!t || !t->quoted) {
        fail("expected " + std::string(what) + " (quoted string)");
        return std::nullopt;
      }
      ++pos_;
      return t->value;
    }

    std::optional<double> expect_number(std::string_view what) {
      const Token* t = peek();
      std::optional<double> value;
      if (t && !t->quoted) value = parse_number(t->value);
      if (!value) {
        fail("expected " + std::string(what) + " (number)");
        return std::nullopt;
      }
      ++pos_;
      return value;
    }

    bool expect_end() {
      if (at_end()) return true;
      fail("unexpected '" + peek()->value + "'");
      return false;
    }

    void fail(std::string message) {
      if (const Token* t = peek()) {
        if (!t->quoted || message.rfind("unexpected", 0) == 0) {
          parser_.error({parser_.line_, t->column}, std::move(message));
        } else {
          parser_.error({parser_.line_, t->column}, std::move(message) + ", found a string");
        }
      } else {
        parser_.error(parser_.end_of_line(), std::move(message) + " at end of line");
      }
    }

   private:
    Parser& parser_;
    const std::vector<Token>& tokens_;
    std::size_t pos_ = 0;
  };

  void statement(const std::vector<Token>& tokens) {
    const Token& head = tokens.front();
    if (!first_statement_) first_statement_ = at(head);
    Cursor cur(*this, tokens);
    if (head.quoted) {
      cur.fail("expected a statement keyword");
      return;
    }
    if (head.value == "model") {
      model_statement(cur);
    } else if (head.value == "input" || head.value == "output") {
      variable_statement(cur, head.value == "output");
    } else if (head.value == "term") {
      term_statement(cur);
    } else if (head.value == "rule") {
      rule_statement(cur);
    } else {
      error(at(head), "unknown statement '" + head.value +
                          "' (expected model, input, output, term or rule)");
    }
  }

  void model_statement(Cursor& cur) {
    const Pos pos = at(*cur.peek());
    cur.expect_keyword("model");
    auto name = cur.expect_string("model name");
    if (!name || !cur.expect_end()) return;
    if (model_name_) {
      error(pos, "model name already declared on line " + std::to_string(model_line_));
      return;
    }
    if (statements_seen_ > 0) error(pos, "the model line must come before other statements");
    model_name_ = *name;
    model_line_ = line_;
    ++statements_seen_;
  }

  void variable_statement(Cursor& cur, bool is_output) {
    const Pos pos = at(*cur.peek());
    cur.expect_keyword(is_output ? "output" : "input");
    ++statements_seen_;
    current_ = Current::none;  // terms after a broken header attach to nothing
    auto name = cur.expect_identifier("variable name");
    if (!name) return;
    const Pos name_pos = at(cur.last());
    auto display = cur.expect_string("display name");
    if (!display || !cur.expect_keyword("range")) return;
    const Pos range_pos = at(cur.last());
    auto lo = cur.expect_number("universe minimum");
    if (!lo) return;
    auto hi = cur.expect_number("universe maximum");
    if (!hi || !cur.expect_end()) return;

    bool ok = true;
    if (!(*lo < *hi)) {
      error(range_pos, "range minimum must be less than maximum");
      ok = false;
    }
    const bool taken = std::any_of(inputs_.begin(), inputs_.end(),
                                   [&](const VariableDecl& d) { return d.var.name == *name; }) ||
                       (output_ && output_->var.name == *name);
    if (taken) {
      error(name_pos, "variable '" + *name + "' is already declared");
      ok = false;
    }
    if (is_output && output_) {
      error(pos, "only one output variable is allowed");
      ok = false;
    }
    if (!ok) {
      current_ = Current::discard;
      return;
    }

    VariableDecl decl{{*name, *display, *lo, *hi, {}}, name_pos, {}, {}};
    if (is_output) {
      output_ = std::move(decl);
      current_ = Current::output;
    } else {
      inputs_.push_back(std::move(decl));
      current_ = Current::input;
    }
  }

  void term_statement(Cursor& cur) {
    const Pos pos = at(*cur.peek());
    cur.expect_keyword("term");
    auto label = cur.expect_identifier("term label");
    if (!label) return;
    const Pos label_pos = at(cur.last());
    auto shape_name = cur.expect_identifier("shape");
    if (!shape_name) return;
    const Pos shape_pos = at(cur.last());
    auto shape = parse_shape(*shape_name);
    if (!shape) {
      error(shape_pos, "unknown shape '" + *shape_name +
                           "' (expected shoulder_left, triangle or shoulder_right)");
      return;
    }
    auto a = cur.expect_number("breakpoint a");
    if (!a) return;
    std::optional<double> b = 0.0;
    if (*shape == Shape::triangle) {
      b = cur.expect_number("breakpoint b");
      if (!b) return;
    }
    auto c = cur.expect_number("breakpoint c");
    if (!c) return;

    std::optional<BandDecl> band;
    if (!cur.at_end()) {
      if (!cur.expect_keyword("band")) return;
      const Pos band_pos = at(cur.last());
      auto lower = cur.expect_number("band lower bound");
      if (!lower) return;
      auto upper = cur.expect_number("band upper bound");
      if (!upper) return;
      std::string band_label = *label;
      if (!cur.at_end()) {
        auto text = cur.expect_string("band label");
        if (!text) return;
        band_label = *text;
      }
      band = BandDecl{{band_label, *label, *lower, *upper}, band_pos};
    }
    if (!cur.expect_end()) return;

    VariableDecl* owner = nullptr;
    switch (current_) {
      case Current::none:
        error(pos, "term declared before any input or output");
        return;
      case Current::discard:
        return;
      case Current::input:
        owner = &inputs_.back();
        if (band) {
          error(band->pos, "bands are only allowed on output terms");
          band.reset();
        }
        break;
      case Current::output:
        owner = &*output_;
        break;
    }

    if (owner->var.find_term(*label) || owner->broken_terms.count(*label)) {
      error(label_pos, "duplicate term '" + *label + "' in variable '" + owner->var.name + "'");
      return;
    }
    if (auto problem = MembershipFunction::check(*shape, *a, *b, *c)) {
      error(shape_pos, *problem);
      owner->broken_terms.insert(*label);
      if (band) bands_.push_back(std::move(*band));
      return;
    }

    MembershipFunction mf{*shape, *a, *shape == Shape::triangle ? *b : 0.0, *c};
    auto [lo, hi] = mf.support();
    if (hi < owner->var.universe_min || lo > owner->var.universe_max) {
      error(label_pos, "term '" + *label + "' lies entirely outside the range of '" +
                           owner->var.name + "'");
    }
    owner->var.terms.push_back({*label, mf});
    owner->terms.push_back({label_pos});
    if (band) bands_.push_back(std::move(*band));
  }

  void rule_statement(Cursor& cur) {
    RuleDecl decl;
    decl.rule_pos = at(*cur.peek());
    cur.expect_keyword("rule");
    ++statements_seen_;
    if (!cur.expect_keyword("if")) return;
    while (true) {
      auto var = cur.expect_identifier("input variable");
      if (!var) return;
      decl.variable_pos.push_back(at(cur.last()));
      if (!cur.expect_keyword("is")) return;
      auto term = cur.expect_identifier("term label");
      if (!term) return;
      decl.term_pos.push_back(at(cur.last()));
      decl.rule.antecedents.push_back({*var, *term});
      const Token* next = cur.peek();
      if (next && !next->quoted && next->value == "and") {
        cur.expect_keyword("and");
        continue;
      }
      if (!cur.expect_keyword("then")) return;
      break;
    }
    auto consequent = cur.expect_identifier("output term");
    if (!consequent) return;
    decl.consequent_pos = at(cur.last());
    decl.rule.consequent = *consequent;
    if (!cur.expect_end()) return;
    rules_.push_back(std::move(decl));
  }

  void finish() {
    const Pos end{std::max<std::size_t>(lines_.size(), 1), 1};
    if (!model_name_) error(first_statement_.value_or(Pos{1, 1}), "missing 'model \"<name>\"' declaration");
    if (inputs_.empty()) error(end, "model declares no input variables");
    if (!output_) error(end, "model declares no output variable");
    if (rules_.empty()) error(end, "model declares no rules");
    for (const auto& decl : inputs_) {
      if (decl.var.terms.empty()) error(decl.name_pos, "variable '" + decl.var.name + "' has no terms");
    }
    if (output_ && output_->var.terms.empty()) {
      error(output_->name_pos, "variable '" + output_->var.name + "' has no terms");
    }
    check_bands();
    check_rules();
  }

  void check_bands() {
    if (!output_) return;
    const auto& out = output_->var;
    if (bands_.empty()) {
      if (!out.terms.empty()) error(output_->name_pos, "output '" + out.name + "' declares no bands");
      return;
    }
    std::stable_sort(bands_.begin(), bands_.end(), [](const BandDecl& a, const BandDecl& b) {
      return a.band.lower < b.band.lower;
    });
    std::set<std::string> labels;
    for (const auto& decl : bands_) {
      if (!(decl.band.lower < decl.band.upper)) {
        error(decl.pos, "band lower bound must be less than its upper bound");
      }
      if (!labels.insert(decl.band.label).second) {
        error(decl.pos, "duplicate band label '" + decl.band.label + "'");
      }
    }
    if (bands_.front().band.lower != out.universe_min) {
      error(bands_.front().pos, "bands must start at the output range minimum " +
                                    format_number(out.universe_min));
    }
    if (bands_.back().band.upper != out.universe_max) {
      error(bands_.back().pos, "bands must end at the output range maximum " +
                                   format_number(out.universe_max));
    }
    for (std::size_t i = 1; i < bands_.size(); ++i) {
      const auto& prev = bands_[i - 1].band;
      const auto& cur = bands_[i].band;
      if (cur.lower > prev.upper) {
        error(bands_[i].pos, "gap between bands: " + format_number(prev.upper) + " to " +
                                 format_number(cur.lower) + " is not covered");
      } else if (cur.lower < prev.upper) {
        error(bands_[i].pos, "band overlaps the band ending at " + format_number(prev.upper));
      }
    }
  }

  void check_rules() {
    for (const auto& decl : rules_) {
      std::set<std::string> used;
      for (std::size_t i = 0; i < decl.rule.antecedents.size(); ++i) {
        const auto& ante = decl.rule.antecedents[i];
        auto var = std::find_if(inputs_.begin(), inputs_.end(),
                                [&](const VariableDecl& d) { return d.var.name == ante.variable; });
        if (var == inputs_.end()) {
          error(decl.variable_pos[i], "unknown input variable '" + ante.variable + "'");
          continue;
        }
        if (!used.insert(ante.variable).second) {
          error(decl.variable_pos[i], "variable '" + ante.variable + "' is tested twice");
        }
        if (!var->var.find_term(ante.term) && !var->broken_terms.count(ante.term)) {
          error(decl.term_pos[i],
                "unknown term '" + ante.term + "' for variable '" + ante.variable + "'");
        }
      }
      for (const auto& var : inputs_) {
        if (!used.count(var.var.name) &&
            std::none_of(decl.rule.antecedents.begin(), decl.rule.antecedents.end(),
                         [&](const Antecedent& a) { return a.variable == var.var.name; })) {
          error(decl.rule_pos, "rule has no condition on input '" + var.var.name + "'");
        }
      }
      if (output_ && !output_->var.find_term(decl.rule.consequent) &&
          !output_->broken_terms.count(decl.rule.consequent)) {
        error(decl.consequent_pos, "unknown output term '" + decl.rule.consequent + "'");
      }
    }
  }

  Model build() const {
    Model model;
    model.name = *model_name_;
    for (const auto& decl : inputs_) model.inputs.push_back(decl.var);
    model.output = output_->var;
    for (const auto& decl : bands_) model.bands.push_back(decl.band);
    for (const auto& decl : rules_) model.rules.push_back(decl.rule);
    return model;
  }

  enum class Current { none, input, output, discard };

  std::vector<std::string_view> lines_;
  std::size_t line_ = 0;
  std::vector<ParseError> errors_;

  std::optional<std::string> model_name_;
  std::size_t model_line_ = 0;
  std::optional<Pos> first_statement_;
  std::size_t statements_seen_ = 0;
  std::vector<VariableDecl> inputs_;
  std::optional<VariableDecl> output_;
  std::vector<BandDecl> bands_;
  std::vector<RuleDecl> rules_;
  Current current_ = Current::none;
};

void write_term(std::string& out, const Term& term) {
  out += "  term ";
  out += term.label;
  out += ' ';
  out += to_string(term.mf.shape);
  out += ' ';
  out += format_number(term.mf.a);
  if (term.mf.shape == Shape::triangle) {
    out += ' ';
    out += format_number(term.mf.b);
  }
  out += ' ';
  out += format_number(term.mf.c);
}

void write_variable(std::string& out, std::string_view keyword, const LinguisticVariable& var) {
  out += keyword;
  out += ' ';
  out += var.name;
  out += ' ';
  out += quote(var.display_name);
  out += " range ";
  out += format_number(var.universe_min);
  out += ' ';
  out += format_number(var.universe_max);
  out += '\n';
}

}  // namespace

ParseResult parse_model(const ModelSource& source) { return Parser(source.text).run(); }

std::string rule_text(const Rule& rule) {
  std::string out = "if ";
  for (std::size_t i = 0; i < rule.antecedents.size(); ++i) {
    if (i) out += " and ";
    out += rule.antecedents[i].variable;
    out += " is ";
    out += rule.antecedents[i].term;
  }
  out += " then ";
  out += rule.consequent;
  return out;
}

std::string serialize_model(const Model& model) {
  std::string out = "model " + quote(model.name) + "\n";
  for (const auto& var : model.inputs) {
    write_variable(out, "input", var);
    for (const auto& term : var.terms) {
      write_term(out, term);
      out += '\n';
    }
  }
  write_variable(out, "output", model.output);
  for (const auto& term : model.output.terms) {
    write_term(out, term);
    auto band = std::find_if(model.bands.begin(), model.bands.end(),
                             [&](const ClassificationBand& b) { return b.term == term.label; });
    if (band != model.bands.end()) {
      out += " band ";
      out += format_number(band->lower);
      out += ' ';
      out += format_number(band->upper);
      if (band->label != term.label) {
        out += ' ';
        out += quote(band->label);
      }
    }
    out += '\n';
  }
  for (const auto& rule : model.rules) {
    out += "rule ";
    out += rule_text(rule);
    out += '\n';
  }
  return out;
}

std::string format_parse_error(const ParseError& error, const std::string& origin) {
  std::string out = origin + ":" + std::to_string(error.line) + ":" + std::to_string(error.column) +
                    ": " + error.message + "\n  " + error.snippet + "\n  ";
  for (std::size_t i = 1; i < error.column && i <= error.snippet.size(); ++i) {
    out += error.snippet[i - 1] == '\t' ? '\t' : ' ';
  }
  out += "^";
  return out;
}

}  // namespace fuzzdss
