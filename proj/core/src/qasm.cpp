#include "ensc/qasm.hpp"

#include <cctype>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>

namespace ensc {

namespace {

struct Token {
  enum Kind { Ident, Number, Symbol, String, End } kind;
  std::string text;
  double value = 0.0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_ = {Token::End, "", 0.0, line_, col_};
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        bump();
      tok_ = {Token::Ident, src_.substr(start, pos_ - start), 0.0, tok_.line,
              tok_.col};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '.'))
        bump();
      // exponent
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        size_t save = pos_;
        bump();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
          bump();
        if (pos_ < src_.size() &&
            std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          while (pos_ < src_.size() &&
                 std::isdigit(static_cast<unsigned char>(src_[pos_])))
            bump();
        } else {
          pos_ = save;  // not an exponent after all
        }
      }
      std::string text = src_.substr(start, pos_ - start);
      tok_ = {Token::Number, text, std::strtod(text.c_str(), nullptr),
              tok_.line, tok_.col};
      return;
    }
    if (c == '"') {
      bump();
      size_t start = pos_;
      while (pos_ < src_.size() && src_[pos_] != '"') bump();
      if (pos_ >= src_.size())
        throw ParseError("unterminated string", tok_.line, tok_.col);
      std::string text = src_.substr(start, pos_ - start);
      bump();  // closing quote
      tok_ = {Token::String, text, 0.0, tok_.line, tok_.col};
      return;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      bump();
      bump();
      tok_ = {Token::Symbol, "->", 0.0, tok_.line, tok_.col};
      return;
    }
    bump();
    tok_ = {Token::Symbol, std::string(1, c), 0.0, tok_.line, tok_.col};
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& src, std::vector<std::string>* warnings)
      : lex_(src), warnings_(warnings) {}

  Circuit run() {
    while (lex_.peek().kind != Token::End) statement();
    if (!qreg_seen_)
      throw ParseError("no qreg declared", lex_.peek().line, lex_.peek().col);
    return circuit_;
  }

 private:
  void statement() {
    Token t = lex_.peek();
    if (t.kind != Token::Ident)
      throw ParseError("expected statement, got '" + t.text + "'", t.line,
                       t.col);
    if (t.text == "OPENQASM") {
      lex_.next();
      expect_number();
      expect_symbol(";");
      return;
    }
    if (t.text == "include") {
      lex_.next();
      Token s = lex_.next();
      if (s.kind != Token::String)
        throw ParseError("include expects a string", s.line, s.col);
      expect_symbol(";");
      return;
    }
    if (t.text == "qreg") {
      lex_.next();
      Token name = expect_ident();
      expect_symbol("[");
      int n = int(expect_number().value);
      expect_symbol("]");
      expect_symbol(";");
      if (qreg_seen_)
        throw ParseError("only one qreg is supported", name.line, name.col);
      if (n < 1) throw ParseError("qreg size must be >= 1", name.line, name.col);
      qreg_seen_ = true;
      qreg_name_ = name.text;
      circuit_.width = n;
      return;
    }
    if (t.text == "creg") {
      lex_.next();
      Token name = expect_ident();
      expect_symbol("[");
      int n = int(expect_number().value);
      expect_symbol("]");
      expect_symbol(";");
      cregs_[name.text] = n;
      return;
    }
    if (t.text == "measure") {
      lex_.next();
      argument();  // quantum arg
      expect_symbol("->");
      argument();  // classical arg
      expect_symbol(";");
      warn("measure ignored (line " + std::to_string(t.line) + ")");
      return;
    }
    if (t.text == "barrier") {
      lex_.next();
      argument();
      while (lex_.peek().kind == Token::Symbol && lex_.peek().text == ",") {
        lex_.next();
        argument();
      }
      expect_symbol(";");
      return;
    }
    if (t.text == "gate" || t.text == "opaque" || t.text == "if" ||
        t.text == "reset") {
      throw ParseError("'" + t.text + "' is outside the supported subset",
                       t.line, t.col);
    }
    gate_application();
  }

  struct Arg {
    std::string reg;
    std::optional<int> index;
    int line, col;
  };

  Arg argument() {
    Token name = expect_ident();
    Arg a{name.text, std::nullopt, name.line, name.col};
    if (lex_.peek().kind == Token::Symbol && lex_.peek().text == "[") {
      lex_.next();
      a.index = int(expect_number().value);
      expect_symbol("]");
    }
    return a;
  }

  void gate_application() {
    Token name = lex_.next();
    static const std::map<std::string, GateKind> kGates = {
        {"u3", GateKind::U3},   {"rz", GateKind::RZ}, {"h", GateKind::H},
        {"s", GateKind::S},     {"sdg", GateKind::Sdg}, {"t", GateKind::T},
        {"tdg", GateKind::Tdg}, {"x", GateKind::X},   {"y", GateKind::Y},
        {"z", GateKind::Z},     {"cx", GateKind::CNOT}};
    auto it = kGates.find(name.text);
    if (it == kGates.end())
      throw ParseError("unknown gate '" + name.text + "'", name.line, name.col);
    GateKind kind = it->second;

    std::vector<double> params;
    if (lex_.peek().kind == Token::Symbol && lex_.peek().text == "(") {
      lex_.next();
      if (!(lex_.peek().kind == Token::Symbol && lex_.peek().text == ")")) {
        params.push_back(expression());
        while (lex_.peek().kind == Token::Symbol && lex_.peek().text == ",") {
          lex_.next();
          params.push_back(expression());
        }
      }
      expect_symbol(")");
    }
    if (int(params.size()) != gate_param_count(kind))
      throw ParseError("gate '" + name.text + "' expects " +
                           std::to_string(gate_param_count(kind)) +
                           " parameter(s)",
                       name.line, name.col);

    std::vector<Arg> args;
    args.push_back(argument());
    while (lex_.peek().kind == Token::Symbol && lex_.peek().text == ",") {
      lex_.next();
      args.push_back(argument());
    }
    expect_symbol(";");

    if (int(args.size()) != gate_arity(kind))
      throw ParseError("gate '" + name.text + "' expects " +
                           std::to_string(gate_arity(kind)) + " argument(s)",
                       name.line, name.col);
    for (const auto& a : args) {
      if (a.reg != qreg_name_)
        throw ParseError("unknown quantum register '" + a.reg + "'", a.line,
                         a.col);
      if (a.index && (*a.index < 0 || *a.index >= circuit_.width))
        throw ParseError("qubit index out of range", a.line, a.col);
    }

    if (kind == GateKind::CNOT) {
      if (!args[0].index || !args[1].index)
        throw ParseError("cx requires indexed qubits", name.line, name.col);
      circuit_.add(Gate{kind, {*args[0].index, *args[1].index}, params});
      return;
    }
    if (args[0].index) {
      circuit_.add(Gate{kind, {*args[0].index}, params});
    } else {
      // whole-register broadcast
      for (int q = 0; q < circuit_.width; ++q)
        circuit_.add(Gate{kind, {q}, params});
    }
  }

  // expression := term (('+'|'-') term)*
  // term       := factor (('*'|'/') factor)*
  // factor     := ('-'|'+') factor | number | 'pi' | '(' expression ')'
  double expression() {
    double v = term();
    while (lex_.peek().kind == Token::Symbol &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      std::string op = lex_.next().text;
      double rhs = term();
      v = (op == "+") ? v + rhs : v - rhs;
    }
    return v;
  }

  double term() {
    double v = factor();
    while (lex_.peek().kind == Token::Symbol &&
           (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      Token op = lex_.next();
      double rhs = factor();
      if (op.text == "/") {
        if (rhs == 0.0) throw ParseError("division by zero", op.line, op.col);
        v /= rhs;
      } else {
        v *= rhs;
      }
    }
    return v;
  }

  double factor() {
    Token t = lex_.peek();
    if (t.kind == Token::Symbol && (t.text == "-" || t.text == "+")) {
      lex_.next();
      double v = factor();
      return t.text == "-" ? -v : v;
    }
    if (t.kind == Token::Number) {
      lex_.next();
      return t.value;
    }
    if (t.kind == Token::Ident && t.text == "pi") {
      lex_.next();
      return std::numbers::pi;
    }
    if (t.kind == Token::Symbol && t.text == "(") {
      lex_.next();
      double v = expression();
      expect_symbol(")");
      return v;
    }
    throw ParseError("bad token '" + t.text + "' in angle expression", t.line,
                     t.col);
  }

  Token expect_ident() {
    Token t = lex_.next();
    if (t.kind != Token::Ident)
      throw ParseError("expected identifier, got '" + t.text + "'", t.line,
                       t.col);
    return t;
  }

  Token expect_number() {
    Token t = lex_.next();
    if (t.kind != Token::Number)
      throw ParseError("expected number, got '" + t.text + "'", t.line, t.col);
    return t;
  }

  void expect_symbol(const std::string& s) {
    Token t = lex_.next();
    if (t.kind != Token::Symbol || t.text != s)
      throw ParseError("expected '" + s + "', got '" + t.text + "'", t.line,
                       t.col);
  }

  void warn(const std::string& msg) {
    if (warnings_) warnings_->push_back(msg);
  }

  Lexer lex_;
  std::vector<std::string>* warnings_;
  Circuit circuit_;
  bool qreg_seen_ = false;
  std::string qreg_name_;
  std::map<std::string, int> cregs_;
};

std::string fmt_angle(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Circuit parse_qasm(const std::string& text, std::vector<std::string>* warnings) {
  Parser p(text, warnings);
  return p.run();
}

std::string emit_qasm(const Circuit& c) {
  if (c.width < 1) throw InputError("emit_qasm: circuit has no qubits");
  std::string out;
  out += "OPENQASM 2.0;\n";
  out += "include \"qelib1.inc\";\n";
  out += "qreg q[" + std::to_string(c.width) + "];\n";
  for (const auto& g : c.gates) {
    out += gate_name(g.kind);
    if (!g.params.empty()) {
      out += "(";
      for (size_t i = 0; i < g.params.size(); ++i) {
        if (i) out += ",";
        out += fmt_angle(g.params[i]);
      }
      out += ")";
    }
    out += " ";
    for (size_t i = 0; i < g.qubits.size(); ++i) {
      if (i) out += ",";
      out += "q[" + std::to_string(g.qubits[i]) + "]";
    }
    out += ";\n";
  }
  return out;
}

}  // namespace ensc
