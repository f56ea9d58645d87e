#include "dcopt/problem_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace dcopt {

namespace {

enum class TokKind { kIdent, kNumber, kString, kLParen, kRParen, kLBracket, kRBracket, kComma, kEnd };

struct Token {
  TokKind kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_blank();
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) {
      current_.kind = TokKind::kEnd;
      current_.text = "<end of input>";
      return;
    }
    const char c = text_[pos_];
    if (c == '(') { one(TokKind::kLParen); return; }
    if (c == ')') { one(TokKind::kRParen); return; }
    if (c == '[') { one(TokKind::kLBracket); return; }
    if (c == ']') { one(TokKind::kRBracket); return; }
    if (c == ',') { one(TokKind::kComma); return; }
    if (c == '"') { string_token(); return; }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') { ident(); return; }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      number();
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void one(TokKind kind) {
    current_.kind = kind;
    current_.text = text_.substr(pos_, 1);
    bump();
  }

  void ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      bump();
    current_.kind = TokKind::kIdent;
    current_.text = text_.substr(start, pos_ - start);
  }

  void number() {
    std::size_t start = pos_;
    const char* begin = text_.c_str() + start;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed number", line_, column_);
    while (pos_ < start + static_cast<std::size_t>(end - begin)) bump();
    current_.kind = TokKind::kNumber;
    current_.text = text_.substr(start, static_cast<std::size_t>(end - begin));
    current_.number = value;
  }

  void string_token() {
    const int line = line_, column = column_;
    bump(); // opening quote
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\n') throw ParseError("unterminated string", line, column);
      out.push_back(text_[pos_]);
      bump();
    }
    if (pos_ >= text_.size()) throw ParseError("unterminated string", line, column);
    bump(); // closing quote
    current_.kind = TokKind::kString;
    current_.text = out;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  ProblemDoc parse() {
    ProblemDoc doc;
    bool saw_dim = false, saw_objective = false;
    while (lex_.peek().kind != TokKind::kEnd) {
      const Token field = expect(TokKind::kIdent, "field name");
      if (field.text == "dim") {
        doc.problem.dim = static_cast<Index>(expect_number(field, "dim").number);
        if (doc.problem.dim < 1) throw ParseError("dim must be >= 1", field.line, field.column);
        saw_dim = true;
      } else if (field.text == "objective") {
        doc.problem.objective = parse_expr();
        saw_objective = true;
      } else if (field.text == "ineq") {
        doc.problem.inequalities.push_back(parse_expr());
      } else if (field.text == "eq") {
        doc.problem.equalities.push_back(parse_expr());
      } else if (field.text == "ipcq") {
        const Token b = expect(TokKind::kIdent, "true or false");
        if (b.text == "true") doc.problem.ipcq_asserted = true;
        else if (b.text == "false") doc.problem.ipcq_asserted = false;
        else throw ParseError("expected true or false after ipcq", b.line, b.column);
      } else if (field.text == "ipcq_note") {
        doc.problem.ipcq_note = expect(TokKind::kString, "quoted note").text;
      } else if (field.text == "point") {
        std::vector<double> coords;
        while (lex_.peek().kind == TokKind::kNumber) coords.push_back(lex_.take().number);
        if (coords.empty()) throw ParseError("point needs at least one coordinate", field.line, field.column);
        VectorX<double> p(static_cast<Index>(coords.size()));
        for (Index i = 0; i < p.size(); ++i) p[i] = coords[static_cast<std::size_t>(i)];
        doc.point = p;
      } else if (field.text == "lambda") {
        doc.lambda = expect_number(field, "lambda").number;
      } else if (field.text == "alpha_star") {
        doc.alpha_star = expect_number(field, "alpha_star").number;
      } else if (field.text == "mu") {
        if (lex_.peek().kind == TokKind::kIdent && lex_.peek().text == "inf") {
          lex_.take();
          doc.mu = std::numeric_limits<double>::infinity();
        } else {
          doc.mu = expect_number(field, "mu").number;
        }
      } else if (field.text == "max_iters") {
        doc.max_iters = static_cast<int>(expect_number(field, "max_iters").number);
      } else if (field.text == "tol_opt") {
        doc.tol_opt = expect_number(field, "tol_opt").number;
      } else {
        throw ParseError("unknown field '" + field.text + "'", field.line, field.column);
      }
    }
    const Token& end = lex_.peek();
    if (!saw_dim) throw ParseError("missing required field 'dim'", end.line, end.column);
    if (!saw_objective) throw ParseError("missing required field 'objective'", end.line, end.column);
    validate_dims(doc);
    return doc;
  }

 private:
  Token expect(TokKind kind, const std::string& what) {
    const Token t = lex_.take();
    if (t.kind != kind)
      throw ParseError("expected " + what + ", found '" + t.text + "'", t.line, t.column);
    return t;
  }

  Token expect_number(const Token& field, const std::string& name) {
    const Token t = lex_.take();
    if (t.kind != TokKind::kNumber)
      throw ParseError("expected a number after '" + name + "'", field.line, field.column);
    return t;
  }

  Exprd parse_expr() {
    const Token head = expect(TokKind::kIdent, "expression");
    expect(TokKind::kLParen, "'('");
    Exprd out = Exprd::constant(0.0);
    if (head.text == "const") {
      out = Exprd::constant(expect(TokKind::kNumber, "number").number);
    } else if (head.text == "affine") {
      const double a = expect(TokKind::kNumber, "number").number;
      expect(TokKind::kComma, "','");
      out = Exprd::affine(a, parse_vector());
    } else if (head.text == "abs") {
      out = Exprd::abs(parse_expr());
    } else if (head.text == "neg") {
      out = Exprd::neg(parse_expr());
    } else if (head.text == "scale") {
      const double k = expect(TokKind::kNumber, "number").number;
      expect(TokKind::kComma, "','");
      out = Exprd::scale(k, parse_expr());
    } else if (head.text == "sum" || head.text == "max" || head.text == "min") {
      std::vector<Exprd> children;
      children.push_back(parse_expr());
      while (lex_.peek().kind == TokKind::kComma) {
        lex_.take();
        children.push_back(parse_expr());
      }
      if (head.text == "sum") out = Exprd::sum(std::move(children));
      else if (head.text == "max") out = Exprd::max_of(std::move(children));
      else out = Exprd::min_of(std::move(children));
    } else {
      throw ParseError("unknown expression node '" + head.text + "'", head.line, head.column);
    }
    expect(TokKind::kRParen, "')'");
    return out;
  }

  VectorX<double> parse_vector() {
    expect(TokKind::kLBracket, "'['");
    std::vector<double> coords;
    coords.push_back(expect(TokKind::kNumber, "number").number);
    while (lex_.peek().kind == TokKind::kComma) {
      lex_.take();
      coords.push_back(expect(TokKind::kNumber, "number").number);
    }
    expect(TokKind::kRBracket, "']'");
    VectorX<double> v(static_cast<Index>(coords.size()));
    for (Index i = 0; i < v.size(); ++i) v[i] = coords[static_cast<std::size_t>(i)];
    return v;
  }

  static void check_expr_dims(const Exprd& e, Index dim, const std::string& path) {
    if (e.kind() == ExprKind::kAffine) {
      if (e.slope().size() != dim)
        throw std::invalid_argument("dimension mismatch at " + path + ": affine slope has " +
                                    std::to_string(e.slope().size()) + " entries, dim is " +
                                    std::to_string(dim));
      return;
    }
    const char* tag = nullptr;
    switch (e.kind()) {
      case ExprKind::kAbs: tag = "abs"; break;
      case ExprKind::kNeg: tag = "neg"; break;
      case ExprKind::kScale: tag = "scale"; break;
      case ExprKind::kSum: tag = "sum"; break;
      case ExprKind::kMax: tag = "max"; break;
      case ExprKind::kMin: tag = "min"; break;
      default: return; // const
    }
    const auto& children = e.children();
    for (std::size_t i = 0; i < children.size(); ++i) {
      const std::string child_path =
          children.size() == 1 ? path + "." + tag
                               : path + "." + tag + "[" + std::to_string(i) + "]";
      check_expr_dims(children[i], dim, child_path);
    }
  }

  static void validate_dims(const ProblemDoc& doc) {
    check_expr_dims(doc.problem.objective, doc.problem.dim, "objective");
    for (std::size_t i = 0; i < doc.problem.inequalities.size(); ++i)
      check_expr_dims(doc.problem.inequalities[i], doc.problem.dim,
                      "ineq[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < doc.problem.equalities.size(); ++i)
      check_expr_dims(doc.problem.equalities[i], doc.problem.dim, "eq[" + std::to_string(i) + "]");
    if (doc.point && doc.point->size() != doc.problem.dim)
      throw std::invalid_argument("dimension mismatch at point: " +
                                  std::to_string(doc.point->size()) + " coordinates, dim is " +
                                  std::to_string(doc.problem.dim));
  }

  Lexer lex_;
};

void write_expr(std::string& out, const Exprd& e) {
  switch (e.kind()) {
    case ExprKind::kConst:
      out += "const(" + format_real(e.scalar()) + ")";
      return;
    case ExprKind::kAffine: {
      out += "affine(" + format_real(e.intercept()) + ", [";
      for (Index i = 0; i < e.slope().size(); ++i) {
        if (i) out += ", ";
        out += format_real(e.slope()[i]);
      }
      out += "])";
      return;
    }
    case ExprKind::kAbs:
      out += "abs(";
      write_expr(out, e.children()[0]);
      out += ")";
      return;
    case ExprKind::kNeg:
      out += "neg(";
      write_expr(out, e.children()[0]);
      out += ")";
      return;
    case ExprKind::kScale:
      out += "scale(" + format_real(e.scalar()) + ", ";
      write_expr(out, e.children()[0]);
      out += ")";
      return;
    case ExprKind::kSum:
    case ExprKind::kMax:
    case ExprKind::kMin: {
      out += e.kind() == ExprKind::kSum ? "sum(" : (e.kind() == ExprKind::kMax ? "max(" : "min(");
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) out += ", ";
        write_expr(out, e.children()[i]);
      }
      out += ")";
      return;
    }
  }
}

} // namespace

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

ProblemDoc parse_problem(const std::string& text) { return Parser(text).parse(); }

ProblemDoc parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str());
}

std::string serialize_problem(const ProblemDoc& doc) {
  std::string out;
  out += "dim " + std::to_string(doc.problem.dim) + "\n";
  out += "objective ";
  write_expr(out, doc.problem.objective);
  out += "\n";
  for (const auto& g : doc.problem.inequalities) {
    out += "ineq ";
    write_expr(out, g);
    out += "\n";
  }
  for (const auto& h : doc.problem.equalities) {
    out += "eq ";
    write_expr(out, h);
    out += "\n";
  }
  out += std::string("ipcq ") + (doc.problem.ipcq_asserted ? "true" : "false") + "\n";
  if (!doc.problem.ipcq_note.empty()) out += "ipcq_note \"" + doc.problem.ipcq_note + "\"\n";
  if (doc.point) {
    out += "point";
    for (Index i = 0; i < doc.point->size(); ++i) out += " " + format_real((*doc.point)[i]);
    out += "\n";
  }
  if (doc.lambda) out += "lambda " + format_real(*doc.lambda) + "\n";
  if (doc.alpha_star) out += "alpha_star " + format_real(*doc.alpha_star) + "\n";
  if (doc.mu) {
    out += "mu ";
    out += std::isinf(*doc.mu) ? "inf" : format_real(*doc.mu);
    out += "\n";
  }
  if (doc.max_iters) out += "max_iters " + std::to_string(*doc.max_iters) + "\n";
  if (doc.tol_opt) out += "tol_opt " + format_real(*doc.tol_opt) + "\n";
  return out;
}

bool expr_equal(const Exprd& a, const Exprd& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ExprKind::kConst:
      return a.scalar() == b.scalar();
    case ExprKind::kAffine:
      return a.intercept() == b.intercept() && a.slope().size() == b.slope().size() &&
             a.slope() == b.slope();
    case ExprKind::kScale:
      if (a.scalar() != b.scalar()) return false;
      break;
    default:
      break;
  }
  if (a.children().size() != b.children().size()) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!expr_equal(a.children()[i], b.children()[i])) return false;
  return true;
}

} // namespace dcopt
