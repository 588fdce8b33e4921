// Recursive-descent reader for the TPTP subset: tff sort/symbol declarations
// and first-order formulas, plus untyped fof/cnf. The accepted grammar is
// documented in the README and is a strict subset of TPTP; mixing distinct
// binary connectives without parentheses is rejected, as TPTP does.

#include "fmf/parser.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace fmf {

namespace {

enum class Tok { Ident, Var, Dollar, Punct, Number, Quoted, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_ws();
    int line = line_, col = col_;
    if (pos_ >= text_.size()) return {Tok::End, "", line, col};
    char c = text_[pos_];
    if (std::islower(static_cast<unsigned char>(c)) || c == '_')
      return {Tok::Ident, word(), line, col};
    if (std::isupper(static_cast<unsigned char>(c)))
      return {Tok::Var, word(), line, col};
    if (c == '$') {
      advance();
      return {Tok::Dollar, "$" + word(), line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c)))
      return {Tok::Number, word(), line, col};
    if (c == '\'') {
      advance();
      std::string q;
      while (pos_ < text_.size() && text_[pos_] != '\'') {
        q.push_back(text_[pos_]);
        advance();
      }
      if (pos_ < text_.size()) advance();
      return {Tok::Quoted, q, line, col};
    }
    // multi-character operators first
    for (const char* op : {"<=>", "<~>", "!=", "=>", "~|", "~&"}) {
      std::string_view sv(op);
      if (text_.substr(pos_, sv.size()) == sv) {
        for (size_t i = 0; i < sv.size(); i++) advance();
        return {Tok::Punct, std::string(sv), line, col};
      }
    }
    std::string p(1, c);
    advance();
    return {Tok::Punct, p, line, col};
  }

private:
  std::string word() {
    std::string w;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        w.push_back(c);
        advance();
      } else {
        break;
      }
    }
    return w;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      line_++;
      col_ = 1;
    } else {
      col_++;
    }
    pos_++;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Unresolved term tree; heads are resolved against the signature once the
// syntactic context (term vs atom) is known.
struct PreTerm {
  bool is_var = false;
  std::string name;
  std::vector<PreTerm> args;
  int line = 0, col = 0;
};

class Parser {
public:
  Parser(std::string_view text, Dialect dialect) : dialect_(dialect) {
    Lexer lex(text);
    for (Token t = lex.next();; t = lex.next()) {
      tokens_.push_back(t);
      if (t.kind == Tok::End) break;
    }
  }

  ParseResult run() {
    while (peek().kind != Tok::End) parse_item();
    return std::move(result_);
  }

private:
  const Token& peek(int ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  Token take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(msg, t.line, t.col);
  }

  void expect_punct(const std::string& p) {
    if (peek().kind != Tok::Punct || peek().text != p)
      fail("expected '" + p + "'");
    take();
  }

  bool at_punct(const std::string& p) const {
    return peek().kind == Tok::Punct && peek().text == p;
  }

  void set_dialect(Dialect d, const Token& t) {
    if (dialect_ == Dialect::Auto) dialect_ = d;
    if (dialect_ != d)
      throw ParseError("mixing typed and untyped inputs", t.line, t.col);
  }

  SortId default_sort() {
    if (default_sort_ < 0) default_sort_ = result_.signature.add_sort("$i");
    return default_sort_;
  }

  void parse_item() {
    const Token& kw = peek();
    if (kw.kind != Tok::Ident) fail("expected tff, fof or cnf");
    if (kw.text == "include")
      fail("unsupported construct: include");
    if (kw.text != "tff" && kw.text != "fof" && kw.text != "cnf")
      fail("unsupported construct: " + kw.text);
    std::string form = take().text;
    if (form == "tff")
      set_dialect(Dialect::Typed, kw);
    else
      set_dialect(Dialect::Untyped, kw);

    expect_punct("(");
    if (peek().kind != Tok::Ident && peek().kind != Tok::Var &&
        peek().kind != Tok::Number)
      fail("expected formula name");
    std::string name = take().text;
    expect_punct(",");
    if (peek().kind != Tok::Ident) fail("expected formula role");
    std::string role = take().text;
    expect_punct(",");

    if (role == "type") {
      if (form != "tff") fail("type declarations require tff");
      parse_declaration();
    } else {
      Role r;
      if (role == "conjecture")
        r = Role::Conjecture;
      else if (role == "axiom" || role == "hypothesis" || role == "definition" ||
               role == "assumption" || role == "lemma" || role == "theorem" ||
               role == "corollary" || role == "negated_conjecture")
        r = Role::Axiom;
      else
        fail("unsupported formula role: " + role);

      SourceFormula sf;
      sf.name = name;
      sf.role = r;
      sf.origin = name + " at " + std::to_string(peek().line) + ":" +
                  std::to_string(peek().col);
      vars_.clear();
      cnf_free_order_.clear();
      cnf_mode_ = form == "cnf";
      if (form == "cnf")
        sf.body = parse_cnf_disjunction();
      else
        sf.body = parse_formula();
      cnf_mode_ = false;
      if (form == "cnf" && !cnf_free_order_.empty()) {
        std::vector<std::pair<int, SortId>> binders;
        for (const std::string& v : cnf_free_order_)
          binders.push_back(vars_.at(v));
        sf.body = Formula::quantified(FormulaKind::Forall, std::move(binders),
                                      std::move(sf.body));
      }
      result_.formulas.push_back(std::move(sf));
    }
    expect_punct(")");
    expect_punct(".");
  }

  // name : $tType | name : type-expr
  void parse_declaration() {
    bool parenthesized = false;
    if (at_punct("(")) {
      parenthesized = true;
      take();
    }
    if (peek().kind != Tok::Ident) fail("expected declared symbol name");
    std::string name = take().text;
    expect_punct(":");

    if (peek().kind == Tok::Dollar && peek().text == "$tType") {
      take();
      if (result_.signature.find_sort(name)) fail("duplicate sort " + name);
      result_.signature.add_sort(name);
    } else {
      std::vector<SortId> args;
      bool is_pred = false;
      SortId ret = -1;
      if (at_punct("(")) {
        take();
        args.push_back(parse_sort_name());
        while (at_punct("*")) {
          take();
          args.push_back(parse_sort_name());
        }
        expect_punct(")");
        expect_punct(">");
        parse_result_sort(is_pred, ret);
      } else {
        bool first_is_pred = false;
        SortId first = -1;
        parse_result_sort(first_is_pred, first);
        if (at_punct(">")) {
          take();
          if (first_is_pred) fail("$o cannot be an argument sort");
          args.push_back(first);
          parse_result_sort(is_pred, ret);
        } else {
          is_pred = first_is_pred;
          ret = first;
        }
      }
      if (result_.signature.find_function(name) ||
          result_.signature.find_predicate(name))
        fail("duplicate symbol " + name);
      if (is_pred)
        result_.signature.add_predicate({name, args, SymbolOrigin::Input});
      else
        result_.signature.add_function({name, args, ret, SymbolOrigin::Input});
    }
    if (parenthesized) expect_punct(")");
  }

  SortId parse_sort_name() {
    if (peek().kind == Tok::Dollar && peek().text == "$i") {
      take();
      if (auto s = result_.signature.find_sort("$i")) return *s;
      return result_.signature.add_sort("$i");
    }
    if (peek().kind == Tok::Dollar)
      fail("unsupported construct: " + peek().text);
    if (peek().kind != Tok::Ident) fail("expected sort name");
    Token t = take();
    auto s = result_.signature.find_sort(t.text);
    if (!s) throw ParseError("unknown sort " + t.text, t.line, t.col);
    return *s;
  }

  void parse_result_sort(bool& is_pred, SortId& ret) {
    if (peek().kind == Tok::Dollar && peek().text == "$o") {
      take();
      is_pred = true;
      ret = -1;
      return;
    }
    is_pred = false;
    ret = parse_sort_name();
  }

  Formula parse_formula() {
    Formula lhs = parse_unitary();
    if (!at_punct("&") && !at_punct("|") && !at_punct("=>") && !at_punct("<=>"))
      return lhs;
    std::string op = peek().text;
    if (op == "&" || op == "|") {
      std::vector<Formula> parts;
      parts.push_back(std::move(lhs));
      while (at_punct(op)) {
        take();
        parts.push_back(parse_unitary());
      }
      if (at_punct("&") || at_punct("|") || at_punct("=>") || at_punct("<=>"))
        fail("mixed binary connectives need parentheses");
      return Formula::nary(op == "&" ? FormulaKind::And : FormulaKind::Or,
                           std::move(parts));
    }
    take();
    Formula rhs = parse_unitary();
    if (at_punct("&") || at_punct("|") || at_punct("=>") || at_punct("<=>"))
      fail("'" + op + "' is non-associative, use parentheses");
    return Formula::nary(op == "=>" ? FormulaKind::Implies : FormulaKind::Iff,
                         {std::move(lhs), std::move(rhs)});
  }

  Formula parse_unitary() {
    if (at_punct("!") || at_punct("?")) {
      bool universal = peek().text == "!";
      take();
      expect_punct("[");
      std::vector<std::pair<int, SortId>> binders;
      std::vector<std::pair<std::string, std::optional<std::pair<int, SortId>>>>
          shadowed;
      while (true) {
        if (peek().kind != Tok::Var) fail("expected a variable in binder");
        Token vt = take();
        SortId s;
        if (at_punct(":")) {
          if (dialect_ == Dialect::Untyped)
            fail("sorted binders require the typed dialect");
          take();
          s = parse_sort_name();
        } else {
          if (dialect_ == Dialect::Typed)
            fail("typed dialect requires a sort on bound variable " + vt.text);
          s = default_sort();
        }
        int id = next_var_++;
        auto it = vars_.find(vt.text);
        shadowed.emplace_back(vt.text, it == vars_.end()
                                           ? std::nullopt
                                           : std::make_optional(it->second));
        vars_[vt.text] = {id, s};
        binders.emplace_back(id, s);
        if (at_punct(",")) {
          take();
          continue;
        }
        break;
      }
      expect_punct("]");
      expect_punct(":");
      Formula body = parse_unitary();
      for (auto it = shadowed.rbegin(); it != shadowed.rend(); ++it) {
        if (it->second)
          vars_[it->first] = *it->second;
        else
          vars_.erase(it->first);
      }
      return Formula::quantified(
          universal ? FormulaKind::Forall : FormulaKind::Exists,
          std::move(binders), std::move(body));
    }
    if (at_punct("~")) {
      take();
      return Formula::unary(FormulaKind::Not, parse_unitary());
    }
    if (at_punct("(")) {
      take();
      Formula f = parse_formula();
      expect_punct(")");
      return f;
    }
    if (peek().kind == Tok::Dollar) {
      if (peek().text == "$true") {
        take();
        return Formula::constant(true);
      }
      if (peek().text == "$false") {
        take();
        return Formula::constant(false);
      }
      if (peek().text == "$distinct") {
        take();
        expect_punct("(");
        std::vector<PreTerm> elems;
        elems.push_back(parse_preterm());
        while (at_punct(",")) {
          take();
          elems.push_back(parse_preterm());
        }
        expect_punct(")");
        std::vector<Term> terms;
        std::vector<SortId> sorts;
        for (const PreTerm& p : elems) {
          auto [t, s] = resolve_term(p);
          terms.push_back(std::move(t));
          sorts.push_back(s);
        }
        for (size_t i = 1; i < sorts.size(); i++)
          if (sorts[i] != sorts[0])
            fail("$distinct arguments must share a sort");
        std::vector<Formula> parts;
        for (size_t i = 0; i < terms.size(); i++)
          for (size_t j = i + 1; j < terms.size(); j++)
            parts.push_back(Formula::make_atom(
                Literal::equality(false, terms[i], terms[j])));
        if (parts.size() == 1) return std::move(parts[0]);
        return Formula::nary(FormulaKind::And, std::move(parts));
      }
      fail("unsupported construct: " + peek().text);
    }
    if (peek().kind == Tok::Number)
      fail("unsupported construct: numeric literal");

    // an atom, or a term followed by = / !=
    PreTerm t = parse_preterm();
    if (at_punct("=") || at_punct("!=")) {
      bool positive = peek().text == "=";
      take();
      PreTerm u = parse_preterm();
      auto [lt, ls] = resolve_term(t);
      auto [rt, rs] = resolve_term(u);
      if (ls != rs)
        throw ParseError("equality between different sorts", t.line, t.col);
      return Formula::make_atom(
          Literal::equality(positive, std::move(lt), std::move(rt)));
    }
    return Formula::make_atom(resolve_atom(t));
  }

  Formula parse_cnf_disjunction() {
    bool parenthesized = at_punct("(");
    if (parenthesized) take();
    std::vector<Formula> lits;
    while (true) {
      bool neg = false;
      if (at_punct("~")) {
        take();
        neg = true;
      }
      Formula atom = parse_unitary();
      lits.push_back(neg ? Formula::unary(FormulaKind::Not, std::move(atom))
                         : std::move(atom));
      if (at_punct("|")) {
        take();
        continue;
      }
      break;
    }
    if (parenthesized) expect_punct(")");
    if (lits.size() == 1) return std::move(lits[0]);
    return Formula::nary(FormulaKind::Or, std::move(lits));
  }

  PreTerm parse_preterm() {
    PreTerm t;
    t.line = peek().line;
    t.col = peek().col;
    if (peek().kind == Tok::Var) {
      t.is_var = true;
      t.name = take().text;
      return t;
    }
    if (peek().kind == Tok::Number)
      fail("unsupported construct: numeric literal");
    if (peek().kind == Tok::Quoted)
      fail("unsupported construct: quoted atom");
    if (peek().kind != Tok::Ident) fail("expected a term");
    t.name = take().text;
    if (at_punct("(")) {
      take();
      t.args.push_back(parse_preterm());
      while (at_punct(",")) {
        take();
        t.args.push_back(parse_preterm());
      }
      expect_punct(")");
    }
    return t;
  }

  std::pair<int, SortId> lookup_var(const PreTerm& p) {
    auto it = vars_.find(p.name);
    if (it == vars_.end()) {
      // cnf clauses bind their variables implicitly
      if (in_cnf_position()) {
        int id = next_var_++;
        vars_[p.name] = {id, default_sort()};
        cnf_free_order_.push_back(p.name);
        return vars_[p.name];
      }
      throw ParseError("free variable " + p.name, p.line, p.col);
    }
    return it->second;
  }

  bool in_cnf_position() const { return cnf_mode_; }

  std::pair<Term, SortId> resolve_term(const PreTerm& p) {
    if (p.is_var) {
      auto [id, sort] = lookup_var(p);
      return {Term::variable(id, sort), sort};
    }
    if (dialect_ == Dialect::Typed) {
      auto f = result_.signature.find_function(p.name);
      if (!f) {
        if (result_.signature.find_predicate(p.name))
          throw ParseError(p.name + " is a predicate, not a function", p.line,
                           p.col);
        throw ParseError("undeclared function " + p.name, p.line, p.col);
      }
      const FuncSymbol& sym = result_.signature.function(*f);
      if (static_cast<int>(p.args.size()) != sym.arity())
        throw ParseError(p.name + " expects " + std::to_string(sym.arity()) +
                             " arguments",
                         p.line, p.col);
      std::vector<Term> args;
      for (size_t i = 0; i < p.args.size(); i++) {
        auto [t, s] = resolve_term(p.args[i]);
        if (s != sym.arg_sorts[i])
          throw ParseError("argument " + std::to_string(i + 1) + " of " +
                               p.name + " has the wrong sort",
                           p.line, p.col);
        args.push_back(std::move(t));
      }
      return {Term::app(*f, std::move(args)), sym.ret_sort};
    }
    // untyped: register on first use
    int f = untyped_function(p.name, static_cast<int>(p.args.size()), p);
    std::vector<Term> args;
    for (const PreTerm& a : p.args) args.push_back(resolve_term(a).first);
    return {Term::app(f, std::move(args)), default_sort()};
  }

  Literal resolve_atom(const PreTerm& p) {
    if (p.is_var)
      throw ParseError("a variable is not a formula", p.line, p.col);
    if (dialect_ == Dialect::Typed) {
      auto pr = result_.signature.find_predicate(p.name);
      if (!pr) throw ParseError("undeclared predicate " + p.name, p.line, p.col);
      const PredSymbol& sym = result_.signature.predicate(*pr);
      if (static_cast<int>(p.args.size()) != sym.arity())
        throw ParseError(p.name + " expects " + std::to_string(sym.arity()) +
                             " arguments",
                         p.line, p.col);
      std::vector<Term> args;
      for (size_t i = 0; i < p.args.size(); i++) {
        auto [t, s] = resolve_term(p.args[i]);
        if (s != sym.arg_sorts[i])
          throw ParseError("argument " + std::to_string(i + 1) + " of " +
                               p.name + " has the wrong sort",
                           p.line, p.col);
        args.push_back(std::move(t));
      }
      return Literal::predicate(true, *pr, std::move(args));
    }
    int pr = untyped_predicate(p.name, static_cast<int>(p.args.size()), p);
    std::vector<Term> args;
    for (const PreTerm& a : p.args) args.push_back(resolve_term(a).first);
    return Literal::predicate(true, pr, std::move(args));
  }

  int untyped_function(const std::string& name, int arity, const PreTerm& p) {
    if (result_.signature.find_predicate(name))
      throw ParseError(name + " used both as predicate and function", p.line,
                       p.col);
    if (auto f = result_.signature.find_function(name)) {
      if (result_.signature.function(*f).arity() != arity)
        throw ParseError(name + " used with two different arities", p.line,
                         p.col);
      return *f;
    }
    std::vector<SortId> args(arity, default_sort());
    return result_.signature.add_function(
        {name, std::move(args), default_sort(), SymbolOrigin::Input});
  }

  int untyped_predicate(const std::string& name, int arity, const PreTerm& p) {
    if (result_.signature.find_function(name))
      throw ParseError(name + " used both as predicate and function", p.line,
                       p.col);
    if (auto pr = result_.signature.find_predicate(name)) {
      if (result_.signature.predicate(*pr).arity() != arity)
        throw ParseError(name + " used with two different arities", p.line,
                         p.col);
      return *pr;
    }
    std::vector<SortId> args(arity, default_sort());
    return result_.signature.add_predicate(
        {name, std::move(args), SymbolOrigin::Input});
  }

  Dialect dialect_;
  bool cnf_mode_ = false;
  std::vector<Token> tokens_;
  size_t pos_ = 0;
  ParseResult result_;
  SortId default_sort_ = -1;
  std::map<std::string, std::pair<int, SortId>> vars_;
  std::vector<std::string> cnf_free_order_;
  int next_var_ = 0;
};

}  // namespace

ParseResult parse(std::string_view text, Dialect dialect) {
  return Parser(text, dialect).run();
}

ParseResult parse_file(const std::string& path, Dialect dialect) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path, 0, 0);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), dialect);
}

}  // namespace fmf
