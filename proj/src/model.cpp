#include "fmf/model.hpp"

#include <algorithm>
#include <sstream>

namespace fmf {

namespace {

std::uint64_t table_size(const std::vector<SortId>& arg_sorts,
                         const std::vector<int>& sizes) {
  std::uint64_t n = 1;
  for (SortId s : arg_sorts) n = sat_mul(n, static_cast<std::uint64_t>(sizes[s]));
  return n;
}

int tuple_rank(const std::vector<SortId>& arg_sorts,
               const std::vector<int>& sizes, const std::vector<int>& args) {
  int rank = 0;
  for (size_t i = 0; i < args.size(); i++)
    rank = rank * sizes[arg_sorts[i]] + args[i];
  return rank;
}

bool next_tuple_sorts(std::vector<int>& t, const std::vector<SortId>& arg_sorts,
                      const std::vector<int>& sizes) {
  for (int i = static_cast<int>(t.size()) - 1; i >= 0; i--) {
    if (++t[i] < sizes[arg_sorts[i]]) return true;
    t[i] = 0;
  }
  return false;
}

// read one function cell from the SAT model, clamping argument indices into
// the encoded widths (elements beyond a class bound behave like the last
// bounded element)
int read_function_cell(const Encoding& enc, int f, const std::vector<int>& args,
                       int result_limit, const std::vector<bool>& sat_model) {
  const std::vector<int>& w = enc.atoms.func_widths[f];
  std::vector<int> clamped(args.size());
  for (size_t i = 0; i < args.size(); i++)
    clamped[i] = std::min(args[i], w[i] - 1);
  int value = -1;
  for (int d = 0; d < w.back() && d < result_limit; d++) {
    if (sat_model[enc.atoms.func_atom(f, clamped, d)]) {
      if (value != -1)
        throw InternalError("model extraction: two values for one term");
      value = d;
    }
  }
  if (value == -1)
    throw InternalError("model extraction: no value for a principal term");
  return value;
}

FiniteModel extract(const Problem& problem, const Encoding& enc,
                    const std::vector<bool>& sat_model,
                    const std::vector<int>& sizes) {
  const Signature& sig = problem.signature;
  FiniteModel m;
  m.sizes = sizes;
  m.functions.resize(sig.num_functions());
  m.predicates.resize(sig.num_predicates());
  for (int f = 0; f < sig.num_functions(); f++) {
    const FuncSymbol& sym = sig.function(f);
    std::uint64_t cells = table_size(sym.arg_sorts, sizes);
    m.functions[f].reserve(cells);
    std::vector<int> args(sym.arity(), 0);
    bool more = true;
    while (more) {
      m.functions[f].push_back(read_function_cell(
          enc, f, args, sizes[sym.ret_sort], sat_model));
      more = sym.arity() > 0 && next_tuple_sorts(args, sym.arg_sorts, sizes);
    }
  }
  for (int p = 0; p < sig.num_predicates(); p++) {
    const PredSymbol& sym = sig.predicate(p);
    std::vector<int> args(sym.arity(), 0);
    const std::vector<int>& w = enc.atoms.pred_widths[p];
    bool more = true;
    while (more) {
      std::vector<int> clamped(args.size());
      for (size_t i = 0; i < args.size(); i++)
        clamped[i] = std::min(args[i], w[i] - 1);
      m.predicates[p].push_back(
          sat_model[enc.atoms.pred_atom(p, clamped)] ? 1 : 0);
      more = sym.arity() > 0 && next_tuple_sorts(args, sym.arg_sorts, sizes);
    }
  }
  return m;
}

}  // namespace

int FiniteModel::function_value(const Signature& sig, int f,
                                const std::vector<int>& args) const {
  return functions[f][tuple_rank(sig.function(f).arg_sorts, sizes, args)];
}

bool FiniteModel::predicate_value(const Signature& sig, int p,
                                  const std::vector<int>& args) const {
  return predicates[p][tuple_rank(sig.predicate(p).arg_sorts, sizes, args)] != 0;
}

FiniteModel extract_pointwise(const Problem& problem, const Encoding& enc,
                              const std::vector<bool>& sat_model) {
  return extract(problem, enc, sat_model, enc.sizes.sizes);
}

FiniteModel extract_contour(const Problem& problem, const Encoding& enc,
                            const std::vector<bool>& sat_model) {
  std::vector<int> sizes(enc.sizes.sizes.size());
  for (SortId s = 0; s < static_cast<SortId>(sizes.size()); s++) {
    int readout = -1;
    for (int i = 0; i < static_cast<int>(enc.marking.bound[s].size()); i++) {
      int var = enc.marking.bound[s][i];
      if (var != 0 && !sat_model[var]) {
        readout = i + 1;
        break;
      }
    }
    if (readout == -1)
      throw InternalError("contour extraction: no false bound variable");
    sizes[s] = readout;
  }
  return extract(problem, enc, sat_model, sizes);
}

FiniteModel translate_back(const FiniteModel& final_model,
                           const Signature& final_sig,
                           const SortTransforms& transforms,
                           const Problem& original,
                           const std::set<SortId>& phantom_parents) {
  const Signature& osig = original.signature;
  std::vector<int> sizes = final_model.sizes;

  if (transforms.collapse) {
    for (SortId s : transforms.collapse->originals)
      sizes[s] = sizes[transforms.collapse->merged];
  }
  for (const auto& ex : transforms.expansions) {
    if (sizes[ex.new_sort] > sizes[ex.parent]) {
      if (phantom_parents.count(ex.parent))
        sizes[ex.parent] = sizes[ex.new_sort];
      else
        throw InternalError("translate_back: subsort larger than its parent");
    }
  }

  FiniteModel m;
  m.sizes.assign(sizes.begin(), sizes.begin() + osig.num_sorts());
  m.functions.resize(osig.num_functions());
  m.predicates.resize(osig.num_predicates());

  // map an element of the original sort into the transformed symbol
  // position's sort: same index, clamped into expanded subsorts
  auto map_arg = [&](SortId transformed_sort, int element) {
    return std::min(element, final_model.sizes[transformed_sort] - 1);
  };

  for (int f = 0; f < osig.num_functions(); f++) {
    const FuncSymbol& osym = osig.function(f);
    const FuncSymbol& tsym = final_sig.function(f);
    std::vector<int> args(osym.arity(), 0);
    bool more = true;
    while (more) {
      std::vector<int> targs(args.size());
      for (size_t i = 0; i < args.size(); i++)
        targs[i] = map_arg(tsym.arg_sorts[i], args[i]);
      m.functions[f].push_back(
          final_model.function_value(final_sig, f, targs));
      more = osym.arity() > 0 && next_tuple_sorts(args, osym.arg_sorts, m.sizes);
    }
  }
  for (int p = 0; p < osig.num_predicates(); p++) {
    const PredSymbol& osym = osig.predicate(p);
    const PredSymbol& tsym = final_sig.predicate(p);
    std::vector<int> args(osym.arity(), 0);
    bool more = true;
    while (more) {
      std::vector<int> targs(args.size());
      for (size_t i = 0; i < args.size(); i++)
        targs[i] = map_arg(tsym.arg_sorts[i], args[i]);
      m.predicates[p].push_back(
          final_model.predicate_value(final_sig, p, targs) ? 1 : 0);
      more = osym.arity() > 0 && next_tuple_sorts(args, osym.arg_sorts, m.sizes);
    }
  }
  return m;
}

namespace {

int eval_term(const Term& t, const Signature& sig, const FiniteModel& m,
              const std::vector<int>& env) {
  if (t.is_var()) return env[t.var];
  std::vector<int> args;
  args.reserve(t.args.size());
  for (const Term& a : t.args) args.push_back(eval_term(a, sig, m, env));
  return m.function_value(sig, t.func, args);
}

bool eval_literal(const Literal& l, const Signature& sig, const FiniteModel& m,
                  const std::vector<int>& env) {
  bool value;
  if (l.is_equality()) {
    value = eval_term(l.lhs(), sig, m, env) == eval_term(l.rhs(), sig, m, env);
  } else {
    std::vector<int> args;
    args.reserve(l.args.size());
    for (const Term& a : l.args) args.push_back(eval_term(a, sig, m, env));
    value = m.predicate_value(sig, l.pred, args);
  }
  return l.positive == value;
}

}  // namespace

VerifyResult verify(const Problem& problem, const FiniteModel& model,
                    std::uint64_t instance_limit) {
  const Signature& sig = problem.signature;
  std::uint64_t budget = instance_limit;
  for (const Clause& c : problem.clauses) {
    auto vars = clause_variables(c);
    int max_id = -1;
    for (auto [v, s] : vars) max_id = std::max(max_id, v);
    std::vector<int> env(max_id + 1, 0);
    std::vector<int> digits(vars.size(), 0);
    bool more = true;
    while (more) {
      if (budget-- == 0)
        throw ResourceLimitError("verify: instance limit exceeded");
      for (size_t i = 0; i < vars.size(); i++) env[vars[i].first] = digits[i];
      bool sat = false;
      for (const Literal& l : c.literals)
        if (eval_literal(l, sig, model, env)) {
          sat = true;
          break;
        }
      if (!sat) {
        std::string witness = to_string(c, sig) + " under {";
        for (size_t i = 0; i < vars.size(); i++) {
          if (i) witness += ", ";
          witness +=
              "X" + std::to_string(vars[i].first) + " := e" +
              std::to_string(digits[i] + 1);
        }
        witness += "}";
        return {false, witness};
      }
      // advance the mixed-radix substitution
      more = false;
      for (int i = static_cast<int>(digits.size()) - 1; i >= 0; i--) {
        if (++digits[i] < model.sizes[vars[i].second]) {
          more = true;
          break;
        }
        digits[i] = 0;
      }
    }
  }
  return {true, ""};
}

std::string print_model(const FiniteModel& model, const Signature& sig) {
  std::ostringstream out;
  for (SortId s = 0; s < sig.num_sorts(); s++) {
    out << "sort " << sig.sort(s).name << " = {";
    for (int i = 0; i < model.sizes[s]; i++) out << " e" << i + 1;
    out << " }\n";
  }
  for (int f = 0; f < sig.num_functions(); f++) {
    const FuncSymbol& sym = sig.function(f);
    if (sym.origin == SymbolOrigin::Definition ||
        sym.origin == SymbolOrigin::Split)
      continue;
    std::vector<int> args(sym.arity(), 0);
    bool more = true;
    while (more) {
      out << sym.name;
      if (sym.arity() > 0) {
        out << "(";
        for (int i = 0; i < sym.arity(); i++)
          out << (i ? ",e" : "e") << args[i] + 1;
        out << ")";
      }
      out << " = e" << model.function_value(sig, f, args) + 1 << "\n";
      more = sym.arity() > 0 && next_tuple_sorts(args, sym.arg_sorts, model.sizes);
    }
  }
  for (int p = 0; p < sig.num_predicates(); p++) {
    const PredSymbol& sym = sig.predicate(p);
    if (sym.origin == SymbolOrigin::Split) continue;
    std::vector<int> args(sym.arity(), 0);
    bool more = true;
    while (more) {
      if (model.predicate_value(sig, p, args)) {
        out << sym.name;
        if (sym.arity() > 0) {
          out << "(";
          for (int i = 0; i < sym.arity(); i++)
            out << (i ? ",e" : "e") << args[i] + 1;
          out << ")";
        }
        out << "\n";
      }
      more = sym.arity() > 0 && next_tuple_sorts(args, sym.arg_sorts, model.sizes);
    }
  }
  return out.str();
}

namespace {

// parses "name" or "name(e1,e2)" heads from the model text
bool parse_applied(const std::string& s, std::string& name,
                   std::vector<int>& args) {
  size_t paren = s.find('(');
  args.clear();
  if (paren == std::string::npos) {
    name = s;
    return !name.empty();
  }
  name = s.substr(0, paren);
  size_t pos = paren + 1;
  while (pos < s.size() && s[pos] != ')') {
    if (s[pos] != 'e') return false;
    size_t end = pos + 1;
    while (end < s.size() && isdigit(static_cast<unsigned char>(s[end]))) end++;
    args.push_back(std::stoi(s.substr(pos + 1, end - pos - 1)) - 1);
    pos = end;
    if (pos < s.size() && s[pos] == ',') pos++;
  }
  return pos < s.size() && s[pos] == ')';
}

}  // namespace

FiniteModel parse_model(const std::string& text, const Signature& sig) {
  FiniteModel m;
  m.sizes.assign(sig.num_sorts(), 1);
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> body;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("sort ", 0) == 0) {
      std::istringstream ls(line);
      std::string kw, name, eq, tok;
      ls >> kw >> name >> eq;
      auto s = sig.find_sort(name);
      if (!s) throw InternalError("parse_model: unknown sort " + name);
      int count = 0;
      while (ls >> tok)
        if (tok[0] == 'e') count++;
      m.sizes[*s] = count;
    } else {
      body.push_back(line);
    }
  }
  m.functions.resize(sig.num_functions());
  m.predicates.resize(sig.num_predicates());
  for (int f = 0; f < sig.num_functions(); f++) {
    const FuncSymbol& sym = sig.function(f);
    if (sym.origin == SymbolOrigin::Definition ||
        sym.origin == SymbolOrigin::Split)
      continue;
    m.functions[f].assign(table_size(sym.arg_sorts, m.sizes), -1);
  }
  for (int p = 0; p < sig.num_predicates(); p++) {
    const PredSymbol& sym = sig.predicate(p);
    if (sym.origin == SymbolOrigin::Split) continue;
    m.predicates[p].assign(table_size(sym.arg_sorts, m.sizes), 0);
  }
  for (const std::string& entry : body) {
    size_t eq = entry.find(" = ");
    std::string head = eq == std::string::npos ? entry : entry.substr(0, eq);
    std::string name;
    std::vector<int> args;
    if (!parse_applied(head, name, args))
      throw InternalError("parse_model: bad line " + entry);
    if (eq != std::string::npos) {
      auto f = sig.find_function(name);
      if (!f) throw InternalError("parse_model: unknown function " + name);
      int value = std::stoi(entry.substr(eq + 4)) - 1;
      m.functions[*f][tuple_rank(sig.function(*f).arg_sorts, m.sizes, args)] =
          value;
    } else {
      auto p = sig.find_predicate(name);
      if (!p) throw InternalError("parse_model: unknown predicate " + name);
      m.predicates[*p][tuple_rank(sig.predicate(*p).arg_sorts, m.sizes, args)] =
          1;
    }
  }
  return m;
}

}  // namespace fmf
