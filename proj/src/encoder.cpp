#include "fmf/encoder.hpp"

#include <algorithm>

namespace fmf {

using sat::Lit;

Encoder::Encoder(const Problem& problem, const EncoderFacts& facts,
                 const EncoderOptions& opts)
    : problem_(problem), facts_(facts), opts_(opts) {
  const Signature& sig = problem.signature;
  clause_vars_.reserve(problem.clauses.size());
  for (const Clause& c : problem.clauses) {
    ClauseVars cv;
    for (auto [v, s] : clause_variables(c)) {
      cv.var_ids.push_back(v);
      cv.var_sorts.push_back(s);
      cv.var_classes.push_back(facts.partition.variable_class(sig, c, v));
    }
    clause_vars_.push_back(std::move(cv));
  }
}

int Encoder::width_of_class(int cls, const DomainSizeAssignment& sizes) const {
  if (cls < 0) throw InternalError("encoder: variable without a class");
  int w = sizes.size_of(facts_.partition.sort_of_class(cls));
  auto it = facts_.class_caps.find(cls);
  if (it != facts_.class_caps.end()) w = std::min(w, it->second);
  return w;
}

namespace {

// odometer over mixed radix digits; returns false after the last tuple
bool next_tuple(std::vector<int>& digits, const std::vector<int>& widths) {
  for (int i = static_cast<int>(digits.size()) - 1; i >= 0; i--) {
    if (++digits[i] < widths[i]) return true;
    digits[i] = 0;
  }
  return false;
}

std::uint64_t tuple_count(const std::vector<int>& widths) {
  std::uint64_t n = 1;
  for (int w : widths) n = sat_mul(n, static_cast<std::uint64_t>(w));
  return n;
}

}  // namespace

Encoding Encoder::build(const DomainSizeAssignment& sizes,
                        EncodingMode mode) const {
  const Signature& sig = problem_.signature;
  Encoding enc;
  enc.mode = mode;
  enc.sizes = sizes;

  // atom table over capped widths
  PrincipalAtomTable& at = enc.atoms;
  int next_var = 1;
  at.func_base.resize(sig.num_functions());
  at.func_widths.resize(sig.num_functions());
  for (int f = 0; f < sig.num_functions(); f++) {
    std::vector<int> w;
    for (int i = 0; i < sig.function(f).arity(); i++)
      w.push_back(width_of_class(facts_.partition.func_arg_class(f, i), sizes));
    w.push_back(width_of_class(facts_.partition.func_ret_class(f), sizes));
    std::uint64_t count = tuple_count(w);
    if (count > (UINT64_C(1) << 31) ||
        static_cast<std::uint64_t>(next_var) + count > (UINT64_C(1) << 31))
      throw ResourceLimitError("encoder: variable space overflow");
    at.func_base[f] = next_var;
    at.func_widths[f] = std::move(w);
    next_var += static_cast<int>(count);
  }
  at.pred_base.resize(sig.num_predicates());
  at.pred_widths.resize(sig.num_predicates());
  for (int p = 0; p < sig.num_predicates(); p++) {
    std::vector<int> w;
    for (int i = 0; i < sig.predicate(p).arity(); i++)
      w.push_back(width_of_class(facts_.partition.pred_arg_class(p, i), sizes));
    std::uint64_t count = tuple_count(w);
    if (count > (UINT64_C(1) << 31) ||
        static_cast<std::uint64_t>(next_var) + count > (UINT64_C(1) << 31))
      throw ResourceLimitError("encoder: variable space overflow");
    at.pred_base[p] = next_var;
    at.pred_widths[p] = std::move(w);
    next_var += static_cast<int>(count);
  }
  at.num_atom_vars = next_var - 1;

  // marking / bound variables
  MarkingVars& mk = enc.marking;
  mk.larger.assign(sig.num_sorts(), 0);
  mk.smaller.assign(sig.num_sorts(), 0);
  mk.bound.assign(sig.num_sorts(), {});
  if (mode == EncodingMode::Pointwise) {
    for (SortId s = 0; s < sig.num_sorts(); s++) {
      mk.larger[s] = next_var++;
      mk.smaller[s] = next_var++;
    }
    for (SortId s = 0; s < sig.num_sorts(); s++) {
      enc.assumptions.push_back(Lit::neg(mk.larger[s]));
      enc.assumptions.push_back(Lit::neg(mk.smaller[s]));
    }
  } else if (mode == EncodingMode::Contour) {
    for (SortId s = 0; s < sig.num_sorts(); s++) {
      int n = sizes.size_of(s);
      mk.bound[s].assign(n, 0);
      if (facts_.sort_monotonic[s]) {
        mk.bound[s][n - 1] = next_var++;
      } else {
        for (int i = 0; i < n; i++) mk.bound[s][i] = next_var++;
      }
    }
    for (SortId s = 0; s < sig.num_sorts(); s++)
      enc.assumptions.push_back(Lit::neg(mk.bound[s][sizes.size_of(s) - 1]));
  }
  enc.num_vars = next_var - 1;

  auto emit = [&](std::vector<Lit> clause, std::uint64_t& category) {
    category++;
    if (enc.stats.total() > opts_.clause_cap)
      throw ResourceLimitError("encoder: clause cap exceeded");
    enc.clauses.push_back(std::move(clause));
  };

  // DC-instances
  for (size_t ci = 0; ci < problem_.clauses.size(); ci++) {
    const Clause& c = problem_.clauses[ci];
    const ClauseVars& cv = clause_vars_[ci];
    int nv = static_cast<int>(cv.var_ids.size());
    std::vector<int> widths(nv);
    std::map<int, int> var_slot;
    for (int i = 0; i < nv; i++) {
      widths[i] = width_of_class(cv.var_classes[i], sizes);
      var_slot[cv.var_ids[i]] = i;
    }
    std::vector<int> digits(nv, 0);
    bool more = true;
    if (nv == 0) digits.clear();
    while (more) {
      std::vector<Lit> lits;
      bool tautology = false;
      for (const Literal& l : c.literals) {
        if (!l.is_equality()) {
          std::vector<int> args;
          for (const Term& t : l.args) args.push_back(digits[var_slot[t.var]]);
          lits.push_back(
              Lit::make(at.pred_atom(l.pred, args), l.positive));
          continue;
        }
        const Term& a = l.lhs();
        const Term& b = l.rhs();
        if (a.is_var() && b.is_var()) {
          int da = digits[var_slot[a.var]];
          int db = digits[var_slot[b.var]];
          // d = d is a tautology; d1 = d2 with distinct constants is deleted
          if (l.positive) {
            if (da == db) tautology = true;
          } else {
            if (da != db) tautology = true;
            // d != d is false, literal dropped
          }
          continue;
        }
        if (a.is_app() && b.is_app())
          throw InternalError("encoder: clause is not flat");
        const Term& app = a.is_app() ? a : b;
        const Term& var = a.is_app() ? b : a;
        std::vector<int> args;
        for (const Term& t : app.args) args.push_back(digits[var_slot[t.var]]);
        lits.push_back(Lit::make(
            at.func_atom(app.func, args, digits[var_slot[var.var]]),
            l.positive));
      }
      if (!tautology) {
        if (mode == EncodingMode::Pointwise) {
          std::vector<SortId> seen;
          for (int i = 0; i < nv; i++) {
            SortId s = cv.var_sorts[i];
            if (facts_.sort_monotonic[s]) continue;
            if (std::find(seen.begin(), seen.end(), s) == seen.end()) {
              seen.push_back(s);
              lits.push_back(Lit::pos(mk.smaller[s]));
            }
          }
        } else if (mode == EncodingMode::Contour) {
          std::map<SortId, int> s_max;
          for (int i = 0; i < nv; i++) {
            SortId s = cv.var_sorts[i];
            if (facts_.sort_monotonic[s]) continue;
            auto [it, fresh] = s_max.emplace(s, digits[i]);
            if (!fresh) it->second = std::max(it->second, digits[i]);
          }
          for (auto [s, dmax] : s_max)
            if (dmax >= 1)  // largest index used is dmax+1, 1-based
              lits.push_back(Lit::neg(mk.bound[s][dmax - 1]));
        }
        emit(std::move(lits), enc.stats.instances);
      }
      more = nv > 0 && next_tuple(digits, widths);
    }
  }

  // functionality and totality definitions per principal term
  for (int f = 0; f < sig.num_functions(); f++) {
    const std::vector<int>& w = at.func_widths[f];
    int arity = sig.function(f).arity();
    int ret_w = w.back();
    SortId ret_sort = sig.function(f).ret_sort;
    int ret_cls = facts_.partition.func_ret_class(f);
    bool capped = facts_.class_caps.count(ret_cls) &&
                  facts_.class_caps.at(ret_cls) <= sizes.size_of(ret_sort);
    std::vector<int> arg_w(w.begin(), w.end() - 1);
    std::vector<int> args(arity, 0);
    bool more = true;
    while (more) {
      for (int d1 = 0; d1 < ret_w; d1++)
        for (int d2 = d1 + 1; d2 < ret_w; d2++)
          emit({Lit::neg(at.func_atom(f, args, d1)),
                Lit::neg(at.func_atom(f, args, d2))},
               enc.stats.functionality);

      if (mode == EncodingMode::Contour) {
        int lo = facts_.sort_monotonic[ret_sort] ? ret_w : 1;
        for (int i = lo; i <= ret_w; i++) {
          std::vector<Lit> tot;
          for (int d = 0; d < i; d++)
            tot.push_back(Lit::pos(at.func_atom(f, args, d)));
          // the top level of a capped term needs no escape guard: growing
          // the sort never widens this term's range
          if (!(capped && i == ret_w)) tot.push_back(Lit::pos(mk.bound[ret_sort][i - 1]));
          emit(std::move(tot), enc.stats.totality);
        }
      } else {
        std::vector<Lit> tot;
        for (int d = 0; d < ret_w; d++)
          tot.push_back(Lit::pos(at.func_atom(f, args, d)));
        if (mode == EncodingMode::Pointwise && !capped)
          tot.push_back(Lit::pos(mk.larger[ret_sort]));
        emit(std::move(tot), enc.stats.totality);
      }
      more = arity > 0 && next_tuple(args, arg_w);
    }
  }

  // contour: a still-occurring parent of an expanded subsort must reach the
  // subsort's size; force its low bound levels true
  if (mode == EncodingMode::Contour) {
    for (auto [sub, parent] : facts_.expansion_parents) {
      int sub_w = sizes.size_of(sub);
      for (int cls : facts_.partition.classes_of_sort(sub)) {
        auto it = facts_.class_caps.find(cls);
        if (it != facts_.class_caps.end()) sub_w = std::min(sub_w, it->second);
      }
      if (sizes.size_of(parent) < sub_w)
        throw InternalError("encoder: parent bound fell behind its subsort");
      for (int i = 1; i < sub_w; i++)
        emit({Lit::pos(mk.bound[parent][i - 1])}, enc.stats.totality);
    }
  }

  // symmetry breaking over the ordered constants of each class
  if (opts_.symmetry) {
    for (int cls = 0; cls < facts_.partition.num_classes(); cls++) {
      std::vector<int> constants;
      for (int f = 0; f < sig.num_functions(); f++)
        if (sig.function(f).is_constant() &&
            facts_.partition.func_ret_class(f) == cls)
          constants.push_back(f);
      if (constants.empty()) continue;
      int w = width_of_class(cls, sizes);
      int l = static_cast<int>(constants.size());
      const std::vector<int> no_args;
      // a_i = c_1 \/ ... \/ a_i = c_i
      for (int i = 1; i <= std::min(l, w); i++) {
        std::vector<Lit> range;
        for (int d = 0; d < i; d++)
          range.push_back(Lit::pos(at.func_atom(constants[i - 1], no_args, d)));
        emit(std::move(range), enc.stats.symmetry);
      }
      // a_i != c_m \/ a_1 = c_{m-1} \/ ... \/ a_{i-1} = c_{m-1}
      for (int i = 2; i <= l; i++) {
        for (int m = 2; m <= w; m++) {
          std::vector<Lit> canon;
          canon.push_back(
              Lit::neg(at.func_atom(constants[i - 1], no_args, m - 1)));
          for (int j = 1; j < i; j++)
            canon.push_back(
                Lit::pos(at.func_atom(constants[j - 1], no_args, m - 2)));
          emit(std::move(canon), enc.stats.symmetry);
        }
      }
    }
  }

  return enc;
}

std::uint64_t Encoder::estimate_size(const DomainSizeAssignment& sizes) const {
  const Signature& sig = problem_.signature;
  std::uint64_t total = 0;
  for (size_t ci = 0; ci < problem_.clauses.size(); ci++) {
    const ClauseVars& cv = clause_vars_[ci];
    std::uint64_t n = 1;
    for (int cls : cv.var_classes)
      n = sat_mul(n, static_cast<std::uint64_t>(width_of_class(cls, sizes)));
    total = sat_add(total, n);
  }
  for (int f = 0; f < sig.num_functions(); f++) {
    std::uint64_t tuples = 1;
    for (int i = 0; i < sig.function(f).arity(); i++)
      tuples = sat_mul(tuples, static_cast<std::uint64_t>(width_of_class(
                                   facts_.partition.func_arg_class(f, i), sizes)));
    std::uint64_t ret_w = static_cast<std::uint64_t>(
        width_of_class(facts_.partition.func_ret_class(f), sizes));
    // one totality clause and ret_w-choose-2 functionality clauses per tuple
    total = sat_add(total, tuples);
    total = sat_add(total, sat_mul(tuples, ret_w * (ret_w - 1) / 2));
  }
  if (opts_.symmetry) {
    for (int cls = 0; cls < facts_.partition.num_classes(); cls++) {
      std::uint64_t l = 0;
      for (int f = 0; f < sig.num_functions(); f++)
        if (sig.function(f).is_constant() &&
            facts_.partition.func_ret_class(f) == cls)
          l++;
      if (l == 0) continue;
      std::uint64_t w = static_cast<std::uint64_t>(width_of_class(cls, sizes));
      total = sat_add(total, std::min(l, w));
      total = sat_add(total, sat_mul(l - 1, w - 1));
    }
  }
  for (int s = 0; s < sig.num_sorts(); s++)
    total = sat_add(total, static_cast<std::uint64_t>(sizes.size_of(s)));
  return total;
}

std::vector<std::string> Encoding::atom_comments(const Signature& sig) const {
  std::vector<std::string> out;
  for (int f = 0; f < static_cast<int>(atoms.func_base.size()); f++) {
    const std::vector<int>& w = atoms.func_widths[f];
    int arity = static_cast<int>(w.size()) - 1;
    std::vector<int> args(arity, 0);
    bool more = true;
    std::vector<int> arg_w(w.begin(), w.end() - 1);
    while (more) {
      for (int d = 0; d < w.back(); d++) {
        std::string name = sig.function(f).name;
        if (arity > 0) {
          name += "(";
          for (int i = 0; i < arity; i++)
            name += (i ? ",c" : "c") + std::to_string(args[i] + 1);
          name += ")";
        }
        out.push_back(std::to_string(atoms.func_atom(f, args, d)) + " = " +
                      name + "=c" + std::to_string(d + 1));
      }
      more = arity > 0 && next_tuple(args, arg_w);
    }
  }
  for (int p = 0; p < static_cast<int>(atoms.pred_base.size()); p++) {
    const std::vector<int>& w = atoms.pred_widths[p];
    int arity = static_cast<int>(w.size());
    std::vector<int> args(arity, 0);
    bool more = true;
    while (more) {
      std::string name = sig.predicate(p).name;
      if (arity > 0) {
        name += "(";
        for (int i = 0; i < arity; i++)
          name += (i ? ",c" : "c") + std::to_string(args[i] + 1);
        name += ")";
      }
      out.push_back(std::to_string(atoms.pred_atom(p, args)) + " = " + name);
      more = arity > 0 && next_tuple(args, w);
    }
  }
  for (SortId s = 0; s < static_cast<SortId>(marking.larger.size()); s++) {
    if (marking.larger[s])
      out.push_back(std::to_string(marking.larger[s]) + " = |" +
                    sig.sort(s).name + "|>n");
    if (marking.smaller[s])
      out.push_back(std::to_string(marking.smaller[s]) + " = |" +
                    sig.sort(s).name + "|<n");
    for (size_t i = 0; i < marking.bound[s].size(); i++)
      if (marking.bound[s][i])
        out.push_back(std::to_string(marking.bound[s][i]) + " = bound_" +
                      sig.sort(s).name + "(" + std::to_string(i + 1) + ")");
  }
  return out;
}

}  // namespace fmf
