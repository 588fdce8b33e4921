#include "fmf/analysis.hpp"

#include <algorithm>
#include <set>

namespace fmf {

bool ConstraintAtom::eval(const DomainSizeAssignment& n) const {
  int lhs = n.size_of(sort_a);
  int rhs = kind == Kind::SizeCmp ? bound : n.size_of(sort_b);
  switch (rel) {
    case Rel::Lt: return lhs < rhs;
    case Rel::Le: return lhs <= rhs;
    case Rel::Gt: return lhs > rhs;
    case Rel::Ge: return lhs >= rhs;
  }
  return false;
}

bool ConstraintAtom::non_increasing_in(SortId sort) const {
  if (kind == Kind::SizeCmp) {
    if (sort_a != sort) return true;  // constant along this axis
    return rel == Rel::Lt || rel == Rel::Le;
  }
  // |a| rel |b| with rel in {<,<=} grows harder as a grows, easier as b grows
  if (sort_b == sort) return false;
  return true;
}

bool ConstraintAtom::non_increasing_everywhere() const {
  return kind == Kind::SizeCmp && (rel == Rel::Lt || rel == Rel::Le);
}

std::string ConstraintAtom::to_string(const Signature& sig) const {
  std::string r = rel == Rel::Lt ? "<" : rel == Rel::Le ? "<=" : rel == Rel::Gt ? ">" : ">=";
  std::string lhs = "|" + sig.sort(sort_a).name + "|";
  if (kind == Kind::SizeCmp) return lhs + r + std::to_string(bound);
  return lhs + r + "|" + sig.sort(sort_b).name + "|";
}

bool ConstraintAtom::operator==(const ConstraintAtom& o) const {
  return kind == o.kind && sort_a == o.sort_a && rel == o.rel &&
         bound == o.bound && sort_b == o.sort_b;
}

bool Constraint::satisfied_by(const DomainSizeAssignment& n) const {
  for (const ConstraintAtom& a : disjuncts)
    if (a.eval(n)) return true;
  return false;
}

std::string Constraint::to_string(const Signature& sig) const {
  std::string s = "(";
  for (size_t i = 0; i < disjuncts.size(); i++) {
    if (i) s += " \\/ ";
    s += disjuncts[i].to_string(sig);
  }
  return s + ")";
}

bool Constraint::operator==(const Constraint& o) const {
  return disjuncts == o.disjuncts;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; i++) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

SubsortPartition SubsortPartition::build(const Problem& flat) {
  const Signature& sig = flat.signature;
  SubsortPartition p;
  int offset = 0;
  p.func_base_.resize(sig.num_functions());
  p.func_arity_.resize(sig.num_functions());
  for (int f = 0; f < sig.num_functions(); f++) {
    p.func_base_[f] = offset;
    p.func_arity_[f] = sig.function(f).arity();
    offset += sig.function(f).arity() + 1;
  }
  p.pred_base_.resize(sig.num_predicates());
  for (int q = 0; q < sig.num_predicates(); q++) {
    p.pred_base_[q] = offset;
    offset += sig.predicate(q).arity();
  }
  p.anchor_base_ = offset;
  int total = offset + sig.num_sorts();

  UnionFind uf(total);
  std::vector<bool> anchor_used(sig.num_sorts(), false);

  for (const Clause& c : flat.clauses) {
    std::map<int, std::vector<int>> var_positions;
    std::map<int, SortId> var_sorts;
    std::vector<std::pair<int, int>> var_eqs;
    auto note = [&](const Term& v, int pos) {
      var_positions[v.var].push_back(pos);
      var_sorts[v.var] = v.var_sort;
    };
    auto handle_app_side = [&](const Term& t) {
      for (int i = 0; i < static_cast<int>(t.args.size()); i++)
        if (t.args[i].is_var()) note(t.args[i], p.func_base_[t.func] + i);
      return p.func_base_[t.func] + static_cast<int>(t.args.size());  // return pos
    };
    for (const Literal& l : c.literals) {
      if (!l.is_equality()) {
        for (int i = 0; i < static_cast<int>(l.args.size()); i++)
          if (l.args[i].is_var()) note(l.args[i], p.pred_base_[l.pred] + i);
        continue;
      }
      const Term& a = l.lhs();
      const Term& b = l.rhs();
      if (a.is_var() && b.is_var()) {
        var_sorts[a.var] = a.var_sort;
        var_sorts[b.var] = b.var_sort;
        var_positions[a.var];
        var_positions[b.var];
        var_eqs.emplace_back(a.var, b.var);
      } else if (a.is_app() && b.is_app()) {
        int ra = handle_app_side(a);
        int rb = handle_app_side(b);
        uf.unite(ra, rb);
      } else {
        const Term& app = a.is_app() ? a : b;
        const Term& var = a.is_app() ? b : a;
        int ret = handle_app_side(app);
        note(var, ret);
      }
    }
    // variables whose only occurrences are variable equalities borrow a
    // partner's position when one exists; only truly isolated variables
    // fall back to the sort anchor
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto [x, y] : var_eqs) {
        if (!var_positions[x].empty() && var_positions[y].empty()) {
          var_positions[y].push_back(var_positions[x][0]);
          changed = true;
        }
        if (!var_positions[y].empty() && var_positions[x].empty()) {
          var_positions[x].push_back(var_positions[y][0]);
          changed = true;
        }
      }
    }
    std::map<int, int> var_repr;
    for (auto& [v, positions] : var_positions) {
      if (positions.empty()) {
        int anchor = p.anchor_base_ + var_sorts[v];
        anchor_used[var_sorts[v]] = true;
        positions.push_back(anchor);
      }
      for (size_t i = 1; i < positions.size(); i++)
        uf.unite(positions[0], positions[i]);
      var_repr[v] = positions[0];
    }
    for (auto [x, y] : var_eqs) uf.unite(var_repr[x], var_repr[y]);
  }

  // dense class ids in first-position order; unused anchors get no class
  p.class_of_.assign(total, -1);
  std::map<int, int> root_class;
  auto sort_of_position = [&](int pos) -> SortId {
    for (int f = 0; f < sig.num_functions(); f++) {
      int base = p.func_base_[f];
      int arity = p.func_arity_[f];
      if (pos >= base && pos <= base + arity)
        return pos == base + arity ? sig.function(f).ret_sort
                                   : sig.function(f).arg_sorts[pos - base];
    }
    for (int q = 0; q < sig.num_predicates(); q++) {
      int base = p.pred_base_[q];
      int arity = sig.predicate(q).arity();
      if (pos >= base && pos < base + arity)
        return sig.predicate(q).arg_sorts[pos - base];
    }
    return pos - p.anchor_base_;
  };
  p.by_sort_.assign(sig.num_sorts(), {});
  for (int pos = 0; pos < total; pos++) {
    if (pos >= p.anchor_base_ && !anchor_used[pos - p.anchor_base_]) continue;
    int root = uf.find(pos);
    auto it = root_class.find(root);
    if (it == root_class.end()) {
      int cls = static_cast<int>(p.class_sort_.size());
      SortId s = sort_of_position(pos);
      p.class_sort_.push_back(s);
      p.by_sort_[s].push_back(cls);
      it = root_class.emplace(root, cls).first;
    }
    p.class_of_[pos] = it->second;
  }
  return p;
}

int SubsortPartition::variable_class(const Signature&, const Clause& clause,
                                     int var) const {
  for (const Literal& l : clause.literals) {
    if (!l.is_equality()) {
      for (int i = 0; i < static_cast<int>(l.args.size()); i++)
        if (l.args[i].is_var() && l.args[i].var == var)
          return class_of_[pred_base_[l.pred] + i];
      continue;
    }
    for (const Term& side : l.args) {
      if (side.is_app()) {
        for (int i = 0; i < static_cast<int>(side.args.size()); i++)
          if (side.args[i].is_var() && side.args[i].var == var)
            return class_of_[func_base_[side.func] + i];
      }
    }
    // a variable side of an equality shares the other side's class
    const Term& a = l.lhs();
    const Term& b = l.rhs();
    if (a.is_var() && a.var == var && b.is_app())
      return class_of_[func_base_[b.func] + static_cast<int>(b.args.size())];
    if (b.is_var() && b.var == var && a.is_app())
      return class_of_[func_base_[a.func] + static_cast<int>(a.args.size())];
  }
  // only occurrences are variable equalities; chase partners until one has
  // a symbol position, otherwise use the sort anchor
  std::set<int> group = {var};
  SortId sort = -1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const Literal& l : clause.literals) {
      if (!l.is_equality() || !l.lhs().is_var() || !l.rhs().is_var()) continue;
      int a = l.lhs().var, b = l.rhs().var;
      if (group.count(a) && !group.count(b)) {
        group.insert(b);
        grew = true;
      }
      if (group.count(b) && !group.count(a)) {
        group.insert(a);
        grew = true;
      }
      if (group.count(a)) sort = l.lhs().var_sort;
    }
  }
  for (int partner : group) {
    if (partner == var) continue;
    for (const Literal& l : clause.literals) {
      if (l.is_equality()) continue;
      for (int i = 0; i < static_cast<int>(l.args.size()); i++)
        if (l.args[i].is_var() && l.args[i].var == partner)
          return class_of_[pred_base_[l.pred] + i];
    }
    for (const Literal& l : clause.literals) {
      if (!l.is_equality()) continue;
      for (const Term& side : l.args)
        if (side.is_app())
          for (int i = 0; i < static_cast<int>(side.args.size()); i++)
            if (side.args[i].is_var() && side.args[i].var == partner)
              return class_of_[func_base_[side.func] + i];
      if (l.lhs().is_var() && l.lhs().var == partner && l.rhs().is_app())
        return class_of_[func_base_[l.rhs().func] +
                         static_cast<int>(l.rhs().args.size())];
      if (l.rhs().is_var() && l.rhs().var == partner && l.lhs().is_app())
        return class_of_[func_base_[l.lhs().func] +
                         static_cast<int>(l.lhs().args.size())];
    }
  }
  if (sort >= 0) return class_of_[anchor_base_ + sort];
  return -1;
}

std::vector<bool> detect_monotonic_classes(const Problem& flat,
                                           const SubsortPartition& partition) {
  std::vector<bool> mono(partition.num_classes(), true);
  const Signature& sig = flat.signature;
  for (const Clause& c : flat.clauses) {
    for (const Literal& l : c.literals) {
      if (!l.is_equality() || !l.positive) continue;
      const Term& a = l.lhs();
      const Term& b = l.rhs();
      if (a.is_var() && b.is_var()) {
        int cls = partition.variable_class(sig, c, a.var);
        if (cls >= 0) mono[cls] = false;
        continue;
      }
      if (a.is_app() && b.is_app()) {
        mono[partition.func_ret_class(a.func)] = false;
        mono[partition.func_ret_class(b.func)] = false;
        continue;
      }
      const Term& var = a.is_var() ? a : b;
      // f(xs)=y does not bound y's class when y is pinned by a negative
      // literal t != y with t non-variable: the positive equality is then a
      // flattening artifact of a term occurrence, not a real equality
      bool guarded = false;
      for (const Literal& g : c.literals) {
        if (!g.is_equality() || g.positive) continue;
        const Term& ga = g.lhs();
        const Term& gb = g.rhs();
        if (ga.is_app() && gb.is_var() && gb.var == var.var) guarded = true;
        if (gb.is_app() && ga.is_var() && ga.var == var.var) guarded = true;
      }
      if (!guarded) {
        int cls = partition.variable_class(sig, c, var.var);
        if (cls >= 0) mono[cls] = false;
      }
    }
  }
  return mono;
}

std::vector<bool> detect_monotonic(const Problem& flat,
                                   const SubsortPartition& partition,
                                   const std::vector<bool>& class_monotonic) {
  std::vector<bool> mono(flat.signature.num_sorts(), true);
  for (int cls = 0; cls < partition.num_classes(); cls++)
    if (!class_monotonic[cls]) mono[partition.sort_of_class(cls)] = false;
  return mono;
}

namespace {

bool is_ground_term(const Term& t) {
  if (t.is_var()) return false;
  for (const Term& a : t.args)
    if (!is_ground_term(a)) return false;
  return true;
}

bool unary_app_of_var(const Term& t, int& func, int& var) {
  if (!t.is_app() || t.args.size() != 1 || !t.args[0].is_var()) return false;
  func = t.func;
  var = t.args[0].var;
  return true;
}

}  // namespace

std::vector<FunctionFacts> detect_function_facts(const Problem& input) {
  const Signature& sig = input.signature;
  std::vector<FunctionFacts> facts(sig.num_functions());
  for (int f = 0; f < sig.num_functions(); f++) facts[f].func = f;

  // ground disequations feeding the non-injectivity witness
  std::vector<std::pair<Term, Term>> forced_distinct;
  for (const Clause& c : input.clauses) {
    if (c.literals.size() == 1) {
      const Literal& l = c.literals[0];
      if (l.is_equality() && !l.positive && is_ground_term(l.lhs()) &&
          is_ground_term(l.rhs()))
        forced_distinct.emplace_back(l.lhs(), l.rhs());
    }
  }
  auto distinct = [&](const Term& a, const Term& b) {
    for (auto& [x, y] : forced_distinct)
      if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
  };

  for (const Clause& c : input.clauses) {
    const auto& lits = c.literals;
    // injectivity, direct: f(x) != f(y) | x = y
    if (lits.size() == 2) {
      for (int i = 0; i < 2; i++) {
        const Literal& neq = lits[i];
        const Literal& eq = lits[1 - i];
        if (!neq.is_equality() || neq.positive) continue;
        if (!eq.is_equality() || !eq.positive) continue;
        if (!eq.lhs().is_var() || !eq.rhs().is_var()) continue;
        int f1, v1, f2, v2;
        if (!unary_app_of_var(neq.lhs(), f1, v1) ||
            !unary_app_of_var(neq.rhs(), f2, v2))
          continue;
        if (f1 != f2 || v1 == v2) continue;
        std::set<int> eq_vars = {eq.lhs().var, eq.rhs().var};
        if (eq_vars == std::set<int>{v1, v2}) facts[f1].injective = true;
      }
    }
    // injectivity, flattened: f(x) != z | f(y) != z | x = y
    if (lits.size() == 3) {
      for (int i = 0; i < 3; i++) {
        const Literal& eq = lits[i];
        if (!eq.is_equality() || !eq.positive) continue;
        if (!eq.lhs().is_var() || !eq.rhs().is_var()) continue;
        std::vector<const Literal*> neqs;
        for (int j = 0; j < 3; j++)
          if (j != i) neqs.push_back(&lits[j]);
        int f1 = -1, v1 = -1, f2 = -1, v2 = -1;
        int z1 = -1, z2 = -1;
        auto match_neq = [](const Literal& l, int& f, int& v, int& z) {
          if (!l.is_equality() || l.positive) return false;
          const Term *app = nullptr, *var = nullptr;
          if (l.lhs().is_app() && l.rhs().is_var()) {
            app = &l.lhs();
            var = &l.rhs();
          } else if (l.rhs().is_app() && l.lhs().is_var()) {
            app = &l.rhs();
            var = &l.lhs();
          } else {
            return false;
          }
          int av;
          if (!unary_app_of_var(*app, f, av)) return false;
          v = av;
          z = var->var;
          return true;
        };
        if (!match_neq(*neqs[0], f1, v1, z1) || !match_neq(*neqs[1], f2, v2, z2))
          continue;
        if (f1 != f2 || z1 != z2 || v1 == v2) continue;
        std::set<int> eq_vars = {eq.lhs().var, eq.rhs().var};
        if (eq_vars == std::set<int>{v1, v2}) facts[f1].injective = true;
      }
    }
    // surjectivity, direct: f(g(y)) = y
    if (lits.size() == 1) {
      const Literal& l = lits[0];
      if (l.is_equality() && l.positive) {
        for (int i = 0; i < 2; i++) {
          const Term& app = l.args[i];
          const Term& var = l.args[1 - i];
          if (!var.is_var() || !app.is_app() || app.args.size() != 1) continue;
          const Term& inner = app.args[0];
          if (inner.is_app() && inner.args.size() == 1 &&
              inner.args[0].is_var() && inner.args[0].var == var.var)
            facts[app.func].surjective = true;
        }
      }
      // non-surjectivity, direct: f(x) != t with t ground
      if (l.is_equality() && !l.positive) {
        for (int i = 0; i < 2; i++) {
          int f, v;
          if (unary_app_of_var(l.args[i], f, v) && is_ground_term(l.args[1 - i]))
            facts[f].non_surjective = true;
        }
        // non-injectivity witness: f(a) = f(b) with a, b forced distinct is
        // positive; handled below
      }
      if (l.is_equality() && l.positive && l.lhs().is_app() &&
          l.rhs().is_app() && l.lhs().func == l.rhs().func &&
          l.lhs().args.size() == 1 && is_ground_term(l.lhs()) &&
          is_ground_term(l.rhs()) && distinct(l.lhs().args[0], l.rhs().args[0]))
        facts[l.lhs().func].non_injective = true;
    }
    // surjectivity, flattened: g(y) != z | f(z) = y
    if (lits.size() == 2) {
      for (int i = 0; i < 2; i++) {
        const Literal& neq = lits[i];
        const Literal& eq = lits[1 - i];
        if (!neq.is_equality() || neq.positive) continue;
        if (!eq.is_equality() || !eq.positive) continue;
        int g = -1, gy = -1, gz = -1, f = -1, fz = -1, fy = -1;
        auto split_app_var = [](const Literal& l, int& func, int& arg_var,
                                int& side_var) {
          const Term *app = nullptr, *var = nullptr;
          if (l.lhs().is_app() && l.rhs().is_var()) {
            app = &l.lhs();
            var = &l.rhs();
          } else if (l.rhs().is_app() && l.lhs().is_var()) {
            app = &l.rhs();
            var = &l.lhs();
          } else {
            return false;
          }
          int v;
          if (!unary_app_of_var(*app, func, v)) return false;
          arg_var = v;
          side_var = var->var;
          return true;
        };
        if (!split_app_var(neq, g, gy, gz) || !split_app_var(eq, f, fz, fy))
          continue;
        if (fz == gz && fy == gy && gy != gz) facts[f].surjective = true;
      }
      // non-surjectivity, flattened: f(x) != y | t != y with t ground
      const Literal &l0 = lits[0], &l1 = lits[1];
      if (l0.is_equality() && !l0.positive && l1.is_equality() && !l1.positive) {
        for (int i = 0; i < 2; i++) {
          const Literal& fl = lits[i];
          const Literal& tl = lits[1 - i];
          int f, x, y = -1;
          const Term *app = nullptr, *var = nullptr;
          if (fl.lhs().is_app() && fl.rhs().is_var()) {
            app = &fl.lhs();
            var = &fl.rhs();
          } else if (fl.rhs().is_app() && fl.lhs().is_var()) {
            app = &fl.rhs();
            var = &fl.lhs();
          } else {
            continue;
          }
          if (!unary_app_of_var(*app, f, x)) continue;
          y = var->var;
          const Term *t = nullptr, *yv = nullptr;
          if (tl.lhs().is_var()) {
            yv = &tl.lhs();
            t = &tl.rhs();
          } else if (tl.rhs().is_var()) {
            yv = &tl.rhs();
            t = &tl.lhs();
          } else {
            continue;
          }
          if (yv->var == y && y != x && is_ground_term(*t))
            facts[f].non_surjective = true;
        }
      }
    }
  }
  return facts;
}

std::vector<Constraint> materialize_bounds(const std::vector<FunctionFacts>& facts,
                                           const Signature& sig) {
  std::vector<Constraint> out;
  for (const FunctionFacts& ff : facts) {
    const FuncSymbol& f = sig.function(ff.func);
    if (f.arity() != 1) continue;
    SortId dom = f.arg_sorts[0], cod = f.ret_sort;
    if (dom == cod) continue;
    if (ff.injective) {
      Rel r = ff.non_surjective ? Rel::Lt : Rel::Le;
      out.push_back({{ConstraintAtom::inter_sort(dom, r, cod)}});
    }
    if (ff.surjective) {
      Rel r = ff.non_injective ? Rel::Lt : Rel::Le;
      out.push_back({{ConstraintAtom::inter_sort(cod, r, dom)}});
    }
  }
  return out;
}

std::vector<Constraint> detect_bounds(const Problem& input) {
  return materialize_bounds(detect_function_facts(input), input.signature);
}

std::map<SortId, int> detect_input_caps(const Problem& input) {
  std::map<SortId, int> caps;
  auto note = [&](SortId s, int cap) {
    cap = std::max(cap, 1);
    auto it = caps.find(s);
    if (it == caps.end() || cap < it->second) caps[s] = cap;
  };
  for (const Clause& c : input.clauses) {
    if (c.literals.empty()) continue;
    // (a) all literals positive equalities between variables of one sort
    bool all_var_eq = true;
    std::set<int> vars;
    SortId sort = -1;
    for (const Literal& l : c.literals) {
      if (!l.is_equality() || !l.positive || !l.lhs().is_var() ||
          !l.rhs().is_var()) {
        all_var_eq = false;
        break;
      }
      vars.insert(l.lhs().var);
      vars.insert(l.rhs().var);
      if (sort == -1) sort = l.lhs().var_sort;
      if (l.lhs().var_sort != sort || l.rhs().var_sort != sort)
        all_var_eq = false;
    }
    if (all_var_eq && vars.size() >= 2) {
      note(sort, static_cast<int>(vars.size()) - 1);
      continue;
    }
    // (b) x = t1 | ... | x = tk with one variable and ground ti
    bool all_x_eq = true;
    int x = -1;
    SortId xs = -1;
    for (const Literal& l : c.literals) {
      if (!l.is_equality() || !l.positive) {
        all_x_eq = false;
        break;
      }
      const Term *var = nullptr, *t = nullptr;
      if (l.lhs().is_var() && is_ground_term(l.rhs())) {
        var = &l.lhs();
        t = &l.rhs();
      } else if (l.rhs().is_var() && is_ground_term(l.lhs())) {
        var = &l.rhs();
        t = &l.lhs();
      } else {
        all_x_eq = false;
        break;
      }
      (void)t;
      if (x == -1) {
        x = var->var;
        xs = var->var_sort;
      } else if (var->var != x) {
        all_x_eq = false;
        break;
      }
    }
    if (all_x_eq && x != -1)
      note(xs, static_cast<int>(c.literals.size()));
  }
  return caps;
}

MaxSizes detect_max_sizes(const Problem& flat, const SubsortPartition& partition,
                          const std::vector<bool>& class_monotonic,
                          const std::map<SortId, int>& input_caps) {
  MaxSizes out;
  out.sort_caps = input_caps;
  const Signature& sig = flat.signature;

  for (int cls = 0; cls < partition.num_classes(); cls++) {
    if (!class_monotonic[cls]) continue;
    int constants = 0;
    bool only_constants = true;
    for (int f = 0; f < sig.num_functions(); f++) {
      if (partition.func_ret_class(f) != cls) continue;
      if (sig.function(f).is_constant())
        constants++;
      else
        only_constants = false;
    }
    if (only_constants) out.class_caps[cls] = std::max(1, constants);
  }

  for (SortId s = 0; s < sig.num_sorts(); s++) {
    const auto& classes = partition.classes_of_sort(s);
    if (classes.empty()) continue;
    int cap = 0;
    bool all_capped = true;
    for (int cls : classes) {
      auto it = out.class_caps.find(cls);
      if (it == out.class_caps.end()) {
        all_capped = false;
        break;
      }
      cap = std::max(cap, it->second);
    }
    if (all_capped) {
      auto it = out.sort_caps.find(s);
      if (it == out.sort_caps.end() || cap < it->second) out.sort_caps[s] = cap;
    }
  }
  return out;
}

namespace {

void retype_clause_vars(Clause& clause, const std::map<int, SortId>& new_sorts) {
  struct Walker {
    const std::map<int, SortId>& m;
    void run(Term& t) const {
      if (t.is_var()) {
        auto it = m.find(t.var);
        if (it != m.end()) t.var_sort = it->second;
        return;
      }
      for (Term& a : t.args) run(a);
    }
  } w{new_sorts};
  for (Literal& l : clause.literals)
    for (Term& t : l.args) w.run(t);
}

}  // namespace

std::vector<Constraint> expand_subsorts(Problem& problem,
                                        const SubsortPartition& partition,
                                        const std::vector<bool>& class_monotonic,
                                        SortTransforms& transforms) {
  Signature& sig = problem.signature;
  int original_sorts = sig.num_sorts();
  std::map<int, SortId> class_to_sort;
  std::vector<Constraint> constraints;

  for (SortId s = 0; s < original_sorts; s++) {
    const auto& classes = partition.classes_of_sort(s);
    if (classes.size() < 2) continue;
    for (int cls : classes) {
      if (!class_monotonic[cls]) continue;
      SortId fresh = sig.add_sort(sig.fresh_name(sig.sort(s).name + "_c"));
      class_to_sort[cls] = fresh;
      transforms.expansions.push_back({fresh, s});
      constraints.push_back({{ConstraintAtom::inter_sort(fresh, Rel::Le, s)}});
    }
  }
  if (class_to_sort.empty()) return constraints;

  // clause variables first: variable_class reads the pre-expansion problem
  for (Clause& c : problem.clauses) {
    std::map<int, SortId> new_sorts;
    for (auto [v, s] : clause_variables(c)) {
      int cls = partition.variable_class(sig, c, v);
      auto it = class_to_sort.find(cls);
      if (it != class_to_sort.end()) new_sorts[v] = it->second;
    }
    if (!new_sorts.empty()) retype_clause_vars(c, new_sorts);
  }
  for (int f = 0; f < sig.num_functions(); f++) {
    FuncSymbol& sym = sig.function_mut(f);
    for (int i = 0; i < sym.arity(); i++) {
      auto it = class_to_sort.find(partition.func_arg_class(f, i));
      if (it != class_to_sort.end()) sym.arg_sorts[i] = it->second;
    }
    auto it = class_to_sort.find(partition.func_ret_class(f));
    if (it != class_to_sort.end()) sym.ret_sort = it->second;
  }
  for (int q = 0; q < sig.num_predicates(); q++) {
    PredSymbol& sym = sig.predicate_mut(q);
    for (int i = 0; i < sym.arity(); i++) {
      auto it = class_to_sort.find(partition.pred_arg_class(q, i));
      if (it != class_to_sort.end()) sym.arg_sorts[i] = it->second;
    }
  }
  return constraints;
}

void collapse_monotonic(Problem& problem, const std::vector<SortId>& sorts,
                        SortTransforms& transforms) {
  if (sorts.empty()) return;
  Signature& sig = problem.signature;
  SortId merged = sig.add_sort(sig.fresh_name("mono"));
  std::set<SortId> merge_set(sorts.begin(), sorts.end());
  for (int f = 0; f < sig.num_functions(); f++) {
    FuncSymbol& sym = sig.function_mut(f);
    for (SortId& s : sym.arg_sorts)
      if (merge_set.count(s)) s = merged;
    if (merge_set.count(sym.ret_sort)) sym.ret_sort = merged;
  }
  for (int q = 0; q < sig.num_predicates(); q++) {
    PredSymbol& sym = sig.predicate_mut(q);
    for (SortId& s : sym.arg_sorts)
      if (merge_set.count(s)) s = merged;
  }
  for (Clause& c : problem.clauses) {
    std::map<int, SortId> new_sorts;
    for (auto [v, s] : clause_variables(c))
      if (merge_set.count(s)) new_sorts[v] = merged;
    if (!new_sorts.empty()) retype_clause_vars(c, new_sorts);
  }
  transforms.collapse = SortTransforms::Collapse{sorts, merged};
}

SubsortPartition infer_subsorts(const Problem& flat) {
  return SubsortPartition::build(flat);
}

}  // namespace fmf
