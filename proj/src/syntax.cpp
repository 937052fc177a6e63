#include "chaseq/syntax.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <functional>

namespace chaseq {

namespace {

std::atomic<std::uint64_t> g_fresh_counter{0};

std::uint64_t parse_fresh_index(const std::string& name) {
  const std::string prefix = kFreshPrefix;
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return 0;
  std::uint64_t value = 0;
  const char* first = name.data() + prefix.size();
  const char* last = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value == 0) return 0;
  return value;
}

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_term(const Term& t) {
  return mix(std::hash<std::string>{}(t.name()), static_cast<std::size_t>(t.kind()));
}

std::size_t hash_atom(const Atom& a) {
  std::size_t h = std::hash<std::string>{}(a.predicate);
  for (const auto& t : a.args) h = mix(h, hash_term(t));
  return h;
}

}  // namespace

Term::Term(TermKind kind, std::string name) : kind_(kind), name_(std::move(name)) {
  if (name_.empty()) throw SyntaxError("term names must be nonempty");
  if (kind_ == TermKind::Variable) fresh_index_ = parse_fresh_index(name_);
}

Term Term::constant(std::string name) { return Term(TermKind::Constant, std::move(name)); }

Term Term::variable(std::string name) {
  Term t(TermKind::Variable, std::move(name));
  if (t.fresh_index_ != 0) reserve_fresh_index(t.fresh_index_);
  return t;
}

Term Term::fresh() {
  const std::uint64_t n = g_fresh_counter.fetch_add(1) + 1;
  return Term(TermKind::Variable, std::string(kFreshPrefix) + std::to_string(n));
}

void reserve_fresh_index(std::uint64_t index) {
  std::uint64_t current = g_fresh_counter.load();
  while (current < index && !g_fresh_counter.compare_exchange_weak(current, index)) {
  }
}

std::uint64_t peek_fresh_index() { return g_fresh_counter.load(); }

std::strong_ordering Term::operator<=>(const Term& other) const {
  if (kind_ != other.kind_) return kind_ <=> other.kind_;
  if (fresh_index_ != other.fresh_index_) {
    if (fresh_index_ == 0) return std::strong_ordering::less;
    if (other.fresh_index_ == 0) return std::strong_ordering::greater;
    return fresh_index_ <=> other.fresh_index_;
  }
  return name_ <=> other.name_;
}

bool Atom::is_ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_constant(); });
}

Atom top_atom(const Term& t) { return Atom(kTopPredicate, {t}); }

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(std::initializer_list<Atom> atoms) {
  for (const auto& a : atoms) insert(a);
}

bool Instance::insert(const Atom& atom) {
  if (!atoms_.insert(atom).second) return false;
  for (const auto& t : atom.args) ++term_counts_[t];
  return true;
}

bool Instance::erase(const Atom& atom) {
  if (atoms_.erase(atom) == 0) return false;
  for (const auto& t : atom.args) {
    auto it = term_counts_.find(t);
    if (--it->second == 0) term_counts_.erase(it);
  }
  return true;
}

std::pair<Instance::const_iterator, Instance::const_iterator> Instance::with_predicate(
    const std::string& predicate) const {
  // predicate + '\0' sorts after every atom of `predicate` and before the next predicate.
  return {atoms_.lower_bound(Atom(predicate, {})),
          atoms_.lower_bound(Atom(predicate + std::string(1, '\0'), {}))};
}

std::pair<Instance::const_iterator, Instance::const_iterator> Instance::with_first_argument(
    const std::string& predicate, const Term& first_arg) const {
  auto first = atoms_.lower_bound(Atom(predicate, {first_arg}));
  auto last = first;
  while (last != atoms_.end() && last->predicate == predicate && !last->args.empty() &&
         last->args[0] == first_arg) {
    ++last;
  }
  return {first, last};
}

TermSet Instance::terms() const {
  TermSet out;
  for (const auto& [t, n] : term_counts_) out.insert(out.end(), t);
  return out;
}

std::vector<Term> Instance::sorted_terms() const {
  std::vector<Term> out;
  out.reserve(term_counts_.size());
  for (const auto& [t, n] : term_counts_) out.push_back(t);
  return out;
}

bool Instance::is_ground() const {
  return std::all_of(term_counts_.begin(), term_counts_.end(),
                     [](const auto& kv) { return kv.first.is_constant(); });
}

bool Instance::includes(const Instance& other) const {
  return std::includes(atoms_.begin(), atoms_.end(), other.atoms_.begin(), other.atoms_.end());
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  FormulaKind kind;
  Atom atom;
  std::optional<Formula> first;
  std::optional<Formula> second;
  Term var;
  std::size_t size = 1;
  std::size_t hash = 0;
};

Formula Formula::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Atom;
  n->hash = mix(hash_atom(a), 1);
  n->atom = std::move(a);
  return Formula(std::move(n));
}

Formula Formula::negation(Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Not;
  n->size = body.size() + 1;
  n->hash = mix(body.hash(), 2);
  n->first = std::move(body);
  return Formula(std::move(n));
}

Formula Formula::conjunction(Formula left, Formula right) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::And;
  n->size = left.size() + right.size() + 1;
  n->hash = mix(mix(left.hash(), right.hash()), 3);
  n->first = std::move(left);
  n->second = std::move(right);
  return Formula(std::move(n));
}

Formula Formula::exists(Term var, Formula body) {
  if (!var.is_variable()) throw SyntaxError("quantified term must be a variable");
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Exists;
  n->size = body.size() + 1;
  n->hash = mix(mix(body.hash(), hash_term(var)), 4);
  n->first = std::move(body);
  n->var = std::move(var);
  return Formula(std::move(n));
}

FormulaKind Formula::kind() const { return node_->kind; }
const Atom& Formula::as_atom() const { return node_->atom; }
const Formula& Formula::body() const { return *node_->first; }
const Formula& Formula::left() const { return *node_->first; }
const Formula& Formula::right() const { return *node_->second; }
const Term& Formula::bound_variable() const { return node_->var; }
std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::hash() const { return node_->hash; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->hash != other.node_->hash || node_->size != other.node_->size) return false;
  return (*this <=> other) == 0;
}

std::strong_ordering Formula::operator<=>(const Formula& other) const {
  if (node_ == other.node_) return std::strong_ordering::equal;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.size != b.size) return a.size <=> b.size;
  if (a.kind != b.kind) return a.kind <=> b.kind;
  switch (a.kind) {
    case FormulaKind::Atom:
      return a.atom <=> b.atom;
    case FormulaKind::Not:
      return *a.first <=> *b.first;
    case FormulaKind::And:
      if (auto c = *a.first <=> *b.first; c != 0) return c;
      return *a.second <=> *b.second;
    case FormulaKind::Exists:
      if (auto c = a.var <=> b.var; c != 0) return c;
      return *a.first <=> *b.first;
  }
  return std::strong_ordering::equal;
}

Formula make_or(const Formula& a, const Formula& b) {
  return Formula::negation(
      Formula::conjunction(Formula::negation(a), Formula::negation(b)));
}

Formula make_implies(const Formula& a, const Formula& b) {
  return make_or(Formula::negation(a), b);
}

Formula make_forall(const Term& var, const Formula& body) {
  return Formula::negation(Formula::exists(var, Formula::negation(body)));
}

Formula conjunction_of(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::atom(top_atom(Term::truth_constant()));
  Formula acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
    acc = Formula::conjunction(*it, acc);
  }
  return acc;
}

Formula disjunction_of(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::negation(Formula::atom(top_atom(Term::truth_constant())));
  Formula acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = make_or(*it, acc);
  return acc;
}

Formula exists_all(const std::vector<Term>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::exists(*it, body);
  return body;
}

namespace {

void collect_free(const Formula& f, TermSet& bound, TermSet& out, bool with_constants) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      for (const auto& t : f.as_atom().args) {
        if (t.is_constant()) {
          if (with_constants) out.insert(t);
        } else if (!bound.count(t)) {
          out.insert(t);
        }
      }
      return;
    case FormulaKind::Not:
      collect_free(f.body(), bound, out, with_constants);
      return;
    case FormulaKind::And:
      collect_free(f.left(), bound, out, with_constants);
      collect_free(f.right(), bound, out, with_constants);
      return;
    case FormulaKind::Exists: {
      const bool inserted = bound.insert(f.bound_variable()).second;
      collect_free(f.body(), bound, out, with_constants);
      if (inserted) bound.erase(f.bound_variable());
      return;
    }
  }
}

void collect_all(const Formula& f, TermSet& out, bool variables) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      for (const auto& t : f.as_atom().args) {
        if (t.is_variable() == variables) out.insert(t);
      }
      return;
    case FormulaKind::Not:
      collect_all(f.body(), out, variables);
      return;
    case FormulaKind::And:
      collect_all(f.left(), out, variables);
      collect_all(f.right(), out, variables);
      return;
    case FormulaKind::Exists:
      if (variables) out.insert(f.bound_variable());
      collect_all(f.body(), out, variables);
      return;
  }
}

}  // namespace

TermSet free_vars(const Formula& f) {
  TermSet bound, out;
  collect_free(f, bound, out, false);
  return out;
}

TermSet terms_of(const Formula& f) {
  TermSet bound, out;
  collect_free(f, bound, out, true);
  return out;
}

TermSet all_variables(const Formula& f) {
  TermSet out;
  collect_all(f, out, true);
  return out;
}

TermSet constants_of(const Formula& f) {
  TermSet out;
  collect_all(f, out, false);
  return out;
}

Formula substitute(const Formula& f, const Term& t, const Term& x) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      const Atom& a = f.as_atom();
      if (std::find(a.args.begin(), a.args.end(), x) == a.args.end()) return f;
      Atom b = a;
      for (auto& arg : b.args) {
        if (arg == x) arg = t;
      }
      return Formula::atom(std::move(b));
    }
    case FormulaKind::Not:
      return Formula::negation(substitute(f.body(), t, x));
    case FormulaKind::And:
      return Formula::conjunction(substitute(f.left(), t, x), substitute(f.right(), t, x));
    case FormulaKind::Exists:
      if (f.bound_variable() == x) return f;
      return Formula::exists(f.bound_variable(), substitute(f.body(), t, x));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Rules, sequents, queries

namespace {

std::vector<Atom> dedup(std::vector<Atom> atoms) {
  std::vector<Atom> out;
  std::set<Atom> seen;
  for (auto& a : atoms) {
    if (seen.insert(a).second) out.push_back(std::move(a));
  }
  return out;
}

TermSet variables_of(const std::vector<Atom>& atoms) {
  TermSet out;
  for (const auto& a : atoms) {
    for (const auto& t : a.args) {
      if (t.is_variable()) out.insert(t);
    }
  }
  return out;
}

std::vector<Term> first_occurrence_vars(const std::vector<Atom>& atoms) {
  std::vector<Term> out;
  TermSet seen;
  for (const auto& a : atoms) {
    for (const auto& t : a.args) {
      if (t.is_variable() && seen.insert(t).second) out.push_back(t);
    }
  }
  return out;
}

}  // namespace

ExistentialRule ExistentialRule::make(std::string id, std::vector<Atom> body,
                                      std::vector<Atom> head) {
  if (id.empty()) throw SyntaxError("rule id must be nonempty");
  if (body.empty()) throw SyntaxError("rule " + id + ": empty body");
  if (head.empty()) throw SyntaxError("rule " + id + ": empty head");
  for (const auto* part : {&body, &head}) {
    for (const auto& a : *part) {
      if (a.is_top()) throw SyntaxError("rule " + id + ": reserved predicate TOP");
    }
  }
  ExistentialRule r;
  r.id = std::move(id);
  r.body = dedup(std::move(body));
  r.head = dedup(std::move(head));
  const TermSet bv = variables_of(r.body);
  const TermSet hv = variables_of(r.head);
  r.body_vars.assign(bv.begin(), bv.end());
  for (const auto& v : hv) {
    (bv.count(v) ? r.frontier : r.existentials).push_back(v);
  }
  return r;
}

Formula rule_as_formula(const ExistentialRule& rule) {
  std::vector<Formula> body, head;
  for (const auto& a : rule.body) body.push_back(Formula::atom(a));
  for (const auto& a : rule.head) head.push_back(Formula::atom(a));
  const std::vector<Term> head_order = [&] {
    std::vector<Term> zs;
    for (const auto& v : first_occurrence_vars(rule.head)) {
      if (std::binary_search(rule.existentials.begin(), rule.existentials.end(), v)) {
        zs.push_back(v);
      }
    }
    return zs;
  }();
  Formula matrix = make_implies(conjunction_of(body), exists_all(head_order, conjunction_of(head)));
  // Universal block as not-exists-not over all body variables at once.
  const auto universals = first_occurrence_vars(rule.body);
  return Formula::negation(exists_all(universals, Formula::negation(matrix)));
}

const ExistentialRule* find_rule(const RuleSet& rules, const std::string& id) {
  for (const auto& r : rules) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

TermSet terms_of(const Sequent& s) {
  TermSet out;
  for (const auto* side : {&s.antecedent, &s.consequent}) {
    for (const auto& f : *side) {
      auto ts = terms_of(f);
      out.insert(ts.begin(), ts.end());
    }
  }
  return out;
}

TermSet free_vars(const Sequent& s) {
  TermSet out;
  for (const auto* side : {&s.antecedent, &s.consequent}) {
    for (const auto& f : *side) {
      auto vs = free_vars(f);
      out.insert(vs.begin(), vs.end());
    }
  }
  return out;
}

FormulaSet as_formulas(const Instance& instance) {
  FormulaSet out;
  for (const auto& a : instance) out.insert(Formula::atom(a));
  return out;
}

Instance atoms_of(const FormulaSet& formulas) {
  Instance out;
  for (const auto& f : formulas) {
    if (!f.is_atom()) throw SyntaxError("expected an atomic formula");
    out.insert(f.as_atom());
  }
  return out;
}

BCQ BCQ::make(std::vector<Term> vars, std::vector<Atom> atoms) {
  if (atoms.empty()) throw SyntaxError("query must contain at least one atom");
  BCQ q;
  q.vars = std::move(vars);
  q.atoms = dedup(std::move(atoms));
  TermSet listed;
  for (const auto& v : q.vars) {
    if (!v.is_variable()) throw SyntaxError("query variables must be variables");
    if (!listed.insert(v).second) throw SyntaxError("query variable listed twice: " + v.name());
  }
  for (const auto& v : variables_of(q.atoms)) {
    if (!listed.count(v)) throw SyntaxError("query variable not listed: " + v.name());
  }
  for (const auto& a : q.atoms) {
    if (a.is_top()) throw SyntaxError("query may not use the reserved predicate TOP");
  }
  return q;
}

Formula BCQ::to_formula() const {
  std::vector<Formula> parts;
  for (const auto& a : atoms) parts.push_back(Formula::atom(a));
  return exists_all(vars, conjunction_of(parts));
}

namespace {

bool collect_conjuncts(const Formula& f, std::vector<Atom>& out) {
  if (f.is_atom()) {
    out.push_back(f.as_atom());
    return true;
  }
  if (f.kind() != FormulaKind::And) return false;
  return collect_conjuncts(f.left(), out) && collect_conjuncts(f.right(), out);
}

}  // namespace

std::optional<BCQ> as_bcq(const Formula& f) {
  std::vector<Term> vars;
  const Formula* cur = &f;
  while (cur->kind() == FormulaKind::Exists) {
    vars.push_back(cur->bound_variable());
    cur = &cur->body();
  }
  std::vector<Atom> atoms;
  if (!collect_conjuncts(*cur, atoms)) return std::nullopt;
  try {
    BCQ q = BCQ::make(vars, atoms);
    if (q.to_formula() != f) return std::nullopt;
    return q;
  } catch (const SyntaxError&) {
    return std::nullopt;
  }
}

void Signature::observe(const Atom& atom) {
  auto [it, inserted] = arities_.emplace(atom.predicate, atom.arity());
  if (!inserted && it->second != atom.arity()) {
    throw SyntaxError("arity mismatch for predicate " + atom.predicate + ": used with " +
                      std::to_string(it->second) + " and " + std::to_string(atom.arity()) +
                      " arguments");
  }
}

std::optional<std::size_t> Signature::arity(const std::string& predicate) const {
  auto it = arities_.find(predicate);
  if (it == arities_.end()) return std::nullopt;
  return it->second;
}

}  // namespace chaseq
