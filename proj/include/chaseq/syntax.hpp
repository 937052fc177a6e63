#pragma once

// Terms, atoms, instances, formulas, rules, sequents and queries.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaseq {

/// Raised on malformed objects (bad arity, reserved names, ill-formed rules).
class SyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kTopPredicate = "TOP";
/// Reserved constant used to make quantifier universes non-empty and to encode
/// the empty conjunction/disjunction.
inline constexpr const char* kTruthConstant = "_c0";
inline constexpr const char* kFreshPrefix = "_z";

enum class TermKind : std::uint8_t { Constant, Variable };

class Term {
 public:
  Term() = default;

  static Term constant(std::string name);
  static Term variable(std::string name);
  /// Mints `_z<N>` from the process-wide counter.
  static Term fresh();
  static Term truth_constant() { return constant(kTruthConstant); }

  TermKind kind() const { return kind_; }
  bool is_constant() const { return kind_ == TermKind::Constant; }
  bool is_variable() const { return kind_ == TermKind::Variable; }
  bool is_fresh() const { return fresh_index_ != 0; }
  std::uint64_t fresh_index() const { return fresh_index_; }
  const std::string& name() const { return name_; }

  // Constants first, then parsed variables by name, then fresh variables by
  // minting order.
  std::strong_ordering operator<=>(const Term& other) const;
  bool operator==(const Term& other) const {
    return kind_ == other.kind_ && name_ == other.name_;
  }

 private:
  Term(TermKind kind, std::string name);

  TermKind kind_ = TermKind::Constant;
  std::uint64_t fresh_index_ = 0;
  std::string name_;
};

/// Ensures later calls to Term::fresh() never return `_z<index>` or below.
void reserve_fresh_index(std::uint64_t index);
std::uint64_t peek_fresh_index();

using TermSet = std::set<Term>;

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string predicate, std::vector<Term> args)
      : predicate(std::move(predicate)), args(std::move(args)) {}

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;
  bool is_top() const { return predicate == kTopPredicate; }

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

Atom top_atom(const Term& t);

/// A finite set of atoms. Atoms are kept sorted, so all atoms of one predicate
/// form a contiguous range.
class Instance {
 public:
  using const_iterator = std::set<Atom>::const_iterator;

  Instance() = default;
  Instance(std::initializer_list<Atom> atoms);
  template <typename It>
  Instance(It first, It last) {
    for (; first != last; ++first) insert(*first);
  }

  /// Returns true if the atom was not present before.
  bool insert(const Atom& atom);
  bool erase(const Atom& atom);
  bool contains(const Atom& atom) const { return atoms_.count(atom) != 0; }
  bool contains_term(const Term& t) const { return term_counts_.count(t) != 0; }

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const_iterator begin() const { return atoms_.begin(); }
  const_iterator end() const { return atoms_.end(); }

  /// Atoms with the given predicate, in sorted order.
  std::pair<const_iterator, const_iterator> with_predicate(const std::string& predicate) const;
  /// Atoms of the predicate whose first argument is `first_arg`.
  std::pair<const_iterator, const_iterator> with_first_argument(const std::string& predicate,
                                                                const Term& first_arg) const;

  /// T(I): every term occurring in some atom.
  TermSet terms() const;
  std::vector<Term> sorted_terms() const;
  bool is_ground() const;
  bool includes(const Instance& other) const;
  std::vector<Atom> atoms() const { return {atoms_.begin(), atoms_.end()}; }

  bool operator==(const Instance& other) const { return atoms_ == other.atoms_; }

 private:
  std::set<Atom> atoms_;
  std::map<Term, std::size_t> term_counts_;
};

using Database = Instance;

enum class FormulaKind : std::uint8_t { Atom, Not, And, Exists };

class Formula;

/// Immutable formula over {atom, not, and, exists}. Copies share structure.
class Formula {
 public:
  static Formula atom(Atom a);
  static Formula negation(Formula body);
  static Formula conjunction(Formula left, Formula right);
  static Formula exists(Term var, Formula body);

  FormulaKind kind() const;
  bool is_atom() const { return kind() == FormulaKind::Atom; }
  const Atom& as_atom() const;
  /// Operand of Not, or body of Exists.
  const Formula& body() const;
  const Formula& left() const;
  const Formula& right() const;
  const Term& bound_variable() const;

  /// Number of nodes.
  std::size_t size() const;
  std::size_t hash() const;

  // Structural order: size first, then shape and contents.
  std::strong_ordering operator<=>(const Formula& other) const;
  bool operator==(const Formula& other) const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

using FormulaSet = std::set<Formula>;

// Derived connectives, elaborated into the core language.
Formula make_or(const Formula& a, const Formula& b);
Formula make_implies(const Formula& a, const Formula& b);
Formula make_forall(const Term& var, const Formula& body);
/// Right-associated conjunction; TOP(_c0) when empty.
Formula conjunction_of(const std::vector<Formula>& parts);
/// Right-associated disjunction; not TOP(_c0) when empty.
Formula disjunction_of(const std::vector<Formula>& parts);
Formula exists_all(const std::vector<Term>& vars, Formula body);

TermSet free_vars(const Formula& f);
/// Constants and free variables of f.
TermSet terms_of(const Formula& f);
/// Every variable with any occurrence, bound or free.
TermSet all_variables(const Formula& f);
TermSet constants_of(const Formula& f);
/// f(t/x): replaces free occurrences of x only.
Formula substitute(const Formula& f, const Term& t, const Term& x);

struct ExistentialRule {
  std::string id;
  std::vector<Atom> body;
  std::vector<Atom> head;
  std::vector<Term> frontier;     // body/head shared variables, sorted
  std::vector<Term> existentials; // head-only variables, sorted
  std::vector<Term> body_vars;    // sorted

  /// Validates and classifies variables. Duplicate atoms are dropped, keeping
  /// first occurrences.
  static ExistentialRule make(std::string id, std::vector<Atom> body, std::vector<Atom> head);

  bool operator==(const ExistentialRule& other) const {
    return id == other.id && body == other.body && head == other.head;
  }
};

using RuleSet = std::vector<ExistentialRule>;

/// Closed formula for the rule: forall body vars (body -> exists z. head).
Formula rule_as_formula(const ExistentialRule& rule);
const ExistentialRule* find_rule(const RuleSet& rules, const std::string& id);

struct Sequent {
  FormulaSet antecedent;
  FormulaSet consequent;

  auto operator<=>(const Sequent&) const = default;
  bool operator==(const Sequent&) const = default;
};

/// T(s): constants and free variables of every formula of the sequent.
TermSet terms_of(const Sequent& s);
TermSet free_vars(const Sequent& s);
FormulaSet as_formulas(const Instance& instance);
/// Throws SyntaxError if any member is not an atom.
Instance atoms_of(const FormulaSet& formulas);

/// Boolean conjunctive query: exists vars. atoms.
struct BCQ {
  std::vector<Term> vars;
  std::vector<Atom> atoms;

  static BCQ make(std::vector<Term> vars, std::vector<Atom> atoms);
  /// Quantifier prefix in `vars` order over a right-associated conjunction.
  Formula to_formula() const;

  bool operator==(const BCQ&) const = default;
};

/// Inverse of BCQ::to_formula for formulas of that shape.
std::optional<BCQ> as_bcq(const Formula& f);

/// Checks per-predicate arity consistency across all atoms seen so far.
class Signature {
 public:
  void observe(const Atom& atom);
  std::optional<std::size_t> arity(const std::string& predicate) const;
  const std::map<std::string, std::size_t>& predicates() const { return arities_; }

 private:
  std::map<std::string, std::size_t> arities_;
};

}  // namespace chaseq
