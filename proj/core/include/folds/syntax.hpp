#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "folds/signature.hpp"

namespace folds {

// x : K(a1, ..., an), one argument per direct arrow of K.
struct VarDecl {
    std::string name;
    SortId sort;
    std::vector<std::string> args;

    bool operator==(const VarDecl&) const = default;
};

// A projection-closed, dependency-ordered set of variable declarations.
class Context {
public:
    explicit Context(const Signature& sig) : sig_(&sig) {}

    const Signature& signature() const noexcept { return *sig_; }
    const std::vector<VarDecl>& decls() const noexcept { return decls_; }
    std::size_t size() const noexcept { return decls_.size(); }

    // Throws UnboundVariable, SortMismatch, BoundaryMismatch, IllFormedContext.
    void add(VarDecl d);
    // Declares name : sort(args) with freshly checked arguments; returns the name.
    const std::string& add(std::string name, SortId sort, std::vector<std::string> args);
    // Removes the most recent declaration.
    void pop_back();

    bool contains(const std::string& name) const { return index_.count(name) != 0; }
    const VarDecl& decl(const std::string& name) const;
    SortId sort_of(const std::string& name) const { return decl(name).sort; }

    // x_a for an arrow a out of the sort of x.
    std::string projection(const std::string& name, ArrowId a) const;
    // dep(x): x with all its projections, in context order.
    std::vector<std::string> dep(const std::string& name) const;
    // dep(x) without x.
    std::vector<std::string> boundary(const std::string& name) const;
    // Union of dep over several variables, in context order.
    std::vector<std::string> dep_closure(const std::vector<std::string>& names) const;
    // Restriction to a projection-closed subset, keeping order.
    Context restrict_to(const std::vector<std::string>& names) const;

    // prefix+index not used here nor in avoid.
    std::string fresh_name(SortId sort, const std::set<std::string>& avoid = {}) const;

    // Checks that args form a boundary for sort: declared variables of the
    // right sorts satisfying every equation of the signature.
    void check_boundary(SortId sort, const std::vector<std::string>& args) const;
    // Projection of a would-be variable with the given arguments.
    std::string boundary_projection(SortId sort, const std::vector<std::string>& args, ArrowId a) const;

private:
    const Signature* sig_;
    std::vector<VarDecl> decls_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Throws IllFormedContext on clashing declarations.
Context union_contexts(const Context& a, const Context& b);

// Short lowercase prefix for generated variable names of a sort.
std::string var_prefix(const Signature& sig, SortId sort);

enum class FormulaKind { Top, Bottom, Atom, And, Or, Implies, Iff, Forall, Exists, Sigma, Equiv, Ind };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

// Immutable. Exists is truncated; Sigma is the untruncated existential.
// Equiv and Ind are references expanded on demand.
struct FormulaNode {
    FormulaKind kind = FormulaKind::Top;
    SortId sort{};                       // Atom, Equiv
    std::vector<std::string> args;       // Atom; Equiv left side; Ind {x, y}
    std::vector<std::string> rhs_args;   // Equiv right side
    VarDecl binder;                      // Forall, Exists, Sigma
    std::vector<Formula> children;       // And: any number; binary: 2; binders: 1
    std::vector<std::string> free_vars;  // syntactic, sorted
};

Formula make_top();
Formula make_bottom();
Formula make_atom(SortId sort, std::vector<std::string> args);
// Empty gives Top; a single part is returned as is.
Formula make_and(std::vector<Formula> parts);
Formula make_or(Formula a, Formula b);
Formula make_implies(Formula a, Formula b);
Formula make_iff(Formula a, Formula b);
Formula make_forall(VarDecl v, Formula body);
Formula make_exists(VarDecl v, Formula body);
Formula make_sigma(VarDecl v, Formula body);
Formula make_equiv(SortId sort, std::vector<std::string> lhs, std::vector<std::string> rhs);
Formula make_ind(std::string x, std::string y);
// Binder of the given kind (Forall, Exists or Sigma).
Formula make_binder(FormulaKind kind, VarDecl v, Formula body);
// Nest binders, first variable outermost.
Formula make_forall_all(const std::vector<VarDecl>& vs, Formula body);

// Sorted free variables, counting binder arguments as occurrences.
const std::vector<std::string>& free_vars(const Formula& f);
// Free variables closed under projection in ctx.
std::vector<std::string> free_vars_closed(const Context& ctx, const Formula& f);

// Throws on unbound, missorted or ill-formed subformulas. Bound names may
// not shadow names already in scope.
void check_formula(const Context& ctx, const Formula& f);

using Renaming = std::map<std::string, std::string>;

// Capture-avoiding renaming of free variables.
Formula substitute(const Formula& f, const Renaming& s);
bool alpha_eq(const Formula& a, const Formula& b);
// A context isomorphism s with s(phi) alpha-equal to psi, if any.
std::optional<Renaming> ctx_eq(const Context& gamma, const Formula& phi, const Context& delta, const Formula& psi);
// forall over vars, dependencies outermost. The variables of ctx outside
// vars must stay projection-closed.
Formula universal_closure(const Context& ctx, const Formula& f, const std::vector<std::string>& vars);

// Removes Top conjuncts and collapses trivial connectives.
Formula simplify(const Formula& f);
// Conjuncts of a top-level And, or the formula itself.
std::vector<Formula> conjuncts(const Formula& f);

// L_x: sorts R of lower level than x's sort such that every pair of arrows
// out of that sort identified by some q in hom(R, K) hits the same variable.
std::vector<SortId> compatible_sorts(const Context& ctx, const std::string& x);
bool is_compatible(const Context& ctx, const std::string& x, SortId r);

// Concrete syntax; parse_formula accepts everything printed here.
std::string print_formula(const Signature& sig, const Formula& f);
std::string print_decl(const Signature& sig, const VarDecl& d);
std::string print_context(const Context& ctx);

}  // namespace folds
