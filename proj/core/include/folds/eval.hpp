#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "folds/card.hpp"
#include "folds/isogen.hpp"
#include "folds/structure.hpp"
#include "folds/syntax.hpp"

namespace folds {

// Variable name to element index within the variable's sort.
using Assignment = std::map<std::string, std::uint32_t>;

// Witness-count evaluation with memoisation on (subformula, values of its
// free variables). One evaluator serves one structure.
class Evaluator {
public:
    explicit Evaluator(const FinStructure& m) : m_(&m), expander_(m.signature()) {}

    const FinStructure& structure() const noexcept { return *m_; }

    // Every variable of ctx that f mentions, with its projections, must be
    // assigned consistently. Throws UnboundVariable, SortMismatch,
    // BoundaryMismatch.
    Card card(const Context& ctx, const Formula& f, const Assignment& a);
    bool holds(const Context& ctx, const Formula& f, const Assignment& a) { return card(ctx, f, a).truthy(); }

    std::size_t memo_size() const noexcept { return memo_.size(); }

private:
    struct Frame {
        Context ctx;
        std::unordered_map<std::string, std::uint32_t> env;
    };
    struct KeyHash {
        std::size_t operator()(const std::vector<std::uint64_t>& k) const noexcept;
    };

    Card eval(const Formula& f, Frame& fr);
    Card eval_binder(const Formula& f, Frame& fr);
    Card eval_reference(const Expander::Instance& inst, Frame& fr);
    Boundary lookup(const std::vector<std::string>& vars, const Frame& fr) const;

    const FinStructure* m_;
    Expander expander_;
    // Keys hold node addresses, so every memoised node is kept alive here.
    std::unordered_map<std::vector<std::uint64_t>, Card, KeyHash> memo_;
    std::unordered_map<const FormulaNode*, Formula> pinned_;
};

Card eval_card(const FinStructure& m, const Context& ctx, const Formula& f, const Assignment& a);
bool eval_prop(const FinStructure& m, const Context& ctx, const Formula& f, const Assignment& a);
// Throws OpenFormula if f has free variables.
bool satisfies(const FinStructure& m, const Formula& f);

struct Theory {
    std::string name;
    std::string signature;
    std::vector<std::pair<std::string, Formula>> axioms;
};

struct ModelReport {
    bool ok = true;
    std::vector<std::string> failed;  // axiom names in order
};

ModelReport check_model(const FinStructure& m, const Theory& t);

// Variables for elements of m: one per distinct element of the closure of
// roots under arguments, so equal elements share a variable.
class ElementContext {
public:
    explicit ElementContext(const FinStructure& m) : m_(&m), ctx_(m.signature()) {}

    const std::string& var(ElemRef e);
    // A variable of sort s over the variables of b that is distinct from
    // every other variable.
    const std::string& add_distinct(SortId s, const Boundary& b, std::uint32_t value);
    std::vector<std::string> vars(SortId s, const Boundary& b);

    const Context& context() const noexcept { return ctx_; }
    const Assignment& assignment() const noexcept { return assignment_; }

private:
    const FinStructure* m_;
    Context ctx_;
    Assignment assignment_;
    std::map<ElemRef, std::string> names_;
};

// card(a ~= b) for two elements of a sort: elements that coincide, a and b
// included, are one variable.
Card iso_card(Evaluator& ev, SortId k, std::uint32_t a, std::uint32_t b);

// card(Ind) with x and y always distinct variables over one boundary; the
// boundary variables coincide exactly where the elements do.
Card fiber_iso_card(Evaluator& ev, SortId k, const Boundary& b, std::uint32_t x, std::uint32_t y);

struct SaturationViolation {
    SortId sort;
    Boundary boundary;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    Card card;
};

struct SaturationReport {
    SortId sort;
    bool saturated = true;
    std::vector<SaturationViolation> violations;
};

// Saturated at k: inside every fiber, card(x ~= y) is 1 on the diagonal
// and 0 off it.
SaturationReport check_saturation(Evaluator& ev, SortId k);
SaturationReport check_saturation(const FinStructure& m, SortId k);

struct SaturationProfile {
    std::vector<SaturationReport> sorts;  // by SortId
    std::vector<bool> levels;             // levels[n-1]: every sort of level <= n saturated
    bool total = true;
};

SaturationProfile saturation_profile(const FinStructure& m);
bool is_n_saturated(const FinStructure& m, int n);
bool is_totally_saturated(const FinStructure& m);

// card(K(d1) ~= K(d2)) with boundary elements that coincide shared.
Card equiv_card(Evaluator& ev, SortId k, const Boundary& d1, const Boundary& d2);
// Bijections f between the two fibers with Ind(x, f(x)) for every x. Throws
// NotSaturated unless m is saturated up to the level of k.
Card equiv_card_via_bijections(Evaluator& ev, SortId k, const Boundary& d1, const Boundary& d2);

}  // namespace folds
