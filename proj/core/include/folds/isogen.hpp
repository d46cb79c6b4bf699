#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "folds/syntax.hpp"

namespace folds {

// One way to fill R around p: alpha has x at p, beta has y at p, and they
// agree on every position of R that does not factor through p. Arguments
// are given per direct arrow of R; fresh lists the new variables in
// dependency order.
struct FillerPattern {
    std::vector<std::string> alpha;
    std::vector<std::string> beta;
    std::vector<VarDecl> fresh;
};

// Patterns up to renaming of fresh variables, ordered by printed form.
// Throws IncompatibleSort unless R is in L_x and L_y.
std::vector<FillerPattern> enum_fillers(const Context& ctx, SortId r, ArrowId p, const std::string& x,
                                        const std::string& y);

Formula pattern_formula(const FillerPattern& pat, SortId r);

// Conjunction of the pattern formulas; Top when there is none.
Formula ind_at(const Context& ctx, SortId r, ArrowId p, const std::string& x, const std::string& y);

struct IndTraceEntry {
    SortId sort;
    ArrowId arrow;
    std::vector<Formula> conjuncts;  // empty when the pair is vacuous
};

// Every (R, p) with R in L_x and L_y, in declaration order.
std::vector<IndTraceEntry> ind_trace(const Context& ctx, const std::string& x, const std::string& y);

// Ind(x, y): the conjunction over ind_trace, with Top standing for vacuous
// pairs. Throws SortMismatch if x and y have different sorts.
Formula ind(const Context& ctx, const std::string& x, const std::string& y);

// K(alpha) ~= K(beta) as a three-part formula over Ind references.
Formula sort_equiv(const Context& ctx, SortId k, const std::vector<std::string>& alpha,
                   const std::vector<std::string>& beta);

struct IsoFormula {
    Context context;  // generic boundary, then x and y
    std::string x;
    std::string y;
    Formula formula;  // the expansion of Ind(x, y)
};

IsoFormula iso_formula(const Signature& sig, SortId k);

// Caches expansions of Ind and ~= references keyed by the coincidence
// pattern of the variables involved, so equal patterns share one formula.
class Expander {
public:
    explicit Expander(const Signature& sig) : sig_(&sig) {}

    struct Expansion {
        Context context;
        Formula formula;
    };
    // actual[i] names the variable of the caller's context bound to the
    // i-th declaration of the expansion context.
    struct Instance {
        const Expansion* expansion;
        std::vector<std::string> actual;
    };

    Instance expand_ind(const Context& ctx, const std::string& x, const std::string& y);
    Instance expand_equiv(const Context& ctx, SortId k, const std::vector<std::string>& alpha,
                          const std::vector<std::string>& beta);
    std::size_t size() const noexcept { return cache_.size(); }

private:
    struct Canonical {
        std::string key;
        std::vector<std::string> actual;
        std::unordered_map<std::string, std::string> rename;
    };
    Canonical canonicalize(const Context& ctx, const std::vector<std::string>& roots) const;
    Context canonical_context(const Context& ctx, const Canonical& c) const;

    const Signature* sig_;
    std::unordered_map<std::string, std::unique_ptr<Expansion>> cache_;
};

}  // namespace folds
