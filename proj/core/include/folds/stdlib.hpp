#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "folds/eval.hpp"
#include "folds/signature.hpp"
#include "folds/structure.hpp"
#include "folds/syntax.hpp"

namespace folds {

// Builtin signatures: "lrg" (reflexive graphs), "lrg_eq" (with an equality
// on arrows) and "lcat" (categories). Sorts are O, A, I, EqA, Comp with
//   A    { d: O, c: O }
//   I    { i: A }               eq { i.d = i.c }
//   EqA  { s: A, t: A }         eq { s.d = t.d, s.c = t.c }
//   Comp { t0: A, t1: A, t2: A } eq { t0.d = t2.d, t1.c = t2.c, t1.d = t0.c }
// Comp(f, g, h) reads h = g after f.
std::vector<std::string> builtin_signature_names();
// Throws Name for an unknown builtin.
const Signature& builtin_signature(std::string_view name);
std::string_view builtin_signature_text(std::string_view name);

// Axioms for categories with a congruence EqA standing for equality of arrows.
Theory tcat_axioms();
std::string_view tcat_text();

// Iso(x, y) and Yso(x, y) over lcat for object variables x and y of ctx.
Formula iso_predicate(const Context& ctx, const std::string& x, const std::string& y);
Formula yso_predicate(const Context& ctx, const std::string& x, const std::string& y);

struct FiniteCategory {
    struct Arrow {
        std::string name;
        std::uint32_t src = 0;
        std::uint32_t tgt = 0;
    };
    std::string name;
    std::vector<std::string> objects;
    std::vector<Arrow> arrows;
    std::vector<std::uint32_t> identity;                                    // per object
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> comp;  // (f, g) -> g after f

    std::uint32_t compose(std::uint32_t f, std::uint32_t g) const;  // g after f
};

// Builds a category from non-identity arrows and their composites; identities
// are named id_<object> and composites with identities are filled in.
FiniteCategory make_category(std::string name, std::vector<std::string> objects,
                             std::vector<std::tuple<std::string, std::string, std::string>> arrows,
                             std::vector<std::tuple<std::string, std::string, std::string>> composites);
// Thin category from a strict order given by its covering and implied pairs.
FiniteCategory make_poset(std::string name, std::vector<std::string> objects,
                          std::vector<std::pair<std::string, std::string>> less);

// Throws InvalidCategory: missing composites, unit or associativity failures.
void validate_category(const FiniteCategory& c);
FinStructure category_to_structure(const Signature& lcat, const FiniteCategory& c);
// Inverse of category_to_structure. Throws NotAModel unless m satisfies the
// axioms, is 1-saturated and interprets EqA as equality.
FiniteCategory structure_to_category(const FinStructure& m);

// Pairs of objects joined by an isomorphism, the diagonal included.
std::vector<std::pair<std::uint32_t, std::uint32_t>> categorical_iso_pairs(const FiniteCategory& c);
// Every isomorphism is an identity.
bool is_gaunt(const FiniteCategory& c);

struct CorpusEntry {
    std::string name;
    std::optional<FiniteCategory> category;  // absent for non-category structures
    FinStructure structure;
};

// The shipped corpus over lcat, in a fixed order.
const std::vector<CorpusEntry>& corpus();
const CorpusEntry& corpus_entry(std::string_view name);

}  // namespace folds
