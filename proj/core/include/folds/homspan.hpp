#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "folds/card.hpp"
#include "folds/eval.hpp"
#include "folds/structure.hpp"

namespace folds {

// A family of maps, one per sort, indexed by element.
struct Hom {
    std::vector<std::vector<std::uint32_t>> maps;  // by SortId

    std::uint32_t operator()(SortId s, std::uint32_t e) const { return maps.at(s.value).at(e); }
    Boundary image(const Boundary& b, const Signature& sig, SortId s) const;
    bool operator==(const Hom&) const = default;
};

Hom identity_hom(const FinStructure& m);
// Throws NonTotalMap unless every map is total into the right carrier.
void check_total(const FinStructure& m, const FinStructure& n, const Hom& h);
// Naturality on every generating arrow.
bool is_hom(const FinStructure& m, const FinStructure& n, const Hom& h);
// Throws NotAHomomorphism, naming the first failing element.
void require_hom(const FinStructure& m, const FinStructure& n, const Hom& h);
Hom compose(const Hom& f, const Hom& g);  // g after f

// For one boundary of the domain, the least preimage of every element of
// the target fiber.
struct FiberSection {
    SortId sort;
    Boundary boundary;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> preimage;  // target element -> least source element
};

struct FibSurjReport {
    bool ok = true;
    std::vector<FiberSection> sections;  // filled when ok
    // First failure, when not ok.
    SortId sort{};
    Boundary boundary;
    std::uint32_t missed = 0;
};

// Every fiber of m maps onto the fiber of n over the image boundary.
FibSurjReport is_fibsurj(const FinStructure& m, const FinStructure& n, const Hom& h);

struct SearchLimits {
    std::uint64_t max_steps = 50'000'000;
};

// First homomorphism in a fixed search order.
std::optional<Hom> find_hom(const FinStructure& m, const FinStructure& n, bool fibsurj = false,
                            SearchLimits limits = {});
// A homomorphism with bijective maps on every sort.
std::optional<Hom> structure_iso(const FinStructure& m, const FinStructure& n, SearchLimits limits = {});

struct Span {
    FinStructure apex;
    Hom left;   // apex -> m
    Hom right;  // apex -> n
};

enum class SpanStatus {
    Found,
    NotEquivalent,  // decided: both ends totally saturated and not isomorphic
    NoneWithinBound,
    BudgetExhausted,
};

std::string_view to_string(SpanStatus s);

struct SpanOptions {
    // Per-sort bound on apex fibers summed over the sort; 0 means |M(K)|*|N(K)|.
    std::size_t max_apex = 0;
    bool use_fast_path = true;
    SearchLimits limits{};
};

struct SpanResult {
    SpanStatus status = SpanStatus::NoneWithinBound;
    std::optional<Span> span;
    bool fast_path = false;
    std::uint64_t steps = 0;
};

// Searches apexes that are substructures of the product m x n, fiber by
// fiber with minimal covering relations, and verifies both legs.
SpanResult find_span(const FinStructure& m, const FinStructure& n, const SpanOptions& opt = {});

// Requires height 3 and both ends totally saturated; the answer is whether
// a structure isomorphism exists.
bool hsip_decide(const FinStructure& m, const FinStructure& n);

struct PreservationReport {
    bool ok = true;
    std::vector<std::string> failures;
};

// For level 2: Ind truth on every pair of elements of level-2 sorts is
// preserved and reflected by h. For level 3: card(x ~= y) on every pair of
// elements of level-3 sorts is preserved; requires both ends totally
// saturated.
PreservationReport check_ind_preservation(const FinStructure& m, const FinStructure& n, const Hom& h, int level);

}  // namespace folds
