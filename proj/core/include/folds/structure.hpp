#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "folds/signature.hpp"

namespace folds {

struct ElemRef {
    SortId sort;
    std::uint32_t index = 0;
    auto operator<=>(const ElemRef&) const = default;
};

// A direct-argument tuple: one element per direct arrow of a sort.
using Boundary = std::vector<std::uint32_t>;

struct Element {
    std::string name;  // empty for anonymous witnesses
    Boundary args;
};

struct RawElement {
    std::string name;
    std::vector<std::string> args;
    SourceLocation where{};
};

struct RawStructure {
    std::string name;
    std::string signature;
    std::vector<std::pair<std::string, std::vector<RawElement>>> carriers;  // by sort name
    std::vector<SourceLocation> carrier_locations;
};

// A finite functor from the signature into finite sets, stored as carriers
// with each element's direct arguments.
class FinStructure {
public:
    FinStructure(const Signature& sig, std::string name);

    const Signature& signature() const noexcept { return *sig_; }
    const std::string& name() const noexcept { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    // Appends without checking; validate() checks everything at once.
    std::uint32_t add(SortId s, std::string name, Boundary args);

    std::size_t size(SortId s) const { return carriers_.at(s.value).size(); }
    std::size_t total_size() const;
    const Element& element(SortId s, std::uint32_t i) const { return carriers_.at(s.value).at(i); }
    const Element& element(ElemRef e) const { return element(e.sort, e.index); }
    std::optional<std::uint32_t> find(SortId s, const std::string& name) const;
    // Name for output: the declared name, or the argument tuple.
    std::string display(SortId s, std::uint32_t i) const;
    std::string display_boundary(SortId s, const Boundary& b) const;

    // The image of element e under an arrow out of s.
    std::uint32_t apply(ArrowId a, std::uint32_t e) const;
    // Image of a would-be element with direct arguments b along a non-identity arrow.
    std::uint32_t boundary_apply(SortId s, const Boundary& b, ArrowId a) const;

    // Arguments of the right sorts obeying every equation.
    bool boundary_consistent(SortId s, const Boundary& b) const;
    // Every consistent boundary of s, lexicographic.
    std::vector<Boundary> boundaries(SortId s) const;
    // Elements over b. Throws InvalidBoundary if b is not consistent.
    const std::vector<std::uint32_t>& fiber(SortId s, const Boundary& b) const;
    // Boundaries with a nonempty fiber, lexicographic.
    std::vector<Boundary> occupied_boundaries(SortId s) const;
    // Like fiber, with no consistency check: inconsistent boundaries are empty.
    const std::vector<std::uint32_t>& fiber_unchecked(SortId s, const Boundary& b) const;

    // Throws Functoriality, NonTotalMap or Name with all problems found.
    void validate() const;

    bool operator==(const FinStructure& o) const;

private:
    const Signature* sig_;
    std::string name_;
    std::vector<std::vector<Element>> carriers_;
    std::vector<std::map<Boundary, std::vector<std::uint32_t>>> fibers_;
};

// Resolves element names and validates. Throws with every diagnostic.
FinStructure validate_structure(const Signature& sig, const RawStructure& raw);

}  // namespace folds
