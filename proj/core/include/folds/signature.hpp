#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "folds/error.hpp"

namespace folds {

struct SortId {
    std::uint32_t value = 0;
    auto operator<=>(const SortId&) const = default;
};

// An arrow of the signature category: an equivalence class of paths of
// generating arrows modulo the declared equations.
struct ArrowId {
    std::uint32_t value = 0;
    auto operator<=>(const ArrowId&) const = default;
};

struct RawArrow {
    std::string name;
    std::string target;
    SourceLocation where{};
};

// Paths are written in application order: {"i", "d"} is d after i.
struct RawEquation {
    std::vector<std::string> lhs;
    std::vector<std::string> rhs;
    SourceLocation where{};
};

struct RawSort {
    std::string name;
    std::optional<int> declared_level;
    std::vector<RawArrow> arrows;
    std::vector<RawEquation> equations;
    SourceLocation where{};
};

struct RawSignature {
    std::string name;
    std::vector<RawSort> sorts;
};

class Signature {
public:
    const std::string& name() const noexcept { return raw_.name; }
    const RawSignature& source() const noexcept { return raw_; }

    std::size_t sort_count() const noexcept { return sorts_.size(); }
    std::vector<SortId> sorts() const;
    const std::string& sort_name(SortId s) const { return sorts_.at(s.value).name; }
    std::optional<SortId> find_sort(std::string_view name) const;
    // Throws UnknownSort.
    SortId sort(std::string_view name) const;

    int level(SortId s) const { return sorts_.at(s.value).level; }
    int height() const noexcept { return height_; }
    // Ascending level; ties keep declaration order.
    std::vector<SortId> sorts_by_level() const;
    // Descending level: every sort appears after all sorts it points to.
    std::vector<SortId> sorts_dependencies_first() const;

    // Generating arrows out of s, in declaration order. Variables of sort s
    // carry one argument per entry.
    const std::vector<ArrowId>& direct_arrows(SortId s) const { return sorts_.at(s.value).direct; }
    const std::string& direct_arrow_name(SortId s, std::size_t i) const;
    std::optional<std::size_t> find_direct_arrow(SortId s, std::string_view name) const;
    // Every non-identity arrow out of s, shortest paths first.
    const std::vector<ArrowId>& positions(SortId s) const { return sorts_.at(s.value).positions; }

    std::size_t arrow_count() const noexcept { return arrows_.size(); }
    ArrowId identity(SortId s) const { return sorts_.at(s.value).identity; }
    bool is_identity(ArrowId a) const { return arrows_.at(a.value).gens.empty(); }
    SortId dom(ArrowId a) const { return arrows_.at(a.value).dom; }
    SortId cod(ArrowId a) const { return arrows_.at(a.value).cod; }
    // Dotted canonical path, e.g. "i.d"; identities print as "id".
    std::string arrow_label(ArrowId a) const;
    // Canonical representative as a list of generating arrows.
    std::vector<ArrowId> arrow_path(ArrowId a) const;
    // Every path in the class, each step given as an index into the
    // direct arrows of the sort it leaves.
    const std::vector<std::vector<std::size_t>>& arrow_step_paths(ArrowId a) const {
        return arrows_.at(a.value).step_paths;
    }

    // second after first. Requires cod(first) == dom(second).
    ArrowId then(ArrowId first, ArrowId second) const;
    // All arrows from -> to, including the identity when from == to.
    std::vector<ArrowId> hom(SortId from, SortId to) const;
    // Throws Name or Composition when the dotted path does not resolve.
    ArrowId resolve_path(SortId from, const std::vector<std::string>& names) const;

private:
    friend Signature validate_signature(const RawSignature& raw);

    struct SortInfo {
        std::string name;
        int level = 1;
        ArrowId identity;
        std::vector<ArrowId> direct;
        std::vector<ArrowId> positions;
    };
    struct GenArrow {
        std::string name;
        SortId dom;
        SortId cod;
        ArrowId cls;
    };
    struct ArrowInfo {
        SortId dom;
        SortId cod;
        std::vector<std::uint32_t> gens;  // canonical path; empty for identities
        std::vector<std::vector<std::size_t>> step_paths;
    };

    RawSignature raw_;
    std::vector<SortInfo> sorts_;
    std::vector<GenArrow> gens_;
    std::vector<std::vector<std::uint32_t>> gens_out_;  // per sort, generating arrow indices
    std::vector<ArrowInfo> arrows_;
    std::vector<std::vector<ArrowId>> compose_;  // compose_[a][b] valid when cod a == dom b
    int height_ = 0;
};

// Throws Error carrying every violation found.
Signature validate_signature(const RawSignature& raw);

// Level of every sort indexed by SortId.
std::vector<int> compute_levels(const Signature& sig);

}  // namespace folds
