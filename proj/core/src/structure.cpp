#include "folds/structure.hpp"

#include <set>

namespace folds {

FinStructure::FinStructure(const Signature& sig, std::string name)
    : sig_(&sig), name_(std::move(name)), carriers_(sig.sort_count()), fibers_(sig.sort_count()) {}

std::uint32_t FinStructure::add(SortId s, std::string name, Boundary args) {
    auto idx = static_cast<std::uint32_t>(carriers_.at(s.value).size());
    fibers_[s.value][args].push_back(idx);
    carriers_[s.value].push_back(Element{std::move(name), std::move(args)});
    return idx;
}

std::size_t FinStructure::total_size() const {
    std::size_t n = 0;
    for (const auto& c : carriers_) n += c.size();
    return n;
}

std::optional<std::uint32_t> FinStructure::find(SortId s, const std::string& name) const {
    const auto& c = carriers_.at(s.value);
    for (std::uint32_t i = 0; i < c.size(); ++i)
        if (!c[i].name.empty() && c[i].name == name) return i;
    return std::nullopt;
}

std::string FinStructure::display_boundary(SortId s, const Boundary& b) const {
    const auto& direct = sig_->direct_arrows(s);
    std::string out = "(";
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (j) out += ',';
        SortId t = j < direct.size() ? sig_->cod(direct[j]) : s;
        out += b[j] < size(t) ? display(t, b[j]) : "?";
    }
    return out + ")";
}

std::string FinStructure::display(SortId s, std::uint32_t i) const {
    const auto& e = element(s, i);
    if (!e.name.empty()) return e.name;
    std::string out = display_boundary(s, e.args);
    std::size_t rank = 1;
    for (std::uint32_t k = 0; k < i; ++k) {
        const auto& o = element(s, k);
        if (o.name.empty() && o.args == e.args) ++rank;
    }
    if (rank > 1) out += "#" + std::to_string(rank);
    return out;
}

std::uint32_t FinStructure::boundary_apply(SortId s, const Boundary& b, ArrowId a) const {
    const auto& steps = sig_->arrow_step_paths(a).front();
    std::uint32_t v = b.at(steps[0]);
    SortId at = sig_->cod(sig_->direct_arrows(s)[steps[0]]);
    for (std::size_t j = 1; j < steps.size(); ++j) {
        v = element(at, v).args.at(steps[j]);
        at = sig_->cod(sig_->direct_arrows(at)[steps[j]]);
    }
    return v;
}

std::uint32_t FinStructure::apply(ArrowId a, std::uint32_t e) const {
    SortId s = sig_->dom(a);
    if (sig_->is_identity(a)) return e;
    return boundary_apply(s, element(s, e).args, a);
}

bool FinStructure::boundary_consistent(SortId s, const Boundary& b) const {
    const auto& direct = sig_->direct_arrows(s);
    if (b.size() != direct.size()) return false;
    for (std::size_t j = 0; j < b.size(); ++j)
        if (b[j] >= size(sig_->cod(direct[j]))) return false;
    for (ArrowId a : sig_->positions(s)) {
        const auto& paths = sig_->arrow_step_paths(a);
        std::uint32_t first = 0;
        for (std::size_t k = 0; k < paths.size(); ++k) {
            const auto& steps = paths[k];
            std::uint32_t v = b[steps[0]];
            SortId at = sig_->cod(direct[steps[0]]);
            for (std::size_t j = 1; j < steps.size(); ++j) {
                v = element(at, v).args.at(steps[j]);
                at = sig_->cod(sig_->direct_arrows(at)[steps[j]]);
            }
            if (k == 0)
                first = v;
            else if (v != first)
                return false;
        }
    }
    return true;
}

std::vector<Boundary> FinStructure::boundaries(SortId s) const {
    const auto& direct = sig_->direct_arrows(s);
    std::vector<Boundary> out;
    Boundary b(direct.size(), 0);
    for (std::size_t j = 0; j < direct.size(); ++j)
        if (size(sig_->cod(direct[j])) == 0) return out;
    while (true) {
        if (boundary_consistent(s, b)) out.push_back(b);
        std::size_t j = direct.size();
        while (j > 0) {
            --j;
            if (++b[j] < size(sig_->cod(direct[j]))) break;
            b[j] = 0;
            if (j == 0) return out;
        }
        if (direct.empty()) return out;
    }
}

std::vector<Boundary> FinStructure::occupied_boundaries(SortId s) const {
    std::vector<Boundary> out;
    for (const auto& [b, elems] : fibers_.at(s.value))
        if (!elems.empty()) out.push_back(b);
    return out;
}

const std::vector<std::uint32_t>& FinStructure::fiber_unchecked(SortId s, const Boundary& b) const {
    static const std::vector<std::uint32_t> empty;
    const auto& m = fibers_.at(s.value);
    auto it = m.find(b);
    return it == m.end() ? empty : it->second;
}

const std::vector<std::uint32_t>& FinStructure::fiber(SortId s, const Boundary& b) const {
    if (!boundary_consistent(s, b))
        throw Error(ErrorKind::InvalidBoundary,
                    display_boundary(s, b) + " is not a boundary for sort " + sig_->sort_name(s));
    return fiber_unchecked(s, b);
}

void FinStructure::validate() const {
    std::vector<Diagnostic> diags;
    for (auto s : sig_->sorts()) {
        const auto& direct = sig_->direct_arrows(s);
        std::set<std::string> names;
        for (std::uint32_t i = 0; i < size(s); ++i) {
            const auto& e = element(s, i);
            if (!e.name.empty() && !names.insert(e.name).second)
                diags.push_back({ErrorKind::Name, "duplicate element '" + e.name + "' in sort " + sig_->sort_name(s)});
            if (e.args.size() != direct.size()) {
                diags.push_back({ErrorKind::NonTotalMap, "element " + display(s, i) + " of " + sig_->sort_name(s) +
                                                             " has " + std::to_string(e.args.size()) +
                                                             " arguments, expected " + std::to_string(direct.size())});
                continue;
            }
            bool in_range = true;
            for (std::size_t j = 0; j < direct.size(); ++j) {
                if (e.args[j] >= size(sig_->cod(direct[j]))) {
                    diags.push_back({ErrorKind::NonTotalMap, "element " + std::to_string(i) + " of " +
                                                                 sig_->sort_name(s) + " has no image under " +
                                                                 sig_->direct_arrow_name(s, j)});
                    in_range = false;
                }
            }
            if (in_range && !boundary_consistent(s, e.args)) {
                std::string which;
                for (ArrowId a : sig_->positions(s))
                    if (sig_->arrow_step_paths(a).size() > 1) {
                        if (!which.empty()) which += ", ";
                        which += sig_->arrow_label(a);
                    }
                diags.push_back({ErrorKind::Functoriality, "element " + display(s, i) + " of " + sig_->sort_name(s) +
                                                               " breaks an equation at " + which});
            }
        }
    }
    if (!diags.empty()) throw Error(std::move(diags));
}

bool FinStructure::operator==(const FinStructure& o) const {
    if (sig_->name() != o.sig_->name() || carriers_.size() != o.carriers_.size()) return false;
    for (std::size_t s = 0; s < carriers_.size(); ++s) {
        if (carriers_[s].size() != o.carriers_[s].size()) return false;
        for (std::size_t i = 0; i < carriers_[s].size(); ++i)
            if (carriers_[s][i].name != o.carriers_[s][i].name || carriers_[s][i].args != o.carriers_[s][i].args)
                return false;
    }
    return true;
}

FinStructure validate_structure(const Signature& sig, const RawStructure& raw) {
    std::vector<Diagnostic> diags;
    if (!raw.signature.empty() && raw.signature != sig.name())
        diags.push_back({ErrorKind::Name, "structure " + raw.name + " is over " + raw.signature + ", not " + sig.name()});
    FinStructure m(sig, raw.name);
    std::vector<const std::vector<RawElement>*> by_sort(sig.sort_count(), nullptr);
    for (std::size_t c = 0; c < raw.carriers.size(); ++c) {
        const auto& [sort_name, elems] = raw.carriers[c];
        SourceLocation where = c < raw.carrier_locations.size() ? raw.carrier_locations[c] : SourceLocation{};
        auto s = sig.find_sort(sort_name);
        if (!s) {
            diags.push_back({ErrorKind::UnknownSort, "unknown sort '" + sort_name + "'", where});
            continue;
        }
        if (by_sort[s->value]) {
            diags.push_back({ErrorKind::Name, "carrier of " + sort_name + " given twice", where});
            continue;
        }
        by_sort[s->value] = &elems;
    }
    // Names first, so arguments may refer to any element.
    std::vector<std::map<std::string, std::uint32_t>> names(sig.sort_count());
    for (auto s : sig.sorts()) {
        if (!by_sort[s.value]) continue;
        std::uint32_t i = 0;
        for (const auto& e : *by_sort[s.value]) {
            if (!e.name.empty() && !names[s.value].emplace(e.name, i).second)
                diags.push_back({ErrorKind::Name, "duplicate element '" + e.name + "' in sort " + sig.sort_name(s), e.where});
            ++i;
        }
    }
    for (auto s : sig.sorts()) {
        if (!by_sort[s.value]) continue;
        const auto& direct = sig.direct_arrows(s);
        for (const auto& e : *by_sort[s.value]) {
            Boundary args;
            if (e.args.size() != direct.size()) {
                diags.push_back({ErrorKind::NonTotalMap, "element of " + sig.sort_name(s) + " needs " +
                                                             std::to_string(direct.size()) + " arguments, got " +
                                                             std::to_string(e.args.size()),
                                 e.where});
            } else {
                for (std::size_t j = 0; j < direct.size(); ++j) {
                    SortId t = sig.cod(direct[j]);
                    auto it = names[t.value].find(e.args[j]);
                    if (it == names[t.value].end()) {
                        diags.push_back({ErrorKind::NonTotalMap, "argument " + sig.direct_arrow_name(s, j) + " of " +
                                                                     sig.sort_name(s) + " element names no element '" +
                                                                     e.args[j] + "' of sort " + sig.sort_name(t),
                                         e.where});
                        args.push_back(0xFFFFFFFFu);
                    } else {
                        args.push_back(it->second);
                    }
                }
            }
            m.add(s, e.name, std::move(args));
        }
    }
    if (!diags.empty()) throw Error(std::move(diags));
    m.validate();
    return m;
}

}  // namespace folds
