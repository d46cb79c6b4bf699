#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace folds {

// Exact witness count. Values past 2^kMaxBits collapse to a single "huge"
// value that is nonzero and exceeds every exact count.
class Card {
public:
    using Int = boost::multiprecision::cpp_int;
    static constexpr unsigned kMaxBits = 4096;

    Card() = default;
    Card(std::uint64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)
    static Card from_int(Int v);
    static Card huge();

    bool is_huge() const noexcept { return huge_; }
    bool is_zero() const noexcept { return !huge_ && value_.is_zero(); }
    bool is_one() const noexcept { return !huge_ && value_ == 1; }
    bool truthy() const noexcept { return !is_zero(); }
    const Int& value() const noexcept { return value_; }
    // Saturates at UINT64_MAX.
    std::uint64_t to_u64() const;

    Card clamp() const { return is_zero() ? Card(0) : Card(1); }
    Card operator+(const Card& o) const;
    Card operator*(const Card& o) const;
    Card& operator+=(const Card& o) { return *this = *this + o; }
    Card& operator*=(const Card& o) { return *this = *this * o; }
    // base^exponent with 0^0 = 1.
    static Card pow(const Card& base, const Card& exponent);

    bool operator==(const Card& o) const noexcept { return huge_ == o.huge_ && value_ == o.value_; }
    bool operator<(const Card& o) const noexcept;

    std::string to_string() const;

private:
    Int value_ = 0;
    bool huge_ = false;
};

inline std::ostream& operator<<(std::ostream& os, const Card& c) { return os << c.to_string(); }

}  // namespace folds
