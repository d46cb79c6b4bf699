#include "folds/card.hpp"

#include <limits>

namespace folds {

Card Card::from_int(Int v) {
    Card c;
    if (!v.is_zero() && boost::multiprecision::msb(v) >= kMaxBits) return huge();
    c.value_ = std::move(v);
    return c;
}

Card Card::huge() {
    Card c;
    c.huge_ = true;
    return c;
}

std::uint64_t Card::to_u64() const {
    if (huge_ || value_ > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(value_);
}

Card Card::operator+(const Card& o) const {
    if (huge_ || o.huge_) return huge();
    return from_int(value_ + o.value_);
}

Card Card::operator*(const Card& o) const {
    if (is_zero() || o.is_zero()) return Card(0);
    if (huge_ || o.huge_) return huge();
    return from_int(value_ * o.value_);
}

Card Card::pow(const Card& base, const Card& exponent) {
    if (exponent.is_zero()) return Card(1);
    if (base.is_zero()) return Card(0);
    if (base.is_one()) return Card(1);
    if (base.huge_ || exponent.huge_ || exponent.value_ >= kMaxBits) return huge();
    return from_int(boost::multiprecision::pow(base.value_, static_cast<unsigned>(exponent.value_)));
}

bool Card::operator<(const Card& o) const noexcept {
    if (huge_ != o.huge_) return o.huge_;
    return !huge_ && value_ < o.value_;
}

std::string Card::to_string() const {
    if (huge_) return ">2^" + std::to_string(kMaxBits);
    return value_.str();
}

}  // namespace folds
