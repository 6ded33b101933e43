#include "membound/bits.hpp"

#include <stdexcept>

namespace membound {

void BitString::set(std::size_t index, bool value) {
    if (index >= bits_.size()) {
        throw std::out_of_range("BitString::set: index past end");
    }
    bits_[index] = value;
}

void BitString::flip(std::size_t index) {
    if (index >= bits_.size()) {
        throw std::out_of_range("BitString::flip: index past end");
    }
    bits_[index] = !bits_[index];
}

void BitString::append(std::uint64_t value, unsigned width) {
    if (width > 64) {
        throw std::invalid_argument("BitString::append: width exceeds 64");
    }
    if (width < 64 && (value >> width) != 0) {
        throw std::invalid_argument("BitString::append: value does not fit in width");
    }
    for (unsigned i = width; i-- > 0;) {
        bits_.push_back(((value >> i) & 1U) != 0);
    }
}

void BitString::append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

std::uint64_t BitString::read(std::size_t offset, unsigned width) const {
    if (width > 64) {
        throw std::invalid_argument("BitString::read: width exceeds 64");
    }
    std::uint64_t value = 0;
    for (unsigned i = 0; i < width; ++i) {
        value = (value << 1U) | (get(offset + i) ? 1U : 0U);
    }
    return value;
}

BitString BitString::slice(std::size_t offset, std::size_t length) const {
    BitString out;
    out.bits_.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        out.bits_.push_back(get(offset + i));
    }
    return out;
}

void BitString::truncate(std::size_t n_bits) {
    if (n_bits < bits_.size()) {
        bits_.resize(n_bits);
    }
}

std::string BitString::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (bool b : bits_) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

BitString BitString::from_integer(std::uint64_t value, unsigned n_bits) {
    BitString out;
    out.append(value, n_bits);
    return out;
}

}  // namespace membound
