#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace membound {

/// A growable bit string. Fixed-width fields are stored most-significant-bit
/// first. Reads past the end return zeros, so an empty string behaves as the
/// all-zero string of any length.
class BitString {
  public:
    BitString() = default;
    explicit BitString(std::size_t n_bits, bool value = false)
      : bits_(n_bits, value) {}

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    bool get(std::size_t index) const { return index < bits_.size() && bits_[index]; }
    void set(std::size_t index, bool value);
    void flip(std::size_t index);

    void append(std::uint64_t value, unsigned width);
    void append(const BitString& other);

    std::uint64_t read(std::size_t offset, unsigned width) const;

    /// Bits [offset, offset + length) as a new string.
    BitString slice(std::size_t offset, std::size_t length) const;

    void truncate(std::size_t n_bits);

    /// '0'/'1' characters, first bit first.
    std::string to_string() const;

    /// The n-bit string whose bits spell `value` MSB-first.
    static BitString from_integer(std::uint64_t value, unsigned n_bits);

    friend bool operator==(const BitString&, const BitString&) = default;

  private:
    std::vector<bool> bits_;
};

}  // namespace membound
