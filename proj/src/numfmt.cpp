#include "membound/numfmt.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace membound {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf.data(), end);
}

std::string format_point(const Point& x, std::string_view sep) {
    std::string out;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (i > 0) {
            out.append(sep);
        }
        out += format_double(x[i]);
    }
    return out;
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace membound
