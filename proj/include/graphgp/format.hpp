// Shortest-round-trip numeric formatting. All numbers written to CSV files and
// file names go through these helpers so output is byte-stable across runs and
// parses back to the identical double.
#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace graphgp {

inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

inline std::string format_int(long long x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc())
        throw std::runtime_error("format_int: conversion failed");
    return std::string(buf, res.ptr);
}

inline std::string format_uint(std::uint64_t x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc())
        throw std::runtime_error("format_uint: conversion failed");
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double x = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("parse_double: invalid number '" + s + "'");
    return x;
}

} // namespace graphgp
