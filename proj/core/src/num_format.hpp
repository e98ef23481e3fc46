#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>

namespace specgeo::detail {

// Shortest decimal form that round-trips; keeps every emitted file byte-stable.
inline std::string fmt(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string fmt(std::int64_t v) {
    char buf[24];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline bool parse(std::string_view sv, double& out) {
    auto r = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    return r.ec == std::errc();
}

inline bool parse(std::string_view sv, std::int64_t& out) {
    auto r = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    return r.ec == std::errc();
}

} // namespace specgeo::detail
