#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "svlm/errors.hpp"

namespace svlm::binio {

// Explicit little-endian scalar encoding, independent of host byte order.

inline void write_u8(std::ostream& out, std::uint8_t v) {
    out.put(static_cast<char>(v));
}

inline void write_u16(std::ostream& out, std::uint16_t v) {
    for (int i = 0; i < 2; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void write_f64(std::ostream& out, double v) {
    write_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline void write_f64_array(std::ostream& out, std::span<const double> values) {
    for (double v : values) write_f64(out, v);
}

inline void write_bytes(std::ostream& out, std::span<const std::uint8_t> bytes) {
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline void write_string(std::ostream& out, const std::string& s) {
    if (s.size() > 0xFFFF) throw DataError("binio: string too long");
    write_u16(out, static_cast<std::uint16_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::uint8_t read_u8(std::istream& in) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw DataError("binio: unexpected end of file");
    return static_cast<std::uint8_t>(c);
}

inline std::uint16_t read_u16(std::istream& in) {
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(read_u8(in)) << (8 * i);
    return v;
}

inline std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(read_u8(in)) << (8 * i);
    return v;
}

inline std::uint64_t read_u64(std::istream& in) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(read_u8(in)) << (8 * i);
    return v;
}

inline double read_f64(std::istream& in) {
    return std::bit_cast<double>(read_u64(in));
}

inline std::vector<double> read_f64_array(std::istream& in, std::size_t count) {
    std::vector<double> values(count);
    for (double& v : values) v = read_f64(in);
    return values;
}

inline std::vector<std::uint8_t> read_bytes(std::istream& in, std::size_t count) {
    std::vector<std::uint8_t> bytes(count);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
        throw DataError("binio: unexpected end of file");
    return bytes;
}

inline std::string read_string(std::istream& in) {
    const std::uint16_t len = read_u16(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (static_cast<std::size_t>(in.gcount()) != len)
        throw DataError("binio: unexpected end of file");
    return s;
}

inline void expect_magic(std::istream& in, const char* magic) {
    std::string expected(magic);
    std::string got(expected.size(), '\0');
    in.read(got.data(), static_cast<std::streamsize>(expected.size()));
    if (static_cast<std::size_t>(in.gcount()) != expected.size() || got != expected)
        throw DataError("bad magic: expected '" + expected + "'");
}

} // namespace svlm::binio
