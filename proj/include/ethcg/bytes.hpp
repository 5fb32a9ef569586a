// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ethcg/errors.hpp"

namespace ethcg {

using u256 = boost::multiprecision::uint256_t;

namespace detail {

inline int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

inline constexpr char kHexDigits[] = "0123456789abcdef";

}  // namespace detail

// Byte string from 0x-prefixed hex, mixed case accepted; digit count must be even.
inline std::vector<uint8_t> bytes_from_hex(std::string_view hex) {
    if (hex.size() < 2 || hex[0] != '0' || (hex[1] != 'x' && hex[1] != 'X')) {
        throw ParseError("byte string must be 0x-prefixed hex: '" + std::string(hex) + "'");
    }
    std::string_view digits = hex.substr(2);
    if (digits.size() % 2 != 0) {
        throw ParseError("byte string has odd hex digit count: '" + std::string(hex) + "'");
    }
    std::vector<uint8_t> out;
    out.reserve(digits.size() / 2);
    for (std::size_t i = 0; i < digits.size(); i += 2) {
        int hi = detail::hex_nibble(digits[i]);
        int lo = detail::hex_nibble(digits[i + 1]);
        if (hi < 0 || lo < 0) {
            throw ParseError("invalid hex digit in '" + std::string(hex) + "'");
        }
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

inline std::string hex_from_bytes(std::span<const uint8_t> bytes) {
    std::string out = "0x";
    out.reserve(2 + bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(detail::kHexDigits[b >> 4]);
        out.push_back(detail::kHexDigits[b & 0xF]);
    }
    return out;
}

// 20-byte account address; canonical rendering is 0x-prefixed lowercase hex.
struct Address {
    std::array<uint8_t, 20> bytes{};

    auto operator<=>(const Address&) const = default;

    static Address from_hex(std::string_view hex) {
        auto raw = bytes_from_hex(hex);
        if (raw.size() != 20) {
            throw ParseError("address must be 20 bytes: '" + std::string(hex) + "'");
        }
        Address a;
        std::copy(raw.begin(), raw.end(), a.bytes.begin());
        return a;
    }

    std::string to_hex() const { return hex_from_bytes(bytes); }
};

// 32-byte word (storage slot keys/values, transaction hashes). Shorter hex
// quantities are left-zero-padded to the full width.
struct Bytes32 {
    std::array<uint8_t, 32> bytes{};

    auto operator<=>(const Bytes32&) const = default;

    static Bytes32 from_hex(std::string_view hex) {
        if (hex.size() < 2 || hex[0] != '0' || (hex[1] != 'x' && hex[1] != 'X')) {
            throw ParseError("32-byte value must be 0x-prefixed hex: '" + std::string(hex) + "'");
        }
        std::string_view digits = hex.substr(2);
        if (digits.size() > 64) {
            throw ParseError("value wider than 32 bytes: '" + std::string(hex) + "'");
        }
        Bytes32 w;
        std::size_t byte_pos = 32;
        std::size_t i = digits.size();
        while (i > 0) {
            int lo = detail::hex_nibble(digits[--i]);
            int hi = i > 0 ? detail::hex_nibble(digits[i - 1]) : 0;
            if (i > 0) --i;
            if (hi < 0 || lo < 0) {
                throw ParseError("invalid hex digit in '" + std::string(hex) + "'");
            }
            w.bytes[--byte_pos] = static_cast<uint8_t>((hi << 4) | lo);
        }
        return w;
    }

    std::string to_hex() const { return hex_from_bytes(bytes); }
};

using Hash32 = Bytes32;

// Unsigned quantity from either 0x-hex or decimal string encoding.
inline uint64_t parse_u64_quantity(std::string_view s) {
    if (s.empty()) throw ParseError("empty numeric quantity");
    uint64_t value = 0;
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        std::string_view digits = s.substr(2);
        if (digits.empty()) return 0;
        for (char c : digits) {
            int n = detail::hex_nibble(c);
            if (n < 0) throw ParseError("invalid hex quantity: '" + std::string(s) + "'");
            if (value > (UINT64_MAX >> 4)) throw ParseError("quantity overflows 64 bits: '" + std::string(s) + "'");
            value = (value << 4) | static_cast<uint64_t>(n);
        }
        return value;
    }
    for (char c : s) {
        if (c < '0' || c > '9') throw ParseError("invalid decimal quantity: '" + std::string(s) + "'");
        uint64_t digit = static_cast<uint64_t>(c - '0');
        if (value > (UINT64_MAX - digit) / 10) throw ParseError("quantity overflows 64 bits: '" + std::string(s) + "'");
        value = value * 10 + digit;
    }
    return value;
}

inline u256 parse_u256_quantity(std::string_view s) {
    if (s.empty()) throw ParseError("empty numeric quantity");
    bool is_hex = s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
    if (is_hex && s.size() > 2 + 64) {
        throw ParseError("quantity overflows 256 bits: '" + std::string(s) + "'");
    }
    try {
        if (is_hex) {
            if (s.size() == 2) return u256(0);
            return u256("0x" + std::string(s.substr(2)));
        }
        // Parse decimals unbounded first so overflow is an error, not a wrap.
        boost::multiprecision::cpp_int wide{std::string(s)};
        if (wide > boost::multiprecision::cpp_int((std::numeric_limits<u256>::max)())) {
            throw ParseError("quantity overflows 256 bits: '" + std::string(s) + "'");
        }
        return u256(wide);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("invalid 256-bit quantity: '" + std::string(s) + "'");
    }
}

// Minimal lowercase 0x-hex rendering, as used for JSON-RPC quantities.
inline std::string to_hex_quantity(uint64_t value) {
    if (value == 0) return "0x0";
    char buf[16];
    int pos = 16;
    while (value > 0) {
        buf[--pos] = detail::kHexDigits[value & 0xF];
        value >>= 4;
    }
    return "0x" + std::string(buf + pos, 16 - pos);
}

inline std::string to_hex_quantity(const u256& value) {
    std::string digits = value.str(0, std::ios_base::hex);
    std::transform(digits.begin(), digits.end(), digits.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return "0x" + digits;
}

inline uint64_t fnv1a64(std::span<const uint8_t> data, uint64_t seed = 0xcbf29ce484222325ULL) {
    uint64_t h = seed;
    for (uint8_t b : data) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Deterministic stand-in address for frames whose target is absent in the
// tracer output (failed CREATE): derived from the caller and the frame path.
inline Address synthetic_address(const Address& from, std::span<const uint32_t> frame_path) {
    uint64_t h = fnv1a64(from.bytes);
    for (uint32_t idx : frame_path) {
        std::array<uint8_t, 4> le{static_cast<uint8_t>(idx), static_cast<uint8_t>(idx >> 8),
                                  static_cast<uint8_t>(idx >> 16), static_cast<uint8_t>(idx >> 24)};
        h = fnv1a64(le, h);
    }
    Address a;
    uint64_t state = h;
    for (std::size_t i = 0; i < a.bytes.size(); ++i) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        a.bytes[i] = static_cast<uint8_t>(state >> 56);
    }
    return a;
}

}  // namespace ethcg
