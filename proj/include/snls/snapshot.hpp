#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "snls/error.hpp"
#include "snls/grid.hpp"

namespace snls {

// Binary snapshot layout, all little-endian:
//   "SNLS" | u32 version | u32 n | f64 half_width | f64 b | f64 t | n*n x (f64 re, f64 im)
// Samples are row-major, (i, j) -> u(x_i, y_j).

inline constexpr std::array<char, 4> snapshot_magic{'S', 'N', 'L', 'S'};
inline constexpr std::uint32_t snapshot_version = 1;
inline constexpr std::size_t snapshot_header_bytes = 36;

class SnapshotError : public Error {
public:
    enum class Kind { BadMagic, VersionMismatch, Truncated, TrailingData, BadHeader, Io };

    SnapshotError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct SnapshotMeta {
    double b = 0.0;
    double t = 0.0;
};

struct Snapshot {
    Field u;
    SnapshotMeta meta;
};

namespace detail {

template <class T>
void put_le(std::vector<std::uint8_t>& out, T value) {
    static_assert(sizeof(T) == 4 || sizeof(T) == 8);
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    const auto bits = std::bit_cast<U>(value);
    for (std::size_t k = 0; k < sizeof(T); ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
}

template <class T>
T get_le(std::span<const std::uint8_t> in, std::size_t offset) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U bits = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k) bits |= static_cast<U>(in[offset + k]) << (8 * k);
    return std::bit_cast<T>(bits);
}

} // namespace detail

inline std::vector<std::uint8_t> write_snapshot(const Field& u, const SnapshotMeta& meta) {
    std::vector<std::uint8_t> out;
    out.reserve(snapshot_header_bytes + 16 * u.size());
    out.insert(out.end(), snapshot_magic.begin(), snapshot_magic.end());
    detail::put_le(out, snapshot_version);
    detail::put_le(out, static_cast<std::uint32_t>(u.n()));
    detail::put_le(out, u.grid().half_width());
    detail::put_le(out, meta.b);
    detail::put_le(out, meta.t);
    for (const auto& v : u.values()) {
        detail::put_le(out, v.real());
        detail::put_le(out, v.imag());
    }
    return out;
}

inline Snapshot read_snapshot(std::span<const std::uint8_t> bytes) {
    using Kind = SnapshotError::Kind;
    if (bytes.size() < 4 || std::memcmp(bytes.data(), snapshot_magic.data(), 4) != 0) {
        throw SnapshotError(Kind::BadMagic, "bad magic: not an SNLS snapshot");
    }
    if (bytes.size() < snapshot_header_bytes) {
        throw SnapshotError(Kind::Truncated, "truncated payload: header is " + std::to_string(bytes.size()) + " bytes");
    }
    const auto version = detail::get_le<std::uint32_t>(bytes, 4);
    if (version != snapshot_version) {
        throw SnapshotError(Kind::VersionMismatch, "version mismatch: file has " + std::to_string(version) +
                                                       ", expected " + std::to_string(snapshot_version));
    }
    const auto n = detail::get_le<std::uint32_t>(bytes, 8);
    const auto half_width = detail::get_le<double>(bytes, 12);
    SnapshotMeta meta{detail::get_le<double>(bytes, 20), detail::get_le<double>(bytes, 28)};

    GridSpec grid = [&] {
        try {
            return make_grid(static_cast<int>(n), half_width);
        } catch (const DomainError& e) {
            throw SnapshotError(Kind::BadHeader, std::string("bad header: ") + e.what());
        }
    }();
    const std::size_t expected = snapshot_header_bytes + 16 * grid.size();
    if (bytes.size() < expected) {
        throw SnapshotError(Kind::Truncated, "truncated payload: " + std::to_string(bytes.size()) + " of " +
                                                 std::to_string(expected) + " bytes");
    }
    if (bytes.size() > expected) {
        throw SnapshotError(Kind::TrailingData, "trailing data: " + std::to_string(bytes.size() - expected) +
                                                    " extra bytes");
    }
    Field u(grid);
    auto values = u.values();
    for (std::size_t k = 0; k < values.size(); ++k) {
        const std::size_t off = snapshot_header_bytes + 16 * k;
        values[k] = cplx(detail::get_le<double>(bytes, off), detail::get_le<double>(bytes, off + 8));
    }
    return {std::move(u), meta};
}

inline void save_snapshot(const std::string& path, const Field& u, const SnapshotMeta& meta) {
    const auto bytes = write_snapshot(u, meta);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw SnapshotError(SnapshotError::Kind::Io, "cannot open " + path + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw SnapshotError(SnapshotError::Kind::Io, "write failed for " + path);
}

inline Snapshot load_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw SnapshotError(SnapshotError::Kind::Io, "cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return read_snapshot(bytes);
}

} // namespace snls
