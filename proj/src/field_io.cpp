#include "torus/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string_view>

#include "torus/error.hpp"

namespace torus {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 3 * 4 + 4 * 8;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    out.insert(out.end(), raw, raw + sizeof(T));
}

template <typename T>
T get_le(const std::uint8_t* in) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, in, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
}

}  // namespace

std::vector<std::uint8_t> encode_torf(const RealField& f) {
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderBytes + 8 * f.samples.size());
    for (char c : std::string_view("TORF")) out.push_back(static_cast<std::uint8_t>(c));
    put_le<std::uint32_t>(out, kTorfVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.n1()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.n2()));
    const LatticeBasis& b = f.grid.basis();
    put_le(out, b.xi().x);
    put_le(out, b.xi().y);
    put_le(out, b.eta().x);
    put_le(out, b.eta().y);
    for (double v : f.samples) put_le(out, v);
    return out;
}

RealField decode_torf(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), "TORF", 4) != 0) {
        throw Error(ErrorCode::IoError, "not a TORF snapshot");
    }
    const std::uint8_t* p = bytes.data() + 4;
    const auto version = get_le<std::uint32_t>(p);
    if (version != kTorfVersion) {
        throw Error(ErrorCode::IoError, "unsupported TORF version " + std::to_string(version));
    }
    const auto n1 = get_le<std::uint32_t>(p + 4);
    const auto n2 = get_le<std::uint32_t>(p + 8);
    p += 12;
    const double xi1 = get_le<double>(p);
    const double xi2 = get_le<double>(p + 8);
    const double eta1 = get_le<double>(p + 16);
    const double eta2 = get_le<double>(p + 24);
    p += 32;
    const std::size_t count = static_cast<std::size_t>(n1) * n2;
    if (bytes.size() != kHeaderBytes + 8 * count) {
        throw Error(ErrorCode::IoError, "TORF payload size does not match header");
    }
    Grid grid(LatticeBasis({xi1, xi2}, {eta1, eta2}), static_cast<int>(n1), static_cast<int>(n2));
    RealField f(grid);
    for (std::size_t i = 0; i < count; ++i) f.samples[i] = get_le<double>(p + 8 * i);
    return f;
}

void write_torf(const std::filesystem::path& path, const RealField& f) {
    const std::vector<std::uint8_t> bytes = encode_torf(f);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

RealField read_torf(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_torf(bytes);
}

}  // namespace torus
