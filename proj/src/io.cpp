#include "fbmatch/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

namespace fbmatch {

namespace {

constexpr char kMagic[4] = {'F', 'B', 'T', '1'};
constexpr std::uint8_t kDtypeF32 = 1;
constexpr std::uint32_t kRank = 3;

void put_u32_le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) |
           (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoFailure("cannot open file for reading: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoFailure("read error on " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoFailure("cannot open file for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out)
        throw IoFailure("write error on " + path.string());
}

}  // namespace

Tensor3 load_tensor(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    if (bytes.size() < 21)
        throw TruncatedFile("FBT header truncated (" + std::to_string(bytes.size()) +
                            " bytes, need 21): " + path.string());
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (std::memcmp(p, kMagic, 4) != 0)
        throw BadMagic("bad magic \"" + bytes.substr(0, 4) + "\" (want \"FBT1\"): " +
                       path.string());
    const std::uint8_t dtype = p[4];
    if (dtype != kDtypeF32)
        throw UnsupportedDtype("dtype code " + std::to_string(dtype) +
                               " unsupported (only 1 = f32): " + path.string());
    const std::uint32_t rank = get_u32_le(p + 5);
    if (rank != kRank)
        throw UnsupportedDtype("rank " + std::to_string(rank) +
                               " unsupported (only rank 3): " + path.string());
    const std::uint32_t h = get_u32_le(p + 9);
    const std::uint32_t w = get_u32_le(p + 13);
    const std::uint32_t c = get_u32_le(p + 17);
    const std::uint64_t count = static_cast<std::uint64_t>(h) * w * c;
    if (bytes.size() != 21 + count * 4)
        throw TruncatedFile("FBT payload has " + std::to_string(bytes.size() - 21) +
                            " bytes, dims declare " + std::to_string(count * 4) + ": " +
                            path.string());

    Tensor3 t(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c));
    static_assert(std::endian::native == std::endian::little,
                  "f32 payload decode assumes a little-endian host");
    std::memcpy(t.data.data(), bytes.data() + 21, count * 4);
    return t;
}

void save_tensor(const Tensor3& t, const std::filesystem::path& path) {
    std::string out;
    out.reserve(21 + t.data.size() * 4);
    out.append(kMagic, 4);
    out.push_back(static_cast<char>(kDtypeF32));
    put_u32_le(out, kRank);
    put_u32_le(out, static_cast<std::uint32_t>(t.height));
    put_u32_le(out, static_cast<std::uint32_t>(t.width));
    put_u32_le(out, static_cast<std::uint32_t>(t.channels));
    const std::size_t header = out.size();
    out.resize(header + t.data.size() * 4);
    std::memcpy(out.data() + header, t.data.data(), t.data.size() * 4);
    write_file(path, out);
}

namespace {

// Skips PGM whitespace and '#' comments, then parses one decimal token.
int parse_pgm_int(const std::string& bytes, std::size_t& pos, const char* field,
                  const std::filesystem::path& path) {
    while (pos < bytes.size()) {
        const char ch = bytes[pos];
        if (ch == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= bytes.size() || bytes[pos] < '0' || bytes[pos] > '9')
        throw TruncatedFile(std::string("PGM header ends before ") + field + ": " +
                            path.string());
    long value = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
        value = value * 10 + (bytes[pos] - '0');
        if (value > std::numeric_limits<int>::max())
            throw BadMagic(std::string("PGM ") + field + " out of range: " + path.string());
        ++pos;
    }
    return static_cast<int>(value);
}

}  // namespace

ObjectMask load_mask(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    if (bytes.size() < 2)
        throw TruncatedFile("PGM header truncated: " + path.string());
    if (bytes[0] != 'P' || bytes[1] != '5')
        throw BadMagic("bad magic \"" + bytes.substr(0, 2) + "\" (want binary \"P5\"): " +
                       path.string());
    std::size_t pos = 2;
    const int w = parse_pgm_int(bytes, pos, "width", path);
    const int h = parse_pgm_int(bytes, pos, "height", path);
    const int maxval = parse_pgm_int(bytes, pos, "maxval", path);
    if (maxval <= 0 || maxval > 65535)
        throw BadMagic("PGM maxval " + std::to_string(maxval) +
                       " out of range [1, 65535]: " + path.string());
    // Exactly one whitespace byte separates maxval from the sample data.
    if (pos >= bytes.size())
        throw TruncatedFile("PGM ends after maxval: " + path.string());
    ++pos;

    const std::size_t count = static_cast<std::size_t>(h) * w;
    const int bytes_per_sample = maxval > 255 ? 2 : 1;
    if (bytes.size() - pos < count * bytes_per_sample)
        throw TruncatedFile("PGM sample data truncated (" +
                            std::to_string(bytes.size() - pos) + " bytes, need " +
                            std::to_string(count * bytes_per_sample) + "): " +
                            path.string());

    ObjectMask m(h, w);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
    if (bytes_per_sample == 1) {
        for (std::size_t i = 0; i < count; ++i) m.labels[i] = p[i];
    } else {
        for (std::size_t i = 0; i < count; ++i)
            m.labels[i] = static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]);
    }
    return m;
}

void save_mask(const ObjectMask& m, const std::filesystem::path& path) {
    const std::uint16_t max_label =
        m.labels.empty() ? 0 : *std::max_element(m.labels.begin(), m.labels.end());
    const int maxval = max_label > 255 ? 65535 : 255;

    std::string out = "P5\n" + std::to_string(m.width) + " " +
                      std::to_string(m.height) + "\n" + std::to_string(maxval) + "\n";
    if (maxval == 255) {
        for (std::uint16_t v : m.labels) out.push_back(static_cast<char>(v));
    } else {
        for (std::uint16_t v : m.labels) {
            out.push_back(static_cast<char>(v >> 8));
            out.push_back(static_cast<char>(v & 0xff));
        }
    }
    write_file(path, out);
}

}  // namespace fbmatch
