#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <fstream>
#include <string>

#include "fbmatch/errors.hpp"
#include "fbmatch/io.hpp"
#include "fbmatch/resample.hpp"
#include "fbmatch/rng.hpp"
#include "fbmatch/tensor.hpp"
#include "helpers.hpp"

using namespace fbmatch;
using testutil::TempDir;

namespace {

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("tensor round trip is bitwise exact") {
    TempDir dir;
    Pcg32 rng(11);
    const Tensor3 t = testutil::random_tensor(7, 5, 3, rng);
    save_tensor(t, dir.file("t.fbt"));
    const Tensor3 back = load_tensor(dir.file("t.fbt"));
    CHECK(testutil::bitwise_equal(t, back));
}

TEST_CASE("tensor header layout") {
    TempDir dir;
    Tensor3 t(1, 1, 1);
    t.data[0] = 42.0f;
    save_tensor(t, dir.file("one.fbt"));
    const std::string bytes = read_bytes(dir.file("one.fbt"));
    CHECK(bytes.size() == 25);  // 21-byte header + one f32
    CHECK(bytes.substr(0, 4) == "FBT1");
    CHECK(bytes[4] == 1);  // dtype f32
    // rank 3, little-endian
    CHECK(static_cast<unsigned char>(bytes[5]) == 3);
    CHECK(static_cast<unsigned char>(bytes[6]) == 0);
}

TEST_CASE("known payload loads verbatim") {
    TempDir dir;
    const Tensor3 t = Tensor3::from_data(2, 2, 1, {0.0f, 1.0f, 2.0f, 3.0f});
    save_tensor(t, dir.file("p.fbt"));
    const Tensor3 back = load_tensor(dir.file("p.fbt"));
    CHECK(back.data == std::vector<float>{0.0f, 1.0f, 2.0f, 3.0f});
}

TEST_CASE("zero-area tensor is legal") {
    TempDir dir;
    const Tensor3 t(0, 4, 2);
    save_tensor(t, dir.file("z.fbt"));
    CHECK(read_bytes(dir.file("z.fbt")).size() == 21);
    const Tensor3 back = load_tensor(dir.file("z.fbt"));
    CHECK(back.height == 0);
    CHECK(back.width == 4);
    CHECK(back.channels == 2);
}

TEST_CASE("tensor loading rejects malformed containers") {
    TempDir dir;
    Tensor3 t(1, 1, 1);
    save_tensor(t, dir.file("ok.fbt"));
    std::string good = read_bytes(dir.file("ok.fbt"));

    std::string bad_magic = good;
    bad_magic.replace(0, 4, "XXXX");
    write_bytes(dir.file("m.fbt"), bad_magic);
    CHECK_THROWS_AS(load_tensor(dir.file("m.fbt")), BadMagic);

    std::string bad_dtype = good;
    bad_dtype[4] = 2;
    write_bytes(dir.file("d.fbt"), bad_dtype);
    CHECK_THROWS_AS(load_tensor(dir.file("d.fbt")), UnsupportedDtype);

    std::string bad_rank = good;
    bad_rank[5] = 2;
    write_bytes(dir.file("r.fbt"), bad_rank);
    CHECK_THROWS_AS(load_tensor(dir.file("r.fbt")), UnsupportedDtype);

    write_bytes(dir.file("t.fbt"), good.substr(0, 23));
    CHECK_THROWS_AS(load_tensor(dir.file("t.fbt")), TruncatedFile);

    write_bytes(dir.file("h.fbt"), good.substr(0, 10));
    CHECK_THROWS_AS(load_tensor(dir.file("h.fbt")), TruncatedFile);

    CHECK_THROWS_AS(load_tensor(dir.file("missing.fbt")), IoFailure);
    CHECK_THROWS_AS(save_tensor(t, dir.path() / "no_dir" / "x.fbt"), IoFailure);
}

TEST_CASE("mask round trip, 8- and 16-bit") {
    TempDir dir;
    ObjectMask small = ObjectMask::from_labels(2, 3, {0, 1, 2, 3, 200, 255});
    save_mask(small, dir.file("s.pgm"));
    CHECK(load_mask(dir.file("s.pgm")).labels == small.labels);

    ObjectMask wide = ObjectMask::from_labels(1, 3, {0, 300, 65535});
    save_mask(wide, dir.file("w.pgm"));
    const ObjectMask back = load_mask(dir.file("w.pgm"));
    CHECK(back.labels == wide.labels);
}

TEST_CASE("mask loading follows the binary PGM format") {
    TempDir dir;
    // 2x2, maxval 255, with a comment in the header
    write_bytes(dir.file("ok.pgm"),
                std::string("P5\n# c\n2 2\n255\n") +
                    std::string("\x00\x01\x01\x00", 4));
    const ObjectMask m = load_mask(dir.file("ok.pgm"));
    CHECK(m.labels == std::vector<std::uint16_t>{0, 1, 1, 0});

    // 16-bit samples are big-endian
    write_bytes(dir.file("be.pgm"),
                std::string("P5\n1 1\n65535\n") + std::string("\x01\x02", 2));
    CHECK(load_mask(dir.file("be.pgm")).labels[0] == 0x0102);

    write_bytes(dir.file("p2.pgm"), "P2\n1 1\n255\n0\n");
    CHECK_THROWS_AS(load_mask(dir.file("p2.pgm")), BadMagic);

    write_bytes(dir.file("mx.pgm"), "P5\n1 1\n70000\n\x00");
    CHECK_THROWS_AS(load_mask(dir.file("mx.pgm")), BadMagic);

    write_bytes(dir.file("tr.pgm"),
                std::string("P5\n2 2\n255\n") + std::string("\x01\x01", 2));
    CHECK_THROWS_AS(load_mask(dir.file("tr.pgm")), TruncatedFile);
}

TEST_CASE("partition_pixels splits a frame per object") {
    const ObjectMask m = ObjectMask::from_labels(2, 2, {1, 1, 0, 0});
    const PixelPartition p = partition_pixels(m, 1);
    CHECK(p.fg == std::vector<PixelCoord>{{0, 0}, {1, 0}});
    CHECK(p.bg == std::vector<PixelCoord>{{0, 1}, {1, 1}});

    const PixelPartition absent = partition_pixels(ObjectMask(2, 2), 1);
    CHECK(absent.fg.empty());
    CHECK(absent.bg.size() == 4);

    // other objects count as background
    const ObjectMask two = ObjectMask::from_labels(2, 2, {1, 2, 2, 1});
    const PixelPartition p2 = partition_pixels(two, 2);
    CHECK(p2.fg == std::vector<PixelCoord>{{1, 0}, {0, 1}});
    CHECK(p2.bg == std::vector<PixelCoord>{{0, 0}, {1, 1}});
}

TEST_CASE("partition covers every pixel exactly once") {
    Pcg32 rng(5);
    const ObjectMask m = testutil::random_mask(9, 7, 3, rng);
    for (int id = 1; id <= 3; ++id) {
        const PixelPartition p = partition_pixels(m, id);
        CHECK(p.fg.size() + p.bg.size() == 63);
    }
}

TEST_CASE("embedding downsampling") {
    Pcg32 rng(17);
    const Tensor3 t = testutil::random_tensor(6, 9, 2, rng);
    CHECK(testutil::bitwise_equal(downsample_embedding(t, 1), t));

    Tensor3 c(2, 2, 1, 3.0f);
    const Tensor3 half = downsample_embedding(c, 2);
    CHECK(half.height == 1);
    CHECK(half.width == 1);
    CHECK(half.at(0, 0, 0) == 3.0f);

    // 1x4 [0,2,4,6] at factor 2: sample centers hit 0.5 and 2.5
    const Tensor3 row = Tensor3::from_data(1, 4, 1, {0.0f, 2.0f, 4.0f, 6.0f});
    const Tensor3 down = downsample_embedding(row, 2);
    CHECK(down.width == 2);
    CHECK(down.at(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(down.at(0, 1, 0) == doctest::Approx(5.0).epsilon(1e-6));

    CHECK_THROWS_AS(downsample_embedding(t, 0), ZeroFactor);

    // constant stays constant for any factor
    Tensor3 k(7, 11, 3, -1.25f);
    for (int f : {2, 3, 5}) {
        const Tensor3 d = downsample_embedding(k, f);
        for (float v : d.data) CHECK(v == -1.25f);
    }
}

TEST_CASE("mask downsampling") {
    const ObjectMask m = ObjectMask::from_labels(2, 2, {1, 1, 2, 2});
    CHECK(downsample_mask(m, 1).labels == m.labels);

    // the 1x1 result's sample center ties among all four pixels; the
    // smallest row-major index wins
    const ObjectMask one = downsample_mask(m, 2);
    CHECK(one.labels == std::vector<std::uint16_t>{1});

    const ObjectMask quad = ObjectMask::from_labels(
        4, 4, {1, 1, 2, 2, 1, 1, 2, 2, 3, 3, 4, 4, 3, 3, 4, 4});
    const ObjectMask q = downsample_mask(quad, 2);
    REQUIRE(q.height == 2);
    CHECK(q.labels == std::vector<std::uint16_t>{1, 2, 3, 4});

    CHECK_THROWS_AS(downsample_mask(m, 0), ZeroFactor);

    // resampled labels never leave the original label set
    Pcg32 rng(23);
    const ObjectMask r = testutil::random_mask(10, 13, 3, rng);
    for (int f : {2, 3, 4}) {
        for (std::uint16_t v : downsample_mask(r, f).labels) CHECK(v <= 3);
    }
}

TEST_CASE("resize identity and flips") {
    Pcg32 rng(29);
    const Tensor3 t = testutil::random_tensor(5, 8, 2, rng);
    CHECK(testutil::bitwise_equal(resize_bilinear(t, 5, 8), t));

    const Tensor3 f = flip_horizontal(t);
    CHECK(f.at(1, 0, 1) == t.at(1, 7, 1));
    CHECK(testutil::bitwise_equal(flip_horizontal(f), t));

    const ObjectMask m = testutil::random_mask(5, 8, 4, rng);
    CHECK(flip_horizontal(flip_horizontal(m)).labels == m.labels);
    CHECK(resize_nearest(m, 5, 8).labels == m.labels);
}

TEST_CASE("object_ids lists distinct non-zero labels ascending") {
    const ObjectMask m = ObjectMask::from_labels(2, 3, {5, 0, 2, 2, 5, 0});
    CHECK(m.object_ids() == std::vector<int>{2, 5});
    CHECK(ObjectMask(3, 3).object_ids().empty());
}
