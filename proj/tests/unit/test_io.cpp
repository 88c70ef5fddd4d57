#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "diytab/image_io.hpp"
#include "test_util.hpp"

using namespace diytab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("diytab_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Png, GrayAndColorRoundTrip) {
    const auto dir = scratch_dir("png");
    std::mt19937_64 rng(127);
    const Raster gray = random_gray(37, 23, rng);
    write_png((dir / "g.png").string(), gray);
    EXPECT_EQ(read_png((dir / "g.png").string()), gray);

    Raster color(5, 4, 3);
    for (auto& v : color.data()) v = static_cast<std::uint8_t>(rng());
    write_png((dir / "c.png").string(), color);
    EXPECT_EQ(read_png((dir / "c.png").string()), color);
}

TEST(Png, Errors) {
    const auto dir = scratch_dir("png_err");
    EXPECT_THROW(read_png((dir / "missing.png").string()), IoError);
    std::ofstream((dir / "junk.png").string()) << "not a png";
    EXPECT_THROW(read_png((dir / "junk.png").string()), IoError);
    EXPECT_THROW(write_png((dir / "no" / "such" / "dir.png").string(), Raster(2, 2)), IoError);
}

TEST(Jpeg, EncodesMagic) {
    const auto bytes = encode_jpeg(Raster(16, 16, 1, 128));
    ASSERT_GT(bytes.size(), 4u);
    EXPECT_EQ(bytes[0], 0xFF);
    EXPECT_EQ(bytes[1], 0xD8);
}

TEST(Y4m, RoundTrip) {
    const auto dir = scratch_dir("y4m");
    const auto path = (dir / "v.y4m").string();
    std::mt19937_64 rng(131);
    std::vector<Raster> frames;
    for (int i = 0; i < 3; ++i) frames.push_back(random_gray(16, 10, rng));
    {
        Y4mWriter w(path, 16, 10);
        for (const auto& f : frames) w.write(f);
        w.close();
    }
    Y4mReader r(path);
    EXPECT_EQ(r.header().width, 16);
    EXPECT_EQ(r.header().height, 10);
    for (const auto& f : frames) {
        auto got = r.next();
        ASSERT_TRUE(got);
        EXPECT_EQ(*got, f);
    }
    EXPECT_FALSE(r.next());
}

TEST(Y4m, RejectsBadStreams) {
    const auto dir = scratch_dir("y4m_err");
    std::ofstream((dir / "a.y4m").string()) << "NOTY4M W4 H4\n";
    EXPECT_THROW(Y4mReader((dir / "a.y4m").string()), IoError);
    std::ofstream((dir / "b.y4m").string()) << "YUV4MPEG2 W4 H4 F30:1 C411\n";
    EXPECT_THROW(Y4mReader((dir / "b.y4m").string()), IoError);
    std::ofstream((dir / "t.y4m").string()) << "YUV4MPEG2 W4 H4 F30:1 Cmono\nFRAME\nabc";
    Y4mReader truncated((dir / "t.y4m").string());
    EXPECT_THROW(truncated.next(), IoError);
    Y4mWriter w((dir / "c.y4m").string(), 4, 4);
    EXPECT_THROW(w.write(Raster(3, 4)), DimensionMismatch);
}
