#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "diytab/image_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run cli(const std::string& args) {
    static int counter = 0;
    const auto dir = fs::temp_directory_path() / "diytab_cli_capture";
    fs::create_directories(dir);
    const auto out = dir / ("out" + std::to_string(counter) + ".txt");
    const auto err = dir / ("err" + std::to_string(counter++) + ".txt");
    const std::string cmd = std::string(DIYTAB_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("diytab_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const std::string kFixtures = DIYTAB_FIXTURES;

}  // namespace

TEST(Cli, DefaultsPrintsEveryKey) {
    const auto r = cli("defaults");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("[threshold]"), std::string::npos);
    EXPECT_NE(r.out.find("ema_alpha = 0.4"), std::string::npos);
}

TEST(Cli, SynthThenRun) {
    const auto dir = scratch_dir("run");
    auto r = cli("synth --scene " + kFixtures + "/static_page.ini --frames 3 -o " + (dir / "in").string());
    ASSERT_EQ(r.code, 0) << r.err;
    r = cli("--input " + (dir / "in").string() + " --output " + (dir / "out").string() +
               " --output.mode both --threshold-window 25");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("frames 3"), std::string::npos);
    EXPECT_NE(r.out.find("total mean="), std::string::npos);
    for (const char* f : {"canvas_000002.png", "frame_000002.png", "events.jsonl"})
        EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
    EXPECT_EQ(diytab::read_png((dir / "out" / "canvas_000002.png").string()).width(), 640);
}

TEST(Cli, ConfigFileAndErrors) {
    const auto dir = scratch_dir("config");
    std::ofstream(dir / "bad.ini") << "[threshold]\nwindw = 5\n";
    auto r = cli("run -i " + dir.string() + " -o " + (dir / "out").string() + " -c " + (dir / "bad.ini").string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("threshold.windw"), std::string::npos) << r.err;

    r = cli("run -i " + dir.string() + " -o " + (dir / "out").string() + " --threshold.window 4");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("threshold.window"), std::string::npos) << r.err;

    r = cli("run -i " + dir.string() + " -o " + (dir / "out").string() + " --no-such-flag");
    EXPECT_EQ(r.code, 2);

    r = cli("run -i " + (dir / "missing").string() + " -o " + (dir / "out").string());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("missing"), std::string::npos);
}

TEST(Cli, RawVideoOutput) {
    const auto dir = scratch_dir("y4m");
    auto r = cli("synth --scene " + kFixtures + "/static_page.ini --frames 2 -o " + (dir / "in.y4m").string());
    ASSERT_EQ(r.code, 0) << r.err;
    r = cli("-i " + (dir / "in.y4m").string() + " -o " + (dir / "out.y4m").string());
    ASSERT_EQ(r.code, 0) << r.err;
    diytab::Y4mReader video((dir / "out.y4m").string());
    EXPECT_TRUE(video.next());
    EXPECT_TRUE(video.next());
    EXPECT_FALSE(video.next());
    EXPECT_TRUE(fs::exists(dir / "out_events.jsonl"));
}
