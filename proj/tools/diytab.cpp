// diytab: turn a webcam view of a sheet of paper into a clean ink canvas.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "CLI11.hpp"

#include "diytab/config.hpp"
#include "diytab/image_io.hpp"
#include "diytab/pipeline.hpp"
#include "diytab/preview.hpp"
#include "diytab/synth.hpp"

namespace fs = std::filesystem;
using namespace diytab;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;

std::string flag_for(const std::string& key) {
    std::string dashed = key;
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    std::replace(dashed.begin(), dashed.end(), '.', '-');
    return dashed == key ? "--" + key : "--" + key + ",--" + dashed;
}

bool ends_with_y4m(const std::string& path) {
    auto ext = fs::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".y4m";
}

struct RunArgs {
    std::string input, output, config, events, diagnostics;
    std::map<std::string, std::string> overrides;
};

int cmd_run(RunArgs& args) {
    PipelineConfig cfg;
    if (!args.config.empty()) cfg = load_config(args.config);
    if (ends_with_y4m(args.output) && args.overrides["output.format"].empty())
        cfg.output.format = OutputFormat::RawVideo;
    for (const auto& key : config_keys()) {
        auto it = args.overrides.find(key);
        if (it != args.overrides.end() && !it->second.empty()) apply_setting(cfg, key, it->second);
    }
    cfg.validate();

    std::unique_ptr<PreviewServer> preview;
    RunOptions opts;
    opts.input = args.input;
    opts.output = args.output;
    opts.events = args.events;
    opts.diagnostics = args.diagnostics;
    if (cfg.preview_port) {
        preview = std::make_unique<PreviewServer>(*cfg.preview_port);
        std::cerr << "preview: http://127.0.0.1:" << preview->port() << "/stream\n";
        opts.on_frame = [&preview](const Raster& frame) { preview->publish(frame); };
    }
    const RunReport report = run_pipeline(cfg, opts);
    if (preview) preview->stop();

    std::map<std::string, int> counts;
    for (const auto& e : report.events) ++counts[e.event];
    std::cout << "frames " << report.frames << "\n";
    for (const auto& [name, n] : counts) std::cout << "event " << name << " " << n << "\n";
    report.timing.report(std::cout);
    return 0;
}

struct SynthArgs {
    std::string scene, output, truth;
    int frames = 0;
    bool mirror = false;
};

int cmd_synth(const SynthArgs& args) {
    const synth::SceneSpec spec = synth::load_scene_file(args.scene);
    const synth::SceneRenderer renderer(spec);
    int frames = args.frames;
    if (frames <= 0) frames = spec.hand_path.empty() ? 1 : spec.hand_path.back().frame + 1;

    std::unique_ptr<FrameSink> sink;
    if (ends_with_y4m(args.output)) {
        const fs::path out(args.output);
        if (out.has_parent_path()) fs::create_directories(out.parent_path());
        sink = make_y4m_sink(args.output, spec.frame_width, spec.frame_height);
    } else {
        sink = make_png_sink(args.output, "frame");
    }
    for (int t = 0; t < frames; ++t) {
        const auto frame = renderer.render(t);
        sink->write(args.mirror ? flip_horizontal(frame.frame) : frame.frame, t);
    }
    sink->close();
    if (!args.truth.empty()) {
        fs::create_directories(args.truth);
        write_png((fs::path(args.truth) / "ink.png").string(), render_ink(spec.page_ink));
        std::ofstream q(fs::path(args.truth) / "quad.txt");
        for (const auto& p : spec.true_quad.corners()) q << p.x << " " << p.y << "\n";
    }
    std::cout << "wrote " << frames << " frames to " << args.output << "\n";
    return 0;
}

struct SceneArgs {
    std::string preset = "static";
    std::uint64_t seed = 1;
    int frames = 120;
    std::string output;
};

int cmd_scene(const SceneArgs& args) {
    const auto spec = args.preset == "session" ? synth::make_hand_session(args.seed, args.frames)
                                               : synth::make_static_scene(args.seed);
    const std::string text = synth::scene_to_config(spec);
    if (args.output.empty() || args.output == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream out(args.output);
    out << text;
    if (!out) throw IoError("cannot write " + args.output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Webcam paper capture: detect, rectify and accumulate handwritten ink."};
    app.require_subcommand(0, 1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Process a frame sequence (default command)");
    run_cmd->add_option("--input,-i", run.input, "Directory of numbered PNG frames, a PNG, or a .y4m file")
        ->required();
    run_cmd->add_option("--output,-o", run.output, "Output directory (PNG sequence) or .y4m file")->required();
    run_cmd->add_option("--config,-c", run.config, "Config file (INI sections mirror module names)");
    run_cmd->add_option("--events", run.events, "Event log path (JSON lines)");
    run_cmd->add_option("--diagnostics", run.diagnostics, "Write per-stage artifacts for every frame here");
    for (const auto& key : config_keys()) {
        std::string& slot = run.overrides[key];
        const std::string name = key == "preview_port" ? "--preview-port,--preview_port" : flag_for(key);
        run_cmd->add_option(name, slot, "Overrides config key " + key);
    }

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "Render a synthetic scene file to frames");
    synth_cmd->add_option("--scene,-s", synth_args.scene, "Scene file")->required()->check(CLI::ExistingFile);
    synth_cmd->add_option("--output,-o", synth_args.output, "Output directory or .y4m file")->required();
    synth_cmd->add_option("--frames,-n", synth_args.frames, "Frame count (default: through the last hand keyframe)");
    synth_cmd->add_flag("--mirror", synth_args.mirror, "Mirror frames horizontally");
    synth_cmd->add_option("--truth", synth_args.truth, "Also write ground-truth ink and quad here");

    SceneArgs scene_args;
    auto* scene_cmd = app.add_subcommand("scene", "Write a generated scene file");
    scene_cmd->add_option("--preset", scene_args.preset, "static | session")
        ->check(CLI::IsMember({"static", "session"}));
    scene_cmd->add_option("--seed", scene_args.seed, "Generator seed");
    scene_cmd->add_option("--frames", scene_args.frames, "Session length");
    scene_cmd->add_option("--output,-o", scene_args.output, "Scene file path (default stdout)");

    auto* defaults_cmd = app.add_subcommand("defaults", "Print the default config file");

    // `diytab --input ...` is shorthand for `diytab run --input ...`.
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && args[0].rfind("-", 0) == 0 && args[0] != "-h" && args[0] != "--help")
        args.insert(args.begin(), "run");
    std::reverse(args.begin(), args.end());

    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run);
        if (synth_cmd->parsed()) return cmd_synth(synth_args);
        if (scene_cmd->parsed()) return cmd_scene(scene_args);
        if (defaults_cmd->parsed()) {
            std::cout << dump_config(PipelineConfig{});
            return 0;
        }
        std::cout << app.help();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
