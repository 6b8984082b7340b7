// Command-line front end: matching, benchmarking, label propagation,
// metric evaluation, crop sampling and tensor inspection.
//
// Exit codes: 0 success, 1 flag/usage problems, 2 file I/O or container
// format problems, 3 dimension/validation problems.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbmatch/bench.hpp"
#include "fbmatch/errors.hpp"
#include "fbmatch/instance.hpp"
#include "fbmatch/io.hpp"
#include "fbmatch/matching.hpp"
#include "fbmatch/metrics.hpp"
#include "fbmatch/pipeline.hpp"
#include "fbmatch/sampling.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct MapStats {
    float min = 0.0f;
    float max = 0.0f;
    double mean = 0.0;
};

MapStats stats_of(const fbmatch::Tensor3& t) {
    MapStats s;
    if (t.data.empty()) return s;
    s.min = *std::min_element(t.data.begin(), t.data.end());
    s.max = *std::max_element(t.data.begin(), t.data.end());
    double sum = 0.0;
    for (const float v : t.data) sum += v;
    s.mean = sum / static_cast<double>(t.data.size());
    return s;
}

void ensure_parent_dir(const fs::path& file) {
    const fs::path dir = file.parent_path();
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw fbmatch::IoFailure("cannot create directory " + dir.string() +
                                 ": " + ec.message());
}

void write_map(const fbmatch::Tensor3& map, const fs::path& file,
               const std::string& name) {
    ensure_parent_dir(file);
    fbmatch::save_tensor(map, file);
    const MapStats s = stats_of(map);
    json line{{"map", name},
              {"file", file.string()},
              {"min", s.min},
              {"max", s.max},
              {"mean", s.mean}};
    std::cout << line.dump() << "\n";
}

struct MatchArgs {
    std::string ref_embed, ref_mask, prev_embed, prev_mask, cur_embed, out;
    int object = 1;
    std::vector<int> windows;
    int atrous = 1;
    int atrous_origin = 0;
    float bias_fg = 0.0f;
    float bias_bg = 0.0f;
};

void run_match(const MatchArgs& a) {
    const fbmatch::Tensor3 ref = fbmatch::load_tensor(a.ref_embed);
    const fbmatch::ObjectMask ref_mask = fbmatch::load_mask(a.ref_mask);
    const fbmatch::Tensor3 prev = fbmatch::load_tensor(a.prev_embed);
    const fbmatch::ObjectMask prev_mask = fbmatch::load_mask(a.prev_mask);
    const fbmatch::Tensor3 cur = fbmatch::load_tensor(a.cur_embed);

    const fbmatch::WindowSet K = fbmatch::WindowSet::of(a.windows);
    const fbmatch::MatchParams params{a.bias_fg, a.bias_bg};
    const fbmatch::AtrousSpec atrous{a.atrous, a.atrous_origin};

    const auto t0 = std::chrono::steady_clock::now();
    const fbmatch::MatchOutput out = fbmatch::match_object(
        cur, ref, ref_mask, prev, prev_mask, a.object, K, params, atrous);
    const auto t1 = std::chrono::steady_clock::now();

    const std::string prefix = a.out;
    write_map(out.global_fg, prefix + "global_fg.fbt", "global_fg");
    write_map(out.global_bg, prefix + "global_bg.fbt", "global_bg");
    for (std::size_t i = 0; i < out.local_fg.size(); ++i) {
        const std::string k = std::to_string(K.sizes[i]);
        write_map(out.local_fg[i], prefix + "local_fg_k" + k + ".fbt",
                  "local_fg_k" + k);
        write_map(out.local_bg[i], prefix + "local_bg_k" + k + ".fbt",
                  "local_bg_k" + k);
    }
    json summary{{"referred_pixels", out.referred_pixels},
                 {"elapsed_ms",
                  std::chrono::duration<double, std::milli>(t1 - t0).count()},
                 {"object", a.object},
                 {"windows", K.sizes},
                 {"atrous", a.atrous}};
    std::cout << summary.dump() << "\n";
}

struct BenchArgs {
    int height = 64, width = 64, channels = 16;
    std::vector<int> atrous_list{1, 2};
    std::vector<int> windows;
    int repeat = 5;
    std::uint64_t seed = 0;
};

void run_bench(const BenchArgs& a) {
    const auto rows = fbmatch::run_bench(a.height, a.width, a.channels,
                                         a.atrous_list, a.windows, a.repeat,
                                         a.seed);
    std::printf("kind,factor,height,width,channels,referred,median_ms,speedup_vs_dense\n");
    for (const auto& r : rows) {
        double dense = 0.0;
        for (const auto& d : rows)
            if (d.kind == r.kind && d.factor == 1) dense = d.median_ms;
        std::printf("%s,%d,%d,%d,%d,%llu,%.6f,", r.kind.c_str(), r.factor,
                    a.height, a.width, a.channels,
                    static_cast<unsigned long long>(r.referred), r.median_ms);
        if (dense > 0.0 && r.median_ms > 0.0)
            std::printf("%.3f\n", dense / r.median_ms);
        else
            std::printf("\n");
    }
}

struct PropagateArgs {
    std::string ref_embed, ref_mask, out_dir;
    std::vector<std::string> embeds;
    std::vector<int> windows;
    int atrous = 1;
    int atrous_origin = 0;
    float bias_fg = 0.0f;
    float bias_bg = 0.0f;
};

void run_propagate(const PropagateArgs& a) {
    fbmatch::Frame ref{fbmatch::load_tensor(a.ref_embed),
                       fbmatch::load_mask(a.ref_mask)};
    const std::vector<int> objects = ref.mask.object_ids();
    const fbmatch::WindowSet K = fbmatch::WindowSet::of(a.windows);
    const fbmatch::MatchParams params{a.bias_fg, a.bias_bg};
    const fbmatch::AtrousSpec atrous{a.atrous, a.atrous_origin};

    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec)
        throw fbmatch::IoFailure("cannot create directory " + a.out_dir + ": " +
                                 ec.message());

    fbmatch::Frame prev = ref;
    for (std::size_t i = 0; i < a.embeds.size(); ++i) {
        fbmatch::Tensor3 cur = fbmatch::load_tensor(a.embeds[i]);
        fbmatch::ObjectMask pred = fbmatch::nn_propagate(
            ref, prev, cur, objects, params, K, atrous);
        char name[32];
        std::snprintf(name, sizeof(name), "pred_%04zu.pgm", i + 2);
        const fs::path file = fs::path(a.out_dir) / name;
        fbmatch::save_mask(pred, file);
        json line{{"frame", i + 2}, {"file", file.string()},
                  {"objects", objects}};
        std::cout << line.dump() << "\n";
        prev = fbmatch::Frame{std::move(cur), std::move(pred)};
    }
}

struct EvalArgs {
    std::string pred_dir, gt_dir, out;
    double tol = -1.0;  // < 0: derive from frame size
};

void run_eval(const EvalArgs& a) {
    std::vector<fs::path> gt_files;
    for (const auto& entry : fs::directory_iterator(a.gt_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".pgm")
            gt_files.push_back(entry.path());
    std::sort(gt_files.begin(), gt_files.end());
    if (gt_files.empty())
        throw fbmatch::IoFailure("no .pgm masks found in " + a.gt_dir);

    std::FILE* out = stdout;
    if (!a.out.empty()) {
        ensure_parent_dir(a.out);
        out = std::fopen(a.out.c_str(), "w");
        if (!out) throw fbmatch::IoFailure("cannot open " + a.out);
    }
    std::fprintf(out, "frame,object,j,f,jf\n");
    for (const auto& gt_file : gt_files) {
        const fs::path pred_file = fs::path(a.pred_dir) / gt_file.filename();
        if (!fs::exists(pred_file)) {
            if (out != stdout) std::fclose(out);
            throw fbmatch::IoFailure("missing prediction " +
                                     pred_file.string());
        }
        const fbmatch::ObjectMask gt = fbmatch::load_mask(gt_file);
        const fbmatch::ObjectMask pred = fbmatch::load_mask(pred_file);
        const double tol = a.tol >= 0.0
                               ? a.tol
                               : fbmatch::default_boundary_tol(gt.height,
                                                               gt.width);
        std::vector<int> ids = gt.object_ids();
        for (const int id : pred.object_ids())
            if (std::find(ids.begin(), ids.end(), id) == ids.end())
                ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        for (const int id : ids) {
            const auto s = fbmatch::evaluate_masks(pred, gt, id, tol);
            std::fprintf(out, "%s,%d,%.6f,%.6f,%.6f\n",
                         gt_file.stem().string().c_str(), id, s.j, s.f, s.jf);
        }
    }
    if (out != stdout) std::fclose(out);
}

struct CropArgs {
    std::vector<std::string> embeds, masks;
    std::string out_dir;
    std::uint64_t seed = 0;
    fbmatch::CropConfig cfg;
};

void run_crop(const CropArgs& a) {
    if (a.embeds.size() != a.masks.size())
        throw fbmatch::DimensionMismatch(
            "--embeds and --masks must pair up (" +
            std::to_string(a.embeds.size()) + " vs " +
            std::to_string(a.masks.size()) + ")");
    fbmatch::FrameSequence frames;
    for (std::size_t i = 0; i < a.embeds.size(); ++i)
        frames.push_back(fbmatch::Frame{fbmatch::load_tensor(a.embeds[i]),
                                        fbmatch::load_mask(a.masks[i])});

    const fbmatch::FrameSequence cropped =
        fbmatch::balanced_random_crop(frames, a.cfg, a.seed);

    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec)
        throw fbmatch::IoFailure("cannot create directory " + a.out_dir + ": " +
                                 ec.message());
    for (std::size_t i = 0; i < cropped.size(); ++i) {
        char embed_name[32], mask_name[32];
        std::snprintf(embed_name, sizeof(embed_name), "crop_embed_%04zu.fbt", i);
        std::snprintf(mask_name, sizeof(mask_name), "crop_mask_%04zu.pgm", i);
        fbmatch::save_tensor(cropped[i].embedding,
                             fs::path(a.out_dir) / embed_name);
        fbmatch::save_mask(cropped[i].mask, fs::path(a.out_dir) / mask_name);
    }
    json line{{"frames", cropped.size()},
              {"window", {a.cfg.window_h, a.cfg.window_w}},
              {"seed", a.seed},
              {"out_dir", a.out_dir}};
    std::cout << line.dump() << "\n";
}

void run_info(const std::vector<std::string>& files) {
    for (const auto& f : files) {
        // Sniff the magic rather than trusting the extension.
        std::string head;
        {
            std::ifstream in(f, std::ios::binary);
            if (!in) throw fbmatch::IoFailure("cannot open file: " + f);
            char buf[2] = {};
            in.read(buf, 2);
            head.assign(buf, static_cast<std::size_t>(in.gcount()));
        }
        if (head == "P5") {
            const fbmatch::ObjectMask m = fbmatch::load_mask(f);
            std::printf("%s: P5 %dx%d, %zu objects\n", f.c_str(), m.height,
                        m.width, m.object_ids().size());
        } else {
            const fbmatch::Tensor3 t = fbmatch::load_tensor(f);
            std::printf("%s: FBT1 f32 %dx%dx%d, %zu values\n", f.c_str(),
                        t.height, t.width, t.channels, t.data.size());
        }
    }
}

int classify(const fbmatch::Error& e) {
    if (dynamic_cast<const fbmatch::IoFailure*>(&e) ||
        dynamic_cast<const fbmatch::BadMagic*>(&e) ||
        dynamic_cast<const fbmatch::TruncatedFile*>(&e) ||
        dynamic_cast<const fbmatch::UnsupportedDtype*>(&e))
        return 2;
    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Foreground/background embedding matching toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Read options from a key=value file ('#' starts a comment); "
                   "command-line flags take precedence");

    MatchArgs match_args;
    auto* match = app.add_subcommand(
        "match", "Write global and windowed matching maps for one object");
    match->add_option("--ref-embed", match_args.ref_embed,
                      "Reference-frame embedding (FBT)")->required();
    match->add_option("--ref-mask", match_args.ref_mask,
                      "Reference-frame mask (PGM)")->required();
    match->add_option("--prev-embed", match_args.prev_embed,
                      "Previous-frame embedding (FBT)")->required();
    match->add_option("--prev-mask", match_args.prev_mask,
                      "Previous-frame mask (PGM)")->required();
    match->add_option("--cur-embed", match_args.cur_embed,
                      "Current-frame embedding (FBT)")->required();
    match->add_option("--object", match_args.object, "Object id")
        ->required()->check(CLI::PositiveNumber);
    match->add_option("--windows", match_args.windows, "Window sizes")
        ->required()->check(CLI::PositiveNumber);
    match->add_option("--atrous", match_args.atrous, "Thinning factor")
        ->check(CLI::PositiveNumber);
    match->add_option("--atrous-origin", match_args.atrous_origin,
                      "Grid origin in [0, factor)")
        ->check(CLI::NonNegativeNumber);
    match->add_option("--bias-fg", match_args.bias_fg, "Foreground bias");
    match->add_option("--bias-bg", match_args.bias_bg, "Background bias");
    match->add_option("--out", match_args.out, "Output file prefix")->required();
    match->callback([&] { run_match(match_args); });

    BenchArgs bench_args;
    auto* bench = app.add_subcommand(
        "bench", "Time dense vs thinned matching on synthetic data (CSV)");
    bench->add_option("--height", bench_args.height, "Frame height")
        ->check(CLI::PositiveNumber);
    bench->add_option("--width", bench_args.width, "Frame width")
        ->check(CLI::PositiveNumber);
    bench->add_option("--channels", bench_args.channels, "Embedding channels")
        ->check(CLI::PositiveNumber);
    bench->add_option("--atrous-list", bench_args.atrous_list,
                      "Thinning factors to time")->check(CLI::PositiveNumber);
    bench->add_option("--windows", bench_args.windows,
                      "Window sizes (empty: skip windowed matching)")
        ->check(CLI::PositiveNumber);
    bench->add_option("--repeat", bench_args.repeat, "Runs per configuration")
        ->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_args.seed, "Input synthesis seed");
    bench->callback([&] { run_bench(bench_args); });

    PropagateArgs prop_args;
    auto* prop = app.add_subcommand(
        "propagate", "Nearest-neighbour label transfer through a sequence");
    prop->add_option("--ref-embed", prop_args.ref_embed,
                     "Reference embedding (FBT)")->required();
    prop->add_option("--ref-mask", prop_args.ref_mask,
                     "Reference mask (PGM)")->required();
    prop->add_option("--embeds", prop_args.embeds,
                     "Embeddings of the following frames, in order")
        ->required();
    prop->add_option("--out-dir", prop_args.out_dir, "Output directory")
        ->required();
    prop->add_option("--windows", prop_args.windows, "Window sizes")
        ->required()->check(CLI::PositiveNumber);
    prop->add_option("--atrous", prop_args.atrous, "Thinning factor")
        ->check(CLI::PositiveNumber);
    prop->add_option("--atrous-origin", prop_args.atrous_origin,
                     "Grid origin in [0, factor)")
        ->check(CLI::NonNegativeNumber);
    prop->add_option("--bias-fg", prop_args.bias_fg, "Foreground bias");
    prop->add_option("--bias-bg", prop_args.bias_bg, "Background bias");
    prop->callback([&] { run_propagate(prop_args); });

    EvalArgs eval_args;
    auto* eval = app.add_subcommand(
        "eval", "Region/boundary scores for prediction vs ground-truth masks");
    eval->add_option("--pred-dir", eval_args.pred_dir,
                     "Directory of predicted masks")->required();
    eval->add_option("--gt-dir", eval_args.gt_dir,
                     "Directory of ground-truth masks")->required();
    eval->add_option("--tol", eval_args.tol,
                     "Boundary tolerance in pixels (default: 0.8% of diagonal)");
    eval->add_option("--out", eval_args.out, "CSV output file (default stdout)");
    eval->callback([&] { run_eval(eval_args); });

    CropArgs crop_args;
    auto* crop = app.add_subcommand(
        "crop", "Seeded foreground-balanced crop of a frame sequence");
    crop->add_option("--embeds", crop_args.embeds, "Frame embeddings, in order")
        ->required();
    crop->add_option("--masks", crop_args.masks, "Frame masks, in order")
        ->required();
    crop->add_option("--out-dir", crop_args.out_dir, "Output directory")
        ->required();
    crop->add_option("--seed", crop_args.seed, "Draw seed");
    crop->add_option("--window-h", crop_args.cfg.window_h, "Crop height")
        ->check(CLI::PositiveNumber);
    crop->add_option("--window-w", crop_args.cfg.window_w, "Crop width")
        ->check(CLI::PositiveNumber);
    crop->add_option("--min-fg", crop_args.cfg.min_fg_pixels,
                     "Foreground-pixel threshold (-1: 1% of window)");
    crop->add_option("--max-retries", crop_args.cfg.max_retries,
                     "Draw attempts before giving up")
        ->check(CLI::PositiveNumber);
    crop->add_option("--scale-lo", crop_args.cfg.scale_lo, "Scale range low")
        ->check(CLI::PositiveNumber);
    crop->add_option("--scale-hi", crop_args.cfg.scale_hi, "Scale range high")
        ->check(CLI::PositiveNumber);
    crop->callback([&] {
        if (crop_args.cfg.scale_lo > crop_args.cfg.scale_hi)
            throw CLI::ValidationError(
                "--scale-lo must not exceed --scale-hi");
        run_crop(crop_args);
    });

    std::vector<std::string> info_files;
    auto* info = app.add_subcommand("info", "Print container header fields");
    info->add_option("files", info_files, "FBT or PGM files")->required();
    info->callback([&] { run_info(info_files); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const fbmatch::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
