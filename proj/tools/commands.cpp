#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "seamweld/error.hpp"
#include "seamweld/lpam.hpp"
#include "seamweld/png_io.hpp"
#include "seamweld/serialize.hpp"
#include "seamweld/visualize.hpp"

namespace seamweld::cli {

namespace {

using nlohmann::json;

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::EmptyOverlap: return kEmptyOverlap;
        case ErrorKind::Internal: return kInternal;
        default: return kBadInput;
    }
}

// guard so a failure can never leave a half-written output behind
void commit(const std::string& tmp, const std::string& path) {
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        raise(ErrorKind::IoFailure, "cannot move temporary file onto " + path);
    }
}

void write_image_atomic(const Image& image, const std::string& path) {
    std::string tmp = path + ".tmp";
    write_image(image, tmp);
    commit(tmp, path);
}

void write_text_atomic(const std::string& text, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        f << text;
        if (!f) {
            std::remove(tmp.c_str());
            raise(ErrorKind::IoFailure, "cannot write " + tmp);
        }
    }
    commit(tmp, path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Interchange format for label masks: 8-bit gray, 255 where the overlap
// takes the reference, 0 elsewhere. Pixels outside the overlap are
// reconstructed from the coverage masks on import.
Image labels_to_image(const LabelMask& labels, const ValidityMask& overlap) {
    Image out(labels.width, labels.height, 1);
    for (int y = 0; y < labels.height; ++y)
        for (int x = 0; x < labels.width; ++x)
            out.at(x, y, 0) =
                overlap.at(x, y) && labels.at(x, y) == kFromReference ? 1.0f : 0.0f;
    return out;
}

LabelMask import_labels(const std::string& path, const AlignedPair& pair,
                        const ValidityMask& overlap) {
    int w = 0, h = 0;
    std::vector<uint8_t> gray = png::read_gray8(path, w, h);
    if (w != pair.width() || h != pair.height())
        raise(ErrorKind::DimensionMismatch, "label mask size does not match the images");
    LabelMask labels(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (overlap.at(x, y))
                labels.at(x, y) = gray[size_t(y) * w + x] >= 128 ? kFromReference : kFromTarget;
            else if (pair.target_mask.at(x, y))
                labels.at(x, y) = kFromTarget;
            else if (pair.reference_mask.at(x, y))
                labels.at(x, y) = kFromReference;
            else
                labels.at(x, y) = kFromNeither;
        }
    }
    return labels;
}

LpamConfig config_from(double beta, int window, double k, int margin) {
    LpamConfig cfg;
    cfg.beta = beta;
    cfg.window = window;
    cfg.k = k;
    cfg.margin = margin;
    return cfg;
}

struct StitchOutcome {
    SeamMetrics pre;
    SeamMetrics post;   // == pre when repair was skipped
    LpamReport report;  // default-initialized when repair was skipped
    bool repaired = false;
};

StitchOutcome run_stitch(StitchState& state, const LpamConfig& cfg, bool no_lpam) {
    StitchOutcome out;
    out.pre = seam_metrics(state.pair, state.seam, state.overlap, cfg.window);
    if (no_lpam) {
        out.post = out.pre;
        return out;
    }
    out.report = run_lpam(state, cfg);
    out.post = seam_metrics(state.pair, state.seam, state.overlap, cfg.window);
    out.repaired = true;
    return out;
}

} // namespace

int cmd_stitch(const StitchArgs& args) {
    try {
        AlignedPair pair = load_aligned_pair(args.target, args.reference);
        StitchState state = init_stitch(std::move(pair));
        LpamConfig cfg = config_from(args.beta, args.window, args.k, args.margin);
        std::vector<std::pair<Rect, FlowField>> flows;
        if (!args.flow_vis.empty()) cfg.flow_sink = &flows;

        StitchOutcome outcome = run_stitch(state, cfg, args.no_lpam);

        write_image_atomic(composite(state.pair, state.labels), args.out);
        if (!args.labels_out.empty())
            write_image_atomic(labels_to_image(state.labels, state.overlap), args.labels_out);
        if (!args.seam_vis.empty()) {
            SeamScore score = evaluate_seam(state.pair, state.seam, state.overlap, cfg.window);
            write_image_atomic(seam_overlay(state.pair, state.seam, score), args.seam_vis);
        }
        if (!args.flow_vis.empty()) {
            FlowField canvas(state.pair.width(), state.pair.height());
            for (auto& [rect, flow] : flows)
                for (int y = 0; y < flow.height; ++y)
                    for (int x = 0; x < flow.width; ++x) {
                        canvas.u[size_t(rect.y0 + y) * canvas.width + rect.x0 + x] =
                            flow.u_at(x, y);
                        canvas.v[size_t(rect.y0 + y) * canvas.width + rect.x0 + x] =
                            flow.v_at(x, y);
                    }
            write_image_atomic(flow_visualization(canvas), args.flow_vis);
        }
        if (!args.metrics.empty()) {
            json j = args.no_lpam
                         ? metrics_to_json(outcome.pre)
                         : json{{"pre", metrics_to_json(outcome.pre)},
                                {"post", metrics_to_json(outcome.post)}};
            write_text_atomic(dump(j), args.metrics);
        }
        if (!args.report.empty() && outcome.repaired)
            write_text_atomic(dump(report_to_json(outcome.report)), args.report);

        if (args.no_lpam) {
            std::cout << "wrote " << args.out << " (seam length " << outcome.pre.seam_length
                      << ", repair disabled)\n";
        } else if (outcome.report.plausible) {
            std::cout << "wrote " << args.out << " (seam length " << outcome.pre.seam_length
                      << ", seam plausible, no repair needed)\n";
        } else {
            int merged = 0;
            for (auto& c : outcome.report.components) merged += c.skipped ? 0 : 1;
            std::cout << "wrote " << args.out << " (seam length " << outcome.pre.seam_length
                      << ", repaired " << merged << " of " << outcome.report.components.size()
                      << " regions)\n";
        }
        return kOk;
    } catch (const Error& e) {
        std::cerr << "stitch: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "stitch: " << e.what() << "\n";
        return kInternal;
    }
}

int cmd_evaluate(const EvaluateArgs& args) {
    try {
        AlignedPair pair = load_aligned_pair(args.target, args.reference);
        ValidityMask overlap = compute_overlap(pair);
        LabelMask labels = args.labels.empty() ? estimate_seam(pair)
                                               : import_labels(args.labels, pair, overlap);
        Seam seam = extract_seam_path(labels, overlap);
        SeamMetrics m = seam_metrics(pair, seam, overlap, args.window);
        std::string text = dump(metrics_to_json(m));
        std::cout << text;
        if (!args.metrics.empty()) write_text_atomic(text, args.metrics);
        return kOk;
    } catch (const Error& e) {
        std::cerr << "evaluate: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "evaluate: " << e.what() << "\n";
        return kInternal;
    }
}

int cmd_visualize(const VisualizeArgs& args) {
    try {
        AlignedPair pair = load_aligned_pair(args.target, args.reference);
        ValidityMask overlap = compute_overlap(pair);
        LabelMask labels = args.labels.empty() ? estimate_seam(pair)
                                               : import_labels(args.labels, pair, overlap);
        Seam seam = extract_seam_path(labels, overlap);
        SeamScore score = evaluate_seam(pair, seam, overlap, args.window);
        write_image_atomic(seam_overlay(pair, seam, score), args.out);
        std::cout << "wrote " << args.out << "\n";
        return kOk;
    } catch (const Error& e) {
        std::cerr << "visualize: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "visualize: " << e.what() << "\n";
        return kInternal;
    }
}

int cmd_batch(const BatchArgs& args) {
    std::ifstream list(args.list);
    if (!list) {
        std::cerr << "batch: cannot read " << args.list << "\n";
        return kBadInput;
    }
    struct Row {
        std::string target, reference;
    };
    std::vector<Row> rows;
    for (std::string line; std::getline(list, line);) {
        std::istringstream ls(line);
        Row r;
        if (ls >> r.target >> r.reference) rows.push_back(std::move(r));
    }
    if (rows.empty()) {
        std::cerr << "batch: list holds no image pairs\n";
        return kBadInput;
    }

    LpamConfig cfg = config_from(args.beta, args.window, args.k, args.margin);
    SeamMetrics pre_sum, post_sum;
    int done = 0;
    json failures = json::array();
    json pairs = json::array();
    for (size_t i = 0; i < rows.size(); ++i) {
        char prefix[24];
        std::snprintf(prefix, sizeof prefix, "%03zu", i + 1);
        try {
            AlignedPair pair = load_aligned_pair(rows[i].target, rows[i].reference);
            StitchState state = init_stitch(std::move(pair));
            StitchOutcome outcome = run_stitch(state, cfg, false);
            if (!args.out_dir.empty()) {
                write_image_atomic(composite(state.pair, state.labels),
                                   args.out_dir + "/" + prefix + "_mosaic.png");
                json j{{"pre", metrics_to_json(outcome.pre)},
                       {"post", metrics_to_json(outcome.post)}};
                write_text_atomic(dump(j), args.out_dir + "/" + prefix + "_metrics.json");
            }
            pre_sum.rmse += outcome.pre.rmse;
            pre_sum.psnr += outcome.pre.psnr;
            pre_sum.ssim += outcome.pre.ssim;
            pre_sum.zncc += outcome.pre.zncc;
            post_sum.rmse += outcome.post.rmse;
            post_sum.psnr += outcome.post.psnr;
            post_sum.ssim += outcome.post.ssim;
            post_sum.zncc += outcome.post.zncc;
            ++done;
            pairs.push_back({{"target", rows[i].target},
                             {"reference", rows[i].reference},
                             {"pre", metrics_to_json(outcome.pre)},
                             {"post", metrics_to_json(outcome.post)}});
        } catch (const std::exception& e) {
            std::cerr << "batch: pair " << prefix << " failed: " << e.what() << "\n";
            failures.push_back({{"target", rows[i].target},
                                {"reference", rows[i].reference},
                                {"error", e.what()}});
        }
    }
    if (done == 0) {
        std::cerr << "batch: every pair failed\n";
        return kBadInput;
    }

    auto mean = [&](const SeamMetrics& s) {
        return json{{"rmse", s.rmse / done},
                    {"psnr", s.psnr / done},
                    {"ssim", s.ssim / done},
                    {"zncc", s.zncc / done}};
    };
    json baseline = mean(pre_sum), repaired = mean(post_sum);

    std::printf("%-12s %8s %8s %8s %8s\n", "method", "RMSE", "PSNR", "SSIM", "ZNCC");
    std::printf("%-12s %8.3f %8.2f %8.3f %8.3f\n", "baseline",
                baseline["rmse"].get<double>(), baseline["psnr"].get<double>(),
                baseline["ssim"].get<double>(), baseline["zncc"].get<double>());
    std::printf("%-12s %8.3f %8.2f %8.3f %8.3f\n", "with repair",
                repaired["rmse"].get<double>(), repaired["psnr"].get<double>(),
                repaired["ssim"].get<double>(), repaired["zncc"].get<double>());

    if (!args.summary.empty()) {
        json summary{{"baseline", baseline},
                     {"with_repair", repaired},
                     {"pairs_done", done},
                     {"pairs", pairs},
                     {"failures", failures}};
        try {
            write_text_atomic(dump(summary), args.summary);
        } catch (const Error& e) {
            std::cerr << "batch: " << e.what() << "\n";
            return exit_code_for(e);
        }
    }
    return kOk;
}

} // namespace seamweld::cli
