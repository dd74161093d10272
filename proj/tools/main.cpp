#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace seamweld::cli;

    CLI::App app{"seamweld: seam-based compositing of pre-aligned image pairs"};
    app.require_subcommand(1);

    StitchArgs stitch;
    auto* s = app.add_subcommand("stitch", "composite two images and repair the seam");
    s->add_option("--target", stitch.target, "target image (RGBA PNG)")->required();
    s->add_option("--reference", stitch.reference, "reference image (RGBA PNG)")->required();
    s->add_option("--out", stitch.out, "mosaic output path")->required();
    s->add_flag("--no-lpam", stitch.no_lpam, "skip seam repair, keep the raw cut");
    s->add_option("--beta", stitch.beta, "ramp steepness (default 8)");
    s->add_option("--window", stitch.window, "scoring window, odd (default 21)");
    s->add_option("--k", stitch.k, "plausibility factor (default 1.5)");
    s->add_option("--margin", stitch.margin, "patch margin in pixels (default 21)");
    s->add_option("--seam-vis", stitch.seam_vis, "write a seam quality overlay PNG");
    s->add_option("--flow-vis", stitch.flow_vis, "write a patch flow visualization PNG");
    s->add_option("--labels-out", stitch.labels_out, "write the final label mask PNG");
    s->add_option("--metrics", stitch.metrics, "write seam metrics JSON");
    s->add_option("--report", stitch.report, "write the repair report JSON");

    EvaluateArgs evaluate;
    auto* e = app.add_subcommand("evaluate", "measure seam quality, JSON to stdout");
    e->add_option("--target", evaluate.target, "target image (RGBA PNG)")->required();
    e->add_option("--reference", evaluate.reference, "reference image (RGBA PNG)")->required();
    e->add_option("--labels", evaluate.labels, "label mask PNG (estimated when omitted)");
    e->add_option("--window", evaluate.window, "scoring window, odd (default 21)");
    e->add_option("--metrics", evaluate.metrics, "also write the JSON to this file");

    BatchArgs batch;
    auto* b = app.add_subcommand("batch", "stitch many pairs, print mean metrics");
    b->add_option("--list", batch.list, "text file: one 'target reference' pair per line")
        ->required();
    b->add_option("--out-dir", batch.out_dir, "directory for per-pair mosaics and metrics");
    b->add_option("--beta", batch.beta, "ramp steepness (default 8)");
    b->add_option("--window", batch.window, "scoring window, odd (default 21)");
    b->add_option("--k", batch.k, "plausibility factor (default 1.5)");
    b->add_option("--margin", batch.margin, "patch margin in pixels (default 21)");
    b->add_option("--summary", batch.summary, "write the summary JSON to this file");

    VisualizeArgs visualize;
    auto* v = app.add_subcommand("visualize", "render a seam quality overlay");
    v->add_option("--target", visualize.target, "target image (RGBA PNG)")->required();
    v->add_option("--reference", visualize.reference, "reference image (RGBA PNG)")->required();
    v->add_option("--labels", visualize.labels, "label mask PNG (estimated when omitted)");
    v->add_option("--window", visualize.window, "scoring window, odd (default 21)");
    v->add_option("--out", visualize.out, "overlay output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? kOk : kBadInput;
    }

    if (s->parsed()) return cmd_stitch(stitch);
    if (e->parsed()) return cmd_evaluate(evaluate);
    if (b->parsed()) return cmd_batch(batch);
    return cmd_visualize(visualize);
}
