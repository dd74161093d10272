#include "seamweld/lpam.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#include "seamweld/error.hpp"
#include "seamweld/mincut.hpp"

namespace seamweld {

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

double color_gap(const Image& a, int ax, int ay, const Image& b, int bx, int by) {
    double s = 0.0;
    for (int c = 0; c < a.channels; ++c) {
        double d = double(a.at(ax, ay, c)) - double(b.at(bx, by, c));
        s += d * d;
    }
    return std::sqrt(s);
}

} // namespace

StitchState init_stitch(AlignedPair pair) {
    StitchState state{std::move(pair), {}, {}, {}};
    state.overlap = compute_overlap(state.pair);
    state.labels = estimate_seam(state.pair);
    state.seam = extract_seam_path(state.labels, state.overlap);
    return state;
}

double sigmoid_weight(double t, double beta) {
    return 1.0 / (1.0 + std::exp(-beta * (t - 0.5)));
}

WarpResult warp_patch(const Image& target, const ValidityMask& target_mask,
                      const PatchRegion& region, const FlowField& flow, double beta) {
    const Rect& r = region.rect;
    if (flow.width != r.width() || flow.height != r.height())
        raise(ErrorKind::DimensionMismatch, "flow field does not match the region");
    SigmoidRamp ramp(region);

    WarpResult out;
    out.patch = Image(r.width(), r.height(), target.channels);
    out.flagged.assign(size_t(r.width()) * r.height(), 0);
    long covered = 0, flagged = 0;
    for (int y = 0; y < r.height(); ++y) {
        for (int x = 0; x < r.width(); ++x) {
            int cx = r.x0 + x, cy = r.y0 + y;
            double f = sigmoid_weight(ramp.t_of(cx, cy), beta);
            double sx = cx + f * double(flow.u_at(x, y));
            double sy = cy + f * double(flow.v_at(x, y));
            bool in_target = target_mask.at(cx, cy);
            if (in_target) ++covered;
            auto sample = bilinear_sample(target, target_mask, sx, sy);
            if (sample) {
                out.patch.at(x, y, 0) = sample->r;
                if (target.channels == 3) {
                    out.patch.at(x, y, 1) = sample->g;
                    out.patch.at(x, y, 2) = sample->b;
                }
            } else {
                for (int c = 0; c < target.channels; ++c)
                    out.patch.at(x, y, c) = target.at(cx, cy, c);
                out.flagged[size_t(y) * r.width() + x] = 1;
                if (in_target) ++flagged;
            }
        }
    }
    out.flagged_fraction = covered > 0 ? double(flagged) / double(covered) : 1.0;
    return out;
}

LocalCut local_seam(const StitchState& state, const PatchRegion& region,
                    const Image& warped_patch) {
    const Rect& r = region.rect;
    int bw = r.width(), bh = r.height();
    GridGraph g(bw, bh, false);

    LocalCut out;
    out.labels.assign(size_t(bw) * bh, kFromNeither);
    size_t active = 0;
    for (int y = 0; y < bh; ++y) {
        for (int x = 0; x < bw; ++x) {
            int cx = r.x0 + x, cy = r.y0 + y;
            out.labels[size_t(y) * bw + x] = state.labels.at(cx, cy);
            if (state.overlap.at(cx, cy)) {
                g.node_active[g.index(x, y)] = 1;
                ++active;
            }
        }
    }
    if (active == 0) {
        out.trivial = true;
        return out;
    }

    std::vector<double> diff(size_t(bw) * bh, 0.0);
    for (int y = 0; y < bh; ++y)
        for (int x = 0; x < bw; ++x)
            if (g.node_active[g.index(x, y)])
                diff[g.index(x, y)] =
                    color_gap(warped_patch, x, y, state.pair.reference, r.x0 + x, r.y0 + y);
    for (int y = 0; y < bh; ++y) {
        for (int x = 0; x < bw; ++x) {
            int i = g.index(x, y);
            if (!g.node_active[i]) continue;
            if (x + 1 < bw && g.node_active[i + 1]) g.right_cap[i] = diff[i] + diff[i + 1];
            if (y + 1 < bh && g.node_active[i + bw]) g.down_cap[i] = diff[i] + diff[i + bw];
        }
    }

    static constexpr std::array<std::array<int, 2>, 4> kAdj{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    bool pinned0 = false, pinned1 = false;
    for (int y = 0; y < bh; ++y) {
        for (int x = 0; x < bw; ++x) {
            if (!g.node_active[g.index(x, y)]) continue;
            int cx = r.x0 + x, cy = r.y0 + y;
            if (x == 0 || y == 0 || x == bw - 1 || y == bh - 1) {
                uint8_t cur = state.labels.at(cx, cy);
                if (cur == kFromTarget || cur == kFromReference) {
                    g.force_label(x, y, cur);
                    (cur == kFromTarget ? pinned0 : pinned1) = true;
                }
            }
            for (auto [dx, dy] : kAdj) {
                int nx = cx + dx, ny = cy + dy;
                if (nx < 0 || ny < 0 || nx >= state.overlap.width || ny >= state.overlap.height)
                    continue;
                if (state.overlap.at(nx, ny)) continue;
                bool t = state.pair.target_mask.at(nx, ny);
                bool rf = state.pair.reference_mask.at(nx, ny);
                if (t && !rf) {
                    g.force_label(x, y, 0);
                    pinned0 = true;
                } else if (rf && !t) {
                    g.force_label(x, y, 1);
                    pinned1 = true;
                }
            }
        }
    }
    if (!pinned0 || !pinned1) {
        out.trivial = true;
        return out;
    }

    CutResult cut = solve_mincut(g);
    for (int y = 0; y < bh; ++y)
        for (int x = 0; x < bw; ++x)
            if (g.node_active[g.index(x, y)])
                out.labels[size_t(y) * bw + x] = cut.labels[g.index(x, y)];
    return out;
}

void merge_step(StitchState& state, const PatchRegion& region, const WarpResult& warp,
                const LocalCut& cut) {
    const Rect& r = region.rect;
    int bw = r.width();
    for (int y = 0; y < r.height(); ++y) {
        for (int x = 0; x < bw; ++x) {
            int cx = r.x0 + x, cy = r.y0 + y;
            if (state.pair.target_mask.at(cx, cy))
                for (int c = 0; c < state.pair.target.channels; ++c)
                    state.pair.target.at(cx, cy, c) = warp.patch.at(x, y, c);
            if (state.overlap.at(cx, cy))
                state.labels.at(cx, cy) = cut.labels[size_t(y) * bw + x];
        }
    }
    state.seam = extract_seam_path(state.labels, state.overlap);
}

LpamReport run_lpam(StitchState& state, const LpamConfig& config) {
    auto t_start = Clock::now();
    LpamReport rep;

    auto t_score = Clock::now();
    SeamScore pre = evaluate_seam(state.pair, state.seam, state.overlap, config.window);
    rep.score_ms += ms_between(t_score, Clock::now());
    rep.pre_mean = pre.mean;
    rep.pre_max = pre.max;

    SeamComponents comps = detect_misaligned(pre, config.k);
    if (comps.plausible) {
        rep.plausible = true;
        rep.post_mean = pre.mean;
        rep.post_max = pre.max;
        rep.total_ms = ms_between(t_start, Clock::now());
        return rep;
    }

    auto regions = enclosing_patches(state.labels, state.seam, comps, config.margin);
    for (const PatchRegion& region : regions) {
        ComponentReport cr;
        cr.rect = region.rect;
        cr.range = {region.ranges.front().first, region.ranges.front().second};
        double pre_sum = 0.0;
        long pre_n = 0;
        for (auto& rg : region.ranges) {
            cr.range.first = std::min(cr.range.first, rg.first);
            cr.range.second = std::max(cr.range.second, rg.second);
            for (int i = rg.first; i < rg.second; ++i) {
                pre_sum += pre.q[i];
                ++pre_n;
            }
        }
        cr.pre_mean_q = pre_n > 0 ? pre_sum / double(pre_n) : 0.0;
        cr.post_mean_q = cr.pre_mean_q;

        auto process = [&]() {
            Image target_patch = crop(state.pair.target, region.rect);
            Image reference_patch = crop(state.pair.reference, region.rect);

            auto t_flow = Clock::now();
            FlowField flow = estimate_flow(target_patch, reference_patch, config.flow);
            rep.flow_ms += ms_between(t_flow, Clock::now());

            auto t_warp = Clock::now();
            WarpResult warp = warp_patch(state.pair.target, state.pair.target_mask, region,
                                         flow, config.beta);
            rep.warp_ms += ms_between(t_warp, Clock::now());
            if (warp.flagged_fraction > 0.2) {
                cr.skipped = true;
                cr.reason = "warp left more than 20% of the patch unaligned";
                return;
            }

            auto t_cut = Clock::now();
            LocalCut cut = local_seam(state, region, warp.patch);
            if (cut.trivial) {
                rep.cut_ms += ms_between(t_cut, Clock::now());
                cr.skipped = true;
                cr.reason = "region border pins a single label";
                return;
            }
            merge_step(state, region, warp, cut);
            rep.cut_ms += ms_between(t_cut, Clock::now());
            if (config.flow_sink) config.flow_sink->push_back({region.rect, flow});

            auto t_post = Clock::now();
            Seam local;
            for (const SeamPixel& p : state.seam.pixels)
                if (region.rect.contains(p.x, p.y)) local.pixels.push_back(p);
            if (!local.pixels.empty()) {
                SeamScore post = evaluate_seam(state.pair, local, state.overlap, config.window);
                cr.post_mean_q = post.mean;
            } else {
                cr.post_mean_q = 0.0; // the new seam avoids the region entirely
            }
            rep.score_ms += ms_between(t_post, Clock::now());
        };
        try {
            process();
        } catch (const Error& e) {
            cr.skipped = true;
            cr.reason = e.what();
            cr.post_mean_q = cr.pre_mean_q;
        }
        rep.components.push_back(std::move(cr));
    }

    auto t_final = Clock::now();
    SeamScore post = evaluate_seam(state.pair, state.seam, state.overlap, config.window);
    rep.score_ms += ms_between(t_final, Clock::now());
    rep.post_mean = post.mean;
    rep.post_max = post.max;
    rep.total_ms = ms_between(t_start, Clock::now());
    return rep;
}

} // namespace seamweld
