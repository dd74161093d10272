#pragma once

#include <string>
#include <utility>
#include <vector>

#include "seamweld/flow.hpp"
#include "seamweld/image.hpp"
#include "seamweld/quality.hpp"
#include "seamweld/seam.hpp"

namespace seamweld {

struct LpamConfig {
    int window = 21;  // seam scoring window
    double k = 1.5;   // plausibility factor on the score mean
    double beta = 8.0; // ramp steepness
    int margin = 21;  // patch growth around each component, per side
    FlowParams flow;  // patch matcher settings

    // When set, receives the flow of every merged region (for visualization).
    std::vector<std::pair<Rect, FlowField>>* flow_sink = nullptr;
};

/// Everything that evolves while seams are repaired. The masks never change;
/// target pixels and labels do, and the seam is re-derived after each merge.
struct StitchState {
    AlignedPair pair;
    ValidityMask overlap;
    LabelMask labels;
    Seam seam;
};

/// Initial state: overlap, global seam estimate, ordered seam path.
StitchState init_stitch(AlignedPair pair);

/// 0 at t = 0 rising to 1 at t = 1, steepness beta around the midpoint.
double sigmoid_weight(double t, double beta);

/// Ramp coordinate across a region: 0 at the side kept from the target,
/// 1 at the reference side. Degenerate extent pins t to 0.5.
struct SigmoidRamp {
    Rect rect;
    bool axis_horizontal = true;
    bool t0_low = true;

    explicit SigmoidRamp(const PatchRegion& r)
        : rect(r.rect), axis_horizontal(r.axis_horizontal), t0_low(r.t0_low) {}

    double t_of(int x, int y) const {
        int lo = axis_horizontal ? rect.x0 : rect.y0;
        int hi = (axis_horizontal ? rect.x1 : rect.y1) - 1;
        if (hi == lo) return 0.5;
        double t = double((axis_horizontal ? x : y) - lo) / double(hi - lo);
        return t0_low ? t : 1.0 - t;
    }
};

/// Target patch resampled along the ramped flow. Pixels whose sample left
/// the valid canvas keep their unwarped value and are flagged.
struct WarpResult {
    Image patch;                   // rect-sized
    std::vector<uint8_t> flagged;  // rect-sized
    double flagged_fraction = 0.0; // flagged share of target-valid pixels
};

/// flow is rect-local (estimated between the two cropped patches); sampling
/// happens on the full current target canvas at p + f(t) * V(p).
WarpResult warp_patch(const Image& target, const ValidityMask& target_mask,
                      const PatchRegion& region, const FlowField& flow, double beta);

/// Label assignment inside one region after warping. Region-border overlap
/// pixels are pinned to their current labels so the seam reconnects;
/// overlap pixels touching a single-image area keep that image's label.
struct LocalCut {
    std::vector<uint8_t> labels; // rect-sized; meaningful on overlap pixels
    bool trivial = false;        // border pins carry a single label only
};

LocalCut local_seam(const StitchState& state, const PatchRegion& region,
                    const Image& warped_patch);

/// Pastes the warped patch into the target (inside the region, where the
/// target is valid), rewrites region labels, re-derives the seam.
void merge_step(StitchState& state, const PatchRegion& region, const WarpResult& warp,
                const LocalCut& cut);

struct ComponentReport {
    std::pair<int, int> range{0, 0}; // envelope of seam indices, pre-repair
    Rect rect;                       // region rectangle on the canvas
    double pre_mean_q = 0.0;
    double post_mean_q = 0.0;
    bool skipped = false;
    std::string reason;
};

struct LpamReport {
    bool plausible = false;
    double pre_mean = 0.0, pre_max = 0.0;
    double post_mean = 0.0, post_max = 0.0;
    std::vector<ComponentReport> components;
    double score_ms = 0.0, flow_ms = 0.0, warp_ms = 0.0, cut_ms = 0.0, total_ms = 0.0;
};

/// One repair pass: score the seam, stop if plausible, otherwise realign
/// each misaligned region in seam order against the evolving state. A
/// failed region is reported and skipped, never fatal.
LpamReport run_lpam(StitchState& state, const LpamConfig& config = {});

} // namespace seamweld
