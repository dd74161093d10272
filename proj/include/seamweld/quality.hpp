#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "seamweld/geometry.hpp"
#include "seamweld/image.hpp"
#include "seamweld/seam.hpp"

namespace seamweld {

/// Per-pixel plausibility scores along a seam. q[i] belongs to seam.pixels[i]
/// and is 1 minus the structural similarity of the two images' windows around
/// that pixel, so 0 means locally indistinguishable sources.
struct SeamScore {
    std::vector<double> q;
    double mean = 0.0;
    double max = 0.0;
};

/// Windows are window x window boxes clipped to canvas and overlap, scored on
/// luminance. Pixels whose clipped window holds fewer than 9 samples borrow
/// the score of the nearest scored pixel along the seam.
SeamScore evaluate_seam(const AlignedPair& pair, const Seam& seam,
                        const ValidityMask& overlap, int window = 21);

/// Histogram threshold (256 bins between min and max) maximizing
/// between-class variance; ties resolve to the lower edge.
double otsu_threshold(const std::vector<double>& values);

/// Index ranges [begin, end) into the seam holding implausible pixels.
struct SeamComponents {
    bool plausible = true;
    double threshold = 0.0; // meaningful only when !plausible
    std::vector<std::pair<int, int>> ranges;
};

/// A seam is plausible when max(q) <= k * mean(q). Otherwise pixels at or
/// above the histogram threshold form components; runs separated by at most
/// 5 pixels merge, merged runs shorter than 3 are discarded as noise.
SeamComponents detect_misaligned(const SeamScore& score, double k = 1.5);

/// Rectangle to realign around one misaligned seam segment. The ramp
/// parameter t runs across the rect perpendicular to the seam, from the
/// side the mosaic takes from the target (t = 0) toward the reference side.
struct PatchRegion {
    Rect rect;
    bool axis_horizontal = true; // t varies with x when true, else with y
    bool t0_low = true;          // t = 0 at the rect's low coordinate side
    std::vector<std::pair<int, int>> ranges; // seam index ranges inside
};

/// Bounding boxes of the component seam pixels grown by margin on every
/// side, clipped to the canvas; intersecting boxes merge until disjoint.
/// Regions come back ordered by their first seam index.
std::vector<PatchRegion> enclosing_patches(const LabelMask& mask, const Seam& seam,
                                           const SeamComponents& components,
                                           int margin = 21);

/// Window statistics averaged along the seam: root-mean-square error, peak
/// signal-to-noise ratio, structural similarity, and normalized
/// cross-correlation error (1 - ncc) / 2.
struct SeamMetrics {
    double rmse = 0.0;
    double psnr = 0.0;
    double ssim = 0.0;
    double zncc = 0.0;
    int seam_length = 0;
    int window = 0;
};

SeamMetrics seam_metrics(const AlignedPair& pair, const Seam& seam,
                         const ValidityMask& overlap, int window = 21);

namespace detail {

/// Structural similarity of two equal-length samples with the standard
/// stabilizers (0.01^2, 0.03^2) and biased moments.
double ssim_of(const std::vector<double>& a, const std::vector<double>& b);

/// Collects luminance values of both images over the clipped window around
/// (cx, cy). Returns the sample count.
int gather_window(const Image& gray0, const Image& gray1, const ValidityMask& overlap,
                  int cx, int cy, int half, std::vector<double>& a, std::vector<double>& b);

/// Scores one seam pixel; returns false when the window has too few samples.
bool score_pixel(const Image& gray0, const Image& gray1, const ValidityMask& overlap,
                 int cx, int cy, int half, double& q_out);

} // namespace detail

} // namespace seamweld
