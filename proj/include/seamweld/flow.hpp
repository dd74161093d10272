#pragma once

#include <vector>

#include "seamweld/image.hpp"

namespace seamweld {

/// Per-pixel displacement. Sampling the target at p + (u(p), v(p)) lands on
/// the content the reference shows at p.
struct FlowField {
    int width = 0;
    int height = 0;
    std::vector<float> u, v;

    FlowField() = default;
    FlowField(int w, int h) : width(w), height(h), u(size_t(w) * h, 0.0f), v(size_t(w) * h, 0.0f) {}

    float u_at(int x, int y) const { return u[size_t(y) * width + x]; }
    float v_at(int x, int y) const { return v[size_t(y) * width + x]; }
};

struct FlowParams {
    int radius = 5;           // search offsets per axis and pyramid level
    double truncation = 10.0; // descriptor distance cap
    double eta = 0.1;         // pull toward zero displacement
    double alpha = 4.0;       // neighbor disagreement weight
    double smooth_cap = 40.0; // neighbor disagreement cap
    int iterations = 60;      // message sweeps per pyramid level
    int min_level_size = 16;  // stop coarsening below this dimension
};

/// 128 values per pixel: gradient orientation histograms (8 bins) over a
/// 4x4 cell grid covering the 16x16 neighborhood, normalized, clamped at
/// 0.2, renormalized. A constant neighborhood yields all zeros.
struct DescriptorField {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    DescriptorField() = default;
    DescriptorField(int w, int h) : width(w), height(h), data(size_t(w) * h * 128, 0.0f) {}

    float* at(int x, int y) { return data.data() + (size_t(y) * width + x) * 128; }
    const float* at(int x, int y) const { return data.data() + (size_t(y) * width + x) * 128; }
};

DescriptorField dense_descriptors(const Image& gray);

/// Coarse-to-fine discrete matching of dense descriptors. Each pyramid
/// level refines the doubled coarser flow within +-radius by passing
/// messages between pixels (and between the u and v layers, which share
/// the truncated descriptor distance). Intended for patch-sized inputs;
/// the search volume is cached per level.
FlowField estimate_flow(const Image& target, const Image& reference,
                        const FlowParams& params = {});

namespace detail {

/// One pixel's descriptor; out must hold 128 floats.
void descriptor_at(const Image& gray, int x, int y, float* out);

/// Full flow estimation with a chosen row loop. The parallel flag only
/// changes how rows are dispatched, never the arithmetic.
FlowField estimate_flow_rows(const Image& target, const Image& reference,
                             const FlowParams& params, bool parallel);

/// 2x2 block average of a descriptor field (odd edges average what exists).
DescriptorField halve_descriptors(const DescriptorField& fine);

} // namespace detail

} // namespace seamweld
