#pragma once

#include <cstdint>
#include <vector>

#include "seamweld/geometry.hpp"
#include "seamweld/image.hpp"
#include "seamweld/mincut.hpp"

namespace seamweld {

/// Per-pixel source assignment for the whole canvas.
enum : uint8_t {
    kFromTarget = 0,
    kFromReference = 1,
    kFromNeither = 2,
};

struct LabelMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> labels;

    LabelMask() = default;
    LabelMask(int w, int h, uint8_t fill = kFromNeither)
        : width(w), height(h), labels(size_t(w) * h, fill) {}

    uint8_t at(int x, int y) const { return labels[size_t(y) * width + x]; }
    uint8_t& at(int x, int y) { return labels[size_t(y) * width + x]; }
};

struct SeamPixel {
    int x = 0;
    int y = 0;
    bool operator==(const SeamPixel&) const = default;
};

/// Seam pixels ordered by chain traversal. A seam pixel is an overlap pixel
/// labeled kFromTarget with a 4-neighbor labeled kFromReference.
struct Seam {
    std::vector<SeamPixel> pixels;
    bool multi_chain = false;
};

/// Cut problem over the overlap's bounding box. Node (x, y) of the graph is
/// canvas pixel (domain.x0 + x, domain.y0 + y); only overlap pixels are
/// active. Graph label 0 keeps the target, 1 switches to the reference.
struct SeamProblem {
    GridGraph graph;
    Rect domain;
};

/// Pairwise costs are the summed RGB disagreement of the two endpoint
/// pixels; overlap pixels bordering a single-image region are pinned to
/// that image's label. Throws UnanchoredCut when either pin kind is absent.
SeamProblem build_energy(const AlignedPair& pair, const ValidityMask& overlap);

/// Full pipeline: overlap, energy, min cut, then a canvas-wide label mask
/// (single-image regions keep their only source; uncovered pixels get
/// kFromNeither).
LabelMask estimate_seam(const AlignedPair& pair);

/// Orders the seam pixels of a label mask into chains. Throws EmptySeam when
/// the mask has no target/reference adjacency inside the overlap.
Seam extract_seam_path(const LabelMask& mask, const ValidityMask& overlap);

/// Assembles the mosaic: each pixel comes from the image its label names;
/// kFromNeither pixels are black.
Image composite(const AlignedPair& pair, const LabelMask& mask);

} // namespace seamweld
