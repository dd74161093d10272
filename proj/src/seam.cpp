#include "seamweld/seam.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "seamweld/error.hpp"
#include "seamweld/runtime.hpp"

namespace seamweld {

namespace {

Rect mask_bounds(const ValidityMask& m) {
    Rect r{m.width, m.height, 0, 0};
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(x, y)) continue;
            r.x0 = std::min(r.x0, x);
            r.y0 = std::min(r.y0, y);
            r.x1 = std::max(r.x1, x + 1);
            r.y1 = std::max(r.y1, y + 1);
        }
    }
    if (r.x1 <= r.x0) raise(ErrorKind::EmptyOverlap, "images share no valid pixels");
    return r;
}

double pixel_disagreement(const AlignedPair& pair, int x, int y) {
    double s = 0.0;
    for (int c = 0; c < pair.target.channels; ++c) {
        double d = double(pair.target.at(x, y, c)) - double(pair.reference.at(x, y, c));
        s += d * d;
    }
    return std::sqrt(s);
}

} // namespace

SeamProblem build_energy(const AlignedPair& pair, const ValidityMask& overlap) {
    Rect box = mask_bounds(overlap);
    int bw = box.width(), bh = box.height();
    SeamProblem problem{GridGraph(bw, bh, false), box};
    GridGraph& g = problem.graph;

    for (int y = 0; y < bh; ++y)
        for (int x = 0; x < bw; ++x)
            g.node_active[g.index(x, y)] = overlap.at(box.x0 + x, box.y0 + y);

    std::vector<double> diff(size_t(bw) * bh, 0.0);
    int nt = runtime::max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int y = 0; y < bh; ++y) {
        for (int x = 0; x < bw; ++x) {
            int i = g.index(x, y);
            if (g.node_active[i])
                diff[i] = pixel_disagreement(pair, box.x0 + x, box.y0 + y);
        }
    }

    for (int y = 0; y < bh; ++y) {
        for (int x = 0; x < bw; ++x) {
            int i = g.index(x, y);
            if (!g.node_active[i]) continue;
            if (x + 1 < bw && g.node_active[i + 1])
                g.right_cap[i] = diff[i] + diff[i + 1];
            if (y + 1 < bh && g.node_active[i + bw])
                g.down_cap[i] = diff[i] + diff[i + bw];
        }
    }

    // Pin overlap pixels that touch a single-image region: the mosaic must
    // keep that image across the overlap boundary.
    static constexpr std::array<std::array<int, 2>, 4> kAdj{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    int pinned_target = 0, pinned_reference = 0;
    for (int y = 0; y < bh; ++y) {
        for (int x = 0; x < bw; ++x) {
            if (!g.node_active[g.index(x, y)]) continue;
            int cx = box.x0 + x, cy = box.y0 + y;
            for (auto [dx, dy] : kAdj) {
                int nx = cx + dx, ny = cy + dy;
                if (nx < 0 || ny < 0 || nx >= overlap.width || ny >= overlap.height) continue;
                if (overlap.at(nx, ny)) continue;
                bool t = pair.target_mask.at(nx, ny);
                bool r = pair.reference_mask.at(nx, ny);
                if (t && !r) {
                    g.force_label(x, y, 0);
                    ++pinned_target;
                } else if (r && !t) {
                    g.force_label(x, y, 1);
                    ++pinned_reference;
                }
            }
        }
    }
    if (pinned_target == 0 || pinned_reference == 0)
        raise(ErrorKind::UnanchoredCut,
              "overlap border touches only one image; seam endpoints are undetermined");
    return problem;
}

LabelMask estimate_seam(const AlignedPair& pair) {
    ValidityMask overlap = compute_overlap(pair);
    SeamProblem problem = build_energy(pair, overlap);
    CutResult cut = solve_mincut(problem.graph);

    int w = pair.target.width, h = pair.target.height;
    LabelMask mask(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (overlap.at(x, y)) {
                mask.at(x, y) = cut.labels[problem.graph.index(x - problem.domain.x0,
                                                               y - problem.domain.y0)];
            } else if (pair.target_mask.at(x, y)) {
                mask.at(x, y) = kFromTarget;
            } else if (pair.reference_mask.at(x, y)) {
                mask.at(x, y) = kFromReference;
            } else {
                mask.at(x, y) = kFromNeither;
            }
        }
    }
    return mask;
}

namespace {

bool is_seam_pixel(const LabelMask& mask, const ValidityMask& overlap, int x, int y) {
    if (!overlap.at(x, y) || mask.at(x, y) != kFromTarget) return false;
    static constexpr std::array<std::array<int, 2>, 4> kAdj{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    for (auto [dx, dy] : kAdj) {
        int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height) continue;
        if (mask.at(nx, ny) == kFromReference) return true;
    }
    return false;
}

} // namespace

Seam extract_seam_path(const LabelMask& mask, const ValidityMask& overlap) {
    int w = mask.width, h = mask.height;
    std::vector<uint8_t> seam_set(size_t(w) * h, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            seam_set[size_t(y) * w + x] = is_seam_pixel(mask, overlap, x, y);

    // down, right, left, up, then diagonals: keeps chains running lengthwise
    static constexpr std::array<std::array<int, 2>, 8> kStep{
        {{0, 1}, {1, 0}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};

    std::vector<uint8_t> visited(size_t(w) * h, 0);
    auto next_of = [&](SeamPixel p) -> std::optional<SeamPixel> {
        for (auto [dx, dy] : kStep) {
            int nx = p.x + dx, ny = p.y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            size_t i = size_t(ny) * w + nx;
            if (seam_set[i] && !visited[i]) return SeamPixel{nx, ny};
        }
        return std::nullopt;
    };

    Seam seam;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            size_t i = size_t(y) * w + x;
            if (!seam_set[i] || visited[i]) continue;
            SeamPixel start{x, y};
            visited[i] = 1;
            std::vector<SeamPixel> forward{start};
            for (SeamPixel cur = start;;) {
                auto nxt = next_of(cur);
                if (!nxt) break;
                visited[size_t(nxt->y) * w + nxt->x] = 1;
                forward.push_back(*nxt);
                cur = *nxt;
            }
            std::vector<SeamPixel> backward;
            for (SeamPixel cur = start;;) {
                auto nxt = next_of(cur);
                if (!nxt) break;
                visited[size_t(nxt->y) * w + nxt->x] = 1;
                backward.push_back(*nxt);
                cur = *nxt;
            }
            if (!seam.pixels.empty()) seam.multi_chain = true;
            seam.pixels.insert(seam.pixels.end(), backward.rbegin(), backward.rend());
            seam.pixels.insert(seam.pixels.end(), forward.begin(), forward.end());
        }
    }
    if (seam.pixels.empty())
        raise(ErrorKind::EmptySeam, "label mask has no target/reference boundary in the overlap");
    return seam;
}

Image composite(const AlignedPair& pair, const LabelMask& mask) {
    int w = mask.width, h = mask.height;
    Image out;
    out.width = w;
    out.height = h;
    out.channels = 3;
    out.data.assign(size_t(w) * h * 3, 0.0f);
    int nt = runtime::max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            uint8_t l = mask.at(x, y);
            if (l == kFromNeither) continue;
            const Image& src = (l == kFromTarget) ? pair.target : pair.reference;
            for (int c = 0; c < 3; ++c)
                out.at(x, y, c) = src.at(x, y, c);
        }
    }
    return out;
}

} // namespace seamweld
