#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "seamweld/seam.hpp"

using namespace seamweld;
using fixtures::thrown_kind;

namespace {

// Left/right strip pair with independently drawn textures so overlap costs
// are rich. Canvas columns [0, target_end) carry the target, [ref_begin, w)
// the reference.
AlignedPair strip_pair(int w, int h, int target_end, int ref_begin, uint32_t seed) {
    AlignedPair pair;
    pair.target = fixtures::smooth_texture(w, h, seed);
    pair.reference = fixtures::smooth_texture(w, h, seed + 1000);
    pair.target_mask = ValidityMask(w, h, false);
    pair.reference_mask = ValidityMask(w, h, false);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (x < target_end) pair.target_mask.set(x, y, true);
            if (x >= ref_begin) pair.reference_mask.set(x, y, true);
        }
    return pair;
}

double disagreement(const AlignedPair& pair, int x, int y) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
        double d = double(pair.target.at(x, y, c)) - double(pair.reference.at(x, y, c));
        s += d * d;
    }
    return std::sqrt(s);
}

// Seam-pixel predicate straight from the contract: an overlap pixel labeled
// target with a 4-neighbor labeled reference.
bool seam_predicate(const LabelMask& mask, const ValidityMask& overlap, int x, int y) {
    if (!overlap.at(x, y) || mask.at(x, y) != kFromTarget) return false;
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
        int nx = x + dx[k], ny = y + dy[k];
        if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height) continue;
        if (mask.at(nx, ny) == kFromReference) return true;
    }
    return false;
}

} // namespace

TEST_CASE("estimated seam labels reach the exhaustive minimum energy") {
    // 9x5 canvas, overlap columns [2,7). The outermost overlap columns are
    // pinned by adjacency, leaving 15 free pixels: all 2^15 labelings are
    // scored with independently recomputed costs.
    const int w = 9, h = 5;
    AlignedPair pair = strip_pair(w, h, 7, 2, 42);
    ValidityMask overlap = compute_overlap(pair);

    std::vector<std::pair<int, int>> free_px, pinned0, pinned1;
    for (int y = 0; y < h; ++y) {
        pinned0.push_back({2, y}); // touches target-only column 1
        pinned1.push_back({6, y}); // touches reference-only column 7
        for (int x = 3; x <= 5; ++x) free_px.push_back({x, y});
    }
    REQUIRE(free_px.size() == 15);

    auto energy = [&](const LabelMask& m) {
        double e = 0.0;
        for (int y = 0; y < h; ++y)
            for (int x = 2; x < 7; ++x) {
                if (x + 1 < 7 && m.at(x, y) != m.at(x + 1, y))
                    e += disagreement(pair, x, y) + disagreement(pair, x + 1, y);
                if (y + 1 < h && m.at(x, y) != m.at(x, y + 1))
                    e += disagreement(pair, x, y) + disagreement(pair, x, y + 1);
            }
        return e;
    };

    LabelMask trial(w, h, kFromNeither);
    for (auto [x, y] : pinned0) trial.at(x, y) = kFromTarget;
    for (auto [x, y] : pinned1) trial.at(x, y) = kFromReference;
    double best = 1e300;
    for (uint32_t bits = 0; bits < (1u << 15); ++bits) {
        for (size_t k = 0; k < free_px.size(); ++k)
            trial.at(free_px[k].first, free_px[k].second) =
                (bits >> k) & 1u ? kFromReference : kFromTarget;
        best = std::min(best, energy(trial));
    }

    LabelMask solved = estimate_seam(pair);
    for (auto [x, y] : pinned0) CHECK(solved.at(x, y) == kFromTarget);
    for (auto [x, y] : pinned1) CHECK(solved.at(x, y) == kFromReference);
    CHECK(std::abs(energy(solved) - best) <= 1e-9);
}

TEST_CASE("energy graph mirrors the pair") {
    AlignedPair pair = strip_pair(12, 8, 9, 3, 7);
    ValidityMask overlap = compute_overlap(pair);
    SeamProblem problem = build_energy(pair, overlap);

    CHECK(problem.domain == Rect{3, 0, 9, 8});
    const GridGraph& g = problem.graph;
    REQUIRE(g.width == 6);
    REQUIRE(g.height == 8);

    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            const int i = g.index(x, y);
            CHECK(bool(g.node_active[i]) == overlap.at(3 + x, y));
            const int cx = 3 + x, cy = y;
            if (x + 1 < g.width) {
                double expect = disagreement(pair, cx, cy) + disagreement(pair, cx + 1, cy);
                CHECK(g.right_cap[i] == doctest::Approx(expect).epsilon(1e-12));
            }
            if (y + 1 < g.height) {
                double expect = disagreement(pair, cx, cy) + disagreement(pair, cx, cy + 1);
                CHECK(g.down_cap[i] == doctest::Approx(expect).epsilon(1e-12));
            }
            // Pins sit exactly on the columns bordering single-image strips.
            CHECK((g.source_cap[i] >= kHardCost) == (cx == 3));
            CHECK((g.sink_cap[i] >= kHardCost) == (cx == 8));
        }
}

TEST_CASE("an overlap bordered by one image only is rejected") {
    // Reference coverage strictly inside the target: every overlap border
    // pixel touches target-only canvas, so label 1 has no anchor.
    const int w = 10, h = 8;
    AlignedPair pair;
    pair.target = fixtures::smooth_texture(w, h, 1);
    pair.reference = fixtures::smooth_texture(w, h, 2);
    pair.target_mask = ValidityMask(w, h, true);
    pair.reference_mask = ValidityMask(w, h, false);
    for (int y = 2; y < 6; ++y)
        for (int x = 3; x < 7; ++x) pair.reference_mask.set(x, y, true);
    CHECK(thrown_kind([&] { estimate_seam(pair); }) == ErrorKind::UnanchoredCut);
}

TEST_CASE("label mask covers the canvas with the right sources") {
    AlignedPair pair = fixtures::clean_pair(60, 40, 17);
    ValidityMask overlap = compute_overlap(pair);
    LabelMask mask = estimate_seam(pair);
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 60; ++x) {
            const bool t = pair.target_mask.at(x, y), r = pair.reference_mask.at(x, y);
            const uint8_t l = mask.at(x, y);
            if (overlap.at(x, y)) {
                CHECK((l == kFromTarget || l == kFromReference));
            } else if (t) {
                CHECK(l == kFromTarget);
            } else if (r) {
                CHECK(l == kFromReference);
            } else {
                CHECK(l == kFromNeither);
            }
        }
}

TEST_CASE("extracted seam pixels are exactly the predicate set") {
    AlignedPair pair = fixtures::clean_pair(80, 50, 23);
    ValidityMask overlap = compute_overlap(pair);
    LabelMask mask = estimate_seam(pair);
    Seam seam = extract_seam_path(mask, overlap);

    std::vector<SeamPixel> expect;
    for (int y = 0; y < 50; ++y)
        for (int x = 0; x < 80; ++x)
            if (seam_predicate(mask, overlap, x, y)) expect.push_back({x, y});
    REQUIRE(!expect.empty());
    // Every overlap row is crossed, so the seam has at least one pixel per row.
    CHECK(seam.pixels.size() >= 50);

    auto key = [](const SeamPixel& p) { return std::pair<int, int>(p.y, p.x); };
    std::vector<SeamPixel> got = seam.pixels;
    std::sort(got.begin(), got.end(), [&](auto a, auto b) { return key(a) < key(b); });
    std::sort(expect.begin(), expect.end(), [&](auto a, auto b) { return key(a) < key(b); });
    CHECK(got == expect);

    if (!seam.multi_chain) {
        for (size_t i = 1; i < seam.pixels.size(); ++i) {
            const int dx = std::abs(seam.pixels[i].x - seam.pixels[i - 1].x);
            const int dy = std::abs(seam.pixels[i].y - seam.pixels[i - 1].y);
            CHECK(std::max(dx, dy) == 1);
        }
    }
}

TEST_CASE("a straight boundary is walked in order") {
    const int w = 8, h = 6;
    ValidityMask overlap(w, h, true);
    LabelMask mask(w, h, kFromTarget);
    for (int y = 0; y < h; ++y)
        for (int x = 4; x < w; ++x) mask.at(x, y) = kFromReference;
    Seam seam = extract_seam_path(mask, overlap);
    CHECK_FALSE(seam.multi_chain);
    REQUIRE(seam.pixels.size() == size_t(h));
    for (int y = 0; y < h; ++y) {
        CHECK(seam.pixels[y].x == 3);
        CHECK(seam.pixels[y].y == y);
    }
}

TEST_CASE("disconnected boundaries set the multi-chain flag") {
    const int w = 9, h = 9;
    ValidityMask overlap(w, h, true);
    LabelMask mask(w, h, kFromReference);
    mask.at(1, 1) = kFromTarget;
    mask.at(7, 7) = kFromTarget;
    Seam seam = extract_seam_path(mask, overlap);
    CHECK(seam.multi_chain);
    REQUIRE(seam.pixels.size() == 2);
    CHECK(seam.pixels[0] == SeamPixel{1, 1});
    CHECK(seam.pixels[1] == SeamPixel{7, 7});

    mask.at(7, 7) = kFromReference;
    Seam single = extract_seam_path(mask, overlap);
    CHECK_FALSE(single.multi_chain);
    CHECK(single.pixels.size() == 1);
}

TEST_CASE("a uniform label mask has no seam") {
    ValidityMask overlap(6, 6, true);
    LabelMask mask(6, 6, kFromTarget);
    CHECK(thrown_kind([&] { extract_seam_path(mask, overlap); }) == ErrorKind::EmptySeam);
}

TEST_CASE("composite copies each pixel from its labeled source") {
    AlignedPair pair = fixtures::clean_pair(50, 30, 29);
    LabelMask mask = estimate_seam(pair);
    Image out = composite(pair, mask);
    REQUIRE(out.width == 50);
    REQUIRE(out.height == 30);
    for (int y = 0; y < 30; ++y)
        for (int x = 0; x < 50; ++x)
            for (int c = 0; c < 3; ++c) {
                const uint8_t l = mask.at(x, y);
                const float expect = l == kFromTarget      ? pair.target.at(x, y, c)
                                     : l == kFromReference ? pair.reference.at(x, y, c)
                                                           : 0.0f;
                CHECK(out.at(x, y, c) == expect);
            }
}

TEST_CASE("a clean overlap is cut without touching disagreeing content") {
    // When the overlap agrees exactly, every labeling costs zero; the solve
    // must still produce an anchored, seam-extractable mask.
    AlignedPair pair = fixtures::clean_pair(100, 60, 31);
    LabelMask mask = estimate_seam(pair);
    ValidityMask overlap = compute_overlap(pair);
    Seam seam = extract_seam_path(mask, overlap);
    CHECK(!seam.pixels.empty());
}
