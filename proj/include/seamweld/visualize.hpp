#pragma once

#include "seamweld/flow.hpp"
#include "seamweld/image.hpp"
#include "seamweld/quality.hpp"
#include "seamweld/seam.hpp"

namespace seamweld {

/// Five-stop heat ramp (blue, cyan, green, yellow, red) over [0, 1].
Rgb heat_color(double v);

/// Mosaic preview for inspection: both-valid pixels show the average of the
/// two images, single-image pixels show that image, and the seam is drawn
/// as a 3-pixel stroke heat-colored by its per-pixel score (normalized by
/// the score maximum).
Image seam_overlay(const AlignedPair& pair, const Seam& seam, const SeamScore& score);

/// Direction as hue, magnitude as saturation against white; zero flow is
/// white everywhere.
Image flow_visualization(const FlowField& flow);

} // namespace seamweld
