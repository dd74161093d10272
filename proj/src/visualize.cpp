#include "seamweld/visualize.hpp"

#include <algorithm>
#include <cmath>

#include "seamweld/error.hpp"

namespace seamweld {

Rgb heat_color(double v) {
    static constexpr float kStops[5][3] = {
        {0.0f, 0.0f, 1.0f}, {0.0f, 1.0f, 1.0f}, {0.0f, 1.0f, 0.0f},
        {1.0f, 1.0f, 0.0f}, {1.0f, 0.0f, 0.0f}};
    v = std::clamp(v, 0.0, 1.0);
    double pos = v * 4.0;
    int i = std::min(int(pos), 3);
    float f = float(pos - i);
    Rgb out;
    out.r = kStops[i][0] + f * (kStops[i + 1][0] - kStops[i][0]);
    out.g = kStops[i][1] + f * (kStops[i + 1][1] - kStops[i][1]);
    out.b = kStops[i][2] + f * (kStops[i + 1][2] - kStops[i][2]);
    return out;
}

Image seam_overlay(const AlignedPair& pair, const Seam& seam, const SeamScore& score) {
    if (score.q.size() != seam.pixels.size())
        raise(ErrorKind::InvalidInput, "score does not match the seam");
    int w = pair.width(), h = pair.height();
    Image out(w, h, 3);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool t = pair.target_mask.at(x, y), r = pair.reference_mask.at(x, y);
            for (int c = 0; c < 3; ++c) {
                float tv = pair.target.at(x, y, c), rv = pair.reference.at(x, y, c);
                out.at(x, y, c) = t && r ? 0.5f * (tv + rv) : t ? tv : r ? rv : 0.0f;
            }
        }
    }
    double qmax = score.max > 0.0 ? score.max : 1.0;
    for (size_t i = 0; i < seam.pixels.size(); ++i) {
        Rgb color = heat_color(score.q[i] / qmax);
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                int x = seam.pixels[i].x + dx, y = seam.pixels[i].y + dy;
                if (x < 0 || y < 0 || x >= w || y >= h) continue;
                out.at(x, y, 0) = color.r;
                out.at(x, y, 1) = color.g;
                out.at(x, y, 2) = color.b;
            }
        }
    }
    return out;
}

Image flow_visualization(const FlowField& flow) {
    int w = flow.width, h = flow.height;
    double max_mag = 0.0;
    for (size_t i = 0; i < flow.u.size(); ++i)
        max_mag = std::max(max_mag, std::hypot(double(flow.u[i]), double(flow.v[i])));
    Image out(w, h, 3);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double u = flow.u_at(x, y), v = flow.v_at(x, y);
            double mag = std::hypot(u, v);
            double sat = max_mag > 0.0 ? mag / max_mag : 0.0;
            double hue = (std::atan2(v, u) + 3.14159265358979323846) / 6.28318530717958647692;
            double hh = hue * 6.0;
            int sector = std::min(int(hh), 5);
            double f = hh - sector;
            double p = 1.0 - sat;
            double q = 1.0 - sat * f;
            double t = 1.0 - sat * (1.0 - f);
            double r, g, b;
            switch (sector) {
                case 0: r = 1.0; g = t; b = p; break;
                case 1: r = q; g = 1.0; b = p; break;
                case 2: r = p; g = 1.0; b = t; break;
                case 3: r = p; g = q; b = 1.0; break;
                case 4: r = t; g = p; b = 1.0; break;
                default: r = 1.0; g = p; b = q; break;
            }
            out.at(x, y, 0) = float(r);
            out.at(x, y, 1) = float(g);
            out.at(x, y, 2) = float(b);
        }
    }
    return out;
}

} // namespace seamweld
