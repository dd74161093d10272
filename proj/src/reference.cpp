#include "seamweld/reference.hpp"

#include <algorithm>

#include "seamweld/error.hpp"

namespace seamweld::reference {

DescriptorField dense_descriptors(const Image& gray) {
    Image g = luminance(gray);
    DescriptorField out(g.width, g.height);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) detail::descriptor_at(g, x, y, out.at(x, y));
    return out;
}

FlowField estimate_flow(const Image& target, const Image& reference, const FlowParams& params) {
    return detail::estimate_flow_rows(target, reference, params, false);
}

SeamScore evaluate_seam(const AlignedPair& pair, const Seam& seam,
                        const ValidityMask& overlap, int window) {
    if (window < 3 || window % 2 == 0)
        raise(ErrorKind::InvalidInput, "window size must be odd and at least 3");
    if (seam.pixels.empty()) raise(ErrorKind::EmptySeam, "cannot score an empty seam");
    Image gray0 = luminance(pair.target);
    Image gray1 = luminance(pair.reference);
    int half = window / 2;
    int n = int(seam.pixels.size());

    SeamScore out;
    out.q.assign(n, 0.0);
    std::vector<uint8_t> scored(n, 0);
    for (int i = 0; i < n; ++i) {
        double q = 0.0;
        if (detail::score_pixel(gray0, gray1, overlap, seam.pixels[i].x, seam.pixels[i].y,
                                half, q)) {
            out.q[i] = q;
            scored[i] = 1;
        }
    }
    bool any = std::find(scored.begin(), scored.end(), uint8_t(1)) != scored.end();
    if (any) {
        for (int i = 0; i < n; ++i) {
            if (scored[i]) continue;
            for (int d = 1; d < n; ++d) {
                if (i - d >= 0 && scored[i - d]) {
                    out.q[i] = out.q[i - d];
                    break;
                }
                if (i + d < n && scored[i + d]) {
                    out.q[i] = out.q[i + d];
                    break;
                }
            }
        }
    } else {
        std::vector<double> a, b;
        for (int i = 0; i < n; ++i) {
            detail::gather_window(gray0, gray1, overlap, seam.pixels[i].x, seam.pixels[i].y,
                                  half, a, b);
            out.q[i] = 1.0 - detail::ssim_of(a, b);
        }
    }

    out.mean = 0.0;
    out.max = out.q[0];
    for (int i = 0; i < n; ++i) {
        out.mean += out.q[i];
        out.max = std::max(out.max, out.q[i]);
    }
    out.mean /= double(n);
    return out;
}

} // namespace seamweld::reference
