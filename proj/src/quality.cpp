#include "seamweld/quality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include "seamweld/error.hpp"
#include "seamweld/runtime.hpp"

namespace seamweld {

namespace detail {

double ssim_of(const std::vector<double>& a, const std::vector<double>& b) {
    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= double(n);
    mb /= double(n);
    double va = 0.0, vb = 0.0, cov = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        va += da * da;
        vb += db * db;
        cov += da * db;
    }
    va /= double(n);
    vb /= double(n);
    cov /= double(n);
    return ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
           ((ma * ma + mb * mb + c1) * (va + vb + c2));
}

int gather_window(const Image& gray0, const Image& gray1, const ValidityMask& overlap,
                  int cx, int cy, int half, std::vector<double>& a, std::vector<double>& b) {
    a.clear();
    b.clear();
    int x0 = std::max(0, cx - half), x1 = std::min(gray0.width, cx + half + 1);
    int y0 = std::max(0, cy - half), y1 = std::min(gray0.height, cy + half + 1);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            if (!overlap.at(x, y)) continue;
            a.push_back(gray0.at(x, y, 0));
            b.push_back(gray1.at(x, y, 0));
        }
    }
    return int(a.size());
}

bool score_pixel(const Image& gray0, const Image& gray1, const ValidityMask& overlap,
                 int cx, int cy, int half, double& q_out) {
    std::vector<double> a, b;
    if (gather_window(gray0, gray1, overlap, cx, cy, half, a, b) < 9) return false;
    q_out = 1.0 - ssim_of(a, b);
    return true;
}

} // namespace detail

namespace {

void require_odd_window(int window) {
    if (window < 3 || window % 2 == 0)
        raise(ErrorKind::InvalidInput, "window size must be odd and at least 3");
}

// Fill gaps from the nearest scored index (lower index wins ties). Returns
// false when nothing is scored.
bool borrow_nearest(const std::vector<uint8_t>& scored, std::vector<double>& q) {
    int n = int(q.size());
    bool any = std::find(scored.begin(), scored.end(), uint8_t(1)) != scored.end();
    if (!any) return false;
    for (int i = 0; i < n; ++i) {
        if (scored[i]) continue;
        for (int d = 1; d < n; ++d) {
            if (i - d >= 0 && scored[i - d]) {
                q[i] = q[i - d];
                break;
            }
            if (i + d < n && scored[i + d]) {
                q[i] = q[i + d];
                break;
            }
        }
    }
    return true;
}

} // namespace

SeamScore evaluate_seam(const AlignedPair& pair, const Seam& seam,
                        const ValidityMask& overlap, int window) {
    require_odd_window(window);
    if (seam.pixels.empty()) raise(ErrorKind::EmptySeam, "cannot score an empty seam");
    Image gray0 = luminance(pair.target);
    Image gray1 = luminance(pair.reference);
    int half = window / 2;
    int n = int(seam.pixels.size());

    SeamScore out;
    out.q.assign(n, 0.0);
    std::vector<uint8_t> scored(n, 0);
    int nt = runtime::max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int i = 0; i < n; ++i) {
        double q = 0.0;
        if (detail::score_pixel(gray0, gray1, overlap, seam.pixels[i].x, seam.pixels[i].y,
                                half, q)) {
            out.q[i] = q;
            scored[i] = 1;
        }
    }
    if (!borrow_nearest(scored, out.q)) {
        // window never reached 9 overlap pixels; fall back to whatever fits
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

double otsu_threshold(const std::vector<double>& values) {
    if (values.empty()) raise(ErrorKind::InvalidInput, "threshold of an empty sample");
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) return hi;

    constexpr int kBins = 256;
    std::array<long long, kBins> hist{};
    double scale = double(kBins) / (hi - lo);
    for (double v : values) {
        int b = int((v - lo) * scale);
        hist[std::clamp(b, 0, kBins - 1)] += 1;
    }
    long long total = (long long)values.size();
    long long total_sum = 0;
    for (int b = 0; b < kBins; ++b) total_sum += (long long)b * hist[b];

    // between-class variance w0*w1*(mu0-mu1)^2 written over integer moments,
    // so equal splits compare equal and the lower edge wins
    long long w0 = 0, s0 = 0;
    double best = -1.0;
    int best_t = 0;
    for (int t = 0; t < kBins - 1; ++t) {
        w0 += hist[t];
        s0 += (long long)t * hist[t];
        long long w1 = total - w0;
        if (w0 == 0) continue;
        if (w1 == 0) break;
        long long diff = s0 * w1 - (total_sum - s0) * w0;
        double between = double(diff) * double(diff) / (double(w0) * double(w1));
        if (between > best) {
            best = between;
            best_t = t;
        }
    }
    return lo + double(best_t + 1) * (hi - lo) / double(kBins);
}

SeamComponents detect_misaligned(const SeamScore& score, double k) {
    SeamComponents out;
    if (score.q.empty()) raise(ErrorKind::EmptySeam, "no scores to classify");
    if (score.max <= k * score.mean) return out;

    out.plausible = false;
    out.threshold = otsu_threshold(score.q);
    int n = int(score.q.size());

    std::vector<std::pair<int, int>> runs;
    for (int i = 0; i < n;) {
        if (score.q[i] < out.threshold) {
            ++i;
            continue;
        }
        int j = i;
        while (j < n && score.q[j] >= out.threshold) ++j;
        runs.push_back({i, j});
        i = j;
    }
    std::vector<std::pair<int, int>> merged;
    for (auto& r : runs) {
        if (!merged.empty() && r.first - merged.back().second <= 5)
            merged.back().second = r.second;
        else
            merged.push_back(r);
    }
    for (auto& r : merged)
        if (r.second - r.first >= 3) out.ranges.push_back(r);
    if (out.ranges.empty()) out.plausible = true;
    return out;
}

std::vector<PatchRegion> enclosing_patches(const LabelMask& mask, const Seam& seam,
                                           const SeamComponents& components, int margin) {
    struct Work {
        Rect r;
        std::vector<std::pair<int, int>> ranges;
    };
    std::vector<Work> works;
    for (auto& range : components.ranges) {
        Rect r{mask.width, mask.height, 0, 0};
        for (int i = range.first; i < range.second; ++i) {
            const SeamPixel& p = seam.pixels[i];
            r.x0 = std::min(r.x0, p.x);
            r.y0 = std::min(r.y0, p.y);
            r.x1 = std::max(r.x1, p.x + 1);
            r.y1 = std::max(r.y1, p.y + 1);
        }
        works.push_back({r.expanded(margin).clipped(mask.width, mask.height), {range}});
    }

    for (bool merged = true; merged;) {
        merged = false;
        for (size_t i = 0; i < works.size() && !merged; ++i) {
            for (size_t j = i + 1; j < works.size() && !merged; ++j) {
                if (!works[i].r.intersects(works[j].r)) continue;
                works[i].r = works[i].r.united(works[j].r);
                works[i].ranges.insert(works[i].ranges.end(), works[j].ranges.begin(),
                                       works[j].ranges.end());
                works.erase(works.begin() + j);
                merged = true;
            }
        }
    }

    auto first_index = [](const Work& w) {
        int m = w.ranges[0].first;
        for (auto& r : w.ranges) m = std::min(m, r.first);
        return m;
    };
    std::sort(works.begin(), works.end(),
              [&](const Work& a, const Work& b) { return first_index(a) < first_index(b); });

    std::vector<PatchRegion> out;
    for (auto& w : works) {
        PatchRegion region;
        region.rect = w.r;
        region.ranges = w.ranges;
        std::sort(region.ranges.begin(), region.ranges.end());

        int minx = mask.width, maxx = -1, miny = mask.height, maxy = -1;
        for (auto& range : w.ranges) {
            for (int i = range.first; i < range.second; ++i) {
                const SeamPixel& p = seam.pixels[i];
                minx = std::min(minx, p.x);
                maxx = std::max(maxx, p.x);
                miny = std::min(miny, p.y);
                maxy = std::max(maxy, p.y);
            }
        }
        // a lengthwise-vertical seam segment needs its ramp across x
        region.axis_horizontal = (maxy - miny) >= (maxx - minx);

        long low = 0, high = 0;
        if (region.axis_horizontal) {
            int mid = (w.r.x0 + w.r.x1) / 2;
            for (int y = w.r.y0; y < w.r.y1; ++y)
                for (int x = w.r.x0; x < w.r.x1; ++x) {
                    if (mask.at(x, y) != kFromTarget) continue;
                    (x < mid ? low : high) += 1;
                }
        } else {
            int mid = (w.r.y0 + w.r.y1) / 2;
            for (int y = w.r.y0; y < w.r.y1; ++y)
                for (int x = w.r.x0; x < w.r.x1; ++x) {
                    if (mask.at(x, y) != kFromTarget) continue;
                    (y < mid ? low : high) += 1;
                }
        }
        region.t0_low = low >= high;
        out.push_back(std::move(region));
    }
    return out;
}

SeamMetrics seam_metrics(const AlignedPair& pair, const Seam& seam,
                         const ValidityMask& overlap, int window) {
    require_odd_window(window);
    if (seam.pixels.empty()) raise(ErrorKind::EmptySeam, "cannot measure an empty seam");
    Image gray0 = luminance(pair.target);
    Image gray1 = luminance(pair.reference);
    int half = window / 2;
    int n = int(seam.pixels.size());

    std::vector<double> rmse(n, 0.0), psnr(n, 0.0), ssim(n, 0.0), zncc(n, 0.0);
    std::vector<uint8_t> scored(n, 0);

    auto measure = [&](int i, int min_count) {
        std::vector<double> a, b;
        int count = detail::gather_window(gray0, gray1, overlap, seam.pixels[i].x,
                                          seam.pixels[i].y, half, a, b);
        if (count < min_count) return false;
        double mse = 0.0, ma = 0.0, mb = 0.0;
        for (int j = 0; j < count; ++j) {
            double d = a[j] - b[j];
            mse += d * d;
            ma += a[j];
            mb += b[j];
        }
        mse /= count;
        ma /= count;
        mb /= count;
        rmse[i] = std::sqrt(mse);
        psnr[i] = mse < 1e-10 ? 100.0 : 10.0 * std::log10(1.0 / mse);
        ssim[i] = detail::ssim_of(a, b);
        double va = 0.0, vb = 0.0, cov = 0.0;
        for (int j = 0; j < count; ++j) {
            va += (a[j] - ma) * (a[j] - ma);
            vb += (b[j] - mb) * (b[j] - mb);
            cov += (a[j] - ma) * (b[j] - mb);
        }
        double ncc;
        if (va < 1e-20 || vb < 1e-20) {
            bool same = true;
            for (int j = 0; j < count && same; ++j)
                same = std::abs(a[j] - b[j]) <= 1e-6;
            ncc = same ? 1.0 : 0.0;
        } else {
            ncc = cov / std::sqrt(va * vb);
        }
        zncc[i] = (1.0 - ncc) / 2.0;
        return true;
    };

    int nt = runtime::max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int i = 0; i < n; ++i) scored[i] = measure(i, 9) ? 1 : 0;

    bool any = std::find(scored.begin(), scored.end(), uint8_t(1)) != scored.end();
    if (!any) {
        for (int i = 0; i < n; ++i) measure(i, 1);
    } else {
        for (int i = 0; i < n; ++i) {
            if (scored[i]) continue;
            for (int d = 1; d < n; ++d) {
                int j = (i - d >= 0 && scored[i - d]) ? i - d
                        : (i + d < n && scored[i + d]) ? i + d
                                                       : -1;
                if (j < 0) continue;
                rmse[i] = rmse[j];
                psnr[i] = psnr[j];
                ssim[i] = ssim[j];
                zncc[i] = zncc[j];
                break;
            }
        }
    }

    SeamMetrics out;
    for (int i = 0; i < n; ++i) {
        out.rmse += rmse[i];
        out.psnr += psnr[i];
        out.ssim += ssim[i];
        out.zncc += zncc[i];
    }
    out.rmse /= n;
    out.psnr /= n;
    out.ssim /= n;
    out.zncc /= n;
    out.seam_length = n;
    out.window = window;
    return out;
}

} // namespace seamweld
