#include "seamweld/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seamweld/error.hpp"
#include "seamweld/runtime.hpp"

namespace seamweld {

namespace detail {

void descriptor_at(const Image& gray, int x, int y, float* out) {
    const int w = gray.width, h = gray.height;
    auto val = [&](int xx, int yy) {
        return double(gray.at(std::clamp(xx, 0, w - 1), std::clamp(yy, 0, h - 1), 0));
    };
    double acc[128] = {};
    for (int dy = -8; dy < 8; ++dy) {
        for (int dx = -8; dx < 8; ++dx) {
            int px = x + dx, py = y + dy;
            double gx = 0.5 * (val(px + 1, py) - val(px - 1, py));
            double gy = 0.5 * (val(px, py + 1) - val(px, py - 1));
            double mag = std::sqrt(gx * gx + gy * gy);
            if (mag < 1e-12) continue;
            double theta = std::atan2(gy, gx); // (-pi, pi]
            int bin = int((theta + 3.14159265358979323846) * (8.0 / 6.28318530717958647692));
            bin = std::clamp(bin, 0, 7);
            int cell = ((dy + 8) / 4) * 4 + (dx + 8) / 4;
            acc[cell * 8 + bin] += mag;
        }
    }
    double norm = 0.0;
    for (double a : acc) norm += a * a;
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
        std::fill(out, out + 128, 0.0f);
        return;
    }
    double norm2 = 0.0;
    for (int i = 0; i < 128; ++i) {
        acc[i] = std::min(acc[i] / norm, 0.2);
        norm2 += acc[i] * acc[i];
    }
    norm2 = std::sqrt(norm2);
    for (int i = 0; i < 128; ++i) out[i] = float(acc[i] / norm2);
}

DescriptorField halve_descriptors(const DescriptorField& fine) {
    int cw = (fine.width + 1) / 2, ch = (fine.height + 1) / 2;
    DescriptorField out(cw, ch);
    for (int y = 0; y < ch; ++y) {
        for (int x = 0; x < cw; ++x) {
            float* o = out.at(x, y);
            double acc[128] = {};
            int count = 0;
            for (int sy = 2 * y; sy < std::min(2 * y + 2, fine.height); ++sy) {
                for (int sx = 2 * x; sx < std::min(2 * x + 2, fine.width); ++sx) {
                    const float* f = fine.at(sx, sy);
                    for (int k = 0; k < 128; ++k) acc[k] += f[k];
                    ++count;
                }
            }
            for (int k = 0; k < 128; ++k) o[k] = float(acc[k] / count);
        }
    }
    return out;
}

} // namespace detail

namespace {

DescriptorField compute_descriptors(const Image& gray, bool parallel) {
    DescriptorField out(gray.width, gray.height);
    if (parallel) {
        int nt = runtime::max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
        for (int y = 0; y < gray.height; ++y)
            for (int x = 0; x < gray.width; ++x) detail::descriptor_at(gray, x, y, out.at(x, y));
    } else {
        for (int y = 0; y < gray.height; ++y)
            for (int x = 0; x < gray.width; ++x) detail::descriptor_at(gray, x, y, out.at(x, y));
    }
    return out;
}

// Message for a truncated-L1 pairwise cost via the lower envelope of the
// source costs; the destination window may sit at a shifted absolute
// position (shift = dst_start - src_start in label units).
void pass_message(const std::vector<double>& hc, int shift, double alpha, double cap,
                  std::vector<double>& env, std::vector<double>& tmp, float* out) {
    int L = int(hc.size());
    env = hc;
    for (int i = 1; i < L; ++i) env[i] = std::min(env[i], env[i - 1] + alpha);
    for (int i = L - 2; i >= 0; --i) env[i] = std::min(env[i], env[i + 1] + alpha);
    double mn = hc[0];
    for (int i = 1; i < L; ++i) mn = std::min(mn, hc[i]);
    double ceiling = mn + cap;
    double lo = std::numeric_limits<double>::infinity();
    tmp.resize(L);
    for (int m = 0; m < L; ++m) {
        int k = m + shift;
        double v;
        if (k < 0) v = env[0] + alpha * double(-k);
        else if (k >= L) v = env[L - 1] + alpha * double(k - L + 1);
        else v = env[k];
        v = std::min(v, ceiling);
        tmp[m] = v;
        lo = std::min(lo, v);
    }
    for (int m = 0; m < L; ++m) out[m] = float(tmp[m] - lo);
}

// Dual-layer message passing on one pyramid level. The u and v layers each
// carry spatial messages over a checkerboard schedule; the cached
// descriptor-distance volume couples them through per-pixel cross messages.
struct BpLevel {
    int w, h, L, radius;
    const DescriptorField& dt;
    const DescriptorField& dr;
    const FlowParams& prm;
    bool parallel;
    std::vector<int> cu, cv; // per-pixel search window centers
    std::vector<float> data; // w*h*L*L truncated descriptor distances
    std::vector<float> su, sv; // spatial in-messages, 4 slots per pixel
    std::vector<float> iu, iv; // cross-layer in-messages
    std::vector<int> fu, fv;

    BpLevel(const DescriptorField& dtf, const DescriptorField& drf, const FlowParams& p,
            std::vector<int> cu0, std::vector<int> cv0, bool par)
        : w(dtf.width), h(dtf.height), L(2 * p.radius + 1), radius(p.radius),
          dt(dtf), dr(drf), prm(p), parallel(par), cu(std::move(cu0)), cv(std::move(cv0)) {
        size_t n = size_t(w) * h;
        data.assign(n * L * L, 0.0f);
        su.assign(n * 4 * L, 0.0f);
        sv.assign(n * 4 * L, 0.0f);
        iu.assign(n * L, 0.0f);
        iv.assign(n * L, 0.0f);
        fu.assign(n, 0);
        fv.assign(n, 0);
    }

    size_t didx(int p, int a, int b) const { return (size_t(p) * L + a) * L + b; }
    size_t sidx(int p, int d, int l) const { return (size_t(p) * 4 + d) * L + l; }

    double unary_u(int p, int l) const { return prm.eta * std::abs(double(cu[p] + l - radius)); }
    double unary_v(int p, int l) const { return prm.eta * std::abs(double(cv[p] + l - radius)); }

    void data_row(int y) {
        for (int x = 0; x < w; ++x) {
            int p = y * w + x;
            const float* ref = dr.at(x, y);
            for (int a = 0; a < L; ++a) {
                int sx = std::clamp(x + cu[p] + a - radius, 0, w - 1);
                for (int b = 0; b < L; ++b) {
                    int sy = std::clamp(y + cv[p] + b - radius, 0, h - 1);
                    const float* tgt = dt.at(sx, sy);
                    double s = 0.0;
                    for (int k = 0; k < 128; ++k) s += std::abs(double(tgt[k]) - double(ref[k]));
                    data[didx(p, a, b)] = float(std::min(s, prm.truncation));
                }
            }
        }
    }

    struct Scratch {
        std::vector<double> bh_u, bh_v, niu, niv, hc, env, tmp;
    };

    // In-message slot d holds what the neighbor at kIn[d] sent. An update
    // writes the neighbor's slot with the same index as the out direction
    // and excludes the in-message slot d ^ 1 (the reverse edge).
    static constexpr int kOut[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

    void update_pixel(int x, int y, Scratch& s) {
        int p = y * w + x;
        s.bh_u.resize(L);
        s.bh_v.resize(L);
        s.niu.resize(L);
        s.niv.resize(L);
        s.hc.resize(L);
        for (int a = 0; a < L; ++a)
            s.bh_u[a] = unary_u(p, a) + su[sidx(p, 0, a)] + su[sidx(p, 1, a)] +
                        su[sidx(p, 2, a)] + su[sidx(p, 3, a)];
        for (int b = 0; b < L; ++b)
            s.bh_v[b] = unary_v(p, b) + sv[sidx(p, 0, b)] + sv[sidx(p, 1, b)] +
                        sv[sidx(p, 2, b)] + sv[sidx(p, 3, b)];

        double lo_u = std::numeric_limits<double>::infinity();
        double lo_v = std::numeric_limits<double>::infinity();
        for (int a = 0; a < L; ++a) {
            double best = std::numeric_limits<double>::infinity();
            for (int b = 0; b < L; ++b)
                best = std::min(best, double(data[didx(p, a, b)]) + s.bh_v[b]);
            s.niu[a] = best;
            lo_u = std::min(lo_u, best);
        }
        for (int b = 0; b < L; ++b) {
            double best = std::numeric_limits<double>::infinity();
            for (int a = 0; a < L; ++a)
                best = std::min(best, double(data[didx(p, a, b)]) + s.bh_u[a]);
            s.niv[b] = best;
            lo_v = std::min(lo_v, best);
        }
        for (int a = 0; a < L; ++a) {
            s.niu[a] -= lo_u;
            iu[size_t(p) * L + a] = float(s.niu[a]);
        }
        for (int b = 0; b < L; ++b) {
            s.niv[b] -= lo_v;
            iv[size_t(p) * L + b] = float(s.niv[b]);
        }

        for (int j = 0; j < 4; ++j) {
            int qx = x + kOut[j][0], qy = y + kOut[j][1];
            if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
            int q = qy * w + qx;
            for (int a = 0; a < L; ++a)
                s.hc[a] = s.bh_u[a] - double(su[sidx(p, j ^ 1, a)]) + s.niu[a];
            pass_message(s.hc, cu[q] - cu[p], prm.alpha, prm.smooth_cap, s.env, s.tmp,
                         &su[sidx(q, j, 0)]);
            for (int b = 0; b < L; ++b)
                s.hc[b] = s.bh_v[b] - double(sv[sidx(p, j ^ 1, b)]) + s.niv[b];
            pass_message(s.hc, cv[q] - cv[p], prm.alpha, prm.smooth_cap, s.env, s.tmp,
                         &sv[sidx(q, j, 0)]);
        }
    }

    void sweep_row(int y, int parity) {
        Scratch s;
        for (int x = (y + parity) % 2; x < w; x += 2) update_pixel(x, y, s);
    }

    void readout_row(int y) {
        for (int x = 0; x < w; ++x) {
            int p = y * w + x;
            double best = std::numeric_limits<double>::infinity();
            int arg = 0;
            for (int a = 0; a < L; ++a) {
                double b = unary_u(p, a) + double(iu[size_t(p) * L + a]) + su[sidx(p, 0, a)] +
                           su[sidx(p, 1, a)] + su[sidx(p, 2, a)] + su[sidx(p, 3, a)];
                if (b < best) {
                    best = b;
                    arg = a;
                }
            }
            fu[p] = cu[p] + arg - radius;
            best = std::numeric_limits<double>::infinity();
            arg = 0;
            for (int b = 0; b < L; ++b) {
                double bb = unary_v(p, b) + double(iv[size_t(p) * L + b]) + sv[sidx(p, 0, b)] +
                            sv[sidx(p, 1, b)] + sv[sidx(p, 2, b)] + sv[sidx(p, 3, b)];
                if (bb < best) {
                    best = bb;
                    arg = b;
                }
            }
            fv[p] = cv[p] + arg - radius;
        }
    }

    void rows(void (BpLevel::*fn)(int)) {
        if (parallel) {
            int nt = runtime::max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
            for (int y = 0; y < h; ++y) (this->*fn)(y);
        } else {
            for (int y = 0; y < h; ++y) (this->*fn)(y);
        }
    }

    void run() {
        rows(&BpLevel::data_row);
        for (int it = 0; it < prm.iterations; ++it) {
            for (int parity = 0; parity < 2; ++parity) {
                if (parallel) {
                    int nt = runtime::max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
                    for (int y = 0; y < h; ++y) sweep_row(y, parity);
                } else {
                    for (int y = 0; y < h; ++y) sweep_row(y, parity);
                }
            }
        }
        rows(&BpLevel::readout_row);
    }
};

} // namespace

namespace detail {

FlowField estimate_flow_rows(const Image& target, const Image& reference,
                             const FlowParams& prm, bool parallel) {
    if (target.width != reference.width || target.height != reference.height)
        raise(ErrorKind::DimensionMismatch, "flow inputs differ in size");
    if (target.width < 1 || target.height < 1)
        raise(ErrorKind::InvalidInput, "flow inputs are empty");
    if (prm.radius < 1) raise(ErrorKind::InvalidInput, "flow search radius must be positive");

    Image gt = luminance(target);
    Image gr = luminance(reference);

    std::vector<DescriptorField> pt, pr;
    pt.push_back(compute_descriptors(gt, parallel));
    pr.push_back(compute_descriptors(gr, parallel));
    while (true) {
        int cw = (pt.back().width + 1) / 2, ch = (pt.back().height + 1) / 2;
        if (std::min(cw, ch) < prm.min_level_size) break;
        pt.push_back(halve_descriptors(pt.back()));
        pr.push_back(halve_descriptors(pr.back()));
    }

    int coarse = int(pt.size()) - 1;
    std::vector<int> cu(size_t(pt[coarse].width) * pt[coarse].height, 0), cv = cu;
    std::vector<int> fu, fv;
    for (int li = coarse; li >= 0; --li) {
        BpLevel level(pt[li], pr[li], prm, std::move(cu), std::move(cv), parallel);
        level.run();
        fu = std::move(level.fu);
        fv = std::move(level.fv);
        if (li > 0) {
            int fw = pt[li - 1].width, fh = pt[li - 1].height;
            int cw = pt[li].width, ch = pt[li].height;
            cu.assign(size_t(fw) * fh, 0);
            cv.assign(size_t(fw) * fh, 0);
            for (int y = 0; y < fh; ++y) {
                for (int x = 0; x < fw; ++x) {
                    int sx = std::min(x / 2, cw - 1), sy = std::min(y / 2, ch - 1);
                    cu[size_t(y) * fw + x] = 2 * fu[size_t(sy) * cw + sx];
                    cv[size_t(y) * fw + x] = 2 * fv[size_t(sy) * cw + sx];
                }
            }
        }
    }

    FlowField out(target.width, target.height);
    for (size_t i = 0; i < fu.size(); ++i) {
        out.u[i] = float(fu[i]);
        out.v[i] = float(fv[i]);
    }
    return out;
}

} // namespace detail

DescriptorField dense_descriptors(const Image& gray) {
    Image g = luminance(gray);
    return compute_descriptors(g, true);
}

FlowField estimate_flow(const Image& target, const Image& reference, const FlowParams& params) {
    return detail::estimate_flow_rows(target, reference, params, true);
}

} // namespace seamweld
