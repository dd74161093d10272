#include "seamweld/mincut.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <optional>

#include "seamweld/error.hpp"

namespace seamweld {

namespace {

// parent[] holds a direction 0..3 or one of these sentinels
constexpr int kNoParent = -1;
constexpr int kTerminal = -2;
constexpr int kOrphaned = -3;

enum : uint8_t { kFree = 0, kSrcTree = 1, kSnkTree = 2 };

// Boykov-Kolmogorov augmenting paths: grow source/sink trees until they
// touch, push flow along the bridge, re-adopt orphaned subtrees.
struct Solver {
    const GridGraph& g;
    int w, h;
    size_t n;
    std::vector<double> res_src, res_snk; // residual terminal capacities
    std::vector<double> eres;             // n*4 directed edge residuals
    std::vector<uint8_t> tree;
    std::vector<int> parent;
    std::vector<uint64_t> stamp;
    std::vector<long> dist;
    std::vector<uint8_t> queued;
    std::deque<int> active;
    std::deque<int> orphans;
    uint64_t time = 1;
    double flow = 0.0;

    explicit Solver(const GridGraph& graph)
        : g(graph), w(graph.width), h(graph.height), n(size_t(w) * h),
          res_src(n, 0.0), res_snk(n, 0.0), eres(n * 4, 0.0),
          tree(n, kFree), parent(n, kNoParent), stamp(n, 0),
          dist(n, 0), queued(n, 0) {}

    // directions: 0 = +x, 1 = -x, 2 = +y, 3 = -y; rev(d) = d ^ 1
    int neighbor(int i, int d) const {
        switch (d) {
            case 0: return i + 1;
            case 1: return i - 1;
            case 2: return i + w;
            default: return i - w;
        }
    }
    bool has_neighbor(int i, int d) const {
        switch (d) {
            case 0: return i % w + 1 < w;
            case 1: return i % w > 0;
            case 2: return i / w + 1 < h;
            default: return i / w > 0;
        }
    }
    static int rev(int d) { return d ^ 1; }
    double& edge_res(int i, int d) { return eres[size_t(i) * 4 + d]; }

    bool usable(int i, int d, int& q) const {
        if (!has_neighbor(i, d)) return false;
        q = neighbor(i, d);
        return g.node_active[q] != 0;
    }

    void set_active(int i) {
        if (!queued[i]) {
            queued[i] = 1;
            active.push_back(i);
        }
    }

    void make_orphan(int i) {
        parent[i] = kOrphaned;
        orphans.push_back(i);
    }

    void init() {
        bool any = false;
        for (size_t i = 0; i < n; ++i) {
            if (!g.node_active[i]) continue;
            any = true;
            if (g.source_cap[i] >= kHardCost && g.sink_cap[i] >= kHardCost)
                raise(ErrorKind::ConstraintConflict,
                      "node carries hard constraints toward both labels");
            double m = std::min(g.source_cap[i], g.sink_cap[i]);
            flow += m;
            res_src[i] = g.source_cap[i] - m;
            res_snk[i] = g.sink_cap[i] - m;
        }
        if (!any) raise(ErrorKind::InvalidInput, "mincut on a grid with no active nodes");
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                int i = y * w + x;
                if (!g.node_active[i]) continue;
                if (x + 1 < w && g.node_active[i + 1]) {
                    edge_res(i, 0) = g.right_cap[i];
                    edge_res(i + 1, 1) = g.right_cap[i];
                }
                if (y + 1 < h && g.node_active[i + w]) {
                    edge_res(i, 2) = g.down_cap[i];
                    edge_res(i + w, 3) = g.down_cap[i];
                }
            }
        }
        for (size_t i = 0; i < n; ++i) {
            if (!g.node_active[i]) continue;
            if (res_src[i] > 0) {
                tree[i] = kSrcTree;
            } else if (res_snk[i] > 0) {
                tree[i] = kSnkTree;
            } else {
                continue;
            }
            parent[i] = kTerminal;
            dist[i] = 1;
            stamp[i] = time;
            set_active(int(i));
        }
    }

    // Bridge edge between the trees, oriented source side -> sink side.
    struct Bridge {
        int src_node;
        int dir;
    };

    std::optional<Bridge> grow() {
        while (!active.empty()) {
            int p = active.front();
            active.pop_front();
            queued[p] = 0;
            if (tree[p] == kFree) continue;
            for (int d = 0; d < 4; ++d) {
                int q;
                if (!usable(p, d, q)) continue;
                double r = (tree[p] == kSrcTree) ? edge_res(p, d)
                                                 : edge_res(q, rev(d));
                if (r <= 0) continue;
                if (tree[q] == kFree) {
                    tree[q] = tree[p];
                    parent[q] = rev(d);
                    stamp[q] = stamp[p];
                    dist[q] = dist[p] + 1;
                    set_active(q);
                } else if (tree[q] != tree[p]) {
                    set_active(p); // p is not fully scanned yet
                    if (tree[p] == kSrcTree) return Bridge{p, d};
                    return Bridge{q, rev(d)};
                }
            }
        }
        return std::nullopt;
    }

    void augment(const Bridge& b) {
        ++time;
        int q = neighbor(b.src_node, b.dir);
        double bottleneck = edge_res(b.src_node, b.dir);
        for (int x = b.src_node; parent[x] != kTerminal;) {
            int pd = parent[x];
            int y = neighbor(x, pd);
            bottleneck = std::min(bottleneck, edge_res(y, rev(pd)));
            x = y;
        }
        {
            int x = b.src_node;
            while (parent[x] != kTerminal) x = neighbor(x, parent[x]);
            bottleneck = std::min(bottleneck, res_src[x]);
        }
        for (int x = q; parent[x] != kTerminal;) {
            int pd = parent[x];
            int y = neighbor(x, pd);
            bottleneck = std::min(bottleneck, edge_res(x, pd));
            x = y;
        }
        {
            int x = q;
            while (parent[x] != kTerminal) x = neighbor(x, parent[x]);
            bottleneck = std::min(bottleneck, res_snk[x]);
        }

        edge_res(b.src_node, b.dir) -= bottleneck;
        edge_res(q, rev(b.dir)) += bottleneck;
        {
            int x = b.src_node;
            while (parent[x] != kTerminal) {
                int pd = parent[x];
                int y = neighbor(x, pd);
                edge_res(y, rev(pd)) -= bottleneck;
                edge_res(x, pd) += bottleneck;
                if (edge_res(y, rev(pd)) <= 0) make_orphan(x);
                x = y;
            }
            res_src[x] -= bottleneck;
            if (res_src[x] <= 0) make_orphan(x);
        }
        {
            int x = q;
            while (parent[x] != kTerminal) {
                int pd = parent[x];
                int y = neighbor(x, pd);
                edge_res(x, pd) -= bottleneck;
                edge_res(y, rev(pd)) += bottleneck;
                if (edge_res(x, pd) <= 0) make_orphan(x);
                x = y;
            }
            res_snk[x] -= bottleneck;
            if (res_snk[x] <= 0) make_orphan(x);
        }
        flow += bottleneck;
    }

    // Depth of q's chain to a terminal, or -1 when the chain is broken.
    // Verified prefixes are stamped with the current time so repeated
    // checks in one adoption phase stay cheap.
    long rooted_dist(int q) {
        long d = 0;
        int x = q;
        while (true) {
            if (stamp[x] == time) {
                d += dist[x];
                break;
            }
            int pd = parent[x];
            if (pd == kTerminal) {
                d += 1;
                break;
            }
            if (pd == kNoParent || pd == kOrphaned) return -1;
            x = neighbor(x, pd);
            ++d;
        }
        long dd = d;
        x = q;
        while (stamp[x] != time) {
            stamp[x] = time;
            dist[x] = dd--;
            if (parent[x] == kTerminal) break;
            x = neighbor(x, parent[x]);
        }
        return d;
    }

    void adopt() {
        while (!orphans.empty()) {
            int o = orphans.front();
            orphans.pop_front();
            if (parent[o] != kOrphaned) continue;
            uint8_t t = tree[o];
            int best_d = -1;
            long best_dist = LONG_MAX;
            for (int d = 0; d < 4; ++d) {
                int q;
                if (!usable(o, d, q)) continue;
                if (tree[q] != t) continue;
                double r = (t == kSrcTree) ? edge_res(q, rev(d)) : edge_res(o, d);
                if (r <= 0) continue;
                long dd = rooted_dist(q);
                if (dd >= 0 && dd < best_dist) {
                    best_dist = dd;
                    best_d = d;
                }
            }
            if (best_d >= 0) {
                parent[o] = best_d;
                stamp[o] = time;
                dist[o] = best_dist + 1;
                continue;
            }
            for (int d = 0; d < 4; ++d) {
                int q;
                if (!usable(o, d, q)) continue;
                if (tree[q] != t) continue;
                double r = (t == kSrcTree) ? edge_res(q, rev(d)) : edge_res(o, d);
                if (r > 0) set_active(q);
                if (parent[q] == rev(d)) make_orphan(q);
            }
            tree[o] = kFree;
        }
    }

    CutResult run() {
        init();
        while (true) {
            auto bridge = grow();
            if (!bridge) break;
            augment(*bridge);
            adopt();
        }
        CutResult out;
        out.labels.assign(n, 1);
        for (size_t i = 0; i < n; ++i)
            if (g.node_active[i] && tree[i] == kSrcTree) out.labels[i] = 0;
        out.cut_cost = flow;
        return out;
    }
};

} // namespace

CutResult solve_mincut(const GridGraph& graph) {
    Solver s(graph);
    return s.run();
}

double energy_of(const GridGraph& graph, const std::vector<uint8_t>& labels) {
    int w = graph.width, h = graph.height;
    double e = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int i = y * w + x;
            if (!graph.node_active[i]) continue;
            e += labels[i] ? graph.source_cap[i] : graph.sink_cap[i];
            if (x + 1 < w && graph.node_active[i + 1] && labels[i] != labels[i + 1])
                e += graph.right_cap[i];
            if (y + 1 < h && graph.node_active[i + w] && labels[i] != labels[i + w])
                e += graph.down_cap[i];
        }
    }
    return e;
}

} // namespace seamweld
