#pragma once

#include <cstdint>
#include <vector>

namespace seamweld {

/// Terminal costs at or above this value are unbreakable label constraints.
/// Soft costs in this codebase stay below ~6 per term, so any cut of
/// realistic size is cheaper than a single hard violation.
inline constexpr double kHardCost = 1e9;

/// 4-connected grid with terminal and pairwise costs.
///
/// source_cap[i] is the cost of giving node i label 1, sink_cap[i] the cost
/// of label 0. right_cap[i] / down_cap[i] connect node i to its +x / +y
/// neighbor and are charged only when the two labels differ. Nodes with
/// node_active = 0 are absent; edges touching them are ignored.
struct GridGraph {
    int width = 0;
    int height = 0;
    std::vector<double> source_cap;
    std::vector<double> sink_cap;
    std::vector<double> right_cap;
    std::vector<double> down_cap;
    std::vector<uint8_t> node_active;

    GridGraph() = default;
    GridGraph(int w, int h, bool active = true)
        : width(w), height(h),
          source_cap(size_t(w) * h, 0.0), sink_cap(size_t(w) * h, 0.0),
          right_cap(size_t(w) * h, 0.0), down_cap(size_t(w) * h, 0.0),
          node_active(size_t(w) * h, active ? 1 : 0) {}

    int index(int x, int y) const { return y * width + x; }

    /// Force a label by making the opposite one unaffordable.
    void force_label(int x, int y, int label) {
        if (label == 0) source_cap[index(x, y)] = kHardCost;
        else            sink_cap[index(x, y)] = kHardCost;
    }
};

struct CutResult {
    std::vector<uint8_t> labels; // per node; meaningful only where node_active
    double cut_cost = 0.0;
};

/// Exact s-t min cut (augmenting paths with source/sink search trees).
/// Throws ConstraintConflict when a node carries kHardCost on both terminals,
/// InvalidInput when the grid has no active node.
CutResult solve_mincut(const GridGraph& graph);

/// Exact energy of a labeling under the graph's costs; the solver's
/// independent self-check.
double energy_of(const GridGraph& graph, const std::vector<uint8_t>& labels);

} // namespace seamweld
