#pragma once

#include <algorithm>

namespace seamweld {

/// Axis-aligned pixel rectangle, [x0,x1) x [y0,y1).
struct Rect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool empty() const { return x1 <= x0 || y1 <= y0; }

    bool contains(int x, int y) const {
        return x >= x0 && x < x1 && y >= y0 && y < y1;
    }

    bool intersects(const Rect& o) const {
        return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
    }

    Rect united(const Rect& o) const {
        return {std::min(x0, o.x0), std::min(y0, o.y0),
                std::max(x1, o.x1), std::max(y1, o.y1)};
    }

    Rect expanded(int margin) const {
        return {x0 - margin, y0 - margin, x1 + margin, y1 + margin};
    }

    Rect clipped(int w, int h) const {
        return {std::max(x0, 0), std::max(y0, 0), std::min(x1, w), std::min(y1, h)};
    }

    bool operator==(const Rect& o) const = default;
};

} // namespace seamweld
