#pragma once

#include <json.hpp>

#include "seamweld/lpam.hpp"
#include "seamweld/quality.hpp"

namespace seamweld {

inline nlohmann::json metrics_to_json(const SeamMetrics& m) {
    return nlohmann::json{{"rmse", m.rmse},   {"psnr", m.psnr},
                          {"ssim", m.ssim},   {"zncc", m.zncc},
                          {"seam_length", m.seam_length}, {"window", m.window}};
}

inline nlohmann::json report_to_json(const LpamReport& r) {
    nlohmann::json components = nlohmann::json::array();
    for (const ComponentReport& c : r.components) {
        components.push_back({{"range", {c.range.first, c.range.second}},
                              {"rect", {c.rect.x0, c.rect.y0, c.rect.x1, c.rect.y1}},
                              {"pre_mean_q", c.pre_mean_q},
                              {"post_mean_q", c.post_mean_q},
                              {"skipped", c.skipped},
                              {"reason", c.reason}});
    }
    return nlohmann::json{{"plausible", r.plausible},
                          {"pre_mean", r.pre_mean},
                          {"pre_max", r.pre_max},
                          {"post_mean", r.post_mean},
                          {"post_max", r.post_max},
                          {"components", components},
                          {"elapsed_ms",
                           {{"score", r.score_ms},
                            {"flow", r.flow_ms},
                            {"warp", r.warp_ms},
                            {"cut", r.cut_ms},
                            {"total", r.total_ms}}}};
}

} // namespace seamweld
