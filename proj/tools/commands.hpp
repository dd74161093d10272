#pragma once

#include <string>

namespace seamweld::cli {

// exit codes shared by every subcommand
inline constexpr int kOk = 0;
inline constexpr int kBadInput = 2;
inline constexpr int kEmptyOverlap = 3;
inline constexpr int kInternal = 4;

struct StitchArgs {
    std::string target;
    std::string reference;
    std::string out;
    bool no_lpam = false;
    double beta = 8.0;
    int window = 21;
    double k = 1.5;
    int margin = 21;
    std::string seam_vis;
    std::string flow_vis;
    std::string labels_out;
    std::string metrics;
    std::string report;
};

struct EvaluateArgs {
    std::string target;
    std::string reference;
    std::string labels; // optional; estimated when empty
    int window = 21;
    std::string metrics; // optional file, JSON always goes to stdout
};

struct BatchArgs {
    std::string list;
    std::string out_dir;
    double beta = 8.0;
    int window = 21;
    double k = 1.5;
    int margin = 21;
    std::string summary; // optional JSON file
};

struct VisualizeArgs {
    std::string target;
    std::string reference;
    std::string labels; // optional
    int window = 21;
    std::string out;
};

int cmd_stitch(const StitchArgs& args);
int cmd_evaluate(const EvaluateArgs& args);
int cmd_batch(const BatchArgs& args);
int cmd_visualize(const VisualizeArgs& args);

} // namespace seamweld::cli
