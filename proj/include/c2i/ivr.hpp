#pragma once

#include <optional>

#include "c2i/audio.hpp"
#include "c2i/kmeans.hpp"

namespace c2i {

struct IvrDecision {
    std::optional<int> boundary_window;
    std::optional<double> boundary_s;
    int ivr_cluster = 0;
    bool trimmed = false;
    // True when no window after the head ever leaves the IVR cluster; the call
    // carries no human interaction and is excluded downstream.
    bool entirely_ivr = false;
};

// Boundary scan over a k=2 assignment sequence. The IVR cluster is the majority
// cluster among the first head_windows assignments (tie -> cluster 0). The
// boundary is the smallest t such that windows t..t+consec_m-1 are all non-IVR;
// t = 0 means the call has no IVR head.
IvrDecision detect_ivr_boundary(const ClusterModel& model, int head_windows, int consec_m,
                                double hop_s);

struct TrimResult {
    StereoCall call;
    std::optional<std::string> warning;
};

// Cuts both channels at boundary_s so cross-channel alignment is preserved.
// Without a boundary the call passes through unchanged with a warning.
TrimResult trim_ivr(const StereoCall& call, const IvrDecision& decision);

}  // namespace c2i
