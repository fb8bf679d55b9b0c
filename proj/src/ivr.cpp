#include "c2i/ivr.hpp"

#include <cmath>

namespace c2i {

IvrDecision detect_ivr_boundary(const ClusterModel& model, int head_windows, int consec_m,
                                double hop_s) {
    if (model.centroids.rows() != 2) throw PipelineError("ivr: boundary detection requires k = 2");
    if (model.assignments.empty()) throw PipelineError("ivr: empty assignment sequence");
    if (head_windows < 1 || consec_m < 1)
        throw PipelineError("ivr: head_windows and consec_m must be >= 1");

    const auto& a = model.assignments;
    int n = int(a.size());

    int head = std::min(head_windows, n);
    int ones = 0;
    for (int i = 0; i < head; ++i) ones += a[std::size_t(i)];
    IvrDecision dec;
    dec.ivr_cluster = (2 * ones > head) ? 1 : 0;  // tie -> cluster 0

    std::optional<int> boundary;
    int run = 0;
    for (int t = 0; t < n; ++t) {
        if (a[std::size_t(t)] != dec.ivr_cluster) {
            if (++run >= consec_m) {
                boundary = t - consec_m + 1;
                break;
            }
        } else {
            run = 0;
        }
    }

    if (!boundary) {
        bool any_non_ivr = false;
        for (int v : a)
            if (v != dec.ivr_cluster) any_non_ivr = true;
        dec.entirely_ivr = !any_non_ivr;
        return dec;
    }
    if (*boundary == 0) return dec;  // conversation from the start: no IVR head

    dec.boundary_window = *boundary;
    dec.boundary_s = double(*boundary) * hop_s;
    dec.trimmed = true;
    return dec;
}

TrimResult trim_ivr(const StereoCall& call, const IvrDecision& decision) {
    TrimResult result;
    result.call = call;
    if (!decision.boundary_s) {
        result.warning = "no IVR boundary detected for call " + call.call_id +
                         (decision.entirely_ivr ? " (entirely IVR)" : "; passing through untrimmed");
        return result;
    }
    auto cut = Eigen::Index(std::llround(*decision.boundary_s * call.agent.sample_rate_hz));
    if (cut > call.agent.samples.size() || cut > call.customer.samples.size())
        throw PipelineError("ivr: boundary beyond clip duration for call " + call.call_id);
    result.call.agent.samples = call.agent.samples.tail(call.agent.samples.size() - cut).eval();
    result.call.customer.samples =
        call.customer.samples.tail(call.customer.samples.size() - cut).eval();
    return result;
}

}  // namespace c2i
