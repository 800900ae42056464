#include "reachcount/report.hpp"

namespace reachcount {

namespace {

template <class T>
nlohmann::json nullable(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json j;
    j["mode"] = mode;
    j["model_path"] = model_path;
    j["property_path"] = property_path;
    j["vr_lb"] = nullable(vr_lb);
    j["vr_ub"] = nullable(vr_ub);
    j["point_estimate"] = nullable(point_estimate);
    j["exact"] = exact;
    j["timed_out"] = timed_out;
    j["verdict"] = nullable(verdict);
    j["nodes_explored"] = nodes_explored;
    j["max_depth_reached"] = max_depth_reached;
    j["residual_volume"] = residual_volume;
    j["propagator"] = propagator;
    j["workers"] = workers;
    j["chunk_size"] = chunk_size;
    j["seed"] = nullable(seed);
    j["violating_points"] = nullable(violating_points);
    j["total_points"] = nullable(total_points);
    if (estimator) {
        j["estimator"] = {
            {"splits", nullable(estimator->splits)},
            {"samples_per_split", nullable(estimator->samples_per_split)},
            {"runs", nullable(estimator->runs)},
            {"samples", nullable(estimator->samples)},
            {"confidence", estimator->confidence},
            {"samples_used", estimator->samples_used},
        };
    } else {
        j["estimator"] = nullptr;
    }
    j["wall_time_ms"] = wall_time_ms;
    j["tool_version"] = tool_version;
    return j;
}

}  // namespace reachcount
