#include "qnslab/report.hpp"

namespace qnslab {

nlohmann::ordered_json witness_to_json(const Witness& w) {
    nlohmann::ordered_json j;
    j["kind"] = w.kind;
    j["center"] = std::vector<double>(w.center.begin(), w.center.end());
    j["scale"] = w.scale;
    if (w.time) j["time"] = *w.time;
    if (!w.detail.empty()) j["detail"] = w.detail;
    return j;
}

nlohmann::ordered_json NormReport::to_json() const {
    nlohmann::ordered_json j;
    j["norm"] = norm_name;
    j["value"] = value;
    j["witness"] = witness_to_json(witness);
    nlohmann::ordered_json params;
    params["alpha"] = alpha;
    params["beta"] = beta;
    if (horizon) params["T"] = *horizon;
    params["grid"] = {{"n", grid_dim}, {"N", grid_n}, {"L", grid_period}};
    j["params"] = params;
    j["convention_notes"] = convention_notes;
    nlohmann::ordered_json quad;
    quad["grid"] = quadrature_grid;
    quad["excluded_diagonal"] = excluded_diagonal;
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rates) r[k] = v;
    quad["rates"] = r;
    j["quadrature"] = quad;
    return j;
}

}  // namespace qnslab
