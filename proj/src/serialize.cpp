#include "minkloss/serialize.hpp"

namespace minkloss {

void to_json(nlohmann::json& j, const InequalityCheck& c) {
  j = nlohmann::json{{"applicable", c.applicable},
                     {"holds", c.holds},
                     {"lhs", c.lhs},
                     {"rhs", c.rhs},
                     {"slack", c.slack}};
}

void to_json(nlohmann::json& j, const BoundReport& r) {
  j = nlohmann::json{{"epsilon", r.epsilon},
                     {"L", r.L},
                     {"lambda_est", r.lambda_est},
                     {"k", r.k},
                     {"alpha", r.alpha},
                     {"sgd_distance", r.sgd_distance},
                     {"mkl_distance", r.mkl_distance},
                     {"mkl_top_ranks_clean", r.mkl_top_ranks_clean},
                     {"sgd_lower_bound", r.sgd_lower_bound},
                     {"mkl_upper_bound", r.mkl_upper_bound},
                     {"clean_gradient_bound", r.clean_gradient_bound},
                     {"relative_bound", r.relative_bound}};
}

void to_json(nlohmann::json& j, const StepBoundReport& r) {
  j = nlohmann::json{{"applicable", r.applicable},
                     {"eta", r.eta},
                     {"psi", r.psi},
                     {"r_t", r.r_t},
                     {"r_t_outlier_form", r.r_t_outlier_form},
                     {"delta_sq", r.delta_sq},
                     {"exact_expected_next_sq", r.exact_expected_next_sq},
                     {"bound_value", r.bound_value},
                     {"holds", r.holds}};
}

}  // namespace minkloss
