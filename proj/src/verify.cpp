#include "ncsverify/verify.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "ncsverify/errors.hpp"

namespace ncsverify {

std::string_view decision_name(Decision d) {
  switch (d) {
    case Decision::Affirm: return "affirm";
    case Decision::Deny: return "deny";
    case Decision::Undetermined: return "undetermined";
  }
  return "undetermined";
}

bool Verdict::has_flag(std::string_view f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

Verdict stability_test(const PlantModel& plant, SuccessCount counts, double delta, IntervalMethod method) {
  if (!plant.is_simple()) {
    throw InputError("stability_test needs A_closed = 0; use general_test for the switched model");
  }
  Verdict v;
  v.interval = make_interval(method, counts, delta);
  v.threshold_or_target = stability_threshold(plant);
  const double t = v.threshold_or_target;
  if (t < 0.0) {
    v.decision = Decision::Affirm;
    v.flags.emplace_back("trivially_stable");
  } else if (t < v.interval.lo) {
    v.decision = Decision::Affirm;
  } else if (t > v.interval.hi) {
    v.decision = Decision::Deny;
  }
  return v;
}

Verdict stability_test(const PlantModel& plant, const ChannelTrace& trace, double delta,
                       IntervalMethod method) {
  return stability_test(plant, trace.count(), delta, method);
}

Verdict cost_test(const PlantModel& plant, SuccessCount counts, double delta, double j_req,
                  IntervalMethod method) {
  if (!plant.is_simple()) throw InputError("cost_test needs A_closed = 0");
  if (!(j_req > 0.0) || !std::isfinite(j_req)) throw InputError("j_req must be positive");
  Verdict v;
  v.interval = make_interval(method, counts, delta);
  v.threshold_or_target = j_req;
  // The Lyapunov solution is unique when it exists, so feasibility of
  // {P = Q + (1-q) A'PA, P >= 0, Tr(PW) <= J} reduces to solving and comparing.
  if (lyapunov_cost_capped(plant, v.interval.lo, j_req) <= j_req) {
    v.decision = Decision::Affirm;
  } else if (lyapunov_cost_capped(plant, v.interval.hi, j_req) >= j_req) {
    v.decision = Decision::Deny;
  }
  return v;
}

Verdict cost_test(const PlantModel& plant, const ChannelTrace& trace, double delta, double j_req,
                  IntervalMethod method) {
  return cost_test(plant, trace.count(), delta, j_req, method);
}

Verdict general_test(const PlantModel& plant, SuccessCount counts, double delta, IntervalMethod method,
                     double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1e-3)) throw InputError("grid_step must lie in (0, 1e-3]");
  Verdict v;
  v.interval = make_interval(method, counts, delta);
  v.threshold_or_target = plant.is_simple() ? stability_threshold(plant) : std::nan("");
  v.flags.emplace_back("grid_certified");

  const double lo = v.interval.lo;
  const double hi = v.interval.hi;
  const auto segments = static_cast<std::size_t>(std::ceil((hi - lo) / grid_step));
  bool any_stable = false;
  bool any_unstable = false;
  for (std::size_t i = 0; i <= segments; ++i) {
    const double q = segments == 0 ? lo : (i == segments ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(segments));
    (kronecker_stable(plant, q) ? any_stable : any_unstable) = true;
    if (any_stable && any_unstable) break;
  }
  if (any_stable && !any_unstable) {
    v.decision = Decision::Affirm;
  } else if (any_unstable && !any_stable) {
    v.decision = Decision::Deny;
  }
  return v;
}

Verdict general_test(const PlantModel& plant, const ChannelTrace& trace, double delta,
                     IntervalMethod method, double grid_step) {
  return general_test(plant, trace.count(), delta, method, grid_step);
}

std::string verdict_to_json(const Verdict& v, bool cost_query) {
  nlohmann::ordered_json doc;
  doc["decision"] = decision_name(v.decision);
  doc["method"] = method_name(v.interval.method);
  doc["delta"] = v.interval.delta;
  doc["n"] = v.interval.n;
  doc["q_hat"] = v.interval.q_hat;
  doc["lo"] = v.interval.lo;
  doc["hi"] = v.interval.hi;
  const char* key = cost_query ? "j_req" : "threshold";
  if (std::isfinite(v.threshold_or_target)) {
    doc[key] = v.threshold_or_target;
  } else {
    doc[key] = nullptr;
  }
  doc["flags"] = v.flags;
  return doc.dump();
}

}  // namespace ncsverify
