#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rzono/core/error.hpp"
#include "rzono/core/statistics.hpp"
#include "rzono/core/vector.hpp"
#include "rzono/core/zonotope.hpp"
#include "rzono/dist/distribution.hpp"
#include "rzono/estimators/clt.hpp"
#include "rzono/estimators/montecarlo.hpp"
#include "rzono/random/philox.hpp"

namespace rzono {

using json = nlohmann::json;

inline void to_json(json& j, const Vector& v) { j = std::vector<double>(v.begin(), v.end()); }
inline void from_json(const json& j, Vector& v) { v = Vector(j.get<std::vector<double>>()); }

inline void to_json(json& j, const SeedSpec& s) { j = json{{"master_seed", s.master_seed}, {"stream_id", s.stream_id}}; }
inline void from_json(const json& j, SeedSpec& s) {
  s.master_seed = j.at("master_seed").get<std::uint64_t>();
  s.stream_id = j.value("stream_id", std::uint64_t{0});
}

inline DistributionKind distribution_kind_from_string(const std::string& name) {
  if (name == "gaussian_std") return DistributionKind::gaussian_std;
  if (name == "uniform_sphere") return DistributionKind::uniform_sphere;
  if (name == "uniform_cube") return DistributionKind::uniform_cube;
  if (name == "discrete") return DistributionKind::discrete;
  throw DomainError("unknown distribution kind '" + name + "'");
}

/// {"kind": ..., "d": int, "atoms": [[...]], "probs": [...], "radius": num,
///  "half_width": num}; fields not used by the kind are omitted on output.
inline void to_json(json& j, const DistributionSpec& s) {
  j = json{{"kind", to_string(s.kind)}, {"d", s.dim}};
  switch (s.kind) {
    case DistributionKind::uniform_sphere: j["radius"] = s.radius; break;
    case DistributionKind::uniform_cube: j["half_width"] = s.half_width; break;
    case DistributionKind::discrete:
      j["atoms"] = s.atoms;
      j["probs"] = s.probs;
      break;
    default: break;
  }
}

inline void from_json(const json& j, DistributionSpec& s) {
  s = DistributionSpec{};
  s.kind = distribution_kind_from_string(j.at("kind").get<std::string>());
  if (s.kind == DistributionKind::discrete) {
    s.atoms = j.at("atoms").get<std::vector<Vector>>();
    s.probs = j.at("probs").get<std::vector<double>>();
    s.dim = j.contains("d") ? j.at("d").get<int>() : (s.atoms.empty() ? 0 : static_cast<int>(s.atoms.front().dim()));
  } else {
    s.dim = j.at("d").get<int>();
  }
  s.radius = j.value("radius", 1.0);
  s.half_width = j.value("half_width", 1.0);
  s.validate();
}

inline void to_json(json& j, const ValuationSpec& s) {
  j = json{{"kind", s.kind == ValuationKind::intrinsic ? "intrinsic" : "mixed"}, {"j", s.degree}};
  if (s.kind == ValuationKind::mixed) j["fixed_segments"] = s.fixed_segments;
}

inline void from_json(const json& j, ValuationSpec& s) {
  const auto kind = j.value("kind", std::string("intrinsic"));
  if (kind == "intrinsic")
    s.kind = ValuationKind::intrinsic;
  else if (kind == "mixed")
    s.kind = ValuationKind::mixed;
  else
    throw DomainError("unknown valuation kind '" + kind + "'");
  s.degree = j.at("j").get<int>();
  s.fixed_segments = j.value("fixed_segments", std::vector<Vector>{});
}

inline void to_json(json& j, const EstimateResult& e) {
  j = json{{"mean", e.mean}, {"stderr", e.std_error}, {"n_samples", e.n_samples}, {"seed", e.seed}};
}

inline void from_json(const json& j, EstimateResult& e) {
  e.mean = j.at("mean").get<double>();
  e.std_error = j.at("stderr").get<double>();
  e.n_samples = j.at("n_samples").get<std::uint64_t>();
  e.seed = j.at("seed").get<SeedSpec>();
}

inline void to_json(json& j, const Lemma41Diagnosis& d) {
  j = json{{"pass", d.pass}, {"origin_in_support", d.origin_in_support}, {"support_rank", d.support_rank},
           {"reasons", d.reasons}};
}

inline void to_json(json& j, const Theorem1Report& r) {
  j = json{{"estimate", r.estimate}, {"prediction", r.prediction}, {"factor", r.factor},
           {"phi_zx", r.phi_zx},     {"z_score", r.z_score},       {"surrogate", r.surrogate},
           {"surrogate_error", r.surrogate_error}};
}

/// Deviations are written separately (CSV) and left out here.
inline void to_json(json& j, const CltReport& r) {
  j = json{{"n", r.n},
           {"reps", r.reps},
           {"empirical_variance", r.empirical_variance},
           {"predicted_variance", r.predicted_variance},
           {"variance_ratio", r.variance_ratio},
           {"variance_tolerance", r.variance_tolerance},
           {"alternative_variance", r.alternative_variance},
           {"alternative_ratio", r.alternative_ratio},
           {"ks_statistic", r.ks_statistic},
           {"ks_critical", r.ks_critical},
           {"deviation_mean", r.deviation_mean},
           {"zeta1", r.zeta1},
           {"zeta1_stderr", r.zeta1_stderr},
           {"zeta1_source", r.zeta1_source},
           {"theta", r.theta},
           {"phi_zx", r.phi_zx},
           {"surrogate", r.surrogate},
           {"surrogate_error", r.surrogate_error},
           {"phi_path", r.phi_path},
           {"degenerate", r.degenerate},
           {"variance_pass", r.variance_pass},
           {"ks_pass", r.ks_pass},
           {"passed", r.passed},
           {"lemma41", r.lemma41},
           {"warnings", r.warnings}};
}

}  // namespace rzono
