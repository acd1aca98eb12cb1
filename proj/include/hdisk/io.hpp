#pragma once

// Text serialization: CSV tables and JSON documents. Floats are written with 17 significant
// digits so that they read back bit-identically.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hdisk/function_models.hpp"
#include "hdisk/geometric_measure.hpp"
#include "hdisk/identification.hpp"
#include "hdisk/measure_equivalence.hpp"
#include "hdisk/sampling_design.hpp"

namespace hdisk::io {

using json = nlohmann::ordered_json;

std::string fmt(double x);

// theta,re,im
void write_boundary_function_csv(std::ostream& os, const BoundaryFunction& f);
BoundaryFunction read_boundary_function_csv(std::istream& is);

json to_json(const BoundarySet& e);
BoundarySet boundary_set_from_json(const json& j);

// index,re,im
void write_plan_csv(std::ostream& os, const SamplingPlan& plan);
json to_json(const SamplingPlan& plan);

void write_coverage_csv(std::ostream& os, const CoverageReport& r);

json to_json(const KakutaniReport& r);
// k,re_gap,im_gap,log_factor
void write_kakutani_factors_csv(std::ostream& os, const KakutaniReport& r);

// n,re_z,im_z,re_x,im_x
void write_observations_csv(std::ostream& os, const ObservationSeries& s);
// Reads the pairs; noise and seed are left at their defaults.
ObservationSeries read_observations_csv(std::istream& is);

json to_json(const FitResult& r);
json to_json(const ExperimentReport& r);
// n,seed,ok,degree,sup_error,coefficient_error
void write_experiment_cells_csv(std::ostream& os, const ExperimentReport& r);
// n,median_sup_error,median_coefficient_error
void write_experiment_summary_csv(std::ostream& os, const ExperimentReport& r);

json to_json(cplx z);
json to_json(const std::vector<cplx>& v);

}  // namespace hdisk::io
