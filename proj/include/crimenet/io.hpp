#pragma once

#include <string>

#include "crimenet/ar.hpp"
#include "crimenet/ingest.hpp"
#include "crimenet/polyreg.hpp"
#include "crimenet/svr.hpp"
#include "crimenet/synth.hpp"

// Cube bundle persistence (a directory of CSVs plus a JSON header) and model
// files. Doubles are serialized with shortest-round-trip JSON, so a loaded
// model predicts bit-for-bit like the saved one.

namespace crimenet {

void save_cube(const std::string& dir, const MonthlyCube& cube);
MonthlyCube load_cube(const std::string& dir);  // IncompleteBundle when files are missing

void save_ground_truth(const std::string& path, const SynthGroundTruth& truth);

void save_polyreg(const std::string& path, const PolyRegModel& model);
PolyRegModel load_polyreg(const std::string& path);

void save_svr(const std::string& path, const SvrModel& model);
SvrModel load_svr(const std::string& path);

void save_ar(const std::string& path, const ArModel& model);
ArModel load_ar(const std::string& path);

}  // namespace crimenet
