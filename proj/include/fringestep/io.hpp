#pragma once

#include "fringestep/harness.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace fringestep {

// Unreadable, unwritable, or malformed file; the message carries the path and,
// for text formats, the offending line number.
class FileFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- PFM (portable float map, grayscale) -------------------------------------
//
// Header "Pf", ASCII width/height, scale factor whose sign encodes endianness
// and whose magnitude scales the samples, then 32-bit float rows stored
// bottom-to-top.  Reading applies the header scale, so read(write(f))
// reproduces f exactly at 32-bit precision (write emits scale -1.0).

void write_pfm(const std::string& path, const ScalarField& f);
ScalarField read_pfm(const std::string& path);

// 8-bit preview (PGM P5), linear min-max scaled; for human inspection only.
void write_pgm_preview(const std::string& path, const ScalarField& f);

// --- result CSV ---------------------------------------------------------------
//
// Schema: case,prefilter,estimator,sigma,trial,delta_true,delta_hat,abs_err,
//         status,kappa_ratio,mask_fraction,seed
// Doubles are written with 17 significant digits so parsing round-trips them
// bit-exactly; delta_hat and abs_err are empty on failed rows.

extern const char* const kResultCsvHeader;

void write_result_csv(const std::string& path, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_result_csv(const std::string& path);

// --- plan config files ---------------------------------------------------------
//
// Plain-text key = value lines; '#' starts a comment.  Keys: combo (repeatable,
// "CASE, PREFILTER, ESTIMATOR"), sigmas (comma-separated), trials, delta,
// base_seed, width, height, fringe_scale.  Unknown keys are rejected.  At
// least one combo line is required; omitted keys keep the defaults.

ExperimentPlan load_plan(const std::string& path);

// Key = value dump of a synthesis recipe (written next to PFM outputs).
void write_synth_meta(const std::string& path, const SynthSpec& spec);

}  // namespace fringestep
