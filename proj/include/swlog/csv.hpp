#pragma once

#include <string>
#include <vector>

#include "swlog/analysis.hpp"
#include "swlog/schemes.hpp"
#include "swlog/stochastic.hpp"

namespace swlog {

// All writers emit a header line and full-precision values (%.17g), so a
// rerun with the same seed reproduces files byte for byte.

void write_path_csv(const std::string& file, const SchemePath& path);
void write_curve_csv(const std::string& file, const ErrorCurve& curve);
void write_lattice_csv(const std::string& file, const BrownianLattice& lattice);
void write_chain_csv(const std::string& file, const ChainPath& chain);
void write_histogram_csv(const std::string& file, const Histogram& hist);
void write_samples_csv(const std::string& file,
                       const std::vector<double>& samples);
void write_moments_csv(const std::string& file, const MomentCurves& curves);
void write_blowup_csv(const std::string& file, const BlowupReport& report);

// Plot-data text format: one "x y" pair per line.
void write_xy(const std::string& file, const std::vector<double>& xs,
              const std::vector<double>& ys);

// Full-precision and 6-significant-digit decimal renderings.
std::string format_full(double v);
std::string format_short(double v);

}  // namespace swlog
