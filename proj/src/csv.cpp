#include "swlog/csv.hpp"

#include <cstdio>
#include <fstream>

#include "swlog/errors.hpp"

namespace swlog {

namespace {

std::ofstream open_for_write(const std::string& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot open " + file + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& file) {
  out.flush();
  if (!out) throw IoError("write to " + file + " failed");
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_path_csv(const std::string& file, const SchemePath& path) {
  auto out = open_for_write(file);
  out << "k,t,regime,z,x,cap_hit\n";
  for (std::size_t k = 0; k < path.times.size(); ++k)
    out << k << ',' << format_full(path.times[k]) << ',' << path.regimes[k]
        << ',' << format_full(path.log_state[k]) << ','
        << format_full(path.state[k]) << ',' << int(path.cap_hit[k]) << '\n';
  finish(out, file);
}

void write_curve_csv(const std::string& file, const ErrorCurve& curve) {
  auto out = open_for_write(file);
  out << "dt,error,stderr,n\n";
  for (const auto& e : curve.entries)
    out << format_full(e.dt) << ',' << format_full(e.error) << ','
        << format_full(e.std_error) << ',' << e.n << '\n';
  finish(out, file);
}

void write_lattice_csv(const std::string& file, const BrownianLattice& lattice) {
  auto out = open_for_write(file);
  out << "index,time,value\n";
  for (std::size_t k = 0; k < lattice.increments.size(); ++k)
    out << k << ',' << format_full(static_cast<double>(k) * lattice.dt_fine)
        << ',' << format_full(lattice.increments[k]) << '\n';
  finish(out, file);
}

void write_chain_csv(const std::string& file, const ChainPath& chain) {
  auto out = open_for_write(file);
  out << "index,time,value\n";
  for (std::size_t k = 0; k < chain.states.size(); ++k)
    out << k << ',' << format_full(static_cast<double>(k) * chain.dt) << ','
        << chain.states[k] << '\n';
  finish(out, file);
}

void write_histogram_csv(const std::string& file, const Histogram& hist) {
  auto out = open_for_write(file);
  out << "bin_lo,bin_hi,count,density\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    out << format_full(hist.edges[i]) << ',' << format_full(hist.edges[i + 1])
        << ',' << hist.counts[i] << ',' << format_full(hist.density[i]) << '\n';
  finish(out, file);
}

void write_samples_csv(const std::string& file,
                       const std::vector<double>& samples) {
  auto out = open_for_write(file);
  out << "index,x\n";
  for (std::size_t i = 0; i < samples.size(); ++i)
    out << i << ',' << format_full(samples[i]) << '\n';
  finish(out, file);
}

void write_moments_csv(const std::string& file, const MomentCurves& curves) {
  auto out = open_for_write(file);
  out << "t,mean_pow,mean_inv_pow\n";
  for (std::size_t k = 0; k < curves.times.size(); ++k)
    out << format_full(curves.times[k]) << ',' << format_full(curves.mean_pow[k])
        << ',' << format_full(curves.mean_inv_pow[k]) << '\n';
  finish(out, file);
}

void write_blowup_csv(const std::string& file, const BlowupReport& report) {
  auto out = open_for_write(file);
  out << "blowup,first_step\n";
  for (std::size_t step : report.first_steps) out << 1 << ',' << step << '\n';
  finish(out, file);
}

void write_xy(const std::string& file, const std::vector<double>& xs,
              const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw LengthMismatchError("xy columns must have equal lengths");
  auto out = open_for_write(file);
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << format_full(xs[i]) << ' ' << format_full(ys[i]) << '\n';
  finish(out, file);
}

}  // namespace swlog
