#pragma once

#include <fstream>
#include <iomanip>
#include <span>
#include <stdexcept>
#include <string>

#include "spherediff/mc.hpp"
#include "spherediff/subordinator.hpp"

namespace spherediff {

inline std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << std::setprecision(17);
  return out;
}

inline void write_path_csv(const std::string& path, const SubordinatorPath& p) {
  auto out = open_csv(path);
  out << "s,S\n";
  for (std::size_t k = 0; k < p.values.size(); ++k)
    out << p.s_at(k) << "," << p.values[k] << "\n";
}

inline void write_histogram_csv(const std::string& path, const Histogram1D& h) {
  auto out = open_csv(path);
  out << "bin_center,mass\n";
  for (std::size_t b = 0; b < h.size(); ++b)
    out << h.center(b) << "," << h.mass[b] << "\n";
}

inline void write_endpoints_csv(const std::string& path, std::span<const PathSample> samples) {
  auto out = open_csv(path);
  out << "theta,phi,l_value\n";
  for (const auto& s : samples)
    out << s.endpoint.theta() << "," << s.endpoint.phi() << "," << s.l_value << "\n";
}

inline void write_sphere_histogram_csv(const std::string& path, const SphereHistogram& h) {
  auto out = open_csv(path);
  out << "bin_id,theta_lo,theta_hi,phi_lo,phi_hi,mass\n";
  for (int b = 0; b < h.bins.size(); ++b)
    out << b << "," << h.bins.theta_lo(b) << "," << h.bins.theta_hi(b) << ","
        << h.bins.phi_lo(b) << "," << h.bins.phi_hi(b) << "," << h.mass[b] << "\n";
}

}  // namespace spherediff
