#pragma once

// Report rows and their serialized forms.
//
// Every result row is self-describing: the statistic's name, the sample size
// and secondary index it refers to, the estimate with its Monte Carlo
// standard error, the threshold it was compared against, the verdict, and the
// seed that reproduces it.  CSV output is canonical -- fixed header, comma
// separators, LF line ends, %.17g numbers (round-trip exact for doubles) --
// so two reports from the same configuration are byte-identical regardless
// of how many threads produced them.
//
// Path files use the plain text layout "n scale" on the first line followed
// by one increment per line.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "holderlab/path.hpp"

namespace holderlab {

struct ReportRow {
  std::string statistic;
  Eigen::Index n = 0;     // sample size / horizon the row refers to (0 if n/a)
  double index = 0.0;     // secondary coordinate: J, K, level, or a count
  double estimate = 0.0;
  double se = 0.0;        // Monte Carlo standard error (0 for exact rows)
  double threshold = 0.0;
  std::string verdict;    // "pass", "fail" or "n-a"
  std::uint64_t seed = 0;
  std::string params;     // free-form "key=value" notes, space separated
};

struct ExperimentReport {
  std::string experiment;
  std::vector<ReportRow> rows;
};

inline long failed_rows(const ExperimentReport& rep) {
  long failed = 0;
  for (const auto& r : rep.rows)
    if (r.verdict == "fail") ++failed;
  return failed;
}

// shortest exact decimal form of a double
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

// text fields must not break the column structure
inline std::string csv_safe(std::string s) {
  for (auto& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  return s;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const ExperimentReport& rep) {
  os << "experiment,statistic,n,index,estimate,se,threshold,verdict,seed,params\n";
  for (const auto& r : rep.rows) {
    os << detail::csv_safe(rep.experiment) << ',' << detail::csv_safe(r.statistic) << ',' << r.n
       << ',' << format_g17(r.index) << ',' << format_g17(r.estimate) << ',' << format_g17(r.se)
       << ',' << format_g17(r.threshold) << ',' << detail::csv_safe(r.verdict) << ',' << r.seed
       << ',' << detail::csv_safe(r.params) << '\n';
  }
}

inline std::string csv_string(const ExperimentReport& rep) {
  std::ostringstream ss;
  write_csv(ss, rep);
  return ss.str();
}

inline void save_csv(const std::string& file, const ExperimentReport& rep) {
  std::ofstream os(file, std::ios::binary);  // binary: LF line ends everywhere
  if (!os) throw std::runtime_error("cannot open output file: " + file);
  write_csv(os, rep);
}

// ------------------------------------------------------------------ path IO

inline void save_path_file(std::ostream& os, const PolygonalPath<double>& path) {
  os << path.n << ' ' << format_g17(path.scale) << '\n';
  for (Eigen::Index i = 0; i < path.n; ++i) os << format_g17(path.increments[i]) << '\n';
}

inline void save_path_file(const std::string& file, const PolygonalPath<double>& path) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + file);
  save_path_file(os, path);
}

inline PolygonalPath<double> load_path_file(std::istream& is) {
  Eigen::Index n = 0;
  double scale = 0.0;
  if (!(is >> n) || n < 1)
    throw std::invalid_argument("path file: first line must read \"n scale\" with n >= 1");
  if (!(is >> scale) || !(scale > 0.0))
    throw std::invalid_argument("path file: scale must be a positive number");
  ArrayX<double> increments(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(is >> increments[i]))
      throw std::invalid_argument("path file: expected " + std::to_string(n) +
                                  " increments, one per line");
  double extra = 0.0;
  if (is >> extra) throw std::invalid_argument("path file: trailing data after the increments");
  return build_polygonal(increments, scale);
}

inline PolygonalPath<double> load_path_file(const std::string& file) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot open path file: " + file);
  return load_path_file(is);
}

}  // namespace holderlab
