#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "pathlik/observations.hpp"
#include "pathlik/path.hpp"

namespace pathlik {

/// Parse failure with the 1-based line it occurred on.
struct CsvError : std::runtime_error {
    CsvError(const std::string& msg, int line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
    int line;
};

/// Driver path files: header `t,x1,...,xm`, one row per grid time,
/// '.' decimal separator, values written with full round-trip precision.
void write_path_csv(std::ostream& out, const PiecewiseLinearPath& path);
void write_path_csv(const std::string& filename, const PiecewiseLinearPath& path);
PiecewiseLinearPath read_path_csv(std::istream& in);
PiecewiseLinearPath read_path_csv(const std::string& filename);

/// Observation files: header `t,y1,...,yd`; the first row is (0, y0).
void write_observations_csv(std::ostream& out, const ObservationSet& obs);
void write_observations_csv(const std::string& filename, const ObservationSet& obs);
ObservationSet read_observations_csv(std::istream& in);
ObservationSet read_observations_csv(const std::string& filename);

}  // namespace pathlik
