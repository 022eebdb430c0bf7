#pragma once

#include <iosfwd>
#include <string>

#include "maxlip/grid.hpp"

namespace maxlip {

// 17 significant digits, enough to round-trip any double.
std::string format_number(double v);

// CSV with header `index,value` (dim 1) or `i,j,value` (dim 2, row-major).
void write_csv(std::ostream& os, const GridFunction& f);
void write_csv(const std::string& path, const GridFunction& f);

// The grid is not part of the file; rows must cover every cell exactly once.
GridFunction read_csv(std::istream& is, const Grid& g);
GridFunction read_csv(const std::string& path, const Grid& g);

}  // namespace maxlip
