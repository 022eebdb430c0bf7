#include "maxlip/grid_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace maxlip {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const GridFunction& f) {
  const Grid& g = f.grid();
  os << (g.dim() == 1 ? "index,value\n" : "i,j,value\n");
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    const Cell c = g.cell(k);
    if (g.dim() == 1)
      os << c[0] << ',' << format_number(f[k]) << '\n';
    else
      os << c[0] << ',' << c[1] << ',' << format_number(f[k]) << '\n';
  }
}

void write_csv(const std::string& path, const GridFunction& f) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_csv(os, f);
  if (!os) throw IoError("write to '" + path + "' failed");
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) {
    while (!item.empty() && (item.back() == '\r' || item.back() == ' ')) item.pop_back();
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    out.push_back(item);
  }
  return out;
}

}  // namespace

GridFunction read_csv(std::istream& is, const Grid& g) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("grid function csv: empty input");
  const auto header = split_fields(line);
  const std::vector<std::string> expected =
      g.dim() == 1 ? std::vector<std::string>{"index", "value"} : std::vector<std::string>{"i", "j", "value"};
  if (header != expected) throw IoError("grid function csv: unexpected header '" + line + "'");

  Eigen::ArrayXd values(g.size());
  std::vector<bool> seen(std::size_t(g.size()), false);
  long row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != expected.size())
      throw IoError("grid function csv: row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                    " fields");
    Cell c{0, 0};
    double v = 0.0;
    try {
      c[0] = std::stoi(fields[0]);
      if (g.dim() == 2) c[1] = std::stoi(fields[1]);
      v = std::stod(fields.back());
    } catch (const std::exception&) {
      throw IoError("grid function csv: cannot parse row " + std::to_string(row));
    }
    if (!g.contains(c)) throw IoError("grid function csv: row " + std::to_string(row) + " names a cell outside the grid");
    const auto k = g.linear(c);
    if (seen[std::size_t(k)]) throw IoError("grid function csv: duplicate cell at row " + std::to_string(row));
    seen[std::size_t(k)] = true;
    values[k] = v;
  }
  for (std::size_t k = 0; k < seen.size(); ++k)
    if (!seen[k]) throw IoError("grid function csv: missing cell " + to_string(g.cell(Eigen::Index(k)), g.dim()));
  return GridFunction(g, std::move(values));
}

GridFunction read_csv(const std::string& path, const Grid& g) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_csv(is, g);
}

}  // namespace maxlip
