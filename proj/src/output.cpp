#include "perifact/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace perifact {

namespace {

std::string fmt(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_volume(const IndicatorGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("write_volume: cannot open " + path);
  const Vec3 sp = grid.spec.spacing();
  const Vec3 origin = grid.spec.node(0, 0, 0);
  out << "# vtk DataFile Version 3.0\n";
  out << "perifact-volume-v1\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << grid.spec.nx << " " << grid.spec.ny << " " << grid.spec.nz << "\n";
  out << "ORIGIN " << fmt(origin.x()) << " " << fmt(origin.y()) << " " << fmt(origin.z()) << "\n";
  out << "SPACING " << fmt(sp.x()) << " " << fmt(sp.y()) << " " << fmt(sp.z()) << "\n";
  out << "POINT_DATA " << grid.spec.size() << "\n";
  out << "SCALARS indicator double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (Real v : grid.values) out << fmt(v) << "\n";
  if (!out) throw IoError("write_volume: write failed for " + path);
}

IndicatorGrid read_volume(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_volume: cannot open " + path);
  std::string line;
  auto expect_line = [&](const std::string& what) {
    if (!std::getline(in, line)) throw FormatError("read_volume: missing " + what);
    return line;
  };
  if (expect_line("vtk banner").rfind("# vtk DataFile", 0) != 0)
    throw FormatError("read_volume: not a legacy structured-points file");
  const std::string title = expect_line("title");
  if (title != "perifact-volume-v1")
    throw FormatError("read_volume: unsupported volume version '" + title + "'");
  if (expect_line("format") != "ASCII") throw FormatError("read_volume: expected ASCII data");
  if (expect_line("dataset") != "DATASET STRUCTURED_POINTS")
    throw FormatError("read_volume: expected DATASET STRUCTURED_POINTS");

  IndicatorGrid grid;
  Vec3 origin = Vec3::Zero(), spacing = Vec3::Zero();
  long npoints = -1;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "DIMENSIONS") {
      ls >> grid.spec.nx >> grid.spec.ny >> grid.spec.nz;
    } else if (key == "ORIGIN") {
      ls >> origin.x() >> origin.y() >> origin.z();
    } else if (key == "SPACING") {
      ls >> spacing.x() >> spacing.y() >> spacing.z();
    } else if (key == "POINT_DATA") {
      ls >> npoints;
    } else if (key == "SCALARS") {
      std::string name, type;
      ls >> name >> type;
      if (type != "double") throw FormatError("read_volume: expected double scalars");
    } else if (key == "LOOKUP_TABLE") {
      break;
    } else {
      throw FormatError("read_volume: unexpected header line '" + line + "'");
    }
    if (!ls) throw FormatError("read_volume: malformed header line '" + line + "'");
  }
  if (grid.spec.nx < 1 || grid.spec.ny < 1 || grid.spec.nz < 1 || npoints < 0)
    throw FormatError("read_volume: incomplete header");
  if (npoints != grid.spec.size())
    throw FormatError("read_volume: POINT_DATA disagrees with DIMENSIONS");
  grid.spec.lo = origin - 0.5 * spacing;
  grid.spec.hi = Vec3(origin.x() + (grid.spec.nx - 0.5) * spacing.x(),
                      origin.y() + (grid.spec.ny - 0.5) * spacing.y(),
                      origin.z() + (grid.spec.nz - 0.5) * spacing.z());
  grid.values.resize(static_cast<size_t>(npoints));
  for (long i = 0; i < npoints; ++i) {
    if (!(in >> grid.values[static_cast<size_t>(i)]))
      throw TruncatedFileError("read_volume: fewer scalars than POINT_DATA declares");
  }
  return grid;
}

void write_csv(const IndicatorGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("write_csv: cannot open " + path);
  out << "x,y,z,value\n";
  for (int iz = 0; iz < grid.spec.nz; ++iz)
    for (int iy = 0; iy < grid.spec.ny; ++iy)
      for (int ix = 0; ix < grid.spec.nx; ++ix) {
        const Vec3 x = grid.spec.node(ix, iy, iz);
        out << fmt(x.x()) << "," << fmt(x.y()) << "," << fmt(x.z()) << ","
            << fmt(grid.values[grid.spec.index(ix, iy, iz)]) << "\n";
      }
  if (!out) throw IoError("write_csv: write failed for " + path);
}

void write_summary(const IndicatorGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("write_summary: cannot open " + path);
  const Real mx = grid.max_value();
  const Vec3 at = grid.argmax();
  out << "perifact indicator summary\n";
  out << "M = " << grid.M << "\n";
  out << "k = " << fmt(grid.k) << "\n";
  out << "alpha = " << fmt(grid.alpha.x()) << " " << fmt(grid.alpha.y()) << "\n";
  out << "tau = " << fmt(grid.tau) << "\n";
  out << "noise = " << fmt(grid.noise_level) << "\n";
  out << "polarization = " << fmt(grid.p.x()) << " " << fmt(grid.p.y()) << " " << fmt(grid.p.z())
      << "\n";
  out << "retained_spectral_terms = " << grid.retained << "\n";
  out << "grid = " << grid.spec.nx << " x " << grid.spec.ny << " x " << grid.spec.nz << "\n";
  out << "max_value = " << fmt(mx) << "\n";
  out << "max_at = " << fmt(at.x()) << " " << fmt(at.y()) << " " << fmt(at.z()) << "\n";
  out << "isovalue = " << fmt(mx / 3.0) << "\n";
  if (!out) throw IoError("write_summary: write failed for " + path);
}

void write_outputs(const IndicatorGrid& grid, const std::string& base) {
  write_volume(grid, base + ".vtk");
  write_csv(grid, base + ".csv");
  write_summary(grid, base + "_summary.txt");
}

}  // namespace perifact
