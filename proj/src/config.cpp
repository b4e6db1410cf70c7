#include "perifact/config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "perifact/imaging.hpp"

namespace perifact {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Real parse_real(const std::string& key, const std::string& value, int line) {
  try {
    size_t pos = 0;
    const Real v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ParseError("config line " + std::to_string(line) + ": bad number for key '" + key +
                     "': '" + value + "'");
  }
}

long parse_int(const std::string& key, const std::string& value, int line) {
  try {
    size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ParseError("config line " + std::to_string(line) + ": bad integer for key '" + key +
                     "': '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ParseError("config line " + std::to_string(line) + ": bad boolean for key '" + key +
                   "': '" + value + "'");
}

// Three comma-separated entries, each "re" or "re+imi" / "re-imi".
CVec3 parse_cdiag(const std::string& key, const std::string& value, int line) {
  std::istringstream ss(value);
  std::string item;
  CVec3 out;
  int idx = 0;
  while (std::getline(ss, item, ',')) {
    if (idx >= 3) throw ParseError("config line " + std::to_string(line) + ": key '" + key +
                                   "' takes exactly three entries");
    item = trim(item);
    Real re = 0, im = 0;
    char sign = '+';
    const auto ipos = item.find('i');
    if (ipos == std::string::npos) {
      re = parse_real(key, item, line);
    } else {
      // split at the last +/- that is not the leading sign
      size_t split = std::string::npos;
      for (size_t j = 1; j + 1 < item.size(); ++j)
        if (item[j] == '+' || item[j] == '-') split = j;
      if (split == std::string::npos)
        throw ParseError("config line " + std::to_string(line) + ": bad complex entry '" + item +
                         "' for key '" + key + "'");
      re = parse_real(key, item.substr(0, split), line);
      sign = item[split];
      std::string ims = item.substr(split + 1);
      if (ims.empty() || ims.back() != 'i')
        throw ParseError("config line " + std::to_string(line) + ": bad complex entry '" + item +
                         "' for key '" + key + "'");
      ims.pop_back();
      im = ims.empty() ? 1.0 : parse_real(key, ims, line);
      if (sign == '-') im = -im;
    }
    out(idx++) = Complex(re, im);
  }
  if (idx != 3)
    throw ParseError("config line " + std::to_string(line) + ": key '" + key +
                     "' takes exactly three entries");
  return out;
}

}  // namespace

void apply_config_entry(RunConfig& c, const std::string& key, const std::string& value,
                        int line) {
  if (key == "k") c.k = parse_real(key, value, line);
  else if (key == "alpha1") c.alpha1 = parse_real(key, value, line);
  else if (key == "alpha2") c.alpha2 = parse_real(key, value, line);
  else if (key == "h") c.h = parse_real(key, value, line);
  else if (key == "M") c.M = static_cast<int>(parse_int(key, value, line));
  else if (key == "geometry") c.geometry = value;
  else if (key == "material") c.material = value;
  else if (key == "eps_diag") c.eps_diag = parse_cdiag(key, value, line);
  else if (key == "mu_inv_diag") c.mu_inv_diag = parse_cdiag(key, value, line);
  else if (key == "xi_diag") c.xi_diag = parse_cdiag(key, value, line).real();
  else if (key == "solver_n") c.solver_n = static_cast<int>(parse_int(key, value, line));
  else if (key == "solver_tol") c.solver_tol = parse_real(key, value, line);
  else if (key == "solver_restart") c.solver_restart = static_cast<int>(parse_int(key, value, line));
  else if (key == "solver_max_iterations")
    c.solver_max_iterations = static_cast<int>(parse_int(key, value, line));
  else if (key == "noise") c.noise = parse_real(key, value, line);
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, value, line));
  else if (key == "tau") c.tau = parse_real(key, value, line);
  else if (key == "sample_nx") c.sample_nx = static_cast<int>(parse_int(key, value, line));
  else if (key == "sample_ny") c.sample_ny = static_cast<int>(parse_int(key, value, line));
  else if (key == "sample_nz") c.sample_nz = static_cast<int>(parse_int(key, value, line));
  else if (key == "sample_n") {
    c.sample_nx = c.sample_ny = c.sample_nz = static_cast<int>(parse_int(key, value, line));
  } else if (key == "sample_zmax") c.sample_zmax = parse_real(key, value, line);
  else if (key == "p") {
    const CVec3 v = parse_cdiag(key, value, line);
    c.p = v.real();
  } else if (key == "w_variant") c.w_variant = value;
  else if (key == "force_assumptions") c.force_assumptions = parse_bool(key, value, line);
  else if (key == "herglotz_weighting") c.herglotz_weighting = parse_bool(key, value, line);
  else if (key == "averaged_polarization") c.averaged_polarization = parse_bool(key, value, line);
  else if (key == "data_out") c.data_out = value;
  else if (key == "image_out") c.image_out = value;
  else if (key == "threads") c.threads = static_cast<int>(parse_int(key, value, line));
  else if (key == "verbose") c.verbose = parse_bool(key, value, line);
  else
    throw ParseError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("parse_config: cannot open " + path);
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ParseError("config line " + std::to_string(lineno) + ": empty key");
    apply_config_entry(c, key, value, lineno);
  }
  return c;
}

void RunConfig::validate() const {
  if (!(k > 0.0)) throw ValidationError("config: k must be positive");
  if (!(h > 0.0)) throw ValidationError("config: h must be positive");
  if (M < 2 || M % 2 != 0) throw ValidationError("config: M must be even and >= 2");
  const Geometry geom = preset_geometry(geometry_kind_from_name(geometry));
  if (!(geom.bounding_height < h))
    throw ValidationError("config: geometry '" + geometry + "' has bounding height " +
                          std::to_string(geom.bounding_height) + " >= h = " + std::to_string(h));
  if (material != "paper" && material != "custom")
    throw ValidationError("config: material must be 'paper' or 'custom'");
  if (solver_n < M + 2 || (solver_n & (solver_n - 1)) != 0)
    throw ValidationError("config: solver_n must be a power of two >= M+2");
  if (solver_n % 4 != 0) throw ValidationError("config: solver_n must be a multiple of 4");
  if (!(solver_tol > 0.0)) throw ValidationError("config: solver_tol must be positive");
  if (solver_restart < 1) throw ValidationError("config: solver_restart must be >= 1");
  if (solver_max_iterations < 1)
    throw ValidationError("config: solver_max_iterations must be >= 1");
  if (noise < 0.0) throw ValidationError("config: noise must be nonnegative");
  if (!(tau > 0.0)) throw ValidationError("config: tau must be positive");
  if (sample_nx < 1 || sample_ny < 1 || sample_nz < 1)
    throw ValidationError("config: sampling counts must be positive");
  if (!(sample_zmax > 0.0) || sample_zmax > h)
    throw ValidationError("config: sample_zmax must lie in (0, h]");
  if (p.norm() == 0.0) throw ValidationError("config: polarization p must be nonzero");
  w_kind_from_name(w_variant);
}

MaterialCoefficients RunConfig::make_materials() const {
  const Geometry geom = preset_geometry(geometry_kind());
  if (material == "paper") return preset_materials(geom);
  return diagonal_materials(geom, eps_diag, mu_inv_diag, xi_diag);
}

RunConfig desk_profile() { return RunConfig{}; }

RunConfig paper_profile() {
  RunConfig c;
  c.M = 20;
  c.noise = 0.02;
  c.sample_nx = c.sample_ny = c.sample_nz = 32;
  return c;
}

void print_config(const RunConfig& c, std::ostream& out) {
  out << "k = " << c.k << "\nalpha = (" << c.alpha1 << ", " << c.alpha2 << ")\nh = " << c.h
      << "\nM = " << c.M << "\ngeometry = " << c.geometry << "\nmaterial = " << c.material
      << "\nsolver_n = " << c.solver_n << "\nsolver_tol = " << c.solver_tol
      << "\nnoise = " << c.noise << "\nseed = " << c.seed << "\ntau = " << c.tau
      << "\nsampling = " << c.sample_nx << "x" << c.sample_ny << "x" << c.sample_nz
      << " zmax " << c.sample_zmax << "\np = (" << c.p.x() << ", " << c.p.y() << ", " << c.p.z()
      << ")\nw_variant = " << c.w_variant
      << "\nherglotz_weighting = " << (c.herglotz_weighting ? "true" : "false") << "\n";
}

}  // namespace perifact
