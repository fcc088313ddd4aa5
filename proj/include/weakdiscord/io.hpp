#pragma once

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "weakdiscord/core.hpp"

namespace weakdiscord {

/// Shortest text with 17 significant digits; round-trips any double exactly.
inline std::string fmt_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Reads the density-matrix file format
///   { "dimA": int, "dimB": int, "re": [[...]], "im": [[...]] }
/// and validates every state invariant on load.
inline DensityMatrix load_density_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_density_matrix: cannot open " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("load_density_matrix: " + path + ": " + e.what());
  }
  for (const char* key : {"dimA", "dimB", "re", "im"}) {
    if (!j.contains(key)) {
      throw std::runtime_error("load_density_matrix: missing field \"" +
                               std::string(key) + "\"");
    }
  }
  auto dim_a = j["dimA"].get<Eigen::Index>();
  auto dim_b = j["dimB"].get<Eigen::Index>();
  if (dim_a < 1 || dim_b < 1) {
    throw std::runtime_error("load_density_matrix: dimensions must be positive");
  }
  Eigen::Index dim = dim_a * dim_b;
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (static_cast<Eigen::Index>(re.size()) != dim ||
      static_cast<Eigen::Index>(im.size()) != dim) {
    throw std::runtime_error(
        "load_density_matrix: matrix rows do not match dimA*dimB");
  }
  Mat m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& re_row = re[r];
    const auto& im_row = im[r];
    if (static_cast<Eigen::Index>(re_row.size()) != dim ||
        static_cast<Eigen::Index>(im_row.size()) != dim) {
      throw std::runtime_error("load_density_matrix: ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) = Complex(re_row[c].get<double>(), im_row[c].get<double>());
    }
  }
  return DensityMatrix::make(std::move(m), dim_a, dim_b);
}

/// Writes the same format, all floats with 17 significant digits.
inline void save_density_matrix(const DensityMatrix& rho,
                                const std::string& path) {
  std::ostringstream out;
  out << "{\n  \"dimA\": " << rho.dim_a() << ",\n  \"dimB\": " << rho.dim_b()
      << ",\n";
  auto write_part = [&](const char* name, bool real) {
    out << "  \"" << name << "\": [\n";
    for (Eigen::Index r = 0; r < rho.dim(); ++r) {
      out << "    [";
      for (Eigen::Index c = 0; c < rho.dim(); ++c) {
        Complex z = rho.mat()(r, c);
        out << fmt_g17(real ? z.real() : z.imag());
        if (c + 1 < rho.dim()) out << ", ";
      }
      out << (r + 1 < rho.dim() ? "],\n" : "]\n");
    }
    out << "  ]";
  };
  write_part("re", true);
  out << ",\n";
  write_part("im", false);
  out << "\n}\n";
  std::ofstream f(path);
  if (!f) {
    throw std::runtime_error("save_density_matrix: cannot write " + path);
  }
  f << out.str();
}

}  // namespace weakdiscord
