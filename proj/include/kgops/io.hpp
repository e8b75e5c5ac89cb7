#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "kgops/green.hpp"

namespace kgops {

// Cauchy-data dump formats. Both carry the grid header (d, N, L, m) followed
// by the row-major u values and then the row-major v values.
//
// CSV: first line "d,N,L,m"; then the u rows and v rows, one grid row per
// line, comma separated.
// Binary: magic "KGCD", int64 d, int64 N, double L, double m, raw doubles.

inline void dump_cauchy_csv(const CauchyData& data, double mass, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  const SpatialGrid& g = data.grid();
  out.precision(17);
  out << g.dim << "," << g.n << "," << g.half_length << "," << mass << "\n";
  const std::size_t row = static_cast<std::size_t>(g.n);
  for (const auto* field : {&data.u, &data.v}) {
    for (std::size_t start = 0; start < field->values.size(); start += row) {
      for (std::size_t i = 0; i < row; ++i) {
        if (i) out << ",";
        out << field->values[start + i];
      }
      out << "\n";
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

inline std::pair<CauchyData, double> load_cauchy_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty dump file: " + path);
  int d = 0, n = 0;
  double L = 0.0, m = 0.0;
  {
    std::istringstream hs(line);
    char comma;
    if (!(hs >> d >> comma >> n >> comma >> L >> comma >> m))
      throw IoError("malformed header in " + path);
  }
  const SpatialGrid g = SpatialGrid::make(d, n, L);
  LatticeField u(g), v(g);
  auto read_field = [&](LatticeField& f) {
    std::size_t idx = 0;
    while (idx < f.values.size()) {
      if (!std::getline(in, line)) throw IoError("truncated dump file: " + path);
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) {
        if (idx >= f.values.size()) throw IoError("too many values in " + path);
        f.values[idx++] = std::stod(cell);
      }
    }
  };
  read_field(u);
  read_field(v);
  return {CauchyData{std::move(u), std::move(v)}, m};
}

inline void dump_cauchy_binary(const CauchyData& data, double mass, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  const SpatialGrid& g = data.grid();
  out.write("KGCD", 4);
  const std::int64_t d = g.dim, n = g.n;
  out.write(reinterpret_cast<const char*>(&d), sizeof d);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&g.half_length), sizeof(double));
  out.write(reinterpret_cast<const char*>(&mass), sizeof(double));
  for (const auto* field : {&data.u, &data.v})
    out.write(reinterpret_cast<const char*>(field->values.data()),
              static_cast<std::streamsize>(field->values.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path);
}

inline std::pair<CauchyData, double> load_cauchy_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "KGCD") throw IoError("bad magic in " + path);
  std::int64_t d = 0, n = 0;
  double L = 0.0, m = 0.0;
  in.read(reinterpret_cast<char*>(&d), sizeof d);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&L), sizeof L);
  in.read(reinterpret_cast<char*>(&m), sizeof m);
  const SpatialGrid g = SpatialGrid::make(static_cast<int>(d), static_cast<int>(n), L);
  LatticeField u(g), v(g);
  for (auto* field : {&u, &v}) {
    in.read(reinterpret_cast<char*>(field->values.data()),
            static_cast<std::streamsize>(field->values.size() * sizeof(double)));
    if (!in) throw IoError("truncated dump file: " + path);
  }
  return {CauchyData{std::move(u), std::move(v)}, m};
}

}  // namespace kgops
