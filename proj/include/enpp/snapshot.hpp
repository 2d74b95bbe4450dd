#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "enpp/field.hpp"

namespace enpp {

/// Binary field snapshot.
///
/// Layout, all little-endian:
///   char[4]  magic "ENPP"
///   u32      version (currently 1)
///   u32      d
///   u32      N
///   f64      L
///   u32      field count F
///   F * N^d  f64 real-space samples, row-major, field after field
struct Snapshot {
  static constexpr std::uint32_t kVersion = 1;

  Grid grid;
  std::vector<Field> fields;
};

void write_snapshot(std::ostream& out, const Grid& grid, const std::vector<Field>& fields);
void write_snapshot(const std::filesystem::path& path, const Grid& grid,
                    const std::vector<Field>& fields);

Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace enpp
