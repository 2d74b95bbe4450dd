#include "enpp/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "enpp/error.hpp"

namespace enpp {
namespace {

template <typename T>
void put(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
    throw FormatError("snapshot truncated");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const Grid& grid, const std::vector<Field>& fields) {
  out.write("ENPP", 4);
  put<std::uint32_t>(out, Snapshot::kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.points()));
  put<double>(out, grid.length());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(fields.size()));
  for (const auto& f : fields) {
    require_same_grid(grid, f.grid(), "write_snapshot");
    for (double v : f.real()) put<double>(out, v);
  }
  if (!out) throw Error("failed writing snapshot");
}

void write_snapshot(const std::filesystem::path& path, const Grid& grid,
                    const std::vector<Field>& fields) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_snapshot(out, grid, fields);
}

Snapshot read_snapshot(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "ENPP", 4) != 0) {
    throw FormatError("not an ENPP snapshot (bad magic)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != Snapshot::kVersion) {
    throw FormatError("unsupported snapshot version " + std::to_string(version));
  }
  const auto d = get<std::uint32_t>(in);
  const auto n = get<std::uint32_t>(in);
  const auto length = get<double>(in);
  const auto count = get<std::uint32_t>(in);
  Grid grid = [&] {
    try {
      return make_grid(static_cast<int>(d), static_cast<int>(n), length);
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("snapshot header: ") + e.what());
    }
  }();
  Snapshot snap{grid, {}};
  snap.fields.reserve(count);
  for (std::uint32_t f = 0; f < count; ++f) {
    std::vector<double> values(grid.size());
    for (auto& v : values) v = get<double>(in);
    snap.fields.push_back(Field::from_real(grid, std::move(values)));
  }
  return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open snapshot " + path.string());
  return read_snapshot(in);
}

}  // namespace enpp
