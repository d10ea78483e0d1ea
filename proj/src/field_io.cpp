#include "mcsv/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "mcsv/error.hpp"

namespace mcsv {

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
}

}  // namespace

void write_field(std::ostream& out, const RealField& u, const std::string& name) {
  nlohmann::json header;
  header["N"] = u.grid_ref().n();
  header["name"] = name;
  out << header.dump() << '\n';
  for (double v : u.values()) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    out.write(bytes, 8);
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing field '" + name + "'");
}

void write_field(const std::filesystem::path& path, const RealField& u,
                 const std::string& name) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  write_field(out, u, name);
}

NamedField read_field(std::istream& in, GridPtr grid) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, "missing field header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed field header: ") + e.what());
  }
  if (!header.contains("N") || !header.contains("name")) {
    throw Error(ErrorKind::Io, "field header needs keys N and name");
  }
  const int n = header["N"].get<int>();
  if (n != grid->n()) {
    throw Error(ErrorKind::GridMismatch, "field dump resolution " + std::to_string(n) +
                                             " does not match grid " +
                                             std::to_string(grid->n()));
  }
  std::vector<double> values(grid->size());
  for (double& v : values) {
    char bytes[8];
    if (!in.read(bytes, 8)) throw Error(ErrorKind::Io, "truncated field payload");
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes, 8);
    v = std::bit_cast<double>(to_little_endian(bits));
  }
  return {header["name"].get<std::string>(), RealField(std::move(grid), std::move(values))};
}

NamedField read_field(const std::filesystem::path& path, GridPtr grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_field(in, std::move(grid));
}

}  // namespace mcsv
