#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mcsv/field.hpp"

namespace mcsv {

/// Field dump: a single-line JSON header `{"N":<int>,"name":"<str>"}` and a
/// newline, followed by N*N little-endian IEEE-754 doubles in row-major order
/// (x2 outer, x1 inner).
void write_field(std::ostream& out, const RealField& u, const std::string& name);
void write_field(const std::filesystem::path& path, const RealField& u,
                 const std::string& name);

struct NamedField {
  std::string name;
  RealField field;
};

/// Reads a dump back onto `grid` (whose resolution must match the header).
NamedField read_field(std::istream& in, GridPtr grid);
NamedField read_field(const std::filesystem::path& path, GridPtr grid);

}  // namespace mcsv
