#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

#include "mcsv/checks.hpp"
#include "mcsv/error.hpp"
#include "mcsv/field_io.hpp"

using namespace mcsv;

TEST(FieldIo, StreamRoundTripIsBitExact) {
  auto g = make_grid(16);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  RealField u(g);
  for (auto& v : u.values()) v = nd(rng) * 1e-300 + nd(rng);
  u[3] = -0.0;
  std::stringstream ss;
  write_field(ss, u, "u1");
  const NamedField back = read_field(ss, g);
  EXPECT_EQ(back.name, "u1");
  ASSERT_EQ(back.field.size(), u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back.field[i]), std::bit_cast<std::uint64_t>(u[i]));
  }
}

TEST(FieldIo, HeaderAndPayloadLayout) {
  auto g = make_grid(8);
  const auto u = RealField::sample(g, [&](Point p) { return p.x1 + 10 * p.x2; });
  std::stringstream ss;
  write_field(ss, u, "probe");
  const std::string s = ss.str();
  const auto nl = s.find('\n');
  ASSERT_NE(nl, std::string::npos);
  EXPECT_EQ(s.substr(0, nl), R"({"N":8,"name":"probe"})");
  ASSERT_EQ(s.size() - nl - 1, 64u * 8u);
  // second value is node (1, 0): x1 inner index
  double v;
  std::memcpy(&v, s.data() + nl + 1 + 8, 8);
  if constexpr (std::endian::native == std::endian::little) {
    EXPECT_DOUBLE_EQ(v, u[g->index(1, 0)]);
    EXPECT_DOUBLE_EQ(v, 1.5 / 8 + 10 * 0.5 / 8);
  }
}

TEST(FieldIo, FileRoundTrip) {
  auto g = make_grid(8);
  std::mt19937_64 rng(2);
  const RealField u = random_bandlimited(g, rng, 3);
  const auto path = std::filesystem::temp_directory_path() / "mcsv_field_io_test.field";
  write_field(path, u, "w");
  const NamedField back = read_field(path, g);
  EXPECT_EQ(back.name, "w");
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(back.field[i], u[i]);
  std::filesystem::remove(path);
}

TEST(FieldIo, ResolutionMismatchRejected) {
  std::stringstream ss;
  write_field(ss, RealField(make_grid(8), 1.0), "u");
  try {
    read_field(ss, make_grid(16));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::GridMismatch || e.kind() == ErrorKind::Io);
  }
}

TEST(FieldIo, TruncatedAndMalformedInputRejected) {
  auto g = make_grid(8);
  std::stringstream full;
  write_field(full, RealField(g, 1.0), "u");
  std::string s = full.str();
  std::stringstream cut(s.substr(0, s.size() - 5));
  EXPECT_THROW(read_field(cut, g), Error);
  std::stringstream junk("not json\n");
  EXPECT_THROW(read_field(junk, g), Error);
  std::stringstream empty;
  EXPECT_THROW(read_field(empty, g), Error);
  EXPECT_THROW(read_field(std::filesystem::path("/nonexistent/dir/x.field"), g), Error);
}
