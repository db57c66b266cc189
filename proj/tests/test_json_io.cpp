#include <gtest/gtest.h>

#include <cstdio>
#include <functional>
#include <filesystem>
#include <fstream>
#include <random>

#include "squashkit/error.hpp"
#include "squashkit/fock.hpp"
#include "squashkit/json_io.hpp"
#include "test_util.hpp"

namespace squashkit {
namespace {

using io::Json;

ErrorCode parse_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::NotHermitian;
}

TEST(JsonIo, MatrixRoundTripIsExact) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const auto m = testing::random_matrix(1 + t % 4, 1 + (t / 4) % 3, rng) * Complex(1e-3 + t);
    const auto text = io::dump(io::to_json(m));
    EXPECT_EQ(io::matrix_from_json(Json::parse(text)), m);
  }
}

TEST(JsonIo, SquareMatrixFormat) {
  const auto j = io::to_json(pauli::y());
  EXPECT_EQ(j.at("dim"), 2);
  EXPECT_FALSE(j.contains("rows"));
  EXPECT_EQ(j.at("entries")[1], Json::array({0.0, -1.0}));
}

TEST(JsonIo, PovmSquashGroupRoundTrip) {
  const auto model = build_detector(FockSector({2, 1}));
  const auto p = io::povm_from_json(Json::parse(io::dump(io::to_json(model.povm))));
  for (const auto l : kAllLabels) EXPECT_EQ(p.element(l), model.povm.element(l));

  const auto f = construct_theorem1(model.povm, sector_symmetry(model));
  const auto g = io::squash_from_json(Json::parse(io::dump(io::to_json(f))));
  ASSERT_EQ(g.kraus().size(), f.kraus().size());
  for (std::size_t k = 0; k < f.kraus().size(); ++k) EXPECT_EQ(g.kraus()[k], f.kraus()[k]);

  const auto s3 = FiniteGroup::s3();
  EXPECT_EQ(io::group_from_json(io::to_json(s3)).cayley(), s3.cayley());
  const auto c4 = FiniteGroup::cyclic(4);
  const auto action = LabelAction::canonical_c4(c4);
  EXPECT_EQ(io::action_from_json(c4, io::to_json(action)).perms(), action.perms());
}

TEST(JsonIo, ActionAcceptsIndices) {
  const auto c2 = FiniteGroup::cyclic(2);
  const auto a = io::action_from_json(c2, Json::parse(R"([[0,1,2,3],["x0","z0","x1","z1"]])"));
  EXPECT_EQ(a.perms(), LabelAction::basis_swap(c2).perms());
}

TEST(JsonIo, DetectorFormat) {
  const auto j = io::to_json(build_detector(FockSector({1, 1})));
  EXPECT_EQ(j.at("dim"), 4);
  EXPECT_EQ(j.at("N"), Json::array({1, 1}));
  EXPECT_TRUE(j.at("states").contains("x1"));
  EXPECT_EQ(j.at("U_N").at("dim"), 4);
}

TEST(JsonIo, ParseErrors) {
  EXPECT_EQ(parse_code([] { io::matrix_from_json(Json::parse(R"({"dim":2,"entries":[[1,0]]})")); }),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_code([] { io::matrix_from_json(Json::parse(R"({"dim":0,"entries":[]})")); }),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_code([] { io::matrix_from_json(Json::parse(R"({"dim":1,"entries":[[1]]})")); }),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_code([] { io::matrix_from_json(Json::parse(R"({"dim":1,"entries":[["a",0]]})")); }),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_code([] { io::povm_from_json(Json::parse(R"({"dim":1,"elements":{}})")); }),
            ErrorCode::ParseError);
  EXPECT_EQ(parse_code([] { io::group_from_json(Json::parse(R"({"cayley":"c4"})")); }), ErrorCode::ParseError);
  EXPECT_EQ(parse_code([] { io::group_from_json(Json::parse(R"({"cayley":[[0,1],[1,1]]})")); }),
            ErrorCode::InvalidGroup);
  EXPECT_EQ(parse_code([] { io::read_json_file("/nonexistent/file.json"); }), ErrorCode::ParseError);
}

TEST(JsonIo, AtomicFileWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "squashkit_json_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "povm.json").string();
  io::write_json_file(path, io::to_json(Bb84Povm::ideal_qubit()));
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  const auto back = io::povm_from_json(io::read_json_file(path));
  EXPECT_EQ(back.element({Basis::X, 1}), Bb84Povm::ideal_qubit().element({Basis::X, 1}));
  {
    std::ofstream bad(path);
    bad << "{ not json";
  }
  EXPECT_EQ(parse_code([&] { io::read_json_file(path); }), ErrorCode::ParseError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace squashkit
