#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"

using namespace pdirac;

namespace {

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& ex) {
    return ex.what();
  }
  return "";
}

}  // namespace

TEST_CASE("numbers use 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-2.5e-300) == "-2.5e-300");
  CHECK(format_number(2.0 / 3.0) == "0.66666666666666663");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(number_json(std::numeric_limits<double>::infinity()) == Json("inf"));
  for (double x : {kPi, 1.0 / 3.0, 6.02214076e23, -1e-310}) CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
}

TEST_CASE("scalar parsing accepts numbers and rational strings") {
  CHECK(parse_scalar(Json(0.25), "/x") == 0.25);
  CHECK(parse_scalar(Json("1/4"), "/x") == 0.25);
  CHECK(parse_scalar(Json("-3"), "/x") == -3.0);
  CHECK(parse_complex(Json::array({1, "1/2"}), "/z") == cplx(1.0, 0.5));
  CHECK(parse_integer(Json("6/3"), "/n") == 2);
  CHECK(error_of([] { parse_scalar(Json("1/0"), "/a/b"); }).rfind("/a/b:", 0) == 0);
  CHECK(error_of([] { parse_integer(Json("1/2"), "/n"); }).rfind("/n:", 0) == 0);
  CHECK(error_of([] { parse_complex(Json::array({1, 2, 3}), "/z"); }).rfind("/z:", 0) == 0);
}

TEST_CASE("fields round-trip through JSON") {
  const Lattice L = Lattice::cubic(3);
  const CliffordRep rep = build_clifford(3);
  std::mt19937_64 rng(71);
  const FourierField A = oracle::random_vector_field(L, 4, 2, 0.5, rng);
  const FourierField V = oracle::random_anticommuting_field(L, rep, 2, 1, 0.5, rng);
  const FourierField A2 = field_from_json(to_json(A), L, FieldKind::kVector, 3, "/A");
  const FourierField V2 = field_from_json(to_json(V), L, FieldKind::kMatrix, 4, "/V");
  CHECK(A2.coeffs() == A.coeffs());
  CHECK(V2.coeffs() == V.coeffs());
  CHECK(to_json(A2).dump() == to_json(A).dump());
}

TEST_CASE("field parsing errors name the offending path") {
  const Lattice L = Lattice::cubic(3);
  const Json bad_matrix = Json::parse(R"([{"N": [0, 0, 0], "value": [[1, 0], [0, 1]]}])");
  CHECK(error_of([&] { field_from_json(bad_matrix, L, FieldKind::kMatrix, 4, "/potential/V0"); })
            .rfind("/potential/V0/0/value", 0) == 0);
  const Json bad_entry = Json::parse(R"([{"N": [0, 0, 0], "value": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, "x", 0], [0, 0, 0, 1]]}])");
  CHECK(error_of([&] { field_from_json(bad_entry, L, FieldKind::kMatrix, 4, "/potential/V0"); })
            .rfind("/potential/V0/0/value/2/2", 0) == 0);
  const Json extra = Json::parse(R"([{"N": [0, 0, 0], "value": [1, 0, 0], "note": 1}])");
  CHECK(error_of([&] { field_from_json(extra, L, FieldKind::kVector, 3, "/A"); }).rfind("/A/0/note", 0) == 0);
  const Json dup = Json::parse(R"([{"N": [0, 1, 0], "value": [1, 0, 0]}, {"N": [0, 1, 0], "value": [1, 0, 0]}])");
  CHECK(error_of([&] { field_from_json(dup, L, FieldKind::kVector, 3, "/A"); }).rfind("/A/1/N", 0) == 0);
}

TEST_CASE("measures round-trip and reject unknown keys") {
  for (const MeasureSpec& mu : {MeasureSpec::dirac(), MeasureSpec::dirac(0.5), MeasureSpec::plateau(0.25, 0.5)}) {
    const MeasureSpec back = measure_from_json(to_json(mu), "/measure");
    CHECK(to_json(back).dump() == to_json(mu).dump());
  }
  CHECK(error_of([] { measure_from_json(Json::parse(R"({"kind": "dirac", "w": 1})"), "/measure"); })
            .rfind("/measure/w", 0) == 0);
  CHECK(error_of([] { measure_from_json(Json::parse(R"({"kind": "plateau", "h": 0.5, "h1": 0.25})"), "/measure"); })
            .rfind("/measure", 0) == 0);
}

TEST_CASE("report keys come out in a fixed order") {
  const Lattice L = Lattice::cubic(3);
  const CliffordRep rep = build_clifford(3);
  ThomasParams p;
  p.gamma = {1, 0, 0};
  p.k_points = 1;
  p.kappas = {kPi};
  p.cutoff = 2 * kPi;
  p.sphere_samples = 8;
  const Theorem2Report r = verify_theorem2(L, rep, PotentialSet::zero(L, rep), p, 0.5);
  const Json j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys.front() == "label");
  CHECK(j["label"] == "EMPIRICAL");
  CHECK(j.dump() == to_json(r).dump());
  std::ostringstream csv;
  write_margin_csv(csv, r);
  CHECK(csv.str().rfind("k_index,kappa,sigma_min,bound,margin\n", 0) == 0);
}
