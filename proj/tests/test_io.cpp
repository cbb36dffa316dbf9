#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>
#include <sstream>

#include "malice/io.hpp"
#include "malice/rng.hpp"

using namespace malice;

namespace {

Dataset awkward_dataset() {
  RngEngine eng = make_stream(5, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> expo(-300.0, 300.0);
  Dataset data(3);
  for (int i = 0; i < 200; ++i) {
    Vec x(3);
    x[0] = gauss(eng);
    x[1] = gauss(eng) * std::pow(10.0, int(expo(eng)) / 10);
    x[2] = (i % 7 == 0) ? 0.0 : 1.0 / gauss(eng);
    if (!std::isfinite(x[2])) x[2] = 0.0;
    data.add(LabeledSample{x, i % 2 ? 1 : -1,
                           i % 3 ? Provenance::Clean : Provenance::Dirty});
  }
  // A few exact decimals and denormal-ish values.
  data.add(LabeledSample{{0.1, 0.2, 0.30000000000000004}, 1});
  data.add(LabeledSample{{5e-324, -5e-324, 1e308}, -1});
  return data;
}

bool identical(const Dataset& a, const Dataset& b) {
  if (a.size() != b.size() || a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].y != b[i].y || a[i].provenance != b[i].provenance) return false;
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (a[i].x[j] != b[i].x[j]) return false;  // bit-exact
    }
  }
  return true;
}

}  // namespace

TEST_CASE("format_double round-trips shortest decimals") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e308, 5e-324, 0.0, -0.0}) {
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("dataset CSV round-trip is bit-exact") {
  const Dataset data = awkward_dataset();
  std::stringstream ss;
  write_dataset_csv(data, ss);
  const Dataset back = read_dataset_csv(ss);
  CHECK(identical(data, back));

  // Serializing again produces identical bytes.
  std::stringstream ss2;
  write_dataset_csv(back, ss2);
  std::stringstream ss3;
  write_dataset_csv(data, ss3);
  CHECK(ss2.str() == ss3.str());
}

TEST_CASE("dataset JSONL round-trip is bit-exact") {
  const Dataset data = awkward_dataset();
  std::stringstream ss;
  write_dataset_jsonl(data, ss);
  const Dataset back = read_dataset_jsonl(ss);
  CHECK(identical(data, back));
}

TEST_CASE("CSV header carries dimension and provenance") {
  Dataset data(2);
  data.add(LabeledSample{{1.5, -2.0}, 1, Provenance::Dirty});
  std::stringstream ss;
  write_dataset_csv(data, ss);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "x_0,x_1,y,provenance");
  std::string row;
  std::getline(ss, row);
  CHECK(row == "1.5,-2,1,dirty");
}

TEST_CASE("weights CSV round-trip") {
  WeightVector q{Vec{0.0, 1.0, 0.12345678901234567}};
  const std::string path = "test_weights_tmp.csv";
  write_weights_csv(q, path);
  const WeightVector back = read_weights_csv(path);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back.q[i] == q.q[i]);
  std::remove(path.c_str());
}

TEST_CASE("malformed input is rejected") {
  std::stringstream bad_header("a,b\n1,2\n");
  CHECK_THROWS(read_dataset_csv(bad_header));
  std::stringstream bad_label("x_0,y,provenance\n1.0,3,clean\n");
  CHECK_THROWS(read_dataset_csv(bad_label));
  std::stringstream bad_prov("x_0,y,provenance\n1.0,1,sketchy\n");
  CHECK_THROWS(read_dataset_csv(bad_prov));
}
