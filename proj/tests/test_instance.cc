#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "parkroute/errors.h"
#include "parkroute/gridlab.h"
#include "parkroute/instance.h"
#include "parkroute/published.h"

using namespace parkroute;

namespace {

const char* kTiny = R"({
  "n": 1, "q": 1, "park_time": [1],
  "drive": [[0, 2], [2, 0]],
  "walk": [[0, 3], [3, 0]]
})";

}  // namespace

TEST_CASE("smallest instance parses") {
  const Instance inst = load_instance(kTiny);
  CHECK(inst.n == 1);
  CHECK(inst.num_locations() == 2);
  CHECK(inst.drive(0, 1) == 2.0);
  CHECK(inst.walk(1, 0) == 3.0);
  CHECK(inst.park_time[0] == 0.0);
  CHECK(inst.park_time[1] == 1.0);
  CHECK(inst.capacity_count == 1);
  CHECK(inst.parking == std::vector<LocationId>{1});
  CHECK(inst.drive_and_park(0, 1) == 3.0);
  CHECK(inst.drive_and_park(1, 0) == 2.0);
}

TEST_CASE("missing walk row is a dimension error") {
  const char* text = R"({
    "n": 2, "q": 1, "park_time": [1, 1],
    "drive": [[0, 1, 1], [1, 0, 1], [1, 1, 0]],
    "walk": [[0, 1, 1], [1, 0, 1]]
  })";
  CHECK_THROWS_AS(load_instance(text), DimensionError);
}

TEST_CASE("malformed documents are parse errors") {
  CHECK_THROWS_AS(load_instance("{"), ParseError);
  CHECK_THROWS_AS(load_instance(R"({"q": 1})"), ParseError);
}

TEST_CASE("negative times are rejected") {
  const char* text = R"({
    "n": 1, "q": 1, "park_time": [-1],
    "drive": [[0, 2], [2, 0]], "walk": [[0, 3], [3, 0]]
  })";
  CHECK_THROWS_AS(load_instance(text), InvalidValueError);
}

TEST_CASE("save then load is bit identical") {
  GeoParams gp;
  gp.n = 7;
  gp.seed = 11;
  gp.load = 0.25;
  const Instance a = gen_geo_instance(gp);
  const Instance b = load_instance(save_instance(a));
  CHECK(a == b);
  CHECK(save_instance(a) == save_instance(b));
}

TEST_CASE("weights, volumes and restricted parking round trip") {
  const char* text = R"({
    "n": 3, "q": null, "park_time": [1, 2, 3],
    "cap_weight": 10, "weights": [5, 5, 9],
    "cap_volume": 4, "volumes": [1, 1, 1],
    "parking": [1, 3],
    "drive": [[0,1,1,1],[1,0,1,1],[1,1,0,1],[1,1,1,0]],
    "walk": [[0,1,1,1],[1,0,1,1],[1,1,0,1],[1,1,1,0]]
  })";
  const Instance inst = load_instance(text);
  CHECK_FALSE(inst.capacity_count.has_value());
  CHECK(inst.capacity_weight == 10.0);
  CHECK(inst.weight(3) == 9.0);
  CHECK(inst.volume(2) == 1.0);
  CHECK(inst.parking == std::vector<LocationId>{1, 3});
  CHECK_FALSE(inst.is_parking(2));
  CHECK(load_instance(save_instance(inst)) == inst);
}

TEST_CASE("triangle violation is listed with its excess") {
  Instance inst = load_instance(R"({
    "n": 3, "q": 1, "park_time": [0, 0, 0],
    "drive": [[0,1,1,1],[1,0,2,10],[1,2,0,3],[1,10,3,0]],
    "walk": [[0,1,1,1],[1,0,1,1],[1,1,0,1],[1,1,1,0]]
  })");
  const ValidationReport r = validate_instance(inst);
  CHECK_FALSE(r.metric());
  CHECK(r.drive_violations > 0);
  CHECK(r.walk_violations == 0);
  bool found = false;
  for (const TriangleViolation& v : r.violations) {
    if (v.matrix == 'D' && v.from == 1 && v.via == 2 && v.to == 3) {
      CHECK(v.excess == doctest::Approx(5.0));
      found = true;
    }
  }
  CHECK(found);
  CHECK(r.drive_worst_excess >= 5.0);
}

TEST_CASE("random geo instances are metric") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GeoParams gp;
    gp.n = 9;
    gp.seed = seed;
    CHECK(validate_instance(gen_geo_instance(gp)).metric());
  }
}

TEST_CASE("a package heavier than the capacity is infeasible") {
  const char* text = R"({
    "n": 2, "q": null, "park_time": [1, 1],
    "cap_weight": 10, "weights": [5, 11],
    "drive": [[0,1,1],[1,0,1],[1,1,0]], "walk": [[0,1,1],[1,0,1],[1,1,0]]
  })";
  CHECK_THROWS_AS(validate_instance(load_instance(text)), InfeasibleError);
}

TEST_CASE("geo generator is deterministic in the seed") {
  GeoParams a;
  a.n = 5;
  a.seed = 7;
  GeoParams b = a;
  b.seed = 8;
  CHECK(gen_geo_instance(a) == gen_geo_instance(a));
  CHECK(gen_geo_instance(a).coords != gen_geo_instance(b).coords);
  CHECK(gen_geo_instance(a).seed == 7u);
}

TEST_CASE("grid instance distances") {
  GridParams gp;
  gp.sqrt_n = 2;
  const GridInstance g = gen_grid_instance(gp);
  CHECK(g.instance.n == 4);
  CHECK(g.min_distance == 2);
  const LocationId c11 = grid_customer(2, 1, 1);
  const LocationId c22 = grid_customer(2, 2, 2);
  CHECK(g.instance.drive(c11, c22) == 2.0);
  CHECK(g.instance.drive(kDepot, c11) == 2.0);

  gp.block_len = 0.5;
  gp.drive_rate = 3.0;
  gp.walk_rate = 3.0;
  CHECK(gen_grid_instance(gp).instance.drive(c11, c22) == doctest::Approx(2 * 0.5 * 3.0));
}

TEST_CASE("second closest grid customers sit one block further out") {
  GridParams gp;
  gp.sqrt_n = 6;
  const GridInstance g = gen_grid_instance(gp);
  std::vector<double> d;
  for (LocationId c = 1; c <= g.instance.n; ++c) d.push_back(g.instance.drive(kDepot, c));
  std::sort(d.begin(), d.end());
  CHECK(d[0] == g.min_distance);
  CHECK(d[1] > d[0]);
  CHECK(d[1] == g.min_distance + 1);
  CHECK(d[2] == g.min_distance + 1);
  CHECK(d[3] > d[2]);
}

TEST_CASE("grid parameter checks") {
  GridParams gp;
  gp.sqrt_n = 3;
  CHECK_THROWS_AS(check_grid(gp), InvalidValueError);
  gp.sqrt_n = 2;
  gp.walk_rate = 0.5;
  CHECK_THROWS_AS(check_grid(gp), InvalidValueError);
}

TEST_CASE("published directory loader") {
  if (!published_loader_enabled()) return;
  const auto dir = std::filesystem::temp_directory_path() / "parkroute_published_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "drive.csv") << "# depot first\n0,2,3\n2,0,1\n3,1,0\n";
    std::ofstream(dir / "walk.csv") << "0 4\n4 0\n";
    std::ofstream(dir / "meta.json") << R"({"p": 2.5, "q": 2, "f": 0.5})";
  }
  const Instance inst = load_instance_file(dir);
  CHECK(inst.n == 2);
  CHECK(inst.drive(0, 2) == 3.0);
  CHECK(inst.walk(1, 2) == 4.0);
  CHECK(inst.park_time[2] == 2.5);
  CHECK(inst.capacity_count == 2);
  CHECK(inst.load_per_package == 0.5);
  PublishedOptions opts;
  opts.park_time = 7.0;
  CHECK(load_published_instance(dir, opts).park_time[1] == 7.0);
  std::filesystem::remove_all(dir);
}
