#include "gesturekit/synth.hpp"

#include <doctest.h>

using namespace gesturekit;

TEST_CASE("generation is deterministic per seed") {
  GestureFamily fam;
  fam.kind = PathKind::Signature;
  fam.finger_count = 2;
  fam.shape_seed = 3;
  NoiseModel noise;
  noise.seed = 17;
  const auto a = generate(fam, noise, 4);
  const auto b = generate(fam, noise, 4);
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(serialize_trace(a[i]) == serialize_trace(b[i]));
  noise.seed = 18;
  CHECK(serialize_trace(generate(fam, noise, 1)[0]) != serialize_trace(a[0]));
}

TEST_CASE("generated traces parse and carry trial metadata") {
  for (auto kind : {PathKind::Line, PathKind::Circle, PathKind::Zigzag, PathKind::Signature}) {
    for (auto layout : {FingerLayout::Rigid, FingerLayout::Mirrored, FingerLayout::Divergent}) {
      GestureFamily fam;
      fam.kind = kind;
      fam.layout = layout;
      fam.finger_count = 3;
      fam.gesture_id = "x";
      NoiseModel noise;
      noise.seed = 5;
      noise.positional_sigma_px = 8.0;
      const auto traces = generate(fam, noise, 17);
      for (const auto& t : traces) {
        const GestureTrace back = parse_trace(serialize_trace(t));
        CHECK(back.fingers.size() == 3);
        CHECK(back.session == (t.trial_index <= 12 ? 1 : 2));
        CHECK_NOTHROW(resample(back));
      }
      CHECK(traces.front().trial_index == 1);
      CHECK(traces.back().trial_index == 17);
    }
  }
}

TEST_CASE("zero noise repeats the path up to timing") {
  GestureFamily fam;
  fam.kind = PathKind::Zigzag;
  NoiseModel noise;
  noise.positional_sigma_px = 0.0;
  noise.seed = 2;
  const auto traces = generate(fam, noise, 3);
  // Each sample lies on the ideal path: compare against the dense ideal polyline.
  const Eigen::MatrixX2d dense = family_path(fam, 0, Eigen::VectorXd::LinSpaced(20001, 0.0, 1.0));
  for (const auto& t : traces) {
    for (const auto& s : t.fingers[0].samples) {
      const Eigen::RowVector2d p(s.x_px, s.y_px);
      const double d = (dense.rowwise() - p).rowwise().norm().minCoeff();
      CHECK(d < 0.5);
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK(parse_path_kind("zigzag") == PathKind::Zigzag);
  CHECK(to_string(PathKind::Circle) == "circle");
  CHECK(parse_finger_layout("divergent") == FingerLayout::Divergent);
  CHECK_THROWS_AS(parse_path_kind("spiral"), std::invalid_argument);
  CHECK_THROWS_AS(parse_finger_layout("diagonal"), std::invalid_argument);
  GestureFamily fam;
  NoiseModel noise;
  CHECK_THROWS_AS(generate(fam, noise, 0), std::invalid_argument);
  noise.positional_sigma_px = -1.0;
  CHECK_THROWS_AS(generate(fam, noise, 1), std::invalid_argument);
  noise = {};
  fam.finger_count = 0;
  CHECK_THROWS_AS(generate(fam, noise, 1), std::invalid_argument);
}

TEST_CASE("random generator is a fixed algorithm") {
  Rng a(123, 4, 5);
  Rng b(123, 4, 5);
  Rng c(123, 4, 6);
  for (int i = 0; i < 10; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(a.normal() != c.normal());
}
