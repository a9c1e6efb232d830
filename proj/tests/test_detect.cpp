// Copyright 2026 The qmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmimo/detect.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "qmimo/quantizer.hpp"

using namespace qmimo;
using cd = std::complex<double>;

namespace {

RepresentativeSet reps_from(const Eigen::MatrixXcd& centroids) {
  RepresentativeSet r;
  r.centroids = centroids;
  return r;
}

BlockObservation observe(const Eigen::MatrixXcd& H, const LabelSet& ls,
                         const TrainingPlan& plan, int t_d, double snr_db,
                         std::uint64_t seed, std::uint64_t trial,
                         std::vector<int> data_slots = {}) {
  std::vector<int> slots(plan.trained);
  if (data_slots.empty()) {
    Rng data(seed, trial, Stream::kData);
    for (int i = 0; i < t_d; ++i) {
      slots.push_back(static_cast<int>(data.uniform_int(ls.K)));
    }
  } else {
    slots.insert(slots.end(), data_slots.begin(), data_slots.end());
  }
  Rng nz(seed, trial, Stream::kNoise);
  const int nt = static_cast<int>(H.cols());
  return simulate_block(H, ls, slots, plan.t_t, QuantizerSpec(1, 2.0),
                        NoiseSpec::from_snr_db(snr_db, nt), nz);
}

}  // namespace

TEST_CASE("nearest centroid basics") {
  Eigen::MatrixXcd c(1, 2);
  c << cd{1, 1}, cd{-1, -1};
  Eigen::VectorXcd y(1);
  y << cd{0.9, 0.8};
  CHECK(mcd_detect(y, reps_from(c)) == 0);
  y << cd{-0.1, -0.2};
  CHECK(mcd_detect(y, reps_from(c)) == 1);

  // exact hit on a centroid
  Eigen::MatrixXcd c4(2, 4);
  c4 << cd{1, 0}, cd{0, 1}, cd{-1, 0}, cd{0, -1},
        cd{0, 1}, cd{1, 0}, cd{0, -1}, cd{-1, 0};
  Eigen::VectorXcd hit = c4.col(2);
  CHECK(mcd_detect(hit, reps_from(c4)) == 2);

  RepresentativeSet empty;
  empty.centroids.resize(2, 0);
  CHECK_THROWS(mcd_detect(hit, empty));
}

TEST_CASE("argmin is invariant to common scaling and rotation") {
  Rng rng(41, 0, Stream::kChannel);
  Eigen::MatrixXcd c(3, 5);
  for (int k = 0; k < 5; ++k) {
    for (int r = 0; r < 3; ++r) c(r, k) = rng.cnormal();
  }
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::VectorXcd y(3);
    for (int r = 0; r < 3; ++r) y(r) = 2.0 * rng.cnormal();
    const int base = mcd_detect(y, reps_from(c));
    CHECK(mcd_detect(3.0 * y, reps_from(3.0 * c)) == base);
    const cd phase = std::polar(1.0, 2.0 * rng.uniform());
    CHECK(mcd_detect(phase * y, reps_from(phase * c)) == base);
  }
}

TEST_CASE("distance ties go to the smallest index") {
  Eigen::MatrixXcd c(1, 3);
  c << cd{1, 0}, cd{-1, 0}, cd{1, 0};
  Eigen::VectorXcd y(1);
  y << cd{0, 0};  // equidistant from all three
  CHECK(mcd_detect(y, reps_from(c)) == 0);
  y << cd{2, 0};  // centroids 0 and 2 tie
  CHECK(mcd_detect(y, reps_from(c)) == 0);
}

TEST_CASE("assignment pins training slots and ranks the rest") {
  const LabelSet ls = enumerate_labels(build_constellation(Modulation::kBpsk), 1);
  const TrainingPlan plan = make_training_plan(ls, 2, TrainingMode::kFull);
  REQUIRE(plan.t_t == 4);
  BlockObservation obs;
  obs.t_t = 4;
  obs.t_d = 2;
  obs.transmitted = {0, 0, 1, 1, 0, 1};
  Eigen::MatrixXcd c(1, 2);
  c << cd{1, 0}, cd{-1, 0};
  obs.y.resize(1, 6);
  // training slot 0 sits on centroid 1 but stays pinned to label 0
  obs.y << cd{-1, 0}, cd{1, 0}, cd{-1, 0}, cd{-1, 0}, cd{0.9, 0}, cd{-0.9, 0};
  const Assignment a = assign_clusters(obs, reps_from(c), plan);
  CHECK(a.cluster == std::vector<int>{0, 0, 1, 1, 0, 1});
}

TEST_CASE("cond1 update shares the antipodal pair") {
  // K = 4, single vector assigned to cluster 2 (= negation partner of 0)
  Eigen::MatrixXcd y(2, 1);
  y << cd{0.5, -1}, cd{2, 0.25};
  Assignment a;
  a.cluster = {2};
  Eigen::MatrixXcd prev = Eigen::MatrixXcd::Zero(2, 4);
  const Eigen::MatrixXcd c =
      update_centroids(y, a, SymmetryCondition::kCond1, prev);
  CHECK((c.col(0) + y.col(0)).norm() < 1e-14);   // centroid 0 = -y
  CHECK((c.col(2) - y.col(0)).norm() < 1e-14);   // centroid 2 = +y
  CHECK(c.col(1).norm() == doctest::Approx(0.0));  // untouched group
  CHECK(c.col(3).norm() == doctest::Approx(0.0));

  // mass only in cluster 0: plain mean
  Eigen::MatrixXcd y2(2, 3);
  y2 << cd{1, 0}, cd{2, 0}, cd{3, 0},
        cd{0, 1}, cd{0, 2}, cd{0, 3};
  Assignment a2;
  a2.cluster = {0, 0, 0};
  const Eigen::MatrixXcd c2 =
      update_centroids(y2, a2, SymmetryCondition::kCond1, prev);
  CHECK(c2(0, 0) == cd{2, 0});
  CHECK(c2(1, 0) == cd{0, 2});
  CHECK((c2.col(2) + c2.col(0)).norm() < 1e-14);
}

TEST_CASE("cond1 update averages a pair with opposite signs") {
  Eigen::MatrixXcd y(1, 3);
  y << cd{1.0, 0}, cd{1.2, 0}, cd{-0.8, 0};
  Assignment a;
  a.cluster = {0, 0, 2};  // two in cluster 0, one in its partner 2
  Eigen::MatrixXcd prev = Eigen::MatrixXcd::Zero(1, 4);
  const Eigen::MatrixXcd c =
      update_centroids(y, a, SymmetryCondition::kCond1, prev);
  // (1.0 + 1.2 - (-0.8)) / 3 = 1.0
  CHECK(c(0, 0).real() == doctest::Approx(1.0));
  CHECK(c(0, 2).real() == doctest::Approx(-1.0));
}

TEST_CASE("cond2 update applies the rotation coefficients") {
  const cd j{0, 1};
  Eigen::MatrixXcd y(1, 1);
  y << cd{0.4, 0.3};
  Eigen::MatrixXcd prev = Eigen::MatrixXcd::Zero(1, 8);
  for (int quart = 0; quart < 4; ++quart) {
    Assignment a;
    a.cluster = {quart * 2};  // K = 8, q = 2: first label of each quartile
    const Eigen::MatrixXcd c =
        update_centroids(y, a, SymmetryCondition::kCond2, prev);
    // contribution of a member of quartile m to the base centroid:
    // +y, -y, -j y, +j y for m = 0,1,2,3
    const cd coef[4] = {cd{1, 0}, cd{-1, 0}, -j, j};
    CHECK(std::abs(c(0, 0) - coef[quart] * y(0, 0)) < 1e-14);
    // and the four slots of the quartile keep the exact relations
    CHECK(std::abs(c(0, 2) + c(0, 0)) < 1e-14);
    CHECK(std::abs(c(0, 4) - j * c(0, 0)) < 1e-14);
    CHECK(std::abs(c(0, 6) + j * c(0, 0)) < 1e-14);
  }
}

TEST_CASE("empty groups keep their previous centroids") {
  Eigen::MatrixXcd y(1, 1);
  y << cd{1, 1};
  Assignment a;
  a.cluster = {0};
  Eigen::MatrixXcd prev(1, 4);
  prev << cd{9, 0}, cd{7, 7}, cd{-9, 0}, cd{-7, -7};
  const Eigen::MatrixXcd c =
      update_centroids(y, a, SymmetryCondition::kCond1, prev);
  CHECK(c(0, 0) == cd{1, 1});
  CHECK(c(0, 1) == cd{7, 7});   // untouched group keeps its value
  CHECK(c(0, 3) == cd{-7, -7});
}

TEST_CASE("semi-supervised with iter_max 1 equals plain detection") {
  const LabelSet ls = enumerate_labels(build_constellation(Modulation::kQpsk), 2);
  const TrainingPlan plan = make_training_plan(ls, 2, TrainingMode::kSubspace);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    Rng ch(42, trial, Stream::kChannel);
    const Eigen::MatrixXcd H = draw_channel(8, 2, ch);
    const BlockObservation obs = observe(H, ls, plan, 60, 5.0, 42, trial);
    const RepresentativeSet reps = estimate_representatives(obs, plan, ls);
    const DecodeResult semi = semisupervised_decode(obs, plan, ls, reps, 1);
    const DecodeResult mcd = mcd_decode(obs, reps);
    CHECK(semi.decoded == mcd.decoded);
    CHECK(semi.iterations == 1);
  }
}

TEST_CASE("clustering objective never increases") {
  const LabelSet ls = enumerate_labels(build_constellation(Modulation::kBpsk), 2);
  const TrainingPlan plan = make_training_plan(ls, 1, TrainingMode::kSubspace);
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    Rng ch(43, trial, Stream::kChannel);
    const Eigen::MatrixXcd H = draw_channel(8, 2, ch);
    const BlockObservation obs = observe(H, ls, plan, 100, 0.0, 43, trial);
    const RepresentativeSet reps = estimate_representatives(obs, plan, ls);
    const DecodeResult res = semisupervised_decode(obs, plan, ls, reps, 6);
    REQUIRE(res.iterations >= 1);
    REQUIRE(res.iterations <= 6);
    REQUIRE(static_cast<int>(res.objective.size()) == res.iterations);
    for (std::size_t i = 1; i < res.objective.size(); ++i) {
      CHECK(res.objective[i] <= res.objective[i - 1] + 1e-9);
    }
    CHECK(res.decoded == res.per_iteration.back());
  }
}

TEST_CASE("semi-supervised requires symmetry unless overridden") {
  const LabelSet full = enumerate_labels(build_constellation(Modulation::kBpsk), 2);
  const LabelSet none = restrict_label_set(full, {0, 1});
  REQUIRE(none.condition == SymmetryCondition::kNone);
  const TrainingPlan plan = make_training_plan(none, 2, TrainingMode::kFull);
  Rng ch(44, 0, Stream::kChannel);
  const Eigen::MatrixXcd H = draw_channel(4, 2, ch);
  const BlockObservation obs = observe(H, none, plan, 20, 10.0, 44, 0);
  const RepresentativeSet reps = estimate_representatives(obs, plan, none);
  CHECK_THROWS(semisupervised_decode(obs, plan, none, reps, 3));
  const DecodeResult res = semisupervised_decode(obs, plan, none, reps, 3, true);
  CHECK(static_cast<int>(res.decoded.size()) == 20);
}

TEST_CASE("supervised decodes a clean block in one sweep") {
  const LabelSet ls = enumerate_labels(build_constellation(Modulation::kQpsk), 2);
  const TrainingPlan plan = make_training_plan(ls, 3, TrainingMode::kSubspace);
  const SegmentPlan seg(50, ls.bits_per_vector, 16, 24);
  Rng ch(45, 0, Stream::kChannel);
  const Eigen::MatrixXcd H = draw_channel(16, 2, ch);
  Rng data(45, 0, Stream::kData);
  std::vector<std::uint8_t> bits(seg.segments * seg.l_data);
  for (auto& b : bits) b = static_cast<std::uint8_t>(data.uniform_int(2));
  const std::vector<int> framed = frame_segments(bits, seg, ls);
  const BlockObservation obs = observe(H, ls, plan, 50, 30.0, 45, 0, framed);
  const RepresentativeSet reps0 = estimate_representatives(obs, plan, ls);
  const DecodeResult res = supervised_decode(obs, plan, seg, ls, reps0);
  CHECK(res.iterations == 1);
  for (int s = 0; s < seg.segments; ++s) CHECK(res.segment_pass[s] == 1);
  for (int n = 0; n < 50; ++n) {
    CHECK(res.decoded[n] == obs.transmitted[plan.t_t + n]);
  }
  // every slot of every passed segment was absorbed, plus 3 rotated copies,
  // on top of the l_t training samples per label
  long total = 0;
  for (int k = 0; k < ls.K; ++k) {
    CHECK(res.reps.counts[k] >= plan.l_t);
    total += res.reps.counts[k];
  }
  CHECK(total == ls.K * plan.l_t + 4L * 50);
}

TEST_CASE("supervised sample sets grow and passes hold centroids together") {
  const LabelSet ls = enumerate_labels(build_constellation(Modulation::kQpsk), 2);
  const TrainingPlan plan = make_training_plan(ls, 3, TrainingMode::kSubspace);
  const SegmentPlan seg(100, ls.bits_per_vector, 16, 24);
  int passed_blocks = 0;
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    Rng ch(46, trial, Stream::kChannel);
    const Eigen::MatrixXcd H = draw_channel(16, 2, ch);
    Rng data(46, trial, Stream::kData);
    std::vector<std::uint8_t> bits(seg.segments * seg.l_data);
    for (auto& b : bits) b = static_cast<std::uint8_t>(data.uniform_int(2));
    const std::vector<int> framed = frame_segments(bits, seg, ls);
    const BlockObservation obs = observe(H, ls, plan, 100, 5.0, 46, trial, framed);
    const RepresentativeSet reps0 = estimate_representatives(obs, plan, ls);
    const DecodeResult res = supervised_decode(obs, plan, seg, ls, reps0);
    CHECK(res.iterations <= seg.segments + 1);
    long absorbed = 0;
    for (int k = 0; k < ls.K; ++k) {
      CHECK(res.reps.counts[k] >= plan.l_t);
      absorbed += res.reps.counts[k] - plan.l_t;
    }
    long passes = 0;
    for (int s = 0; s < seg.segments; ++s) passes += res.segment_pass[s];
    // each passed segment donates slots_per_segment vectors times 4 copies
    CHECK(absorbed == passes * seg.slots_per_segment * 4);
    // a passed segment re-checks under the final decode output
    for (int s = 0; s < seg.segments; ++s) {
      if (!res.segment_pass[s]) continue;
      ++passed_blocks;
      const std::span<const int> out(res.decoded.data() +
                                         s * seg.slots_per_segment,
                                     seg.slots_per_segment);
      CHECK(verify_segment(out, seg, ls));
    }
  }
  CHECK(passed_blocks > 0);  // the scenario is easy enough to pass sometimes
}

TEST_CASE("supervised rejects a mismatched segment plan") {
  const LabelSet ls = enumerate_labels(build_constellation(Modulation::kQpsk), 2);
  const TrainingPlan plan = make_training_plan(ls, 1, TrainingMode::kSubspace);
  const SegmentPlan seg(50, ls.bits_per_vector, 16, 24);
  Rng ch(47, 0, Stream::kChannel);
  const Eigen::MatrixXcd H = draw_channel(4, 2, ch);
  const BlockObservation obs = observe(H, ls, plan, 40, 10.0, 47, 0);
  const RepresentativeSet reps = estimate_representatives(obs, plan, ls);
  CHECK_THROWS(supervised_decode(obs, plan, seg, ls, reps));
}

TEST_CASE("all detectors are exact on clean separable sign patterns") {
  const LabelSet ls = enumerate_labels(build_constellation(Modulation::kBpsk), 2);
  const TrainingPlan plan = make_training_plan(ls, 2, TrainingMode::kFull);
  int usable = 0;
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    Rng ch(48, trial, Stream::kChannel);
    const Eigen::MatrixXcd H = draw_channel(6, 2, ch);
    // usable only when all four sign patterns are distinct
    Eigen::MatrixXcd pat = quantize(H * ls.labels, QuantizerSpec(1, 2.0));
    bool distinct = true;
    for (int i = 0; i < ls.K && distinct; ++i) {
      for (int k = i + 1; k < ls.K; ++k) {
        if ((pat.col(i) - pat.col(k)).norm() < 1e-9) {
          distinct = false;
          break;
        }
      }
    }
    if (!distinct) continue;
    ++usable;
    const BlockObservation obs = observe(H, ls, plan, 40, 60.0, 48, trial);
    const RepresentativeSet reps = estimate_representatives(obs, plan, ls);
    const DecodeResult mcd = mcd_decode(obs, reps);
    const DecodeResult semi = semisupervised_decode(obs, plan, ls, reps, 3);
    for (int n = 0; n < obs.t_d; ++n) {
      CHECK(mcd.decoded[n] == obs.transmitted[plan.t_t + n]);
      CHECK(semi.decoded[n] == obs.transmitted[plan.t_t + n]);
    }
  }
  CHECK(usable > 20);
}
