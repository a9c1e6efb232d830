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

#include "qmimo/training.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "qmimo/quantizer.hpp"

using namespace qmimo;

namespace {

LabelSet bpsk2() {
  return enumerate_labels(build_constellation(Modulation::kBpsk), 2);
}
LabelSet qpsk2() {
  return enumerate_labels(build_constellation(Modulation::kQpsk), 2);
}

BlockObservation make_block(const Eigen::MatrixXcd& H, const LabelSet& ls,
                            const TrainingPlan& plan, int t_d,
                            const NoiseSpec& noise, std::uint64_t seed,
                            std::uint64_t trial) {
  std::vector<int> slots(plan.trained);
  Rng data(seed, trial, Stream::kData);
  for (int i = 0; i < t_d; ++i) {
    slots.push_back(static_cast<int>(data.uniform_int(ls.K)));
  }
  Rng nz(seed, trial, Stream::kNoise);
  return simulate_block(H, ls, slots, plan.t_t, QuantizerSpec(1, 2.0), noise,
                        nz);
}

}  // namespace

TEST_CASE("training plan sizes and schedule") {
  const LabelSet b2 = bpsk2();
  const TrainingPlan full = make_training_plan(b2, 3, TrainingMode::kFull);
  CHECK(full.t_t == 12);
  REQUIRE(static_cast<int>(full.trained.size()) == 12);
  for (int n = 0; n < 12; ++n) CHECK(full.trained[n] == n / 3);

  const LabelSet q2 = qpsk2();
  const TrainingPlan sub = make_training_plan(q2, 3, TrainingMode::kSubspace);
  CHECK(sub.t_t == 12);  // 16 * 3 / 4
  for (int n = 0; n < 12; ++n) CHECK(sub.trained[n] == n / 3);

  const TrainingPlan sub1 = make_training_plan(b2, 1, TrainingMode::kSubspace);
  CHECK(sub1.t_t == 2);
  CHECK(sub1.trained == std::vector<int>{0, 1});

  const LabelSet none = restrict_label_set(bpsk2(), {0, 1});
  if (none.condition == SymmetryCondition::kNone) {
    CHECK_THROWS(make_training_plan(none, 2, TrainingMode::kSubspace));
  }
  CHECK_THROWS(make_training_plan(b2, 0, TrainingMode::kFull));
}

TEST_CASE("centroid of identical samples is that sample") {
  const LabelSet ls = bpsk2();
  const TrainingPlan plan = make_training_plan(ls, 2, TrainingMode::kFull);
  BlockObservation obs;
  obs.t_t = plan.t_t;
  obs.t_d = 0;
  obs.transmitted = plan.trained;
  obs.y.resize(3, plan.t_t);
  Eigen::VectorXcd v(3);
  for (int k = 0; k < ls.K; ++k) {
    v << std::complex<double>(k + 1, -k), std::complex<double>(0, k),
        std::complex<double>(-1, 1);
    obs.y.col(2 * k) = v;
    obs.y.col(2 * k + 1) = v;
  }
  const RepresentativeSet reps = estimate_representatives(obs, plan, ls);
  REQUIRE(reps.K() == 4);
  for (int k = 0; k < 4; ++k) {
    v << std::complex<double>(k + 1, -k), std::complex<double>(0, k),
        std::complex<double>(-1, 1);
    CHECK((reps.centroids.col(k) - v).norm() < 1e-14);
    CHECK(reps.counts[k] == 2);
    REQUIRE(reps.sets[k].size() == 2);
  }
}

TEST_CASE("subspace fills cond1 partners with exact negations") {
  const LabelSet ls = bpsk2();
  const TrainingPlan plan = make_training_plan(ls, 4, TrainingMode::kSubspace);
  Rng ch(21, 0, Stream::kChannel);
  const Eigen::MatrixXcd H = draw_channel(8, 2, ch);
  const BlockObservation obs =
      make_block(H, ls, plan, 0, NoiseSpec::from_snr_db(5.0, 2), 21, 0);
  const RepresentativeSet reps = estimate_representatives(obs, plan, ls);
  for (int k = 0; k < ls.K / 2; ++k) {
    CHECK((reps.centroids.col(k + ls.K / 2) + reps.centroids.col(k)).norm() ==
          doctest::Approx(0.0));
    CHECK(reps.counts[k + ls.K / 2] == plan.l_t);
    CHECK(reps.counts[k] == plan.l_t);
  }
}

TEST_CASE("subspace fills cond2 partners with the rotation relations") {
  const LabelSet ls = qpsk2();
  const TrainingPlan plan = make_training_plan(ls, 2, TrainingMode::kSubspace);
  Rng ch(22, 0, Stream::kChannel);
  const Eigen::MatrixXcd H = draw_channel(4, 2, ch);
  const BlockObservation obs =
      make_block(H, ls, plan, 0, NoiseSpec::from_snr_db(0.0, 2), 22, 0);
  const RepresentativeSet reps = estimate_representatives(obs, plan, ls);
  const std::complex<double> j{0.0, 1.0};
  const int q = ls.K / 4;
  for (int k = 0; k < q; ++k) {
    const Eigen::VectorXcd base = reps.centroids.col(k);
    CHECK((reps.centroids.col(k + q) + base).norm() < 1e-12);
    CHECK((reps.centroids.col(k + 2 * q) - j * base).norm() < 1e-12);
    CHECK((reps.centroids.col(k + 3 * q) + j * base).norm() < 1e-12);
    for (int copy : {k + q, k + 2 * q, k + 3 * q}) {
      CHECK(reps.counts[copy] == plan.l_t);
    }
  }
}

TEST_CASE("centroid components never leave the output hull") {
  const LabelSet ls = qpsk2();
  const TrainingPlan plan = make_training_plan(ls, 3, TrainingMode::kFull);
  Rng ch(23, 0, Stream::kChannel), nz(23, 0, Stream::kNoise);
  const Eigen::MatrixXcd H = draw_channel(4, 2, ch);
  const QuantizerSpec q(2, 0.9);
  const BlockObservation obs = simulate_block(
      H, ls, plan.trained, plan.t_t, q, NoiseSpec::from_snr_db(0.0, 2), nz);
  const RepresentativeSet reps = estimate_representatives(obs, plan, ls);
  const double top = (q.levels() - 1) * q.step / 2;
  for (int k = 0; k < reps.K(); ++k) {
    for (int r = 0; r < 4; ++r) {
      CHECK(std::abs(reps.centroids(r, k).real()) <= top + 1e-12);
      CHECK(std::abs(reps.centroids(r, k).imag()) <= top + 1e-12);
    }
  }
}

TEST_CASE("exact one-bit representatives: limits and formula") {
  const LabelSet ls = bpsk2();
  Rng ch(24, 0, Stream::kChannel);
  const Eigen::MatrixXcd H = draw_channel(4, 2, ch);

  // rho -> infinity: sign of H x
  const RepresentativeSet hi =
      exact_representatives_1bit(H, ls, NoiseSpec::from_n0(1e-18, 2), 1);
  for (int k = 0; k < ls.K; ++k) {
    const Eigen::VectorXcd g = H * ls.label(k);
    for (int r = 0; r < 4; ++r) {
      CHECK(hi.centroids(r, k).real() ==
            doctest::Approx(g(r).real() > 0 ? 1.0 : -1.0).epsilon(1e-9));
      CHECK(hi.centroids(r, k).imag() ==
            doctest::Approx(g(r).imag() > 0 ? 1.0 : -1.0).epsilon(1e-9));
    }
  }

  // rho -> 0: everything collapses to zero
  const RepresentativeSet lo =
      exact_representatives_1bit(H, ls, NoiseSpec::from_n0(1e18, 2), 1);
  CHECK(lo.centroids.norm() < 1e-6);

  // zero receive row stays exactly zero
  Eigen::MatrixXcd H0 = H;
  H0.row(2).setZero();
  const RepresentativeSet mid =
      exact_representatives_1bit(H0, ls, NoiseSpec::from_n0(2.0, 2), 1);
  for (int k = 0; k < ls.K; ++k) {
    CHECK(std::abs(mid.centroids(2, k)) == doctest::Approx(0.0));
  }

  // formula check at finite snr: erf(Re g / sqrt(n0)) per part
  const double n0 = 2.0;
  const RepresentativeSet fin =
      exact_representatives_1bit(H, ls, NoiseSpec::from_n0(n0, 2), 1);
  for (int k = 0; k < ls.K; ++k) {
    const Eigen::VectorXcd g = H * ls.label(k);
    for (int r = 0; r < 4; ++r) {
      CHECK(fin.centroids(r, k).real() ==
            doctest::Approx(std::erf(g(r).real() / std::sqrt(n0))));
      CHECK(fin.centroids(r, k).imag() ==
            doctest::Approx(std::erf(g(r).imag() / std::sqrt(n0))));
    }
  }

  CHECK_THROWS(exact_representatives_1bit(H, ls, NoiseSpec::from_n0(1.0, 2), 2));
}

TEST_CASE("empirical centroids approach the exact ones as lt grows") {
  const LabelSet ls = bpsk2();
  Rng ch(25, 0, Stream::kChannel);
  const Eigen::MatrixXcd H = draw_channel(4, 2, ch);
  const NoiseSpec noise = NoiseSpec::from_snr_db(0.0, 2);
  const int lt = 4096;
  const TrainingPlan plan = make_training_plan(ls, lt, TrainingMode::kFull);
  const BlockObservation obs = make_block(H, ls, plan, 0, noise, 25, 0);
  const RepresentativeSet emp = estimate_representatives(obs, plan, ls);
  const RepresentativeSet exact = exact_representatives_1bit(H, ls, noise, 1);
  // each +-1 component has variance <= 1, so 3 standard errors is 3/sqrt(lt)
  const double tol = 3.0 / std::sqrt(static_cast<double>(lt));
  for (int k = 0; k < ls.K; ++k) {
    for (int r = 0; r < 4; ++r) {
      CHECK(std::abs(emp.centroids(r, k).real() -
                     exact.centroids(r, k).real()) < tol);
      CHECK(std::abs(emp.centroids(r, k).imag() -
                     exact.centroids(r, k).imag()) < tol);
    }
  }
}

TEST_CASE("subspace estimate is unbiased against full-space training") {
  const LabelSet ls = bpsk2();
  Rng ch(26, 0, Stream::kChannel);
  const Eigen::MatrixXcd H = draw_channel(4, 2, ch);
  const NoiseSpec noise = NoiseSpec::from_snr_db(0.0, 2);
  const TrainingPlan fplan = make_training_plan(ls, 2, TrainingMode::kFull);
  const TrainingPlan splan = make_training_plan(ls, 2, TrainingMode::kSubspace);
  const int reps_n = 4000;
  Eigen::MatrixXcd diff = Eigen::MatrixXcd::Zero(4, ls.K);
  for (int t = 0; t < reps_n; ++t) {
    const BlockObservation fo = make_block(H, ls, fplan, 0, noise, 26, 2 * t);
    const BlockObservation so =
        make_block(H, ls, splan, 0, noise, 26, 2 * t + 1);
    diff += estimate_representatives(fo, fplan, ls).centroids -
            estimate_representatives(so, splan, ls).centroids;
  }
  diff /= static_cast<double>(reps_n);
  // mean difference of two unbiased estimators: 0 within ~3 combined SEs
  const double tol = 3.0 * std::sqrt(2.0 / (2.0 * reps_n));
  for (int k = 0; k < ls.K; ++k) {
    for (int r = 0; r < 4; ++r) {
      CHECK(std::abs(diff(r, k).real()) < tol);
      CHECK(std::abs(diff(r, k).imag()) < tol);
    }
  }
}

TEST_CASE("estimate validates the observation against the plan") {
  const LabelSet ls = bpsk2();
  const TrainingPlan plan = make_training_plan(ls, 2, TrainingMode::kFull);
  Rng ch(27, 0, Stream::kChannel);
  const Eigen::MatrixXcd H = draw_channel(2, 2, ch);
  BlockObservation obs =
      make_block(H, ls, plan, 4, NoiseSpec::from_snr_db(0.0, 2), 27, 0);
  obs.t_t = plan.t_t - 1;  // disagree with the plan
  obs.t_d += 1;
  CHECK_THROWS(estimate_representatives(obs, plan, ls));
}
