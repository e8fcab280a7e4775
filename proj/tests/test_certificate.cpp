// Copyright 2026 The Flotilla Authors
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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "flotilla/certificate.hpp"
#include "flotilla/error.hpp"
#include "test_util.hpp"

namespace flotilla {
namespace {

std::vector<WaveformCommand> Uniform(std::size_t n, double a,
                                     Centerline c = Centerline::kForward) {
  return std::vector<WaveformCommand>(n, WaveformCommand{c, a, kDefaultOmega});
}

// Rear module (0,0), front module (0,1), side module (1,1).
LatticeConfiguration Column() {
  return LatticeConfiguration::Build({{0, 0}, {0, 1}, {1, 1}});
}

TEST_SUITE("certificate") {
  TEST_CASE("uniform full amplitude is certified") {
    const auto cfg =
        LatticeConfiguration::Build({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    const auto cert = CertifyNoUndock(cfg, Uniform(4, 2.5));
    CHECK(cert.ok);
    CHECK_FALSE(cert.collision);
    CHECK(cert.violations.empty());
    CHECK(cert.min_clearance > -kInsideTolerance);
    CHECK(CertifyNoUndock(cfg, Uniform(4, 2.5, Centerline::kReverse)).ok);
  }

  TEST_CASE("mismatched centerlines in a column violate the assumptions") {
    auto cmds = Uniform(3, 1.0);
    cmds[0].centerline = Centerline::kReverse;
    const auto cert = CertifyNoUndock(Column(), cmds);
    CHECK_FALSE(cert.ok);
    CHECK_FALSE(cert.violations.empty());
    // Side-by-side neighbors may differ: columns get different forces.
    cmds = Uniform(3, 1.0);
    cmds[2].centerline = Centerline::kReverse;
    CHECK(CheckPreconditions(Column(), cmds, kDefaultGammaLimit).empty());
  }

  TEST_CASE("mismatched frequency violates phase lock") {
    const auto cfg = LatticeConfiguration::Build(testing::Row(2));
    auto cmds = Uniform(2, 1.0);
    cmds[1].omega *= 1.01;
    CHECK_FALSE(CheckPreconditions(cfg, cmds, kDefaultGammaLimit).empty());
    cmds = Uniform(2, std::nan(""));
    CHECK_FALSE(CheckPreconditions(cfg, cmds, kDefaultGammaLimit).empty());
    CHECK_FALSE(CheckPreconditions(cfg, Uniform(3, 1.0), 1.9).empty());
  }

  TEST_CASE("wake ratio above the limit is a violation") {
    auto cmds = Uniform(3, 1.0);
    cmds[0].amplitude = 2.0;  // rear at twice the front amplitude
    const auto cert = CertifyNoUndock(Column(), cmds);
    CHECK_FALSE(cert.ok);
    CHECK_FALSE(cert.violations.empty());
    // At exactly the limit the assumption holds.
    cmds[0].amplitude = 1.9;
    CHECK(CheckPreconditions(Column(), cmds, 1.9).empty());
  }

  TEST_CASE("front 0.9 rear 2.7 collides") {
    auto cmds = Uniform(3, 0.9);
    cmds[0].amplitude = 2.7;
    const auto cert = CertifyNoUndock(Column(), cmds);
    CHECK_FALSE(cert.ok);
    CHECK(cert.collision);
    CHECK(cert.min_clearance < 0.0);
    REQUIRE(cert.worst_a.has_value());
    CHECK(cert.worst_vertical);
    CHECK(*cert.worst_a == 1);
    CHECK(*cert.worst_b == 0);
  }

  TEST_CASE("parallel and serial certificates agree") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> amp(0.0, 2.5);
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 2 + trial % 6;
      const auto cfg =
          LatticeConfiguration::Build(testing::RandomCells(rng, n, 3, 3));
      auto cmds = Uniform(cfg.size(), 0.0);
      const auto c = trial % 2 ? Centerline::kReverse : Centerline::kForward;
      for (auto& m : cmds) {
        m.amplitude = amp(rng);
        m.centerline = c;
      }
      const auto par = CertifyNoUndock(cfg, cmds);
      const auto ser = CertifyNoUndockSerial(cfg, cmds);
      CHECK(par.ok == ser.ok);
      CHECK(par.collision == ser.collision);
      CHECK(par.violations == ser.violations);
      CHECK(par.min_clearance == ser.min_clearance);
      CHECK(par.worst_a == ser.worst_a);
      CHECK(par.worst_time == ser.worst_time);
    }
  }

  TEST_CASE("too few samples is rejected") {
    CertificateOptions opt;
    opt.samples_per_cycle = 719;
    CHECK_THROWS_AS(opt.Validate(), ParameterError);
    CHECK_THROWS_AS(
        CertifyNoUndock(LatticeConfiguration::Build(testing::Row(2)),
                        Uniform(2, 1.0), opt),
        ParameterError);
  }

  TEST_CASE("clearance is Lipschitz in amplitude") {
    auto cmds = Uniform(3, 1.0);
    double prev = 0.0;
    for (int k = 0; k <= 60; ++k) {
      cmds[0].amplitude = 1.0 + 0.03 * k;
      const double c = CertifyNoUndock(Column(), cmds).min_clearance;
      if (k > 0) CHECK(std::abs(c - prev) <= 0.5 * 0.03);
      prev = c;
    }
  }

  TEST_CASE("log summary") {
    CertificateLog log;
    Certificate good;
    good.min_clearance = 0.004;
    Certificate bad;
    bad.ok = false;
    bad.min_clearance = -0.002;
    bad.violations = {"x"};
    log.Add(good, 0);
    log.Add(bad, 1);
    log.Add(good, 2);
    CHECK(log.cycles == 3);
    CHECK(log.failed_cycles == 1);
    CHECK_FALSE(log.ok());
    CHECK(log.worst_cycle == 1);
    CHECK(log.min_clearance == doctest::Approx(-0.002));
    const auto j = log.ToJson(Column(), CertificateOptions{});
    CHECK(j.contains("min_clearance_m"));
  }
}

}  // namespace
}  // namespace flotilla
