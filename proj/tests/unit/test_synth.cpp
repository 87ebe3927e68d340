#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "wormwatch/error.hpp"
#include "wormwatch/synth.hpp"
#include "wormwatch/time_util.hpp"

using namespace wormwatch;
using namespace wormwatch::synth;
using timeseries::MinuteSeries;

namespace {

EpochSeconds at(std::int64_t minutes) { return kDefaultStart + minutes * kMinute; }

double sum_a(const MinuteSeries& s) {
  double total = 0.0;
  for (const auto& b : s) total += static_cast<double>(b.announcements);
  return total;
}

}  // namespace

TEST_CASE("gen_baseline is deterministic, gapless and aligned") {
  auto a = gen_baseline(500, 50.0, 20.0, 0.3, 7);
  auto b = gen_baseline(500, 50.0, 20.0, 0.3, 7);
  auto c = gen_baseline(500, 50.0, 20.0, 0.3, 8);
  CHECK(a == b);
  CHECK(!(a == c));
  REQUIRE(a.size() == 500);
  CHECK(a.start_minute() == kDefaultStart);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].minute_start_s == at(static_cast<std::int64_t>(i)));

  auto shifted = gen_baseline(10, 50.0, 20.0, 0.0, 1, at(30));
  CHECK(shifted.start_minute() == at(30));
}

TEST_CASE("gen_baseline sample mean") {
  auto s = gen_baseline(10000, 1000.0, 400.0, 0.0, 42);
  CHECK(sum_a(s) / 10000.0 == doctest::Approx(1000.0).epsilon(0.05));
  double w = 0.0;
  for (const auto& b : s) w += static_cast<double>(b.withdrawals);
  CHECK(w / 10000.0 == doctest::Approx(400.0).epsilon(0.05));
}

TEST_CASE("gen_baseline hourly means trace the diurnal sine") {
  constexpr double mean = 1000.0, amp = 0.5;
  auto s = gen_baseline(14 * 1440, mean, 400.0, amp, 9);
  std::vector<double> sums(24, 0.0), expected(24, 0.0);
  std::vector<int> counts(24, 0);
  for (const auto& b : s) {
    const auto minute_of_day = (b.minute_start_s / kMinute) % 1440;
    const auto hour = static_cast<std::size_t>(minute_of_day / 60);
    sums[hour] += static_cast<double>(b.announcements);
    expected[hour] += mean * (1.0 + amp * std::sin(2.0 * std::numbers::pi * static_cast<double>(minute_of_day) / 1440.0));
    ++counts[hour];
  }
  for (std::size_t h = 0; h < 24; ++h) {
    // 840 Poisson draws per hour bin; 4 sigma of the bin mean.
    const double exp_mean = expected[h] / counts[h];
    const double sigma = std::sqrt(exp_mean / counts[h]);
    CAPTURE(h);
    CHECK(std::abs(sums[h] / counts[h] - exp_mean) < 4.0 * sigma);
  }
}

TEST_CASE("gen_baseline parameter validation") {
  CHECK_THROWS_AS(gen_baseline(0, 1.0, 1.0, 0.0, 1), Error);
  CHECK_THROWS_AS(gen_baseline(10, 0.0, 1.0, 0.0, 1), Error);
  CHECK_THROWS_AS(gen_baseline(10, 1.0, -1.0, 0.0, 1), Error);
  CHECK_THROWS_AS(gen_baseline(10, 1.0, 1.0, 1.0, 1), Error);
  CHECK_THROWS_AS(gen_baseline(10, 1.0, 1.0, -0.1, 1), Error);
  CHECK_THROWS_AS(gen_baseline(10, 1.0, 1.0, 0.0, 1, kDefaultStart + 5), Error);
}

TEST_CASE("surge multipliers") {
  SurgeSpec step{at(10), 5, Shape::Step, 3.0, Channels::Both};
  CHECK(surge_multiplier(step, at(9)) == 1.0);
  CHECK(surge_multiplier(step, at(10)) == 3.0);
  CHECK(surge_multiplier(step, at(14)) == 3.0);
  CHECK(surge_multiplier(step, at(15)) == 1.0);

  SurgeSpec ramp{at(0), 120, Shape::Ramp, 10.0, Channels::Both};
  CHECK(surge_multiplier(ramp, at(0)) == 1.0);
  CHECK(surge_multiplier(ramp, at(60)) == doctest::Approx(5.5));
  CHECK(surge_multiplier(ramp, at(119)) == doctest::Approx(1.0 + 9.0 * 119.0 / 120.0));
  CHECK(surge_multiplier(ramp, at(120)) == 1.0);

  SurgeSpec spike{at(3), 10, Shape::Spike, 10.0, Channels::Both};
  CHECK(surge_multiplier(spike, at(3)) == 10.0);
  CHECK(surge_multiplier(spike, at(4)) == 1.0);
}

TEST_CASE("inject_surge examples") {
  auto base = gen_baseline(300, 100.0, 40.0, 0.2, 3);

  CHECK(inject_surge(base, {at(50), 60, Shape::Step, 1.0, Channels::Both}) == base);

  auto spiked = inject_surge(base, {at(100), 30, Shape::Spike, 10.0, Channels::Both});
  REQUIRE(spiked.size() == base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CAPTURE(i);
    CHECK(spiked[i].minute_start_s == base[i].minute_start_s);
    if (i == 100) {
      CHECK(spiked[i].announcements == 10 * base[i].announcements);
      CHECK(spiked[i].withdrawals == 10 * base[i].withdrawals);
    } else {
      CHECK(spiked[i] == base[i]);
    }
  }

  auto ramped = inject_surge(base, {at(100), 120, Shape::Ramp, 10.0, Channels::Announcements});
  CHECK(static_cast<double>(ramped[160].announcements) ==
        doctest::Approx(5.5 * static_cast<double>(base[160].announcements)).epsilon(0.01));
  CHECK(ramped[160].withdrawals == base[160].withdrawals);
  CHECK(ramped[99] == base[99]);
  CHECK(ramped[220] == base[220]);

  auto w_only = inject_surge(base, {at(0), 10, Shape::Step, 2.0, Channels::Withdrawals});
  CHECK(w_only[5].announcements == base[5].announcements);
  CHECK(w_only[5].withdrawals == 2 * base[5].withdrawals);

  auto halved = inject_surge(base, {at(0), 1, Shape::Step, 0.5, Channels::Both});
  CHECK(halved[0].announcements == static_cast<std::uint64_t>(std::llround(0.5 * static_cast<double>(base[0].announcements))));
}

TEST_CASE("inject_surge errors") {
  auto base = gen_baseline(100, 10.0, 10.0, 0.0, 1);
  auto code_of = [&](const SurgeSpec& s) {
    try {
      inject_surge(base, s);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Io;
  };
  CHECK(code_of({at(95), 10, Shape::Step, 2.0, Channels::Both}) == Errc::OutOfRange);
  CHECK(code_of({at(-1), 5, Shape::Step, 2.0, Channels::Both}) == Errc::OutOfRange);
  CHECK(code_of({at(10) + 1, 5, Shape::Step, 2.0, Channels::Both}) == Errc::OutOfRange);
  CHECK(code_of({at(10), 0, Shape::Step, 2.0, Channels::Both}) == Errc::BadParams);
  CHECK(code_of({at(10), 5, Shape::Step, 0.0, Channels::Both}) == Errc::BadParams);
  CHECK_NOTHROW(inject_surge(base, {at(90), 10, Shape::Step, 2.0, Channels::Both}));
}

TEST_CASE("step surge total matches the expected excess within 3 sigma") {
  constexpr double mean = 1000.0, m = 10.0;
  constexpr std::int64_t d = 60;
  auto base = gen_baseline(1440, mean, 400.0, 0.0, 77);
  auto surged = inject_surge(base, {at(600), d, Shape::Step, m, Channels::Announcements});
  const double expected = sum_a(base) + (m - 1.0) * mean * static_cast<double>(d);
  const double sigma = (m - 1.0) * std::sqrt(mean * static_cast<double>(d));
  CHECK(std::abs(sum_a(surged) - expected) < 3.0 * sigma);
}

TEST_CASE("parse_surge") {
  auto s = parse_surge("2001-06-09T12:00:00Z,60,step,10,both");
  CHECK(s.start_minute == *parse_iso_minute("2001-06-09T12:00:00Z"));
  CHECK(s.duration_minutes == 60);
  CHECK(s.shape == Shape::Step);
  CHECK(s.magnitude == 10.0);
  CHECK(s.channels == Channels::Both);

  auto r = parse_surge("2001-06-09T12:00:00Z,120,ramp,2.5,withdrawals");
  CHECK(r.shape == Shape::Ramp);
  CHECK(r.magnitude == 2.5);
  CHECK(r.channels == Channels::Withdrawals);
  CHECK(parse_surge("2001-06-09T12:00:00Z,1,spike,3").channels == Channels::Both);

  for (const char* bad : {"", "2001-06-09T12:00:00Z,60,step", "2001-06-09T12:00:30Z,60,step,10",
                          "2001-06-09T12:00:00Z,0,step,10", "2001-06-09T12:00:00Z,60,wave,10",
                          "2001-06-09T12:00:00Z,60,step,-1", "2001-06-09T12:00:00Z,6x,step,10",
                          "2001-06-09T12:00:00Z,60,step,10,both,extra", "2001-06-09T12:00:00Z,60,step,10,all"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_surge(bad), Error);
  }
}

TEST_CASE("scenario JSON") {
  std::istringstream in(R"({
    "minutes": 2000, "mean_a": 50, "mean_w": 20, "diurnal_amp": 0.1, "seed": 5,
    "start": "2001-06-02T00:00:00Z",
    "surges": [{"start": "2001-06-02T10:00:00Z", "duration_minutes": 30, "shape": "step",
                "magnitude": 4, "channels": "announcements"}]
  })");
  auto sc = read_scenario(in);
  CHECK(sc.minutes == 2000);
  CHECK(sc.mean_a == 50.0);
  CHECK(sc.seed == 5);
  REQUIRE(sc.surges.size() == 1);
  CHECK(sc.surges[0].channels == Channels::Announcements);

  auto series = generate(sc);
  auto expected = inject_surge(gen_baseline(2000, 50.0, 20.0, 0.1, 5), sc.surges[0]);
  CHECK(series == expected);

  std::istringstream defaults("{}");
  auto d = read_scenario(defaults);
  CHECK(d.minutes == Scenario{}.minutes);
  CHECK(d.surges.empty());

  for (const char* bad : {"[]", "{\"minutes\": \"x\"}", "nope",
                          "{\"surges\": [{\"start\": \"2001-06-02T10:00:00Z\"}]}"}) {
    std::istringstream b(bad);
    CAPTURE(bad);
    CHECK_THROWS_AS(read_scenario(b), Error);
  }

  Scenario outside;
  outside.minutes = 10;
  outside.surges.push_back({at(20), 5, Shape::Step, 2.0, Channels::Both});
  CHECK_THROWS_AS(generate(outside), Error);
}
