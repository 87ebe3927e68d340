#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "wormwatch/autoencoder.hpp"
#include "wormwatch/error.hpp"

using namespace wormwatch;
using namespace wormwatch::autoencoder;
using features::WindowSample;

namespace {

AutoencoderModel tiny_model() {
  // dims (2, 1, 2)
  AutoencoderModel m;
  m.k = 1;
  m.w1 = Eigen::MatrixXd{{0.5, -0.5}};
  m.b1 = Eigen::VectorXd::Zero(1);
  m.w2 = Eigen::MatrixXd{{1.0}, {1.0}};
  m.b2 = Eigen::VectorXd::Zero(2);
  return m;
}

std::vector<WindowSample> random_samples(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<WindowSample> xs(n);
  for (auto& x : xs) {
    x.values.resize(dim);
    for (auto& v : x.values) v = u(rng);
  }
  return xs;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Errc load_error(const std::string& text) {
  try {
    load_model(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected load_model to fail");
  return Errc::Io;
}

}  // namespace

TEST_CASE("init_model is deterministic per seed") {
  auto a = init_model(100, 100, 7);
  auto b = init_model(100, 100, 7);
  auto c = init_model(100, 100, 8);
  CHECK(flatten(a) == flatten(b));
  CHECK(flatten(a) != flatten(c));
  CHECK(a.parameter_count() == 20200);
  CHECK(a.b1.isZero());
  CHECK(a.b2.isZero());
  CHECK(a.k == 50);

  // sample standard deviation of w1 entries is close to 1/sqrt(fan_in)
  auto big = init_model(400, 300, 3);
  const double mean = big.w1.mean();
  const double sd = std::sqrt((big.w1.array() - mean).square().mean());
  CHECK(sd == doctest::Approx(1.0 / std::sqrt(400.0)).epsilon(0.02));
  const double sd2 = std::sqrt((big.w2.array() - big.w2.mean()).square().mean());
  CHECK(sd2 == doctest::Approx(1.0 / std::sqrt(300.0)).epsilon(0.02));
}

TEST_CASE("forward pass examples") {
  auto m = tiny_model();
  std::vector<double> ones{1.0, 1.0};
  auto y = forward(m, ones);
  CHECK(y(0) == 0.0);
  CHECK(y(1) == 0.0);

  std::vector<double> e0{1.0, 0.0};
  y = forward(m, e0);
  // tanh(0.5) evaluated by hand: (e - 1)/(e + 1) with e = exp(1)
  const double expected = (std::exp(1.0) - 1.0) / (std::exp(1.0) + 1.0);
  CHECK(y(0) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(y(1) == doctest::Approx(0.4621172).epsilon(1e-7));

  AutoencoderModel zero = init_model(6, 4, 1);
  zero.w1.setZero();
  zero.w2.setZero();
  std::vector<double> any{3, -1, 2, 7, 0.5, 9};
  CHECK(forward(zero, any).isZero());

  std::vector<double> wrong(3, 0.0);
  CHECK_THROWS_AS(forward(m, wrong), Error);
}

TEST_CASE("forward agrees with a plain-loop evaluation") {
  auto m = init_model(10, 7, 11);
  m.b1.setRandom();
  m.b2.setRandom();
  auto theta = to_std(flatten(m));
  for (const auto& x : random_samples(20, 10, 4)) {
    auto got = forward(m, x.values);
    auto want = testing::loop_forward(theta, 10, 7, x.values);
    for (std::size_t i = 0; i < 10; ++i)
      CHECK(got(static_cast<Eigen::Index>(i)) == doctest::Approx(want[i]).epsilon(1e-13));
  }
}

TEST_CASE("sse_loss examples") {
  auto m = tiny_model();
  CHECK(sse_loss(m, std::vector<WindowSample>{{0, {0.0, 0.0}}}) == 0.0);

  AutoencoderModel bias_only = tiny_model();
  bias_only.w2.setZero();
  bias_only.b2 = Eigen::VectorXd::Ones(2);
  std::vector<WindowSample> single{{0, {0.0, 0.0}}};
  CHECK(sse_loss(bias_only, single) == 1.0);

  auto xs = random_samples(1, 2, 3);
  auto doubled = xs;
  doubled.push_back(xs[0]);
  CHECK(sse_loss(m, doubled) == doctest::Approx(2.0 * sse_loss(m, xs)).epsilon(1e-15));

  CHECK_THROWS_AS(sse_loss(m, std::vector<WindowSample>{}), Error);
  CHECK_THROWS_AS(gradient(m, std::vector<WindowSample>{}), Error);
}

TEST_CASE("sse_loss is non-negative and zero only for exact reconstruction") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto m = init_model(8, 5, seed);
    CHECK(sse_loss(m, random_samples(6, 8, seed + 100)) > 0.0);
  }
  // identity through a linear-regime hidden layer is not exact; an all-zero model on zero data is
  auto zero = init_model(4, 3, 1);
  zero.w1.setZero();
  zero.w2.setZero();
  CHECK(sse_loss(zero, std::vector<WindowSample>{{0, {0, 0, 0, 0}}, {1, {0, 0, 0, 0}}}) == 0.0);
}

TEST_CASE("gradient of an all-zero model at zero data is zero") {
  auto zero = init_model(4, 3, 1);
  zero.w1.setZero();
  zero.w2.setZero();
  CHECK(gradient(zero, std::vector<WindowSample>{{0, {0, 0, 0, 0}}}).isZero());
}

TEST_CASE("gradient matches hand differentiation for dims (1,1,1)") {
  AutoencoderModel m;
  m.w1 = Eigen::MatrixXd{{0.3}};
  m.b1 = Eigen::VectorXd::Constant(1, -0.2);
  m.w2 = Eigen::MatrixXd{{1.5}};
  m.b2 = Eigen::VectorXd::Constant(1, 0.1);
  const double x = 0.8;
  const double h = std::tanh(0.3 * x - 0.2);
  const double r = 1.5 * h + 0.1 - x;  // dE/dy
  const double dpre = r * 1.5 * (1.0 - h * h);

  auto g = gradient(m, std::vector<WindowSample>{{0, {x}}});
  REQUIRE(g.size() == 4);
  CHECK(g(0) == doctest::Approx(dpre * x).epsilon(1e-14));  // w1
  CHECK(g(1) == doctest::Approx(dpre).epsilon(1e-14));      // b1
  CHECK(g(2) == doctest::Approx(r * h).epsilon(1e-14));     // w2
  CHECK(g(3) == doctest::Approx(r).epsilon(1e-14));         // b2
}

TEST_CASE("gradient matches central finite differences on random models") {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto m = init_model(10, 7, seed);
    std::mt19937_64 rng(seed * 31);
    std::normal_distribution<double> n(0.0, 0.1);
    for (Eigen::Index i = 0; i < m.b1.size(); ++i) m.b1(i) = n(rng);
    for (Eigen::Index i = 0; i < m.b2.size(); ++i) m.b2(i) = n(rng);
    auto xs = random_samples(5, 10, seed + 1000);
    std::vector<std::vector<double>> raw;
    for (const auto& x : xs) raw.push_back(x.values);

    auto analytic = to_std(gradient(m, xs));
    auto numeric = testing::central_differences(
        [&](const std::vector<double>& th) { return testing::loop_sse(th, 10, 7, raw); },
        to_std(flatten(m)), 1e-5);
    worst = std::max(worst, testing::max_relative_error(analytic, numeric));
  }
  MESSAGE("max relative error " << worst);
  CHECK(worst < 1e-5);
}

TEST_CASE("flatten and unflatten are inverse") {
  auto m = init_model(6, 4, 2);
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(m.parameter_count()), -1, 1);
  unflatten(m, v);
  CHECK(flatten(m) == v);
  // w1 row-major comes first
  CHECK(m.w1(0, 1) == v(1));
  CHECK(m.w1(1, 0) == v(6));
  CHECK(m.b1(0) == v(24));
  Eigen::VectorXd short_v = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(unflatten(m, short_v), Error);
}

TEST_CASE("model persistence round-trip") {
  auto m = init_model(20, 9, 5);
  m.b1.setRandom();
  m.b2.setRandom();
  m.norm = {1.0, 1234.5, 0.0, 1.0 / 3.0};
  auto text = save_model(m);
  auto back = load_model(text);
  CHECK(flatten(back) == flatten(m));
  CHECK(back.norm == m.norm);
  CHECK(back.k == 10);
  CHECK(save_model(back) == text);

  auto xs = random_samples(50, 20, 9);
  for (const auto& x : xs) CHECK((forward(back, x.values) - forward(m, x.values)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("model loading rejects corrupt or foreign documents") {
  auto text = save_model(init_model(4, 2, 1));
  CHECK(load_error("not json") == Errc::BadFormat);
  CHECK(load_error(text.substr(0, text.size() / 2)) == Errc::BadFormat);
  CHECK(load_error("[]") == Errc::BadFormat);

  auto replace = [&](const std::string& from, const std::string& to) {
    auto copy = text;
    auto pos = copy.find(from);
    REQUIRE(pos != std::string::npos);
    copy.replace(pos, from.size(), to);
    return copy;
  };
  CHECK(load_error(replace("\"format_version\": 1", "\"format_version\": 2")) == Errc::VersionMismatch);
  CHECK(load_error(replace("\"layout_version\": 1", "\"layout_version\": 7")) == Errc::VersionMismatch);
  CHECK(load_error(replace("\"hidden_dim\": 2", "\"hidden_dim\": 3")) == Errc::BadFormat);
  CHECK(load_error(replace("\"b2\"", "\"bb\"")) == Errc::BadFormat);
}
