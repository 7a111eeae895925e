#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "snngbp/population.hpp"
#include "snngbp/random.hpp"

using namespace snngbp;
using doctest::Approx;

// Pinned by direct evaluation of the +-3 sigma grid before the build; the
// N -> infinity limit is the truncated-normal value 0.97334.
static constexpr double kC100 = 0.975448963501;

namespace {

EncoderConfig small_cfg(int n) {
  EncoderConfig cfg;
  cfg.n_neurons = n;
  return cfg;
}

}  // namespace

TEST_CASE("encode places the documented grid and rates") {
  const RateCode code = encode({0.0, 1.0}, small_cfg(5));
  REQUIRE(code.locations.size() == 5);
  CHECK(code.locations[0] == Approx(-3.0));
  CHECK(code.locations[1] == Approx(-1.5));
  CHECK(code.locations[2] == Approx(0.0));
  CHECK(code.locations[3] == Approx(1.5));
  CHECK(code.locations[4] == Approx(3.0));
  CHECK(code.rates[0] == Approx(1.111).epsilon(1e-3));
  CHECK(code.rates[1] == Approx(32.465).epsilon(1e-3));
  CHECK(code.rates[2] == Approx(100.0));
  CHECK(code.rates[3] == Approx(32.465).epsilon(1e-3));
  CHECK(code.rates[4] == Approx(1.111).epsilon(1e-3));

  const RateCode shifted = encode({2.0, 1.0}, small_cfg(3));
  CHECK(shifted.locations[0] == Approx(-1.0));
  CHECK(shifted.locations[1] == Approx(2.0));
  CHECK(shifted.locations[2] == Approx(5.0));
  CHECK(shifted.rates[0] == Approx(1.111).epsilon(1e-3));
  CHECK(shifted.rates[1] == Approx(100.0));
}

TEST_CASE("encode center neuron fires at r_max for odd N") {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const GaussianMessage msg{rng.uniform(-20.0, 20.0), rng.uniform(0.01, 9.0)};
    const RateCode code = encode(msg, small_cfg(7));
    CHECK(code.rates[3] == Approx(100.0));
  }
}

TEST_CASE("encode rejects invalid messages and configs") {
  CHECK_THROWS_AS(encode({0.0, 0.0}, small_cfg(5)), InvalidMessageError);
  CHECK_THROWS_AS(encode({0.0, -2.0}, small_cfg(5)), InvalidMessageError);
  CHECK_THROWS_AS(encode({0.0, 1.0}, small_cfg(1)), ConfigError);
  EncoderConfig bad = small_cfg(5);
  bad.r_max_hz = 0.0;
  CHECK_THROWS_AS(encode({0.0, 1.0}, bad), ConfigError);
}

TEST_CASE("encode rates are symmetric about the center") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform(0.0, 99.0));
    const RateCode code =
        encode({rng.uniform(-5.0, 5.0), rng.uniform(0.1, 4.0)}, small_cfg(n));
    for (int i = 0; i < n; ++i) {
      CHECK(code.rates[i] == code.rates[n - 1 - i]);
    }
  }
}

TEST_CASE("decode recovers the mean exactly and the variance up to c_N") {
  const RateCode five = encode({0.0, 1.0}, small_cfg(5));
  const GaussianMessage round = decode(five);
  CHECK(round.mean == Approx(0.0).epsilon(1e-12));
  CHECK(round.variance == Approx(0.9937).epsilon(1e-3));

  RateCode two;
  two.locations = {0.0, 1.0};
  two.rates = {50.0, 50.0};
  const GaussianMessage pair = decode(two);
  CHECK(pair.mean == Approx(0.5));
  CHECK(pair.variance == Approx(0.25));

  RateCode uniform;
  uniform.locations = {1.0, 2.0, 3.0, 4.0, 5.0};
  uniform.rates = {7.0, 7.0, 7.0, 7.0, 7.0};
  CHECK(decode(uniform).mean == Approx(3.0));
}

TEST_CASE("decode rejects an all-zero code") {
  RateCode code;
  code.locations = {0.0, 1.0};
  code.rates = {0.0, 0.0};
  CHECK_THROWS_AS(decode(code), InvalidMessageError);
}

TEST_CASE("decode(encode) mean is exact and the variance ratio is constant") {
  EncoderConfig cfg = small_cfg(100);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const GaussianMessage msg{rng.uniform(-5.0, 5.0), rng.uniform(0.3, 3.0)};
    const GaussianMessage decoded = decode(encode(msg, cfg));
    CHECK(std::abs(decoded.mean - msg.mean) <= 1e-9 * std::max(1.0, std::abs(msg.mean)));
    CHECK(decoded.variance / msg.variance == Approx(kC100).epsilon(1e-9));
  }
}

TEST_CASE("truncation bias matches the pinned constant and its limit") {
  CHECK(truncation_bias(100) == Approx(kC100).epsilon(1e-10));
  CHECK(truncation_bias(100000) == Approx(0.97334).epsilon(1e-4));
  const GaussianMessage corrected = decode(encode({1.0, 2.0}, small_cfg(100)), true);
  CHECK(corrected.variance == Approx(2.0).epsilon(1e-9));
}

TEST_CASE("deterministic spike realization round-trips the rounded rates") {
  EncoderConfig cfg = small_cfg(5);
  RateCode code;
  code.locations = {0.0, 1.0, 2.0, 3.0, 4.0};
  code.rates = {100.0, 0.0, 10.0, 32.4, 99.7};
  const SpikeTrain train = rates_to_spikes(code, cfg);
  REQUIRE(train.spikes.size() == 5);
  CHECK(train.spikes[0].size() == 100);
  CHECK(train.spikes[0][0] == Approx(0.005));
  CHECK(train.spikes[0][1] - train.spikes[0][0] == Approx(0.010));
  CHECK(train.spikes[1].empty());
  CHECK(train.spikes[2].size() == 10);
  CHECK(train.spikes[3].size() == 32);
  CHECK(train.spikes[4].size() == 100);

  const std::vector<double> rates = spikes_to_rates(train);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    CHECK(rates[i] == Approx(std::round(code.rates[i] * 1.0) / 1.0));
  }
}

TEST_CASE("spikes_to_rates uses the window length") {
  SpikeTrain train;
  train.window_s = 0.5;
  train.spikes = {{0.1, 0.2, 0.3, 0.31, 0.4}, {}};
  const std::vector<double> rates = spikes_to_rates(train);
  CHECK(rates[0] == Approx(10.0));
  CHECK(rates[1] == Approx(0.0));
}

TEST_CASE("poisson realization is seeded and within the 3-sigma count band") {
  EncoderConfig cfg = small_cfg(2);
  cfg.scheme = SpikeScheme::poisson;
  cfg.seed = 42;
  RateCode code;
  code.locations = {0.0, 1.0};
  code.rates = {100.0, 100.0};
  const SpikeTrain a = rates_to_spikes(code, cfg);
  const SpikeTrain b = rates_to_spikes(code, cfg);
  CHECK(a.spikes[0].size() >= 70);
  CHECK(a.spikes[0].size() <= 130);
  REQUIRE(a.spikes[0].size() == b.spikes[0].size());
  for (std::size_t k = 0; k < a.spikes[0].size(); ++k) {
    CHECK(a.spikes[0][k] == b.spikes[0][k]);
  }
  cfg.seed = 43;
  const SpikeTrain c = rates_to_spikes(code, cfg);
  CHECK(c.spikes[0] != a.spikes[0]);
}

TEST_CASE("complement flips rates against r_max") {
  const RateCode code = encode({0.0, 1.0}, small_cfg(5));
  const RateCode flipped = complement(code);
  CHECK(flipped.rates[0] == Approx(98.889).epsilon(1e-3));
  CHECK(flipped.rates[1] == Approx(67.535).epsilon(1e-3));
  CHECK(flipped.rates[2] == Approx(0.0));
  const RateCode back = complement(flipped);
  for (std::size_t i = 0; i < code.rates.size(); ++i) {
    CHECK(back.rates[i] == Approx(code.rates[i]));
  }
}

TEST_CASE("shift_locations scales the grid and keeps rates attached") {
  const RateCode code = encode({0.0, 1.0}, small_cfg(5));
  const RateCode doubled = shift_locations(code, 2.0);
  CHECK(doubled.locations.front() == Approx(-6.0));
  CHECK(doubled.locations.back() == Approx(6.0));
  for (std::size_t i = 0; i < code.rates.size(); ++i) {
    CHECK(doubled.rates[i] == code.rates[i]);
  }

  const RateCode same = shift_locations(code, 1.0);
  CHECK(same.locations == code.locations);

  const RateCode mirrored = shift_locations(encode({2.0, 1.0}, small_cfg(3)), -1.0);
  CHECK(mirrored.locations[0] == Approx(-5.0));
  CHECK(mirrored.locations[2] == Approx(1.0));
  CHECK(mirrored.rates[0] == Approx(1.111).epsilon(1e-3));  // re-sorted ascending
  CHECK(mirrored.rates[1] == Approx(100.0));

  CHECK_THROWS_AS(shift_locations(code, 0.0), SingularScaleError);
}

TEST_CASE("shift_locations composes to the identity and scales moments") {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const RateCode code =
        encode({rng.uniform(-5.0, 5.0), rng.uniform(0.3, 3.0)}, small_cfg(33));
    const double a = rng.uniform(0.2, 4.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    const RateCode round = shift_locations(shift_locations(code, a), 1.0 / a);
    for (std::size_t j = 0; j < code.locations.size(); ++j) {
      CHECK(round.locations[j] == Approx(code.locations[j]).epsilon(1e-12));
    }
    const GaussianMessage base = decode(code);
    const GaussianMessage scaled = decode(shift_locations(code, a));
    CHECK(scaled.mean == Approx(a * base.mean).epsilon(1e-12));
    CHECK(scaled.variance == Approx(a * a * base.variance).epsilon(1e-12));
  }
}

TEST_CASE("rate code CSV round-trips") {
  const RateCode code = encode({1.5, 0.7}, small_cfg(16));
  std::stringstream buffer;
  write_rate_code_csv(buffer, code);
  const RateCode read = read_rate_code_csv(buffer, code.r_max_hz, code.window_s);
  REQUIRE(read.locations.size() == code.locations.size());
  for (std::size_t i = 0; i < code.locations.size(); ++i) {
    CHECK(read.locations[i] == code.locations[i]);
    CHECK(read.rates[i] == code.rates[i]);
  }
}

TEST_CASE("rate code CSV rejects malformed input") {
  std::stringstream missing_header("0,1.0,2.0\n");
  CHECK_THROWS_AS(read_rate_code_csv(missing_header, 100.0, 1.0), FileFormatError);
  std::stringstream bad_field("index,location,rate\n0,oops,2.0\n1,1.0,3.0\n");
  CHECK_THROWS_AS(read_rate_code_csv(bad_field, 100.0, 1.0), FileFormatError);
  std::stringstream too_short("index,location,rate\n0,1.0,2.0\n");
  CHECK_THROWS_AS(read_rate_code_csv(too_short, 100.0, 1.0), FileFormatError);
}

TEST_CASE("spike train CSV lists neuron and time") {
  SpikeTrain train;
  train.window_s = 1.0;
  train.spikes = {{0.005, 0.015}, {}, {0.5}};
  std::stringstream buffer;
  write_spike_train_csv(buffer, train);
  std::string line;
  std::getline(buffer, line);
  CHECK(line == "neuron,spike_time_s");
  std::getline(buffer, line);
  CHECK(line == "0,0.005000000");
  std::getline(buffer, line);
  CHECK(line == "0,0.015000000");
  std::getline(buffer, line);
  CHECK(line == "2,0.500000000");
}
