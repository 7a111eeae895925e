#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "snngbp/plasticity.hpp"
#include "snngbp/random.hpp"

using namespace snngbp;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

TrainingConfig quick_training(int samples, std::uint64_t seed) {
  TrainingConfig cfg;
  cfg.n_samples = samples;
  cfg.seed = seed;
  cfg.n_neurons = 20;
  return cfg;
}

EqualityNodeSetup quick_setup() {
  EqualityNodeSetup setup;
  setup.encoder.n_neurons = 20;
  setup.encoder.window_s = 0.25;
  return setup;
}

}  // namespace

TEST_CASE("stdp_delta matches the frozen point values") {
  const StdpParams p;
  CHECK(stdp_delta(0.020, p) == Approx(0.0920).epsilon(1e-3));
  CHECK(stdp_delta(-0.020, p) == Approx(-0.0460).epsilon(1e-3));
  CHECK(stdp_delta(0.0, p) == 0.0);
  CHECK(stdp_delta(10.0, p) == Approx(0.0).epsilon(1e-12));
  CHECK(stdp_delta(-10.0, p) == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("stdp_delta sign and monotone decay") {
  const StdpParams p;
  double previous_pos = 1e9, previous_neg = 1e9;
  for (double dt = 0.001; dt < 0.2; dt += 0.003) {
    const double plus = stdp_delta(dt, p);
    const double minus = stdp_delta(-dt, p);
    CHECK(plus > 0.0);
    CHECK(minus < 0.0);
    CHECK(plus < previous_pos);
    CHECK(std::abs(minus) < previous_neg);
    previous_pos = plus;
    previous_neg = std::abs(minus);
  }
}

TEST_CASE("apply_stdp leaves weights unchanged without post spikes") {
  SpikeTrain pre, post;
  pre.spikes = {{0.01, 0.02, 0.03}};
  post.spikes = {{}};
  const auto w = apply_stdp({0.4}, pre, post, {});
  CHECK(w[0] == Approx(0.4));
}

TEST_CASE("apply_stdp single pair") {
  SpikeTrain pre, post;
  pre.spikes = {{0.010}};
  post.spikes = {{0.011}};
  const auto w = apply_stdp({0.0}, pre, post, {});
  CHECK(w[0] == Approx(0.2378).epsilon(1e-3));
}

TEST_CASE("apply_stdp clips at the bounds") {
  SpikeTrain pre, post;
  pre.spikes = {{0.010}};
  post.spikes = {{0.011}};
  const auto top = apply_stdp({1.0}, pre, post, {});
  CHECK(top[0] == Approx(1.0));
  SpikeTrain pre2, post2;
  pre2.spikes = {{0.011}};
  post2.spikes = {{0.010}};
  const auto bottom = apply_stdp({-0.999}, pre2, post2, {});
  CHECK(bottom[0] == Approx(-1.0));
}

TEST_CASE("trace accumulation equals the brute-force all-pairs sum") {
  Rng rng(21);
  const StdpParams p;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> pre_times, post_times;
    const int n_pre = 1 + static_cast<int>(rng.uniform(0.0, 40.0));
    const int n_post = 1 + static_cast<int>(rng.uniform(0.0, 40.0));
    double t = 0.0;
    for (int i = 0; i < n_pre; ++i) pre_times.push_back(t += rng.exponential(80.0));
    t = 0.0;
    for (int i = 0; i < n_post; ++i) post_times.push_back(t += rng.exponential(80.0));

    StdpParams wide = p;
    wide.w_min = -1e9;  // disable clipping so the raw sums are comparable
    wide.w_max = 1e9;
    SpikeTrain pre, post;
    pre.spikes = {pre_times};
    post.spikes = {post_times};
    const auto updated = apply_stdp({0.0}, pre, post, wide);
    const double brute = testing::stdp_all_pairs_brute(pre_times, post_times, p);
    CHECK(updated[0] == Approx(brute).epsilon(1e-10));
  }
}

TEST_CASE("trace accumulation treats coincident spikes as dt = 0") {
  SpikeTrain pre, post;
  pre.spikes = {{0.010, 0.020}};
  post.spikes = {{0.010, 0.020}};
  const StdpParams p;
  const auto w = apply_stdp({0.0}, pre, post, p);
  // Only the cross pairs contribute: +delta(10ms) and -delta(-10ms).
  const double expected = stdp_delta(0.010, p) + stdp_delta(-0.010, p);
  CHECK(w[0] == Approx(expected).epsilon(1e-12));
}

TEST_CASE("train_equality with zero samples returns the initialization") {
  TrainingTrace trace;
  const WeightStore store = train_equality(quick_training(0, 3), {}, quick_setup(), &trace);
  CHECK(store.n == 20);
  CHECK(trace.mean_abs_dw.empty());
  for (double w : store.w_x) {
    CHECK(w >= 0.0);
    CHECK(w <= 0.25);
  }
}

TEST_CASE("train_equality is deterministic for a fixed seed") {
  const WeightStore a = train_equality(quick_training(8, 5), {}, quick_setup());
  const WeightStore b = train_equality(quick_training(8, 5), {}, quick_setup());
  CHECK(a.w_x == b.w_x);
  CHECK(a.w_y == b.w_y);
  const WeightStore c = train_equality(quick_training(8, 6), {}, quick_setup());
  CHECK(a.w_x != c.w_x);
}

TEST_CASE("train_equality keeps weights within bounds and stabilizes") {
  TrainingTrace trace;
  const StdpParams p;
  const WeightStore store =
      train_equality(quick_training(60, 9), p, quick_setup(), &trace);
  for (const auto& history : {trace.w_x_history, trace.w_y_history}) {
    for (const auto& snapshot : history) {
      for (double w : snapshot) {
        CHECK(w >= p.w_min);
        CHECK(w <= p.w_max);
      }
    }
  }
  const std::size_t tail = trace.mean_abs_dw.size() / 10;
  double tail_change = 0.0;
  for (std::size_t s = trace.mean_abs_dw.size() - tail; s < trace.mean_abs_dw.size(); ++s) {
    tail_change += trace.mean_abs_dw[s];
  }
  tail_change /= static_cast<double>(tail);
  CHECK(tail_change < 0.05 * p.w_max);
  REQUIRE(store.n == 20);
}

TEST_CASE("swapping the x/y sample streams leaves the architecture symmetric") {
  // The x and y draws come from the same distribution, so the two weight
  // banks should agree closely after training.
  const WeightStore store = train_equality(quick_training(40, 17), {}, quick_setup());
  double rms = 0.0, scale = 0.0;
  for (int i = 0; i < store.n; ++i) {
    rms += (store.w_x[i] - store.w_y[i]) * (store.w_x[i] - store.w_y[i]);
    scale += store.w_y[i] * store.w_y[i];
  }
  CHECK(std::sqrt(rms / store.n) <= 0.10 * std::sqrt(scale / store.n) + 1e-12);
}

TEST_CASE("weight files round-trip bit for bit") {
  const fs::path path = fs::temp_directory_path() / "snngbp_test_weights.csv";
  WeightStore store;
  store.n = 4;
  store.w_x = {0.125, -0.7, 1.0, 0.3333333333333333};
  store.w_y = {0.0, 0.9999999999999999, -1.0, 1e-17};
  save_weights(store, path);
  const WeightStore loaded = load_weights(path);
  CHECK(loaded.n == 4);
  CHECK(loaded.w_x == store.w_x);
  CHECK(loaded.w_y == store.w_y);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "# snngbp-weights v1 N=4");
  fs::remove(path);
}

TEST_CASE("weight loading rejects malformed files") {
  const fs::path path = fs::temp_directory_path() / "snngbp_bad_weights.csv";
  {
    std::ofstream out(path);
    out << "# snngbp-weights v1 N=3\n0,0.1,0.2\n1,0.3,0.4\n";
  }
  CHECK_THROWS_AS(load_weights(path), FileFormatError);  // truncated
  {
    std::ofstream out(path);
    out << "# something else\n";
  }
  CHECK_THROWS_AS(load_weights(path), FileFormatError);
  {
    std::ofstream out(path);
    out << "# snngbp-weights v1 N=2\n0,0.1,0.2\nbroken\n";
  }
  CHECK_THROWS_AS(load_weights(path), FileFormatError);
  CHECK_THROWS_AS(load_weights(fs::temp_directory_path() / "snngbp_nonexistent.csv"),
                  IoError);
  fs::remove(path);
}
