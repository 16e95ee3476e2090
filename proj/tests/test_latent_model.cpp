#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gradient_check.hpp"
#include "mcbr24/errors.hpp"
#include "mcbr24/features.hpp"
#include "mcbr24/latent_model.hpp"
#include "mcbr24/math24.hpp"

using namespace mcbr;

namespace {

std::vector<TrainingExample> small_dataset(std::size_t stride) {
  std::vector<TrainingExample> out;
  const auto all = enumerate_puzzles();
  for (std::size_t i = 0; i < all.size(); i += stride) {
    out.push_back({model_input(all[i]), encode_labels(solve_restricted(all[i]))});
  }
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "mcbr24_model_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("latent_model") {
  TEST_CASE("parameter count") { CHECK(LatentModel::kParameterCount == 44 * 64 + 64 + 64 * 20 + 20); }

  TEST_CASE("zero model predicts one half everywhere") {
    const LatentModel m;
    for (double p : m.predict(model_input(Puzzle({4, 5, 9, 10})))) CHECK(p == 0.5);
    const auto h = m.latent(model_input(Puzzle({4, 5, 9, 10})));
    CHECK(h.size() == 64);
    CHECK(std::all_of(h.begin(), h.end(), [](double v) { return v == 0.0; }));
  }

  TEST_CASE("initialization stays inside 1/sqrt(fan_in)") {
    const auto p = LatentModel::initialized(11).parameters();
    const std::size_t layer1 = 44 * 64 + 64;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double bound = i < layer1 ? 1.0 / std::sqrt(44.0) : 1.0 / std::sqrt(64.0);
      CHECK(std::abs(p[i]) <= bound);
    }
    CHECK(LatentModel::initialized(11) == LatentModel::initialized(11));
    CHECK_FALSE(LatentModel::initialized(11) == LatentModel::initialized(12));
  }

  TEST_CASE("latent activations are non-negative and outputs are probabilities") {
    const LatentModel m = LatentModel::initialized(3);
    for (const Puzzle& p : {Puzzle({1, 1, 1, 1}), Puzzle({4, 5, 9, 10}), Puzzle({13, 13, 13, 13})}) {
      const auto h = m.latent(model_input(p));
      CHECK(std::all_of(h.begin(), h.end(), [](double v) { return v >= 0.0; }));
      CHECK(h == m.latent(model_input(p)));
      for (double y : m.predict(model_input(p))) {
        CHECK(y > 0.0);
        CHECK(y < 1.0);
      }
    }
  }

  TEST_CASE("loss of the zero model is log 2") {
    const auto data = small_dataset(97);
    CHECK(LatentModel().loss(data) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }

  TEST_CASE("analytic gradient matches central differences") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto r = testing::check_gradient(seed, 150);
      CAPTURE(seed);
      CHECK(r.probes == 150);
      CHECK(r.max_relative_error < 1e-4);
    }
  }

  TEST_CASE("gradient of the zero model: only biases of layer 2 move") {
    const auto data = small_dataset(200);
    std::vector<double> g;
    LatentModel().loss_and_gradient(data, g);
    REQUIRE(g.size() == LatentModel::kParameterCount);
    const std::size_t b2 = LatentModel::kParameterCount - 20;
    for (std::size_t i = 0; i < b2; ++i) CHECK(g[i] == 0.0);
  }

  TEST_CASE("training lowers the loss and is deterministic") {
    const auto data = small_dataset(4);
    TrainOptions opt;
    opt.epochs = 300;
    TrainReport r1, r2;
    const LatentModel a = train(data, opt, 99, &r1);
    const LatentModel b = train(data, opt, 99, &r2);
    CHECK(r1.final_loss < r1.initial_loss);
    CHECK(a == b);
    CHECK(a.seed() == 99);
    CHECK(r1.final_loss == r2.final_loss);
    CHECK(a.loss(data) == doctest::Approx(r1.final_loss));
  }

  TEST_CASE("trained model fits most training label bits") {
    std::vector<TrainingExample> data;
    for (const Puzzle& p : enumerate_puzzles()) {
      auto sols = solve_restricted(p);
      if (!sols.empty()) data.push_back({model_input(p), encode_labels(sols)});
    }
    const LatentModel m = train(data, TrainOptions{}, 5);
    std::size_t right = 0;
    for (const auto& ex : data) {
      const auto y = m.predict(ex.input);
      for (std::size_t i = 0; i < 20; ++i) right += (y[i] >= 0.5) == (ex.labels.bits[i] == 1);
    }
    CHECK(static_cast<double>(right) / (20.0 * data.size()) >= 0.8);
  }

  TEST_CASE("divergence is reported") {
    TrainOptions opt;
    opt.learning_rate = 1e300;
    opt.epochs = 50;
    CHECK_THROWS_AS(train(small_dataset(50), opt, 1), NonFiniteLoss);
    CHECK_THROWS_AS(train({}, TrainOptions{}, 1), std::invalid_argument);
  }

  TEST_CASE("checkpoint round trip is exact") {
    const LatentModel m = train(small_dataset(40), TrainOptions{0.05, 0.9, 20}, 17);
    const auto path = scratch("model.txt");
    m.save(path);
    const LatentModel back = LatentModel::load(path);
    CHECK(back == m);
    CHECK(back.seed() == 17);
    std::ifstream f(path);
    std::string line;
    std::getline(f, line);
    CHECK(line == "mcbr24-latent-model 1");
  }

  TEST_CASE("bad checkpoints") {
    CHECK_THROWS_AS(LatentModel::load(scratch("missing.txt")), CheckpointError);
    const auto write = [](const std::filesystem::path& p, const std::string& s) { std::ofstream(p) << s; };
    write(scratch("garbage.txt"), "hello\n");
    CHECK_THROWS_AS(LatentModel::load(scratch("garbage.txt")), CheckpointError);
    write(scratch("dims.txt"), "mcbr24-latent-model 1\nseed 1\ndims 44 32 20\nparams 4180\n");
    CHECK_THROWS_AS(LatentModel::load(scratch("dims.txt")), CheckpointError);
    write(scratch("short.txt"), "mcbr24-latent-model 1\nseed 1\ndims 44 64 20\nparams 4180\n0.5\n");
    CHECK_THROWS_AS(LatentModel::load(scratch("short.txt")), CheckpointError);
    write(scratch("version.txt"), "mcbr24-latent-model 9\n");
    CHECK_THROWS_AS(LatentModel::load(scratch("version.txt")), CheckpointError);
  }

  TEST_CASE("set_parameters checks the size") {
    LatentModel m;
    std::vector<double> p(10);
    CHECK_THROWS(m.set_parameters(p));
  }
}
