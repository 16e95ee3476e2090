#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mcbr24/features.hpp"

namespace mcbr {

struct TrainingExample {
  ModelInput input;
  LabelVector labels;
};

struct TrainOptions {
  double learning_rate = 0.05;
  double momentum = 0.9;
  int epochs = 2000;
};

struct TrainReport {
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

using LatentVector = std::vector<double>;

// 44 -> 64 (ReLU) -> 20 (sigmoid) multi-label network. The hidden layer
// activations are the latent representation used for retrieval.
//
// Flattened parameter order (also the checkpoint order):
//   w1[input][hidden] (44x64, row-major), b1[64],
//   w2[hidden][output] (64x20, row-major), b2[20].
class LatentModel {
 public:
  static constexpr int kInputs = 44;
  static constexpr int kHidden = 64;
  static constexpr int kOutputs = 20;
  static constexpr std::size_t kParameterCount =
      kInputs * kHidden + kHidden + kHidden * kOutputs + kOutputs;

  // All parameters zero.
  LatentModel();
  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for every weight and bias.
  static LatentModel initialized(std::uint64_t seed);

  LatentVector latent(const ModelInput& input) const;
  std::array<double, kOutputs> predict(const ModelInput& input) const;

  // Mean binary cross-entropy over every (example, output) pair.
  double loss(std::span<const TrainingExample> batch) const;
  // Same loss; writes d loss / d parameter in flattened order.
  double loss_and_gradient(std::span<const TrainingExample> batch, std::vector<double>& gradient) const;

  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> params);

  std::uint64_t seed() const { return seed_; }

  void save(const std::filesystem::path& path) const;
  static LatentModel load(const std::filesystem::path& path);

  friend bool operator==(const LatentModel& a, const LatentModel& b) {
    return a.seed_ == b.seed_ && a.parameters() == b.parameters();
  }

 private:
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  RowMatrix w1_;
  Eigen::RowVectorXd b1_;
  RowMatrix w2_;
  Eigen::RowVectorXd b2_;
  std::uint64_t seed_ = 0;

  friend LatentModel train(std::span<const TrainingExample>, const TrainOptions&, std::uint64_t, TrainReport*);
};

// Full-batch gradient descent with momentum from initialized(seed).
// Throws NonFiniteLoss if the loss diverges and std::invalid_argument for
// an empty dataset.
LatentModel train(std::span<const TrainingExample> dataset, const TrainOptions& options, std::uint64_t seed,
                  TrainReport* report = nullptr);

}  // namespace mcbr
