#include "mcbr24/latent_model.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mcbr24/errors.hpp"

namespace mcbr {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr const char* kCheckpointMagic = "mcbr24-latent-model";
constexpr int kCheckpointVersion = 1;

struct Batch {
  RowMatrix inputs;   // N x 44
  RowMatrix targets;  // N x 20
};

Batch make_batch(std::span<const TrainingExample> examples) {
  const auto n = static_cast<Eigen::Index>(examples.size());
  Batch b{RowMatrix(n, LatentModel::kInputs), RowMatrix(n, LatentModel::kOutputs)};
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& ex = examples[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < LatentModel::kInputs; ++c) b.inputs(r, c) = ex.input[static_cast<std::size_t>(c)];
    for (Eigen::Index c = 0; c < LatentModel::kOutputs; ++c) b.targets(r, c) = ex.labels.bits[static_cast<std::size_t>(c)];
  }
  return b;
}

// log(1 + exp(-|z|)) + max(z, 0) - z t, stable for any z.
double bce_with_logit(double z, double t) { return std::max(z, 0.0) - z * t + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Gradients {
  RowMatrix w1, w2;
  Eigen::RowVectorXd b1, b2;
};

// Forward + backward pass over a whole batch.
double forward_backward(const RowMatrix& w1, const Eigen::RowVectorXd& b1, const RowMatrix& w2,
                        const Eigen::RowVectorXd& b2, const Batch& batch, Gradients* grads) {
  const RowMatrix pre = (batch.inputs * w1).rowwise() + b1;
  const RowMatrix hidden = pre.cwiseMax(0.0);
  const RowMatrix logits = (hidden * w2).rowwise() + b2;
  const double count = static_cast<double>(logits.size());

  double loss = 0.0;
  RowMatrix d_logits(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      const double z = logits(r, c);
      const double t = batch.targets(r, c);
      loss += bce_with_logit(z, t);
      d_logits(r, c) = (sigmoid(z) - t) / count;
    }
  }
  loss /= count;
  if (grads) {
    grads->w2.noalias() = hidden.transpose() * d_logits;
    grads->b2 = d_logits.colwise().sum();
    RowMatrix d_hidden = d_logits * w2.transpose();
    d_hidden = d_hidden.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
    grads->w1.noalias() = batch.inputs.transpose() * d_hidden;
    grads->b1 = d_hidden.colwise().sum();
  }
  return loss;
}

template <typename F, typename W, typename B>
void for_each_parameter_block(F&& f, W& w1, B& b1, W& w2, B& b2) {
  f(w1.data(), w1.size());
  f(b1.data(), b1.size());
  f(w2.data(), w2.size());
  f(b2.data(), b2.size());
}

}  // namespace

LatentModel::LatentModel()
    : w1_(RowMatrix::Zero(kInputs, kHidden)),
      b1_(Eigen::RowVectorXd::Zero(kHidden)),
      w2_(RowMatrix::Zero(kHidden, kOutputs)),
      b2_(Eigen::RowVectorXd::Zero(kOutputs)) {}

LatentModel LatentModel::initialized(std::uint64_t seed) {
  LatentModel m;
  m.seed_ = seed;
  std::mt19937_64 rng(seed);
  auto fill = [&](double* p, Eigen::Index n, double fan_in) {
    const double bound = 1.0 / std::sqrt(fan_in);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      p[i] = (2.0 * u - 1.0) * bound;
    }
  };
  fill(m.w1_.data(), m.w1_.size(), kInputs);
  fill(m.b1_.data(), m.b1_.size(), kInputs);
  fill(m.w2_.data(), m.w2_.size(), kHidden);
  fill(m.b2_.data(), m.b2_.size(), kHidden);
  return m;
}

LatentVector LatentModel::latent(const ModelInput& input) const {
  const Eigen::Map<const Eigen::RowVectorXd> x(input.data(), kInputs);
  const Eigen::RowVectorXd h = (x * w1_ + b1_).cwiseMax(0.0);
  return {h.data(), h.data() + h.size()};
}

std::array<double, LatentModel::kOutputs> LatentModel::predict(const ModelInput& input) const {
  const Eigen::Map<const Eigen::RowVectorXd> x(input.data(), kInputs);
  const Eigen::RowVectorXd h = (x * w1_ + b1_).cwiseMax(0.0);
  const Eigen::RowVectorXd z = h * w2_ + b2_;
  std::array<double, kOutputs> out{};
  for (int i = 0; i < kOutputs; ++i) out[static_cast<std::size_t>(i)] = sigmoid(z(i));
  return out;
}

double LatentModel::loss(std::span<const TrainingExample> batch) const {
  if (batch.empty()) throw std::invalid_argument("loss over an empty batch");
  return forward_backward(w1_, b1_, w2_, b2_, make_batch(batch), nullptr);
}

double LatentModel::loss_and_gradient(std::span<const TrainingExample> batch, std::vector<double>& gradient) const {
  if (batch.empty()) throw std::invalid_argument("loss over an empty batch");
  Gradients g;
  const double loss = forward_backward(w1_, b1_, w2_, b2_, make_batch(batch), &g);
  gradient.clear();
  gradient.reserve(kParameterCount);
  for_each_parameter_block([&](const double* p, Eigen::Index n) { gradient.insert(gradient.end(), p, p + n); },
                           g.w1, g.b1, g.w2, g.b2);
  return loss;
}

std::vector<double> LatentModel::parameters() const {
  std::vector<double> out;
  out.reserve(kParameterCount);
  for_each_parameter_block([&](const double* p, Eigen::Index n) { out.insert(out.end(), p, p + n); }, w1_, b1_, w2_,
                           b2_);
  return out;
}

void LatentModel::set_parameters(std::span<const double> params) {
  if (params.size() != kParameterCount) {
    throw std::invalid_argument("expected " + std::to_string(kParameterCount) + " parameters, got " +
                                std::to_string(params.size()));
  }
  std::size_t k = 0;
  for_each_parameter_block(
      [&](double* p, Eigen::Index n) {
        std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(k), n, p);
        k += static_cast<std::size_t>(n);
      },
      w1_, b1_, w2_, b2_);
}

LatentModel train(std::span<const TrainingExample> dataset, const TrainOptions& options, std::uint64_t seed,
                  TrainReport* report) {
  if (dataset.empty()) throw std::invalid_argument("training needs a nonempty dataset");
  LatentModel m = LatentModel::initialized(seed);
  const Batch batch = make_batch(dataset);

  Gradients g;
  Gradients v{RowMatrix::Zero(m.w1_.rows(), m.w1_.cols()), RowMatrix::Zero(m.w2_.rows(), m.w2_.cols()),
              Eigen::RowVectorXd::Zero(m.b1_.size()), Eigen::RowVectorXd::Zero(m.b2_.size())};
  const double lr = options.learning_rate;
  const double mu = options.momentum;

  double loss = 0.0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    loss = forward_backward(m.w1_, m.b1_, m.w2_, m.b2_, batch, &g);
    if (!std::isfinite(loss)) {
      throw NonFiniteLoss("training loss became non-finite at epoch " + std::to_string(epoch) +
                          " (learning rate " + std::to_string(lr) + ")");
    }
    if (epoch == 0 && report) report->initial_loss = loss;
    v.w1 = mu * v.w1 - lr * g.w1;
    v.b1 = mu * v.b1 - lr * g.b1;
    v.w2 = mu * v.w2 - lr * g.w2;
    v.b2 = mu * v.b2 - lr * g.b2;
    m.w1_ += v.w1;
    m.b1_ += v.b1;
    m.w2_ += v.w2;
    m.b2_ += v.b2;
  }
  const double final_loss = m.loss(dataset);
  if (!std::isfinite(final_loss)) throw NonFiniteLoss("training loss became non-finite after the last epoch");
  if (report) {
    if (options.epochs == 0) report->initial_loss = final_loss;
    report->final_loss = final_loss;
  }
  return m;
}

// Checkpoint layout (text, one token per whitespace):
//   mcbr24-latent-model 1
//   seed <uint64>
//   dims 44 64 20
//   params <count>
//   <count lines, one %.17g value each, flattened parameter order>
void LatentModel::save(const std::filesystem::path& path) const {
  std::ofstream f(path);
  if (!f) throw CheckpointError("cannot write checkpoint " + path.string());
  f << kCheckpointMagic << ' ' << kCheckpointVersion << '\n'
    << "seed " << seed_ << '\n'
    << "dims " << kInputs << ' ' << kHidden << ' ' << kOutputs << '\n';
  const auto params = parameters();
  f << "params " << params.size() << '\n';
  char buf[40];
  for (double p : params) {
    std::snprintf(buf, sizeof buf, "%.17g\n", p);
    f << buf;
  }
  if (!f) throw CheckpointError("failed writing checkpoint " + path.string());
}

LatentModel LatentModel::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw CheckpointError("cannot open checkpoint " + path.string());
  std::string magic, key;
  int version = 0;
  if (!(f >> magic >> version) || magic != kCheckpointMagic) throw CheckpointError("not a latent model checkpoint");
  if (version != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  LatentModel m;
  int in = 0, hid = 0, out = 0;
  std::size_t count = 0;
  if (!(f >> key >> m.seed_) || key != "seed") throw CheckpointError("checkpoint: expected seed");
  if (!(f >> key >> in >> hid >> out) || key != "dims") throw CheckpointError("checkpoint: expected dims");
  if (in != kInputs || hid != kHidden || out != kOutputs) throw CheckpointError("checkpoint: layer dimensions mismatch");
  if (!(f >> key >> count) || key != "params" || count != kParameterCount) {
    throw CheckpointError("checkpoint: bad parameter count");
  }
  std::vector<double> params(count);
  for (auto& p : params) {
    std::string tok;
    if (!(f >> tok)) throw CheckpointError("checkpoint: truncated parameters");
    p = std::strtod(tok.c_str(), nullptr);
    if (!std::isfinite(p)) throw CheckpointError("checkpoint: non-finite parameter");
  }
  m.set_parameters(params);
  return m;
}

}  // namespace mcbr
