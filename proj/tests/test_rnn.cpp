#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gradcheck.hpp"
#include "seqlab/dataset.hpp"
#include "seqlab/error.hpp"
#include "seqlab/rnn/adam.hpp"
#include "seqlab/rnn/cell.hpp"
#include "seqlab/rnn/model.hpp"
#include "seqlab/rnn/train.hpp"

namespace seqlab::rnn {
namespace {

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Vector<double> vec(std::initializer_list<double> v) {
  Vector<double> out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(LstmStep, ZeroParameters) {
  const auto p = CellParams<double>::zeros(CellKind::Lstm, 3, 2);
  auto s = CellState<double>::zeros(CellKind::Lstm, 2);
  auto next = lstm_step(vec({0, 1, 0}), s, p);
  EXPECT_DOUBLE_EQ(next.h.norm(), 0.0);
  EXPECT_DOUBLE_EQ(next.c.norm(), 0.0);

  s.c = vec({0.8, -2.0});
  next = lstm_step(vec({1, 0, 0}), s, p);
  EXPECT_DOUBLE_EQ(next.c[0], 0.4);
  EXPECT_DOUBLE_EQ(next.c[1], -1.0);
  EXPECT_DOUBLE_EQ(next.h[0], 0.5 * std::tanh(0.4));
  EXPECT_DOUBLE_EQ(next.h[1], 0.5 * std::tanh(-1.0));
}

TEST(LstmStep, ScalarHandTrace) {
  // One unit, two input symbols, input is symbol 0.
  auto p = CellParams<double>::zeros(CellKind::Lstm, 2, 1);
  const double wi = 0.5, wf = -0.3, wo = 0.8, wc = 1.2;
  const double ri = 0.1, rf = 0.4, ro = -0.6, rc = 0.7;
  const double bi = 0.05, bf = 1.0, bo = -0.2, bc = 0.3;
  p.W.col(0) = vec({wi, wf, wo, wc});
  p.W.col(1) = vec({9, 9, 9, 9});  // unused: symbol 1 is absent
  p.R.col(0) = vec({ri, rf, ro, rc});
  p.b = vec({bi, bf, bo, bc});
  CellState<double> s{vec({0.25}), vec({-0.5})};
  const auto next = lstm_step(vec({1, 0}), s, p);

  const double h0 = 0.25, c0 = -0.5;
  const double i = sig(wi + ri * h0 + bi), f = sig(wf + rf * h0 + bf), o = sig(wo + ro * h0 + bo);
  const double cand = std::tanh(wc + rc * h0 + bc);
  const double c1 = f * c0 + i * cand;
  EXPECT_NEAR(next.c[0], c1, 1e-15);
  EXPECT_NEAR(next.h[0], o * std::tanh(c1), 1e-15);
}

TEST(GruStep, ZeroParameters) {
  const auto p = CellParams<double>::zeros(CellKind::Gru, 3, 2);
  auto s = CellState<double>::zeros(CellKind::Gru, 2);
  EXPECT_DOUBLE_EQ(gru_step(vec({0, 0, 1}), s, p).h.norm(), 0.0);
  s.h = vec({0.6, -0.2});
  const auto next = gru_step(vec({0, 0, 1}), s, p);
  EXPECT_DOUBLE_EQ(next.h[0], 0.3);
  EXPECT_DOUBLE_EQ(next.h[1], -0.1);
}

TEST(GruStep, ScalarHandTrace) {
  auto p = CellParams<double>::zeros(CellKind::Gru, 2, 1);
  const double wu = 0.4, wr = -0.7, wh = 1.1, ru = 0.3, rr = 0.9, rh = -0.5, bu = 0.1, br = -0.2, bh = 0.25;
  p.W.col(1) = vec({wu, wr, wh});  // input is symbol 1
  p.R.col(0) = vec({ru, rr, rh});
  p.b = vec({bu, br, bh});
  CellState<double> s{vec({-0.4}), {}};
  const auto next = gru_step(vec({0, 1}), s, p);

  const double h0 = -0.4;
  const double u = sig(wu + ru * h0 + bu), r = sig(wr + rr * h0 + br);
  const double cand = std::tanh(wh + rh * (r * h0) + bh);
  EXPECT_NEAR(next.h[0], (1 - u) * h0 + u * cand, 1e-15);
}

TEST(CellStep, ShapeAndOverflowErrors) {
  const auto p = CellParams<double>::zeros(CellKind::Lstm, 3, 2);
  const auto s = CellState<double>::zeros(CellKind::Lstm, 2);
  EXPECT_THROW(lstm_step(vec({1, 0}), s, p), ShapeError);
  EXPECT_THROW(lstm_step(vec({1, 0, 0}), CellState<double>::zeros(CellKind::Lstm, 3), p), ShapeError);
  auto bad = p;
  bad.b[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(lstm_step(vec({1, 0, 0}), s, bad), NumericOverflow);
}

TEST(Forward, ZeroModelIsUniform) {
  for (auto kind : {CellKind::Lstm, CellKind::Gru}) {
    const auto m = Model<double>::zeros(kind, 4, 3, 2);
    const std::vector<std::uint8_t> window{0, 3, 1, 2};
    const auto p = forward_sequence(m, window);
    for (Eigen::Index i = 0; i < p.size(); ++i) EXPECT_DOUBLE_EQ(p[i], 0.25);
  }
}

TEST(Forward, ProbabilitiesSumToOne) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto kind = trial % 2 ? CellKind::Gru : CellKind::Lstm;
    const auto m = glorot_model(kind, 5, 6, 1 + trial % 3, rng());
    std::vector<std::uint8_t> window(1 + rng() % 10);
    for (auto& s : window) s = static_cast<std::uint8_t>(rng() % 5);
    const auto p = forward_sequence(m, window);
    EXPECT_NEAR(p.sum(), 1.0, 1e-12);
    EXPECT_GT(p.minCoeff(), 0.0);
  }
}

TEST(Forward, BatchedMatchesSingle) {
  std::mt19937_64 rng(9);
  for (auto kind : {CellKind::Lstm, CellKind::Gru}) {
    const auto m = glorot_model(kind, 3, 5, 2, rng());
    const Alphabet abc = Alphabet::first(3);
    const auto data = build_dataset("abcbba", abc, {60, 7, 0.1}, 3);
    const auto starts = data.starts(Split::Train);
    const auto batch = SymbolBatch::gather(data, starts);
    Unroller<double> u;
    const auto& probs = u.forward(m, batch);
    for (std::size_t b = 0; b < starts.size(); ++b) {
      const auto p = forward_sequence(m, data.window_at(starts[b]));
      ASSERT_LT((probs.col(static_cast<Eigen::Index>(b)) - p).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(LossAccuracy, ClosedForms) {
  Matrix<double> uniform = Matrix<double>::Constant(3, 2, 1.0 / 3.0);
  const std::vector<std::uint8_t> t0{0, 2};
  const auto u = loss_and_accuracy(uniform, t0);
  EXPECT_NEAR(u.loss, std::log(3.0), 1e-15);
  EXPECT_DOUBLE_EQ(u.accuracy, 0.5);  // ties pick symbol 0

  Matrix<double> exact = Matrix<double>::Zero(3, 4);
  exact(0, 0) = exact(1, 1) = exact(2, 2) = 1.0;
  exact(0, 3) = 1.0;
  const std::vector<std::uint8_t> t1{0, 1, 2, 1};
  const auto e = loss_and_accuracy(exact, t1);
  EXPECT_DOUBLE_EQ(e.accuracy, 0.75);
  EXPECT_NEAR(e.loss, -std::log(kProbabilityFloor) / 4.0, 1e-12);

  const std::vector<std::uint8_t> t2{0, 1, 2, 0};
  const auto perfect = loss_and_accuracy(exact, t2);
  EXPECT_DOUBLE_EQ(perfect.loss, 0.0);
  EXPECT_DOUBLE_EQ(perfect.accuracy, 1.0);
}

TEST(Gradient, ReadoutBiasIsSoftmaxMinusTarget) {
  const auto m = glorot_model(CellKind::Lstm, 3, 4, 1, 77);
  const std::vector<std::uint8_t> window{0, 1, 2, 1, 0};
  const auto p = forward_sequence(m, window);
  const auto g = backward_sequence(m, window, 2);
  Vector<double> expected = p;
  expected[2] -= 1.0;
  EXPECT_LT((g.grads.readout.b - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(g.loss, -std::log(p[2]), 1e-14);
}

TEST(Gradient, MatchesFiniteDifferencesOnFourUnitInstance) {
  for (auto kind : {CellKind::Lstm, CellKind::Gru}) {
    const auto r = testing::check_gradient({kind, 3, 4, 1, 5, 2021});
    EXPECT_LE(r.worst_relative, 1e-4) << to_string(kind);
    // The long-double reference forward agrees with the library forward.
    EXPECT_LT(r.reference_loss_error, 1e-13);
  }
}

TEST(Gradient, MatchesFiniteDifferencesOnRandomInstances) {
  for (auto kind : {CellKind::Lstm, CellKind::Gru})
    for (std::size_t depth : {1, 2})
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto inst = testing::random_instance(kind, depth, seed * 31 + depth);
        const auto r = testing::check_gradient(inst);
        EXPECT_LT(r.reference_loss_error, 1e-13);
        EXPECT_LE(r.worst_relative, 1e-4)
            << to_string(kind) << " depth=" << depth << " units=" << inst.units << " steps=" << inst.steps;
      }
}

TEST(Gradient, BatchIsMeanOfSingleExamples) {
  for (auto kind : {CellKind::Lstm, CellKind::Gru}) {
    const auto m = glorot_model(kind, 2, 3, 2, 5);
    const auto data = build_dataset("aab", Alphabet::first(2), {40, 5, 0.1}, 1);
    const auto starts = data.starts(Split::Train);
    const auto batch = SymbolBatch::gather(data, starts);
    Unroller<double> u;
    Model<double> grads;
    u.forward(m, batch);
    const double loss = u.backward(m, batch, grads);

    auto sum = Model<double>::zeros(kind, 2, 3, 2);
    double loss_sum = 0.0;
    for (auto s : starts) {
      const auto g = backward_sequence(m, data.window_at(s), data.target_at(s));
      loss_sum += g.loss;
      auto acc = sum.tensors();
      const auto add = g.grads.tensors();
      for (std::size_t t = 0; t < acc.size(); ++t)
        for (std::size_t i = 0; i < acc[t].size(); ++i) acc[t][i] += add[t][i];
    }
    const double n = static_cast<double>(starts.size());
    EXPECT_NEAR(loss, loss_sum / n, 1e-13);
    const auto got = grads.tensors();
    const auto want = sum.tensors();
    for (std::size_t t = 0; t < got.size(); ++t)
      for (std::size_t i = 0; i < got[t].size(); ++i) ASSERT_NEAR(got[t][i], want[t][i] / n, 1e-13);
  }
}

TEST(Gradient, NearZeroWhenPredictionIsCertain) {
  auto m = Model<double>::zeros(CellKind::Gru, 3, 2, 1);
  m.readout.b = vec({0, 60, 0});
  const std::vector<std::uint8_t> window{0, 1, 2};
  const auto g = backward_sequence(m, window, 1);
  for (auto t : g.grads.tensors())
    for (double v : t) EXPECT_LT(std::abs(v), 1e-20);
}

TEST(Model, ParameterCounts) {
  for (std::size_t u : {1, 7, 25, 100})
    for (std::size_t p : {2, 10, 52}) {
      const auto lstm = Model<double>::zeros(CellKind::Lstm, p, u, 1);
      const auto gru = Model<double>::zeros(CellKind::Gru, p, u, 1);
      const std::size_t cell = u * p + u * u + u;
      const std::size_t readout = p * u + p;
      EXPECT_EQ(lstm.parameter_count(), 4 * cell + readout);
      EXPECT_EQ(gru.parameter_count(), 3 * cell + readout);
      EXPECT_LT(gru.parameter_count(), lstm.parameter_count());
    }
  const auto deep = Model<double>::zeros(CellKind::Lstm, 3, 4, 2);
  EXPECT_EQ(deep.parameter_count(), 4 * (4 * 3 + 16 + 4) + 4 * (4 * 4 + 16 + 4) + 3 * 4 + 3);
}

TEST(Model, GlorotIsSeededAndBounded) {
  const auto a = glorot_model(CellKind::Lstm, 5, 10, 1, 3);
  const auto b = glorot_model(CellKind::Lstm, 5, 10, 1, 3);
  const auto c = glorot_model(CellKind::Lstm, 5, 10, 1, 4);
  EXPECT_EQ(a.layers[0].W, b.layers[0].W);
  EXPECT_NE(a.layers[0].W, c.layers[0].W);
  const double limit = std::sqrt(6.0 / (5 + 40));
  EXPECT_LE(a.layers[0].W.cwiseAbs().maxCoeff(), limit);
  EXPECT_EQ(a.layers[0].b.norm(), 0.0);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  std::vector<double> x{1.0, -2.0}, g{0.5, -3e-4}, m(2, 0.0), v(2, 0.0);
  adam_update<double>(x, g, m, v, 1, 0.01, {});
  // m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps).
  EXPECT_NEAR(x[0], 1.0 - 0.01 * 0.5 / (0.5 + 1e-8), 1e-15);
  EXPECT_NEAR(x[1], -2.0 + 0.01 * 3e-4 / (3e-4 + 1e-8), 1e-15);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  std::vector<double> x{0.3}, g{0.0}, m(1, 0.0), v(1, 0.0);
  adam_update<double>(x, g, m, v, 1, 0.1, {});
  EXPECT_EQ(x[0], 0.3);
}

TEST(Adam, ConstantGradientDecreasesMonotonically) {
  std::vector<double> x{1.0}, g{2.0}, m(1, 0.0), v(1, 0.0);
  double prev = x[0];
  for (std::size_t t = 1; t <= 5; ++t) {
    adam_update<double>(x, g, m, v, t, 0.01, {});
    EXPECT_LT(x[0], prev);
    prev = x[0];
  }
  EXPECT_THROW(adam_update<double>(x, g, m, v, 0, 0.01, {}), ConfigError);
}

EncodedDataset ab_data() {
  return build_dataset("ab", Alphabet::first(2), {1000, 100, 0.05}, 17);
}

TEST(Train, AbStringWithGru) {
  TrainConfig cfg;
  cfg.cell = CellKind::Gru;
  cfg.units = 25;
  cfg.learning_rate = 0.01;
  cfg.init_seed = 5;
  const auto data = ab_data();
  const auto r = train(data, cfg);
  EXPECT_EQ(r.report.stop_reason, StopReason::CriterionMet);
  EXPECT_LE(r.report.final_loss, 0.1);
  EXPECT_LT(r.report.epochs_run, 100u);
  ASSERT_EQ(r.report.loss_curve.size(), r.report.epochs_run);
  EXPECT_EQ(r.report.loss_curve.back(), r.report.final_loss);
  EXPECT_EQ(r.report.accuracy_curve.back(), r.report.final_accuracy);
  EXPECT_GT(r.report.wall_seconds, 0.0);

  // "...ab" is followed by 'a'.
  const std::vector<std::uint8_t> window{0, 1, 0, 1, 0, 1};
  const auto p = forward_sequence(r.model, window);
  EXPECT_GT(p[0], p[1]);
}

TEST(Train, EpochCapAndValidation) {
  const auto data = ab_data();
  TrainConfig cfg;
  cfg.units = 4;
  cfg.max_epochs = 1;
  cfg.loss_target = 1e-9;
  const auto r = train(data, cfg);
  EXPECT_EQ(r.report.epochs_run, 1u);
  EXPECT_EQ(r.report.stop_reason, StopReason::EpochCap);

  cfg.max_epochs = 0;
  EXPECT_THROW(train(data, cfg), ConfigError);
  cfg.max_epochs = 1;
  cfg.learning_rate = 0.0;
  EXPECT_THROW(train(data, cfg), ConfigError);
  for (double lr : {0.001, 0.01, 0.1}) {
    cfg.learning_rate = lr;
    EXPECT_NO_THROW(cfg.validate());
  }
}

TEST(Train, DeterministicCurves) {
  const auto data = build_dataset("abcab", Alphabet::first(3), {300, 20, 0.05}, 2);
  for (auto precision : {Precision::Float32, Precision::Float64}) {
    TrainConfig cfg;
    cfg.cell = CellKind::Lstm;
    cfg.units = 8;
    cfg.max_epochs = 4;
    cfg.init_seed = 12;
    cfg.precision = precision;
    const auto a = train(data, cfg);
    const auto b = train(data, cfg);
    EXPECT_EQ(a.report.loss_curve, b.report.loss_curve);
    EXPECT_EQ(a.report.accuracy_curve, b.report.accuracy_curve);
    EXPECT_EQ(a.model.layers[0].W, b.model.layers[0].W);
  }
}

TEST(Train, UnitsForTotal) {
  EXPECT_EQ(units_for_total(100, 1), 100u);
  EXPECT_EQ(units_for_total(100, 3), 33u);
  EXPECT_EQ(units_for_total(50, 3), 17u);
  EXPECT_EQ(units_for_total(200, 3), 67u);
  EXPECT_EQ(units_for_total(50, 4), 12u);  // 48 and 52 tie; smaller wins
}

}  // namespace
}  // namespace seqlab::rnn
