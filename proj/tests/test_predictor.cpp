#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ldlrec/maxent.hpp"
#include "test_util.hpp"

using namespace ldlrec;

namespace {

double mean_kl(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& predictions) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < targets.rows(); ++i)
    for (Eigen::Index j = 0; j < targets.cols(); ++j)
      if (targets(i, j) > 0.0)
        acc += targets(i, j) * (std::log(targets(i, j)) - std::log(predictions(i, j)));
  return acc / static_cast<double>(targets.rows());
}

}  // namespace

TEST_CASE("fit") {
  std::mt19937_64 gen(5);

  SUBCASE("uniform targets are solved by the zero model") {
    const Eigen::MatrixXd x = test_util::random_matrix(gen, 20, 3);
    const Eigen::MatrixXd t = Eigen::MatrixXd::Constant(20, 4, 0.25);
    const MaxEntModel model = fit(x, t, 200, 1e-8);
    CHECK(model.training_log.back().second < 1e-6);
    CHECK(model.weights.cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(model.bias.cwiseAbs().maxCoeff() <= 1e-9);
  }

  SUBCASE("separable clusters reach low training loss") {
    const Eigen::Index n = 40;
    Eigen::MatrixXd x(n, 2);
    Eigen::MatrixXd t(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool first = i < n / 2;
      x(i, 0) = (first ? 2.0 : -2.0) + 0.1 * rng::normal(gen);
      x(i, 1) = (first ? -2.0 : 2.0) + 0.1 * rng::normal(gen);
      t(i, 0) = first ? 0.95 : 0.05;
      t(i, 1) = first ? 0.05 : 0.95;
    }
    const MaxEntModel model = fit(x, t, 500, 1e-9);
    CHECK(model.training_log.back().second < 0.1);
  }

  SUBCASE("zero iterations returns the uniform predictor") {
    const Eigen::MatrixXd x = test_util::random_matrix(gen, 5, 3);
    const Eigen::MatrixXd t = test_util::random_simplex_matrix(gen, 5, 4);
    const MaxEntModel model = fit(x, t, 0, 1e-8);
    const Eigen::MatrixXd p = predict(model, x);
    CHECK((p.array() - 0.25).abs().maxCoeff() <= 1e-15);
  }

  SUBCASE("training loss never increases") {
    const Eigen::MatrixXd x = test_util::random_matrix(gen, 30, 4);
    const Eigen::MatrixXd t = test_util::random_simplex_matrix(gen, 30, 3);
    const MaxEntModel model = fit(x, t, 300, 1e-10);
    for (std::size_t i = 1; i < model.training_log.size(); ++i)
      CHECK(model.training_log[i].second <= model.training_log[i - 1].second + 1e-15);
  }
}

TEST_CASE("predict") {
  std::mt19937_64 gen(11);
  MaxEntModel model;
  model.weights = test_util::random_matrix(gen, 3, 4);
  model.bias = test_util::random_matrix(gen, 4, 1).col(0);
  const Eigen::MatrixXd x = test_util::random_matrix(gen, 12, 3);

  SUBCASE("rows are strictly positive distributions") {
    const Eigen::MatrixXd p = predict(model, x);
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      CHECK(std::abs(p.row(i).sum() - 1.0) <= 1e-12);
      CHECK(p.row(i).minCoeff() > 0.0);
    }
  }

  SUBCASE("bias shift invariance") {
    MaxEntModel shifted = model;
    shifted.bias.array() += 3.7;
    const Eigen::MatrixXd p1 = predict(model, x);
    const Eigen::MatrixXd p2 = predict(shifted, x);
    CHECK((p1 - p2).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("raising one label's score raises its degree") {
    MaxEntModel bumped = model;
    bumped.bias[2] += 0.5;
    const Eigen::MatrixXd p1 = predict(model, x);
    const Eigen::MatrixXd p2 = predict(bumped, x);
    for (Eigen::Index i = 0; i < x.rows(); ++i) CHECK(p2(i, 2) > p1(i, 2));
  }

  SUBCASE("width mismatch") {
    CHECK_THROWS_AS(predict(model, test_util::random_matrix(gen, 4, 2)),
                    std::invalid_argument);
  }
}

TEST_CASE("loss and gradient") {
  std::mt19937_64 gen(17);

  SUBCASE("zero gradient when predictions equal targets") {
    MaxEntModel model;
    model.weights = Eigen::MatrixXd::Zero(3, 4);
    model.bias = Eigen::VectorXd::Zero(4);
    const Eigen::MatrixXd x = test_util::random_matrix(gen, 8, 3);
    const Eigen::MatrixXd t = Eigen::MatrixXd::Constant(8, 4, 0.25);
    const auto [loss, grad] = loss_and_gradient(model, x, t);
    CHECK(loss <= 1e-15);
    CHECK(grad.weights.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(grad.bias.cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("matches central finite differences to 1e-4 relative") {
    MaxEntModel model;
    model.weights = test_util::random_matrix(gen, 3, 4, 0.5);
    model.bias = test_util::random_matrix(gen, 4, 1, 0.5).col(0);
    const Eigen::MatrixXd x = test_util::random_matrix(gen, 5, 3);
    const Eigen::MatrixXd t = test_util::random_simplex_matrix(gen, 5, 4);
    const auto [loss, grad] = loss_and_gradient(model, x, t);
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) {
        MaxEntModel mp = model, mm = model;
        mp.weights(i, j) += h;
        mm.weights(i, j) -= h;
        const double fd =
            (mean_kl(t, predict(mp, x)) - mean_kl(t, predict(mm, x))) / (2.0 * h);
        CHECK(grad.weights(i, j) == doctest::Approx(fd).epsilon(1e-4));
      }
    for (Eigen::Index j = 0; j < 4; ++j) {
      MaxEntModel mp = model, mm = model;
      mp.bias[j] += h;
      mm.bias[j] -= h;
      const double fd = (mean_kl(t, predict(mp, x)) - mean_kl(t, predict(mm, x))) / (2.0 * h);
      CHECK(grad.bias[j] == doctest::Approx(fd).epsilon(1e-4));
    }
  }

  SUBCASE("loss is nonnegative") {
    MaxEntModel model;
    model.weights = test_util::random_matrix(gen, 3, 4);
    model.bias = test_util::random_matrix(gen, 4, 1).col(0);
    const Eigen::MatrixXd x = test_util::random_matrix(gen, 6, 3);
    const Eigen::MatrixXd t = test_util::random_simplex_matrix(gen, 6, 4);
    const auto [loss, grad] = loss_and_gradient(model, x, t);
    CHECK(loss >= 0.0);
  }
}

TEST_CASE("model serialization round trip") {
  std::mt19937_64 gen(23);
  MaxEntModel model;
  model.weights = test_util::random_matrix(gen, 4, 3);
  model.bias = test_util::random_matrix(gen, 3, 1).col(0);
  model.training_log.emplace_back(12, 0.125);

  const MaxEntModel back = model_from_json(model_to_json(model));
  CHECK(back.weights == model.weights);  // shortest-round-trip doubles
  CHECK(back.bias == model.bias);

  CHECK_THROWS(model_from_json("{\"d\": 2, \"m\": 2, \"weights\": [1], \"bias\": [0, 0]}"));
}
