#include <doctest.h>
#include <mhilb/model.hpp>
#include <mhilb/errors.hpp>

#include <Eigen/Dense>
#include <vector>

using namespace mhilb;

TEST_CASE("discrete code enumerates tuples with the last variable fastest") {
    discrete_code code({2, 3});
    CHECK(code.dim() == 6);

    CHECK(code.encode({1, 1}) == 1);
    CHECK(code.encode({1, 2}) == 2);
    CHECK(code.encode({1, 3}) == 3);
    CHECK(code.encode({2, 1}) == 4);
    CHECK(code.encode({2, 2}) == 5);
    CHECK(code.encode({2, 3}) == 6);

    CHECK(code.decode(4) == std::vector<int>{2, 1});
    CHECK(code.decode(6) == std::vector<int>{2, 3});
}

TEST_CASE("discrete code round trip is exact") {
    discrete_code code({3, 2, 2});
    CHECK(code.dim() == 12);
    for (long long flat = 1; flat <= 12; ++flat) {
        auto tuple = code.decode(flat);
        CHECK(code.encode(tuple) == flat);
    }
}

TEST_CASE("discrete code rejects bad input") {
    CHECK_THROWS_AS(discrete_code({2, 0}), value_error);
    CHECK_THROWS_AS(discrete_code(std::vector<int>{}), value_error);

    discrete_code code({2, 3});
    CHECK_THROWS_AS(code.encode({0, 1}), index_out_of_range);
    CHECK_THROWS_AS(code.encode({2, 4}), index_out_of_range);
    CHECK_THROWS_AS(code.encode({1}), dimension_mismatch);
    CHECK_THROWS_AS(code.decode(0), index_out_of_range);
    CHECK_THROWS_AS(code.decode(7), index_out_of_range);
}

TEST_CASE("discrete code detects cardinality overflow") {
    std::vector<int> cards(4, 1 << 16);
    CHECK_THROWS_AS(discrete_code{cards}, overflow_error);
}

TEST_CASE("reduction keeps the first variable of a 2x2 code") {
    discrete_code code({2, 2});
    auto red = reduce(code, {1});

    Eigen::MatrixXd expected(2, 4);
    expected << 1, 1, 0, 0,
                0, 0, 1, 1;
    CHECK((red.matrix() - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK((red.gram_aat() - 2.0 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reduction of a 2x3 code onto its second variable gives the 3x6 selector") {
    discrete_code code({2, 3});
    auto red = reduce(code, {2});

    Eigen::MatrixXd expected(3, 6);
    expected << 1, 0, 0, 1, 0, 0,
                0, 1, 0, 0, 1, 0,
                0, 0, 1, 0, 0, 1;
    CHECK((red.matrix() - expected).cwiseAbs().maxCoeff() == 0.0);

    // each retained outcome collects d/s = 2 microstates, so the row
    // Gram is a scaled identity rather than the identity itself
    CHECK((red.gram_aat() - 2.0 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);

    // A^T A averages back onto the fibers
    Eigen::MatrixXd ata = red.gram_ata();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            double want = (i % 3 == j % 3) ? 1.0 : 0.0;
            CHECK(ata(i, j) == want);
        }
}

TEST_CASE("reduction rejects bad retained positions and dedups repeats") {
    discrete_code code({2, 3});
    CHECK_THROWS_AS(reduce(code, {}), empty_subset);
    CHECK_THROWS_AS(reduce(code, {3}), index_out_of_range);

    auto once = reduce(code, {1});
    auto twice = reduce(code, {1, 1});
    CHECK((once.matrix() - twice.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reduction matrix validation catches malformed selectors") {
    Eigen::MatrixXd a(2, 4);
    a << 1, 1, 0, 0,
         0, 0, 1, 1;
    CHECK_NOTHROW(reduction_matrix{a});

    Eigen::MatrixXd two_ones = a;
    two_ones(1, 0) = 1;
    CHECK_THROWS_AS(reduction_matrix{two_ones}, value_error);

    // every column selects a row, but the middle row selects nothing
    Eigen::MatrixXd empty_row(3, 4);
    empty_row << 1, 1, 0, 0,
                 0, 0, 0, 0,
                 0, 0, 1, 1;
    CHECK_THROWS_AS(reduction_matrix{empty_row}, rank_deficient);

    Eigen::MatrixXd fractional = a;
    fractional(0, 0) = 0.5;
    CHECK_THROWS_AS(reduction_matrix{fractional}, value_error);
}

TEST_CASE("component estimation recovers an exact linear model") {
    // y = 2 + 3x on x = 0..3, basis columns (1, x)
    cxmat basis(4, 2);
    cxvec y(4);
    for (int i = 0; i < 4; ++i) {
        double x = static_cast<double>(i);
        basis(i, 0) = 1.0;
        basis(i, 1) = x;
        y(i) = 2.0 + 3.0 * x;
    }
    auto est = estimate_components(basis, y);
    CHECK(std::abs(est.coefficients(0) - cxd(2.0, 0.0)) < 1e-12);
    CHECK(std::abs(est.coefficients(1) - cxd(3.0, 0.0)) < 1e-12);
    CHECK(est.residual_norm < 1e-12);
    CHECK(est.normal_residual < 1e-12);
}

TEST_CASE("component estimation reports least squares orthogonality") {
    // noisy overdetermined fit: the residual is visible but stays
    // orthogonal to the basis columns
    cxmat basis(5, 2);
    cxvec y(5);
    double xs[5] = {0.0, 0.5, 1.0, 1.5, 2.0};
    double noise[5] = {0.03, -0.08, 0.05, -0.02, 0.04};
    for (int i = 0; i < 5; ++i) {
        basis(i, 0) = 1.0;
        basis(i, 1) = xs[i];
        y(i) = 1.0 - 2.0 * xs[i] + noise[i];
    }
    auto est = estimate_components(basis, y);
    CHECK(est.residual_norm > 1e-3);
    CHECK(est.normal_residual < 1e-8 * y.norm());
}

TEST_CASE("component estimation rejects degenerate problems") {
    cxmat dup(4, 2);
    cxvec y(4);
    for (int i = 0; i < 4; ++i) {
        dup(i, 0) = 1.0;
        dup(i, 1) = 2.0;
        y(i) = 1.0;
    }
    CHECK_THROWS_AS(estimate_components(dup, y), rank_deficient);

    cxmat wide(2, 3);
    wide.setRandom();
    cxvec y2(2);
    y2.setRandom();
    CHECK_THROWS_AS(estimate_components(wide, y2), insufficient_samples);
}

TEST_CASE("model spec dimensions multiply and sum") {
    model_spec spec;
    spec.continuous.push_back({"x", 3});
    spec.continuous.push_back({"p", 2});
    spec.discrete.push_back({"s", 2});
    spec.discrete.push_back({"c", 3});
    CHECK(spec.continuous_dim() == 5);
    CHECK(spec.discrete_dim() == 6);
}
