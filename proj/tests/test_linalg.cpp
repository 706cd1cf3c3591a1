#include <cmath>
#include <random>

#include "doctest.h"
#include "linalg.hpp"

using namespace bsfem;

namespace {

std::vector<std::vector<double>> random_spd(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> b(n, std::vector<double>(n));
    for (auto& row : b)
        for (double& v : row) v = dist(rng);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) m[i][j] += b[k][i] * b[k][j];
            if (i == j) m[i][j] += 1.0;
        }
    return m;
}

SparseMatrix to_sparse(const std::vector<std::vector<double>>& dense) {
    const int n = static_cast<int>(dense.size());
    std::vector<std::tuple<int, int, double>> triplets;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (dense[i][j] != 0.0) triplets.emplace_back(i, j, dense[i][j]);
    return SparseMatrix::from_triplets(n, triplets);
}

std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
        x[r] = acc / a[r][r];
    }
    return x;
}

}  // namespace

TEST_CASE("csr from triplets") {
    SUBCASE("duplicates are summed") {
        const SparseMatrix m = SparseMatrix::from_triplets(1, {{0, 0, 1.0}, {0, 0, 2.0}});
        CHECK(m.values().size() == 1);
        CHECK(m.coeff(0, 0) == doctest::Approx(3.0));
    }
    SUBCASE("empty triplets give empty rows") {
        const SparseMatrix m = SparseMatrix::from_triplets(3, {});
        CHECK(m.dim() == 3);
        CHECK(m.values().empty());
        CHECK(m.row_offsets() == std::vector<int>{0, 0, 0, 0});
    }
    SUBCASE("order independence") {
        const std::vector<std::tuple<int, int, double>> sorted{
            {0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}, {1, 1, 4.0}};
        std::vector<std::tuple<int, int, double>> shuffled{
            {1, 1, 4.0}, {0, 1, 2.0}, {1, 0, 3.0}, {0, 0, 1.0}};
        const SparseMatrix a = SparseMatrix::from_triplets(2, sorted);
        const SparseMatrix b = SparseMatrix::from_triplets(2, shuffled);
        CHECK(a.column_indices() == b.column_indices());
        CHECK(a.values() == b.values());
    }
    SUBCASE("out of range index") {
        CHECK_THROWS_AS(SparseMatrix::from_triplets(2, {{0, 5, 1.0}}), Error);
    }
}

TEST_CASE("spmv") {
    SUBCASE("identity") {
        const SparseMatrix eye = SparseMatrix::from_triplets(3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
        const std::vector<double> x{3.0, -1.0, 2.0};
        CHECK(eye.multiply(x) == x);
    }
    SUBCASE("2x2 example") {
        const SparseMatrix m =
            SparseMatrix::from_triplets(2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
        const std::vector<double> y = m.multiply({1.0, 1.0});
        CHECK(y[0] == doctest::Approx(3.0));
        CHECK(y[1] == doctest::Approx(3.0));
    }
    SUBCASE("random 50x50 against a dense oracle") {
        std::mt19937 rng(4711);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        const int n = 50;
        std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
        std::uniform_int_distribution<int> idx(0, n - 1);
        for (int k = 0; k < 600; ++k) dense[idx(rng)][idx(rng)] += dist(rng);
        const SparseMatrix sparse = to_sparse(dense);
        std::vector<double> x(n);
        for (double& v : x) v = dist(rng);
        const std::vector<double> y = sparse.multiply(x);
        for (int i = 0; i < n; ++i) {
            double expected = 0.0;
            for (int j = 0; j < n; ++j) expected += dense[i][j] * x[j];
            CHECK(std::abs(y[i] - expected) <= 1e-13);
        }
    }
    SUBCASE("dimension mismatch") {
        const SparseMatrix eye = SparseMatrix::from_triplets(2, {{0, 0, 1.0}, {1, 1, 1.0}});
        CHECK_THROWS_AS(eye.multiply({1.0, 2.0, 3.0}), Error);
    }
}

TEST_CASE("conjugate gradient basics") {
    SUBCASE("identity converges in one iteration") {
        const SparseMatrix eye =
            SparseMatrix::from_triplets(3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
        const std::vector<double> b{1.0, -2.0, 0.5};
        const CgResult result = conjugate_gradient(eye, b);
        CHECK(result.converged);
        CHECK(result.iterations <= 1);
        for (int i = 0; i < 3; ++i) CHECK(result.x[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
    SUBCASE("2x2 direct-solve oracle") {
        const SparseMatrix m =
            SparseMatrix::from_triplets(2, {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}});
        const CgResult result = conjugate_gradient(m, {1.0, 2.0}, {.tol = 1e-14});
        CHECK(result.x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-10));
        CHECK(result.x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-10));
    }
    SUBCASE("iteration cap returns the best iterate with a flag") {
        std::mt19937 rng(1);
        const auto dense = random_spd(15, rng);
        const SparseMatrix sparse = to_sparse(dense);
        std::vector<double> b(15, 1.0);
        CgOptions options;
        options.max_iter = 2;
        options.tol = 1e-14;
        const CgResult result = conjugate_gradient(sparse, b, options);
        CHECK(!result.converged);
        CHECK(result.iterations == 2);
        CHECK(result.final_residual > 1e-14);
    }
    SUBCASE("indefinite matrix is rejected") {
        const SparseMatrix m = SparseMatrix::from_triplets(2, {{0, 0, -1.0}, {1, 1, 1.0}});
        CgOptions options;
        options.precond = Preconditioner::None;
        CHECK_THROWS_AS(conjugate_gradient(m, {1.0, 1.0}, options), Error);
    }
}

TEST_CASE("A-norm error decreases monotonically") {
    std::mt19937 rng(99);
    const int n = 20;
    const auto dense = random_spd(n, rng);
    const SparseMatrix sparse = to_sparse(dense);
    std::vector<double> b(n);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : b) v = dist(rng);
    const std::vector<double> exact = dense_solve(dense, b);

    auto a_norm_error = [&](const std::vector<double>& x) {
        std::vector<double> e(n);
        for (int i = 0; i < n; ++i) e[i] = x[i] - exact[i];
        const std::vector<double> ae = sparse.multiply(e);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += e[i] * ae[i];
        return std::sqrt(std::max(acc, 0.0));
    };

    std::vector<double> history;
    CgOptions options;
    options.tol = 1e-13;
    options.observer = [&](const std::vector<double>& x) { history.push_back(a_norm_error(x)); };
    const CgResult result = conjugate_gradient(sparse, b, options);
    CHECK(result.converged);
    REQUIRE(history.size() >= 2);
    for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1] + 1e-12);
}

TEST_CASE("solutions from different initial guesses coincide") {
    std::mt19937 rng(7);
    const int n = 30;
    const auto dense = random_spd(n, rng);
    const SparseMatrix sparse = to_sparse(dense);
    std::vector<double> b(n), guess(n);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : b) v = dist(rng);
    for (double& v : guess) v = dist(rng);

    CgOptions from_zero;
    from_zero.tol = 1e-12;
    const CgResult x0 = conjugate_gradient(sparse, b, from_zero);
    CgOptions from_random = from_zero;
    from_random.initial_guess = &guess;
    const CgResult x1 = conjugate_gradient(sparse, b, from_random);
    for (int i = 0; i < n; ++i) CHECK(std::abs(x0.x[i] - x1.x[i]) <= 1e-8);
}
