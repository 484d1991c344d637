#include <catch_amalgamated.hpp>

#include <random>

#include <kbh/homology.hpp>
#include <kbh/model_io.hpp>
#include <kbh/sparse_matrix.hpp>

using namespace kbh;

namespace {

GaussianRational random_scalar(std::mt19937& rng, int bound = 5) {
    std::uniform_int_distribution<int> num(-bound, bound), den(1, bound);
    return GaussianRational(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
}

SparseMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, double density) {
    SparseMatrix m(rows, cols);
    std::bernoulli_distribution keep(density);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (keep(rng)) m.set(r, c, random_scalar(rng, 3));
    return m;
}

// Matrix of rank exactly k: a product of random full-rank-ish factors, with
// the rank confirmed through a triangular construction.
SparseMatrix rank_k_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, std::size_t k) {
    SparseMatrix left(rows, k), right(k, cols);
    for (std::size_t i = 0; i < k; ++i) {
        left.set(i, i, GaussianRational(1));
        right.set(i, i, GaussianRational(1));
        for (std::size_t r = i + 1; r < rows; ++r) left.set(r, i, random_scalar(rng, 2));
        for (std::size_t c = i + 1; c < cols; ++c) right.set(i, c, random_scalar(rng, 2));
    }
    return multiply(left, right);
}

}  // namespace

TEST_CASE("gaussian rationals are exact and canonical", "[scalar]") {
    GaussianRational a(mpq_class(1), mpq_class(2));
    GaussianRational b(mpq_class(3), mpq_class(-1));
    CHECK(a * b == GaussianRational(mpq_class(5), mpq_class(5)));
    CHECK((a / b) * b == a);
    CHECK(a * a.inverse() == GaussianRational(1));
    CHECK(GaussianRational(mpq_class(2, 4)) == GaussianRational(mpq_class(1, 2)));
    CHECK(GaussianRational(mpq_class(6, -4)).re().get_den() == 2);
    CHECK(GaussianRational::i() * GaussianRational::i() == GaussianRational(-1));
    CHECK(a.conj() == GaussianRational(mpq_class(1), mpq_class(-2)));
    CHECK_THROWS_AS(GaussianRational().inverse(), std::domain_error);
}

TEST_CASE("gaussian rational text form round-trips", "[scalar]") {
    for (const char* text : {"0", "3", "-3/2", "i", "-i", "2i", "1+2i", "-1/2-3/4i"}) {
        auto g = GaussianRational::parse(text);
        CHECK(g.str() == text);
        CHECK(GaussianRational::parse(g.str()) == g);
    }
    for (const char* bad : {"", "x", "1/0", "3/", "1+", "ii"}) CHECK_THROWS_AS(GaussianRational::parse(bad), std::invalid_argument);
}

TEST_CASE("a - a is the exact zero for random scalars", "[scalar][property]") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 500; ++trial) {
        auto a = random_scalar(rng, 50);
        auto diff = a - a;
        CHECK(diff.is_zero());
        CHECK(diff == GaussianRational());
        CHECK(diff.str() == "0");
    }
}

TEST_CASE("rank of trivial matrices", "[linalg]") {
    CHECK(rank(SparseMatrix()) == 0);
    CHECK(rank(SparseMatrix(0, 4)) == 0);
    CHECK(rank(SparseMatrix::identity(5)) == 5);
    CHECK(rank(SparseMatrix(3, 4)) == 0);
}

TEST_CASE("rank over Q(i) sees complex dependence", "[linalg]") {
    SparseMatrix m(2, 2);
    m.set(0, 0, GaussianRational(1));
    m.set(0, 1, GaussianRational::i());
    m.set(1, 0, GaussianRational::i());
    m.set(1, 1, GaussianRational(-1));
    CHECK(rank(m) == 1);
    auto ker = kernel_basis(m);
    REQUIRE(ker.size() == 1);
    for (const auto& x : m.apply(ker.front())) CHECK(x.is_zero());
}

TEST_CASE("kernel bases of trivial matrices", "[linalg]") {
    CHECK(kernel_basis(SparseMatrix::identity(3)).empty());
    CHECK(kernel_basis(SparseMatrix(2, 3)).size() == 3);
}

TEST_CASE("delbar from (0,1) to (0,2) forms of the Iwasawa model", "[linalg]") {
    LieModel m = builtin_model("iwasawa3");
    detail::BidegreeBasis basis(3);
    SparseMatrix db = detail::form_operator_matrix(basis, 0, 1, 0, 2, [&](const Monomial& mono) { return m.delbar(mono); });
    CHECK(db.rows() == 3);
    CHECK(db.cols() == 3);
    CHECK(rank(db) == 1);

    // Kernel spanned by wb^1 and wb^3: the basis vectors with zero image.
    auto ker = kernel_basis(db);
    REQUIRE(ker.size() == 2);
    const auto& cols = basis.by_weight[1];
    for (const auto& v : ker) {
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (cols[c] == bit(2)) CHECK(v[c].is_zero());
        for (const auto& x : db.apply(v)) CHECK(x.is_zero());
    }
}

TEST_CASE("rank plus nullity equals the column count", "[linalg][property]") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> size(0, 12);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = random_matrix(rng, static_cast<std::size_t>(size(rng)), static_cast<std::size_t>(size(rng)), 0.3);
        auto ker = kernel_basis(m);
        CHECK(rank(m) + ker.size() == m.cols());
        for (const auto& v : ker)
            for (const auto& x : m.apply(v)) CHECK(x.is_zero());
    }
}

TEST_CASE("rank equals rank of the transpose", "[linalg][property]") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> size(1, 14);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = random_matrix(rng, static_cast<std::size_t>(size(rng)), static_cast<std::size_t>(size(rng)), 0.25);
        CHECK(rank(m) == rank(m.transpose()));
    }
}

TEST_CASE("matrices built with a known rank report it", "[linalg][property]") {
    std::mt19937 rng(99);
    for (std::size_t k = 0; k <= 6; ++k) {
        auto m = rank_k_matrix(rng, 8, 9, k);
        CHECK(rank(m) == k);
        CHECK(kernel_basis(m).size() == 9 - k);
    }
}

TEST_CASE("sparse matrix storage never keeps zeros", "[linalg]") {
    SparseMatrix m(2, 2);
    m.add(0, 1, GaussianRational(3));
    m.add(0, 1, GaussianRational(-3));
    CHECK(m.nonzeros() == 0);
    m.set(1, 1, GaussianRational(2));
    m.set(1, 1, GaussianRational());
    CHECK(is_zero(m));
    CHECK_THROWS_AS(m.at(2, 0), StructuralError);
    CHECK_THROWS_AS(multiply(SparseMatrix(2, 3), SparseMatrix(2, 3)), StructuralError);
}
