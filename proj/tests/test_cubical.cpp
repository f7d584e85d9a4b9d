#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "koszulkit/cubical.hpp"

#include <random>

using namespace kk;

namespace {

void require_ok(const CubeReport& r) {
    std::string msg = r.name;
    for (auto& w : r.witnesses) msg += "\n  " + w.where + " : " + w.residue;
    CHECK_MESSAGE(r.ok, msg);
    CHECK(r.cases > 0);
}

}  // namespace

TEST_CASE("low-dimensional boundaries") {
    CHECK(cube_boundary(chain_of(basic_cube("s", 0))).is_zero());
    CHECK(chain_str(cube_boundary(chain_of(basic_cube("s", 1)))) == "s[1] - s[0]");
    CHECK(chain_str(cube_boundary(chain_of(basic_cube("s", 2)))) == "s[1,y1] - s[0,y1] - s[y1,1] + s[y1,0]");
    auto f = face(face(basic_cube("s", 3), 2, 1), 0, 0);
    CHECK(cube_str(f) == "s[0,y1,1]");
}

TEST_CASE("cubical identities for faces") {
    // d_i^e d_j^d = d_{j-1}^d d_i^e for i < j
    for (int n = 2; n <= 4; ++n) {
        auto c = product_cube({"s", "t"}, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int e : {0, 1})
                    for (int d : {0, 1}) CHECK(face(face(c, j, d), i, e) == face(face(c, i, e), j - 1, d));
    }
}

TEST_CASE("degeneracies") {
    auto c = degeneracy(basic_cube("s", 2), 1);
    CHECK(c.k == 3);
    CHECK(is_degenerate(c));
    CHECK(!is_degenerate(basic_cube("s", 2)));
    CHECK(face(c, 1, 0) == face(c, 1, 1));
    require_ok(check_degenerate_subcomplex(3));
}

TEST_CASE("boundary squares to zero and the cross product is a chain map") {
    require_ok(check_boundary_squared(4));
    require_ok(check_cross_leibniz(4));
}

TEST_CASE("Serre diagonal on small cubes") {
    auto x = chain_of(product_cube({"s", "t"}, 0));
    CHECK(chain_str(serre_diagonal(x, 0, 1)) == "s (x) t");
    auto y = chain_of(product_cube({"s", "t"}, 1));
    CHECK(chain_str(serre_diagonal(y, 0, 1)) == "s[0] (x) t + s (x) t[1]");
    // J = {2}, J' = {1} is an odd permutation
    auto z = serre_diagonal(chain_of(product_cube({"s", "t"}, 2)), 0, 1);
    CHECK(z.terms().size() == 4);
    CubeTensor odd{Cube{1, {{CubePiece{"s", CubeOp{1, {CubeOp::Zero, 0}}}}}}, Cube{1, {{CubePiece{"t", CubeOp{1, {0, CubeOp::One}}}}}}};
    CHECK(z.terms().at(odd) == Scalar(Field::Q(), -1));
}

TEST_CASE("Serre diagonal identities up to dimension 3") {
    require_ok(check_serre_chain_map(3));
    require_ok(check_serre_associative(3));
    require_ok(check_serre_product(3));
}

TEST_CASE("Serre diagonal is a chain map on random chains") {
    std::mt19937_64 rng(11);
    Field q = Field::Q();
    for (int it = 0; it < 30; ++it) {
        // random combination of faces and degeneracies of product cubes
        CubeChain x(q);
        for (int j = 0; j < 3; ++j) {
            int n = 1 + (int)(rng() % 4);
            Cube c = product_cube({"s", "t"}, n);
            int cuts = (int)(rng() % 2);
            for (int k = 0; k < cuts && c.k > 0; ++k) c = face(c, (int)(rng() % c.k), (int)(rng() % 2));
            if (rng() % 4 == 0) c = degeneracy(c, (int)(rng() % (c.k + 1)));
            if (is_degenerate(c)) continue;
            x.add(CubeTensor{c}, Scalar(q, (long)(rng() % 5) - 2));
        }
        auto lhs = cube_boundary(serre_diagonal(x, 0, 1));
        auto rhs = serre_diagonal(cube_boundary(x), 0, 1);
        CHECK(chain_str(lhs - rhs) == "0");
    }
}
