#include "doctest.h"

#include "posheaf/io.hpp"
#include "posheaf/traversal.hpp"

#include <vector>

using namespace psh;

namespace {

long binomial(int n, int k)
{
    long acc = 1;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
}

int label_index(const Complex& c, int degree, const Chain& base, const Chain& fib, int coord)
{
    const auto& ls = c.labels[degree];
    for (size_t i = 0; i < ls.size(); ++i)
        if (ls[i].base == base && ls[i].fib == fib && ls[i].coord == coord)
            return static_cast<int>(i);
    return -1;
}

struct PhiSetup {
    TotalSheaf ts;
    Complex s, t;
    std::vector<QMat> m;
};

PhiSetup phi_of(const Bundle& b)
{
    PhiSetup out{total_sheaf(b), {}, {}, {}};
    out.s = cochain_complex(out.ts.sheaf.poset, out.ts.sheaf);
    out.t = total_complex(build_bicomplex(b));
    out.m = phi(b, out.ts, out.s, out.t);
    return out;
}

void check_chain_map(const PhiSetup& ps)
{
    int top = std::max(ps.s.top(), ps.t.top());
    for (int n = 0; n < top; ++n) {
        QMat fn = (n < static_cast<int>(ps.m.size())) ? ps.m[n] : QMat(ps.t.dim(n), ps.s.dim(n));
        QMat fn1 =
            (n + 1 < static_cast<int>(ps.m.size())) ? ps.m[n + 1] : QMat(ps.t.dim(n + 1), ps.s.dim(n + 1));
        CHECK(ps.t.dmat(n) * fn == fn1 * ps.s.dmat(n));
    }
}

}  // namespace

TEST_CASE("step words are counted by binomials and ordered lexicographically")
{
    for (int p = 0; p <= 4; ++p)
        for (int q = 0; q <= 4; ++q) {
            auto words = step_words(p, q);
            CHECK(static_cast<long>(words.size()) == binomial(p + q, p));
            for (size_t i = 0; i + 1 < words.size(); ++i) CHECK(words[i] < words[i + 1]);
            for (const auto& w : words) {
                CHECK(static_cast<int>(w.size()) == p + q);
                int rights = 0, ups = 0;
                for (int step : w) (step == 0 ? rights : ups)++;
                CHECK(rights == p);
                CHECK(ups == q);
            }
            if (p > 0 && q > 0) {
                std::vector<int> first(p, 0), last(q, 1);
                first.insert(first.end(), q, 1);
                last.insert(last.end(), p, 0);
                CHECK(words.front() == first);
                CHECK(words.back() == last);
            }
        }
}

TEST_CASE("traversal weight counts squares right of the up-steps")
{
    CHECK(traversal_weight({0, 0, 1}, 2) == 0);
    CHECK(traversal_weight({1, 0, 0}, 2) == 2);
    CHECK(traversal_weight({0, 1, 0, 1}, 2) == 1);
    CHECK(traversal_weight({}, 0) == 0);
}

TEST_CASE("iota is the ceiling of half")
{
    std::vector<int> want = {0, 1, 1, 2, 2, 3, 3};
    for (int n = 0; n < static_cast<int>(want.size()); ++n) CHECK(iota(n) == want[n]);
}

TEST_CASE("traversal grid rows are fiber transports")
{
    Bundle b = collapse_bundle(2);
    auto grid = traversal_grid(b, {0, 1}, {0, 1});
    REQUIRE(grid.size() == 2);
    CHECK(grid[0] == std::vector<int>({0, 1}));
    CHECK(grid[1] == std::vector<int>({0, 0}));
}

TEST_CASE("comparison map over a point base is the signed identity")
{
    Poset pt = chain_poset(1);
    Poset circle = validate_poset({"a", "b", "c", "d"}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
    Bundle b = constant_bundle(pt, constant_sheaf(circle, 2));
    PhiSetup ps = phi_of(b);
    for (int n = 0; n <= ps.t.top(); ++n) {
        REQUIRE(ps.s.dim(n) == ps.t.dim(n));
        QMat want = QMat::identity(ps.t.dim(n));
        if (iota(n) % 2 == 1) want = -want;
        CHECK(ps.m[n] == want);
    }
}

TEST_CASE("comparison map of the one-step collapse, frozen")
{
    Bundle b = collapse_bundle(1);
    PhiSetup ps = phi_of(b);
    CHECK(ps.s.dims == std::vector<int>({2, 1}));
    CHECK(ps.t.dims == std::vector<int>({2, 1}));
    CHECK(ps.m[0] == QMat::identity(2));
    CHECK(ps.m[1] == QMat::identity(1));
    check_chain_map(ps);
}

TEST_CASE("comparison map of the two-step collapse, frozen")
{
    Bundle b = collapse_bundle(2);
    PhiSetup ps = phi_of(b);
    REQUIRE(ps.s.dims == std::vector<int>({3, 3, 1}));
    REQUIRE(ps.t.dims == std::vector<int>({3, 3, 1}));
    check_chain_map(ps);

    CHECK(ps.m[0] == QMat::identity(3));

    // Degree one: the fiber edge coordinate reads the glued edge (0,1) with
    // a minus sign, the two base-direction coordinates read (0,2) and (1,2)
    // through the transports, plain.
    int r_edge = label_index(ps.t, 1, {0}, {0, 1}, 0);
    int r_low = label_index(ps.t, 1, {0, 1}, {0}, 0);
    int r_high = label_index(ps.t, 1, {0, 1}, {1}, 0);
    int c01 = label_index(ps.s, 1, {0, 1}, {}, 0);
    int c02 = label_index(ps.s, 1, {0, 2}, {}, 0);
    int c12 = label_index(ps.s, 1, {1, 2}, {}, 0);
    REQUIRE(r_edge >= 0);
    REQUIRE(r_low >= 0);
    REQUIRE(r_high >= 0);
    REQUIRE(c01 >= 0);
    REQUIRE(c02 >= 0);
    REQUIRE(c12 >= 0);
    QMat want1(3, 3);
    want1(r_edge, c01) = -1;
    want1(r_low, c02) = 1;
    want1(r_high, c12) = 1;
    CHECK(ps.m[1] == want1);

    // Degree two: one lattice path degenerates, the other carries sign
    // (-1)^(iota(1) + 1) = +1.
    QMat want2(1, 1);
    want2(0, 0) = 1;
    CHECK(ps.m[2] == want2);
}

TEST_CASE("comparison map commutes with the differentials on generated bundles")
{
    check_chain_map(phi_of(collapse_bundle(3)));
    check_chain_map(phi_of(sheaf_as_bundle(cube_sheaf())));
    Poset circle = validate_poset({"a", "b", "c", "d"}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
    check_chain_map(phi_of(constant_bundle(chain_poset(2), constant_sheaf(circle, 1))));
    for (uint64_t seed : {8u, 19u, 33u, 47u, 61u}) {
        Poset base = random_poset(4, 0.45, seed);
        check_chain_map(phi_of(random_bundle(base, 3, 2, seed + 500)));
    }
}
