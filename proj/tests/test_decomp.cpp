#include "doctest.h"

#include "posheaf/decomp.hpp"
#include "posheaf/io.hpp"

#include <algorithm>
#include <string>
#include <vector>

using namespace psh;

namespace {

Poset circle_poset()
{
    return validate_poset({"a", "b", "c", "d"}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
}

std::vector<int> betti_of(const Complex& c)
{
    std::vector<int> out;
    for (const CohomStep& h : complex_cohomology(c)) out.push_back(h.betti);
    return out;
}

int rank_of(const QMat& m) { return static_cast<int>(rref(m).pivot_cols.size()); }

bool touches(const Chain& c, const std::vector<int>& members)
{
    for (int v : c)
        if (std::find(members.begin(), members.end(), v) != members.end()) return true;
    return false;
}

// Short-exactness of 0 -> sub -> whole -> quot -> 0 in every degree, checked
// from the outside: injectivity, surjectivity, zero composite, and dimension
// count force image = kernel in the middle.
void check_split_exact(const Split& sp)
{
    int top = sp.whole.top();
    CHECK(chain_map_check(sp.eps).ok);
    CHECK(chain_map_check(sp.rho).ok);
    for (int n = 0; n <= top; ++n) {
        CHECK(sp.whole.dim(n) == sp.sub.dim(n) + sp.quot.dim(n));
        CHECK(sp.quot.dim(n) == sp.part_up.dim(n) + sp.part_rest.dim(n));
        CHECK(rank_of(sp.eps.fmat(n)) == sp.sub.dim(n));
        CHECK(rank_of(sp.rho.fmat(n)) == sp.quot.dim(n));
        CHECK((sp.rho.fmat(n) * sp.eps.fmat(n)).is_zero());
    }
}

}  // namespace

TEST_CASE("cone of the identity is acyclic")
{
    Complex c = cochain_complex(circle_poset(), constant_sheaf(circle_poset(), 2));
    ChainMap id = identity_chain_map(c);
    Complex cone = mapping_cone(id);
    CHECK(validate_complex(cone).ok);
    for (int n = 0; n <= cone.top(); ++n) CHECK(cone.dim(n) == c.dim(n) + c.dim(n - 1));
    ConeCertificate cert = is_quasi_iso(id);
    CHECK(cert.quasi_iso);
    for (int v : cert.cone_betti) CHECK(v == 0);
}

TEST_CASE("cone of the zero map stacks both cohomologies")
{
    Complex c = cochain_complex(circle_poset(), constant_sheaf(circle_poset(), 1));
    ChainMap zero{c, c, {}};
    for (int n = 0; n <= c.top(); ++n) zero.f.push_back(QMat(c.dim(n), c.dim(n)));
    REQUIRE(chain_map_check(zero).ok);
    ConeCertificate cert = is_quasi_iso(zero);
    CHECK_FALSE(cert.quasi_iso);
    CHECK(cert.cone_betti == std::vector<int>({1, 2, 1}));
}

TEST_CASE("a nonzero scalar map is a quasi-isomorphism")
{
    Poset pt = chain_poset(1);
    Complex c = cochain_complex(pt, constant_sheaf(pt, 1));
    QMat two(1, 1);
    two(0, 0) = 2;
    ChainMap g{c, c, {two}};
    ConeCertificate cert = is_quasi_iso(g);
    CHECK(cert.quasi_iso);
    CHECK(cert.cone_betti == std::vector<int>({0, 0}));
}

TEST_CASE("broken squares are caught and refused")
{
    Poset two = chain_poset(2);
    Complex c = cochain_complex(two, constant_sheaf(two, 1));
    ChainMap g = identity_chain_map(c);
    g.f[0](0, 0) = 2;
    CheckReport r = chain_map_check(g);
    CHECK_FALSE(r.ok);
    CHECK(r.message.find("degree 0") != std::string::npos);
    CHECK_THROWS_AS(is_quasi_iso(g), Error);
}

TEST_CASE("shifting up moves dimensions, labels, and cohomology by one")
{
    Complex c = cochain_complex(circle_poset(), constant_sheaf(circle_poset(), 1));
    Complex s = shift_up(c);
    CHECK(s.dims == std::vector<int>({0, 4, 4}));
    CHECK(s.labels[1] == c.labels[0]);
    CHECK(validate_complex(s).ok);
    CHECK(betti_of(s) == std::vector<int>({0, 1, 1}));
}

TEST_CASE("direct sums add dimensions and cohomology")
{
    Complex a = cochain_complex(circle_poset(), constant_sheaf(circle_poset(), 1));
    Poset two = chain_poset(2);
    Complex b = cochain_complex(two, constant_sheaf(two, 1));
    Complex d = direct_sum(a, b);
    CHECK(validate_complex(d).ok);
    for (int n = 0; n <= d.top(); ++n) CHECK(d.dim(n) == a.dim(n) + b.dim(n));
    CHECK(betti_of(d) == std::vector<int>({2, 1}));
}

TEST_CASE("splitting the total complex at an admissible vertex is short exact")
{
    Bundle b = random_bundle(boolean_lattice(2), 3, 2, 7);
    REQUIRE(validate_bundle(b).ok);
    Split sp = split_total(b, 1);
    CHECK(sp.members_up == std::vector<int>({1, 3}));
    CHECK(sp.members_rest == std::vector<int>({0, 2}));
    CHECK(sp.whole.dims == total_complex(build_bicomplex(b)).dims);
    check_split_exact(sp);

    // Kernel coordinates are exactly the mixed ones; the pure coordinate
    // counts match the two quotient factors, which are the total complexes
    // of the restricted bundles.
    CHECK(sp.part_up.dims == total_complex(build_bicomplex(restrict_bundle(b, sp.members_up))).dims);
    CHECK(sp.part_rest.dims ==
          total_complex(build_bicomplex(restrict_bundle(b, sp.members_rest))).dims);
    for (int n = 0; n <= sp.whole.top(); ++n) {
        int pure_up = 0, pure_rest = 0, mixed = 0;
        for (const Label& l : sp.whole.labels[n]) {
            bool tu = touches(l.base, sp.members_up);
            bool tr = touches(l.base, sp.members_rest);
            if (tu && tr)
                ++mixed;
            else if (tu)
                ++pure_up;
            else
                ++pure_rest;
        }
        CHECK(mixed == sp.sub.dim(n));
        CHECK(pure_up == sp.part_up.dim(n));
        CHECK(pure_rest == sp.part_rest.dim(n));
        for (int i = 0; i < sp.sub.dim(n); ++i) {
            const Label& l = sp.whole.labels[n][sp.sub_index[n][i]];
            CHECK(touches(l.base, sp.members_up));
            CHECK(touches(l.base, sp.members_rest));
        }
    }
}

TEST_CASE("splitting the glued cochain complex at an admissible vertex is short exact")
{
    Bundle b = random_bundle(boolean_lattice(2), 3, 2, 12);
    REQUIRE(validate_bundle(b).ok);
    TotalSheaf ts = total_sheaf(b);
    Split sp = split_cochain(b, 1);
    CHECK(sp.whole.dims == cochain_complex(ts.sheaf.poset, ts.sheaf).dims);
    check_split_exact(sp);

    // Membership of a total-poset chain is read through the projection to
    // the base.
    for (int n = 0; n <= sp.whole.top(); ++n)
        for (int i = 0; i < sp.sub.dim(n); ++i) {
            const Label& l = sp.whole.labels[n][sp.sub_index[n][i]];
            Chain below;
            for (int g : l.base) below.push_back(ts.pi[g]);
            CHECK(touches(below, sp.members_up));
            CHECK(touches(below, sp.members_rest));
        }
}

TEST_CASE("the alpha maps certify over the boolean square")
{
    std::vector<Bundle> cases = {
        constant_bundle(boolean_lattice(2), constant_sheaf(chain_poset(2), 1)),
        constant_bundle(boolean_lattice(2), constant_sheaf(circle_poset(), 1)),
        random_bundle(boolean_lattice(2), 3, 2, 3),
        random_bundle(boolean_lattice(2), 3, 2, 21),
    };
    for (const Bundle& b : cases) {
        CertifiedMap a1 = alpha1(b, 1);
        CHECK(a1.cert.quasi_iso);
        CHECK(chain_map_check(a1.map).ok);
        CHECK(a1.map.source.dim(0) == 0);
        CHECK(a1.map.target.dims == split_total(b, 1).sub.dims);

        CertifiedMap a2 = alpha2(b, 1);
        CHECK(a2.cert.quasi_iso);
        CHECK(chain_map_check(a2.map).ok);
        CHECK(a2.map.source.dim(0) == 0);
        CHECK(a2.map.target.dims == split_cochain(b, 1).sub.dims);
    }
}

TEST_CASE("the constant comparison map certifies over pointed bases")
{
    Poset circle = circle_poset();
    for (const Poset& base : {boolean_lattice(2), chain_poset(3)}) {
        Bundle b = constant_bundle(base, constant_sheaf(circle, 1));
        CertifiedMap ac = alpha_const(b);
        CHECK(ac.cert.quasi_iso);
        CHECK(chain_map_check(ac.map).ok);
        CHECK(ac.map.source.dims == cochain_complex(circle, constant_sheaf(circle, 1)).dims);
    }
}

TEST_CASE("long exact sequences and ladders close on the collapse family")
{
    for (int k = 1; k <= 3; ++k) {
        Bundle b = collapse_bundle(k);
        for (SesKind kind : {SesKind::total, SesKind::cochain}) {
            LesReport rep = les_exactness(b, 1, kind);
            CHECK(rep.ok);
            CHECK_FALSE(rep.slots.empty());
            for (const LesSlot& s : rep.slots) {
                CHECK(s.ok);
                bool known = s.at == "whole" || s.at == "quotient" || s.at == "complement";
                CHECK(known);
            }
        }
        LadderReport lad = ladder_commutes(b, 1);
        CHECK(lad.ok);
        CHECK(lad.eps_square);
        CHECK(lad.rho_square);
        CHECK(lad.claim_square);
    }
}

TEST_CASE("long exact sequences and ladders close on random square bundles")
{
    for (uint64_t seed : {5u, 14u, 27u}) {
        Bundle b = random_bundle(boolean_lattice(2), 3, 2, seed);
        CHECK(les_exactness(b, 1, SesKind::total).ok);
        CHECK(les_exactness(b, 1, SesKind::cochain).ok);
        CHECK(ladder_commutes(b, 1).ok);
    }
}

TEST_CASE("constant bundles are recognized by fibers and transports")
{
    CHECK(is_constant_bundle(constant_bundle(boolean_lattice(2), constant_sheaf(chain_poset(2), 1))));
    CHECK_FALSE(is_constant_bundle(collapse_bundle(2)));

    // Equal fibers but a non-identity transport matrix.
    Poset pt = chain_poset(1);
    Bundle b;
    b.base = chain_poset(2);
    b.fibers = {constant_sheaf(pt, 1), constant_sheaf(pt, 1)};
    QMat two(1, 1);
    two(0, 0) = 2;
    b.arrows[{0, 1}] = {{0}, {two}};
    REQUIRE(validate_bundle(b).ok);
    CHECK_FALSE(is_constant_bundle(b));
}

TEST_CASE("certificate tree over the boolean square")
{
    Bundle b = constant_bundle(boolean_lattice(2), constant_sheaf(chain_poset(2), 1));
    auto cert = verify_main_theorem(b);
    REQUIRE(cert);
    CHECK(cert->ok);
    CHECK(cert->nodes() == 7);
    CHECK_FALSE(cert->leaf);
    CHECK(cert->witness == b.base.names[1]);
    CHECK(cert->members.size() == 4);
    CHECK(cert->phi_ok);
    CHECK(cert->e2_ok);
    CHECK(cert->conv_ok);
    CHECK(cert->ladder_ok);
    CHECK(cert->alpha1_ok);
    CHECK(cert->alpha2_ok);
    CHECK(cert->les_total_ok);
    CHECK(cert->les_cochain_ok);
    for (int v : cert->cone_betti) CHECK(v == 0);
    CHECK(cert->alpha_const_checked);
    CHECK(cert->alpha_const_ok);
    REQUIRE(cert->up);
    REQUIRE(cert->rest);
    CHECK(cert->up->members == std::vector<std::string>({b.base.names[1], b.base.names[3]}));
    CHECK(cert->rest->members == std::vector<std::string>({b.base.names[0], b.base.names[2]}));
    REQUIRE(cert->up->up);
    CHECK(cert->up->up->leaf);
    CHECK(cert->up->up->phi_ok);
    CHECK(cert->up->up->ok);
}

TEST_CASE("certificate tree over the collapse family and random bases")
{
    for (int k = 1; k <= 4; ++k) {
        auto cert = verify_main_theorem(collapse_bundle(k));
        REQUIRE(cert);
        CHECK(cert->ok);
        if (k == 2) CHECK(cert->nodes() == 3);
    }
    for (uint64_t seed : {2u, 9u}) {
        Poset base = random_admissible_base(4, seed);
        Bundle b = random_bundle(base, 2, 2, seed + 100);
        auto cert = verify_main_theorem(b);
        REQUIRE(cert);
        CHECK(cert->ok);
    }
}

TEST_CASE("certificates over a singleton base are signed-identity leaves")
{
    Bundle b = constant_bundle(chain_poset(1), constant_sheaf(circle_poset(), 2));
    auto cert = verify_main_theorem(b);
    REQUIRE(cert);
    CHECK(cert->leaf);
    CHECK(cert->ok);
    CHECK(cert->phi_ok);
    CHECK(cert->nodes() == 1);
    CHECK(cert->members.size() == 1);
}

TEST_CASE("bases that are not recursively admissible are refused")
{
    Poset antichain = validate_poset({"a", "b"}, {});
    Bundle b = constant_bundle(antichain, constant_sheaf(chain_poset(1), 1));
    bool threw = false;
    try {
        verify_main_theorem(b);
    } catch (const Error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("not recursively admissible") != std::string::npos);
    }
    CHECK(threw);
}
