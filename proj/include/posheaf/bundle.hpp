#pragma once

// Bundles of sheaves over a base poset, transport along the base, gluing
// into a total sheaf, bundle restriction, and the two sheaves a bundle
// induces on its base (degreewise cochains of the fibers, and their
// cohomology).
//
// A bundle arrow for a base cover x < y carries a monotone vertex map
// E_x -> E_y pointing forward and one matrix per u in E_x pulling stalks
// backward: F_y(f(u)) -> F_x(u).

#include <map>
#include <vector>

#include "posheaf/poset.hpp"
#include "posheaf/sheaf.hpp"

namespace psh {

struct BundleArrow {
    std::vector<int> f;       // vertex map E_x -> E_y, fiber-local ids
    std::vector<QMat> m;      // per u in E_x: F_x.dims[u] x F_y.dims[f[u]]
};

struct Bundle {
    Poset base;
    std::vector<Sheaf> fibers;                          // per base element
    std::map<std::pair<int, int>, BundleArrow> arrows;  // per base cover
};

Bundle constant_bundle(const Poset& base, const Sheaf& fiber);

// A sheaf on P, seen as the bundle over P whose fibers are single points
// carrying the stalks and whose arrow matrices are the restrictions. Gluing
// it back gives a total sheaf isomorphic to the input.
Bundle sheaf_as_bundle(const Sheaf& f);

// Shapes, per-arrow naturality, and path independence of both vertex maps
// and matrix families over every base diamond.
CheckReport validate_bundle(const Bundle& b);

// Composite arrow datum along any cover path from x to y; identity at
// x == y. Throws on incomparable pairs.
BundleArrow transport(const Bundle& b, int x, int y);

// The arrow datum packaged as a morphism from the fiber over y to the fiber
// over x (vertex map runs E_x -> E_y, components pull back).
SheafMorphism arrow_morphism(const Bundle& b, int x, int y);

struct TotalSheaf {
    Sheaf sheaf;              // the glued poset E with its sheaf
    std::vector<int> offset;  // per base element, global id of its fiber's first element
    std::vector<int> pi;      // global id -> base element
    std::vector<int> local;   // global id -> id inside its fiber

    int global_id(int base, int loc) const { return offset[base] + loc; }
};

// Glues the fibers: u <= v in E iff the bases compare and transporting u
// into v's fiber lands below v; restrictions compose the fiber restriction
// first, then the transport matrix.
TotalSheaf total_sheaf(const Bundle& b);

// Bundle over the induced subposet on `members` (base ids); arrows along
// induced covers come from transport.
Bundle restrict_bundle(const Bundle& b, const std::vector<int>& members);

// Sheaf on the base whose stalk at x is the degree-q cochain module of the
// fiber over x, with restrictions the induced chain maps of the arrows.
Sheaf q_cochain_sheaf(const Bundle& b, int q);

// Sheaf on the base whose stalk at x is the degree-q cohomology of the fiber
// over x. Restriction matrices are computed by pushing the deterministic
// cocycle representatives through the induced chain maps and re-expressing
// them in the target representatives.
Sheaf fib_cohomology_sheaf(const Bundle& b, int q);

}  // namespace psh
