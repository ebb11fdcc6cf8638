#pragma once

// Sheaves on finite posets, sheaf morphisms, the cochain complexes they
// generate, and the chain maps induced by morphisms.
//
// Conventions used throughout: a sheaf assigns every element a free module
// of some dimension and every cover u < v a matrix F(v) -> F(u) (dims[u] x
// dims[v]); the complex is the normalized one built on strictly increasing
// chains, with the coordinate of a chain living at the module of its least
// vertex.

#include <map>
#include <string>
#include <vector>

#include "posheaf/linalg.hpp"
#include "posheaf/poset.hpp"

namespace psh {

struct Sheaf {
    Poset poset;
    std::vector<int> dims;                       // per element
    std::map<std::pair<int, int>, QMat> rest;    // per cover (u,v): F(v) -> F(u)
};

Sheaf constant_sheaf(const Poset& p, int dim);

struct CheckReport {
    bool ok = true;
    std::string message;
};

// Shape check plus full path independence: along every pair of cover paths
// with the same endpoints the composites agree. Verified edge by edge
// against a reference path system, so a failure names a concrete cover.
CheckReport validate_sheaf(const Sheaf& f);

// Composite restriction F(v) -> F(u) along any cover path (they all agree on
// validated sheaves); identity at u == v. Throws on incomparable pairs.
QMat restriction_along(const Sheaf& f, int u, int v);

// One product coordinate of a complex degree. Plain cochain complexes use
// `base` for the chain and leave `fib` empty; complexes assembled from a
// bundle use `base` for the chain downstairs and `fib` for the fiber chain.
struct Label {
    Chain base;
    Chain fib;
    int coord = 0;

    bool operator==(const Label& o) const
    {
        return base == o.base && fib == o.fib && coord == o.coord;
    }
};

struct Complex {
    std::vector<int> dims;                   // degree k = 0..top
    std::vector<QMat> d;                     // d[k]: degree k -> k+1, shape dim(k+1) x dim(k)
    std::vector<std::vector<Label>> labels;  // one label per coordinate

    int top() const { return static_cast<int>(dims.size()) - 1; }
    int dim(int k) const
    {
        return (k >= 0 && k < static_cast<int>(dims.size())) ? dims[k] : 0;
    }
    // Differential out of degree k with correct (possibly empty) shape.
    QMat dmat(int k) const
    {
        if (k >= 0 && k < static_cast<int>(d.size())) return d[k];
        return QMat(dim(k + 1), dim(k));
    }
};

CheckReport validate_complex(const Complex& c);  // d after d vanishes

Complex cochain_complex(const Poset& p, const Sheaf& f);

// Cohomology in every degree 0..top. The integral variant additionally
// reports torsion and requires all differential entries to be integers.
std::vector<CohomStep> complex_cohomology(const Complex& c);
std::vector<CohomStep> complex_cohomology_z(const Complex& c);
std::vector<CohomStep> sheaf_cohomology(const Sheaf& f);
std::vector<CohomStep> sheaf_cohomology_z(const Sheaf& f);

// A morphism source (P,F) -> target (Q,G): a monotone vertex map Q -> P
// running backwards and, for each x in Q, a component matrix
// F(vertex_map[x]) -> G(x), natural with respect to restrictions.
struct SheafMorphism {
    Sheaf source;
    Sheaf target;
    std::vector<int> vertex_map;    // size target.poset.n, into source.poset
    std::vector<QMat> components;   // per x in target: G.dims[x] x F.dims[vertex_map[x]]
};

SheafMorphism identity_morphism(const Sheaf& f);

// outer after inner: inner's target must match outer's source.
SheafMorphism compose(const SheafMorphism& outer, const SheafMorphism& inner);

CheckReport validate_morphism(const SheafMorphism& g);

// Per-degree matrices S^k(P,F) -> S^k(Q,G). The coordinate at a chain of Q
// reads the coordinate at its image chain through the component matrix of
// the least vertex; image chains with a repeated vertex contribute zero.
std::vector<QMat> induced_chain_map(const SheafMorphism& g);
std::vector<QMat> induced_chain_map(const SheafMorphism& g, const Complex& src_cx,
                                    const Complex& tgt_cx);

}  // namespace psh
