#pragma once

// Decomposition machinery over an admissible vertex x of the base: the
// coordinate projections onto the sub-bundles over the up-set of a vertex and
// its complement,
// the kernel subcomplexes of mixed coordinates, the comparison maps alpha,
// alpha1, alpha2, mapping-cone certification, long-exact-sequence checks,
// and the recursive certificate for the main gluing theorem.

#include <memory>
#include <string>
#include <vector>

#include "posheaf/bicomplex.hpp"
#include "posheaf/bundle.hpp"
#include "posheaf/traversal.hpp"

namespace psh {

struct ChainMap {
    Complex source;
    Complex target;
    std::vector<QMat> f;  // degree n: target.dim(n) x source.dim(n)

    QMat fmat(int n) const
    {
        if (n >= 0 && n < static_cast<int>(f.size())) return f[n];
        return QMat(target.dim(n), source.dim(n));
    }
};

// Commutation with the differentials, exact, every degree.
CheckReport chain_map_check(const ChainMap& g);

ChainMap identity_chain_map(const Complex& c);
ChainMap compose(const ChainMap& outer, const ChainMap& inner);

// Cone of g, shifted down by one so it stays non-negatively graded: degree n
// is source^n + target^{n-1}, with differential [[-d_source, 0], [f, d_target]].
// The shift leaves cohomology dimensions unchanged, so g is a
// quasi-isomorphism exactly when this complex is acyclic.
Complex mapping_cone(const ChainMap& g);

struct ConeCertificate {
    bool quasi_iso = false;
    std::vector<int> cone_betti;  // per degree of the cone
};

ConeCertificate is_quasi_iso(const ChainMap& g);

// Same complex one degree up: degree n of the result is degree n-1 of the
// input, with the same differential matrices. Used to present maps that
// raise degree by one as plain chain maps.
Complex shift_up(const Complex& c);

Complex direct_sum(const Complex& a, const Complex& b);

// A short exact sequence of complexes realized by coordinate matrices:
// 0 -> sub -(eps)-> whole -(rho)-> quot -> 0. `quot` is the direct sum of
// the pure pieces over the up-set (first block) and over the complement.
struct Split {
    std::vector<int> members_up;    // up-set of the split vertex, parent base ids, sorted
    std::vector<int> members_rest;  // complement, sorted
    Complex whole, sub, quot;
    Complex part_up, part_rest;     // the two pure factors of quot, in order
    std::vector<std::vector<int>> sub_index;  // per degree: whole index of each sub coordinate
    ChainMap eps;  // sub -> whole, coordinate inclusion
    ChainMap rho;  // whole -> quot, coordinate projection
};

// Splits the total complex of the double complex by where the base chain of
// each coordinate lives. Mixed coordinates form the kernel subcomplex.
Split split_total(const Bundle& b, int x);

// Same for the cochain complex of the glued total sheaf, splitting by where
// the chains of the total poset live.
Split split_cochain(const Bundle& b, int x);

bool is_constant_bundle(const Bundle& b);

// Constant bundle over a base with a least element: the fiber cochain
// complex maps into the total complex by placing u|_tau at every length-zero
// base coordinate with sign (-1)^(ceil(n/2)). Quasi-isomorphism certificate
// attached.
struct CertifiedMap {
    ChainMap map;
    ConeCertificate cert;
};

CertifiedMap alpha_const(const Bundle& b);

// Comparison map into the mixed subcomplex of the total complex: a degree-n
// mixed coordinate whose base chain crosses into the up-set at the last step reads
// the coordinate over the truncated base chain with sign (-1)^q. Source is
// the shifted total complex over the complement.
CertifiedMap alpha1(const Bundle& b, int x);

// Same story one level down: a mixed total-poset chain crossing fibers at
// the last step reads the truncated chain, sign +1. Source is the shifted
// cochain complex over the complement. Asserts the glued-minimum property
// of every fiber element over the complement before construction.
CertifiedMap alpha2(const Bundle& b, int x);

enum class SesKind { total, cochain };

struct LesSlot {
    int n = 0;
    std::string at;  // which space of the sequence the slot sits at
    bool ok = true;
};

struct LesReport {
    bool ok = true;
    std::vector<LesSlot> slots;
};

// Assembles the long exact cohomology sequence of the split, with the
// connecting map computed by the snake construction and the mixed-complex
// cohomology replaced through alpha1 (total) or alpha2 (cochain), then
// checks image = kernel at every slot.
LesReport les_exactness(const Bundle& b, int x, SesKind kind);

struct LadderReport {
    bool ok = true;
    bool eps_square = false;    // phi restricted to mixed coordinates closes the left square
    bool rho_square = false;    // projections intertwine phi with the two restricted phis
    bool claim_square = false;  // alpha1 after (phi over the complement) = phi' after alpha2
};

LadderReport ladder_commutes(const Bundle& b, int x);

struct CertNode {
    std::vector<std::string> members;  // base element names at this node
    bool leaf = false;                 // singleton base
    std::string witness;               // admissible vertex used for the split
    bool phi_ok = false;               // leaf: phi = +-identity; else cone acyclic
    std::vector<int> cone_betti;
    bool e2_ok = false;
    bool conv_ok = false;
    bool ladder_ok = false;
    bool alpha1_ok = false;
    bool alpha2_ok = false;
    bool les_total_ok = false;
    bool les_cochain_ok = false;
    bool alpha_const_checked = false;  // only on constant bundles over a pointed base
    bool alpha_const_ok = false;
    bool ok = false;  // this node and everything below it
    std::string message;
    std::unique_ptr<CertNode> up;    // bundle over the up-set of the witness
    std::unique_ptr<CertNode> rest;  // bundle over the complement

    int nodes() const
    {
        return 1 + (up ? up->nodes() : 0) + (rest ? rest->nodes() : 0);
    }
};

// Recursive certificate that the spectral sequence of the double complex
// computes the cohomology of the glued total sheaf: at a singleton base the
// comparison map is a signed identity; otherwise every check above passes
// at the first admissible vertex and both restricted bundles certify
// recursively. Throws on a base that is not recursively admissible.
std::unique_ptr<CertNode> verify_main_theorem(const Bundle& b);

}  // namespace psh
