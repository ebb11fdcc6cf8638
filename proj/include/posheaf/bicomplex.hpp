#pragma once

// The double complex of a bundle, its total complex, and the spectral
// sequence of the filtration by base chain length.
//
// A cell K^{p,q} is the module of p-cochains on the base with values in the
// sheaf of degree-q fiber cochains: one coordinate per (base p-chain sigma,
// fiber q-chain tau over the least vertex of sigma, stalk coordinate).
//
// Sign convention. The horizontal differential is the plain unsigned
// cochain differential of each row. The vertical differential is the
// fiberwise cochain differential scaled by (-1)^{p+q} of its TARGET cell
// (p, q+1). Rows and columns then square to zero and the two directions
// anticommute, and the comparison maps built in the decomposition module
// are chain maps on the nose.

#include <map>
#include <utility>
#include <vector>

#include "posheaf/bundle.hpp"
#include "posheaf/sheaf.hpp"

namespace psh {

struct Bicomplex {
    int pmax = 0;  // base direction extent, cells live in 0..pmax
    int qmax = 0;  // fiber direction extent
    std::map<std::pair<int, int>, int> dims;
    std::map<std::pair<int, int>, std::vector<Label>> labels;
    std::map<std::pair<int, int>, QMat> dh;  // source (p,q) -> (p+1,q)
    std::map<std::pair<int, int>, QMat> dv;  // source (p,q) -> (p,q+1)

    int dim(int p, int q) const
    {
        auto it = dims.find({p, q});
        return it == dims.end() ? 0 : it->second;
    }
    QMat dhmat(int p, int q) const
    {
        auto it = dh.find({p, q});
        return it == dh.end() ? QMat(dim(p + 1, q), dim(p, q)) : it->second;
    }
    QMat dvmat(int p, int q) const
    {
        auto it = dv.find({p, q});
        return it == dv.end() ? QMat(dim(p, q + 1), dim(p, q)) : it->second;
    }
};

Bicomplex build_bicomplex(const Bundle& b);

// Rows and columns square to zero, the directions anticommute.
CheckReport validate_bicomplex(const Bicomplex& k);

// Degree n is the direct sum of the cells with p+q = n, blocks laid out by
// ascending p; d = dh + dv blockwise. Labels carry (sigma, tau, coordinate).
Complex total_complex(const Bicomplex& k);

// Offset of the (p, n-p) block inside degree n of total_complex(k).
int total_block_offset(const Bicomplex& k, int n, int p);

struct PageCell {
    int dim = 0;
    QMat reps;    // lifted representatives, columns in T^{p+q}
    QMat bspan;   // span of the classes quotiented away, columns in T^{p+q}
    QMat d_next;  // matrix of d_r out of this cell into (p+r, q-r+1)
};

struct SpectralPages {
    int pmax = 0;
    int qmax = 0;
    int r_stab = 0;  // pages r >= r_stab all equal E_infinity
    std::vector<std::map<std::pair<int, int>, PageCell>> pages;  // index r

    int dim(int r, int p, int q) const
    {
        if (r < 0 || r >= static_cast<int>(pages.size())) return 0;
        auto it = pages[r].find({p, q});
        return it == pages[r].end() ? 0 : it->second.dim;
    }
    const std::map<std::pair<int, int>, PageCell>& last() const { return pages.back(); }
};

// Pages 0..r_max of the filtration F^p T^n = (blocks with base length >= p),
// each cell the subquotient Z_r / (Z_{r-1}' + d Z_{r-1}'') with explicit
// representatives, and d_r induced by the total differential. r_max < 0
// means one page past the stabilization bound max(pmax, qmax) + 1.
SpectralPages spectral_pages(const Bicomplex& k, int r_max = -1);

struct E2Cell {
    int p = 0, q = 0;
    int from_pages = 0;            // dim E_2^{p,q}
    int from_base_cohomology = 0;  // betti_p of the base with fiber-cohomology values
    bool ok = true;
};

struct E2Report {
    bool ok = true;
    std::vector<E2Cell> cells;
};

// dim E_2^{p,q} against the independently computed cohomology of the base
// with coefficients in the degree-q fiber cohomology sheaf, every cell.
E2Report e2_check(const Bundle& b);
E2Report e2_check(const Bundle& b, const Bicomplex& k, const SpectralPages& pg);

struct ConvergenceLine {
    int n = 0;
    int einf_total = 0;  // sum of dim E_inf^{p,q} over p+q = n
    int total_betti = 0; // dim H^n of the total complex
    bool ok = true;
};

struct ConvergenceReport {
    bool ok = true;
    std::vector<ConvergenceLine> lines;
};

ConvergenceReport convergence_check(const Bundle& b);
ConvergenceReport convergence_check(const Bicomplex& k, const SpectralPages& pg);

}  // namespace psh
