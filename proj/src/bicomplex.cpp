#include "posheaf/bicomplex.hpp"

#include <algorithm>

namespace psh {

Bicomplex build_bicomplex(const Bundle& b)
{
    CheckReport r = validate_bundle(b);
    if (!r.ok) throw Error("build_bicomplex: " + r.message);

    Bicomplex k;
    k.pmax = b.base.height();
    k.qmax = 0;
    std::vector<Complex> cx;
    for (int x = 0; x < b.base.n; ++x) {
        cx.push_back(cochain_complex(b.fibers[x].poset, b.fibers[x]));
        k.qmax = std::max(k.qmax, b.fibers[x].poset.height());
    }

    for (int q = 0; q <= k.qmax; ++q) {
        Complex row = cochain_complex(b.base, q_cochain_sheaf(b, q));
        for (int p = 0; p <= k.pmax; ++p) {
            k.dims[{p, q}] = row.dim(p);
            // Expand the packed stalk coordinate into (fiber chain, stalk
            // coordinate) so downstream splits can read the fiber chain.
            std::vector<Label> ls;
            if (p <= row.top())
                for (const Label& l : row.labels[p]) {
                    const Label& fl = cx[l.base[0]].labels[q][l.coord];
                    ls.push_back({l.base, fl.base, fl.coord});
                }
            k.labels[{p, q}] = std::move(ls);
            k.dh[{p, q}] = row.dmat(p);

            // Vertical differential: blockwise fiber differential per base
            // chain, scaled by the parity of the target cell (p, q+1).
            std::vector<Chain> sig = chains(b.base, p);
            int rows_v = 0, cols_v = 0;
            for (const Chain& s : sig) {
                rows_v += cx[s[0]].dim(q + 1);
                cols_v += cx[s[0]].dim(q);
            }
            QMat dv(rows_v, cols_v);
            Rat sign = ((p + q + 1) % 2 == 0) ? 1 : -1;
            int ro = 0, co = 0;
            for (const Chain& s : sig) {
                QMat blk = cx[s[0]].dmat(q);
                for (int i = 0; i < blk.rows; ++i)
                    for (int j = 0; j < blk.cols; ++j)
                        if (sgn(blk(i, j)) != 0) dv(ro + i, co + j) = sign * blk(i, j);
                ro += blk.rows;
                co += blk.cols;
            }
            if (cols_v != k.dims[{p, q}]) throw Error("bicomplex cell dimension mismatch");
            k.dv[{p, q}] = std::move(dv);
        }
    }
    return k;
}

CheckReport validate_bicomplex(const Bicomplex& k)
{
    for (int p = 0; p <= k.pmax; ++p)
        for (int q = 0; q <= k.qmax; ++q) {
            if (!(k.dhmat(p + 1, q) * k.dhmat(p, q)).is_zero())
                return {false, "rows do not square to zero at (" + std::to_string(p) + "," +
                                   std::to_string(q) + ")"};
            if (!(k.dvmat(p, q + 1) * k.dvmat(p, q)).is_zero())
                return {false, "columns do not square to zero at (" + std::to_string(p) + "," +
                                   std::to_string(q) + ")"};
            QMat mix = k.dvmat(p + 1, q) * k.dhmat(p, q) + k.dhmat(p, q + 1) * k.dvmat(p, q);
            if (!mix.is_zero())
                return {false, "directions do not anticommute at (" + std::to_string(p) + "," +
                                   std::to_string(q) + ")"};
        }
    return {};
}

int total_block_offset(const Bicomplex& k, int n, int p)
{
    int off = 0;
    for (int pp = 0; pp < p; ++pp) off += k.dim(pp, n - pp);
    return off;
}

Complex total_complex(const Bicomplex& k)
{
    Complex t;
    int top = k.pmax + k.qmax;
    t.dims.resize(top + 1, 0);
    t.labels.resize(top + 1);
    for (int n = 0; n <= top; ++n)
        for (int p = 0; p <= std::min(n, k.pmax); ++p) {
            int q = n - p;
            if (q > k.qmax) continue;
            t.dims[n] += k.dim(p, q);
            auto it = k.labels.find({p, q});
            if (it != k.labels.end())
                t.labels[n].insert(t.labels[n].end(), it->second.begin(), it->second.end());
        }
    for (int n = 0; n < top; ++n) {
        QMat d(t.dims[n + 1], t.dims[n]);
        for (int p = 0; p <= std::min(n, k.pmax); ++p) {
            int q = n - p;
            if (q > k.qmax) continue;
            int src = total_block_offset(k, n, p);
            QMat h = k.dhmat(p, q);
            int ho = total_block_offset(k, n + 1, p + 1);
            for (int i = 0; i < h.rows; ++i)
                for (int j = 0; j < h.cols; ++j)
                    if (sgn(h(i, j)) != 0) d(ho + i, src + j) = h(i, j);
            QMat v = k.dvmat(p, q);
            int vo = total_block_offset(k, n + 1, p);
            for (int i = 0; i < v.rows; ++i)
                for (int j = 0; j < v.cols; ++j)
                    if (sgn(v(i, j)) != 0) d(vo + i, src + j) = v(i, j);
        }
        t.d.push_back(std::move(d));
    }
    return t;
}

namespace {

int base_len(const Label& l) { return static_cast<int>(l.base.size()) - 1; }

// Columns of the identity at the coordinates of degree n lying in F^p,
// i.e. whose base chain length is at least p.
QMat filtration_inclusion(const Complex& t, int n, int p)
{
    if (n < 0 || n > t.top()) return QMat(0, 0);
    std::vector<int> idx;
    for (int i = 0; i < t.dim(n); ++i)
        if (base_len(t.labels[n][i]) >= p) idx.push_back(i);
    QMat inc(t.dim(n), static_cast<int>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j) inc(idx[j], static_cast<int>(j)) = 1;
    return inc;
}

// Basis of Z_r^{p,q} = {v in F^p T^{p+q} : dv in F^{p+r}}, columns in T^{p+q}
// coordinates. Indices may run off the extent; the filtration conventions
// (F^p = everything for p <= 0, zero past the top) make that harmless.
QMat z_basis(const Complex& t, int r, int p, int q)
{
    int n = p + q;
    if (n < 0 || n > t.top()) return QMat(0, 0);
    QMat inc = filtration_inclusion(t, n, p);
    QMat d = t.dmat(n) * inc;
    std::vector<int> bad;  // target coordinates outside F^{p+r}
    if (n + 1 <= t.top())
        for (int i = 0; i < t.dim(n + 1); ++i)
            if (base_len(t.labels[n + 1][i]) < p + r) bad.push_back(i);
    if (bad.empty()) return inc;
    QMat sub(static_cast<int>(bad.size()), d.cols);
    for (size_t i = 0; i < bad.size(); ++i)
        for (int j = 0; j < d.cols; ++j) sub(static_cast<int>(i), j) = d(bad[i], j);
    return inc * kernel_basis(sub);
}

}  // namespace

SpectralPages spectral_pages(const Bicomplex& k, int r_max)
{
    Complex t = total_complex(k);
    SpectralPages out;
    out.pmax = k.pmax;
    out.qmax = k.qmax;
    out.r_stab = std::max(k.pmax, k.qmax) + 2;
    int r_top = (r_max >= 0) ? r_max : out.r_stab;

    for (int r = 0; r <= r_top; ++r) {
        std::map<std::pair<int, int>, PageCell> page;
        for (int p = 0; p <= k.pmax; ++p)
            for (int q = 0; q <= k.qmax; ++q) {
                int n = p + q;
                PageCell cell;
                QMat z = z_basis(t, r, p, q);
                QMat b1 = z_basis(t, r - 1, p + 1, q - 1);
                QMat b2 = t.dmat(n - 1) * z_basis(t, r - 1, p - r + 1, q + r - 2);
                cell.bspan = hstack(b1, b2);
                Rref rr = rref(hstack(cell.bspan, z));
                std::vector<int> picks;
                for (int pc : rr.pivot_cols)
                    if (pc >= cell.bspan.cols) picks.push_back(pc - cell.bspan.cols);
                cell.dim = static_cast<int>(picks.size());
                cell.reps = QMat(t.dim(n), cell.dim);
                for (int j = 0; j < cell.dim; ++j)
                    for (int i = 0; i < t.dim(n); ++i) cell.reps(i, j) = z(i, picks[j]);
                page[{p, q}] = std::move(cell);
            }
        // Differentials d_r out of every cell of this page.
        for (auto& [pq, cell] : page) {
            auto [p, q] = pq;
            int n = p + q;
            int tp = p + r, tq = q - r + 1;
            auto it = page.find({tp, tq});
            int tdim = (it == page.end()) ? 0 : it->second.dim;
            cell.d_next = QMat(tdim, cell.dim);
            if (cell.dim == 0) continue;
            if (it == page.end()) {
                // Target cell lies outside the first-quadrant extent, so its
                // group vanishes and the induced map is zero. The raw image
                // d(reps) need not vanish: it can sit in deeper filtration,
                // which represents zero in the (trivial) target.
                continue;
            }
            QMat w = t.dmat(n) * cell.reps;
            std::optional<QMat> sol = solve(hstack(it->second.reps, it->second.bspan), w);
            if (!sol) throw Error("spectral differential failed to land in its target cell");
            for (int i = 0; i < tdim; ++i)
                for (int j = 0; j < cell.dim; ++j) cell.d_next(i, j) = (*sol)(i, j);
        }
        out.pages.push_back(std::move(page));
    }
    return out;
}

E2Report e2_check(const Bundle& b)
{
    Bicomplex k = build_bicomplex(b);
    return e2_check(b, k, spectral_pages(k, 2));
}

E2Report e2_check(const Bundle& b, const Bicomplex& k, const SpectralPages& pg)
{
    E2Report rep;
    for (int q = 0; q <= k.qmax; ++q) {
        Complex base_cx = cochain_complex(b.base, fib_cohomology_sheaf(b, q));
        std::vector<CohomStep> h = complex_cohomology(base_cx);
        for (int p = 0; p <= k.pmax; ++p) {
            E2Cell c;
            c.p = p;
            c.q = q;
            c.from_pages = pg.dim(2, p, q);
            c.from_base_cohomology = (p < static_cast<int>(h.size())) ? h[p].betti : 0;
            c.ok = c.from_pages == c.from_base_cohomology;
            if (!c.ok) rep.ok = false;
            rep.cells.push_back(c);
        }
    }
    return rep;
}

ConvergenceReport convergence_check(const Bundle& b)
{
    Bicomplex k = build_bicomplex(b);
    return convergence_check(k, spectral_pages(k));
}

ConvergenceReport convergence_check(const Bicomplex& k, const SpectralPages& pg)
{
    ConvergenceReport rep;
    if (static_cast<int>(pg.pages.size()) <= pg.r_stab)
        throw Error("convergence_check needs pages computed through stabilization");
    Complex t = total_complex(k);
    std::vector<CohomStep> h = complex_cohomology(t);
    for (int n = 0; n <= k.pmax + k.qmax; ++n) {
        ConvergenceLine line;
        line.n = n;
        for (int p = 0; p <= std::min(n, k.pmax); ++p)
            line.einf_total += pg.dim(pg.r_stab, p, n - p);
        line.total_betti = (n < static_cast<int>(h.size())) ? h[n].betti : 0;
        line.ok = line.einf_total == line.total_betti;
        if (!line.ok) rep.ok = false;
        rep.lines.push_back(line);
    }
    return rep;
}

}  // namespace psh
