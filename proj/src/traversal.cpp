#include "posheaf/traversal.hpp"

#include <algorithm>
#include <map>

namespace psh {

std::vector<std::vector<int>> traversal_grid(const Bundle& b, const Chain& sigma,
                                             const Chain& tau)
{
    std::vector<std::vector<int>> grid(sigma.size());
    grid[0] = tau;
    for (size_t i = 0; i + 1 < sigma.size(); ++i) {
        BundleArrow a = transport(b, sigma[i], sigma[i + 1]);
        grid[i + 1].resize(tau.size());
        for (size_t j = 0; j < tau.size(); ++j) grid[i + 1][j] = a.f[grid[i][j]];
    }
    return grid;
}

namespace {

void extend_word(int p, int q, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (p == 0 && q == 0) {
        out.push_back(cur);
        return;
    }
    if (p > 0) {
        cur.push_back(0);
        extend_word(p - 1, q, cur, out);
        cur.pop_back();
    }
    if (q > 0) {
        cur.push_back(1);
        extend_word(p, q - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<std::vector<int>> step_words(int p, int q)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    extend_word(p, q, cur, out);
    return out;
}

int traversal_weight(const std::vector<int>& word, int p)
{
    int i = 0, w = 0;
    for (int s : word) {
        if (s == 0)
            ++i;
        else
            w += p - i;
    }
    return w;
}

int iota(int n) { return (n + 1) / 2; }

std::vector<QMat> phi(const Bundle& b, const TotalSheaf& ts, const Complex& s, const Complex& t)
{
    int top = std::max(s.top(), t.top());
    std::vector<QMat> out;
    for (int n = 0; n <= top; ++n) {
        QMat m(t.dim(n), s.dim(n));
        // First coordinate of every total-poset chain in degree n.
        std::map<Chain, int> chain_off;
        for (int i = 0; i < s.dim(n); ++i)
            chain_off.try_emplace(s.labels[n][i].base, i);
        for (int row = 0; row < t.dim(n); ++row) {
            const Label& l = t.labels[n][row];
            int p = static_cast<int>(l.base.size()) - 1;
            int q = static_cast<int>(l.fib.size()) - 1;
            std::vector<std::vector<int>> grid = traversal_grid(b, l.base, l.fib);
            for (const std::vector<int>& word : step_words(p, q)) {
                Chain c;
                c.reserve(p + q + 1);
                int i = 0, j = 0;
                c.push_back(ts.global_id(l.base[0], grid[0][0]));
                bool degenerate = false;
                for (int st : word) {
                    if (st == 0)
                        ++i;
                    else
                        ++j;
                    int g = ts.global_id(l.base[i], grid[i][j]);
                    if (g == c.back()) {
                        degenerate = true;
                        break;
                    }
                    c.push_back(g);
                }
                if (degenerate) continue;
                auto it = chain_off.find(c);
                if (it == chain_off.end()) throw Error("traversal produced an unknown chain");
                Rat sign = ((iota(q) + traversal_weight(word, p)) % 2 == 0) ? 1 : -1;
                m(row, it->second + l.coord) += sign;
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace psh
