// Acceptance battery for the engine: ten numbered end-to-end checks, one
// verdict line each, exit zero only when every line passes. The first
// argument must name the command line binary; the determinism criterion
// drives it as a subprocess. Each criterion carries the wall-clock budget it
// has to land in, and shared runs share a budget.

#include "posheaf/decomp.hpp"
#include "posheaf/io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

using namespace psh;

namespace {

double now_seconds()
{
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

int g_failures = 0;

void verdict(int num, bool ok, double seconds, double budget, const std::string& detail)
{
    bool in_budget = budget <= 0 || seconds < budget;
    if (!ok || !in_budget) ++g_failures;
    std::string budget_txt;
    if (budget > 0) budget_txt = " / " + std::to_string(static_cast<int>(budget)) + "s";
    std::printf("criterion %2d: %s  %s  [%.1fs%s]\n", num, (ok && in_budget) ? "PASS" : "FAIL",
                detail.c_str(), seconds, budget_txt.c_str());
    std::fflush(stdout);
}

std::string describe(const std::exception& e)
{
    return std::string(" (threw: ") + e.what() + ")";
}

std::vector<int> betti_list(const std::vector<CohomStep>& steps)
{
    std::vector<int> out;
    for (const CohomStep& h : steps) out.push_back(h.betti);
    return out;
}

// -------------------------------------------------------------------------
// Independent combinatorial oracles, written against the definitions alone.

// Closed strict orders on n labeled points, brute force over all pair sets.
std::vector<std::vector<std::vector<char>>> all_strict_orders(int n)
{
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) pairs.emplace_back(i, j);
    std::vector<std::vector<std::vector<char>>> out;
    for (long mask = 0; mask < (1L << pairs.size()); ++mask) {
        std::vector<std::vector<char>> lt(n, std::vector<char>(n, 0));
        for (size_t b = 0; b < pairs.size(); ++b)
            if (mask & (1L << b)) lt[pairs[b].first][pairs[b].second] = 1;
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b) {
                if (lt[a][b] && lt[b][a]) ok = false;
                for (int c = 0; c < n && ok; ++c)
                    if (lt[a][b] && lt[b][c] && !lt[a][c]) ok = false;
            }
        if (ok) out.push_back(std::move(lt));
    }
    return out;
}

std::vector<std::pair<int, int>> covers_of(const std::vector<std::vector<char>>& lt)
{
    int n = static_cast<int>(lt.size());
    std::vector<std::pair<int, int>> covers;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (!lt[u][v]) continue;
            bool direct = true;
            for (int w = 0; w < n && direct; ++w)
                if (lt[u][w] && lt[w][v]) direct = false;
            if (direct) covers.emplace_back(u, v);
        }
    return covers;
}

// Literal transcription of recursive admissibility on a carrier subset:
// a unique minimum, then some atom x whose relative up-sets all have unique
// minima and whose two sides recurse.
bool ra_oracle(const std::vector<std::vector<char>>& leq, const std::vector<int>& mem)
{
    if (mem.size() <= 1) return true;
    int zero = -1;
    for (int u : mem) {
        bool below_all = true;
        for (int v : mem)
            if (!leq[u][v]) {
                below_all = false;
                break;
            }
        if (below_all) {
            zero = u;
            break;
        }
    }
    if (zero < 0) return false;
    for (int x : mem) {
        if (x == zero || !leq[zero][x]) continue;
        bool covers_zero = true;
        for (int z : mem)
            if (z != zero && z != x && leq[zero][z] && leq[z][x]) {
                covers_zero = false;
                break;
            }
        if (!covers_zero) continue;
        bool admissible = true;
        for (int y : mem) {
            if (leq[x][y]) continue;
            std::vector<int> both;
            for (int z : mem)
                if (leq[x][z] && leq[y][z]) both.push_back(z);
            int least = -1;
            for (int c : both) {
                bool below = true;
                for (int d : both)
                    if (!leq[c][d]) {
                        below = false;
                        break;
                    }
                if (below) {
                    least = c;
                    break;
                }
            }
            if (least < 0) {
                admissible = false;
                break;
            }
        }
        if (!admissible) continue;
        std::vector<int> up, rest;
        for (int z : mem) (leq[x][z] ? up : rest).push_back(z);
        if (ra_oracle(leq, up) && ra_oracle(leq, rest)) return true;
    }
    return false;
}

long binomial(int n, int k)
{
    long acc = 1;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
}

// -------------------------------------------------------------------------
// Shared generators.

Poset adjoin_bottom(const Poset& q)
{
    std::vector<std::string> names = {"bot"};
    for (const std::string& s : q.names) names.push_back("v" + s);
    std::vector<std::pair<int, int>> covers;
    std::vector<char> has_below(q.n, 0);
    for (auto [u, v] : q.covers) {
        covers.emplace_back(u + 1, v + 1);
        has_below[v] = 1;
    }
    for (int m = 0; m < q.n; ++m)
        if (!has_below[m]) covers.emplace_back(0, m + 1);
    return validate_poset(names, covers);
}

std::string run_command(const std::string& cmd, bool* ok)
{
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        *ok = false;
        return out;
    }
    char buf[4096];
    size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
    if (pclose(p) != 0) *ok = false;
    return out;
}

// The instance set shared by the main-theorem, alpha, and exactness
// criteria: constant bundles over small boolean lattices with chain fibers,
// the collapse family, and random bundles over the two-atom lattice.
std::vector<Bundle> theorem_instances()
{
    std::vector<Bundle> set;
    for (int n = 0; n <= 3; ++n)
        for (int k = 1; k <= 3; ++k)
            set.push_back(constant_bundle(boolean_lattice(n), constant_sheaf(chain_poset(k), 1)));
    for (int k = 1; k <= 4; ++k) set.push_back(collapse_bundle(k));
    for (uint64_t seed = 0; seed < 25; ++seed)
        set.push_back(random_bundle(boolean_lattice(2), 3, 2, 9000 + seed));
    return set;
}

}  // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-cli-binary>\n");
        return 2;
    }
    std::string cli = std::string("'") + argv[1] + "'";

    // 1. Differentials square to zero: cochain complexes of random sheaves
    //    and the three bicomplex identities on random bundles.
    {
        double t0 = now_seconds();
        bool ok = true;
        std::string note = "d after d vanishes on 200 sheaf complexes and 100 bundle bicomplexes";
        try {
            for (int i = 0; i < 200; ++i) {
                int n = 1 + i % 8;
                double density = 0.15 + 0.15 * ((i / 8) % 4);
                Poset p = random_poset(n, density, 1000 + i);
                Sheaf f = random_sheaf(p, 3, 2000 + i);
                ok = ok && validate_sheaf(f).ok;
                ok = ok && validate_complex(cochain_complex(p, f)).ok;
            }
            for (int i = 0; i < 100; ++i) {
                Poset base = random_poset(1 + i % 4, 0.2 + 0.15 * (i % 3), 3000 + i);
                Bundle b = random_bundle(base, 4, 3, 4000 + i);
                ok = ok && validate_bundle(b).ok;
                ok = ok && validate_bicomplex(build_bicomplex(b)).ok;
            }
        } catch (const std::exception& e) {
            ok = false;
            note += describe(e);
        }
        verdict(1, ok, now_seconds() - t0, 60, note);
    }

    // 2. Constant sheaves over pointed posets have one-point cohomology.
    {
        double t0 = now_seconds();
        bool ok = true;
        std::string note =
            "constant rank-a cohomology is a in degree zero, zero above, 50 pointed posets";
        try {
            for (int i = 0; i < 50; ++i) {
                Poset q = random_poset(1 + i % 6, 0.15 + 0.1 * (i % 5), 5000 + i);
                Poset p = adjoin_bottom(q);
                int a = 1 + i % 3;
                std::vector<int> betti = betti_list(sheaf_cohomology(constant_sheaf(p, a)));
                ok = ok && !betti.empty() && betti[0] == a;
                for (size_t d = 1; d < betti.size(); ++d) ok = ok && betti[d] == 0;
            }
        } catch (const std::exception& e) {
            ok = false;
            note += describe(e);
        }
        verdict(2, ok, now_seconds() - t0, 10, note);
    }

    // 3. The lattice-path comparison map is a chain map, exactly.
    {
        double t0 = now_seconds();
        bool ok = true;
        std::string note = "comparison map commutes with both differentials on 100 random bundles";
        try {
            for (int i = 0; i < 100; ++i) {
                Poset base = random_poset(1 + i % 4, 0.2 + 0.12 * (i % 4), 6000 + i);
                Bundle b = random_bundle(base, 3, 2, 7000 + i);
                TotalSheaf ts = total_sheaf(b);
                Complex s = cochain_complex(ts.sheaf.poset, ts.sheaf);
                Complex t = total_complex(build_bicomplex(b));
                std::vector<QMat> m = phi(b, ts, s, t);
                int top = std::max(s.top(), t.top());
                for (int n = 0; n < top && ok; ++n) {
                    QMat fn = n < static_cast<int>(m.size()) ? m[n] : QMat(t.dim(n), s.dim(n));
                    QMat fn1 = n + 1 < static_cast<int>(m.size()) ? m[n + 1]
                                                                  : QMat(t.dim(n + 1), s.dim(n + 1));
                    ok = t.dmat(n) * fn == fn1 * s.dmat(n);
                }
            }
        } catch (const std::exception& e) {
            ok = false;
            note += describe(e);
        }
        verdict(3, ok, now_seconds() - t0, 120, note);
    }

    // 4 and 5 share one run: the second page against the independent
    //    fiber-cohomology pipeline, then abutment totals against the total
    //    complex.
    {
        double t0 = now_seconds();
        bool e2_ok = true, conv_ok = true;
        int cells = 0;
        std::string trouble;
        try {
            for (int i = 0; i < 50; ++i) {
                Poset base = random_admissible_base(2 + i % 5, 8000 + i);
                Bundle b = random_bundle(base, 3, 2, 8500 + i);
                Bicomplex k = build_bicomplex(b);
                SpectralPages pg = spectral_pages(k);
                E2Report e2 = e2_check(b, k, pg);
                e2_ok = e2_ok && e2.ok;
                cells += static_cast<int>(e2.cells.size());
                conv_ok = conv_ok && convergence_check(k, pg).ok;
            }
        } catch (const std::exception& e) {
            e2_ok = conv_ok = false;
            trouble = describe(e);
        }
        double t = now_seconds() - t0;
        verdict(4, e2_ok, t, 300,
                "second page equals base cohomology in fiber cohomology, " +
                    std::to_string(cells) + " cells over 50 admissible bases" + trouble);
        verdict(5, conv_ok, t, 300,
                "stable page totals equal total-complex cohomology, same instances" + trouble);
    }

    // 6, 7, 8 share the theorem instance set and one budget. The
    //    certificate tree re-runs every internal check at every node; the
    //    alpha and exactness criteria then sweep every admissible split of
    //    every root base on their own.
    {
        std::vector<Bundle> set = theorem_instances();
        double t0 = now_seconds();
        bool cert_ok = true;
        int nodes = 0;
        std::string trouble6;
        try {
            for (const Bundle& b : set) {
                auto cert = verify_main_theorem(b);
                cert_ok = cert_ok && cert && cert->ok;
                if (cert) nodes += cert->nodes();
            }
        } catch (const std::exception& e) {
            cert_ok = false;
            trouble6 = describe(e);
        }
        double t6 = now_seconds() - t0;

        double t1 = now_seconds();
        bool alpha_ok = true;
        int alpha_certs = 0;
        bool les_ok = true;
        int les_slots = 0;
        std::string trouble78;
        try {
            for (const Bundle& b : set) {
                if (is_constant_bundle(b) && global_minimum(b.base)) {
                    alpha_ok = alpha_ok && alpha_const(b).cert.quasi_iso;
                    ++alpha_certs;
                }
                for (int x = 0; x < b.base.n; ++x) {
                    if (!is_admissible_at(b.base, x)) continue;
                    alpha_ok = alpha_ok && alpha1(b, x).cert.quasi_iso;
                    alpha_ok = alpha_ok && alpha2(b, x).cert.quasi_iso;
                    alpha_certs += 2;
                    for (SesKind kind : {SesKind::total, SesKind::cochain}) {
                        LesReport rep = les_exactness(b, x, kind);
                        les_ok = les_ok && rep.ok;
                        les_slots += static_cast<int>(rep.slots.size());
                    }
                }
            }
        } catch (const std::exception& e) {
            alpha_ok = les_ok = false;
            trouble78 = describe(e);
        }
        double t78 = now_seconds() - t1;
        bool in_budget = t6 + t78 < 600;

        verdict(6, cert_ok && in_budget, t6, 0,
                "full passing certificate trees, " + std::to_string(set.size()) + " bundles, " +
                    std::to_string(nodes) + " nodes [shared 600s budget]" + trouble6);
        verdict(7, alpha_ok && in_budget, t78, 0,
                "cone acyclicity for the comparison maps at every admissible split, " +
                    std::to_string(alpha_certs) + " certificates [shared 600s budget]" + trouble78);
        verdict(8, les_ok && in_budget, t78, 0,
                "image equals kernel at every long-exact-sequence slot, " +
                    std::to_string(les_slots) + " slots [shared 600s budget]" + trouble78);
    }

    // 9. Combinatorial ground truth: the admissibility recognizer against a
    //    definition-transcribing oracle on every labeled poset with at most
    //    five elements, lattice-path counts, and small boolean lattices.
    {
        double t0 = now_seconds();
        bool ok = true;
        std::string tally;
        std::string trouble;
        try {
            const long want_counts[6] = {1, 1, 3, 19, 219, 4231};
            for (int n = 1; n <= 5; ++n) {
                auto orders = all_strict_orders(n);
                ok = ok && static_cast<long>(orders.size()) == want_counts[n];
                std::vector<std::string> names;
                for (int i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
                std::vector<int> everyone;
                for (int i = 0; i < n; ++i) everyone.push_back(i);
                for (const auto& lt : orders) {
                    Poset p = validate_poset(names, covers_of(lt));
                    std::vector<std::vector<char>> leq = lt;
                    for (int i = 0; i < n; ++i) leq[i][i] = 1;
                    if (is_recursively_admissible(p).ok != ra_oracle(leq, everyone)) {
                        ok = false;
                        break;
                    }
                }
                tally += (n > 1 ? "," : "") + std::to_string(orders.size());
            }
            for (int p = 0; p <= 5; ++p)
                for (int q = 0; q <= 5; ++q)
                    ok = ok && static_cast<long>(step_words(p, q).size()) == binomial(p + q, p);
            for (int n = 1; n <= 4; ++n)
                ok = ok && is_recursively_admissible(boolean_lattice(n)).ok;
        } catch (const std::exception& e) {
            ok = false;
            trouble = describe(e);
        }
        verdict(9, ok, now_seconds() - t0, 120,
                "recognizer matches the brute-force oracle on " + tally +
                    " labeled posets; path counts binomial; B_1..B_4 admissible" + trouble);
    }

    // 10. Determinism across repeated runs of the library renderer and of
    //     the command line binary, identical seeds, varied environment.
    {
        double t0 = now_seconds();
        bool ok = true;
        std::string trouble;
        std::string fa = "acceptance_det_a.json";
        std::string fb = "acceptance_det_b.json";
        try {
            Report rep;
            rep.command = "probe";
            rep.input_digest = fnv1a_hex("determinism probe");
            rep.checks.push_back({"stable", true, ""});
            rep.tables["dims"] = nlohmann::ordered_json::array({1, 2, 3});
            ok = ok && rep.to_json() == rep.to_json() && rep.to_text() == rep.to_text();

            std::string gen_args = " gen random --seed 11 --base-size 4 --max-fiber 3 --max-dim 2 -o ";
            run_command(cli + gen_args + fa, &ok);
            run_command(cli + gen_args + fb, &ok);
            ok = ok && read_file(fa) == read_file(fb) && !read_file(fa).empty();

            for (const std::string& sub : {std::string("pages"), std::string("verify-main"),
                                           std::string("cohomology"), std::string("phi-check")}) {
                std::string first = run_command(cli + " " + sub + " " + fa + " --format json", &ok);
                std::string second = run_command(
                    "OMP_NUM_THREADS=7 " + cli + " " + sub + " " + fa + " --format json", &ok);
                ok = ok && !first.empty() && first == second;
            }
        } catch (const std::exception& e) {
            ok = false;
            trouble = describe(e);
        }
        std::remove(fa.c_str());
        std::remove(fb.c_str());
        verdict(10, ok, now_seconds() - t0, 0,
                "byte-identical reports across repeated seeded runs of library and binary" +
                    trouble);
    }

    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d of 10 criteria failed\n", g_failures);
    return 1;
}
