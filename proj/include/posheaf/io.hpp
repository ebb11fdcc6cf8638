#pragma once

// JSON documents for posets, sheaves and bundles, plus the report type the
// command line emits and the deterministic fixture generators. Serialization
// is canonical: fixed field order, two-space indent, canonical rational
// strings, one trailing newline. Saving a loaded canonical document
// reproduces it byte for byte.

#include "posheaf/bundle.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace psh {

struct BundleDocument {
    Bundle bundle;
    std::string ring = "rational";
    nlohmann::ordered_json metadata;  // null when the block is absent
};

std::string poset_to_json(const Poset& p);
std::string sheaf_to_json(const Sheaf& f);
std::string bundle_to_json(const BundleDocument& d);

// Parsing throws Error with the offending document path. strict rejects
// non-canonical rational spellings ("2/4", "3/1", "+2") instead of
// normalizing them.
Poset poset_from_json(const std::string& text, bool strict = false);
Sheaf sheaf_from_json(const std::string& text, bool strict = false);
BundleDocument bundle_from_json(const std::string& text, bool strict = false);

// The format tag of a document, e.g. "posheaf-bundle/1", without validating
// the rest of it.
std::string document_format(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// FNV-1a over the raw bytes, 64 bit, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

struct ReportCheck {
    std::string name;
    bool ok = true;
    std::string note;
};

// What every subcommand emits: the verdicts of its checks plus named tables
// (dimension lists, page grids, Betti numbers). Timing is attached only on
// request so that default reports are byte-identical across runs.
struct Report {
    std::string command;
    std::string input_digest;
    std::vector<ReportCheck> checks;
    nlohmann::ordered_json tables = nlohmann::ordered_json::object();
    std::optional<double> seconds;
    int exit_code = 0;

    bool pass() const;
    std::string to_json() const;
    std::string to_text() const;
};

// Fixture generators. All deterministic in their arguments.

// Two-element chain base; the fiber over the bottom is a k-vertex chain with
// one-dimensional stalks, the fiber over the top a point, and the arrow
// collapses the chain onto the point with unit matrices. Glues to a
// (k+1)-chain carrying the constant rank-one sheaf.
Bundle collapse_bundle(int k);

// A commuting square on the two-atom boolean lattice with two-dimensional
// stalks: both composites multiply by the nilpotent x of Q[x]/(x^2), in the
// shape of one square of a cube of resolutions.
Sheaf cube_sheaf();

// Always returns a valid sheaf. Draws one of three recipes: free matrices
// kept when path independence happens to hold (always on forests), a
// rank-one factorization through a common line, or a pullback of a random
// sheaf on a chain along the height function.
Sheaf random_sheaf(const Poset& p, int max_dim, uint64_t seed);

// Valid by construction: fiber posets are drawn per height level with
// monotone collapse maps between consecutive levels, and all matrix data is
// read off one random sheaf on the glued total poset.
Bundle random_bundle(const Poset& base, int max_fiber, int max_dim, uint64_t seed);

// Random recursively admissible poset with n elements (a random poset with a
// bottom adjoined, redrawn until the recognizer accepts).
Poset random_admissible_base(int n, uint64_t seed);

}  // namespace psh
