#ifndef TWC_REFINEMENTS_HPP
#define TWC_REFINEMENTS_HPP

#include "twc/mat.hpp"
#include "twc/trianguline.hpp"

namespace twc {

/// A refinement: an ordering of the smooth characters, as a permutation of
/// {1..n} in one-line notation (1-based images).
struct Refinement {
    std::vector<int> w;

    int n() const { return static_cast<int>(w.size()); }
    static Refinement identity(int n);
    static Refinement of(std::vector<int> images);  // validates bijectivity
    Refinement compose_transposition(int i) const;  // w o (i, i+1), 1-based i
    friend bool operator==(const Refinement& a, const Refinement& b) { return a.w == b.w; }
};

/// Crystabelline generic module data: smooth characters with their
/// valuations, per-embedding Sen weights (descending), and per-embedding
/// Hodge flags. Column j..n of a flag matrix spans the j-th filtration step
/// (ascending jumps; the jump list is -weights, index-aligned).
struct CrysModule {
    std::vector<Character> phis;
    std::map<std::string, std::vector<long long>> weights;  // descending per embedding
    std::map<std::string, Mat<Rat>> flags;

    int n() const { return static_cast<int>(phis.size()); }
    const FieldShapePtr& shape() const { return phis.at(0).shape(); }
    bool regular(const std::string& sigma) const;  // strictly decreasing weights

    /// Validates shapes: weight/flag dimensions, weakly decreasing weights,
    /// invertible flags, smooth phis.
    static CrysModule make(std::vector<Character> phis,
                           std::map<std::string, std::vector<long long>> weights,
                           std::map<std::string, Mat<Rat>> flags);
};

struct GenericCheck {
    bool ok = true;
    std::optional<std::pair<int, int>> violating_pair;  // 1-based
    std::string reason;                                 // "trivial", "abs" or "abs_inverse"
};

/// Formal genericity of the smooth tuple: phi_i / phi_j must avoid
/// {1, |.|_K, |.|_K^{-1}} as exponent vectors, for all i != j.
GenericCheck generic_check(const std::vector<Character>& phis);

/// Induced jump ordering of the lemma on filtered flags: jumps must be given
/// strictly ascending; V_i^w = span of flag-independent refinement basis
/// vectors e_{w(1)}..e_{w(i)}, and j_i(w) is the unique jump of the filtration
/// induced on V_i^w / V_{i-1}^w. Output is a permutation of the jump list.
std::vector<long long> flag_jumps(const Refinement& w, const Mat<Rat>& flag,
                                  const std::vector<long long>& jumps);

/// Non-criticality of the refinement: per embedding the induced Hodge jumps
/// on each V_i^w must be exactly the deepest i jumps, equivalently the jump
/// ordering is the identity arrangement. Weights must be regular.
bool noncritical_check(const CrysModule& m, const Refinement& w);
bool noncritical_check(const CrysModule& m, const Refinement& w, const std::string& sigma);

/// When j(w) is not sorted ascending, returns an index i such that composing
/// with (i, i+1) swaps j_i and j_{i+1} and fixes everything else; nullopt
/// means the ordering is already sorted.
std::optional<int> adjacent_swap(const Refinement& w, const Mat<Rat>& flag,
                                 const std::vector<long long>& jumps);

/// For a critical refinement, an adjacent transposition (i, w') such that the
/// rank-2 subquotient between steps i-1 and i+1 carries both orderings; the
/// witness that genericity forces that subquotient to split. One embedding at
/// a time. Returns nullopt for non-critical w.
std::optional<std::pair<int, Refinement>> critical_split_witness(const CrysModule& m,
                                                                 const Refinement& w,
                                                                 const std::string& sigma);

}  // namespace twc

#endif
