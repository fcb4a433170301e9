#ifndef TWC_TRIANGULINE_HPP
#define TWC_TRIANGULINE_HPP

#include "twc/characters.hpp"

#include <map>
#include <set>

namespace twc {

enum class ClassTag {
    VeryGenericStronglyNonSplit,
    CrystabellineGeneric,
    CrystabellineNonCritical,
    Mixed,
    Plain,
};

std::string to_string(ClassTag tag);

/// Triangulated module data: ordered rank-1 parameters (sub to quotient) with
/// declared extension-class flags for each step i = 2..n. Extension classes
/// are never computed here; only their (non)vanishing enters the theorems.
struct TriangModule {
    std::vector<Character> params;
    std::vector<bool> step_nonsplit;    // index t <-> step i = t + 2
    std::vector<bool> graded_nonsplit;  // same indexing
    ClassTag tag = ClassTag::Plain;
    int mixed_m = 0;  // head length for ClassTag::Mixed

    int n() const { return static_cast<int>(params.size()); }
    const FieldShapePtr& shape() const { return params.at(0).shape(); }

    /// Validates flag consistency (graded implies step), tag requirements, and
    /// shape coherence. Throws std::invalid_argument on violations.
    static TriangModule make(std::vector<Character> params, std::vector<bool> step_nonsplit,
                             std::vector<bool> graded_nonsplit, ClassTag tag, int mixed_m = 0);

    std::vector<Rat> sigma_weights(const std::string& sigma) const
    {
        return weight_map(params, sigma);
    }
};

/// Integer shift window [a, b] with a <= 0 <= b.
struct WallInterval {
    long long a = 0;
    long long b = 0;
    WallInterval() = default;
    WallInterval(long long a_, long long b_) : a(a_), b(b_)
    {
        if (a > 0 || b < 0)
            throw std::invalid_argument("WallInterval: need a <= 0 <= b");
    }
};

/// Raises the sigma-weight of the last i parameters by k (weight += k,
/// uval += k/e); extension flags are preserved.
TriangModule pullback_p(const TriangModule& d, int i, const std::string& sigma, long long k);

/// Lowers the sigma-weight of the first n-i parameters by k. A global twist
/// by x_sigma^k turns this into pullback_p.
TriangModule pushout_iota(const TriangModule& d, int i, const std::string& sigma, long long k);

struct GateViolation {
    int j = 0;  // 1-based sub-side index
    int l = 0;  // 1-based quotient-side index
    std::string sigma;
    Rat weight_difference;
};

struct GateReport {
    bool ok = true;
    std::vector<GateViolation> violations;
};

/// Invertibility gate: wt_sigma(delta_j / delta_l) must avoid {1, ..., k_sigma}
/// for all j <= n-i < l and every embedding.
GateReport invertibility_gate(const TriangModule& d, int i,
                              const std::map<std::string, long long>& k);

struct WallHit {
    int j = 0;  // sub-side index
    int l = 0;  // quotient-side index
    long long h = 0;
};

struct WallReport {
    bool member = true;
    std::vector<WallHit> hits;  // full violating index set, never truncated
};

/// Wall predicate on one embedding: the first n-i ordered weights must avoid
/// the last i weights shifted by any h in [a, b].
WallReport wall_member(const std::vector<Rat>& sigma_weights, int i, const WallInterval& window);
WallReport wall_member(const TriangModule& d, const std::string& sigma, int i,
                       const WallInterval& window);

struct ProgramWallHit {
    std::string sigma;
    int j = 0;
    int k = 0;
    long long a = 0;
};

struct ProgramWallReport {
    bool member = true;
    std::vector<ProgramWallHit> hits;
};

/// Full nested-quantifier wall predicate for a composite program: for each
/// sigma in S with cut indices I_sigma = {i_1 < ... < i_d} and multiplicities
/// k_sigma, blocks of {1..n} are read off the cuts from the top and weights in
/// deeper blocks must avoid shallower-block weights shifted by 0 <= a <=
/// (partial sum of multiplicities); `negative` selects the -a variant.
ProgramWallReport wall_member_program(
    const std::map<std::string, std::vector<Rat>>& weights_per_sigma,
    const std::set<std::string>& s_set, const std::map<std::string, std::vector<int>>& i_sets,
    const std::map<std::string, std::vector<long long>>& multiplicities, bool negative);

struct ProgramStep {
    int i = 0;
    std::string sigma;
    long long mult = 1;
};
using Program = std::vector<ProgramStep>;

enum class ProgramMode { Free, Strict, Substack };

/// Composite pullback prod p_{i,sigma}^{mult}; result is independent of step
/// order. Strict mode gates every step; Substack mode checks the program wall
/// predicate up front. Throws gate_error identifying the first violation.
TriangModule apply_program(const TriangModule& d, const Program& program,
                           ProgramMode mode = ProgramMode::Free);

/// Aggregates program multiplicities per (sigma, i).
std::map<std::string, std::map<int, long long>> program_multiplicities(const Program& program);

struct Triangulation {
    std::vector<int> w;  // permutation, 1-based images
    std::vector<Character> params;
};

/// All triangulations predicted by the classification for the module's tag:
/// exactly one for very generic strongly non-split, n! for the crystabelline
/// tags, (n-m)! for Mixed(m). Parameters use the position-weight formula
/// delta_{w,i} = x^{h_i} phi_{w(i)}; for critical refinements of a merely
/// generic module the weight arrangement additionally depends on the Hodge
/// flag, which lives in the refinements layer.
std::vector<Triangulation> enumerate_triangulations(const TriangModule& d);

/// True iff all orderings agree componentwise at every requested embedding.
bool weight_uniform_check(const std::vector<std::map<std::string, std::vector<Rat>>>& orderings,
                          const std::set<std::string>& sigmas);

}  // namespace twc

#endif
