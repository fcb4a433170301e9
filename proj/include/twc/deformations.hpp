#ifndef TWC_DEFORMATIONS_HPP
#define TWC_DEFORMATIONS_HPP

#include "twc/refinements.hpp"
#include "twc/slopes.hpp"

namespace twc {

/// Coordinates of a homomorphism Qp^x -> E: value at p and weight derivative.
struct DeformDirection {
    Rat at_p;
    Rat wtd;

    friend DeformDirection operator+(const DeformDirection& a, const DeformDirection& b)
    {
        return {a.at_p + b.at_p, a.wtd + b.wtd};
    }
    friend DeformDirection operator-(const DeformDirection& a)
    {
        return {-a.at_p, -a.wtd};
    }
    friend bool operator==(const DeformDirection& a, const DeformDirection& b)
    {
        return a.at_p == b.at_p && a.wtd == b.wtd;
    }
};

/// A trianguline self-extension class modelled by its kappa coordinates: one
/// deformation direction per triangulation step. Base field is Qp only.
struct ExtClassModel {
    TriangModule base;  // non-critical crystabelline, regular weights
    Refinement w;
    std::vector<DeformDirection> psis;

    static ExtClassModel make(TriangModule base, Refinement w,
                              std::vector<DeformDirection> psis);
    int n() const { return base.n(); }
};

/// Flattened kappa coordinates (at_p_1, wtd_1, ..., at_p_n, wtd_n).
std::vector<Rat> kappa(const ExtClassModel& c);

/// Baer sum at kappa level: directions add componentwise. Bases and
/// refinements must agree.
ExtClassModel baer_sum(const ExtClassModel& c1, const ExtClassModel& c2);
ExtClassModel negate(const ExtClassModel& c);

/// Deformed Sen polynomial prod (T - (h_i + wtd_i * eps)).
Poly<DualNum> sen_poly_deform(const ExtClassModel& c);

/// Pullback along a program: the base moves, the kappa coordinates do not.
ExtClassModel pullback_ext(const ExtClassModel& c, const Program& program,
                           ProgramMode mode = ProgramMode::Substack);

/// Universal extension attached to an independent list of kappa vectors: a
/// block structure over the chosen basis whose pullback along any class in
/// the span returns exactly that class's coordinates.
class UniversalExt {
public:
    explicit UniversalExt(std::vector<std::vector<Rat>> basis);

    int blocks() const { return static_cast<int>(basis_.size()); }
    const std::vector<std::vector<Rat>>& basis() const { return basis_; }

    /// Pullback along alpha_e for e = sum coeffs_i * basis_i.
    std::vector<Rat> pullback(const std::vector<Rat>& coeffs) const;

    /// Expresses a raw kappa vector in the basis; nullopt if outside the span.
    std::optional<std::vector<Rat>> coordinates(const std::vector<Rat>& raw) const;

private:
    std::vector<std::vector<Rat>> basis_;
};

UniversalExt universal_extension(const std::vector<std::vector<Rat>>& w_vectors);

struct WeightVec {
    std::vector<Rat> v;

    int n() const { return static_cast<int>(v.size()); }
    friend WeightVec operator+(const WeightVec& a, const WeightVec& b);
    friend WeightVec operator-(const WeightVec& a, const WeightVec& b);
    friend bool operator==(const WeightVec& a, const WeightVec& b) { return a.v == b.v; }
};

/// theta = (0, -1, ..., 1-n) and rho = ((n-1)/2, ..., (1-n)/2), so that
/// theta = rho + ((1-n)/2)(1, ..., 1).
std::pair<WeightVec, WeightVec> theta_rho(int n);

/// Coordinate permutation action (w.v)_i = v_{w^{-1}(i)}.
WeightVec permute(const Refinement& w, const WeightVec& v);

/// Dot actions: w.lambda = w(lambda + rho) - rho and the rho-fixing variant
/// w bar-dot lambda = w(lambda - rho) + rho.
WeightVec dot_action(const Refinement& w, const WeightVec& lambda);
WeightVec bar_dot_action(const Refinement& w, const WeightVec& lambda);

Refinement longest_element(int n);  // w_0, the order reversal

struct AdmissibilityReport {
    bool ok = true;
    std::vector<std::string> reasons;
};

/// Admissibility of a translation between chamber coordinates: both inputs
/// must have pairwise distinct entries (off the walls), differ by an integer
/// vector, and order their coordinates the same way (same open chamber).
AdmissibilityReport translation_admissible(const WeightVec& a, const WeightVec& b);

/// Weight difference vector of a program with per-index multiplicities
/// k_1..k_n: (sum_{i>=1} k_i, sum_{i>=2} k_i, ..., k_n). Its reversal is the
/// weight gain h' - h of the program.
WeightVec translation_diff(const std::vector<long long>& multiplicities);

struct IntertwineReport {
    bool ok = false;
    bool regular_before = false;
    bool regular_after = false;
    std::optional<int> violated_gap;  // 1-based position where regularity broke
    bool kappa_identity = false;      // kappa unchanged under pullback, all refinements
    bool diff_consistent = false;     // translation_diff matches apply_program
    bool admissible = false;          // chamber admissibility of lambda, lambda'
    bool kernel_correspondence = false;
    std::string detail;
};

/// Commuting-square shadow of the intertwining theorem: checks, for sampled
/// classes over every refinement, that kappa is unchanged by the program,
/// that the translation weights match the program's weight gain, that the
/// translation is admissible, and that the kernel subspace is carried
/// identically in kappa coordinates.
IntertwineReport intertwine_check(const TriangModule& d, const Program& program,
                                  unsigned long long seed = 0);

}  // namespace twc

#endif
